#pragma once

#include "mz/hurwitz.hpp"
#include "mz/monodromy.hpp"
#include "mz/tree.hpp"
#include "mz/verdict.hpp"
#include "mz/weights.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mz {

/// Discrete data of an admissible cover: sigma is marked by the fully marked source points,
/// tau by the target points.
struct CombinatorialType {
    MarkedTree sigma;
    MarkedTree tau;
    std::vector<int> vertex_degree;
    std::vector<int> vertex_map;
    std::vector<int> edge_map;
    std::vector<int> edge_ramification;
};

/// Isomorphism-invariant identity of a type.
struct TypeKey {
    CanonicalKey sigma;
    /// (source split, target split, ramification) per source edge.
    std::vector<std::tuple<LegMask, LegMask, int>> edges;
    /// (source direction sides, target direction sides, degree) per source vertex.
    std::vector<std::tuple<std::vector<LegMask>, std::vector<LegMask>, int>> vertices;
    auto operator<=>(const TypeKey&) const = default;
};

struct WeightedType {
    CombinatorialType type;
    std::uint64_t weight = 0;
};

TypeKey type_key(const CombinatorialType& g);

/// Multisets of ramification of v's flags lying over each flag of its target vertex,
/// in the order of tau.flags(vertex_map[v]).
std::vector<Partition> local_profiles(const CombinatorialType& g, const HurwitzDatum& h, int v);

Verdict validate_type(const CombinatorialType& g, const HurwitzDatum& h);

/// Product of local cover counts times the product of edge ramifications.
std::uint64_t type_weight(const CombinatorialType& g, const HurwitzDatum& h);

/// All types over tau with positive weight, ordered by type key.
std::vector<WeightedType> enumerate_types_over(const MarkedTree& tau, const HurwitzDatum& h);

/// Types reached by degenerating labeled tuples toward tau, with their class counts.
/// When `members` is given only those (canonical, label-ordered) tuples are degenerated;
/// otherwise every labeled tuple is, and the counts are divided by d!.
std::map<TypeKey, std::uint64_t> degenerate_types(const MarkedTree& tau, const HurwitzDatum& h,
                                                  const std::vector<LabeledTuple>* members = nullptr);
std::map<TypeKey, std::vector<int>> degenerate_classes(const MarkedTree& tau, const HurwitzDatum& h,
                                                       const std::vector<LabeledTuple>& classes);

/// Target points ordered so that every split of tau is an interval avoiding the last point.
std::vector<int> planar_order(const MarkedTree& tau);

struct StaticLocation {
    int a_inf = -1;
    int v_inf = -1;
    int w_inf = -1;
};

/// Throws when b_inf is not fully ramified in h.
StaticLocation locate_static(const CombinatorialType& g, const HurwitzDatum& h, int b_inf);

/// Location of the fully ramified point, with a note when its vertex is not of full degree.
struct StaticType {
    bool ok = false;
    StaticLocation where;
    std::string reason;
};
StaticType is_static_poly_type(const CombinatorialType& g, const HurwitzDatum& h, int b_inf);

Verdict check_polytopoly(const CombinatorialType& g, const HurwitzDatum& h, int b_inf);

/// heavy_B must contain b_inf; heavy source points are the non-synthetic preimages of heavy_B.
Verdict check_claim_factor(const CombinatorialType& g, const HurwitzDatum& h, LegMask heavy_B);

struct StratumClass {
    CanonicalKey key;
    int dimension = 0;
};

/// Forgets the source points outside keep; keep indexes source points.
StratumClass source_stratum_class(const CombinatorialType& g, LegMask keep);

LegMask keep_mask(const HurwitzDatum& h);

/// Upper bound on the dimension of the image of a type's stratum among curves marked by keep:
/// the sum over target vertices w of min(md(w), moduli of the source vertices over w that survive
/// forgetting). With weights on the kept points, only surviving vertices that are very stable count,
/// which bounds the image after reduction instead.
int image_dimension_bound(const TypeKey& key, LegMask keep, const WeightDatum* kept_weights = nullptr);

}  // namespace mz
