#pragma once

#include "mz/rational.hpp"
#include "mz/tree.hpp"
#include "mz/verdict.hpp"

#include <vector>

namespace mz {

struct WeightDatum {
    std::vector<Q> weights;

    int size() const { return static_cast<int>(weights.size()); }
    Q mass(LegMask legs) const;
};

/// A tree whose legs are grouped into coincidence clusters at their vertices.
struct ReducedType {
    MarkedTree kept_tree;
    /// Per kept vertex, the leg clusters landing there; singletons for legs never contracted.
    std::vector<std::vector<LegMask>> leg_clusters;
    /// Vertex of the input tree behind each kept vertex.
    std::vector<int> source_vertex;
    int image_dimension = 0;
};

/// Order-sensitive identity of a reduction: kept splits, all clusters, image dimension.
struct ReducedKey {
    CanonicalKey kept;
    std::vector<LegMask> clusters;
    int image_dimension;
    auto operator<=>(const ReducedKey&) const = default;
};

Verdict validate_weight_datum(const WeightDatum& w);

WeightDatum uniform_weights(int n, const Q& value);
WeightDatum heavy_light_weights(int n, LegMask heavy, const Q& light);

bool is_eps_very_stable(const MarkedTree& t, int v, const WeightDatum& w);

/// Shortcut for heavy/light data: at least two flags lead toward heavy legs.
bool is_heavy_light_very_stable(const MarkedTree& t, int v, LegMask heavy);

ReducedType trivial_reduction(const MarkedTree& t);

/// Reduce an already clustered tree further; stabilize is this applied to trivial_reduction.
ReducedType reduce(const ReducedType& r, const WeightDatum& w);
ReducedType stabilize(const MarkedTree& t, const WeightDatum& w);

ReducedKey reduced_key(const ReducedType& r);

/// Needs w1 >= w2 pointwise. Compares stabilize(t, w2) with reduce(stabilize(t, w1), w2).
Verdict compose_reductions(const MarkedTree& t, const WeightDatum& w1, const WeightDatum& w2);

/// k-dimensional strata with a positive-dimensional vertex that is not very stable.
std::vector<CanonicalKey> kernel_strata(int n, const WeightDatum& w, int k);
bool is_kernel_stratum(const MarkedTree& t, const WeightDatum& w);

/// Weight 1 on heavy, epsilon elsewhere, with 1/(n-1) < epsilon < 1/(n-2).
WeightDatum tower_weight_datum(int n, LegMask heavy, const Q& epsilon);

/// The mediant 2/(2n-3) of the window ends; always strictly inside.
Q tower_epsilon(int n);

}  // namespace mz
