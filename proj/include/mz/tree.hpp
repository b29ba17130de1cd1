#pragma once

#include "mz/verdict.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace mz {

/// Bit p set means leg p. Trees carry at most 64 legs.
using LegMask = std::uint64_t;
inline constexpr int kMaxLegs = 64;

inline LegMask leg_bit(int p) { return LegMask{1} << p; }
inline LegMask full_mask(int n) { return n == kMaxLegs ? ~LegMask{0} : (leg_bit(n) - 1); }
inline int popcount(LegMask m) { return __builtin_popcountll(m); }

struct Flag {
    enum class Kind : std::uint8_t { edge, leg };
    Kind kind;
    int id;

    static Flag edge(int e) { return {Kind::edge, e}; }
    static Flag leg(int p) { return {Kind::leg, p}; }
    bool is_edge() const { return kind == Kind::edge; }
    auto operator<=>(const Flag&) const = default;
};

/// A vertex or a leg, used as the far end of a path.
struct Node {
    enum class Kind : std::uint8_t { vertex, leg };
    Kind kind;
    int id;

    static Node vertex(int v) { return {Kind::vertex, v}; }
    static Node leg(int p) { return {Kind::leg, p}; }
    auto operator<=>(const Node&) const = default;
};

/// Vertices are 0..V-1 and edges 0..E-1; both ids are local to one tree and never serialized.
/// The raw per-vertex leg lists are stored as given so that validate_tree can report
/// duplicated or missing legs.
class MarkedTree {
public:
    MarkedTree() = default;
    MarkedTree(int num_legs, std::vector<std::vector<int>> legs_at,
               std::vector<std::pair<int, int>> edges);

    static MarkedTree from_leg_vertex(int num_vertices, std::vector<int> leg_vertex,
                                      std::vector<std::pair<int, int>> edges);
    static MarkedTree single_vertex(int num_legs);

    int num_vertices() const { return static_cast<int>(legs_at_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_legs() const { return num_legs_; }
    LegMask all_legs() const { return full_mask(num_legs_); }

    const std::pair<int, int>& edge(int e) const { return edges_[e]; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    int other_end(int e, int v) const { return edges_[e].first == v ? edges_[e].second : edges_[e].first; }

    /// -1 when the leg is attached nowhere.
    int leg_vertex(int p) const { return leg_vertex_[p]; }
    const std::vector<int>& legs_at(int v) const { return legs_at_[v]; }
    const std::vector<int>& incident_edges(int v) const { return incident_[v]; }

    /// Incident edges in id order, then attached legs in id order.
    std::vector<Flag> flags(int v) const;
    int valence(int v) const {
        return static_cast<int>(incident_[v].size() + legs_at_[v].size());
    }

private:
    int num_legs_ = 0;
    std::vector<std::vector<int>> legs_at_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> incident_;
    std::vector<int> leg_vertex_;
};

/// The legs of each edge's bipartition. Only meaningful on valid trees.
struct CanonicalKey {
    int num_legs = 0;
    /// Each split is stored as the side not containing leg 0; sorted ascending.
    std::vector<LegMask> splits;

    int num_edges() const { return static_cast<int>(splits.size()); }
    int dimension() const { return num_legs - 3 - num_edges(); }
    auto operator<=>(const CanonicalKey&) const = default;
};

Verdict validate_tree(const MarkedTree& t);

int moduli_dimension(const MarkedTree& t, int v);

bool is_stable(const MarkedTree& t);

/// First flag on the unique path from v to target.
Flag delta(const MarkedTree& t, int v, Node target);

/// True iff deleting edge e puts x and y in different components.
bool edge_connects(const MarkedTree& t, int e, Node x, Node y);

int stratum_dimension(const MarkedTree& t);

/// side[e] is the set of legs reachable from edge(e).second without crossing e.
std::vector<LegMask> edge_sides(const MarkedTree& t);

/// Legs lying beyond flag fl as seen from v.
LegMask direction_mask(const MarkedTree& t, int v, Flag fl, const std::vector<LegMask>& sides);

std::vector<std::pair<Flag, LegMask>> directions(const MarkedTree& t, int v,
                                                 const std::vector<LegMask>& sides);

LegMask normalize_split(LegMask side, int num_legs);

CanonicalKey canonical_key(const MarkedTree& t);

/// Vertex 0 holds leg 0; vertex i+1 sits below splits[i] and edge i carries splits[i].
MarkedTree tree_from_key(const CanonicalKey& key);

bool splits_compatible(LegMask a, LegMask b);

std::vector<CanonicalKey> enumerate_stable_trees(int num_legs, std::optional<int> dimension = {});

MarkedTree contract_edges(const MarkedTree& t, const std::vector<int>& edges);

/// Keep-marked tree with legs renumbered by ascending original index.
MarkedTree forget_legs(const MarkedTree& t, LegMask keep);
CanonicalKey forget_key(const CanonicalKey& key, LegMask keep);

/// Compress the bits of mask selected by keep into consecutive low bits.
LegMask compress_mask(LegMask mask, LegMask keep);

/// Legs of each split as index lists, the form used in reports.
std::vector<std::vector<int>> key_as_lists(const CanonicalKey& key);

}  // namespace mz
