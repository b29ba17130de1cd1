#include "mz/tree.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mz {

MarkedTree::MarkedTree(int num_legs, std::vector<std::vector<int>> legs_at,
                       std::vector<std::pair<int, int>> edges)
    : num_legs_(num_legs), legs_at_(std::move(legs_at)), edges_(std::move(edges)) {
    if (num_legs < 0 || num_legs > kMaxLegs)
        throw std::invalid_argument("leg count out of range: " + std::to_string(num_legs));
    const int nv = num_vertices();
    incident_.assign(nv, {});
    for (int e = 0; e < num_edges(); ++e) {
        auto [a, b] = edges_[e];
        if (a < 0 || a >= nv || b < 0 || b >= nv)
            throw std::invalid_argument("edge " + std::to_string(e) + " names an unknown vertex");
        incident_[a].push_back(e);
        if (b != a)
            incident_[b].push_back(e);
    }
    leg_vertex_.assign(num_legs, -1);
    for (int v = 0; v < nv; ++v) {
        for (int p : legs_at_[v]) {
            if (p < 0 || p >= num_legs)
                throw std::invalid_argument("leg " + std::to_string(p) + " outside the marking set");
            if (leg_vertex_[p] < 0)
                leg_vertex_[p] = v;
        }
        std::sort(legs_at_[v].begin(), legs_at_[v].end());
    }
}

MarkedTree MarkedTree::from_leg_vertex(int num_vertices, std::vector<int> leg_vertex,
                                       std::vector<std::pair<int, int>> edges) {
    std::vector<std::vector<int>> legs(num_vertices);
    for (int p = 0; p < static_cast<int>(leg_vertex.size()); ++p) {
        int v = leg_vertex[p];
        if (v < 0 || v >= num_vertices)
            throw std::invalid_argument("leg " + std::to_string(p) + " attached to unknown vertex");
        legs[v].push_back(p);
    }
    return MarkedTree(static_cast<int>(leg_vertex.size()), std::move(legs), std::move(edges));
}

MarkedTree MarkedTree::single_vertex(int num_legs) {
    std::vector<int> all(num_legs);
    std::iota(all.begin(), all.end(), 0);
    return MarkedTree(num_legs, {all}, {});
}

std::vector<Flag> MarkedTree::flags(int v) const {
    std::vector<Flag> out;
    out.reserve(valence(v));
    for (int e : incident_[v])
        out.push_back(Flag::edge(e));
    for (int p : legs_at_[v])
        out.push_back(Flag::leg(p));
    return out;
}

Verdict validate_tree(const MarkedTree& t) {
    const int nv = t.num_vertices();
    if (nv == 0)
        return Verdict::fail("disconnected: tree has no vertices");
    for (int e = 0; e < t.num_edges(); ++e)
        if (t.edge(e).first == t.edge(e).second)
            return Verdict::fail("cyclic: edge " + std::to_string(e) + " is a self-loop at vertex " +
                                 std::to_string(t.edge(e).first));
    std::vector<int> seen(t.num_legs(), 0);
    for (int v = 0; v < nv; ++v)
        for (int p : t.legs_at(v))
            if (++seen[p] > 1)
                return Verdict::fail("duplicated leg " + std::to_string(p));
    for (int p = 0; p < t.num_legs(); ++p)
        if (seen[p] == 0)
            return Verdict::fail("missing leg " + std::to_string(p));

    std::vector<int> comp(nv, -1);
    std::vector<int> parent_edge(nv, -1);
    int components = 0;
    for (int s = 0; s < nv; ++s) {
        if (comp[s] >= 0)
            continue;
        std::deque<int> queue{s};
        comp[s] = components;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int e : t.incident_edges(u)) {
                if (e == parent_edge[u])
                    continue;
                int w = t.other_end(e, u);
                if (comp[w] >= 0)
                    return Verdict::fail("cyclic: edge " + std::to_string(e) + " closes a cycle");
                comp[w] = components;
                parent_edge[w] = e;
                queue.push_back(w);
            }
        }
        ++components;
    }
    if (components > 1) {
        for (int v = 0; v < nv; ++v)
            if (comp[v] != 0)
                return Verdict::fail("disconnected: vertex " + std::to_string(v) +
                                     " unreachable from vertex 0");
    }
    return Verdict::pass();
}

int moduli_dimension(const MarkedTree& t, int v) {
    if (v < 0 || v >= t.num_vertices())
        throw std::invalid_argument("unknown vertex " + std::to_string(v));
    return t.valence(v) - 3;
}

bool is_stable(const MarkedTree& t) {
    for (int v = 0; v < t.num_vertices(); ++v)
        if (t.valence(v) < 3)
            return false;
    return true;
}

namespace {

// First edge on the path from each vertex toward `root`; -1 at root.
std::vector<int> toward(const MarkedTree& t, int root) {
    std::vector<int> first(t.num_vertices(), -2);
    first[root] = -1;
    std::deque<int> queue{root};
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int e : t.incident_edges(u)) {
            int w = t.other_end(e, u);
            if (first[w] != -2)
                continue;
            first[w] = e;
            queue.push_back(w);
        }
    }
    return first;
}

int node_vertex(const MarkedTree& t, Node x) {
    if (x.kind == Node::Kind::vertex) {
        if (x.id < 0 || x.id >= t.num_vertices())
            throw std::invalid_argument("unknown vertex " + std::to_string(x.id));
        return x.id;
    }
    if (x.id < 0 || x.id >= t.num_legs() || t.leg_vertex(x.id) < 0)
        throw std::invalid_argument("unknown leg " + std::to_string(x.id));
    return t.leg_vertex(x.id);
}

}  // namespace

Flag delta(const MarkedTree& t, int v, Node target) {
    if (v < 0 || v >= t.num_vertices())
        throw std::invalid_argument("unknown vertex " + std::to_string(v));
    int goal = node_vertex(t, target);
    if (target.kind == Node::Kind::leg && goal == v)
        return Flag::leg(target.id);
    if (goal == v)
        throw std::invalid_argument("delta toward the vertex itself");
    // BFS from the goal gives, at v, the edge heading to the goal.
    auto first = toward(t, goal);
    if (first[v] < 0)
        throw std::invalid_argument("target unreachable");
    return Flag::edge(first[v]);
}

bool edge_connects(const MarkedTree& t, int e, Node x, Node y) {
    if (e < 0 || e >= t.num_edges())
        throw std::invalid_argument("unknown edge " + std::to_string(e));
    int a = node_vertex(t, x);
    int b = node_vertex(t, y);
    std::vector<char> reached(t.num_vertices(), 0);
    std::deque<int> queue{a};
    reached[a] = 1;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int f : t.incident_edges(u)) {
            if (f == e)
                continue;
            int w = t.other_end(f, u);
            if (!reached[w]) {
                reached[w] = 1;
                queue.push_back(w);
            }
        }
    }
    return !reached[b];
}

int stratum_dimension(const MarkedTree& t) {
    if (!is_stable(t))
        throw std::invalid_argument("stratum_dimension needs a stable tree");
    int sum = 0;
    for (int v = 0; v < t.num_vertices(); ++v)
        sum += t.valence(v) - 3;
    return sum;
}

std::vector<LegMask> edge_sides(const MarkedTree& t) {
    const int nv = t.num_vertices();
    std::vector<LegMask> sides(t.num_edges(), 0);
    if (nv == 0)
        return sides;
    // Root at vertex 0; subtree masks by reverse BFS order.
    std::vector<int> order;
    std::vector<int> up(nv, -1);
    std::vector<char> seen(nv, 0);
    order.push_back(0);
    seen[0] = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        int u = order[i];
        for (int e : t.incident_edges(u)) {
            int w = t.other_end(e, u);
            if (seen[w])
                continue;
            seen[w] = 1;
            up[w] = e;
            order.push_back(w);
        }
    }
    std::vector<LegMask> below(nv, 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int u = *it;
        for (int p : t.legs_at(u))
            below[u] |= leg_bit(p);
        if (up[u] >= 0) {
            int e = up[u];
            int parent = t.other_end(e, u);
            below[parent] |= below[u];
            sides[e] = (t.edge(e).second == u) ? below[u] : (t.all_legs() & ~below[u]);
        }
    }
    return sides;
}

LegMask direction_mask(const MarkedTree& t, int v, Flag fl, const std::vector<LegMask>& sides) {
    if (!fl.is_edge())
        return leg_bit(fl.id);
    return t.edge(fl.id).first == v ? sides[fl.id] : (t.all_legs() & ~sides[fl.id]);
}

std::vector<std::pair<Flag, LegMask>> directions(const MarkedTree& t, int v,
                                                 const std::vector<LegMask>& sides) {
    std::vector<std::pair<Flag, LegMask>> out;
    for (Flag fl : t.flags(v))
        out.emplace_back(fl, direction_mask(t, v, fl, sides));
    return out;
}

LegMask normalize_split(LegMask side, int num_legs) {
    return (side & 1) ? (full_mask(num_legs) & ~side) : side;
}

CanonicalKey canonical_key(const MarkedTree& t) {
    CanonicalKey key;
    key.num_legs = t.num_legs();
    for (LegMask s : edge_sides(t))
        key.splits.push_back(normalize_split(s, t.num_legs()));
    std::sort(key.splits.begin(), key.splits.end());
    return key;
}

MarkedTree tree_from_key(const CanonicalKey& key) {
    const int n = key.num_legs;
    const int m = key.num_edges();
    auto parent_of = [&](LegMask s) {
        int best = -1;
        for (int j = 0; j < m; ++j) {
            LegMask t = key.splits[j];
            if (t != s && (s & t) == s && (best < 0 || popcount(t) < popcount(key.splits[best])))
                best = j;
        }
        return best + 1;
    };
    std::vector<std::pair<int, int>> edges;
    edges.reserve(m);
    for (int i = 0; i < m; ++i)
        edges.emplace_back(parent_of(key.splits[i]), i + 1);
    std::vector<int> leg_vertex(n, 0);
    for (int p = 0; p < n; ++p) {
        int best = -1;
        for (int j = 0; j < m; ++j)
            if ((key.splits[j] & leg_bit(p)) &&
                (best < 0 || popcount(key.splits[j]) < popcount(key.splits[best])))
                best = j;
        leg_vertex[p] = best + 1;
    }
    return MarkedTree::from_leg_vertex(m + 1, std::move(leg_vertex), std::move(edges));
}

bool splits_compatible(LegMask a, LegMask b) {
    return (a & b) == 0 || (a & b) == a || (a & b) == b;
}

std::vector<CanonicalKey> enumerate_stable_trees(int num_legs, std::optional<int> dimension) {
    if (num_legs < 3)
        throw std::invalid_argument("enumerate_stable_trees needs at least 3 legs");
    if (num_legs > 20)
        throw std::invalid_argument("enumerate_stable_trees is limited to 20 legs");
    const LegMask rest = full_mask(num_legs) & ~LegMask{1};
    std::vector<LegMask> candidates;
    for (LegMask s = rest; s; s = (s - 1) & rest) {
        int c = popcount(s);
        if (c >= 2 && c <= num_legs - 2)
            candidates.push_back(s);
    }
    std::sort(candidates.begin(), candidates.end());

    std::vector<CanonicalKey> out;
    std::vector<LegMask> chosen;
    const int max_edges = num_legs - 3;
    std::optional<int> want_edges;
    if (dimension) {
        if (*dimension < 0 || *dimension > max_edges)
            return out;
        want_edges = max_edges - *dimension;
    }
    auto recurse = [&](auto&& self, std::size_t start) -> void {
        if (!want_edges || static_cast<int>(chosen.size()) == *want_edges)
            out.push_back(CanonicalKey{num_legs, chosen});
        if (want_edges && static_cast<int>(chosen.size()) >= *want_edges)
            return;
        for (std::size_t i = start; i < candidates.size(); ++i) {
            LegMask s = candidates[i];
            bool ok = true;
            for (LegMask c : chosen)
                if (!splits_compatible(c, s)) {
                    ok = false;
                    break;
                }
            if (!ok)
                continue;
            chosen.push_back(s);
            self(self, i + 1);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0);
    std::sort(out.begin(), out.end(), [](const CanonicalKey& a, const CanonicalKey& b) {
        if (a.num_edges() != b.num_edges())
            return a.num_edges() < b.num_edges();
        return a.splits < b.splits;
    });
    return out;
}

MarkedTree contract_edges(const MarkedTree& t, const std::vector<int>& edges) {
    const int nv = t.num_vertices();
    std::vector<int> root(nv);
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](int x) {
        while (root[x] != x)
            x = root[x] = root[root[x]];
        return x;
    };
    std::vector<char> gone(t.num_edges(), 0);
    for (int e : edges) {
        if (e < 0 || e >= t.num_edges())
            throw std::invalid_argument("unknown edge " + std::to_string(e));
        gone[e] = 1;
        int a = find(t.edge(e).first), b = find(t.edge(e).second);
        if (a != b)
            root[std::max(a, b)] = std::min(a, b);
    }
    std::vector<int> fresh(nv, -1);
    int count = 0;
    for (int v = 0; v < nv; ++v) {
        int r = find(v);
        if (fresh[r] < 0)
            fresh[r] = count++;
        fresh[v] = fresh[r];
    }
    std::vector<std::vector<int>> legs(count);
    for (int v = 0; v < nv; ++v)
        for (int p : t.legs_at(v))
            legs[fresh[v]].push_back(p);
    std::vector<std::pair<int, int>> kept;
    for (int e = 0; e < t.num_edges(); ++e)
        if (!gone[e])
            kept.emplace_back(fresh[t.edge(e).first], fresh[t.edge(e).second]);
    return MarkedTree(t.num_legs(), std::move(legs), std::move(kept));
}

LegMask compress_mask(LegMask mask, LegMask keep) {
    LegMask out = 0;
    int bit = 0;
    for (int p = 0; p < kMaxLegs; ++p) {
        if (!(keep & leg_bit(p)))
            continue;
        if (mask & leg_bit(p))
            out |= leg_bit(bit);
        ++bit;
    }
    return out;
}

namespace {

CanonicalKey restrict_splits(const std::vector<LegMask>& sides, int num_legs, LegMask keep) {
    keep &= full_mask(num_legs);
    const int k = popcount(keep);
    if (k < 3)
        throw std::invalid_argument("forget_legs needs at least 3 kept legs");
    CanonicalKey key;
    key.num_legs = k;
    for (LegMask s : sides) {
        LegMask r = s & keep;
        int c = popcount(r);
        if (c < 2 || c > k - 2)
            continue;
        key.splits.push_back(normalize_split(compress_mask(r, keep), k));
    }
    std::sort(key.splits.begin(), key.splits.end());
    key.splits.erase(std::unique(key.splits.begin(), key.splits.end()), key.splits.end());
    return key;
}

}  // namespace

CanonicalKey forget_key(const CanonicalKey& key, LegMask keep) {
    return restrict_splits(key.splits, key.num_legs, keep);
}

MarkedTree forget_legs(const MarkedTree& t, LegMask keep) {
    // A vertex survives exactly when three of its flags lead to kept legs; the surviving
    // vertices and the paths between them carry the restricted splits.
    return tree_from_key(restrict_splits(edge_sides(t), t.num_legs(), keep));
}

std::vector<std::vector<int>> key_as_lists(const CanonicalKey& key) {
    std::vector<std::vector<int>> out;
    for (LegMask s : key.splits) {
        std::vector<int> legs;
        for (int p = 0; p < key.num_legs; ++p)
            if (s & leg_bit(p))
                legs.push_back(p);
        out.push_back(std::move(legs));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace mz
