#include "mz/weights.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mz {

Q WeightDatum::mass(LegMask legs) const {
    Q sum = 0;
    for (int p = 0; p < size(); ++p)
        if (legs & leg_bit(p))
            sum += weights[p];
    return sum;
}

Verdict validate_weight_datum(const WeightDatum& w) {
    Q total = 0;
    for (int p = 0; p < w.size(); ++p) {
        const Q& x = w.weights[p];
        if (x <= 0 || x > 1)
            return Verdict::fail("weight of leg " + std::to_string(p) + " is " + format_rational(x) +
                                 ", outside (0, 1]");
        total += x;
    }
    if (total <= 2)
        return Verdict::fail("total weight " + format_rational(total) + " is not above 2");
    return Verdict::pass();
}

WeightDatum uniform_weights(int n, const Q& value) { return {std::vector<Q>(n, value)}; }

WeightDatum heavy_light_weights(int n, LegMask heavy, const Q& light) {
    WeightDatum w{std::vector<Q>(n, light)};
    for (int p = 0; p < n; ++p)
        if (heavy & leg_bit(p))
            w.weights[p] = 1;
    return w;
}

namespace {

Q capped(const Q& x) { return x > 1 ? Q(1) : x; }

bool flags_very_stable(const std::vector<LegMask>& dirs, const WeightDatum& w) {
    Q sum = 0;
    for (LegMask m : dirs)
        sum += capped(w.mass(m));
    return sum > 2;
}

// Directions of a clustered vertex: its edges, then its clusters.
std::vector<LegMask> clustered_directions(const MarkedTree& t, int v,
                                           const std::vector<LegMask>& sides,
                                           const std::vector<LegMask>& clusters) {
    std::vector<LegMask> dirs;
    for (int e : t.incident_edges(v))
        dirs.push_back(direction_mask(t, v, Flag::edge(e), sides));
    for (LegMask c : clusters)
        dirs.push_back(c);
    return dirs;
}

}  // namespace

bool is_eps_very_stable(const MarkedTree& t, int v, const WeightDatum& w) {
    auto sides = edge_sides(t);
    std::vector<LegMask> dirs;
    for (auto& [fl, mask] : directions(t, v, sides))
        dirs.push_back(mask);
    return flags_very_stable(dirs, w);
}

bool is_heavy_light_very_stable(const MarkedTree& t, int v, LegMask heavy) {
    if (popcount(heavy & t.all_legs()) < 2)
        throw std::invalid_argument("heavy/light datum needs at least two heavy legs");
    auto sides = edge_sides(t);
    int count = 0;
    for (auto& [fl, mask] : directions(t, v, sides))
        if (mask & heavy)
            ++count;
    return count >= 2;
}

ReducedType trivial_reduction(const MarkedTree& t) {
    ReducedType r;
    r.kept_tree = t;
    r.leg_clusters.resize(t.num_vertices());
    r.source_vertex.resize(t.num_vertices());
    for (int v = 0; v < t.num_vertices(); ++v) {
        for (int p : t.legs_at(v))
            r.leg_clusters[v].push_back(leg_bit(p));
        r.source_vertex[v] = v;
        r.image_dimension += t.valence(v) - 3;
    }
    return r;
}

ReducedType reduce(const ReducedType& r, const WeightDatum& w) {
    const MarkedTree& t = r.kept_tree;
    const int nv = t.num_vertices();
    auto sides = edge_sides(t);
    std::vector<char> stable(nv, 0);
    for (int v = 0; v < nv; ++v)
        stable[v] = flags_very_stable(clustered_directions(t, v, sides, r.leg_clusters[v]), w);
    if (std::find(stable.begin(), stable.end(), 1) == stable.end())
        throw std::logic_error("no very stable vertex; weight datum must be invalid");

    // Each component of unstable vertices hangs off exactly one stable vertex.
    std::vector<int> component(nv, -1);
    std::vector<int> attach;
    std::vector<LegMask> component_legs;
    for (int s = 0; s < nv; ++s) {
        if (stable[s] || component[s] >= 0)
            continue;
        const int id = static_cast<int>(attach.size());
        attach.push_back(-1);
        component_legs.push_back(0);
        std::vector<int> stack{s};
        component[s] = id;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int p : t.legs_at(u))
                component_legs[id] |= leg_bit(p);
            for (int e : t.incident_edges(u)) {
                int x = t.other_end(e, u);
                if (stable[x]) {
                    if (attach[id] >= 0 && attach[id] != x)
                        throw std::logic_error("unstable component touches two very stable vertices");
                    if (attach[id] == x)
                        throw std::logic_error("unstable component attached twice");
                    attach[id] = x;
                } else if (component[x] < 0) {
                    component[x] = id;
                    stack.push_back(x);
                }
            }
        }
        if (attach[id] < 0)
            throw std::logic_error("unstable component with no very stable neighbour");
    }

    std::vector<int> fresh(nv, -1);
    ReducedType out;
    int count = 0;
    for (int v = 0; v < nv; ++v)
        if (stable[v]) {
            fresh[v] = count++;
            out.source_vertex.push_back(r.source_vertex[v]);
            out.leg_clusters.push_back(r.leg_clusters[v]);
        }
    std::vector<std::vector<int>> legs(count);
    for (int v = 0; v < nv; ++v) {
        int host = stable[v] ? v : attach[component[v]];
        for (int p : t.legs_at(v))
            legs[fresh[host]].push_back(p);
    }
    for (std::size_t c = 0; c < attach.size(); ++c)
        out.leg_clusters[fresh[attach[c]]].push_back(component_legs[c]);
    std::vector<std::pair<int, int>> edges;
    for (auto [a, b] : t.edges())
        if (stable[a] && stable[b])
            edges.emplace_back(fresh[a], fresh[b]);
    out.kept_tree = MarkedTree(t.num_legs(), std::move(legs), std::move(edges));

    out.image_dimension = 0;
    for (int v = 0; v < count; ++v) {
        auto& cl = out.leg_clusters[v];
        std::sort(cl.begin(), cl.end());
        const int nodes = static_cast<int>(out.kept_tree.incident_edges(v).size());
        Q hassett = nodes;
        for (LegMask c : cl) {
            Q m = w.mass(c);
            if (m > 1)
                throw std::logic_error("coincidence cluster heavier than 1");
            hassett += m;
        }
        if (hassett <= 2)
            throw std::logic_error("kept vertex violates weighted stability");
        out.image_dimension += nodes + static_cast<int>(cl.size()) - 3;
    }
    return out;
}

ReducedType stabilize(const MarkedTree& t, const WeightDatum& w) {
    return reduce(trivial_reduction(t), w);
}

ReducedKey reduced_key(const ReducedType& r) {
    ReducedKey key{canonical_key(r.kept_tree), {}, r.image_dimension};
    for (auto& cl : r.leg_clusters)
        key.clusters.insert(key.clusters.end(), cl.begin(), cl.end());
    std::sort(key.clusters.begin(), key.clusters.end());
    return key;
}

Verdict compose_reductions(const MarkedTree& t, const WeightDatum& w1, const WeightDatum& w2) {
    if (w1.size() != w2.size() || w1.size() != t.num_legs())
        throw std::invalid_argument("weights not comparable: sizes differ");
    for (int p = 0; p < w1.size(); ++p)
        if (w1.weights[p] < w2.weights[p])
            throw std::invalid_argument("weights not comparable at leg " + std::to_string(p));
    auto direct = reduced_key(stabilize(t, w2));
    auto staged = reduced_key(reduce(stabilize(t, w1), w2));
    if (direct == staged)
        return Verdict::pass();
    return Verdict::fail("direct and staged reductions differ");
}

bool is_kernel_stratum(const MarkedTree& t, const WeightDatum& w) {
    auto sides = edge_sides(t);
    for (int v = 0; v < t.num_vertices(); ++v) {
        if (t.valence(v) <= 3)
            continue;
        std::vector<LegMask> dirs;
        for (auto& [fl, mask] : directions(t, v, sides))
            dirs.push_back(mask);
        if (!flags_very_stable(dirs, w))
            return true;
    }
    return false;
}

std::vector<CanonicalKey> kernel_strata(int n, const WeightDatum& w, int k) {
    if (n < 3)
        throw std::invalid_argument("kernel_strata needs at least 3 legs");
    if (k < 0 || k > n - 3)
        throw std::invalid_argument("dimension " + std::to_string(k) + " out of range");
    std::vector<CanonicalKey> out;
    for (auto& key : enumerate_stable_trees(n, k))
        if (is_kernel_stratum(tree_from_key(key), w))
            out.push_back(key);
    return out;
}

Q tower_epsilon(int n) { return Q(2, 2 * n - 3); }

WeightDatum tower_weight_datum(int n, LegMask heavy, const Q& epsilon) {
    if (n < 3)
        throw std::invalid_argument("tower needs at least 3 legs");
    if ((heavy & full_mask(n)) == 0)
        throw std::invalid_argument("tower heavy set is empty");
    if (!(epsilon * (n - 1) > 1 && epsilon * (n - 2) < 1))
        throw std::invalid_argument("epsilon " + format_rational(epsilon) + " outside (1/" +
                                    std::to_string(n - 1) + ", 1/" + std::to_string(n - 2) + ")");
    WeightDatum w = heavy_light_weights(n, heavy, epsilon);
    if (auto v = validate_weight_datum(w); !v)
        throw std::invalid_argument(v.reason);
    return w;
}

}  // namespace mz
