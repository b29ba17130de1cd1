#include "mz/covers.hpp"

#include "mz/weights.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mz {

namespace {

std::vector<LegMask> sorted_directions(const MarkedTree& t, int v, const std::vector<LegMask>& sides) {
    std::vector<LegMask> out;
    for (auto& [fl, mask] : directions(t, v, sides))
        out.push_back(mask);
    std::sort(out.begin(), out.end());
    return out;
}

std::string show(const Partition& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i)
        s += (i ? "," : "") + std::to_string(p[i]);
    return s + ")";
}

}  // namespace

TypeKey type_key(const CombinatorialType& g) {
    TypeKey key;
    key.sigma = canonical_key(g.sigma);
    auto ss = edge_sides(g.sigma);
    auto ts = edge_sides(g.tau);
    const int na = g.sigma.num_legs();
    const int nb = g.tau.num_legs();
    for (int e = 0; e < g.sigma.num_edges(); ++e)
        key.edges.emplace_back(normalize_split(ss[e], na), normalize_split(ts[g.edge_map[e]], nb),
                               g.edge_ramification[e]);
    for (int v = 0; v < g.sigma.num_vertices(); ++v)
        key.vertices.emplace_back(sorted_directions(g.sigma, v, ss),
                                  sorted_directions(g.tau, g.vertex_map[v], ts), g.vertex_degree[v]);
    std::sort(key.edges.begin(), key.edges.end());
    std::sort(key.vertices.begin(), key.vertices.end());
    return key;
}

std::vector<Partition> local_profiles(const CombinatorialType& g, const HurwitzDatum& h, int v) {
    const int w = g.vertex_map[v];
    std::vector<Partition> out;
    for (Flag fl : g.tau.flags(w)) {
        Partition part;
        if (fl.is_edge()) {
            for (int e : g.sigma.incident_edges(v))
                if (g.edge_map[e] == fl.id)
                    part.push_back(g.edge_ramification[e]);
        } else {
            for (int a : g.sigma.legs_at(v))
                if (h.F[a] == fl.id)
                    part.push_back(h.rm[a]);
        }
        out.push_back(normalized(part));
    }
    return out;
}

Verdict validate_type(const CombinatorialType& g, const HurwitzDatum& h) {
    if (!h.fully_marked)
        return Verdict::fail("combinatorial types need a fully marked datum");
    if (auto v = validate_hurwitz_datum(h); !v)
        return Verdict::fail("datum: " + v.reason);
    if (g.sigma.num_legs() != h.num_source() || g.tau.num_legs() != h.num_target())
        return Verdict::fail("tree markings do not match the datum");
    if (auto v = validate_tree(g.sigma); !v)
        return Verdict::fail("source tree: " + v.reason);
    if (auto v = validate_tree(g.tau); !v)
        return Verdict::fail("target tree: " + v.reason);
    const int nv = g.sigma.num_vertices();
    const int ne = g.sigma.num_edges();
    if (static_cast<int>(g.vertex_degree.size()) != nv || static_cast<int>(g.vertex_map.size()) != nv ||
        static_cast<int>(g.edge_map.size()) != ne || static_cast<int>(g.edge_ramification.size()) != ne)
        return Verdict::fail("type tables do not match the source tree");
    for (int v = 0; v < nv; ++v) {
        if (g.vertex_map[v] < 0 || g.vertex_map[v] >= g.tau.num_vertices())
            return Verdict::fail("source vertex " + std::to_string(v) + " maps to no target vertex");
        if (g.vertex_degree[v] < 1)
            return Verdict::fail("source vertex " + std::to_string(v) + " has non-positive degree");
    }
    for (int e = 0; e < ne; ++e) {
        int te = g.edge_map[e];
        if (te < 0 || te >= g.tau.num_edges())
            return Verdict::fail("source edge " + std::to_string(e) + " maps to no target edge");
        auto [x, y] = g.sigma.edge(e);
        auto [u, w] = g.tau.edge(te);
        int fx = g.vertex_map[x], fy = g.vertex_map[y];
        if (!((fx == u && fy == w) || (fx == w && fy == u)))
            return Verdict::fail("adjacency: source edge " + std::to_string(e) +
                                 " does not lie over the ends of target edge " + std::to_string(te));
        int r = g.edge_ramification[e];
        // Ramification above an end degree surfaces as a fiber-profile failure at that end.
        if (r < 1)
            return Verdict::fail("balancing: source edge " + std::to_string(e) + " has ramification " +
                                 std::to_string(r));
    }
    for (int a = 0; a < h.num_source(); ++a) {
        int v = g.sigma.leg_vertex(a);
        if (g.vertex_map[v] != g.tau.leg_vertex(h.F[a]))
            return Verdict::fail("leg " + h.A[a] + " sits over the wrong target vertex");
    }
    std::vector<int> total(g.tau.num_vertices(), 0);
    for (int v = 0; v < nv; ++v)
        total[g.vertex_map[v]] += g.vertex_degree[v];
    for (int w = 0; w < g.tau.num_vertices(); ++w)
        if (total[w] != h.d)
            return Verdict::fail("degree over target vertex " + std::to_string(w) + " is " +
                                 std::to_string(total[w]) + ", not " + std::to_string(h.d));
    for (int v = 0; v < nv; ++v) {
        const int dv = g.vertex_degree[v];
        auto profiles = local_profiles(g, h, v);
        auto tflags = g.tau.flags(g.vertex_map[v]);
        int rh = 0;
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            if (partition_sum(profiles[i]) != dv)
                return Verdict::fail("fiber profile at source vertex " + std::to_string(v) + " over " +
                                     (tflags[i].is_edge() ? "target edge " : "target leg ") +
                                     std::to_string(tflags[i].id) + " is " + show(profiles[i]) +
                                     ", degree is " + std::to_string(dv));
            rh += dv - static_cast<int>(profiles[i].size());
        }
        if (rh != 2 * dv - 2)
            return Verdict::fail("local Riemann-Hurwitz fails at source vertex " + std::to_string(v) +
                                 ": " + std::to_string(rh) + " vs " + std::to_string(2 * dv - 2));
    }
    return Verdict::pass();
}

std::uint64_t type_weight(const CombinatorialType& g, const HurwitzDatum& h) {
    std::uint64_t weight = 1;
    for (int v = 0; v < g.sigma.num_vertices(); ++v) {
        std::uint64_t c = local_cover_count(g.vertex_degree[v], local_profiles(g, h, v));
        if (c == 0)
            return 0;
        weight *= c;
    }
    for (int r : g.edge_ramification)
        weight *= static_cast<std::uint64_t>(r);
    return weight;
}

namespace {

std::vector<Partition> partitions_of(int d) {
    std::vector<Partition> out;
    Partition cur;
    auto rec = [&](auto&& self, int left, int cap) -> void {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int part = std::min(left, cap); part >= 1; --part) {
            cur.push_back(part);
            self(self, left - part, part);
            cur.pop_back();
        }
    };
    rec(rec, d, d);
    return out;
}

// An item over a target flag: a source point, or slot j of a target edge.
struct Item {
    bool slot;
    int id;  // source point, or target edge
    int j;   // slot index
    int rm;
};

struct Group {
    int degree = 0;
    std::vector<Item> items;
};

using Config = std::vector<Group>;

// Local configurations at one target vertex. Flags come in processing order; slots of an
// edge in `broken` with equal ramification are assigned to non-decreasing groups.
std::vector<Config> local_configs(const std::vector<std::vector<Item>>& flag_items,
                                  const std::vector<int>& broken) {
    std::vector<Config> out;
    if (flag_items.empty())
        return out;
    const auto& first = flag_items[0];
    Config groups;
    std::vector<int> assigned;
    auto fill = [&](auto&& self, std::size_t f, std::size_t i, std::vector<int>& left) -> void {
        if (f == flag_items.size()) {
            const int nflags = static_cast<int>(flag_items.size());
            for (auto& g : groups)
                if (nflags * g.degree - static_cast<int>(g.items.size()) != 2 * g.degree - 2)
                    return;
            out.push_back(groups);
            return;
        }
        const auto& items = flag_items[f];
        if (i == 0)
            assigned.assign(items.size(), -1);
        if (i == items.size()) {
            for (int x : left)
                if (x != 0)
                    return;
            std::vector<int> next(groups.size());
            for (std::size_t g = 0; g < groups.size(); ++g)
                next[g] = groups[g].degree;
            auto saved = assigned;
            self(self, f + 1, 0, next);
            assigned = saved;
            return;
        }
        const Item& it = items[i];
        int min_group = 0;
        if (it.slot && i > 0 && items[i - 1].slot && items[i - 1].id == it.id && items[i - 1].rm == it.rm &&
            std::find(broken.begin(), broken.end(), it.id) != broken.end())
            min_group = assigned[i - 1];
        for (int g = min_group; g < static_cast<int>(groups.size()); ++g) {
            if (left[g] < it.rm)
                continue;
            left[g] -= it.rm;
            groups[g].items.push_back(it);
            assigned[i] = g;
            self(self, f, i + 1, left);
            groups[g].items.pop_back();
            left[g] += it.rm;
        }
    };
    // First flag: set partitions by restricted growth strings.
    auto partition_first = [&](auto&& self, std::size_t i) -> void {
        if (i == first.size()) {
            std::vector<int> left(groups.size());
            for (std::size_t g = 0; g < groups.size(); ++g)
                left[g] = groups[g].degree;
            fill(fill, 1, 0, left);
            return;
        }
        for (std::size_t g = 0; g <= groups.size(); ++g) {
            bool fresh = g == groups.size();
            if (fresh)
                groups.push_back(Group{});
            groups[g].degree += first[i].rm;
            groups[g].items.push_back(first[i]);
            self(self, i + 1);
            groups[g].items.pop_back();
            groups[g].degree -= first[i].rm;
            if (fresh)
                groups.pop_back();
        }
    };
    partition_first(partition_first, 0);
    return out;
}

}  // namespace

std::vector<WeightedType> enumerate_types_over(const MarkedTree& tau, const HurwitzDatum& h) {
    if (!h.fully_marked)
        throw std::invalid_argument("enumerate_types_over needs a fully marked datum");
    if (auto v = validate_hurwitz_datum(h); !v)
        throw std::invalid_argument(v.reason);
    if (tau.num_legs() != h.num_target() || !validate_tree(tau) || !is_stable(tau))
        throw std::invalid_argument("target tree must be a stable tree on the target points");

    const int nw = tau.num_vertices();
    const int ne = tau.num_edges();
    const auto parts = partitions_of(h.d);
    std::map<TypeKey, WeightedType> found;

    std::vector<int> lambda_index(ne, 0);
    auto next_lambda = [&]() {
        for (int e = 0; e < ne; ++e) {
            if (++lambda_index[e] < static_cast<int>(parts.size()))
                return true;
            lambda_index[e] = 0;
        }
        return false;
    };
    do {
        // Items per target vertex, legs first so that vertex identities come from points.
        std::vector<std::vector<Config>> menus(nw);
        bool empty = false;
        for (int w = 0; w < nw && !empty; ++w) {
            std::vector<std::vector<Item>> flag_items;
            for (int b : tau.legs_at(w)) {
                std::vector<Item> items;
                for (int a : h.fiber(b))
                    items.push_back({false, a, 0, h.rm[a]});
                flag_items.push_back(std::move(items));
            }
            std::vector<int> broken;
            for (int e : tau.incident_edges(w)) {
                const Partition& lam = parts[lambda_index[e]];
                std::vector<Item> items;
                for (int j = 0; j < static_cast<int>(lam.size()); ++j)
                    items.push_back({true, e, j, lam[j]});
                // Group ids at w are fixed before this flag, so slot order is free to break.
                if (tau.edge(e).first == w && !flag_items.empty())
                    broken.push_back(e);
                flag_items.push_back(std::move(items));
            }
            menus[w] = local_configs(flag_items, broken);
            empty = menus[w].empty();
        }
        if (empty)
            continue;

        std::vector<std::size_t> pick(nw, 0);
        for (;;) {
            // Assemble the source tree from the chosen local configurations.
            std::vector<int> vmap, vdeg;
            std::vector<std::vector<int>> legs;
            std::vector<std::vector<std::pair<int, int>>> slot_at(ne);
            for (int e = 0; e < ne; ++e)
                slot_at[e].assign(parts[lambda_index[e]].size(), {-1, -1});
            for (int w = 0; w < nw; ++w)
                for (auto& g : menus[w][pick[w]]) {
                    int id = static_cast<int>(vmap.size());
                    vmap.push_back(w);
                    vdeg.push_back(g.degree);
                    legs.emplace_back();
                    for (auto& it : g.items) {
                        if (!it.slot) {
                            legs.back().push_back(it.id);
                        } else {
                            auto& s = slot_at[it.id][it.j];
                            (s.first < 0 ? s.first : s.second) = id;
                        }
                    }
                }
            std::vector<std::pair<int, int>> edges;
            std::vector<int> emap, erm;
            for (int e = 0; e < ne; ++e)
                for (std::size_t j = 0; j < slot_at[e].size(); ++j) {
                    edges.push_back(slot_at[e][j]);
                    emap.push_back(e);
                    erm.push_back(parts[lambda_index[e]][j]);
                }
            const int nv = static_cast<int>(vmap.size());
            std::vector<int> root(nv);
            std::iota(root.begin(), root.end(), 0);
            std::function<int(int)> find = [&](int x) { return root[x] == x ? x : root[x] = find(root[x]); };
            int components = nv;
            for (auto [a, b] : edges) {
                int ra = find(a), rb = find(b);
                if (ra != rb) {
                    root[ra] = rb;
                    --components;
                }
            }
            if (components == 1 && static_cast<int>(edges.size()) == nv - 1) {
                CombinatorialType g{MarkedTree(h.num_source(), legs, edges), tau, vdeg, vmap, emap, erm};
                std::uint64_t wgt = type_weight(g, h);
                if (wgt > 0) {
                    auto key = type_key(g);
                    auto [it, inserted] = found.try_emplace(key, WeightedType{g, wgt});
                    if (!inserted && it->second.weight != wgt)
                        throw std::logic_error("isomorphic types with different weights");
                }
            }
            int w = 0;
            for (; w < nw; ++w) {
                if (++pick[w] < menus[w].size())
                    break;
                pick[w] = 0;
            }
            if (w == nw)
                break;
        }
    } while (next_lambda());

    std::vector<WeightedType> out;
    for (auto& [key, wt] : found)
        out.push_back(std::move(wt));
    return out;
}

std::vector<int> planar_order(const MarkedTree& tau) {
    const int n = tau.num_legs();
    const int last = n - 1;
    std::vector<int> order;
    auto dfs = [&](auto&& self, int u, int parent_edge) -> void {
        for (int p : tau.legs_at(u))
            if (p != last)
                order.push_back(p);
        for (int e : tau.incident_edges(u))
            if (e != parent_edge)
                self(self, tau.other_end(e, u), e);
    };
    dfs(dfs, tau.leg_vertex(last), -1);
    order.push_back(last);
    return order;
}

namespace {

// Degenerates a tuple whose positions follow planar_order(tau).
CombinatorialType degenerate(const LabeledTuple& t, const MarkedTree& tau, const HurwitzDatum& h) {
    const int n = tau.num_legs();
    const int d = h.d;
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i)
        pos[t.order[i]] = i;
    auto sides = edge_sides(tau);
    const int root = tau.leg_vertex(n - 1);

    // Parent edge of each vertex when rooted at the last point's vertex.
    std::vector<int> parent_edge(tau.num_vertices(), -1);
    std::vector<int> bfs{root};
    std::vector<char> seen(tau.num_vertices(), 0);
    seen[root] = 1;
    for (std::size_t i = 0; i < bfs.size(); ++i)
        for (int e : tau.incident_edges(bfs[i])) {
            int w = tau.other_end(e, bfs[i]);
            if (!seen[w]) {
                seen[w] = 1;
                parent_edge[w] = e;
                bfs.push_back(w);
            }
        }
    // Monodromy around each target edge: product of its far-from-root interval, in order.
    std::vector<Perm> edge_perm(tau.num_edges());
    for (int e = 0; e < tau.num_edges(); ++e) {
        LegMask below = sides[e];
        if (below & leg_bit(n - 1))
            below = tau.all_legs() & ~below;
        int lo = n, hi = -1;
        for (int b = 0; b < n; ++b)
            if (below & leg_bit(b)) {
                lo = std::min(lo, pos[b]);
                hi = std::max(hi, pos[b]);
            }
        if (hi - lo + 1 != popcount(below))
            throw std::logic_error("target split is not an interval of the planar order");
        Perm g = identity_perm(d);
        for (int i = lo; i <= hi; ++i)
            g = compose(g, t.perms[i]);
        edge_perm[e] = g;
    }
    // Orbits of each vertex's local monodromy group.
    std::vector<std::vector<SheetMask>> orbits(tau.num_vertices());
    for (int u = 0; u < tau.num_vertices(); ++u) {
        std::vector<Perm> gens;
        for (int b : tau.legs_at(u))
            gens.push_back(t.perms[pos[b]]);
        for (int e : tau.incident_edges(u))
            gens.push_back(edge_perm[e]);
        SheetMask left = (1u << d) - 1;
        while (left) {
            SheetMask orb = left & (~left + 1);
            for (bool grew = true; grew;) {
                grew = false;
                for (auto& g : gens) {
                    SheetMask next = orb | image(g, orb);
                    if (next != orb) {
                        orb = next;
                        grew = true;
                    }
                }
            }
            orbits[u].push_back(orb);
            left &= ~orb;
        }
    }
    std::vector<std::vector<int>> vertex_id(tau.num_vertices());
    std::vector<int> vmap, vdeg;
    for (int u = 0; u < tau.num_vertices(); ++u)
        for (SheetMask o : orbits[u]) {
            vertex_id[u].push_back(static_cast<int>(vmap.size()));
            vmap.push_back(u);
            vdeg.push_back(__builtin_popcount(o));
        }
    auto vertex_of = [&](int u, SheetMask s) {
        for (std::size_t k = 0; k < orbits[u].size(); ++k)
            if ((orbits[u][k] & s) == s)
                return vertex_id[u][k];
        throw std::logic_error("sheet set not inside one orbit");
    };
    std::vector<std::pair<int, int>> edges;
    std::vector<int> emap, erm;
    for (int e = 0; e < tau.num_edges(); ++e)
        for (SheetMask c : cycles(edge_perm[e])) {
            auto [x, y] = tau.edge(e);
            edges.emplace_back(vertex_of(x, c), vertex_of(y, c));
            emap.push_back(e);
            erm.push_back(__builtin_popcount(c));
        }
    std::vector<std::vector<int>> legs(vmap.size());
    for (int a = 0; a < h.num_source(); ++a)
        legs[vertex_of(tau.leg_vertex(h.F[a]), t.label[a])].push_back(a);
    return CombinatorialType{MarkedTree(h.num_source(), legs, edges), tau, vdeg, vmap, emap, erm};
}

}  // namespace

std::map<TypeKey, std::vector<int>> degenerate_classes(const MarkedTree& tau, const HurwitzDatum& h,
                                                       const std::vector<LabeledTuple>& classes) {
    std::map<TypeKey, std::vector<int>> out;
    auto order = planar_order(tau);
    for (std::size_t i = 0; i < classes.size(); ++i) {
        LabeledTuple t = classes[i];
        transport(t, order, h);
        out[type_key(degenerate(t, tau, h))].push_back(static_cast<int>(i));
    }
    return out;
}

std::map<TypeKey, std::uint64_t> degenerate_types(const MarkedTree& tau, const HurwitzDatum& h,
                                                  const std::vector<LabeledTuple>* members) {
    std::vector<LabeledTuple> classes;
    if (members) {
        classes = *members;
    } else {
        std::map<std::vector<std::uint32_t>, LabeledTuple> unique;
        for (auto& t : enumerate_labeled_tuples(h)) {
            auto c = canonical_form(t, h);
            unique.emplace(class_key(c, h), std::move(c));
        }
        for (auto& [k, c] : unique)
            classes.push_back(std::move(c));
    }
    std::map<TypeKey, std::uint64_t> out;
    for (auto& [key, list] : degenerate_classes(tau, h, classes))
        out[key] = list.size();
    return out;
}

StaticLocation locate_static(const CombinatorialType& g, const HurwitzDatum& h, int b_inf) {
    if (b_inf < 0 || b_inf >= h.num_target() || h.br[b_inf] != Partition{h.d})
        throw std::invalid_argument("target point is not fully ramified");
    auto fib = h.fiber(b_inf);
    if (fib.size() != 1)
        throw std::invalid_argument("fully ramified point needs exactly one marked preimage");
    StaticLocation loc;
    loc.a_inf = fib[0];
    loc.v_inf = g.sigma.leg_vertex(loc.a_inf);
    loc.w_inf = g.tau.leg_vertex(b_inf);
    return loc;
}

StaticType is_static_poly_type(const CombinatorialType& g, const HurwitzDatum& h, int b_inf) {
    StaticType out;
    out.where = locate_static(g, h, b_inf);
    out.ok = g.vertex_degree[out.where.v_inf] == h.d;
    if (!out.ok)
        out.reason = "vertex carrying the fully ramified point has degree " +
                     std::to_string(g.vertex_degree[out.where.v_inf]);
    return out;
}

namespace {

// Vertices reachable from start without crossing edge `cut`.
std::vector<char> side_of(const MarkedTree& t, int start, int cut) {
    std::vector<char> in(t.num_vertices(), 0);
    std::vector<int> stack{start};
    in[start] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int e : t.incident_edges(u)) {
            if (e == cut)
                continue;
            int w = t.other_end(e, u);
            if (!in[w]) {
                in[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return in;
}

}  // namespace

Verdict check_polytopoly(const CombinatorialType& g, const HurwitzDatum& h, int b_inf) {
    auto st = is_static_poly_type(g, h, b_inf);
    if (!st.ok)
        return Verdict::fail(st.reason);
    const auto& loc = st.where;
    for (int v = 0; v < g.sigma.num_vertices(); ++v) {
        if (v == loc.v_inf)
            continue;
        const int w = g.vertex_map[v];
        const std::string where = "source vertex " + std::to_string(v);
        if (w == loc.w_inf)
            return Verdict::fail(where + " lies over the component of the fully ramified point");
        Flag theta = delta(g.tau, w, Node::leg(b_inf));
        std::vector<int> over;
        for (int e : g.sigma.incident_edges(v))
            if (g.edge_map[e] == theta.id)
                over.push_back(e);
        if (over.size() != 1)
            return Verdict::fail(where + " has " + std::to_string(over.size()) +
                                 " flags over the node toward the fully ramified point");
        const int eta = over[0];
        if (delta(g.sigma, v, Node::vertex(loc.v_inf)) != Flag::edge(eta))
            return Verdict::fail(where + ": the flag over that node does not lead to the fully ramified vertex");
        if (g.edge_ramification[eta] != g.vertex_degree[v])
            return Verdict::fail(where + " is not fully ramified at that node");
        auto Y = side_of(g.tau, loc.w_inf, theta.id);
        auto X = side_of(g.sigma, loc.v_inf, eta);
        for (int u = 0; u < g.sigma.num_vertices(); ++u)
            if (Y[g.vertex_map[u]] && !X[u])
                return Verdict::fail(where + ": source vertex " + std::to_string(u) +
                                     " lies over the far side but not beyond the node");
    }
    return Verdict::pass();
}

Verdict check_claim_factor(const CombinatorialType& g, const HurwitzDatum& h, LegMask heavy_B) {
    bool has_static = false;
    for (int b = 0; b < h.num_target(); ++b)
        if ((heavy_B & leg_bit(b)) && h.br[b] == Partition{h.d})
            has_static = true;
    if (!has_static)
        throw std::invalid_argument("heavy target points must include a fully ramified point");
    LegMask keep = keep_mask(h);
    LegMask heavy_A = 0;
    for (int a = 0; a < h.num_source(); ++a)
        if ((keep & leg_bit(a)) && (heavy_B & leg_bit(h.F[a])))
            heavy_A |= leg_bit(a);
    if (popcount(heavy_B) < 2 || popcount(heavy_A) < 2)
        throw std::invalid_argument("heavy sets need at least two points on each side");
    for (int w = 0; w < g.tau.num_vertices(); ++w) {
        if (is_heavy_light_very_stable(g.tau, w, heavy_B))
            continue;
        for (int v = 0; v < g.sigma.num_vertices(); ++v)
            if (g.vertex_map[v] == w && is_heavy_light_very_stable(g.sigma, v, heavy_A))
                return Verdict::fail("target vertex " + std::to_string(w) +
                                     " is not very stable but source vertex " + std::to_string(v) +
                                     " over it is");
    }
    return Verdict::pass();
}

StratumClass source_stratum_class(const CombinatorialType& g, LegMask keep) {
    auto key = canonical_key(forget_legs(g.sigma, keep));
    return {key, key.dimension()};
}

LegMask keep_mask(const HurwitzDatum& h) {
    if (h.keep.empty())
        return full_mask(h.num_source());
    LegMask m = 0;
    for (int a : h.keep)
        m |= leg_bit(a);
    return m;
}

int image_dimension_bound(const TypeKey& key, LegMask keep, const WeightDatum* kept_weights) {
    std::map<std::vector<LegMask>, std::pair<int, int>> per_target;  // md(w), surviving moduli
    for (auto& [source_dirs, target_dirs, degree] : key.vertices) {
        auto& slot = per_target[target_dirs];
        slot.first = static_cast<int>(target_dirs.size()) - 3;
        std::vector<LegMask> kept;
        for (LegMask m : source_dirs)
            if (m & keep)
                kept.push_back(compress_mask(m, keep));
        if (kept.size() < 3)
            continue;
        if (kept_weights) {
            Q total = 0;
            for (LegMask m : kept)
                total += std::min(Q(1), kept_weights->mass(m));
            if (total <= 2)
                continue;
        }
        slot.second += static_cast<int>(kept.size()) - 3;
    }
    int bound = 0;
    for (auto& [dirs, dims] : per_target)
        bound += std::min(dims.first, dims.second);
    return bound;
}

}  // namespace mz
