#include "mz/homology.hpp"

#include "mz/monodromy.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <stdexcept>
#include <thread>

namespace mz {

int StrataBasis::index_of(const CanonicalKey& key) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), key, [](const CanonicalKey& a, const CanonicalKey& b) {
        if (a.num_edges() != b.num_edges())
            return a.num_edges() < b.num_edges();
        return a.splits < b.splits;
    });
    return it != keys.end() && *it == key ? static_cast<int>(it - keys.begin()) : -1;
}

StrataBasis strata_basis(int n, int k) {
    if (k < 0 || k > n - 3)
        throw std::invalid_argument("dimension " + std::to_string(k) + " out of range for " +
                                    std::to_string(n) + " points");
    return StrataBasis{n, k, enumerate_stable_trees(n, k)};
}

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers.
template <class Body>
void parallel_for(int count, int threads, Body body) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (int i; (i = next++) < count;)
                    body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

// All relabelings of synthetic points within their (target, ramification) groups.
std::vector<std::vector<int>> synthetic_permutations(const HurwitzDatum& full) {
    std::vector<char> original(full.num_source(), 0);
    for (int a : full.keep)
        original[a] = 1;
    std::map<std::pair<int, int>, std::vector<int>> groups;
    for (int a = 0; a < full.num_source(); ++a)
        if (!original[a])
            groups[{full.F[a], full.rm[a]}].push_back(a);
    std::vector<int> ident(full.num_source());
    for (int a = 0; a < full.num_source(); ++a)
        ident[a] = a;
    std::vector<std::vector<int>> out{ident};
    for (auto& [key, members] : groups) {
        std::vector<std::vector<int>> next;
        std::vector<int> order = members;
        for (auto& base : out) {
            std::sort(order.begin(), order.end());
            do {
                auto p = base;
                for (std::size_t i = 0; i < members.size(); ++i)
                    p[members[i]] = order[i];
                next.push_back(std::move(p));
            } while (std::next_permutation(order.begin(), order.end()));
        }
        out = std::move(next);
    }
    return out;
}

struct ColumnResult {
    std::map<int, Q> entries;
    std::vector<ExcessTerm> excess;
    std::uint64_t types = 0;
    std::uint64_t dropped = 0;
};

}  // namespace

Pushforward pushforward_matrix(const HurwitzDatum& h, int k, std::optional<int> orbit, int threads) {
    if (auto v = validate_hurwitz_datum(h); !v)
        throw std::invalid_argument("invalid datum: " + v.reason);
    HurwitzDatum full = full_marking(h);
    const LegMask keep = keep_mask(full);
    const int na = popcount(keep);
    if (k < 0 || k > h.num_target() - 3 || k > na - 3)
        throw std::invalid_argument("dimension " + std::to_string(k) + " out of range");

    Pushforward out;
    out.matrix.domain = strata_basis(h.num_target(), k);
    out.matrix.codomain = strata_basis(na, k);
    out.orbit = orbit;

    std::vector<LabeledTuple> classes;
    if (orbit) {
        auto orbits = braid_orbits(full);
        if (*orbit < 0 || *orbit >= static_cast<int>(orbits.size()))
            throw std::invalid_argument("unknown orbit id " + std::to_string(*orbit));
        std::set<int> used;
        for (auto& perm : synthetic_permutations(full)) {
            for (auto& m : orbits[*orbit].members) {
                LabeledTuple t = m;
                for (int a = 0; a < full.num_source(); ++a)
                    t.label[perm[a]] = m.label[a];
                used.insert(orbit_of(orbits, canonical_form(t, full), full));
            }
        }
        out.orbits_used.assign(used.begin(), used.end());
        for (int id : out.orbits_used)
            for (auto& m : orbits[id].members)
                classes.push_back(m);
        out.scale = Q(1, synthetic_relabelings(full));
    }

    const int cols = out.matrix.domain.size();
    std::vector<ColumnResult> results(cols);
    parallel_for(cols, threads, [&](int c) {
        MarkedTree tau = tree_from_key(out.matrix.domain.keys[c]);
        ColumnResult& r = results[c];
        auto add = [&](const TypeKey& type, const Q& coefficient) {
            ++r.types;
            CanonicalKey image = forget_key(type.sigma, keep);
            if (image.dimension() < k || image_dimension_bound(type, keep) < k) {
                ++r.dropped;
            } else if (image.dimension() > k) {
                r.excess.push_back({c, image, type, coefficient});
            } else {
                r.entries[out.matrix.codomain.index_of(image)] += coefficient;
            }
        };
        if (orbit) {
            for (auto& [key, members] : degenerate_classes(tau, full, classes))
                add(key, out.scale * static_cast<long long>(members.size()));
        } else {
            for (auto& wt : enumerate_types_over(tau, full))
                add(type_key(wt.type), Q(static_cast<long long>(wt.weight)));
        }
    });

    out.matrix.entries.assign(out.matrix.codomain.size(), std::vector<Q>(cols, Q(0)));
    for (int c = 0; c < cols; ++c) {
        for (auto& [row, value] : results[c].entries) {
            if (row < 0)
                throw std::logic_error("forgotten stratum missing from the codomain basis");
            out.matrix.entries[row][c] = value;
        }
        for (auto& ex : results[c].excess)
            out.excess.push_back(std::move(ex));
        out.types += results[c].types;
        out.dropped_terms += results[c].dropped;
    }
    return out;
}

std::vector<Q> keel_relation(int n, int i, int j, int k, int l) {
    std::set<int> distinct{i, j, k, l};
    if (distinct.size() != 4)
        throw std::invalid_argument("Keel relation needs four distinct points");
    for (int p : distinct)
        if (p < 0 || p >= n)
            throw std::invalid_argument("Keel relation point out of range");
    StrataBasis divisors = strata_basis(n, n - 4);
    auto separates = [&](LegMask s, int a, int b, int c, int d) {
        auto in = [&](int p) { return (s & leg_bit(p)) != 0; };
        return (in(a) && in(b) && !in(c) && !in(d)) || (!in(a) && !in(b) && in(c) && in(d));
    };
    std::vector<Q> rel(divisors.size(), Q(0));
    for (int s = 0; s < divisors.size(); ++s) {
        LegMask split = divisors.keys[s].splits[0];
        if (separates(split, i, j, k, l))
            rel[s] += 1;
        if (separates(split, i, k, j, l))
            rel[s] -= 1;
    }
    return rel;
}

std::vector<std::vector<Q>> keel_divisor_relations(int n) {
    if (n < 4)
        throw std::invalid_argument("Keel relations need at least 4 points");
    std::vector<std::vector<Q>> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    out.push_back(keel_relation(n, i, j, k, l));
                    out.push_back(keel_relation(n, i, j, l, k));
                }
    return out;
}

int keel_quotient_rank(int n) {
    auto rel = keel_divisor_relations(n);
    return strata_basis(n, n - 4).size() - rank(rel);
}

KernelCheck kernel_invariance_check(const StrataMatrix& m, const std::vector<CanonicalKey>& kernel) {
    if (m.domain.keys != m.codomain.keys)
        throw std::invalid_argument("kernel invariance needs a square matrix on one strata basis");
    std::vector<char> in_kernel(m.domain.size(), 0);
    for (auto& key : kernel) {
        int i = m.domain.index_of(key);
        if (i < 0)
            throw std::invalid_argument("kernel stratum outside the basis");
        in_kernel[i] = 1;
    }
    for (int c = 0; c < m.domain.size(); ++c) {
        if (!in_kernel[c])
            continue;
        for (int r = 0; r < m.codomain.size(); ++r)
            if (!in_kernel[r] && m.entries[r][c] != 0)
                return {false, "kernel column " + std::to_string(c) + " has entry " +
                                   format_rational(m.entries[r][c]) + " at non-kernel row " + std::to_string(r),
                        c, r};
    }
    return {};
}

QMatrix quotient_matrix(const StrataMatrix& m, const std::vector<CanonicalKey>& kernel) {
    std::vector<int> keep;
    for (int i = 0; i < m.domain.size(); ++i)
        if (std::find(kernel.begin(), kernel.end(), m.domain.keys[i]) == kernel.end())
            keep.push_back(i);
    QMatrix out(keep.size(), std::vector<Q>(keep.size(), Q(0)));
    for (std::size_t r = 0; r < keep.size(); ++r)
        for (std::size_t c = 0; c < keep.size(); ++c)
            out[r][c] = m.entries[keep[r]][keep[c]];
    return out;
}

StabilityReport stability_report(const PcfPortrait& p, std::optional<int> heavy_override,
                                 std::optional<int> orbit, int threads, std::optional<Q> epsilon) {
    StabilityReport rep;
    rep.kc = check_kc_criteria(p);
    if (!rep.kc.ok) {
        rep.input_error = true;
        rep.note = "portrait fails the static-polynomial criteria: " + rep.kc.reason;
        return rep;
    }
    const int n = static_cast<int>(p.P.size());
    const int ell = heavy_override.value_or(static_cast<int>(rep.kc.cycle.size()));
    if (!heavy_override && ell == 1) {
        rep.ok = true;
        rep.note = "the fully ramified point is fixed, so the tower base is projective space "
                   "(the holomorphic case); no Hassett reduction is involved";
        return rep;
    }
    if (ell < 2 || ell > n) {
        rep.input_error = true;
        rep.note = "heavy count must lie in [2, " + std::to_string(n) + "]";
        return rep;
    }
    rep.within_theorem = ell == static_cast<int>(rep.kc.cycle.size());
    std::vector<int> order = rep.kc.cycle;
    for (int x = 0; x < n; ++x)
        if (std::find(order.begin(), order.end(), x) == order.end())
            order.push_back(x);
    rep.heavy.assign(order.begin(), order.begin() + ell);
    std::sort(rep.heavy.begin(), rep.heavy.end());
    LegMask heavy = 0;
    for (int x : rep.heavy)
        heavy |= leg_bit(x);
    rep.epsilon = epsilon.value_or(tower_epsilon(n));
    WeightDatum w;
    try {
        w = tower_weight_datum(n, heavy, rep.epsilon);
    } catch (const std::invalid_argument& e) {
        rep.input_error = true;
        rep.note = e.what();
        return rep;
    }

    HurwitzDatum h = pcf_to_hurwitz(p);
    HurwitzDatum full = full_marking(h);
    const int b_inf = p.F[rep.kc.p_inf];
    const LegMask keep = keep_mask(full);

    bool invariant = true;
    for (int k = 0; k <= n - 3; ++k) {
        DegreeReport d;
        d.k = k;
        d.push = pushforward_matrix(h, k, orbit, threads);
        d.kernel = kernel_strata(n, w, k);
        d.invariance = kernel_invariance_check(d.push.matrix, d.kernel);
        if (d.invariance.ok)
            for (auto& ex : d.push.excess) {
                const auto& column = d.push.matrix.domain.keys[ex.column];
                if (std::find(d.kernel.begin(), d.kernel.end(), column) == d.kernel.end())
                    continue;
                if (image_dimension_bound(ex.type, keep, &w) >= k) {
                    d.invariance = {false, "kernel column " + std::to_string(ex.column) +
                                               " has an excess term that survives reduction",
                                    ex.column, -1};
                    break;
                }
            }
        invariant = invariant && d.invariance.ok;
        d.quotient = quotient_matrix(d.push.matrix, d.kernel);
        d.radius = spectral_radius(d.push.matrix.entries);
        d.quotient_radius = spectral_radius(d.quotient);
        rep.degrees.push_back(std::move(d));
    }

    for (int k = 0; k <= n - 3; ++k)
        for (auto& key : enumerate_stable_trees(n, k)) {
            MarkedTree tau = tree_from_key(key);
            for (auto& wt : enumerate_types_over(tau, full)) {
                ++rep.types_checked;
                if (auto v = validate_type(wt.type, full); !v)
                    rep.type_failures.push_back({key, "validate_type", v.reason});
                else if (auto v2 = check_polytopoly(wt.type, full, b_inf); !v2)
                    rep.type_failures.push_back({key, "polytopoly", v2.reason});
                else if (auto v3 = check_claim_factor(wt.type, full, heavy); !v3)
                    rep.type_failures.push_back({key, "claim_factor", v3.reason});
            }
        }

    rep.ok = invariant && rep.type_failures.empty();
    rep.note = "stability on the Hassett space follows from kernel invariance through a descent argument "
               "that is not checked here; compatibility with iteration on the Deligne-Mumford side is also assumed";
    if (!rep.within_theorem)
        rep.note += "; the heavy count differs from the cycle length, so failures do not contradict the theorem";
    return rep;
}

}  // namespace mz
