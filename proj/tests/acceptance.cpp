// One line per acceptance criterion; exit status is nonzero if any criterion fails.
#include "mz/covers.hpp"
#include "mz/homology.hpp"
#include "mz/job.hpp"
#include "mz/monodromy.hpp"
#include "mz/weights.hpp"

#include "fixtures.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace mz;

namespace {

// Spectral radii of integer matrices are compared to their expected value within this.
constexpr double kRadiusTolerance = 1e-9;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_seconds, const std::function<Outcome()>& body) {
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > budget_seconds) {
        out.pass = false;
        out.detail += " (over the " + std::to_string(budget_seconds) + " s budget)";
    }
    failures += !out.pass;
    std::printf("%s [%d] %s: %s (%.3f s)\n", out.pass ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string read_data(const std::string& name) {
    std::ifstream in(std::string(MZ_TEST_DATA) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Partition> partitions_of(int d) {
    std::vector<Partition> out;
    std::function<void(int, int, Partition&)> rec = [&](int left, int cap, Partition& cur) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(left, cap); p >= 1; --p) {
            cur.push_back(p);
            rec(left - p, p, cur);
            cur.pop_back();
        }
    };
    Partition cur;
    rec(d, d, cur);
    return out;
}

// Static-polynomial data with d <= 3 and |B| <= 5: b0 fully ramified, the other branch profiles a
// nondecreasing sequence of partitions satisfying Riemann-Hurwitz, one marked preimage per target
// point with every choice of its ramification. Only realizable data are kept.
std::vector<HurwitzDatum> static_sweep() {
    std::vector<HurwitzDatum> out;
    for (int d = 1; d <= 3; ++d) {
        auto parts = partitions_of(d);
        for (int n = 3; n <= 5; ++n) {
            std::vector<int> idx(n - 1, 0);
            std::function<void(int, int)> rec = [&](int pos, int from) {
                if (pos == n - 1) {
                    int rh = d - 1;
                    std::vector<Partition> br{{d}};
                    for (int i : idx) {
                        br.push_back(parts[i]);
                        rh += d - static_cast<int>(parts[i].size());
                    }
                    if (rh != 2 * d - 2)
                        return;
                    std::vector<std::vector<int>> choices;
                    for (auto& p : br) {
                        std::vector<int> distinct(p.begin(), p.end());
                        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
                        choices.push_back(distinct);
                    }
                    std::vector<std::size_t> pick(n, 0);
                    while (true) {
                        HurwitzDatum h;
                        h.d = d;
                        h.br = br;
                        for (int b = 0; b < n; ++b) {
                            h.B.push_back("b" + std::to_string(b));
                            h.A.push_back("a" + std::to_string(b));
                            h.F.push_back(b);
                            h.rm.push_back(choices[b][pick[b]]);
                        }
                        h.fully_marked = true;
                        for (int b = 0; b < n; ++b)
                            h.fully_marked = h.fully_marked && h.fiber_profile(b) == h.br[b];
                        HurwitzDatum full = full_marking(h);
                        if (degree_pi_B(full) > 0)
                            out.push_back(h);
                        int k = 0;
                        while (k < n && ++pick[k] == choices[k].size())
                            pick[k++] = 0;
                        if (k == n)
                            break;
                    }
                    return;
                }
                for (int i = from; i < static_cast<int>(parts.size()); ++i) {
                    idx[pos] = i;
                    rec(pos + 1, i);
                }
            };
            rec(0, 0);
        }
    }
    return out;
}

bool is_permutation_matrix(const QMatrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        int ones = 0, cols = 0;
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (m[i][j] != 0 && m[i][j] != 1)
                return false;
            ones += m[i][j] == 1;
            cols += m[j][i] == 1;
        }
        if (ones != 1 || cols != 1)
            return false;
    }
    return true;
}

WeightDatum random_weights_below(std::mt19937& rng, const std::vector<Q>& cap) {
    // Denominator 24 keeps the chains exact and hits many boundary cases of the inequality.
    const int n = static_cast<int>(cap.size());
    while (true) {
        WeightDatum w{std::vector<Q>(n)};
        for (int i = 0; i < n; ++i) {
            int top = static_cast<int>(numerator(Q(cap[i] * 24)));
            w.weights[i] = Q(std::uniform_int_distribution<int>(1, top)(rng), 24);
        }
        if (validate_weight_datum(w).ok)
            return w;
    }
}

}  // namespace

int main() {
    criterion(1, "strata census", 1.0, [] {
        std::map<int, int> five;
        for (auto& k : enumerate_stable_trees(5))
            ++five[k.dimension()];
        auto four = enumerate_stable_trees(4).size();
        bool ok = four == 4 && five == std::map<int, int>{{2, 1}, {1, 10}, {0, 15}};
        return Outcome{ok, "|P|=4: " + std::to_string(four) + ", |P|=5 by dimension 2/1/0: " +
                               std::to_string(five[2]) + "/" + std::to_string(five[1]) + "/" +
                               std::to_string(five[0])};
    });

    criterion(2, "heavy/light shortcut equals the general inequality", 60.0, [] {
        std::uint64_t checked = 0, mismatches = 0;
        for (int n = 3; n <= 7; ++n) {
            auto trees = enumerate_stable_trees(n);
            for (LegMask heavy = 0; heavy <= full_mask(n); ++heavy) {
                int h = popcount(heavy);
                if (h < 2)
                    continue;
                // Light total (n - h) / (n - h + 1) < 1.
                auto w = heavy_light_weights(n, heavy, Q(1, n - h + 1));
                for (auto& key : trees) {
                    auto t = tree_from_key(key);
                    for (int v = 0; v < t.num_vertices(); ++v) {
                        ++checked;
                        mismatches += is_heavy_light_very_stable(t, v, heavy) != is_eps_very_stable(t, v, w);
                    }
                }
            }
        }
        return Outcome{mismatches == 0,
                       std::to_string(checked) + " vertex verdicts, " + std::to_string(mismatches) + " mismatches"};
    });

    criterion(3, "reduction idempotence and composition on random chains", 60.0, [] {
        std::mt19937 rng(20261014);
        std::uint64_t checks = 0, bad = 0;
        for (int n = 4; n <= 6; ++n) {
            auto trees = enumerate_stable_trees(n);
            for (int chain = 0; chain < 100; ++chain) {
                auto w1 = random_weights_below(rng, std::vector<Q>(n, Q(1)));
                auto w2 = random_weights_below(rng, w1.weights);
                auto w3 = random_weights_below(rng, w2.weights);
                for (auto& key : trees) {
                    auto t = tree_from_key(key);
                    for (auto* w : {&w1, &w2, &w3}) {
                        auto r = stabilize(t, *w);
                        ++checks;
                        bad += reduced_key(reduce(r, *w)) != reduced_key(r);
                    }
                    for (auto [a, b] : {std::pair{&w1, &w2}, {&w2, &w3}, {&w1, &w3}}) {
                        ++checks;
                        bad += !compose_reductions(t, *a, *b).ok;
                    }
                }
            }
        }
        return Outcome{bad == 0, std::to_string(checks) + " checks over 300 chains, " + std::to_string(bad) +
                                     " failures"};
    });

    criterion(4, "flatness of the admissible-cover map", 300.0, [] {
        std::string detail;
        bool ok = true;
        for (auto& [name, h] : {std::pair{"d=2 |B|=4", full_marking(fixtures::quadratic_four_point())},
                                 {"d=3 |B|=5", fixtures::cubic_eleven_point()}}) {
            const std::uint64_t degree = degree_pi_B(h);
            const int n = h.num_target();
            int strata = 0, flat = 0;
            for (auto& key : enumerate_stable_trees(n, n - 4)) {
                std::uint64_t sum = 0;
                for (auto& wt : enumerate_types_over(tree_from_key(key), h))
                    sum += wt.weight;
                ++strata;
                flat += sum == degree;
            }
            ok = ok && flat == strata;
            detail += std::string(name) + ": degree " + std::to_string(degree) + ", " + std::to_string(flat) + "/" +
                      std::to_string(strata) + " divisors flat; ";
        }
        ok = ok && degree_pi_B(full_marking(fixtures::quadratic_four_point())) == 2;
        return Outcome{ok, detail};
    });

    criterion(5, "Keel quotient ranks", 1.0, [] {
        int r4 = keel_quotient_rank(4), r5 = keel_quotient_rank(5);
        return Outcome{r4 == 1 && r5 == 5, "|P|=4 rank " + std::to_string(r4) + ", |P|=5 rank " + std::to_string(r5)};
    });

    auto sweep = static_sweep();

    criterion(6, "polytopoly over the static-polynomial sweep", 600.0, [&] {
        std::uint64_t types = 0, counterexamples = 0;
        std::string first;
        for (auto& h : sweep) {
            HurwitzDatum full = full_marking(h);
            for (auto& key : enumerate_stable_trees(full.num_target()))
                for (auto& wt : enumerate_types_over(tree_from_key(key), full)) {
                    ++types;
                    auto v = validate_type(wt.type, full);
                    if (v)
                        v = check_polytopoly(wt.type, full, 0);
                    if (!v) {
                        ++counterexamples;
                        if (first.empty())
                            first = "; first: " + v.reason;
                    }
                }
        }
        return Outcome{counterexamples == 0 && types > 0,
                       std::to_string(sweep.size()) + " data, " + std::to_string(types) + " types, " +
                           std::to_string(counterexamples) + " counterexamples" + first};
    });

    criterion(7, "kernel invariance and stability jobs on both portraits", 600.0, [] {
        std::string detail;
        bool ok = true;
        for (auto* file : {"quadratic_portrait.json", "cubic_portrait.json"}) {
            auto r = run_document(read_data(file));
            int passed = 0, total = 0;
            for (auto& d : r.report["degrees"]) {
                ++total;
                passed += d["invariance"]["ok"].get<bool>();
            }
            ok = ok && r.exit_code == 0 && total > 0 && passed == total;
            detail += std::string(file) + ": exit " + std::to_string(r.exit_code) + ", " + std::to_string(passed) +
                      "/" + std::to_string(total) + " degrees invariant; ";
        }
        return Outcome{ok, detail};
    });

    criterion(8, "identity permutations and positive fundamental classes", 600.0, [&] {
        bool ok = true;
        int matrices = 0;
        for (int n = 4; n <= 6; ++n) {
            auto h = fixtures::identity_datum(n);
            for (int k = 0; k <= n - 3; ++k) {
                auto p = pushforward_matrix(h, k);
                auto r = spectral_radius(p.matrix.entries);
                ok = ok && is_permutation_matrix(p.matrix.entries) && std::abs(r.value - 1.0) <= kRadiusTolerance;
                ++matrices;
            }
        }
        int fundamentals = 0;
        std::string bad;
        for (auto& h : sweep) {
            const int n = h.num_target();
            auto p = pushforward_matrix(h, n - 3);
            const Q& x = p.matrix.entries.at(0).at(0);
            ++fundamentals;
            if (!(x > 0 && denominator(x) == 1)) {
                ok = false;
                if (bad.empty())
                    bad = "; entry " + format_rational(x);
            }
        }
        return Outcome{ok, std::to_string(matrices) + " identity matrices, " + std::to_string(fundamentals) +
                               " fundamental-class entries" + bad};
    });

    std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
