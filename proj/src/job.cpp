#include "mz/job.hpp"

#include "mz/covers.hpp"
#include "mz/homology.hpp"
#include "mz/monodromy.hpp"
#include "mz/tree.hpp"
#include "mz/weights.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <map>
#include <set>

namespace mz {

using nlohmann::ordered_json;

namespace {

const std::set<std::string> kModes{"strata", "reduce", "covers", "push", "stability", "degree", "orbits"};
const std::set<std::string> kKeys{"mode", "marking", "degree",    "F",   "rm",      "br", "heavy",
                                  "weights", "k",    "component", "ell", "epsilon", "out"};

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw JobError("field '" + field + "': " + what);
}

int as_int(const ordered_json& v, const std::string& field) {
    if (!v.is_number_integer())
        field_error(field, "expected an integer");
    return v.get<int>();
}

std::string as_label(const ordered_json& v, const std::string& field) {
    if (!v.is_string())
        field_error(field, "expected a label string");
    return v.get<std::string>();
}

Q as_rational(const ordered_json& v, const std::string& field) {
    if (v.is_number_integer())
        return Q(v.get<long long>());
    if (!v.is_string())
        field_error(field, "expected a fraction string \"num/den\"");
    try {
        return parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
        field_error(field, e.what());
    }
}

std::vector<std::string> as_labels(const ordered_json& v, const std::string& field) {
    if (!v.is_array())
        field_error(field, "expected an array of labels");
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto label = as_label(v[i], field + "[" + std::to_string(i) + "]");
        if (!seen.insert(label).second)
            field_error(field, "duplicate label " + label);
        out.push_back(label);
    }
    return out;
}

int line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

JobSpec parse_job(std::string_view document) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(document.begin(), document.end());
    } catch (const nlohmann::json::parse_error& e) {
        if (document.find_first_not_of(" \t\r\n") == std::string_view::npos)
            throw JobError("empty document: missing mode");
        throw JobError("line " + std::to_string(line_of(document, e.byte)) + ": malformed JSON");
    }
    if (!doc.is_object())
        throw JobError("line 1: job must be a JSON object");
    for (auto& [key, value] : doc.items())
        if (!kKeys.count(key))
            throw JobError("unknown key '" + key + "'");
    JobSpec job;
    if (!doc.contains("mode"))
        throw JobError("missing mode");
    job.mode = as_label(doc["mode"], "mode");
    if (!kModes.count(job.mode))
        field_error("mode", "unknown mode " + job.mode);
    if (doc.contains("marking"))
        job.marking = as_labels(doc["marking"], "marking");
    if (doc.contains("degree"))
        job.degree = as_int(doc["degree"], "degree");
    auto read_map = [&](const char* name, auto&& read) {
        if (!doc.contains(name))
            return;
        const auto& m = doc[name];
        if (!m.is_object())
            field_error(name, "expected an object");
        for (auto& [key, value] : m.items())
            read(key, value, std::string(name) + "." + key);
    };
    read_map("F", [&](const std::string& a, const ordered_json& v, const std::string& f) {
        job.F.emplace_back(a, as_label(v, f));
    });
    read_map("rm", [&](const std::string& a, const ordered_json& v, const std::string& f) {
        job.rm.emplace_back(a, as_int(v, f));
    });
    read_map("br", [&](const std::string& b, const ordered_json& v, const std::string& f) {
        if (!v.is_array())
            field_error(f, "expected a list of parts");
        Partition p;
        for (std::size_t i = 0; i < v.size(); ++i)
            p.push_back(as_int(v[i], f + "[" + std::to_string(i) + "]"));
        job.br.emplace_back(b, normalized(p));
    });
    if (doc.contains("heavy"))
        job.heavy = as_labels(doc["heavy"], "heavy");
    if (doc.contains("weights")) {
        job.weights.emplace();
        read_map("weights", [&](const std::string& p, const ordered_json& v, const std::string& f) {
            job.weights->emplace_back(p, as_rational(v, f));
        });
    }
    if (job.heavy && job.weights)
        throw JobError("give either 'heavy' or 'weights', not both");
    if (doc.contains("k"))
        job.k = as_int(doc["k"], "k");
    if (doc.contains("component")) {
        const auto& c = doc["component"];
        if (c.is_string() && c.get<std::string>() == "all") {
        } else if (c.is_number_integer()) {
            job.orbit = c.get<int>();
        } else {
            field_error("component", "expected \"all\" or an orbit id");
        }
    }
    if (doc.contains("ell"))
        job.ell = as_int(doc["ell"], "ell");
    if (doc.contains("epsilon"))
        job.epsilon = as_rational(doc["epsilon"], "epsilon");
    if (doc.contains("out"))
        job.out = as_label(doc["out"], "out");

    const bool needs_datum = job.mode != "strata" && job.mode != "reduce";
    if (job.marking.empty())
        field_error("marking", "required");
    if (needs_datum) {
        if (!job.degree)
            field_error("degree", "required for mode " + job.mode);
        if (job.F.empty())
            field_error("F", "required for mode " + job.mode);
        if (job.br.empty())
            field_error("br", "required for mode " + job.mode);
    }
    if (job.mode == "reduce" && !job.heavy && !job.weights)
        field_error("weights", "mode reduce needs 'heavy' or 'weights'");
    return job;
}

ordered_json print_job(const JobSpec& job) {
    ordered_json j;
    j["mode"] = job.mode;
    j["marking"] = job.marking;
    if (job.degree)
        j["degree"] = *job.degree;
    auto put_map = [&](const char* name, const auto& entries, auto&& conv) {
        if (entries.empty())
            return;
        ordered_json m = ordered_json::object();
        for (auto& [key, value] : entries)
            m[key] = conv(value);
        j[name] = m;
    };
    auto same = [](const auto& v) { return v; };
    put_map("F", job.F, same);
    put_map("rm", job.rm, same);
    put_map("br", job.br, same);
    if (job.heavy)
        j["heavy"] = *job.heavy;
    if (job.weights) {
        ordered_json m = ordered_json::object();
        for (auto& [p, q] : *job.weights)
            m[p] = format_rational(q);
        j["weights"] = m;
    }
    if (job.k)
        j["k"] = *job.k;
    if (job.orbit)
        j["component"] = *job.orbit;
    if (job.ell)
        j["ell"] = *job.ell;
    if (job.epsilon)
        j["epsilon"] = format_rational(*job.epsilon);
    if (job.out)
        j["out"] = *job.out;
    return j;
}

std::string job_hash(const JobSpec& job) {
    std::string text = print_job(job).dump();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

namespace {

int index_in(const std::vector<std::string>& labels, const std::string& x, const std::string& field) {
    auto it = std::find(labels.begin(), labels.end(), x);
    if (it == labels.end())
        field_error(field, "unknown label " + x);
    return static_cast<int>(it - labels.begin());
}

}  // namespace

bool is_portrait(const JobSpec& job) {
    std::set<std::string> src, mark(job.marking.begin(), job.marking.end());
    for (auto& [a, b] : job.F)
        src.insert(a);
    return src == mark;
}

HurwitzDatum datum_from_job(const JobSpec& job) {
    HurwitzDatum h;
    h.B = job.marking;
    h.d = *job.degree;
    if (is_portrait(job)) {
        h.A = job.marking;
    } else {
        for (auto& [a, b] : job.F)
            h.A.push_back(a);
    }
    std::set<std::string> seen;
    h.F.assign(h.A.size(), -1);
    for (auto& [a, b] : job.F) {
        if (!seen.insert(a).second)
            field_error("F." + a, "duplicate source point");
        h.F[index_in(h.A, a, "F")] = index_in(h.B, b, "F." + a);
    }
    h.rm.assign(h.A.size(), 1);
    for (auto& [a, r] : job.rm)
        h.rm[index_in(h.A, a, "rm")] = r;
    h.br.assign(h.B.size(), Partition{});
    std::vector<char> given(h.B.size(), 0);
    for (auto& [b, p] : job.br) {
        int i = index_in(h.B, b, "br");
        h.br[i] = p;
        given[i] = 1;
    }
    for (std::size_t i = 0; i < h.B.size(); ++i)
        if (!given[i])
            field_error("br", "missing branching over " + h.B[i]);
    h.fully_marked = true;
    for (int b = 0; b < h.num_target(); ++b)
        h.fully_marked = h.fully_marked && h.fiber_profile(b) == h.br[b];
    if (auto v = validate_hurwitz_datum(h); !v)
        throw JobError("invalid Hurwitz datum: " + v.reason);
    return h;
}

namespace {

ordered_json key_json(const CanonicalKey& key, const std::vector<std::string>& labels) {
    ordered_json splits = ordered_json::array();
    for (auto& side : key_as_lists(key)) {
        ordered_json s = ordered_json::array();
        for (int p : side)
            s.push_back(labels[p]);
        splits.push_back(s);
    }
    return {{"splits", splits}, {"dimension", key.dimension()}};
}

ordered_json mask_json(LegMask m, const std::vector<std::string>& labels) {
    ordered_json out = ordered_json::array();
    for (std::size_t p = 0; p < labels.size(); ++p)
        if (m & leg_bit(static_cast<int>(p)))
            out.push_back(labels[p]);
    return out;
}

ordered_json matrix_json(const StrataMatrix& m, const std::vector<std::string>& row_labels,
                         const std::vector<std::string>& col_labels) {
    ordered_json rows = ordered_json::array(), cols = ordered_json::array(), entries = ordered_json::array();
    for (auto& k : m.codomain.keys)
        rows.push_back(key_json(k, row_labels)["splits"]);
    for (auto& k : m.domain.keys)
        cols.push_back(key_json(k, col_labels)["splits"]);
    for (auto& row : m.entries) {
        ordered_json r = ordered_json::array();
        for (auto& x : row)
            r.push_back(format_rational(x));
        entries.push_back(r);
    }
    return {{"rows", rows}, {"columns", cols}, {"entries", entries}};
}

ordered_json qmatrix_json(const QMatrix& m) {
    ordered_json out = ordered_json::array();
    for (auto& row : m) {
        ordered_json r = ordered_json::array();
        for (auto& x : row)
            r.push_back(format_rational(x));
        out.push_back(r);
    }
    return out;
}

ordered_json spectral_json(const SpectralEstimate& s, bool valid) {
    return {{"value", s.value},
            {"error", s.error},
            {"exact", s.exact},
            {"method", s.method},
            {"dynamical_degree_estimate", valid}};
}

ordered_json partition_json(const Partition& p) { return ordered_json(p); }

ordered_json type_json(const WeightedType& wt, const HurwitzDatum& full) {
    const auto& g = wt.type;
    ordered_json verts = ordered_json::array();
    for (int v = 0; v < g.sigma.num_vertices(); ++v) {
        ordered_json legs = ordered_json::array();
        for (int a : g.sigma.legs_at(v))
            legs.push_back(full.A[a]);
        ordered_json target_legs = ordered_json::array();
        for (int b : g.tau.legs_at(g.vertex_map[v]))
            target_legs.push_back(full.B[b]);
        ordered_json profiles = ordered_json::array();
        for (auto& p : local_profiles(g, full, v))
            profiles.push_back(partition_json(p));
        verts.push_back({{"legs", legs},
                         {"degree", g.vertex_degree[v]},
                         {"target_vertex", g.vertex_map[v]},
                         {"target_legs", target_legs},
                         {"local_profiles", profiles}});
    }
    ordered_json edges = ordered_json::array();
    auto sides = edge_sides(g.sigma);
    auto tsides = edge_sides(g.tau);
    for (int e = 0; e < g.sigma.num_edges(); ++e) {
        auto [x, y] = g.sigma.edge(e);
        edges.push_back({{"ends", {x, y}},
                         {"split", mask_json(normalize_split(sides[e], g.sigma.num_legs()), full.A)},
                         {"target_split",
                          mask_json(normalize_split(tsides[g.edge_map[e]], g.tau.num_legs()), full.B)},
                         {"ramification", g.edge_ramification[e]}});
    }
    return {{"sigma", key_json(canonical_key(g.sigma), full.A)},
            {"vertices", verts},
            {"edges", edges},
            {"weight", wt.weight}};
}

const char* kComponentNote =
    "braid orbits are components of the Hurwitz space; matching an orbit to a given topological map "
    "is outside combinatorial reach, so the operator designates one or the full space is used";

ordered_json datum_json(const HurwitzDatum& h) {
    ordered_json F = ordered_json::object(), rm = ordered_json::object(), br = ordered_json::object();
    for (int a = 0; a < h.num_source(); ++a) {
        F[h.A[a]] = h.B[h.F[a]];
        rm[h.A[a]] = h.rm[a];
    }
    for (int b = 0; b < h.num_target(); ++b)
        br[h.B[b]] = h.br[b];
    return {{"source", h.A}, {"target", h.B}, {"degree", h.d}, {"F", F}, {"rm", rm}, {"br", br}};
}

WeightDatum weights_from_job(const JobSpec& job) {
    const int n = static_cast<int>(job.marking.size());
    if (job.heavy) {
        LegMask heavy = 0;
        for (auto& p : *job.heavy)
            heavy |= leg_bit(index_in(job.marking, p, "heavy"));
        try {
            return tower_weight_datum(n, heavy, job.epsilon.value_or(tower_epsilon(n)));
        } catch (const std::invalid_argument& e) {
            field_error("heavy", e.what());
        }
    }
    WeightDatum w{std::vector<Q>(n, Q(0))};
    std::vector<char> given(n, 0);
    for (auto& [p, q] : *job.weights) {
        int i = index_in(job.marking, p, "weights");
        w.weights[i] = q;
        given[i] = 1;
    }
    for (int i = 0; i < n; ++i)
        if (!given[i])
            field_error("weights", "missing weight for " + job.marking[i]);
    if (auto v = validate_weight_datum(w); !v)
        field_error("weights", v.reason);
    return w;
}

std::vector<int> k_range(const JobSpec& job, int n, int fallback_lo, int fallback_hi) {
    if (job.k) {
        if (*job.k < 0 || *job.k > n - 3)
            field_error("k", "dimension " + std::to_string(*job.k) + " outside [0, " + std::to_string(n - 3) + "]");
        return {*job.k};
    }
    std::vector<int> out;
    for (int k = fallback_lo; k <= fallback_hi; ++k)
        out.push_back(k);
    return out;
}

RunResult run_strata(const JobSpec& job) {
    const int n = static_cast<int>(job.marking.size());
    if (n < 3 || n > 20)
        field_error("marking", "needs between 3 and 20 points");
    ordered_json strata = ordered_json::array();
    std::map<int, int> by_dim;
    for (int k : k_range(job, n, 0, n - 3))
        for (auto& key : enumerate_stable_trees(n, k)) {
            strata.push_back(key_json(key, job.marking));
            ++by_dim[k];
        }
    ordered_json counts = ordered_json::object();
    for (auto it = by_dim.rbegin(); it != by_dim.rend(); ++it)
        counts[std::to_string(it->first)] = it->second;
    return {{{"count", strata.size()}, {"by_dimension", counts}, {"strata", strata}}, 0};
}

RunResult run_reduce(const JobSpec& job) {
    const int n = static_cast<int>(job.marking.size());
    if (n < 3 || n > 20)
        field_error("marking", "needs between 3 and 20 points");
    WeightDatum w = weights_from_job(job);
    ordered_json weights = ordered_json::object();
    for (int i = 0; i < n; ++i)
        weights[job.marking[i]] = format_rational(w.weights[i]);
    ordered_json rows = ordered_json::array();
    ordered_json kernel = ordered_json::object();
    for (int k : k_range(job, n, 0, n - 3)) {
        ordered_json ker = ordered_json::array();
        for (auto& key : enumerate_stable_trees(n, k)) {
            MarkedTree t = tree_from_key(key);
            ReducedType r = stabilize(t, w);
            ordered_json clusters = ordered_json::array();
            for (auto& at : r.leg_clusters)
                for (LegMask c : at)
                    if (popcount(c) > 1)
                        clusters.push_back(mask_json(c, job.marking));
            bool in_kernel = is_kernel_stratum(t, w);
            rows.push_back({{"stratum", key_json(key, job.marking)},
                            {"kept", key_json(canonical_key(r.kept_tree), job.marking)["splits"]},
                            {"coincident", clusters},
                            {"image_dimension", r.image_dimension},
                            {"kernel", in_kernel}});
            if (in_kernel)
                ker.push_back(key_json(key, job.marking)["splits"]);
        }
        kernel[std::to_string(k)] = ker;
    }
    return {{{"weights", weights}, {"reductions", rows}, {"kernel_strata", kernel}}, 0};
}

RunResult run_degree(const JobSpec& job) {
    HurwitzDatum h = datum_from_job(job);
    HurwitzDatum full = full_marking(h);
    std::vector<Partition> types(full.br.begin(), full.br.end());
    ordered_json synthetic = ordered_json::array();
    for (int a = h.num_source(); a < full.num_source(); ++a)
        synthetic.push_back({{"label", full.A[a]}, {"over", full.B[full.F[a]]}, {"rm", full.rm[a]}});
    return {{{"datum", datum_json(h)},
             {"fully_marked_input", h.fully_marked},
             {"synthetic_points", synthetic},
             {"tuples", count_tuples(full.d, types)},
             {"degree_pi_B", degree_pi_B(full)},
             {"deg_nu", synthetic_relabelings(full)}},
            0};
}

RunResult run_orbits(const JobSpec& job) {
    HurwitzDatum full = full_marking(datum_from_job(job));
    auto orbits = braid_orbits(full);
    ordered_json list = ordered_json::array();
    std::uint64_t total = 0;
    for (auto& o : orbits) {
        const auto& rep = o.members.front();
        ordered_json perms = ordered_json::array();
        for (std::size_t i = 0; i < rep.perms.size(); ++i)
            perms.push_back({{"point", full.B[rep.order[i]]}, {"perm", cycle_notation(rep.perms[i])}});
        list.push_back({{"id", o.id}, {"size", o.size()}, {"representative", perms}});
        total += o.size();
    }
    return {{{"degree_pi_B", degree_pi_B(full)},
             {"orbit_count", orbits.size()},
             {"classes", total},
             {"orbits", list},
             {"component_note", kComponentNote}},
            0};
}

RunResult run_covers(const JobSpec& job) {
    HurwitzDatum h = datum_from_job(job);
    HurwitzDatum full = full_marking(h);
    const int n = full.num_target();
    const std::uint64_t degree = degree_pi_B(full);
    auto b_inf = static_branch_point(full);
    int lo = std::max(0, n - 4);
    ordered_json strata = ordered_json::array();
    bool ok = true;
    for (int k : k_range(job, n, lo, lo))
        for (auto& key : enumerate_stable_trees(n, k)) {
            MarkedTree tau = tree_from_key(key);
            auto types = enumerate_types_over(tau, full);
            ordered_json list = ordered_json::array();
            std::uint64_t sum = 0;
            ordered_json failures = ordered_json::array();
            for (auto& wt : types) {
                sum += wt.weight;
                list.push_back(type_json(wt, full));
                if (auto v = validate_type(wt.type, full); !v)
                    failures.push_back({{"check", "validate_type"}, {"reason", v.reason}});
                else if (b_inf)
                    if (auto v2 = check_polytopoly(wt.type, full, *b_inf); !v2)
                        failures.push_back({{"check", "polytopoly"}, {"reason", v2.reason}});
            }
            bool flat = sum == degree;
            ok = ok && flat && failures.empty();
            strata.push_back({{"tau", key_json(key, full.B)},
                              {"weight_sum", sum},
                              {"flat", flat},
                              {"types", list},
                              {"counterexamples", failures}});
        }
    ordered_json rep{{"datum", datum_json(full)},
                     {"degree_pi_B", degree},
                     {"static_point", b_inf ? ordered_json(full.B[*b_inf]) : ordered_json(nullptr)},
                     {"strata", strata}};
    return {rep, ok ? 0 : 1};
}

ordered_json push_json(const Pushforward& push, const HurwitzDatum& full, const std::vector<std::string>& kept) {
    ordered_json excess = ordered_json::array();
    for (auto& ex : push.excess)
        excess.push_back({{"column", ex.column},
                          {"source", key_json(ex.source, kept)},
                          {"coefficient", format_rational(ex.coefficient)}});
    ordered_json j{{"k", push.matrix.domain.k},
                   {"matrix", matrix_json(push.matrix, kept, full.B)},
                   {"excess_terms", excess},
                   {"dropped_terms", push.dropped_terms},
                   {"types", push.types},
                   {"scale", format_rational(push.scale)}};
    if (push.orbit) {
        j["orbit"] = *push.orbit;
        j["orbits_used"] = push.orbits_used;
    }
    return j;
}

std::vector<std::string> kept_labels(const HurwitzDatum& full) {
    std::vector<std::string> out;
    for (int a : full.keep)
        out.push_back(full.A[a]);
    return out;
}

RunResult run_push(const JobSpec& job, const RunOptions& opt) {
    HurwitzDatum h = datum_from_job(job);
    HurwitzDatum full = full_marking(h);
    const int n = std::min(h.num_target(), h.num_source());
    auto orbit = opt.orbit ? opt.orbit : job.orbit;
    ordered_json degrees = ordered_json::array();
    for (int k : k_range(job, n, 0, n - 3)) {
        try {
            degrees.push_back(push_json(pushforward_matrix(h, k, orbit, opt.threads), full, kept_labels(full)));
        } catch (const std::invalid_argument& e) {
            throw JobError(e.what());
        }
    }
    return {{{"datum", datum_json(h)}, {"pushforward", degrees}, {"component_note", kComponentNote}}, 0};
}

RunResult run_stability(const JobSpec& job, const RunOptions& opt) {
    if (!is_portrait(job))
        throw JobError("stability needs a portrait: F must be defined on exactly the marking");
    HurwitzDatum h = datum_from_job(job);
    PcfPortrait p = portrait_from_datum(h);
    auto orbit = opt.orbit ? opt.orbit : job.orbit;
    StabilityReport rep;
    try {
        rep = stability_report(p, job.ell, orbit, opt.threads, job.epsilon);
    } catch (const std::invalid_argument& e) {
        throw JobError(e.what());
    }
    ordered_json kc{{"ok", rep.kc.ok}, {"reason", rep.kc.reason}};
    if (rep.kc.p_inf >= 0) {
        kc["p_inf"] = p.P[rep.kc.p_inf];
        ordered_json cyc = ordered_json::array();
        for (int x : rep.kc.cycle)
            cyc.push_back(p.P[x]);
        kc["cycle"] = cyc;
    }
    kc["critical_points"] = rep.kc.critical_points;
    kc["marked_critical"] = rep.kc.marked_critical;
    if (rep.input_error) {
        return {{{"status", "error"}, {"error", rep.note}, {"kc", kc}}, 2};
    }
    ordered_json heavy = ordered_json::array();
    for (int x : rep.heavy)
        heavy.push_back(p.P[x]);
    HurwitzDatum full = full_marking(h);
    ordered_json degrees = ordered_json::array();
    for (auto& d : rep.degrees) {
        ordered_json ker = ordered_json::array();
        for (auto& key : d.kernel)
            ker.push_back(key_json(key, p.P)["splits"]);
        ordered_json inv{{"ok", d.invariance.ok}};
        if (!d.invariance.ok) {
            inv["reason"] = d.invariance.reason;
            inv["column"] = key_json(d.push.matrix.domain.keys[d.invariance.column], p.P)["splits"];
            if (d.invariance.row >= 0)
                inv["row"] = key_json(d.push.matrix.codomain.keys[d.invariance.row], p.P)["splits"];
        }
        degrees.push_back({{"k", d.k},
                           {"pass", d.invariance.ok},
                           {"kernel_strata", ker},
                           {"invariance", inv},
                           {"pushforward", push_json(d.push, full, p.P)},
                           {"quotient_matrix", qmatrix_json(d.quotient)},
                           {"spectral_radius", spectral_json(d.radius, d.invariance.ok)},
                           {"quotient_spectral_radius", spectral_json(d.quotient_radius, d.invariance.ok)}});
    }
    ordered_json failures = ordered_json::array();
    for (auto& f : rep.type_failures)
        failures.push_back({{"tau", key_json(f.tau, p.P)}, {"check", f.check}, {"reason", f.reason}});
    ordered_json out{{"status", rep.ok ? "pass" : "fail"},
                     {"kc", kc},
                     {"heavy", heavy},
                     {"epsilon", format_rational(rep.epsilon)},
                     {"within_theorem", rep.within_theorem},
                     {"degrees", degrees},
                     {"types_checked", rep.types_checked},
                     {"type_counterexamples", failures},
                     {"note", rep.note},
                     {"component_note", kComponentNote}};
    int code = rep.ok ? 0 : (rep.within_theorem ? 1 : 0);
    return {out, code};
}

}  // namespace

RunResult run(const JobSpec& job, const RunOptions& options) {
    set_tuple_limit(options.max_tuples);
    RunResult r;
    try {
        if (job.mode == "strata")
            r = run_strata(job);
        else if (job.mode == "reduce")
            r = run_reduce(job);
        else if (job.mode == "degree")
            r = run_degree(job);
        else if (job.mode == "orbits")
            r = run_orbits(job);
        else if (job.mode == "covers")
            r = run_covers(job);
        else if (job.mode == "push")
            r = run_push(job, options);
        else
            r = run_stability(job, options);
    } catch (const JobError& e) {
        r = {{{"status", "error"}, {"error", e.what()}}, 2};
    } catch (const TupleLimitExceeded& e) {
        r = {{{"status", "error"}, {"error", e.what()}}, 2};
    }
    ordered_json report;
    report["mode"] = job.mode;
    report["exit_code"] = r.exit_code;
    for (auto& [key, value] : r.report.items())
        report[key] = value;
    report["provenance"] = {{"tool", "mz"}, {"version", kToolVersion}, {"job_sha256", job_hash(job)}};
    return {report, r.exit_code};
}

RunResult run_document(std::string_view document, const RunOptions& options) {
    try {
        return run(parse_job(document), options);
    } catch (const JobError& e) {
        ordered_json report{{"status", "error"},
                            {"exit_code", 2},
                            {"error", e.what()},
                            {"provenance", {{"tool", "mz"}, {"version", kToolVersion}}}};
        return {report, 2};
    }
}

}  // namespace mz
