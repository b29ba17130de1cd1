#include "mz/hurwitz.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace mz {

Partition normalized(Partition p) {
    std::sort(p.begin(), p.end(), std::greater<>());
    return p;
}

int partition_sum(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

bool is_submultiset(Partition small, Partition big) {
    std::sort(small.begin(), small.end());
    std::sort(big.begin(), big.end());
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<int> HurwitzDatum::fiber(int b) const {
    std::vector<int> out;
    for (int a = 0; a < num_source(); ++a)
        if (F[a] == b)
            out.push_back(a);
    return out;
}

Partition HurwitzDatum::fiber_profile(int b) const {
    Partition out;
    for (int a : fiber(b))
        out.push_back(rm[a]);
    return normalized(out);
}

namespace {

std::string show(const Partition& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i)
        s += (i ? "," : "") + std::to_string(p[i]);
    return s + ")";
}

}  // namespace

int riemann_hurwitz_total(const HurwitzDatum& h) {
    int total = 0;
    for (auto& p : h.br)
        total += h.d - static_cast<int>(p.size());
    return total;
}

Verdict validate_hurwitz_datum(const HurwitzDatum& h) {
    if (h.d < 1)
        return Verdict::fail("degree must be positive");
    if (h.num_source() < 3 || h.num_target() < 3)
        return Verdict::fail("marking sets need at least 3 points");
    if (static_cast<int>(h.F.size()) != h.num_source() || static_cast<int>(h.rm.size()) != h.num_source())
        return Verdict::fail("F and rm must be defined on every source point");
    if (static_cast<int>(h.br.size()) != h.num_target())
        return Verdict::fail("br must be defined on every target point");
    for (int a = 0; a < h.num_source(); ++a) {
        if (h.F[a] < 0 || h.F[a] >= h.num_target())
            return Verdict::fail("F(" + h.A[a] + ") is not a target point");
        if (h.rm[a] < 1)
            return Verdict::fail("rm(" + h.A[a] + ") must be positive");
    }
    for (int b = 0; b < h.num_target(); ++b) {
        for (int part : h.br[b])
            if (part < 1)
                return Verdict::fail("br(" + h.B[b] + ") has a non-positive part");
        if (partition_sum(h.br[b]) != h.d)
            return Verdict::fail("br(" + h.B[b] + ") = " + show(h.br[b]) + " does not sum to " +
                                 std::to_string(h.d));
    }
    int lhs = riemann_hurwitz_total(h);
    if (lhs != 2 * h.d - 2)
        return Verdict::fail("Riemann-Hurwitz: sum of (d - length br) is " + std::to_string(lhs) +
                             " but 2d - 2 is " + std::to_string(2 * h.d - 2));
    for (int b = 0; b < h.num_target(); ++b) {
        Partition fib = h.fiber_profile(b);
        Partition want = normalized(h.br[b]);
        if (!is_submultiset(fib, want))
            return Verdict::fail("ramification over " + h.B[b] + " is " + show(fib) +
                                 ", not a submultiset of " + show(want));
        if (h.fully_marked && fib != want)
            return Verdict::fail("not fully marked over " + h.B[b] + ": " + show(fib) + " vs " +
                                 show(want));
    }
    return Verdict::pass();
}

HurwitzDatum full_marking(const HurwitzDatum& h) {
    HurwitzDatum out = h;
    if (h.keep.empty()) {
        out.keep.resize(h.num_source());
        std::iota(out.keep.begin(), out.keep.end(), 0);
    }
    std::set<std::string> used(h.A.begin(), h.A.end());
    for (int b = 0; b < h.num_target(); ++b) {
        std::multiset<int> missing(h.br[b].begin(), h.br[b].end());
        for (int a : h.fiber(b)) {
            auto it = missing.find(h.rm[a]);
            if (it == missing.end())
                throw std::invalid_argument("fiber over " + h.B[b] + " exceeds its branching");
            missing.erase(it);
        }
        std::vector<int> parts(missing.begin(), missing.end());
        std::sort(parts.begin(), parts.end(), std::greater<>());
        int index = 0;
        for (int part : parts) {
            std::string name;
            do {
                name = h.B[b] + "#" + std::to_string(index++);
            } while (used.count(name));
            used.insert(name);
            out.A.push_back(name);
            out.F.push_back(b);
            out.rm.push_back(part);
        }
    }
    out.fully_marked = true;
    return out;
}

long long synthetic_relabelings(const HurwitzDatum& full) {
    std::vector<char> original(full.num_source(), 0);
    for (int a : full.keep)
        original[a] = 1;
    if (full.keep.empty())
        std::fill(original.begin(), original.end(), 1);
    std::map<std::pair<int, int>, int> groups;
    for (int a = 0; a < full.num_source(); ++a)
        if (!original[a])
            ++groups[{full.F[a], full.rm[a]}];
    long long total = 1;
    for (auto& [key, count] : groups)
        for (int i = 2; i <= count; ++i)
            total *= i;
    return total;
}

Verdict validate_portrait(const PcfPortrait& p) {
    HurwitzDatum h{p.P, p.P, p.d, p.F, p.br, p.rm, false, {}};
    return validate_hurwitz_datum(h);
}

HurwitzDatum pcf_to_hurwitz(const PcfPortrait& p) {
    if (auto v = validate_portrait(p); !v)
        throw std::invalid_argument("invalid portrait: " + v.reason);
    HurwitzDatum h{p.P, p.P, p.d, p.F, p.br, p.rm, false, {}};
    h.keep.resize(p.P.size());
    std::iota(h.keep.begin(), h.keep.end(), 0);
    return h;
}

PcfPortrait portrait_from_datum(const HurwitzDatum& h) {
    if (h.A != h.B)
        throw std::invalid_argument("a portrait needs identical source and target markings");
    return PcfPortrait{h.A, h.d, h.F, h.rm, h.br};
}

namespace {

bool periodic(const PcfPortrait& p, int start) {
    int x = start;
    for (std::size_t i = 0; i < p.P.size(); ++i) {
        x = p.F[x];
        if (x == start)
            return true;
    }
    return false;
}

}  // namespace

KcResult check_kc_criteria(const PcfPortrait& p) {
    KcResult r;
    if (auto v = validate_portrait(p); !v) {
        r.reason = "invalid portrait: " + v.reason;
        return r;
    }
    if (p.d < 2) {
        r.reason = "no fully ramified point: degree below 2";
        return r;
    }
    for (int x = 0; x < static_cast<int>(p.P.size()); ++x)
        if (p.rm[x] == p.d && periodic(p, x)) {
            r.p_inf = x;
            break;
        }
    if (r.p_inf < 0) {
        r.reason = "no fully ramified periodic point";
        return r;
    }
    for (int x = r.p_inf;;) {
        r.cycle.push_back(x);
        x = p.F[x];
        if (x == r.p_inf)
            break;
    }
    for (auto& part : p.br)
        for (int m : part)
            if (m >= 2)
                ++r.critical_points;
    bool all_marked_periodic = true;
    for (int x = 0; x < static_cast<int>(p.P.size()); ++x)
        if (p.rm[x] >= 2) {
            ++r.marked_critical;
            if (!periodic(p, x))
                all_marked_periodic = false;
        }
    if (r.critical_points == r.marked_critical && all_marked_periodic) {
        r.ok = true;
        return r;
    }
    if (r.critical_points == 2) {
        r.ok = true;
        return r;
    }
    r.reason = "criterion (2) fails: " + std::to_string(r.critical_points) + " critical points, " +
               std::to_string(r.marked_critical) + " marked";
    if (r.critical_points > r.marked_critical)
        r.reason += "; unmarked critical points carry no orbit data";
    return r;
}

std::optional<int> static_branch_point(const HurwitzDatum& h) {
    for (int b = 0; b < h.num_target(); ++b)
        if (h.br[b] == Partition{h.d})
            return b;
    return std::nullopt;
}

}  // namespace mz
