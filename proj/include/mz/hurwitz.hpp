#pragma once

#include "mz/verdict.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mz {

/// Sorted descending.
using Partition = std::vector<int>;

Partition normalized(Partition p);
int partition_sum(const Partition& p);
bool is_submultiset(Partition small, Partition big);

struct HurwitzDatum {
    std::vector<std::string> A;
    std::vector<std::string> B;
    int d = 1;
    std::vector<int> F;
    std::vector<Partition> br;
    std::vector<int> rm;
    bool fully_marked = false;
    /// Indices into A of the points that existed before full marking.
    std::vector<int> keep;

    int num_source() const { return static_cast<int>(A.size()); }
    int num_target() const { return static_cast<int>(B.size()); }
    std::vector<int> fiber(int b) const;
    Partition fiber_profile(int b) const;
};

struct PcfPortrait {
    std::vector<std::string> P;
    int d = 1;
    std::vector<int> F;
    std::vector<int> rm;
    std::vector<Partition> br;
};

/// Checks Riemann-Hurwitz and that marked fibers fit inside br, with equality when fully_marked.
Verdict validate_hurwitz_datum(const HurwitzDatum& h);

/// Σ_b (d - length br(b)).
int riemann_hurwitz_total(const HurwitzDatum& h);

/// Adds synthetic points named "<b>#<i>" so that every fiber profile equals br.
HurwitzDatum full_marking(const HurwitzDatum& h);

/// Number of labelings of the synthetic points, the degree of the map forgetting them.
long long synthetic_relabelings(const HurwitzDatum& full);

Verdict validate_portrait(const PcfPortrait& p);
HurwitzDatum pcf_to_hurwitz(const PcfPortrait& p);
PcfPortrait portrait_from_datum(const HurwitzDatum& h);

struct KcResult {
    bool ok = false;
    std::string reason;
    int p_inf = -1;
    /// The cycle through p_inf in forward order, starting at p_inf.
    std::vector<int> cycle;
    int critical_points = 0;
    int marked_critical = 0;
};

KcResult check_kc_criteria(const PcfPortrait& p);

/// First b in label order with br(b) = (d).
std::optional<int> static_branch_point(const HurwitzDatum& h);

}  // namespace mz
