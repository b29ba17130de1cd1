#pragma once

#include "mz/covers.hpp"
#include "mz/hurwitz.hpp"
#include "mz/linalg.hpp"
#include "mz/tree.hpp"
#include "mz/weights.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mz {

struct StrataBasis {
    int num_legs = 0;
    int k = 0;
    std::vector<CanonicalKey> keys;

    int size() const { return static_cast<int>(keys.size()); }
    /// -1 when key is not in the basis.
    int index_of(const CanonicalKey& key) const;
};

/// All k-dimensional stable trees on n legs, in enumeration order.
StrataBasis strata_basis(int n, int k);

struct StrataMatrix {
    StrataBasis domain;
    StrataBasis codomain;
    /// codomain.size() rows by domain.size() columns.
    QMatrix entries;
};

/// A k-dimensional image inside a forgotten stratum of dimension above k: the pushed class is
/// not a stratum class, so it is reported instead of entered.
struct ExcessTerm {
    int column = 0;
    CanonicalKey source;
    TypeKey type;
    Q coefficient;
};

struct Pushforward {
    StrataMatrix matrix;
    std::vector<ExcessTerm> excess;
    /// 1, or 1/deg nu for a single orbit.
    Q scale = 1;
    std::optional<int> orbit;
    /// Every orbit whose classes contribute: the preimage of the selected image component.
    std::vector<int> orbits_used;
    std::uint64_t types = 0;
    /// Terms whose image has dimension below k, so their class vanishes.
    std::uint64_t dropped_terms = 0;
};

/// Columns come from types over each target stratum; a type enters at its forgotten source stratum
/// with its weight when its image has full dimension k. With an orbit, type counts come from the
/// monodromy of the orbit's synthetic relabelings and are scaled by 1/deg nu.
/// Throws on k out of range or an unknown orbit.
Pushforward pushforward_matrix(const HurwitzDatum& h, int k, std::optional<int> orbit = {},
                               int threads = 1);

/// Relations among boundary divisors on n legs, one vector per spanning choice.
std::vector<std::vector<Q>> keel_divisor_relations(int n);
/// D(ij|kl) - D(ik|jl) on the divisor basis; throws on repeated indices.
std::vector<Q> keel_relation(int n, int i, int j, int k, int l);
int keel_quotient_rank(int n);

struct KernelCheck {
    bool ok = true;
    std::string reason;
    int column = -1;
    int row = -1;
};

/// M must be square on one basis; K is a subset of that basis.
KernelCheck kernel_invariance_check(const StrataMatrix& m, const std::vector<CanonicalKey>& kernel);

/// M restricted to the basis elements outside the kernel.
QMatrix quotient_matrix(const StrataMatrix& m, const std::vector<CanonicalKey>& kernel);

struct DegreeReport {
    int k = 0;
    Pushforward push;
    std::vector<CanonicalKey> kernel;
    KernelCheck invariance;
    QMatrix quotient;
    SpectralEstimate radius;
    SpectralEstimate quotient_radius;
};

struct TypeCheckFailure {
    CanonicalKey tau;
    std::string check;
    std::string reason;
};

struct StabilityReport {
    bool ok = false;
    /// Input error in the sense of the exit-code contract.
    bool input_error = false;
    std::string note;
    KcResult kc;
    std::vector<int> heavy;
    bool within_theorem = true;
    Q epsilon = 0;
    std::vector<DegreeReport> degrees;
    std::vector<TypeCheckFailure> type_failures;
    std::uint64_t types_checked = 0;
};

/// heavy_override replaces |P_inf| by a chosen count of points taken along the cycle, then in
/// label order. epsilon defaults to tower_epsilon.
StabilityReport stability_report(const PcfPortrait& p, std::optional<int> heavy_override = {},
                                 std::optional<int> orbit = {}, int threads = 1,
                                 std::optional<Q> epsilon = {});

}  // namespace mz
