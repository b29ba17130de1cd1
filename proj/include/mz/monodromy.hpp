#pragma once

#include "mz/hurwitz.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mz {

/// p[x] is the image of sheet x. Composition (p * q)[x] = p[q[x]].
using Perm = std::vector<std::uint8_t>;
/// Bit x set means sheet x.
using SheetMask = std::uint32_t;

Perm identity_perm(int d);
Perm compose(const Perm& p, const Perm& q);
Perm inverse(const Perm& p);
Partition cycle_type(const Perm& p);
std::vector<SheetMask> cycles(const Perm& p);
SheetMask image(const Perm& p, SheetMask s);
/// 1-based cycle notation without fixed points; "()" for the identity.
std::string cycle_notation(const Perm& p);
std::vector<Perm> perms_of_type(int d, const Partition& type);

struct MonodromyTuple {
    int d = 1;
    std::vector<Perm> perms;
};

class TupleLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Global guard on tuples produced by one enumeration; 0 disables it.
void set_tuple_limit(std::uint64_t limit);
std::uint64_t tuple_limit();

/// Tuples g_1..g_m with the given cycle types, g_1 * ... * g_m = id, transitive.
std::vector<MonodromyTuple> enumerate_tuples(int d, const std::vector<Partition>& types);
std::uint64_t count_tuples(int d, const std::vector<Partition>& types);

/// Fully marked count: tuple-labeling pairs divided by d!. Throws on a non-integral quotient.
std::uint64_t degree_pi_B(const HurwitzDatum& h);

/// Same count for one vertex of a combinatorial type; memoized, thread-safe.
std::uint64_t local_cover_count(int d, const std::vector<Partition>& profiles);

/// A tuple together with a sheet-set for every source point.
struct LabeledTuple {
    /// order[i] is the target point at position i.
    std::vector<int> order;
    std::vector<Perm> perms;
    /// Per source point, the cycle of its target's permutation it names.
    std::vector<SheetMask> label;
};

/// Every labeled tuple, target points in label order.
std::vector<LabeledTuple> enumerate_labeled_tuples(const HurwitzDatum& h);

/// Adjacent Hurwitz move at positions (i, i+1), or its inverse.
void hurwitz_move(LabeledTuple& t, int i, bool inverse_move, const HurwitzDatum& h);
/// Full twist of the points at positions i < j; leaves the order unchanged.
void pure_twist(LabeledTuple& t, int i, int j, const HurwitzDatum& h);
/// Reorders positions to `order` by adjacent moves.
void transport(LabeledTuple& t, const std::vector<int>& order, const HurwitzDatum& h);
void conjugate(LabeledTuple& t, const Perm& by, const HurwitzDatum& h);

/// Minimal form under simultaneous conjugation; the tuple must be in label order.
std::vector<std::uint32_t> class_key(const LabeledTuple& t, const HurwitzDatum& h);
LabeledTuple canonical_form(const LabeledTuple& t, const HurwitzDatum& h);

struct BraidOrbit {
    int id = 0;
    /// Canonical forms of the conjugacy classes in the orbit, sorted by class key.
    std::vector<LabeledTuple> members;
    std::size_t size() const { return members.size(); }
};

std::vector<BraidOrbit> braid_orbits(const HurwitzDatum& h);

/// Orbit index of a labeled tuple already in canonical form.
int orbit_of(const std::vector<BraidOrbit>& orbits, const LabeledTuple& t, const HurwitzDatum& h);

}  // namespace mz
