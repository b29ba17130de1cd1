#include "mz/monodromy.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>

namespace mz {

Perm identity_perm(int d) {
    Perm p(d);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Perm compose(const Perm& p, const Perm& q) {
    Perm r(p.size());
    for (std::size_t x = 0; x < p.size(); ++x)
        r[x] = p[q[x]];
    return r;
}

Perm inverse(const Perm& p) {
    Perm r(p.size());
    for (std::size_t x = 0; x < p.size(); ++x)
        r[p[x]] = static_cast<std::uint8_t>(x);
    return r;
}

std::vector<SheetMask> cycles(const Perm& p) {
    std::vector<SheetMask> out;
    SheetMask seen = 0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (seen & (1u << x))
            continue;
        SheetMask c = 0;
        for (std::size_t y = x; !(c & (1u << y)); y = p[y])
            c |= 1u << y;
        seen |= c;
        out.push_back(c);
    }
    return out;
}

Partition cycle_type(const Perm& p) {
    Partition out;
    for (SheetMask c : cycles(p))
        out.push_back(__builtin_popcount(c));
    return normalized(out);
}

SheetMask image(const Perm& p, SheetMask s) {
    SheetMask out = 0;
    for (std::size_t x = 0; x < p.size(); ++x)
        if (s & (1u << x))
            out |= 1u << p[x];
    return out;
}

std::string cycle_notation(const Perm& p) {
    std::string s;
    for (SheetMask c : cycles(p)) {
        if (__builtin_popcount(c) < 2)
            continue;
        int start = __builtin_ctz(c);
        s += "(";
        int x = start;
        do {
            if (x != start)
                s += " ";
            s += std::to_string(x + 1);
            x = p[x];
        } while (x != start);
        s += ")";
    }
    return s.empty() ? "()" : s;
}

namespace {

std::vector<Perm> all_perms(int d) {
    std::vector<Perm> out;
    Perm p = identity_perm(d);
    do
        out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::mutex cache_mutex;

}  // namespace

std::vector<Perm> perms_of_type(int d, const Partition& type) {
    static std::map<std::pair<int, Partition>, std::vector<Perm>> cache;
    auto key = std::make_pair(d, normalized(type));
    {
        std::lock_guard lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end())
            return it->second;
    }
    std::vector<Perm> out;
    if (partition_sum(key.second) == d)
        for (auto& p : all_perms(d))
            if (cycle_type(p) == key.second)
                out.push_back(p);
    std::lock_guard lock(cache_mutex);
    cache.emplace(key, out);
    return out;
}

namespace {

std::atomic<std::uint64_t> g_tuple_limit{0};

bool transitive(int d, const std::vector<Perm>& perms) {
    SheetMask reached = 1;
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto& p : perms) {
            SheetMask next = reached | image(p, reached);
            if (next != reached) {
                reached = next;
                grew = true;
            }
        }
    }
    return reached == (d == 32 ? ~0u : ((1u << d) - 1));
}

template <class Visit>
void walk_tuples(int d, const std::vector<Partition>& types, Visit&& visit) {
    const std::size_t m = types.size();
    if (m == 0)
        return;
    std::vector<std::vector<Perm>> menus;
    for (auto& t : types)
        menus.push_back(perms_of_type(d, t));
    const Partition last_type = normalized(types.back());
    std::vector<Perm> chosen(m);
    std::uint64_t produced = 0;
    const std::uint64_t limit = g_tuple_limit.load();
    auto recurse = [&](auto&& self, std::size_t i, const Perm& prefix) -> void {
        if (i + 1 == m) {
            Perm last = inverse(prefix);
            if (cycle_type(last) != last_type)
                return;
            chosen[i] = last;
            if (!transitive(d, chosen))
                return;
            if (limit && ++produced > limit)
                throw TupleLimitExceeded("tuple enumeration exceeded the limit of " +
                                         std::to_string(limit));
            visit(chosen);
            return;
        }
        for (auto& g : menus[i]) {
            chosen[i] = g;
            self(self, i + 1, compose(prefix, g));
        }
    };
    recurse(recurse, 0, identity_perm(d));
}

}  // namespace

void set_tuple_limit(std::uint64_t limit) { g_tuple_limit.store(limit); }
std::uint64_t tuple_limit() { return g_tuple_limit.load(); }

std::vector<MonodromyTuple> enumerate_tuples(int d, const std::vector<Partition>& types) {
    std::vector<MonodromyTuple> out;
    walk_tuples(d, types, [&](const std::vector<Perm>& perms) { out.push_back({d, perms}); });
    return out;
}

std::uint64_t count_tuples(int d, const std::vector<Partition>& types) {
    std::uint64_t n = 0;
    walk_tuples(d, types, [&](const std::vector<Perm>&) { ++n; });
    return n;
}

namespace {

std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i)
        f *= static_cast<std::uint64_t>(i);
    return f;
}

// Labelings per tuple: product over equal parts of (multiplicity)!.
std::uint64_t labelings(const std::vector<Partition>& profiles) {
    std::uint64_t total = 1;
    for (auto& p : profiles) {
        std::map<int, int> mult;
        for (int x : p)
            ++mult[x];
        for (auto& [part, count] : mult)
            total *= factorial(count);
    }
    return total;
}

std::uint64_t fully_marked_count(int d, const std::vector<Partition>& profiles) {
    std::uint64_t pairs = count_tuples(d, profiles) * labelings(profiles);
    std::uint64_t sheets = factorial(d);
    if (pairs % sheets != 0)
        throw std::logic_error("non-integral cover count " + std::to_string(pairs) + "/" +
                               std::to_string(sheets));
    return pairs / sheets;
}

}  // namespace

std::uint64_t degree_pi_B(const HurwitzDatum& h) {
    if (!h.fully_marked)
        throw std::invalid_argument("degree_pi_B needs a fully marked datum");
    if (auto v = validate_hurwitz_datum(h); !v)
        throw std::invalid_argument(v.reason);
    return fully_marked_count(h.d, h.br);
}

std::uint64_t local_cover_count(int d, const std::vector<Partition>& profiles) {
    static std::map<std::pair<int, std::vector<Partition>>, std::uint64_t> cache;
    std::vector<Partition> key_profiles;
    for (auto& p : profiles)
        key_profiles.push_back(normalized(p));
    std::sort(key_profiles.begin(), key_profiles.end());
    auto key = std::make_pair(d, key_profiles);
    {
        std::lock_guard lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end())
            return it->second;
    }
    std::uint64_t value = fully_marked_count(d, key_profiles);
    std::lock_guard lock(cache_mutex);
    cache.emplace(key, value);
    return value;
}

std::vector<LabeledTuple> enumerate_labeled_tuples(const HurwitzDatum& h) {
    if (!h.fully_marked)
        throw std::invalid_argument("labeled tuples need a fully marked datum");
    if (auto v = validate_hurwitz_datum(h); !v)
        throw std::invalid_argument(v.reason);
    const int nb = h.num_target();
    std::vector<int> order(nb);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::vector<int>> fibers(nb);
    for (int b = 0; b < nb; ++b)
        fibers[b] = h.fiber(b);

    std::vector<LabeledTuple> out;
    walk_tuples(h.d, h.br, [&](const std::vector<Perm>& perms) {
        LabeledTuple base{order, perms, std::vector<SheetMask>(h.num_source(), 0)};
        // One slot per (b, part length): points and cycles to be matched bijectively.
        struct Slot {
            std::vector<int> points;
            std::vector<SheetMask> cycles;
        };
        std::vector<Slot> slots;
        for (int b = 0; b < nb; ++b) {
            std::map<int, Slot> by_length;
            for (int a : fibers[b])
                by_length[h.rm[a]].points.push_back(a);
            for (SheetMask c : cycles(perms[b]))
                by_length[__builtin_popcount(c)].cycles.push_back(c);
            for (auto& [len, slot] : by_length)
                slots.push_back(slot);
        }
        auto assign = [&](auto&& self, std::size_t s, LabeledTuple& cur) -> void {
            if (s == slots.size()) {
                out.push_back(cur);
                return;
            }
            auto cyc = slots[s].cycles;
            std::sort(cyc.begin(), cyc.end());
            do {
                for (std::size_t i = 0; i < cyc.size(); ++i)
                    cur.label[slots[s].points[i]] = cyc[i];
                self(self, s + 1, cur);
            } while (std::next_permutation(cyc.begin(), cyc.end()));
        };
        assign(assign, 0, base);
    });
    return out;
}

namespace {

void relabel_over(LabeledTuple& t, int b, const Perm& by, const HurwitzDatum& h) {
    for (int a = 0; a < h.num_source(); ++a)
        if (h.F[a] == b)
            t.label[a] = image(by, t.label[a]);
}

}  // namespace

void hurwitz_move(LabeledTuple& t, int i, bool inverse_move, const HurwitzDatum& h) {
    Perm gi = t.perms[i];
    Perm gj = t.perms[i + 1];
    int bi = t.order[i];
    int bj = t.order[i + 1];
    if (!inverse_move) {
        // (g_i, g_j) -> (g_i g_j g_i^-1, g_i); cycles of the moved element are pushed by g_i.
        t.perms[i] = compose(compose(gi, gj), inverse(gi));
        t.perms[i + 1] = gi;
        relabel_over(t, bj, gi, h);
    } else {
        // (g_i, g_j) -> (g_j, g_j^-1 g_i g_j).
        Perm gj_inv = inverse(gj);
        t.perms[i] = gj;
        t.perms[i + 1] = compose(compose(gj_inv, gi), gj);
        relabel_over(t, bi, gj_inv, h);
    }
    std::swap(t.order[i], t.order[i + 1]);
}

void pure_twist(LabeledTuple& t, int i, int j, const HurwitzDatum& h) {
    for (int k = j - 1; k > i; --k)
        hurwitz_move(t, k, false, h);
    hurwitz_move(t, i, false, h);
    hurwitz_move(t, i, false, h);
    for (int k = i + 1; k < j; ++k)
        hurwitz_move(t, k, true, h);
}

void transport(LabeledTuple& t, const std::vector<int>& order, const HurwitzDatum& h) {
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t j = i;
        while (t.order[j] != order[i])
            ++j;
        for (std::size_t k = j; k > i; --k)
            hurwitz_move(t, static_cast<int>(k - 1), false, h);
    }
}

void conjugate(LabeledTuple& t, const Perm& by, const HurwitzDatum& h) {
    Perm inv = inverse(by);
    for (auto& g : t.perms)
        g = compose(compose(by, g), inv);
    for (int a = 0; a < h.num_source(); ++a)
        t.label[a] = image(by, t.label[a]);
}

namespace {

std::vector<std::uint32_t> serialize(const LabeledTuple& t) {
    std::vector<std::uint32_t> out;
    for (auto& g : t.perms)
        for (auto x : g)
            out.push_back(x);
    out.insert(out.end(), t.label.begin(), t.label.end());
    return out;
}

}  // namespace

LabeledTuple canonical_form(const LabeledTuple& t, const HurwitzDatum& h) {
    static std::map<int, std::vector<Perm>> group_cache;
    std::vector<Perm> group;
    {
        std::lock_guard lock(cache_mutex);
        auto it = group_cache.find(h.d);
        if (it == group_cache.end())
            it = group_cache.emplace(h.d, all_perms(h.d)).first;
        group = it->second;
    }
    LabeledTuple best = t;
    auto best_key = serialize(t);
    for (auto& g : group) {
        LabeledTuple c = t;
        conjugate(c, g, h);
        auto key = serialize(c);
        if (key < best_key) {
            best_key = std::move(key);
            best = std::move(c);
        }
    }
    return best;
}

std::vector<std::uint32_t> class_key(const LabeledTuple& t, const HurwitzDatum& h) {
    return serialize(canonical_form(t, h));
}

std::vector<BraidOrbit> braid_orbits(const HurwitzDatum& h) {
    auto labeled = enumerate_labeled_tuples(h);
    std::map<std::vector<std::uint32_t>, LabeledTuple> classes;
    for (auto& t : labeled) {
        auto c = canonical_form(t, h);
        classes.emplace(serialize(c), std::move(c));
    }
    std::uint64_t sheets = factorial(h.d);
    if (labeled.size() != classes.size() * sheets)
        throw std::logic_error("conjugation does not act freely on labeled tuples");

    std::map<std::vector<std::uint32_t>, int> orbit_index;
    std::vector<BraidOrbit> orbits;
    const int n = h.num_target();
    for (auto& [key, rep] : classes) {
        if (orbit_index.count(key))
            continue;
        BraidOrbit orbit;
        orbit.id = static_cast<int>(orbits.size());
        std::deque<LabeledTuple> queue{rep};
        orbit_index[key] = orbit.id;
        while (!queue.empty()) {
            LabeledTuple cur = queue.front();
            queue.pop_front();
            orbit.members.push_back(cur);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    LabeledTuple next = cur;
                    pure_twist(next, i, j, h);
                    next = canonical_form(next, h);
                    auto k = serialize(next);
                    if (!orbit_index.count(k)) {
                        orbit_index[k] = orbit.id;
                        queue.push_back(std::move(next));
                    }
                }
        }
        std::sort(orbit.members.begin(), orbit.members.end(),
                  [](const LabeledTuple& a, const LabeledTuple& b) { return serialize(a) < serialize(b); });
        orbits.push_back(std::move(orbit));
    }
    return orbits;
}

int orbit_of(const std::vector<BraidOrbit>& orbits, const LabeledTuple& t, const HurwitzDatum& h) {
    auto key = class_key(t, h);
    for (auto& o : orbits)
        for (auto& m : o.members)
            if (serialize(m) == key)
                return o.id;
    return -1;
}

}  // namespace mz
