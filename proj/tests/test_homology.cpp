#include "fixtures.hpp"
#include "mz/homology.hpp"

#include <doctest.h>

using namespace mz;

namespace {

Q column_total(const Pushforward& p, int c) {
    Q s = 0;
    for (auto& row : p.matrix.entries)
        s += row[c];
    for (auto& ex : p.excess)
        if (ex.column == c)
            s += ex.coefficient;
    return s;
}

StrataMatrix square(int n, int k, QMatrix entries) {
    auto basis = strata_basis(n, k);
    return {basis, basis, std::move(entries)};
}

}  // namespace

TEST_CASE("strata bases") {
    auto b = strata_basis(5, 1);
    CHECK(b.size() == 10);
    for (int i = 0; i < b.size(); ++i)
        CHECK(b.index_of(b.keys[i]) == i);
    CHECK(b.index_of(canonical_key(MarkedTree::single_vertex(5))) == -1);
}

TEST_CASE("identity cover pushes forward to permutation matrices") {
    auto h = fixtures::identity_datum(5);
    for (int k = 0; k <= 2; ++k) {
        auto p = pushforward_matrix(h, k);
        CHECK(p.matrix.entries == identity_matrix(p.matrix.domain.size()));
        CHECK(p.excess.empty());
        auto r = spectral_radius(p.matrix.entries);
        CHECK(r.exact);
        CHECK(r.value == 1.0);
    }
    CHECK_THROWS(pushforward_matrix(h, 3));
}

TEST_CASE("quadratic portrait pushforward") {
    auto h = pcf_to_hurwitz(fixtures::quadratic_portrait());
    auto p0 = pushforward_matrix(h, 0);
    CHECK(p0.matrix.entries == QMatrix{{1, 0, 0}, {0, 2, 0}, {1, 0, 0}});
    CHECK(p0.excess.size() == 1);
    for (int c = 0; c < 3; ++c)
        CHECK(column_total(p0, c) == 2);
    auto p1 = pushforward_matrix(h, 1);
    CHECK(p1.matrix.entries == QMatrix{{2}});

    auto single = pushforward_matrix(h, 0, 0);
    CHECK(single.orbit == 0);
    CHECK(single.matrix.entries == p0.matrix.entries);
    CHECK_THROWS(pushforward_matrix(h, 0, 5));
}

TEST_CASE("pushforward is independent of the thread count") {
    auto h = pcf_to_hurwitz(fixtures::cubic_portrait());
    for (int k = 0; k <= 2; ++k) {
        auto a = pushforward_matrix(h, k, {}, 1);
        auto b = pushforward_matrix(h, k, {}, 4);
        CHECK(a.matrix.entries == b.matrix.entries);
        CHECK(a.excess.size() == b.excess.size());
        CHECK(a.dropped_terms == b.dropped_terms);
    }
}

TEST_CASE("Keel relations") {
    CHECK(keel_quotient_rank(4) == 1);
    CHECK(keel_quotient_rank(5) == 5);
    CHECK(keel_divisor_relations(5).size() == 10);
    CHECK_THROWS(keel_relation(4, 0, 0, 1, 2));
    auto r = keel_relation(4, 0, 1, 2, 3);
    int nonzero = 0;
    for (auto& x : r)
        nonzero += x != 0;
    CHECK(nonzero == 2);
}

TEST_CASE("kernel invariance") {
    auto id = square(5, 1, identity_matrix(10));
    auto k = strata_basis(5, 1).keys;
    CHECK(kernel_invariance_check(id, {k[0], k[3]}).ok);
    CHECK(kernel_invariance_check(id, {}).ok);
    QMatrix leak = identity_matrix(10);
    leak[4][0] = 1;
    auto r = kernel_invariance_check(square(5, 1, leak), {k[0]});
    CHECK_FALSE(r.ok);
    CHECK(r.column == 0);
    CHECK(r.row == 4);
    CHECK(quotient_matrix(square(5, 1, leak), {k[0]}).size() == 9);
    CHECK_THROWS(kernel_invariance_check(square(5, 1, leak), {canonical_key(MarkedTree::single_vertex(5))}));
}

TEST_CASE("spectral radius") {
    CHECK(spectral_radius(identity_matrix(4)).value == 1.0);
    auto one = spectral_radius(QMatrix{{7}});
    CHECK(one.exact);
    CHECK(one.value == 7.0);
    auto golden = spectral_radius(QMatrix{{1, 1}, {1, 0}});
    CHECK_FALSE(golden.exact);
    CHECK(golden.value == doctest::Approx(1.6180339887498949).epsilon(1e-12));
    CHECK(characteristic_polynomial(QMatrix{{1, 1}, {1, 0}}) == std::vector<Q>{-1, -1, 1});
    CHECK_THROWS(spectral_radius(QMatrix{{-1}}));
    QMatrix big(31, std::vector<Q>(31, 0));
    for (int i = 0; i < 31; ++i)
        big[i][(i + 1) % 31] = 2;
    auto p = spectral_radius(big);
    CHECK(p.method == "power iteration");
    CHECK(p.value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rank(QMatrix{{1, 2}, {2, 4}}) == 1);
}

TEST_CASE("stability reports") {
    auto q = stability_report(fixtures::quadratic_portrait());
    CHECK(q.ok);
    CHECK(q.heavy == std::vector<int>{0, 1});
    REQUIRE(q.degrees.size() == 2);
    for (auto& d : q.degrees)
        CHECK(d.invariance.ok);
    CHECK(q.type_failures.empty());

    auto c = stability_report(fixtures::cubic_portrait(), {}, {}, 2);
    CHECK(c.ok);
    REQUIRE(c.degrees.size() == 3);
    for (auto& d : c.degrees)
        CHECK(d.invariance.ok);
    CHECK(c.degrees[0].radius.value == 24.0);
    CHECK(c.degrees[1].kernel.size() == 1);
    CHECK(c.degrees[2].radius.value == 72.0);

    auto r = stability_report(PcfPortrait{{"a", "b", "c", "d"}, 1, {0, 1, 2, 3}, {1, 1, 1, 1}, {{1}, {1}, {1}, {1}}});
    CHECK_FALSE(r.ok);
    CHECK(r.input_error);

    auto eps = stability_report(fixtures::quadratic_portrait(), {}, {}, 1, Q(1, 2));
    CHECK(eps.input_error);
    auto outside = stability_report(fixtures::quadratic_portrait(), 3);
    CHECK_FALSE(outside.within_theorem);
}
