#include "fixtures.hpp"
#include "mz/covers.hpp"
#include "mz/monodromy.hpp"

#include <doctest.h>

using namespace mz;

namespace {

// Four source components over a two-component target; a1..a11 are legs 0..10, b1..b5 are 0..4.
CombinatorialType chain_type() {
    CombinatorialType g;
    g.tau = MarkedTree(5, {{0, 1}, {2, 3, 4}}, {{0, 1}});
    g.sigma = MarkedTree(11, {{5, 6}, {2, 3, 4, 9}, {0, 1}, {7, 8, 10}}, {{0, 1}, {1, 2}, {2, 3}});
    g.vertex_degree = {1, 2, 2, 1};
    g.vertex_map = {0, 1, 0, 1};
    g.edge_map = {0, 0, 0};
    g.edge_ramification = {1, 1, 1};
    return g;
}

}  // namespace

TEST_CASE("validate_type on a four-component type") {
    auto h = fixtures::cubic_eleven_point();
    auto g = chain_type();
    CHECK(validate_type(g, h).ok);
    CHECK(local_profiles(g, h, 1) == std::vector<Partition>{{1, 1}, {2}, {2}, {1, 1}});
    // Local counts 2 and 1 at the degree-two vertices, unramified edges.
    CHECK(type_weight(g, h) == 2);

    auto bad = g;
    bad.edge_ramification[0] = 2;
    auto v = validate_type(bad, h);
    CHECK_FALSE(v.ok);
    CHECK(v.reason.find("fiber profile") != std::string::npos);

    auto wrong_degree = g;
    wrong_degree.vertex_degree[0] = 2;
    CHECK_FALSE(validate_type(wrong_degree, h).ok);

    auto not_full = fixtures::quadratic_four_point();
    CHECK_FALSE(validate_type(g, not_full).ok);

    auto s = source_stratum_class(g, full_mask(11));
    CHECK(s.key == canonical_key(g.sigma));
    CHECK(s.dimension == stratum_dimension(g.sigma));
}

TEST_CASE("trivial type over a one-vertex target") {
    auto h = fixtures::cubic_eleven_point();
    auto types = enumerate_types_over(MarkedTree::single_vertex(5), h);
    REQUIRE(types.size() == 1);
    CHECK(types[0].type.sigma.num_vertices() == 1);
    CHECK(validate_type(types[0].type, h).ok);
    CHECK(types[0].weight == degree_pi_B(h));
}

TEST_CASE("types of the quadratic four-point datum") {
    auto q = full_marking(fixtures::quadratic_four_point());
    // b1, b3 | b2, b4: the ramified edge is forced.
    MarkedTree tau(4, {{0, 2}, {1, 3}}, {{0, 1}});
    auto types = enumerate_types_over(tau, q);
    REQUIRE(types.size() == 1);
    CHECK(types[0].type.sigma.num_vertices() == 2);
    CHECK(types[0].type.edge_ramification == std::vector<int>{2});
    CHECK(types[0].weight == 2);

    for (auto& key : enumerate_stable_trees(4)) {
        std::uint64_t sum = 0;
        for (auto& wt : enumerate_types_over(tree_from_key(key), q)) {
            CHECK(validate_type(wt.type, q).ok);
            sum += wt.weight;
        }
        CHECK(sum == 2);
    }
}

TEST_CASE("type weights equal the degeneration count of monodromy classes") {
    for (auto h : {full_marking(fixtures::quadratic_four_point()), fixtures::cubic_eleven_point(),
                   full_marking(pcf_to_hurwitz(fixtures::quadratic_portrait()))}) {
        for (auto& key : enumerate_stable_trees(h.num_target())) {
            MarkedTree tau = tree_from_key(key);
            auto types = enumerate_types_over(tau, h);
            auto counts = degenerate_types(tau, h);
            CHECK(counts.size() == types.size());
            for (auto& wt : types) {
                auto it = counts.find(type_key(wt.type));
                REQUIRE(it != counts.end());
                CHECK(it->second == wt.weight);
            }
        }
    }
}

TEST_CASE("planar order lists every target point once") {
    for (auto& key : enumerate_stable_trees(6)) {
        auto order = planar_order(tree_from_key(key));
        std::sort(order.begin(), order.end());
        CHECK(order == std::vector<int>{0, 1, 2, 3, 4, 5});
    }
}

TEST_CASE("static polynomial types") {
    auto h = full_marking(pcf_to_hurwitz(fixtures::quadratic_portrait()));
    const int b_inf = 1;
    for (auto& key : enumerate_stable_trees(4))
        for (auto& wt : enumerate_types_over(tree_from_key(key), h)) {
            auto st = is_static_poly_type(wt.type, h, b_inf);
            CHECK(st.ok);
            CHECK(wt.type.sigma.leg_vertex(0) == st.where.v_inf);
            CHECK(check_polytopoly(wt.type, h, b_inf).ok);
            CHECK(check_claim_factor(wt.type, h, 0b0011).ok);
        }
    auto one = enumerate_types_over(MarkedTree::single_vertex(4), h);
    CHECK(is_static_poly_type(one[0].type, h, b_inf).where.v_inf == 0);
    auto fig = fixtures::cubic_eleven_point();
    CHECK_THROWS(is_static_poly_type(chain_type(), fig, 4));
    CHECK_THROWS(check_claim_factor(one[0].type, h, 0b0010));
}

TEST_CASE("image dimension bound") {
    auto h = fixtures::cubic_eleven_point();
    auto one = enumerate_types_over(MarkedTree::single_vertex(5), h);
    CHECK(image_dimension_bound(type_key(one[0].type), full_mask(11)) == 2);
    auto g = chain_type();
    CHECK(image_dimension_bound(type_key(g), full_mask(11)) == 1);
    // Only a1..a5 kept: the vertices over the three-point target side keep their moduli.
    CHECK(image_dimension_bound(type_key(g), 0b11111) <= 1);
}
