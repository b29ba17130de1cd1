#include "mz/weights.hpp"

#include <doctest.h>

using namespace mz;

namespace {

const Q kEps(3, 10);

WeightDatum one_heavy() { return tower_weight_datum(5, 0b00001, kEps); }

// Legs: pinf = 0, p1..p4 = 1..4.
MarkedTree two_vertex(std::vector<int> left, std::vector<int> right) {
    return MarkedTree(5, {std::move(left), std::move(right)}, {{0, 1}});
}

}  // namespace

TEST_CASE("weight data") {
    CHECK(validate_weight_datum(uniform_weights(4, 1)).ok);
    CHECK(validate_weight_datum(WeightDatum{{1, kEps, kEps, kEps, kEps}}).ok);
    CHECK_FALSE(validate_weight_datum(uniform_weights(4, Q(1, 2))).ok);
    CHECK_FALSE(validate_weight_datum(WeightDatum{{1, 1, 1, 0}}).ok);
    CHECK_FALSE(validate_weight_datum(WeightDatum{{1, 1, 1, Q(3, 2)}}).ok);
    CHECK(one_heavy().weights == std::vector<Q>{1, kEps, kEps, kEps, kEps});
    CHECK(tower_weight_datum(5, 0b11111, kEps).weights == uniform_weights(5, 1).weights);
    CHECK_THROWS(tower_weight_datum(5, 0b00001, Q(1, 2)));
    for (int n = 4; n <= 12; ++n) {
        Q e = tower_epsilon(n);
        CHECK(e > Q(1, n - 1));
        CHECK(e < Q(1, n - 2));
    }
}

TEST_CASE("very stable vertices") {
    auto w = one_heavy();
    auto t = two_vertex({0, 1}, {2, 3, 4});
    CHECK_FALSE(is_eps_very_stable(t, 1, w));
    auto s = two_vertex({0, 1, 2}, {3, 4});
    CHECK(is_eps_very_stable(s, 0, w));
    for (auto& key : enumerate_stable_trees(6)) {
        auto r = tree_from_key(key);
        for (int v = 0; v < r.num_vertices(); ++v)
            CHECK(is_eps_very_stable(r, v, uniform_weights(6, 1)));
    }
}

TEST_CASE("heavy/light shortcut") {
    auto t = two_vertex({0, 1}, {2, 3, 4});
    CHECK_FALSE(is_heavy_light_very_stable(t, 1, 0b00011));
    CHECK(is_heavy_light_very_stable(t, 0, 0b00011));
    for (auto& key : enumerate_stable_trees(5)) {
        auto r = tree_from_key(key);
        for (int v = 0; v < r.num_vertices(); ++v)
            CHECK(is_heavy_light_very_stable(r, v, 0b11111));
    }
}

TEST_CASE("reductions") {
    auto w = one_heavy();
    auto ident = stabilize(two_vertex({0, 1}, {2, 3, 4}), uniform_weights(5, 1));
    CHECK(ident.kept_tree.num_vertices() == 2);
    for (auto& at : ident.leg_clusters)
        for (LegMask c : at)
            CHECK(popcount(c) == 1);

    auto r = stabilize(two_vertex({0, 1}, {2, 3, 4}), w);
    CHECK(r.kept_tree.num_vertices() == 1);
    CHECK(r.image_dimension == 0);
    bool found = false;
    for (auto& at : r.leg_clusters)
        for (LegMask c : at)
            found = found || c == 0b11100;
    CHECK(found);

    auto s = stabilize(two_vertex({0, 1, 2}, {3, 4}), w);
    CHECK(s.kept_tree.num_vertices() == 1);
    CHECK(s.image_dimension == 1);
}

TEST_CASE("reduction composes along a tower") {
    CHECK(compose_reductions(two_vertex({0, 1}, {2, 3, 4}), one_heavy(), one_heavy()).ok);
    for (auto& key : enumerate_stable_trees(5)) {
        auto t = tree_from_key(key);
        for (int l = 5; l > 1; --l) {
            auto wl = tower_weight_datum(5, full_mask(l), tower_epsilon(5));
            auto wl1 = tower_weight_datum(5, full_mask(l - 1), tower_epsilon(5));
            CHECK(compose_reductions(t, wl, wl1).ok);
        }
    }
    for (int n = 4; n <= 6; ++n)
        for (auto& key : enumerate_stable_trees(n))
            CHECK(compose_reductions(tree_from_key(key), uniform_weights(n, 1),
                                     heavy_light_weights(n, 0b11, Q(1, n)))
                      .ok);
}

TEST_CASE("kernel strata") {
    for (int k = 0; k <= 2; ++k)
        CHECK(kernel_strata(5, uniform_weights(5, 1), k).empty());
    auto w = tower_weight_datum(5, 0b00011, kEps);
    auto k1 = kernel_strata(5, w, 1);
    auto target = canonical_key(two_vertex({0, 1}, {2, 3, 4}));
    CHECK(std::find(k1.begin(), k1.end(), target) != k1.end());
    CHECK(kernel_strata(5, w, 2).empty());
}
