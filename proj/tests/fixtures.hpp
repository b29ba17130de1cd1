#pragma once

#include "mz/hurwitz.hpp"

#include <string>
#include <vector>

namespace fixtures {

// Degree 2, two simple branch points b1, b2 and two unbranched b3, b4, one marked point per fiber.
inline mz::HurwitzDatum quadratic_four_point() {
    return {{"x1", "x2", "y3", "y4"}, {"b1", "b2", "b3", "b4"}, 2, {0, 1, 2, 3},
            {{2}, {2}, {1, 1}, {1, 1}}, {2, 2, 1, 1}, false, {}};
}

// Degree 3 over five points with every preimage marked: a1..a4 ramified over b1..b4.
inline mz::HurwitzDatum cubic_eleven_point() {
    std::vector<std::string> A;
    for (int i = 1; i <= 11; ++i)
        A.push_back("a" + std::to_string(i));
    return {A, {"b1", "b2", "b3", "b4", "b5"}, 3, {0, 1, 2, 3, 4, 0, 1, 2, 3, 4, 4},
            {{2, 1}, {2, 1}, {2, 1}, {2, 1}, {1, 1, 1}}, {2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1}, true, {}};
}

// z^2 - 1 style portrait: pinf <-> q a two-cycle, u -> v -> pinf.
inline mz::PcfPortrait quadratic_portrait() {
    return {{"pinf", "q", "u", "v"}, 2, {1, 0, 3, 0}, {2, 1, 1, 1}, {{1, 1}, {2}, {2}, {1, 1}}};
}

inline mz::PcfPortrait cubic_portrait() {
    return {{"pinf", "q", "z", "y", "t"}, 3, {1, 0, 3, 4, 0}, {3, 1, 1, 1, 1},
            {{1, 1, 1}, {3}, {3}, {1, 1, 1}, {1, 1, 1}}};
}

inline mz::HurwitzDatum identity_datum(int n) {
    mz::HurwitzDatum h;
    for (int i = 0; i < n; ++i) {
        h.A.push_back("p" + std::to_string(i));
        h.B.push_back("p" + std::to_string(i));
        h.F.push_back(i);
        h.br.push_back({1});
        h.rm.push_back(1);
    }
    h.d = 1;
    h.fully_marked = true;
    return h;
}

}  // namespace fixtures
