#pragma once

#include <string>
#include <utility>

namespace mz {

struct Verdict {
    bool ok = true;
    std::string reason;

    static Verdict pass() { return {}; }
    static Verdict fail(std::string why) { return {false, std::move(why)}; }
    explicit operator bool() const { return ok; }
};

}  // namespace mz
