#include "mz/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace mz {

namespace {

Z parse_integer(std::string_view s, std::string_view whole) {
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        negative = s[i] == '-';
        ++i;
    }
    if (i == s.size())
        throw std::invalid_argument("malformed fraction \"" + std::string(whole) + "\"");
    Z value = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw std::invalid_argument("malformed fraction \"" + std::string(whole) + "\"");
        value = value * 10 + (s[i] - '0');
    }
    return negative ? Z(-value) : value;
}

}  // namespace

Q parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Q(parse_integer(text, text));
    Z num = parse_integer(text.substr(0, slash), text);
    std::string_view den_text = text.substr(slash + 1);
    if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+'))
        throw std::invalid_argument("malformed fraction \"" + std::string(text) + "\"");
    Z den = parse_integer(den_text, text);
    if (den == 0)
        throw std::invalid_argument("zero denominator in \"" + std::string(text) + "\"");
    return Q(num, den);
}

std::string format_rational(const Q& q) {
    if (denominator(q) == 1)
        return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const Q& q) { return q.convert_to<double>(); }

}  // namespace mz
