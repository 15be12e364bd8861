#include "hypermat/rational.hpp"

#include <cctype>

#include "hypermat/error.hpp"

namespace hypermat {

namespace {

boost::multiprecision::cpp_int parse_integer(std::string_view s, std::string_view whole) {
    if (s.empty()) throw ParseError("empty integer in rational '" + std::string(whole) + "'");
    std::size_t pos = 0;
    bool negative = false;
    if (s[0] == '+' || s[0] == '-') {
        negative = s[0] == '-';
        pos = 1;
    }
    if (pos == s.size()) throw ParseError("missing digits in rational '" + std::string(whole) + "'");
    boost::multiprecision::cpp_int value = 0;
    for (; pos < s.size(); ++pos) {
        if (!std::isdigit(static_cast<unsigned char>(s[pos])))
            throw ParseError("invalid character in rational '" + std::string(whole) + "'");
        value = value * 10 + (s[pos] - '0');
    }
    return negative ? -value : value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto s = trim(text);
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(s, text));
    auto num = parse_integer(trim(s.substr(0, slash)), text);
    auto den = parse_integer(trim(s.substr(slash + 1)), text);
    if (den == 0) throw ParseError("zero denominator in rational '" + std::string(text) + "'");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(num, den);
}

std::string to_string(const Rational& r) {
    auto num = boost::multiprecision::numerator(r);
    auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace hypermat
