#include "treecover/rational.hpp"

#include <cctype>
#include <limits>

namespace treecover {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    if (s.empty()) throw ParseError("empty rational literal");
    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) throw ParseError("bare sign in rational literal '" + std::string(text) + "'");

    auto slash = s.find('/');
    Rational value;
    if (slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw ParseError("malformed fraction '" + std::string(text) + "'");
        BigInt n{std::string(num)};
        BigInt d{std::string(den)};
        if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        value = Rational(n, d);
    } else {
        auto dot = s.find('.');
        if (dot != std::string_view::npos) {
            std::string_view whole = s.substr(0, dot);
            std::string_view frac = s.substr(dot + 1);
            if (whole.empty() && frac.empty())
                throw ParseError("malformed decimal '" + std::string(text) + "'");
            if (!whole.empty() && !all_digits(whole))
                throw ParseError("malformed decimal '" + std::string(text) + "'");
            if (!frac.empty() && !all_digits(frac))
                throw ParseError("malformed decimal '" + std::string(text) + "'");
            BigInt n = whole.empty() ? BigInt(0) : BigInt(std::string(whole));
            BigInt scale = 1;
            for (char c : frac) {
                n = n * 10 + (c - '0');
                scale *= 10;
            }
            value = Rational(n, scale);
        } else {
            if (!all_digits(s))
                throw ParseError("malformed rational '" + std::string(text) + "'");
            value = Rational(BigInt(std::string(s)));
        }
    }
    if (negative) value = -value;
    return value;
}

std::string format_rational(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

BigInt floor_rational(const Rational& q) {
    BigInt n = numerator(q), d = denominator(q);
    BigInt quot = n / d, rem = n % d;
    if (rem != 0 && n < 0) --quot;
    return quot;
}

BigInt ceil_rational(const Rational& q) {
    BigInt n = numerator(q), d = denominator(q);
    BigInt quot = n / d, rem = n % d;
    if (rem != 0 && n > 0) ++quot;
    return quot;
}

bool is_integer(const Rational& q) { return denominator(q) == 1; }

Rational mul_add_rational(const Rational& q, long mul, long add) {
    if (is_integer(q)) return Rational(numerator(q) * mul + add);
    return q * mul + add;
}

Rational mul_div_rational(const Rational& q, long mul, long div) {
    if (div <= 0) throw std::invalid_argument("mul_div_rational requires a positive divisor");
    if (is_integer(q)) {
        BigInt n = numerator(q) * mul;
        if (n % div == 0) return Rational(n / div);
    }
    return q * mul / div;
}

Rational add_scaled_rational(const Rational& q, long mul, const Rational& b) {
    if (is_integer(q) && is_integer(b)) return Rational(numerator(q) + mul * numerator(b));
    return q + mul * b;
}

std::int64_t to_int64(const BigInt& v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("value out of int64 range: " + v.str());
    return static_cast<std::int64_t>(v);
}

} // namespace treecover
