#include "bellnl/rational.hpp"

#include <cctype>
#include <cstdint>

namespace bellnl {

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start])))
        ++start;
    s = s.substr(start);
    if (s.empty())
        throw std::invalid_argument("empty rational literal");
    if (s.front() == '+')
        s.erase(0, 1);
    auto slash = s.find('/');
    auto valid_int = [](std::string_view t) {
        if (!t.empty() && t.front() == '-')
            t.remove_prefix(1);
        if (t.empty())
            return false;
        for (char c : t)
            if (c < '0' || c > '9')
                return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!valid_int(s))
            throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
        return Rational(mpz_class(s));
    }
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den.front() == '-')
        throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    mpz_class d(den);
    if (d == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational q(mpz_class(num), d);
    q.canonicalize();
    return q;
}

std::string rational_to_string(const Rational& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_double(double v)
{
    if (!std::isfinite(v))
        throw std::invalid_argument("cannot convert non-finite double to rational");
    Rational q(v); // mpq_set_d is exact
    q.canonicalize();
    return q;
}

Rational nearest_rational(double v, long max_den)
{
    if (!std::isfinite(v))
        throw std::invalid_argument("cannot approximate non-finite double");
    if (max_den < 1)
        max_den = 1;
    // Continued-fraction convergents, with the best semiconvergent at the end.
    const bool negative = v < 0;
    double x = std::fabs(v);
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double rem = x;
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(rem);
        if (fl > 9e15)
            break;
        auto a = static_cast<std::int64_t>(fl);
        std::int64_t h2 = a * h1 + h0;
        std::int64_t k2 = a * k1 + k0;
        if (k2 > max_den) {
            std::int64_t t = (max_den - k0) / k1;
            std::int64_t hs = t * h1 + h0, ks = t * k1 + k0;
            Rational a1(static_cast<long>(h1), static_cast<unsigned long>(k1));
            Rational a2(static_cast<long>(hs), static_cast<unsigned long>(ks));
            a1.canonicalize();
            a2.canonicalize();
            Rational best = std::fabs(a1.get_d() - x) <= std::fabs(a2.get_d() - x) ? a1 : a2;
            return negative ? Rational(-best) : best;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        double frac = rem - fl;
        if (frac < 1e-18)
            break;
        rem = 1.0 / frac;
    }
    Rational r(static_cast<long>(h1), static_cast<unsigned long>(k1));
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

} // namespace bellnl
