#include "dpso/exact.hpp"

#include "dpso/error.hpp"

#include <cctype>

namespace dpso {

std::string to_string(const Exact& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            return false;
    return true;
}

BigInt parse_integer(std::string_view s)
{
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s))
        throw InvalidInput("not an integer: '" + std::string(s) + "'");
    BigInt z(std::string(s), 10);
    return negative ? BigInt(-z) : z;
}

} // namespace

Exact parse_exact(std::string_view text)
{
    if (text.empty())
        throw InvalidInput("empty number");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt num = parse_integer(text.substr(0, slash));
        BigInt den = parse_integer(text.substr(slash + 1));
        if (den == 0)
            throw InvalidInput("zero denominator in '" + std::string(text) + "'");
        Exact q(num, den);
        q.canonicalize();
        return q;
    }

    // decimal with optional exponent
    std::string_view mantissa = text;
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = text.substr(0, e);
        exponent = parse_integer(text.substr(e + 1)).get_si();
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
        negative = mantissa.front() == '-';
        mantissa.remove_prefix(1);
    }
    std::string digits;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
        std::string_view whole = mantissa.substr(0, dot);
        std::string_view frac = mantissa.substr(dot + 1);
        if (whole.empty() && frac.empty())
            throw InvalidInput("not a number: '" + std::string(text) + "'");
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)))
            throw InvalidInput("not a number: '" + std::string(text) + "'");
        digits = std::string(whole) + std::string(frac);
        exponent -= static_cast<long>(frac.size());
    } else {
        if (!all_digits(mantissa))
            throw InvalidInput("not a number: '" + std::string(text) + "'");
        digits = std::string(mantissa);
    }
    Exact q{BigInt(digits, 10)};
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent >= 0)
        q *= scale;
    else
        q /= scale;
    q.canonicalize();
    return negative ? Exact(-q) : q;
}

Exact pow(const Exact& base, unsigned long exponent)
{
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
    Exact q(num, den);
    q.canonicalize();
    return q;
}

BigInt factorial(unsigned long n)
{
    BigInt z;
    mpz_fac_ui(z.get_mpz_t(), n);
    return z;
}

BigInt binomial(unsigned long n, unsigned long k)
{
    if (k > n)
        return 0;
    BigInt z;
    mpz_bin_uiui(z.get_mpz_t(), n, k);
    return z;
}

} // namespace dpso
