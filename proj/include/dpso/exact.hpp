#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dpso {

using BigInt = mpz_class;
/// Canonical arbitrary-precision rational; gmp keeps it reduced with den > 0.
using Exact = mpq_class;

/// Renders "num/den", also for integral values ("13/1").
std::string to_string(const Exact& q);
std::string to_string(const BigInt& z);

/// Parses "a/b", an integer, or a plain decimal ("0.25", "-1.5e-3") exactly.
Exact parse_exact(std::string_view text);

/// num/den in canonical form (the two-argument mpq_class constructor does not reduce).
inline Exact ratio(const BigInt& num, const BigInt& den)
{
    Exact q(num, den);
    q.canonicalize();
    return q;
}

Exact pow(const Exact& base, unsigned long exponent);
BigInt factorial(unsigned long n);
BigInt binomial(unsigned long n, unsigned long k);

/// Scalar conversion used by templates that run in either exact or float mode.
template <class Scalar>
Scalar from_exact(const Exact& q);

template <>
inline Exact from_exact<Exact>(const Exact& q) { return q; }

template <>
inline double from_exact<double>(const Exact& q) { return q.get_d(); }

inline double to_double(const Exact& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

} // namespace dpso
