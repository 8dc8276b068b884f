#pragma once

#include "dpso/exact.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace dpso {

enum class ScalarMode { exact, floating };

/// Birth-death chain M((p_i)) on states S_0..S_n. From S_i (i >= 1) the chain
/// moves to S_{i-1} with probability p̄_i and to S_{i+1} otherwise, where the
/// clamped view is p̄_i = min(1, p_i) for i < n and p̄_n = 1. Raw entries may
/// exceed 1 but must be non-negative.
template <class Scalar>
struct BirthDeathSpec {
    /// p[0] holds p_1; n = p.size().
    std::vector<Scalar> p;

    std::size_t n() const noexcept { return p.size(); }
};

/// The clamped sequence p̄_1..p̄_n. Throws InvalidInput for an empty or negative spec.
template <class Scalar>
std::vector<Scalar> clamped(const BirthDeathSpec<Scalar>& spec);

/// H_1..H_n (index 0 is H_1) from H_n = 1 and
///   H_i = 1/p̄_i + (1 - p̄_i)/p̄_i · H_{i+1}.
/// Throws UndefinedReturnTime when some p̄_i with i < n is zero.
template <class Scalar>
std::vector<Scalar> return_times(const BirthDeathSpec<Scalar>& spec);

/// Variances V_1..V_n of the return times from V_n = 0 and
///   V_i = (1 - p̄_i)/p̄_i · V_{i+1} + (1 - p̄_i)/p̄_i² · (H_{i+1} + 1)².
template <class Scalar>
std::vector<Scalar> return_time_variances(const BirthDeathSpec<Scalar>& spec,
                                          const std::vector<Scalar>& H);

/// Non-recursive form of H_k (1-based k):
///   Σ_{i=k..n} 1/p̄_i · Π_{j=k..i-1} r_j  -  Π_{j=k..n} r_j,   r_j = (1 - p̄_j)/p̄_j.
template <class Scalar>
Scalar h_closed_form(const BirthDeathSpec<Scalar>& spec, std::size_t k);

/// H_1 of the constant chain p_i = p:
/// (1 - 2p((1-p)/p)^n)/(2p - 1), and 2n - 1 at p = 1/2. Requires 0 < p <= 1.
template <class Scalar>
Scalar h1_constant(const Scalar& p, std::size_t n);

/// Fitness-level estimate Σ_i ((H1 + 1)(1/s_i - 1) + 1). Requires every s_i in (0, 1].
template <class Scalar>
Scalar fitness_level_time(const Scalar& H1, const std::vector<Scalar>& s);

enum class Profile { onemax, sort_min, sort_max };

Profile parse_profile(std::string_view name);

/// onemax: p_i = c + (1-c) i/n, i = 1..n.
/// sort-min: p_i = c + (1-c) i/C(n,2), sort-max: p_i = c + (1-c) C(i+1,2)/C(n,2),
/// both for i = 1..n-1 (the diameter of the transposition graph).
template <class Scalar>
BirthDeathSpec<Scalar> standard_profile(Profile profile, std::size_t n, const Exact& c);

/// Exponential base exp(∫_0^{k*/n} ln((1 - p(nx))/p(nx)) dx), where k* is the
/// point where the non-decreasing profile p reaches 1/2 (k* = n when it never
/// does). Returns 1 when p(0) >= 1/2. Throws InvalidInput if p leaves (0, 1]
/// or decreases somewhere on a sample grid.
double base_by_integration(const std::function<double(double)>& p, double n, double tol = 1e-10);

/// β(c) = 2^{1/(1-c)} (1-c) c^{c/(1-c)} for 0 < c <= 1/2.
double beta_base(double c);

/// α(c) = (1+s)/(1-s) · exp(-2 sqrt(c/(1-c)) · atan(sqrt((1-2c)/(2c)))),
/// s = sqrt((1-2c)/(2(1-c))), for 0 < c <= 1/2.
double alpha_base(double c);

extern template std::vector<Exact> clamped(const BirthDeathSpec<Exact>&);
extern template std::vector<double> clamped(const BirthDeathSpec<double>&);
extern template std::vector<Exact> return_times(const BirthDeathSpec<Exact>&);
extern template std::vector<double> return_times(const BirthDeathSpec<double>&);
extern template std::vector<Exact> return_time_variances(const BirthDeathSpec<Exact>&,
                                                         const std::vector<Exact>&);
extern template std::vector<double> return_time_variances(const BirthDeathSpec<double>&,
                                                          const std::vector<double>&);
extern template Exact h_closed_form(const BirthDeathSpec<Exact>&, std::size_t);
extern template double h_closed_form(const BirthDeathSpec<double>&, std::size_t);
extern template Exact h1_constant(const Exact&, std::size_t);
extern template double h1_constant(const double&, std::size_t);
extern template Exact fitness_level_time(const Exact&, const std::vector<Exact>&);
extern template double fitness_level_time(const double&, const std::vector<double>&);
extern template BirthDeathSpec<Exact> standard_profile(Profile, std::size_t, const Exact&);
extern template BirthDeathSpec<double> standard_profile(Profile, std::size_t, const Exact&);

} // namespace dpso
