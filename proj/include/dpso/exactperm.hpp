#pragma once

#include "dpso/exact.hpp"
#include "dpso/spaces.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <vector>

namespace dpso {

/// Unsigned Stirling number of the first kind: permutations of n items with
/// exactly m cycles. Zero when m > n.
BigInt stirling_first_unsigned(unsigned n, unsigned m);

/// Rows 0..n of the unsigned Stirling triangle; row k has k+1 entries.
std::vector<std::vector<BigInt>> stirling_triangle(unsigned n);

/// All integer partitions of n, grouped by level = n - number of parts.
/// Within a level the partitions are in increasing lexicographic order, so
/// ordinal 0 is (1^n) and the last ordinal is (n).
class PartitionTable {
public:
    explicit PartitionTable(unsigned n);

    unsigned n() const noexcept { return n_; }
    std::size_t size() const noexcept { return states_.size(); }
    unsigned levels() const noexcept { return n_; }

    const CycleType& operator[](std::size_t ordinal) const { return states_.at(ordinal); }
    const std::vector<CycleType>& states() const noexcept { return states_; }

    /// Ordinals of level L occupy [level_begin(L), level_begin(L+1)).
    std::size_t level_begin(unsigned level) const { return offsets_.at(level); }
    std::size_t level_size(unsigned level) const { return offsets_.at(level + 1) - offsets_.at(level); }

    /// Throws InvalidInput for a partition of a different n.
    std::size_t index_of(const CycleType& t) const;

private:
    unsigned n_;
    std::vector<CycleType> states_;
    std::vector<std::size_t> offsets_;
    std::map<std::vector<unsigned>, std::size_t> index_;
};

PartitionTable enumerate_partitions(unsigned n);

/// n! / Π_k (k^{m_k} m_k!) where m_k is the multiplicity of part k.
BigInt permutation_count_of_type(const CycleType& t);

struct KernelEntry {
    std::size_t target;
    Exact probability;
};

/// Sparse row-stochastic matrix over the ordinals of a PartitionTable.
class TransitionKernel {
public:
    TransitionKernel(std::shared_ptr<const PartitionTable> table,
                     std::vector<std::vector<KernelEntry>> rows, std::vector<bool> defined);

    const PartitionTable& table() const noexcept { return *table_; }
    std::shared_ptr<const PartitionTable> table_ptr() const noexcept { return table_; }
    bool defined(std::size_t ordinal) const { return defined_.at(ordinal); }
    /// Entries sorted by target. Throws InvalidInput for an undefined row.
    const std::vector<KernelEntry>& row(std::size_t ordinal) const;
    /// Probability of moving from `from` to `to` (zero when absent).
    Exact probability(std::size_t from, std::size_t to) const;

private:
    std::shared_ptr<const PartitionTable> table_;
    std::vector<std::vector<KernelEntry>> rows_;
    std::vector<bool> defined_;
};

/// Cycle type after one uniformly chosen transposition.
/// A pair inside a k-cycle at cyclic distance d gives parts (d, k-d); a pair
/// across cycles of lengths a and b merges them into one (a+b)-cycle.
TransitionKernel random_move_kernel(unsigned n);
TransitionKernel random_move_kernel(std::shared_ptr<const PartitionTable> table);

/// Cycle type after a uniformly chosen distance-decreasing transposition.
/// The row of (1^n) is undefined.
TransitionKernel improving_move_kernel(unsigned n);
TransitionKernel improving_move_kernel(std::shared_ptr<const PartitionTable> table);

/// Expected number of steps h(λ) to reach (1^n) from every cycle type when each
/// step is an improving move with probability c and a uniform transposition
/// otherwise. Indexed by ordinal; h(1^n) = 0.
///
/// Levels form a block-tridiagonal system. Eliminating from the top level down,
///   h_L = a_L + B_L h_{L-1},   a_L = M⁻¹(1 + U_L a_{L+1}),   B_L = M⁻¹ D_L,
/// with M = I - U_L B_{L+1}, where D_L and U_L are the down and up blocks.
template <class Scalar>
std::vector<Scalar> hitting_times(const TransitionKernel& improving, const TransitionKernel& random,
                                  const Exact& c);

/// Average of h over a uniform start, excluding the start evaluation:
/// Σ_λ count(λ) h(λ) / n! for the pure random walk (c = 0).
/// Exact mode is limited to n <= 14.
template <class Scalar>
Scalar random_walk_sort_time(unsigned n);

/// h(2, 1^{n-2}) under the mixed kernel: the expected return time to an attractor
/// from one transposition away. Exact mode is limited to n <= 14.
template <class Scalar>
Scalar exact_return_time_sorting(unsigned n, const Exact& c);

/// Mean improvement probability over all permutations at transposition distance i:
///   p̂_i = c + (1-c) Σ_{k=1}^{i+1} (k-1)/(n-1) · (n-1)!/(n-k)! · S(n-k, n-i-1) / S(n, n-i).
Exact average_improvement_probability(unsigned n, unsigned i, const Exact& c);

/// The chain (p̂_1, ..., p̂_{n-1}).
std::vector<Exact> average_improvement_profile(unsigned n, const Exact& c);

template <class Scalar>
struct QRatios {
    Scalar h1_ex, h1_ex_prev;
    Scalar h1_av, h1_av_prev;
    Scalar q_ex, q_av;
    /// log_{n/(n-1)} of the respective ratio.
    double degree_ex = 0, degree_av = 0;
};

/// Return-time ratios between n and n-1 for the exact cycle-type model and the
/// averaged birth-death model. Requires n >= 3; exact mode requires n <= 14.
template <class Scalar>
QRatios<Scalar> q_ratios(unsigned n, const Exact& c);

/// Averaged-model part of q_ratios only (cheap for any n); q_ex fields are zero.
template <class Scalar>
QRatios<Scalar> q_av_ratio(unsigned n, const Exact& c);

inline constexpr unsigned kExactSolverLimit = 14;

} // namespace dpso
