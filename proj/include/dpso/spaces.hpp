#pragma once

#include "dpso/rng.hpp"

#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dpso {

enum class SpaceKind { hypercube, permutations };

/// A point of {0,1}^n.
class BitString {
public:
    BitString() = default;
    /// Throws InvalidInput unless every entry is 0 or 1 and the string is non-empty.
    explicit BitString(std::vector<std::uint8_t> bits);

    static BitString ones(std::size_t n);
    static BitString zeros(std::size_t n);

    std::size_t size() const noexcept { return bits_.size(); }
    std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    void flip(std::size_t i) noexcept { bits_[i] ^= 1U; }

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// A bijection on {0,...,n-1} in one-line notation: images()[i] is the image of i.
class Permutation {
public:
    Permutation() = default;
    /// Throws InvalidInput unless `images` is a permutation of 0..n-1, n >= 1.
    explicit Permutation(std::vector<std::uint32_t> images);

    static Permutation identity(std::size_t n);

    std::size_t size() const noexcept { return images_.size(); }
    std::uint32_t operator[](std::size_t i) const noexcept { return images_[i]; }
    std::span<const std::uint32_t> images() const noexcept { return images_; }

    Permutation inverse() const;
    /// (this ∘ other)(i) = this[other[i]].
    Permutation compose(const Permutation& other) const;
    /// this ← this ∘ (i j), i.e. exchange the entries at positions i and j.
    void swap_positions(std::size_t i, std::size_t j) noexcept { std::swap(images_[i], images_[j]); }

    std::size_t cycle_count() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::uint32_t> images_;
};

/// Cycle lengths of a permutation: an integer partition of n, sorted non-increasing.
class CycleType {
public:
    CycleType() = default;
    /// Sorts the parts; throws InvalidInput on an empty list or a zero part.
    explicit CycleType(std::vector<unsigned> parts);

    static CycleType of(const Permutation& p);
    static CycleType identity(unsigned n) { return CycleType(std::vector<unsigned>(n, 1U)); }

    std::span<const unsigned> parts() const noexcept { return parts_; }
    unsigned n() const noexcept { return n_; }
    std::size_t cycles() const noexcept { return parts_.size(); }
    /// Transposition distance of any permutation of this type to the identity.
    unsigned level() const noexcept { return n_ - static_cast<unsigned>(parts_.size()); }

    friend bool operator==(const CycleType& a, const CycleType& b) { return a.parts_ == b.parts_; }
    friend std::strong_ordering operator<=>(const CycleType& a, const CycleType& b)
    {
        return a.parts_ <=> b.parts_;
    }

private:
    std::vector<unsigned> parts_;
    unsigned n_ = 0;
};

/// "0110"
std::string to_string(const BitString& x);
/// 1-indexed, comma separated: "2,1,3,4"
std::string to_string(const Permutation& x);
/// Dash separated parts: "3-1"
std::string to_string(const CycleType& t);

BitString parse_bitstring(std::string_view text);
Permutation parse_permutation(std::string_view text);
CycleType parse_cycle_type(std::string_view text);

/// Cycle type of the difference permutation x ∘ y⁻¹.
CycleType cycle_type_of(const Permutation& x, const Permutation& y);

/// n choose 2 for small n.
constexpr std::uint64_t pairs(std::uint64_t k) noexcept { return k < 2 ? 0 : k * (k - 1) / 2; }

/// OneMax search space: the n-dimensional hypercube with single bit flips as
/// neighborhood. The objective is the Hamming distance to `target`.
class Hypercube {
public:
    using Point = BitString;
    static constexpr SpaceKind kind = SpaceKind::hypercube;

    explicit Hypercube(std::size_t n, std::optional<BitString> target = std::nullopt);

    std::size_t dimension() const noexcept { return n_; }
    std::size_t diameter() const noexcept { return n_; }
    const BitString& target() const noexcept { return target_; }
    bool contains(const BitString& x) const noexcept { return x.size() == n_; }

    std::size_t distance(const BitString& x, const BitString& y) const;
    std::size_t objective(const BitString& x) const { return distance(x, target_); }

    BitString sample_uniform(Rng& rng) const;
    BitString sample_neighbor(const BitString& x, Rng& rng) const;
    std::size_t count_improving_neighbors(const BitString& x, const BitString& anchor) const
    {
        return distance(x, anchor);
    }
    /// Throws InvalidInput when x == anchor.
    BitString sample_improving_neighbor(const BitString& x, const BitString& anchor, Rng& rng) const;
    /// Uniform over the points at Hamming distance d from anchor.
    BitString sample_at_distance(const BitString& anchor, std::size_t d, Rng& rng) const;

    void move_to_random_neighbor(BitString& x, Rng& rng) const;
    void move_toward(BitString& x, const BitString& anchor, Rng& rng) const;

private:
    void check(const BitString& x) const;

    std::size_t n_;
    BitString target_;
};

/// Sorting search space: permutations of n items, neighbors differ by one
/// transposition. The objective is the transposition distance to `target`.
class PermutationSpace {
public:
    using Point = Permutation;
    static constexpr SpaceKind kind = SpaceKind::permutations;

    explicit PermutationSpace(std::size_t n, std::optional<Permutation> target = std::nullopt);

    std::size_t dimension() const noexcept { return n_; }
    std::size_t diameter() const noexcept { return n_ - 1; }
    const Permutation& target() const noexcept { return target_; }
    bool contains(const Permutation& x) const noexcept { return x.size() == n_; }

    /// n minus the number of cycles of x ∘ y⁻¹.
    std::size_t distance(const Permutation& x, const Permutation& y) const;
    std::size_t objective(const Permutation& x) const { return distance(x, target_); }

    Permutation sample_uniform(Rng& rng) const;
    /// Throws InvalidInput when n < 2.
    Permutation sample_neighbor(const Permutation& x, Rng& rng) const;
    /// Sum of C(k,2) over the cycles of the difference permutation.
    std::size_t count_improving_neighbors(const Permutation& x, const Permutation& anchor) const;
    /// Throws InvalidInput when x == anchor.
    Permutation sample_improving_neighbor(const Permutation& x, const Permutation& anchor,
                                          Rng& rng) const;
    /// Uniform over the permutations at transposition distance d from anchor.
    Permutation sample_at_distance(const Permutation& anchor, std::size_t d, Rng& rng) const;

    void move_to_random_neighbor(Permutation& x, Rng& rng) const;
    void move_toward(Permutation& x, const Permutation& anchor, Rng& rng) const;

private:
    void check(const Permutation& x) const;

    std::size_t n_;
    Permutation target_;
};

template <class S>
concept SearchSpace = requires(const S& s, typename S::Point& x, const typename S::Point& y,
                               Rng& rng, std::size_t d) {
    { s.dimension() } -> std::convertible_to<std::size_t>;
    { s.diameter() } -> std::convertible_to<std::size_t>;
    { s.distance(y, y) } -> std::convertible_to<std::size_t>;
    { s.objective(y) } -> std::convertible_to<std::size_t>;
    { s.sample_uniform(rng) } -> std::same_as<typename S::Point>;
    { s.sample_at_distance(y, d, rng) } -> std::same_as<typename S::Point>;
    s.move_to_random_neighbor(x, rng);
    s.move_toward(x, y, rng);
};

/// Plain description of a search space, as read from flags or experiment files.
struct SpaceDescriptor {
    SpaceKind kind = SpaceKind::hypercube;
    std::size_t n = 1;
    /// Serialized optimum; all-ones resp. identity when absent.
    std::optional<std::string> target;
};

Hypercube make_hypercube(const SpaceDescriptor& d);
PermutationSpace make_permutation_space(const SpaceDescriptor& d);

/// Calls f with the concrete space described by d.
template <class F>
decltype(auto) visit_space(const SpaceDescriptor& d, F&& f)
{
    if (d.kind == SpaceKind::hypercube)
        return f(make_hypercube(d));
    return f(make_permutation_space(d));
}

} // namespace dpso
