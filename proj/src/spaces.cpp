#include "dpso/spaces.hpp"

#include "dpso/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dpso {

// ---------------------------------------------------------------- points

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits))
{
    if (bits_.empty())
        throw InvalidInput("bit string must have length >= 1");
    for (auto b : bits_)
        if (b > 1)
            throw InvalidInput("bit string entries must be 0 or 1");
}

BitString BitString::ones(std::size_t n) { return BitString(std::vector<std::uint8_t>(n, 1)); }
BitString BitString::zeros(std::size_t n) { return BitString(std::vector<std::uint8_t>(n, 0)); }

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images))
{
    if (images_.empty())
        throw InvalidInput("permutation must have length >= 1");
    std::vector<bool> seen(images_.size(), false);
    for (auto v : images_) {
        if (v >= images_.size() || seen[v])
            throw InvalidInput("not a permutation of 0..n-1");
        seen[v] = true;
    }
}

Permutation Permutation::identity(std::size_t n)
{
    std::vector<std::uint32_t> v(n);
    std::iota(v.begin(), v.end(), 0U);
    return Permutation(std::move(v));
}

Permutation Permutation::inverse() const
{
    std::vector<std::uint32_t> inv(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i)
        inv[images_[i]] = static_cast<std::uint32_t>(i);
    Permutation p;
    p.images_ = std::move(inv);
    return p;
}

Permutation Permutation::compose(const Permutation& other) const
{
    if (other.size() != size())
        throw InvalidInput("dimension mismatch in composition");
    Permutation p;
    p.images_.resize(size());
    for (std::size_t i = 0; i < size(); ++i)
        p.images_[i] = images_[other.images_[i]];
    return p;
}

std::size_t Permutation::cycle_count() const
{
    std::vector<bool> seen(size(), false);
    std::size_t cycles = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        if (seen[i])
            continue;
        ++cycles;
        for (std::size_t j = i; !seen[j]; j = images_[j])
            seen[j] = true;
    }
    return cycles;
}

CycleType::CycleType(std::vector<unsigned> parts) : parts_(std::move(parts))
{
    if (parts_.empty())
        throw InvalidInput("cycle type needs at least one part");
    std::sort(parts_.begin(), parts_.end(), std::greater<>());
    if (parts_.back() == 0)
        throw InvalidInput("cycle type parts must be positive");
    n_ = std::accumulate(parts_.begin(), parts_.end(), 0U);
}

namespace {

/// Cycles of p as lists of positions, in order of their smallest element.
std::vector<std::vector<std::uint32_t>> cycles_of(std::span<const std::uint32_t> p)
{
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<bool> seen(p.size(), false);
    for (std::uint32_t i = 0; i < p.size(); ++i) {
        if (seen[i])
            continue;
        auto& cyc = out.emplace_back();
        for (std::uint32_t j = i; !seen[j]; j = p[j]) {
            seen[j] = true;
            cyc.push_back(j);
        }
    }
    return out;
}

/// ρ = anchor⁻¹ ∘ x. Conjugate to x ∘ anchor⁻¹, and exchanging positions i, j
/// of x exchanges positions i, j of ρ, so ρ's cycles index x's positions directly.
std::vector<std::uint32_t> relative(const Permutation& x, const Permutation& anchor)
{
    std::vector<std::uint32_t> inv(anchor.size());
    for (std::uint32_t i = 0; i < anchor.size(); ++i)
        inv[anchor[i]] = i;
    std::vector<std::uint32_t> rho(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        rho[i] = inv[x[i]];
    return rho;
}

} // namespace

CycleType CycleType::of(const Permutation& p)
{
    std::vector<unsigned> parts;
    for (const auto& c : cycles_of(p.images()))
        parts.push_back(static_cast<unsigned>(c.size()));
    return CycleType(std::move(parts));
}

CycleType cycle_type_of(const Permutation& x, const Permutation& y)
{
    if (x.size() != y.size())
        throw InvalidInput("dimension mismatch");
    return CycleType::of(x.compose(y.inverse()));
}

// --------------------------------------------------------- serialization

std::string to_string(const BitString& x)
{
    std::string s;
    s.reserve(x.size());
    for (auto b : x.bits())
        s.push_back(b ? '1' : '0');
    return s;
}

std::string to_string(const Permutation& x)
{
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i)
            s.push_back(',');
        s += std::to_string(x[i] + 1);
    }
    return s;
}

std::string to_string(const CycleType& t)
{
    std::string s;
    for (std::size_t i = 0; i < t.parts().size(); ++i) {
        if (i)
            s.push_back('-');
        s += std::to_string(t.parts()[i]);
    }
    return s;
}

namespace {

std::vector<unsigned> split_unsigned(std::string_view text, char sep, const char* what)
{
    std::vector<unsigned> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(sep, start);
        if (end == std::string_view::npos)
            end = text.size();
        auto tok = text.substr(start, end - start);
        if (tok.empty() || tok.size() > 9
            || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw InvalidInput(std::string("malformed ") + what + ": '" + std::string(text) + "'");
        out.push_back(static_cast<unsigned>(std::stoul(std::string(tok))));
        start = end + 1;
    }
    return out;
}

} // namespace

BitString parse_bitstring(std::string_view text)
{
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char ch : text) {
        if (ch != '0' && ch != '1')
            throw InvalidInput("malformed bit string: '" + std::string(text) + "'");
        bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return BitString(std::move(bits));
}

Permutation parse_permutation(std::string_view text)
{
    auto values = split_unsigned(text, ',', "permutation");
    std::vector<std::uint32_t> images;
    images.reserve(values.size());
    for (auto v : values) {
        if (v == 0)
            throw InvalidInput("permutation entries are 1-indexed");
        images.push_back(v - 1);
    }
    return Permutation(std::move(images));
}

CycleType parse_cycle_type(std::string_view text)
{
    return CycleType(split_unsigned(text, '-', "cycle type"));
}

// -------------------------------------------------------------- hypercube

Hypercube::Hypercube(std::size_t n, std::optional<BitString> target)
    : n_(n), target_(target ? std::move(*target) : BitString())
{
    if (n_ < 1)
        throw InvalidInput("hypercube dimension must be >= 1");
    if (!target)
        target_ = BitString::ones(n_);
    check(target_);
}

void Hypercube::check(const BitString& x) const
{
    if (x.size() != n_)
        throw InvalidInput("bit string length " + std::to_string(x.size())
                           + " does not match dimension " + std::to_string(n_));
}

std::size_t Hypercube::distance(const BitString& x, const BitString& y) const
{
    check(x);
    check(y);
    std::size_t d = 0;
    for (std::size_t i = 0; i < n_; ++i)
        d += x[i] != y[i];
    return d;
}

BitString Hypercube::sample_uniform(Rng& rng) const
{
    std::vector<std::uint8_t> bits(n_);
    for (auto& b : bits)
        b = static_cast<std::uint8_t>(rng() >> 63);
    return BitString(std::move(bits));
}

void Hypercube::move_to_random_neighbor(BitString& x, Rng& rng) const
{
    x.flip(rng.below(n_));
}

void Hypercube::move_toward(BitString& x, const BitString& anchor, Rng& rng) const
{
    const std::size_t d = distance(x, anchor);
    if (d == 0)
        throw InvalidInput("no improving neighbor: point equals anchor");
    auto r = rng.below(d);
    for (std::size_t i = 0; i < n_; ++i) {
        if (x[i] != anchor[i] && r-- == 0) {
            x.flip(i);
            return;
        }
    }
}

BitString Hypercube::sample_neighbor(const BitString& x, Rng& rng) const
{
    check(x);
    BitString y = x;
    move_to_random_neighbor(y, rng);
    return y;
}

BitString Hypercube::sample_improving_neighbor(const BitString& x, const BitString& anchor,
                                               Rng& rng) const
{
    BitString y = x;
    move_toward(y, anchor, rng);
    return y;
}

BitString Hypercube::sample_at_distance(const BitString& anchor, std::size_t d, Rng& rng) const
{
    check(anchor);
    if (d > n_)
        throw InvalidInput("distance exceeds the hypercube diameter");
    std::vector<std::size_t> idx(n_);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    BitString y = anchor;
    for (std::size_t k = 0; k < d; ++k) {
        std::swap(idx[k], idx[k + rng.below(n_ - k)]);
        y.flip(idx[k]);
    }
    return y;
}

// ------------------------------------------------------------ permutations

PermutationSpace::PermutationSpace(std::size_t n, std::optional<Permutation> target)
    : n_(n), target_(target ? std::move(*target) : Permutation())
{
    if (n_ < 1)
        throw InvalidInput("permutation space needs n >= 1");
    if (!target)
        target_ = Permutation::identity(n_);
    check(target_);
}

void PermutationSpace::check(const Permutation& x) const
{
    if (x.size() != n_)
        throw InvalidInput("permutation length " + std::to_string(x.size())
                           + " does not match n = " + std::to_string(n_));
}

std::size_t PermutationSpace::distance(const Permutation& x, const Permutation& y) const
{
    check(x);
    check(y);
    return n_ - x.compose(y.inverse()).cycle_count();
}

Permutation PermutationSpace::sample_uniform(Rng& rng) const
{
    std::vector<std::uint32_t> v(n_);
    std::iota(v.begin(), v.end(), 0U);
    for (std::size_t i = n_ - 1; i > 0; --i)
        std::swap(v[i], v[rng.below(i + 1)]);
    return Permutation(std::move(v));
}

void PermutationSpace::move_to_random_neighbor(Permutation& x, Rng& rng) const
{
    if (n_ < 2)
        throw InvalidInput("permutations of fewer than 2 items have no neighbors");
    // uniform ordered pair i != j, hence uniform unordered pair
    const auto i = rng.below(n_);
    auto j = rng.below(n_ - 1);
    if (j >= i)
        ++j;
    x.swap_positions(i, j);
}

void PermutationSpace::move_toward(Permutation& x, const Permutation& anchor, Rng& rng) const
{
    check(x);
    check(anchor);
    const auto cycles = cycles_of(relative(x, anchor));
    std::uint64_t total = 0;
    for (const auto& c : cycles)
        total += pairs(c.size());
    if (total == 0)
        throw InvalidInput("no improving neighbor: point equals anchor");
    // cycle with weight C(k,2), then a uniform pair inside it
    auto r = rng.below(total);
    for (const auto& c : cycles) {
        const auto w = pairs(c.size());
        if (r >= w) {
            r -= w;
            continue;
        }
        const auto a = rng.below(c.size());
        auto b = rng.below(c.size() - 1);
        if (b >= a)
            ++b;
        x.swap_positions(c[a], c[b]);
        return;
    }
}

Permutation PermutationSpace::sample_neighbor(const Permutation& x, Rng& rng) const
{
    check(x);
    Permutation y = x;
    move_to_random_neighbor(y, rng);
    return y;
}

std::size_t PermutationSpace::count_improving_neighbors(const Permutation& x,
                                                        const Permutation& anchor) const
{
    check(x);
    check(anchor);
    std::size_t count = 0;
    for (const auto& c : cycles_of(relative(x, anchor)))
        count += pairs(c.size());
    return count;
}

Permutation PermutationSpace::sample_improving_neighbor(const Permutation& x,
                                                        const Permutation& anchor, Rng& rng) const
{
    Permutation y = x;
    move_toward(y, anchor, rng);
    return y;
}

Permutation PermutationSpace::sample_at_distance(const Permutation& anchor, std::size_t d,
                                                 Rng& rng) const
{
    check(anchor);
    if (d > diameter())
        throw InvalidInput("distance exceeds the permutation space diameter");
    const std::size_t m = n_ - d;

    // log of unsigned Stirling numbers of the first kind, columns 0..m
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    auto logaddexp = [](double a, double b) {
        if (a == ninf)
            return b;
        if (b == ninf)
            return a;
        const double hi = std::max(a, b);
        return hi + std::log1p(std::exp(std::min(a, b) - hi));
    };
    std::vector<std::vector<double>> logs(n_ + 1, std::vector<double>(m + 1, ninf));
    logs[0][0] = 0.0;
    for (std::size_t k = 1; k <= n_; ++k)
        for (std::size_t j = 1; j <= std::min(k, m); ++j)
            logs[k][j] = logaddexp(logs[k - 1][j - 1],
                                   k > 1 ? std::log(double(k - 1)) + logs[k - 1][j] : ninf);

    // Element k-1 either opens a new cycle (weight S(k-1, j-1)) or is inserted
    // after one of the k-1 earlier elements (weight (k-1) S(k-1, j)).
    std::vector<bool> opens(n_ + 1, false);
    for (std::size_t k = n_, j = m; k >= 1; --k) {
        const double p_new = std::exp(logs[k - 1][j - 1] - logs[k][j]);
        if (j == k || rng.uniform01() < p_new) {
            opens[k] = true;
            --j;
        }
    }
    std::vector<std::uint32_t> sigma(n_);
    for (std::uint32_t k = 1; k <= n_; ++k) {
        const std::uint32_t e = k - 1;
        if (opens[k]) {
            sigma[e] = e;
        } else {
            const auto j = static_cast<std::uint32_t>(rng.below(e));
            sigma[e] = sigma[j];
            sigma[j] = e;
        }
    }
    // x ∘ anchor⁻¹ = sigma
    std::vector<std::uint32_t> x(n_);
    for (std::size_t i = 0; i < n_; ++i)
        x[i] = sigma[anchor[i]];
    return Permutation(std::move(x));
}

// ------------------------------------------------------------ descriptors

Hypercube make_hypercube(const SpaceDescriptor& d)
{
    if (d.kind != SpaceKind::hypercube)
        throw InvalidInput("descriptor is not a hypercube");
    if (d.target)
        return Hypercube(d.n, parse_bitstring(*d.target));
    return Hypercube(d.n);
}

PermutationSpace make_permutation_space(const SpaceDescriptor& d)
{
    if (d.kind != SpaceKind::permutations)
        throw InvalidInput("descriptor is not a permutation space");
    if (d.target)
        return PermutationSpace(d.n, parse_permutation(*d.target));
    return PermutationSpace(d.n);
}

} // namespace dpso
