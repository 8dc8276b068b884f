#include "dpso/exactperm.hpp"

#include "dpso/chain.hpp"
#include "dpso/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace dpso {

// ------------------------------------------------------------- Stirling

std::vector<std::vector<BigInt>> stirling_triangle(unsigned n)
{
    std::vector<std::vector<BigInt>> s(n + 1);
    s[0] = {BigInt(1)};
    for (unsigned k = 1; k <= n; ++k) {
        s[k].assign(k + 1, BigInt(0));
        for (unsigned m = 1; m <= k; ++m) {
            s[k][m] = s[k - 1][m - 1];
            if (m <= k - 1)
                s[k][m] += BigInt(k - 1) * s[k - 1][m];
        }
    }
    return s;
}

BigInt stirling_first_unsigned(unsigned n, unsigned m)
{
    if (m > n)
        return 0;
    return stirling_triangle(n)[n][m];
}

// ----------------------------------------------------------- partitions

namespace {

void partitions_into(unsigned remaining, unsigned max_part, std::vector<unsigned>& prefix,
                     std::vector<std::vector<unsigned>>& out)
{
    if (remaining == 0) {
        out.push_back(prefix);
        return;
    }
    for (unsigned part = std::min(remaining, max_part); part >= 1; --part) {
        prefix.push_back(part);
        partitions_into(remaining - part, part, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

PartitionTable::PartitionTable(unsigned n) : n_(n)
{
    if (n < 1)
        throw InvalidInput("partitions need n >= 1");
    std::vector<std::vector<unsigned>> all;
    std::vector<unsigned> prefix;
    partitions_into(n, n, prefix, all);
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size())
            return a.size() > b.size();
        return a < b;
    });
    offsets_.assign(n + 1, 0);
    states_.reserve(all.size());
    for (auto& parts : all) {
        const unsigned level = n - static_cast<unsigned>(parts.size());
        ++offsets_[level + 1];
        index_.emplace(parts, states_.size());
        states_.emplace_back(std::move(parts));
    }
    for (unsigned L = 1; L <= n; ++L)
        offsets_[L] += offsets_[L - 1];
}

std::size_t PartitionTable::index_of(const CycleType& t) const
{
    const std::vector<unsigned> key(t.parts().begin(), t.parts().end());
    auto it = index_.find(key);
    if (it == index_.end())
        throw InvalidInput("cycle type " + to_string(t) + " is not a partition of " + std::to_string(n_));
    return it->second;
}

PartitionTable enumerate_partitions(unsigned n) { return PartitionTable(n); }

BigInt permutation_count_of_type(const CycleType& t)
{
    BigInt denom = 1;
    const auto parts = t.parts();
    for (std::size_t i = 0; i < parts.size();) {
        std::size_t j = i;
        while (j < parts.size() && parts[j] == parts[i])
            ++j;
        const auto mult = static_cast<unsigned long>(j - i);
        BigInt kpow;
        mpz_ui_pow_ui(kpow.get_mpz_t(), parts[i], mult);
        denom *= kpow * factorial(mult);
        i = j;
    }
    return factorial(t.n()) / denom;
}

// -------------------------------------------------------------- kernels

TransitionKernel::TransitionKernel(std::shared_ptr<const PartitionTable> table,
                                   std::vector<std::vector<KernelEntry>> rows,
                                   std::vector<bool> defined)
    : table_(std::move(table)), rows_(std::move(rows)), defined_(std::move(defined))
{
}

const std::vector<KernelEntry>& TransitionKernel::row(std::size_t ordinal) const
{
    if (!defined(ordinal))
        throw InvalidInput("kernel row for " + to_string((*table_)[ordinal]) + " is undefined");
    return rows_[ordinal];
}

Exact TransitionKernel::probability(std::size_t from, std::size_t to) const
{
    for (const auto& e : row(from))
        if (e.target == to)
            return e.probability;
    return 0;
}

namespace {

std::size_t split_target(const PartitionTable& table, std::vector<unsigned> parts, std::size_t at,
                         unsigned d)
{
    const unsigned k = parts[at];
    parts[at] = d;
    parts.push_back(k - d);
    return table.index_of(CycleType(std::move(parts)));
}

std::size_t merge_target(const PartitionTable& table, std::vector<unsigned> parts, std::size_t a,
                         std::size_t b)
{
    parts[a] += parts[b];
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(b));
    return table.index_of(CycleType(std::move(parts)));
}

/// Builds a kernel from integer weights with a per-row common denominator.
TransitionKernel build_kernel(std::shared_ptr<const PartitionTable> table, bool with_merges)
{
    const unsigned n = table->n();
    if (n < 2)
        throw InvalidInput("transposition kernels need n >= 2");
    const std::uint64_t all_pairs = pairs(n);
    std::vector<std::vector<KernelEntry>> rows(table->size());
    std::vector<bool> defined(table->size(), true);

    for (std::size_t s = 0; s < table->size(); ++s) {
        const auto& lambda = (*table)[s];
        const std::vector<unsigned> parts(lambda.parts().begin(), lambda.parts().end());
        // weights are counted in half-pairs so that the k/2 split multiplicity stays integral
        std::map<std::size_t, std::uint64_t> half_pairs;
        std::uint64_t improving = 0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i > 0 && parts[i] == parts[i - 1])
                continue;
            const unsigned k = parts[i];
            const auto mult = static_cast<std::uint64_t>(
                std::count(parts.begin(), parts.end(), k));
            improving += mult * pairs(k);
            for (unsigned d = 1; d < k; ++d)
                half_pairs[split_target(*table, parts, i, d)] += mult * k;
        }
        if (with_merges) {
            for (std::size_t i = 0; i < parts.size(); ++i)
                for (std::size_t j = i + 1; j < parts.size(); ++j)
                    half_pairs[merge_target(*table, parts, i, j)] += 2ULL * parts[i] * parts[j];
        }
        const std::uint64_t denom = 2 * (with_merges ? all_pairs : improving);
        if (denom == 0) {
            defined[s] = false;
            continue;
        }
        for (const auto& [target, w] : half_pairs) {
            Exact q(static_cast<unsigned long>(w), static_cast<unsigned long>(denom));
            q.canonicalize();
            rows[s].push_back({target, q});
        }
    }
    return TransitionKernel(std::move(table), std::move(rows), std::move(defined));
}

} // namespace

TransitionKernel random_move_kernel(std::shared_ptr<const PartitionTable> table)
{
    return build_kernel(std::move(table), true);
}

TransitionKernel improving_move_kernel(std::shared_ptr<const PartitionTable> table)
{
    return build_kernel(std::move(table), false);
}

TransitionKernel random_move_kernel(unsigned n)
{
    return random_move_kernel(std::make_shared<const PartitionTable>(n));
}

TransitionKernel improving_move_kernel(unsigned n)
{
    return improving_move_kernel(std::make_shared<const PartitionTable>(n));
}

// --------------------------------------------------------------- solver

namespace {

/// Dense row-major matrix.
template <class Scalar>
struct Dense {
    std::size_t rows = 0, cols = 0;
    std::vector<Scalar> a;

    Dense() = default;
    Dense(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Scalar(0)) {}
    Scalar& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

/// Overwrites rhs with M⁻¹ rhs.
void solve_in_place(Dense<Exact>& m, Dense<Exact>& rhs)
{
    const std::size_t s = m.rows;
    for (std::size_t col = 0; col < s; ++col) {
        std::size_t piv = col;
        while (piv < s && m(piv, col) == 0)
            ++piv;
        if (piv == s)
            throw std::runtime_error("singular level block");
        if (piv != col) {
            for (std::size_t j = 0; j < s; ++j)
                std::swap(m(col, j), m(piv, j));
            for (std::size_t j = 0; j < rhs.cols; ++j)
                std::swap(rhs(col, j), rhs(piv, j));
        }
        const Exact inv = 1 / m(col, col);
        for (std::size_t r = 0; r < s; ++r) {
            if (r == col || m(r, col) == 0)
                continue;
            const Exact f = m(r, col) * inv;
            for (std::size_t j = col; j < s; ++j)
                m(r, j) -= f * m(col, j);
            for (std::size_t j = 0; j < rhs.cols; ++j)
                rhs(r, j) -= f * rhs(col, j);
        }
        for (std::size_t j = 0; j < rhs.cols; ++j)
            rhs(col, j) *= inv;
        for (std::size_t j = col; j < s; ++j)
            m(col, j) *= inv;
    }
}

void solve_in_place(Dense<double>& m, Dense<double>& rhs)
{
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<RowMajor> mm(m.a.data(), static_cast<Eigen::Index>(m.rows),
                            static_cast<Eigen::Index>(m.cols));
    Eigen::Map<RowMajor> rr(rhs.a.data(), static_cast<Eigen::Index>(rhs.rows),
                            static_cast<Eigen::Index>(rhs.cols));
    RowMajor solution = mm.partialPivLu().solve(rr);
    rr = solution;
}

} // namespace

template <class Scalar>
std::vector<Scalar> hitting_times(const TransitionKernel& improving, const TransitionKernel& random,
                                  const Exact& c)
{
    const PartitionTable& table = random.table();
    if (&improving.table() != &table && improving.table().n() != table.n())
        throw InvalidInput("kernels are over different partition tables");
    if (c < 0 || c > 1)
        throw InvalidInput("c must lie in [0, 1]");
    const unsigned n = table.n();
    std::vector<Scalar> h(table.size(), Scalar(0));
    if (n < 2)
        return h;
    const unsigned top = n - 1;
    const Exact one_minus_c = 1 - c;

    // Mixed kernel row of ordinal s, split into the down block and the up block.
    struct Sparse {
        std::size_t col;
        Scalar w;
    };
    auto mixed_row = [&](std::size_t s, unsigned level, std::vector<Sparse>& down,
                         std::vector<Sparse>& up) {
        std::map<std::size_t, Exact> acc;
        if (c != 0)
            for (const auto& e : improving.row(s))
                acc[e.target] += c * e.probability;
        if (one_minus_c != 0)
            for (const auto& e : random.row(s))
                acc[e.target] += one_minus_c * e.probability;
        down.clear();
        up.clear();
        const std::size_t lo = table.level_begin(level - 1);
        const std::size_t mid = table.level_begin(level);
        const std::size_t hi = table.level_begin(level + 1);
        for (const auto& [t, w] : acc) {
            if (w == 0)
                continue;
            if (t >= lo && t < mid)
                down.push_back({t - lo, from_exact<Scalar>(w)});
            else if (t >= hi)
                up.push_back({t - hi, from_exact<Scalar>(w)});
            else
                throw std::logic_error("kernel entry does not change the level by one");
        }
    };

    std::vector<std::vector<Scalar>> a(n);
    std::vector<Dense<Scalar>> B(n);
    std::vector<Sparse> down, up;
    for (unsigned L = top; L >= 1; --L) {
        const std::size_t s = table.level_size(L);
        const std::size_t below = table.level_size(L - 1);
        Dense<Scalar> m(s, s), rhs(s, 1 + below);
        for (std::size_t r = 0; r < s; ++r) {
            mixed_row(table.level_begin(L) + r, L, down, up);
            m(r, r) = 1;
            rhs(r, 0) = 1;
            for (const auto& [col, w] : up) {
                const auto& Bn = B[L + 1];
                for (std::size_t j = 0; j < s; ++j)
                    m(r, j) -= w * Bn(col, j);
                rhs(r, 0) += w * a[L + 1][col];
            }
            for (const auto& [col, w] : down)
                rhs(r, 1 + col) = w;
        }
        solve_in_place(m, rhs);
        a[L].resize(s);
        B[L] = Dense<Scalar>(s, below);
        for (std::size_t r = 0; r < s; ++r) {
            a[L][r] = rhs(r, 0);
            for (std::size_t j = 0; j < below; ++j)
                B[L](r, j) = rhs(r, 1 + j);
        }
    }

    // h_0 = 0, h_L = a_L + B_L h_{L-1}
    std::vector<Scalar> prev(1, Scalar(0));
    for (unsigned L = 1; L <= top; ++L) {
        const std::size_t s = table.level_size(L);
        std::vector<Scalar> cur(s);
        for (std::size_t r = 0; r < s; ++r) {
            Scalar v = a[L][r];
            if (L > 1)
                for (std::size_t j = 0; j < prev.size(); ++j)
                    v += B[L](r, j) * prev[j];
            cur[r] = v;
            h[table.level_begin(L) + r] = v;
        }
        prev = std::move(cur);
    }
    return h;
}

namespace {

template <class Scalar>
void check_exact_limit(unsigned n)
{
    if (std::is_same_v<Scalar, Exact> && n > kExactSolverLimit)
        throw InvalidInput("exact mode is limited to n <= " + std::to_string(kExactSolverLimit)
                           + "; use float mode");
}

} // namespace

template <class Scalar>
Scalar random_walk_sort_time(unsigned n)
{
    if (n < 2)
        throw InvalidInput("sorting needs n >= 2");
    check_exact_limit<Scalar>(n);
    auto table = std::make_shared<const PartitionTable>(n);
    const auto imp = improving_move_kernel(table);
    const auto rnd = random_move_kernel(table);
    const auto h = hitting_times<Scalar>(imp, rnd, Exact(0));
    Scalar total = 0;
    for (std::size_t s = 0; s < table->size(); ++s)
        total += from_exact<Scalar>(Exact(permutation_count_of_type((*table)[s]))) * h[s];
    return total / from_exact<Scalar>(Exact(factorial(n)));
}

template <class Scalar>
Scalar exact_return_time_sorting(unsigned n, const Exact& c)
{
    if (n < 2)
        throw InvalidInput("sorting needs n >= 2");
    check_exact_limit<Scalar>(n);
    auto table = std::make_shared<const PartitionTable>(n);
    const auto h = hitting_times<Scalar>(improving_move_kernel(table), random_move_kernel(table), c);
    return h[table->level_begin(1)];
}

// ------------------------------------------------ averaged probabilities

namespace {

Exact average_probability(const std::vector<std::vector<BigInt>>& S, unsigned n, unsigned i,
                          const Exact& c)
{
    BigInt numer = 0;
    BigInt falling = 1; // (n-1)!/(n-k)!
    for (unsigned k = 1; k <= i + 1; ++k) {
        if (k > 1)
            falling *= n - k + 1;
        if (n - i - 1 <= n - k)
            numer += BigInt(k - 1) * falling * S[n - k][n - i - 1];
    }
    Exact share(numer, BigInt(n - 1) * S[n][n - i]);
    share.canonicalize();
    return c + (1 - c) * share;
}

} // namespace

Exact average_improvement_probability(unsigned n, unsigned i, const Exact& c)
{
    if (n < 2 || i < 1 || i > n - 1)
        throw InvalidInput("need n >= 2 and 1 <= i <= n-1");
    return average_probability(stirling_triangle(n), n, i, c);
}

std::vector<Exact> average_improvement_profile(unsigned n, const Exact& c)
{
    if (n < 2)
        throw InvalidInput("need n >= 2");
    const auto S = stirling_triangle(n);
    std::vector<Exact> p;
    for (unsigned i = 1; i < n; ++i)
        p.push_back(average_probability(S, n, i, c));
    return p;
}

namespace {

template <class Scalar>
Scalar averaged_h1(unsigned n, const Exact& c)
{
    BirthDeathSpec<Scalar> spec;
    for (const auto& p : average_improvement_profile(n, c))
        spec.p.push_back(from_exact<Scalar>(p));
    return return_times(spec).front();
}

double degree(double ratio, unsigned n)
{
    return std::log(ratio) / std::log(static_cast<double>(n) / (n - 1));
}

} // namespace

template <class Scalar>
QRatios<Scalar> q_av_ratio(unsigned n, const Exact& c)
{
    if (n < 3)
        throw InvalidInput("q ratios need n >= 3");
    if (c < 0 || c > 1)
        throw InvalidInput("c must lie in [0, 1]");
    QRatios<Scalar> q{};
    q.h1_av = averaged_h1<Scalar>(n, c);
    q.h1_av_prev = averaged_h1<Scalar>(n - 1, c);
    q.q_av = q.h1_av / q.h1_av_prev;
    q.degree_av = degree(to_double(q.q_av), n);
    return q;
}

template <class Scalar>
QRatios<Scalar> q_ratios(unsigned n, const Exact& c)
{
    check_exact_limit<Scalar>(n);
    QRatios<Scalar> q = q_av_ratio<Scalar>(n, c);
    q.h1_ex = exact_return_time_sorting<Scalar>(n, c);
    q.h1_ex_prev = exact_return_time_sorting<Scalar>(n - 1, c);
    q.q_ex = q.h1_ex / q.h1_ex_prev;
    q.degree_ex = degree(to_double(q.q_ex), n);
    return q;
}

template std::vector<Exact> hitting_times(const TransitionKernel&, const TransitionKernel&, const Exact&);
template std::vector<double> hitting_times(const TransitionKernel&, const TransitionKernel&, const Exact&);
template Exact random_walk_sort_time<Exact>(unsigned);
template double random_walk_sort_time<double>(unsigned);
template Exact exact_return_time_sorting<Exact>(unsigned, const Exact&);
template double exact_return_time_sorting<double>(unsigned, const Exact&);
template QRatios<Exact> q_ratios<Exact>(unsigned, const Exact&);
template QRatios<double> q_ratios<double>(unsigned, const Exact&);
template QRatios<Exact> q_av_ratio<Exact>(unsigned, const Exact&);
template QRatios<double> q_av_ratio<double>(unsigned, const Exact&);

} // namespace dpso
