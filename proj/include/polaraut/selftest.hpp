#pragma once

// Property suites for the linear-algebra facts behind the witness procedures.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <vector>

#include "affine.hpp"
#include "gf2.hpp"
#include "monomial.hpp"

namespace polaraut {

struct PropertyReport {
    std::uint64_t checked = 0;
    std::uint64_t failures = 0;
    bool pass() const { return failures == 0; }
};

/// Minor determinants against ANF coefficients: for every A in GL(n) and all
/// equal-size row/column sets R, C, the coefficient of x_C in prod_{m in R} y_m
/// (y = Ax) equals det A[R, C].
inline PropertyReport lemma1_exhaustive(int max_n)
{
    PropertyReport rep;
    for (int n = 1; n <= max_n; ++n) {
        const std::uint32_t subsets = 1U << n;
        for_each_gl(static_cast<std::size_t>(n), [&](std::span<const std::uint32_t> rows) {
            const AffineMap t(BitMatrix::from_row_masks(rows, static_cast<std::size_t>(n)));
            for (std::uint32_t r = 0; r < subsets; ++r) {
                const MonomialSet support = transform_monomial_support(Monomial{r, n}, t);
                IndexList rl;
                for (int v : variables(r)) rl.push_back(static_cast<std::size_t>(v));
                for (std::uint32_t c = 0; c < subsets; ++c) {
                    if (std::popcount(c) != std::popcount(r)) continue;
                    IndexList cl;
                    for (int v : variables(c)) cl.push_back(static_cast<std::size_t>(v));
                    ++rep.checked;
                    if (lemma1_coefficient(t.A(), rl, cl) != support.contains(c)) ++rep.failures;
                }
            }
        });
    }
    return rep;
}

namespace detail {

template <class Engine>
BitMatrix random_matrix(std::size_t rows, std::size_t cols, Engine& rng)
{
    BitMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rng() & 1U);
    return m;
}

template <class Engine>
IndexList random_subset(std::size_t bound, std::size_t size, Engine& rng)
{
    IndexList all(bound);
    for (std::size_t k = 0; k < bound; ++k) all[k] = k;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(size);
    return all;
}

} // namespace detail

/// Minor extension: random P x Q matrices (P, Q <= max_dim) with a random nonsingular
/// starting minor; the extension must be a nonsingular rank-size minor that keeps
/// the starting indices in front.
inline PropertyReport lemma2_random(std::uint64_t instances, std::size_t max_dim, std::uint64_t seed)
{
    PropertyReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> dim(1, max_dim);
    while (rep.checked < instances) {
        const BitMatrix m = detail::random_matrix(dim(rng), dim(rng), rng);
        const std::size_t t = rank(m);
        std::uniform_int_distribution<std::size_t> pick(0, t);
        const std::size_t r = pick(rng);
        IndexList rows, cols;
        bool found = false;
        for (int attempt = 0; attempt < 64 && !found; ++attempt) {
            rows = detail::random_subset(m.rows(), r, rng);
            cols = detail::random_subset(m.cols(), r, rng);
            found = minor_det(m, rows, cols);
        }
        if (!found) continue;
        ++rep.checked;
        const auto [er, ec] = extend_minor(m, rows, cols);
        bool ok = er.size() == t && ec.size() == t && minor_det(m, er, ec);
        for (std::size_t k = 0; k < r && ok; ++k) ok = er[k] == rows[k] && ec[k] == cols[k];
        if (!ok) ++rep.failures;
    }
    return rep;
}

/// Column replacement: if a_1..a_m are independent and a_n lies in span(a_1..a_{m-1}),
/// then a_1..a_{m-1}, a_n + a_m are independent.
inline PropertyReport lemma3_random(std::uint64_t instances, std::size_t max_dim, std::uint64_t seed)
{
    PropertyReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> dim(1, max_dim);
    for (std::uint64_t k = 0; k < instances; ++k) {
        const std::size_t d = dim(rng);
        std::uniform_int_distribution<std::size_t> count(1, d);
        const std::size_t m = count(rng);
        const std::uint64_t mask = (std::uint64_t{1} << d) - 1;
        std::vector<BitVec> a;
        SpanTracker span;
        while (a.size() < m) {
            const std::uint64_t v = rng() & mask;
            if (span.insert(v)) a.push_back(BitVec::from_mask(v, d));
        }
        BitVec dependent(d);
        for (std::size_t q = 0; q + 1 < m; ++q)
            if (rng() & 1U) dependent ^= a[q];
        std::vector<BitVec> replaced(a.begin(), a.end() - 1);
        replaced.push_back(dependent ^ a.back());
        ++rep.checked;
        if (!is_independent(a) || !is_independent(replaced)) ++rep.failures;
    }
    return rep;
}

} // namespace polaraut
