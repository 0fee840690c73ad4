#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "polaraut/gf2.hpp"

using namespace polaraut;

namespace {

BitMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng)
{
    BitMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, rng() & 1U);
    return m;
}

BitMatrix naive_mul(const BitMatrix& a, const BitMatrix& b)
{
    BitMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            bool s = false;
            for (std::size_t k = 0; k < a.cols(); ++k) s ^= a.get(i, k) && b.get(k, j);
            c.set(i, j, s);
        }
    return c;
}

// Rank as log2 of the number of distinct row combinations.
std::size_t span_rank(const BitMatrix& m)
{
    std::set<std::vector<bool>> seen;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m.rows()); ++s) {
        std::vector<bool> v(m.cols(), false);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if ((s >> i) & 1U)
                for (std::size_t j = 0; j < m.cols(); ++j) v[j] = v[j] != m.get(i, j);
        seen.insert(v);
    }
    std::size_t r = 0;
    while ((std::size_t{1} << r) < seen.size()) ++r;
    return r;
}

// Leibniz expansion over GF(2): the determinant is the permanent mod 2.
bool leibniz_det(const BitMatrix& m)
{
    std::vector<std::size_t> p(m.rows());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = i;
    bool d = false;
    do {
        bool term = true;
        for (std::size_t i = 0; i < p.size() && term; ++i) term = m.get(i, p[i]);
        d ^= term;
    } while (std::next_permutation(p.begin(), p.end()));
    return d;
}

} // namespace

TEST(BitVec, MaskRoundTripAndWeight)
{
    const BitVec v = BitVec::from_mask(0b1011, 6);
    EXPECT_EQ(v.size(), 6U);
    EXPECT_EQ(v.weight(), 3U);
    EXPECT_EQ(v.to_mask(), 0b1011U);
    EXPECT_TRUE(v.get(3));
    EXPECT_FALSE(v.get(2));
    EXPECT_THROW(v.get(6), std::out_of_range);
}

TEST(BitVec, SizeMismatchThrows)
{
    BitVec a(4), b(5);
    EXPECT_THROW(a ^= b, std::invalid_argument);
}

TEST(BitMatrix, MultiplicationMatchesTripleLoop)
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        const std::size_t r = 1 + rng() % 9, k = 1 + rng() % 70, c = 1 + rng() % 70;
        const BitMatrix a = random_matrix(r, k, rng), b = random_matrix(k, c, rng);
        EXPECT_EQ(mat_mul(a, b), naive_mul(a, b));
    }
    EXPECT_THROW(mat_mul(BitMatrix(2, 3), BitMatrix(2, 3)), std::invalid_argument);
}

TEST(BitMatrix, VectorProductIsRowCombination)
{
    std::mt19937_64 rng(3);
    const BitMatrix m = random_matrix(5, 7, rng);
    const BitVec v = BitVec::from_mask(0b10110, 5);
    BitMatrix row(1, 5);
    row.set_row(0, v);
    EXPECT_EQ(vec_mul(v, m), naive_mul(row, m).row(0));
}

TEST(BitMatrix, RankMatchesSpanEnumeration)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t) {
        const BitMatrix m = random_matrix(1 + rng() % 8, 1 + rng() % 8, rng);
        EXPECT_EQ(rank(m), span_rank(m));
    }
}

TEST(BitMatrix, DeterminantMatchesLeibniz)
{
    std::mt19937_64 rng(6);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng() % 6;
        const BitMatrix m = random_matrix(n, n, rng);
        EXPECT_EQ(det(m), leibniz_det(m));
        EXPECT_EQ(is_invertible(m), leibniz_det(m));
    }
    EXPECT_THROW(det(BitMatrix(2, 3)), std::invalid_argument);
}

TEST(BitMatrix, MinorMatchesSubmatrixCopy)
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        const BitMatrix m = random_matrix(6, 6, rng);
        const IndexList rows{4, 0, 2}, cols{1, 5, 3};
        BitMatrix copy(3, 3);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) copy.set(a, b, m.get(rows[a], cols[b]));
        EXPECT_EQ(submatrix(m, rows, cols), copy);
        EXPECT_EQ(minor_det(m, rows, cols), leibniz_det(copy));
    }
}

TEST(BitMatrix, MinorRejectsBadIndexSets)
{
    const BitMatrix m = BitMatrix::identity(3);
    EXPECT_THROW(minor_det(m, {0, 1}, {0}), std::invalid_argument);
    EXPECT_THROW(minor_det(m, {0, 0}, {0, 1}), std::invalid_argument);
    EXPECT_THROW(minor_det(m, {0, 3}, {0, 1}), std::invalid_argument);
}

TEST(BitMatrix, ExtendMinorReachesRankOnEveryThreeByThreeMatrix)
{
    // Exhaustive over all 512 matrices, all nonsingular starting minors.
    for (std::uint32_t bits = 0; bits < 512; ++bits) {
        BitMatrix m(3, 3);
        for (std::size_t k = 0; k < 9; ++k) m.set(k / 3, k % 3, (bits >> k) & 1U);
        const std::size_t t = rank(m);
        for (std::uint32_t rs = 0; rs < 8; ++rs)
            for (std::uint32_t cs = 0; cs < 8; ++cs) {
                if (std::popcount(rs) != std::popcount(cs)) continue;
                IndexList rows, cols;
                for (std::size_t k = 0; k < 3; ++k) {
                    if ((rs >> k) & 1U) rows.push_back(k);
                    if ((cs >> k) & 1U) cols.push_back(k);
                }
                if (!minor_det(m, rows, cols)) {
                    if (!rows.empty()) {
                        EXPECT_THROW(extend_minor(m, rows, cols), std::invalid_argument);
                    }
                    continue;
                }
                const auto [er, ec] = extend_minor(m, rows, cols);
                ASSERT_EQ(er.size(), t);
                ASSERT_EQ(ec.size(), t);
                EXPECT_TRUE(minor_det(m, er, ec));
                EXPECT_TRUE(std::equal(rows.begin(), rows.end(), er.begin()));
                EXPECT_TRUE(std::equal(cols.begin(), cols.end(), ec.begin()));
            }
    }
}

TEST(BitMatrix, ElementaryOperations)
{
    const BitMatrix i3 = BitMatrix::identity(3);
    const BitMatrix c = add_column(i3, 0, 2);
    EXPECT_TRUE(c.get(0, 2));
    EXPECT_TRUE(c.get(2, 2));
    const BitMatrix r = add_row(i3, 1, 0);
    EXPECT_TRUE(r.get(0, 1));
    EXPECT_TRUE(is_invertible(c) && is_invertible(r));
    EXPECT_THROW(add_column(i3, 1, 1), std::invalid_argument);
}

TEST(Independence, SpanTrackerAgreesWithRank)
{
    std::mt19937_64 rng(8);
    for (int t = 0; t < 200; ++t) {
        std::vector<BitVec> vs;
        for (int k = 0; k < 4; ++k) vs.push_back(BitVec::from_mask(rng() & 0x1F, 5));
        BitMatrix m(vs.size(), 5);
        for (std::size_t k = 0; k < vs.size(); ++k) m.set_row(k, vs[k]);
        EXPECT_EQ(is_independent(vs), rank(m) == vs.size());
    }
}

TEST(GeneralLinearGroup, OrdersAndEnumerationCounts)
{
    EXPECT_EQ(gl_order(1), 1);
    EXPECT_EQ(gl_order(2), 6);
    EXPECT_EQ(gl_order(3), 168);
    EXPECT_EQ(gl_order(4), 20160);
    EXPECT_EQ(gl_order(5), 9999360);
    for (std::size_t n = 1; n <= 4; ++n) {
        std::uint64_t count = 0;
        std::set<std::vector<std::uint32_t>> distinct;
        for_each_gl(n, [&](std::span<const std::uint32_t> rows) {
            ++count;
            distinct.insert({rows.begin(), rows.end()});
            EXPECT_TRUE(is_invertible(BitMatrix::from_row_masks(rows, n)));
        });
        EXPECT_EQ(BigInt(count), gl_order(n));
        EXPECT_EQ(distinct.size(), count);
    }
}

TEST(GeneralLinearGroup, EnumerationRefusesLargeDimension)
{
    EXPECT_THROW(for_each_gl(6, [](std::span<const std::uint32_t>) {}), std::invalid_argument);
    EXPECT_THROW(enumerate_gl(0), std::invalid_argument);
}

TEST(GeneralLinearGroup, RandomInvertibleIsUniformForTwoByTwo)
{
    std::mt19937_64 rng(99);
    std::map<std::vector<std::uint64_t>, int> hist;
    const int draws = 60000;
    for (int t = 0; t < draws; ++t) ++hist[random_invertible(2, rng).row_masks()];
    ASSERT_EQ(hist.size(), 6U);
    // Chi-square with 5 degrees of freedom; 20.5 is the 0.999 quantile.
    double chi = 0;
    for (const auto& [k, c] : hist) chi += (c - draws / 6.0) * (c - draws / 6.0) / (draws / 6.0);
    EXPECT_LT(chi, 20.5);
}

TEST(GeneralLinearGroup, RandomInvertibleIsSeedDeterministic)
{
    EXPECT_EQ(random_invertible(7, 42), random_invertible(7, 42));
    EXPECT_TRUE(is_invertible(random_invertible(20, 1)));
}
