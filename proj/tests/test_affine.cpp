#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <vector>

#include "polaraut/affine.hpp"
#include "polaraut/autgroup.hpp"

using namespace polaraut;

namespace {

AffineMap from_rows(std::vector<std::uint64_t> rows, std::uint64_t b = 0)
{
    const std::size_t n = rows.size();
    return {BitMatrix::from_row_masks(std::span<const std::uint64_t>(rows), n), BitVec::from_mask(b, n)};
}

AffineMap random_affine(int n, std::mt19937_64& rng)
{
    BitMatrix a = random_invertible(static_cast<std::size_t>(n), rng);
    return {std::move(a), BitVec::from_mask(rng() & ((1U << n) - 1), static_cast<std::size_t>(n))};
}

} // namespace

TEST(AffineMap, PointApplication)
{
    const AffineMap id = AffineMap::identity(3);
    for (std::uint32_t x = 0; x < 8; ++x) EXPECT_EQ(id.apply(x), x);
    const AffineMap shift = AffineMap::translation(BitVec::from_mask(0b101, 3));
    for (std::uint32_t x = 0; x < 8; ++x) EXPECT_EQ(shift.apply(x), x ^ 0b101U);
    // A = [[1,0],[1,1]] on (x_0, x_1) = (1, 0) gives (1, 1).
    const AffineMap f = from_rows({0b01, 0b11});
    EXPECT_EQ(apply_point(f, BitVec::from_mask(0b01, 2)), BitVec::from_mask(0b11, 2));
}

TEST(AffineMap, RejectsSingularOrMismatched)
{
    EXPECT_THROW(from_rows({0b01, 0b01}), std::invalid_argument);
    EXPECT_THROW(AffineMap(BitMatrix::identity(2), BitVec(3)), std::invalid_argument);
    EXPECT_THROW(AffineMap(BitMatrix(2, 3)), std::invalid_argument);
}

TEST(AffineMap, ComposeAndInverse)
{
    std::mt19937_64 rng(4);
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const AffineMap p = random_affine(n, rng), q = random_affine(n, rng);
        const AffineMap pq = compose(p, q);
        for (std::uint32_t x = 0; x < (1U << n); ++x) ASSERT_EQ(pq.apply(x), p.apply(q.apply(x)));
        EXPECT_EQ(compose(p, inverse(p)), AffineMap::identity(n));
        EXPECT_EQ(compose(inverse(p), p), AffineMap::identity(n));
    }
}

TEST(InducedPermutation, IdentityAndTranslation)
{
    EXPECT_TRUE(induced_permutation(AffineMap::identity(4)).is_identity());
    const auto pi = induced_permutation(AffineMap::translation(BitVec::from_mask(1, 2)));
    EXPECT_EQ(pi.forward(), (std::vector<std::uint32_t>{1, 0, 3, 2}));
}

TEST(InducedPermutation, PermutesEvaluationsIntoComposition)
{
    std::mt19937_64 rng(12);
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const AffineMap m = random_affine(n, rng);
        const auto pi = induced_permutation(m);
        const Monomial f{static_cast<std::uint32_t>(rng() % (1U << n)), n};
        EXPECT_EQ(pi.apply(evaluation_vector(f)), composed_truth_table(f, m));
        EXPECT_EQ(pi.unapply(pi.apply(evaluation_vector(f))), evaluation_vector(f));
    }
}

TEST(InducedPermutation, CompositionOrder)
{
    std::mt19937_64 rng(13);
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const AffineMap p = random_affine(n, rng), q = random_affine(n, rng);
        // Acting with p's permutation, then q's, equals acting with p o q.
        EXPECT_EQ(induced_permutation(compose(p, q)), then(induced_permutation(q), induced_permutation(p)));
        const auto pi = induced_permutation(p);
        EXPECT_TRUE(then(pi, pi.inverse()).is_identity());
        EXPECT_EQ(induced_permutation(inverse(p)), pi.inverse());
    }
}

TEST(MonomialImage, ListedExamples)
{
    const Monomial x0x1{0b11, 2};
    EXPECT_EQ(transform_monomial_support(x0x1, AffineMap::identity(2)), MonomialSet(2, {0b11}));
    EXPECT_EQ(transform_monomial_support(x0x1, from_rows({0b01, 0b11})), MonomialSet(2, {0b01, 0b11}));
    EXPECT_TRUE(lemma1_coefficient(BitMatrix::from_row_masks(std::vector<std::uint64_t>{0b01, 0b11}, 2), {0, 1}, {0, 1}));
    EXPECT_FALSE(lemma1_coefficient(BitMatrix::identity(3), {0, 2}, {0, 1}));
}

TEST(MonomialImage, TopDegreeCoefficientsAreMinors)
{
    std::mt19937_64 rng(14);
    for (int t = 0; t < 300; ++t) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const AffineMap m(random_invertible(static_cast<std::size_t>(n), rng));
        const std::uint32_t r = static_cast<std::uint32_t>(rng() % (1U << n));
        const MonomialSet support = transform_monomial_support(Monomial{r, n}, m);
        IndexList rows;
        for (int v : variables(r)) rows.push_back(static_cast<std::size_t>(v));
        for (std::uint32_t c = 0; c < (1U << n); ++c) {
            if (std::popcount(c) != std::popcount(r)) {
                // A linear map never raises degree.
                if (std::popcount(c) > std::popcount(r)) {
                    EXPECT_FALSE(support.contains(c));
                }
                continue;
            }
            IndexList cols;
            for (int v : variables(c)) cols.push_back(static_cast<std::size_t>(v));
            EXPECT_EQ(support.contains(c), lemma1_coefficient(m.A(), rows, cols));
        }
    }
}

TEST(Automorphism, ListedExamples)
{
    for (int n = 1; n <= 5; ++n) {
        for (const auto& m : {MonomialSet::reed_muller(1, n), construct_pw(n, std::size_t{1} << (n - 1)).info}) {
            EXPECT_TRUE(is_affine_automorphism(AffineMap::identity(n), m));
            for (std::uint32_t b = 0; b < (1U << n); ++b)
                EXPECT_TRUE(is_affine_automorphism(AffineMap::translation(BitVec::from_mask(b, n)), m));
        }
    }
    // The swap x_0 <-> x_1 does not preserve {1, x_0}.
    EXPECT_FALSE(is_affine_automorphism(from_rows({0b10, 0b01}), MonomialSet(2, {0, 1})));
}

TEST(Automorphism, SubstitutionAndCodewordChecksAgree)
{
    std::mt19937_64 rng(15);
    int positives = 0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const MonomialSet m = random_decreasing_set(n, rng);
        AffineMap cand = (t % 2 == 0) ? random_affine(n, rng) : sample_blta(block_profile(m), rng);
        const bool a = is_affine_automorphism(cand, m);
        ASSERT_EQ(a, is_automorphism_by_codewords(cand, m)) << "trial " << t;
        positives += a;
    }
    EXPECT_GT(positives, 400);
}

TEST(Automorphism, LowerTriangularMapsPreserveEveryDecreasingSet)
{
    std::mt19937_64 rng(16);
    for (int t = 0; t < 300; ++t) {
        const int n = 1 + static_cast<int>(rng() % 7);
        const MonomialSet m = random_decreasing_set(n, rng);
        EXPECT_TRUE(is_affine_automorphism(sample_lta(n, rng()), m));
    }
}

TEST(BlockProfile, ListedExamples)
{
    for (int n = 1; n <= 6; ++n)
        for (int r = 0; r <= n; ++r) EXPECT_EQ(block_profile(MonomialSet::reed_muller(r, n)), BlockProfile::single_block(n));
    EXPECT_EQ(block_profile(MonomialSet(2, {0, 1})), BlockProfile({1, 1}));
    EXPECT_EQ(block_profile(construct_pw(6, 32).info), BlockProfile({1, 2, 2, 1}));
    EXPECT_EQ(block_profile(construct_bec(6, 32, 0.5).info), BlockProfile({1, 2, 2, 1}));
    EXPECT_THROW(block_profile(MonomialSet(2, {2})), std::invalid_argument);
    EXPECT_EQ(BlockProfile({1, 2, 2, 1}).to_string(), "(1,2,2,1)");
}

TEST(BlockProfile, BlocksAreMaximal)
{
    // Adjacent swaps inside a block preserve M; the swap across each boundary does not.
    std::mt19937_64 rng(18);
    for (int t = 0; t < 300; ++t) {
        const int n = 2 + static_cast<int>(rng() % 6);
        const MonomialSet m = random_decreasing_set(n, rng);
        const BlockProfile s = block_profile(m);
        const auto block = s.block_of();
        for (int i = 0; i + 1 < n; ++i) EXPECT_EQ(transposition_preserves(m, i, i + 1), block[i] == block[i + 1]);
    }
}

TEST(Blta, MembershipPattern)
{
    const BlockProfile s({1, 2});
    EXPECT_TRUE(blta_membership(BitMatrix::identity(3), s));
    EXPECT_FALSE(blta_membership(BitMatrix::from_row_masks(std::vector<std::uint64_t>{0b011, 0b010, 0b100}, 3), s));
    EXPECT_TRUE(blta_membership(BitMatrix::from_row_masks(std::vector<std::uint64_t>{0b001, 0b101, 0b111}, 3), s));
    EXPECT_THROW(blta_membership(BitMatrix::identity(2), s), std::invalid_argument);
    std::mt19937_64 rng(19);
    for (int t = 0; t < 200; ++t) {
        const AffineMap lta = sample_lta(5, rng());
        for (const auto& p : {BlockProfile({5}), BlockProfile({2, 3}), BlockProfile({1, 1, 1, 1, 1})})
            EXPECT_TRUE(blta_membership(lta, p));
        const BlockProfile q({1, 2, 2});
        EXPECT_TRUE(blta_membership(sample_blta(q, rng), q));
    }
}

TEST(Blta, Orders)
{
    for (std::size_t n = 1; n <= 8; ++n) {
        const int nn = static_cast<int>(n);
        EXPECT_EQ(blta_linear_order(BlockProfile::single_block(nn)), gl_order(n));
        EXPECT_EQ(blta_linear_order(BlockProfile::singletons(nn)), BigInt(1) << (n * (n - 1) / 2));
        EXPECT_EQ(blta_order(BlockProfile::single_block(nn)), gl_order(n) << n);
    }
    EXPECT_EQ(blta_linear_order(BlockProfile({1, 3})), 1344);
    EXPECT_EQ(blta_linear_order(BlockProfile({1, 2, 2, 1})), BigInt(1) * 6 * 6 * (BigInt(1) << 13));
    EXPECT_EQ(blta_order(BlockProfile::single_block(16)), gl_order(16) << 16);
}

TEST(Blta, SamplingCoversSmallGroupUniformly)
{
    const BlockProfile s({1, 2});
    std::mt19937_64 rng(20);
    std::map<std::pair<std::vector<std::uint64_t>, std::uint32_t>, int> hist;
    const int draws = 96000;
    for (int t = 0; t < draws; ++t) {
        const AffineMap m = sample_blta(s, rng);
        ++hist[{m.A().row_masks(), m.b_mask()}];
    }
    ASSERT_EQ(BigInt(hist.size()), blta_order(s));
    const double expect = draws / static_cast<double>(hist.size());
    double chi = 0;
    for (const auto& [k, c] : hist) chi += (c - expect) * (c - expect) / expect;
    // 191 degrees of freedom; 265 is beyond the 0.999 quantile.
    EXPECT_LT(chi, 265.0);
}
