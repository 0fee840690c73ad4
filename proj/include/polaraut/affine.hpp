#pragma once

// Affine maps x -> Ax + b on evaluation points, the position permutations they
// induce, their action on monomials, and the block lower-triangular affine group.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gf2.hpp"
#include "monomial.hpp"

namespace polaraut {

/// x -> Ax + b with A invertible.
class AffineMap {
public:
    AffineMap() = default;
    AffineMap(BitMatrix a, BitVec b) : a_(std::move(a)), b_(std::move(b))
    {
        if (!a_.is_square()) throw std::invalid_argument("AffineMap: A is not square");
        if (b_.size() != a_.rows()) throw std::invalid_argument("AffineMap: b has the wrong length");
        check_variable_count(static_cast<int>(a_.rows()));
        if (!is_invertible(a_)) throw std::invalid_argument("AffineMap: A is singular");
    }
    explicit AffineMap(BitMatrix a) : AffineMap(a, BitVec(a.rows())) {}

    static AffineMap identity(int n) { return AffineMap(BitMatrix::identity(static_cast<std::size_t>(n))); }
    static AffineMap translation(const BitVec& b) { return {BitMatrix::identity(b.size()), b}; }

    int n() const { return static_cast<int>(a_.rows()); }
    const BitMatrix& A() const { return a_; }
    const BitVec& b() const { return b_; }

    std::uint32_t row_mask(int m) const { return static_cast<std::uint32_t>(a_.row_mask(static_cast<std::size_t>(m))); }
    std::uint32_t b_mask() const { return static_cast<std::uint32_t>(b_.to_mask()); }

    /// Ax + b on a point packed as a mask (bit k = x_k).
    std::uint32_t apply(std::uint32_t x) const
    {
        std::uint32_t y = b_mask();
        for (int m = 0; m < n(); ++m)
            if (std::popcount(row_mask(m) & x) & 1) y ^= 1U << m;
        return y;
    }

    friend bool operator==(const AffineMap&, const AffineMap&) = default;

private:
    BitMatrix a_;
    BitVec b_;
};

inline BitVec apply_point(const AffineMap& t, const BitVec& x)
{
    if (x.size() != static_cast<std::size_t>(t.n())) throw std::invalid_argument("apply_point: dimension mismatch");
    return BitVec::from_mask(t.apply(static_cast<std::uint32_t>(x.to_mask())), x.size());
}

/// (first o second)(x) = first(second(x)).
inline AffineMap compose(const AffineMap& first, const AffineMap& second)
{
    BitMatrix a = mat_mul(first.A(), second.A());
    const std::uint32_t b = first.apply(second.b_mask());
    return {std::move(a), BitVec::from_mask(b, first.b().size())};
}

inline AffineMap inverse(const AffineMap& t)
{
    // Solve by Gauss-Jordan on [A | I].
    const std::size_t n = static_cast<std::size_t>(t.n());
    BitMatrix a = t.A();
    BitMatrix inv = BitMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (!a.get(p, c)) ++p;
        a.swap_rows(p, c);
        inv.swap_rows(p, c);
        for (std::size_t r = 0; r < n; ++r)
            if (r != c && a.get(r, c)) {
                a.xor_row_into(c, r);
                inv.xor_row_into(c, r);
            }
    }
    AffineMap lin(inv);
    const std::uint32_t b = lin.apply(t.b_mask());
    return {std::move(inv), BitVec::from_mask(b, n)};
}

/// Evaluation point of code position j: x_k = 1 - bit_k(j).
inline std::uint32_t position_point(std::size_t j, int n) { return static_cast<std::uint32_t>(~j) & ((1U << n) - 1); }
inline std::size_t point_position(std::uint32_t x, int n) { return ~x & ((1U << n) - 1); }

/// Permutation of code positions acting by pi(c)_i = c_{pi(i)}.
class PositionPermutation {
public:
    PositionPermutation() = default;
    explicit PositionPermutation(std::vector<std::uint32_t> forward) : fwd_(std::move(forward))
    {
        std::vector<bool> seen(fwd_.size(), false);
        for (auto v : fwd_) {
            if (v >= fwd_.size() || seen[v]) throw std::invalid_argument("PositionPermutation: not a bijection");
            seen[v] = true;
        }
    }

    static PositionPermutation identity(std::size_t len)
    {
        std::vector<std::uint32_t> f(len);
        std::iota(f.begin(), f.end(), 0U);
        return PositionPermutation(std::move(f));
    }

    std::size_t size() const { return fwd_.size(); }
    std::uint32_t operator[](std::size_t i) const { return fwd_[i]; }
    const std::vector<std::uint32_t>& forward() const { return fwd_; }

    bool is_identity() const
    {
        for (std::size_t i = 0; i < fwd_.size(); ++i)
            if (fwd_[i] != i) return false;
        return true;
    }

    /// out[i] = in[pi(i)]
    template <class T>
    std::vector<T> apply(std::span<const T> in) const
    {
        check(in.size());
        std::vector<T> out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[fwd_[i]];
        return out;
    }
    template <class T>
    std::vector<T> apply(const std::vector<T>& in) const
    {
        return apply(std::span<const T>(in));
    }

    /// Inverse of apply: out[pi(i)] = in[i]
    template <class T>
    std::vector<T> unapply(std::span<const T> in) const
    {
        check(in.size());
        std::vector<T> out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[fwd_[i]] = in[i];
        return out;
    }
    template <class T>
    std::vector<T> unapply(const std::vector<T>& in) const
    {
        return unapply(std::span<const T>(in));
    }

    BitVec apply(const BitVec& c) const
    {
        check(c.size());
        BitVec out(c.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c.get(fwd_[i])) out.set(i);
        return out;
    }
    BitVec unapply(const BitVec& c) const
    {
        check(c.size());
        BitVec out(c.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c.get(i)) out.set(fwd_[i]);
        return out;
    }

    PositionPermutation inverse() const
    {
        std::vector<std::uint32_t> inv(fwd_.size());
        for (std::size_t i = 0; i < fwd_.size(); ++i) inv[fwd_[i]] = static_cast<std::uint32_t>(i);
        return PositionPermutation(std::move(inv));
    }

    /// The forward map i -> outer(inner(i)).
    friend PositionPermutation then(const PositionPermutation& inner, const PositionPermutation& outer)
    {
        if (inner.size() != outer.size()) throw std::invalid_argument("PositionPermutation: size mismatch");
        std::vector<std::uint32_t> f(inner.size());
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = outer.fwd_[inner.fwd_[i]];
        return PositionPermutation(std::move(f));
    }

    friend bool operator==(const PositionPermutation&, const PositionPermutation&) = default;

private:
    void check(std::size_t len) const
    {
        if (len != fwd_.size()) throw std::invalid_argument("PositionPermutation: length mismatch");
    }
    std::vector<std::uint32_t> fwd_;
};

/// pi(j) = position of T(point(j)). Permuting the evaluation vector of f by pi
/// yields the evaluation vector of f o T.
inline PositionPermutation induced_permutation(const AffineMap& t)
{
    const int n = t.n();
    const std::size_t len = std::size_t{1} << n;
    std::vector<std::uint32_t> f(len);
    for (std::size_t j = 0; j < len; ++j)
        f[j] = static_cast<std::uint32_t>(point_position(t.apply(position_point(j, n)), n));
    return PositionPermutation(std::move(f));
}

namespace detail {

/// Truth table of the affine form y_m = <row, x> + bit over the code positions.
inline BitVec affine_form_table(std::uint32_t row, bool constant, int n)
{
    BitVec t(std::size_t{1} << n);
    for (int k = 0; k < n; ++k)
        if ((row >> k) & 1U) t ^= variable_table(k, n);
    if (constant) t.complement();
    return t;
}

} // namespace detail

/// Truth table of f o T over the code positions.
inline BitVec composed_truth_table(Monomial f, const AffineMap& t)
{
    if (f.n != t.n()) throw std::invalid_argument("monomial and map have different variable counts");
    BitVec v = BitVec::ones(std::size_t{1} << f.n);
    for (int m : variables(f)) v &= detail::affine_form_table(t.row_mask(m), t.b().get(static_cast<std::size_t>(m)), f.n);
    return v;
}

/// Support of the ANF of f o T.
inline MonomialSet transform_monomial_support(Monomial f, const AffineMap& t)
{
    return anf_support(composed_truth_table(f, t));
}

/// Coefficient of prod_{j in cols} x_j in prod_{m in rows} y_m, y = Ax.
/// Equal to the determinant of the minor A[rows, cols].
inline bool lemma1_coefficient(const BitMatrix& a, const IndexList& rows, const IndexList& cols)
{
    return minor_det(a, rows, cols);
}

/// Tests (A, b) against a fixed monomial set through the ANF route:
/// T is an automorphism iff the ANF support of f o T stays inside M for every f in M.
class AutomorphismTester {
public:
    explicit AutomorphismTester(const MonomialSet& m) : n_(m.n()), masks_(m.masks()), allowed_(m.row_indicator())
    {
        vars_.reserve(static_cast<std::size_t>(n_));
        for (int k = 0; k < n_; ++k) vars_.push_back(variable_table(k, n_));
        if (n_ <= 6) {
            allowed_word_ = allowed_.to_mask();
            for (int k = 0; k < n_; ++k) var_words_[static_cast<std::size_t>(k)] = vars_[static_cast<std::size_t>(k)].to_mask();
        }
    }

    int n() const { return n_; }

    /// rows[m] is the mask of row m of A.
    bool preserves(std::span<const std::uint32_t> rows, std::uint32_t b = 0) const
    {
        if (rows.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("AutomorphismTester: dimension mismatch");
        return n_ <= 6 ? preserves_small(rows, b) : preserves_general(rows, b);
    }

    bool preserves(const AffineMap& t) const
    {
        std::vector<std::uint32_t> rows(static_cast<std::size_t>(t.n()));
        for (int m = 0; m < t.n(); ++m) rows[static_cast<std::size_t>(m)] = t.row_mask(m);
        return preserves(rows, t.b_mask());
    }

    bool preserves(const BitMatrix& a) const
    {
        std::vector<std::uint32_t> rows(a.rows());
        for (std::size_t m = 0; m < a.rows(); ++m) rows[m] = static_cast<std::uint32_t>(a.row_mask(m));
        return preserves(rows, 0);
    }

private:
    bool preserves_small(std::span<const std::uint32_t> rows, std::uint32_t b) const
    {
        const std::uint64_t full = n_ == 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (1U << n_)) - 1;
        std::array<std::uint64_t, 6> forms{};
        for (int m = 0; m < n_; ++m) {
            std::uint64_t t = 0;
            for (int k = 0; k < n_; ++k)
                if ((rows[static_cast<std::size_t>(m)] >> k) & 1U) t ^= var_words_[static_cast<std::size_t>(k)];
            if ((b >> m) & 1U) t = ~t & full;
            forms[static_cast<std::size_t>(m)] = t;
        }
        for (auto f : masks_) {
            std::uint64_t v = full;
            for (int m = 0; m < n_; ++m)
                if ((f >> m) & 1U) v &= forms[static_cast<std::size_t>(m)];
            if (polar_transform_word(v, n_) & ~allowed_word_) return false;
        }
        return true;
    }

    bool preserves_general(std::span<const std::uint32_t> rows, std::uint32_t b) const
    {
        const std::size_t len = std::size_t{1} << n_;
        std::vector<BitVec> forms;
        forms.reserve(static_cast<std::size_t>(n_));
        for (int m = 0; m < n_; ++m) {
            BitVec t(len);
            for (int k = 0; k < n_; ++k)
                if ((rows[static_cast<std::size_t>(m)] >> k) & 1U) t ^= vars_[static_cast<std::size_t>(k)];
            if ((b >> m) & 1U) t.complement();
            forms.push_back(std::move(t));
        }
        for (auto f : masks_) {
            BitVec v = BitVec::ones(len);
            for (int m = 0; m < n_; ++m)
                if ((f >> m) & 1U) v &= forms[static_cast<std::size_t>(m)];
            polar_transform_inplace(v.words(), n_);
            if (!v.is_subset_of(allowed_)) return false;
        }
        return true;
    }

    int n_;
    std::vector<std::uint32_t> masks_;
    BitVec allowed_;
    std::vector<BitVec> vars_;
    std::uint64_t allowed_word_ = 0;
    std::array<std::uint64_t, 6> var_words_{};
};

inline bool is_affine_automorphism(const AffineMap& t, const MonomialSet& m)
{
    if (t.n() != m.n()) throw std::invalid_argument("is_affine_automorphism: variable counts differ");
    return AutomorphismTester(m).preserves(t);
}

/// Codeword-level check: every generator row, permuted by the induced permutation,
/// must remain a codeword. Independent of the monomial-substitution route.
inline bool is_automorphism_by_codewords(const AffineMap& t, const MonomialSet& m)
{
    if (t.n() != m.n()) throw std::invalid_argument("is_automorphism_by_codewords: variable counts differ");
    const auto pi = induced_permutation(t);
    const BitVec allowed = m.row_indicator();
    for (auto f : m.monomials()) {
        const BitVec c = pi.apply(evaluation_vector(f));
        if (!anf(c).is_subset_of(allowed)) return false;
    }
    return true;
}

/// M with variables i and j exchanged in every monomial.
inline MonomialSet swap_variables(const MonomialSet& m, int i, int j)
{
    if (i < 0 || j < 0 || i >= m.n() || j >= m.n()) throw std::invalid_argument("swap_variables: variable out of range");
    std::vector<std::uint32_t> out;
    out.reserve(m.size());
    for (auto f : m) {
        const std::uint32_t bi = (f >> i) & 1U;
        const std::uint32_t bj = (f >> j) & 1U;
        std::uint32_t g = f & ~((1U << i) | (1U << j));
        g |= (bi << j) | (bj << i);
        out.push_back(g);
    }
    return {m.n(), std::move(out)};
}

inline bool transposition_preserves(const MonomialSet& m, int i, int j) { return swap_variables(m, i, j) == m; }

/// Sizes (s_1, ..., s_l) of the diagonal blocks of a block lower-triangular matrix.
class BlockProfile {
public:
    BlockProfile() = default;
    explicit BlockProfile(std::vector<int> sizes) : sizes_(std::move(sizes))
    {
        for (int s : sizes_)
            if (s <= 0) throw std::invalid_argument("BlockProfile: block sizes must be positive");
        check_variable_count(n());
    }

    static BlockProfile singletons(int n) { return BlockProfile(std::vector<int>(static_cast<std::size_t>(n), 1)); }
    static BlockProfile single_block(int n) { return BlockProfile(std::vector<int>{n}); }

    const std::vector<int>& sizes() const { return sizes_; }
    std::size_t blocks() const { return sizes_.size(); }
    int n() const { return std::accumulate(sizes_.begin(), sizes_.end(), 0); }

    /// Index of the block containing variable v.
    std::vector<int> block_of() const
    {
        std::vector<int> out;
        for (std::size_t b = 0; b < sizes_.size(); ++b)
            for (int k = 0; k < sizes_[b]; ++k) out.push_back(static_cast<int>(b));
        return out;
    }

    std::vector<int> starts() const
    {
        std::vector<int> out;
        int acc = 0;
        for (int s : sizes_) {
            out.push_back(acc);
            acc += s;
        }
        return out;
    }

    /// Profile with blocks b and b+1 merged.
    BlockProfile merged(std::size_t b) const
    {
        if (b + 1 >= sizes_.size()) throw std::invalid_argument("BlockProfile::merged: no block to merge with");
        std::vector<int> s = sizes_;
        s[b] += s[b + 1];
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(b + 1));
        return BlockProfile(std::move(s));
    }

    std::string to_string() const
    {
        std::string s = "(";
        for (std::size_t b = 0; b < sizes_.size(); ++b) s += (b ? "," : "") + std::to_string(sizes_[b]);
        return s + ")";
    }

    friend bool operator==(const BlockProfile&, const BlockProfile&) = default;

private:
    std::vector<int> sizes_;
};

/// Maximal runs of variables whose adjacent transpositions preserve M.
inline BlockProfile block_profile(const MonomialSet& m)
{
    if (!is_decreasing(m)) throw std::invalid_argument("block_profile: set is not decreasing");
    const int n = m.n();
    std::vector<int> sizes;
    int run = 1;
    for (int i = 0; i + 1 < n; ++i) {
        if (transposition_preserves(m, i, i + 1)) ++run;
        else {
            sizes.push_back(run);
            run = 1;
        }
    }
    if (n > 0) sizes.push_back(run);
    return BlockProfile(std::move(sizes));
}

/// A is zero above the block diagonal of s.
inline bool blta_membership(const BitMatrix& a, const BlockProfile& s)
{
    if (!a.is_square() || static_cast<int>(a.rows()) != s.n())
        throw std::invalid_argument("blta_membership: matrix does not match profile");
    const auto block = s.block_of();
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (a.get(r, c) && block[c] > block[r]) return false;
    return true;
}

inline bool blta_membership(const AffineMap& t, const BlockProfile& s) { return blta_membership(t.A(), s); }

/// Uniform element of BLTA(s, n): invertible diagonal blocks, uniform bits below, uniform b.
template <class Engine>
AffineMap sample_blta(const BlockProfile& s, Engine& rng)
{
    const int n = s.n();
    const std::size_t nn = static_cast<std::size_t>(n);
    BitMatrix a(nn, nn);
    const auto starts = s.starts();
    for (std::size_t blk = 0; blk < s.blocks(); ++blk) {
        const std::size_t size = static_cast<std::size_t>(s.sizes()[blk]);
        const std::size_t off = static_cast<std::size_t>(starts[blk]);
        BitMatrix d(size, size);
        do {
            for (std::size_t r = 0; r < size; ++r) {
                const std::uint64_t bits = rng();
                for (std::size_t c = 0; c < size; ++c) d.set(r, c, (bits >> c) & 1U);
            }
        } while (!is_invertible(d));
        for (std::size_t r = 0; r < size; ++r) {
            for (std::size_t c = 0; c < size; ++c) a.set(off + r, off + c, d.get(r, c));
            const std::uint64_t below = rng();
            for (std::size_t c = 0; c < off; ++c) a.set(off + r, c, (below >> c) & 1U);
        }
    }
    const std::uint64_t b = n == 0 ? 0 : rng() & ((std::uint64_t{1} << n) - 1);
    return {std::move(a), BitVec::from_mask(b, nn)};
}

inline AffineMap sample_blta(const BlockProfile& s, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return sample_blta(s, rng);
}

inline AffineMap sample_lta(int n, std::uint64_t seed) { return sample_blta(BlockProfile::singletons(n), seed); }

/// Order of the linear part of BLTA(s, n): prod |GL(s_i)| * 2^{sum_{i<j} s_i s_j}.
inline BigInt blta_linear_order(const BlockProfile& s)
{
    BigInt order = 1;
    std::size_t below = 0;
    int seen = 0;
    for (int size : s.sizes()) {
        order *= gl_order(static_cast<std::size_t>(size));
        below += static_cast<std::size_t>(size) * static_cast<std::size_t>(seen);
        seen += size;
    }
    return order << below;
}

/// Order of BLTA(s, n) including translations.
inline BigInt blta_order(const BlockProfile& s) { return blta_linear_order(s) << s.n(); }

} // namespace polaraut
