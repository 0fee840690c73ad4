#pragma once

// Dense bit-packed linear algebra over GF(2).

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace polaraut {

using BigInt = boost::multiprecision::cpp_int;
using IndexList = std::vector<std::size_t>;

namespace detail {

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

constexpr std::uint64_t tail_mask(std::size_t bits)
{
    const std::size_t r = bits % kWordBits;
    return r == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
}

} // namespace detail

/// Packed binary vector. Bits at positions >= size() are always zero.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t len) : len_(len), words_(detail::words_for(len), 0) {}

    static BitVec from_mask(std::uint64_t mask, std::size_t len)
    {
        if (len > 64) throw std::invalid_argument("BitVec::from_mask: length exceeds 64");
        BitVec v(len);
        if (len > 0) v.words_[0] = mask & detail::tail_mask(len);
        return v;
    }

    static BitVec ones(std::size_t len)
    {
        BitVec v(len);
        std::fill(v.words_.begin(), v.words_.end(), ~std::uint64_t{0});
        v.trim();
        return v;
    }

    std::size_t size() const { return len_; }

    bool get(std::size_t i) const
    {
        check(i);
        return (words_[i / 64] >> (i % 64)) & 1U;
    }
    bool operator[](std::size_t i) const { return get(i); }

    void set(std::size_t i, bool value = true)
    {
        check(i);
        const std::uint64_t bit = std::uint64_t{1} << (i % 64);
        if (value) words_[i / 64] |= bit;
        else words_[i / 64] &= ~bit;
    }

    void flip(std::size_t i)
    {
        check(i);
        words_[i / 64] ^= std::uint64_t{1} << (i % 64);
    }

    std::size_t weight() const
    {
        std::size_t w = 0;
        for (auto word : words_) w += static_cast<std::size_t>(std::popcount(word));
        return w;
    }

    bool any() const
    {
        return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
    }

    /// Low 64 bits as an integer mask; requires size() <= 64.
    std::uint64_t to_mask() const
    {
        if (len_ > 64) throw std::invalid_argument("BitVec::to_mask: length exceeds 64");
        return words_.empty() ? 0 : words_[0];
    }

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    BitVec& operator^=(const BitVec& o)
    {
        same_size(o);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
        return *this;
    }
    BitVec& operator&=(const BitVec& o)
    {
        same_size(o);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
        return *this;
    }
    BitVec& operator|=(const BitVec& o)
    {
        same_size(o);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
    friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }

    void complement()
    {
        for (auto& w : words_) w = ~w;
        trim();
    }

    /// True iff every set bit of *this is also set in `other`.
    bool is_subset_of(const BitVec& other) const
    {
        same_size(other);
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & ~other.words_[w]) return false;
        return true;
    }

    friend bool operator==(const BitVec&, const BitVec&) = default;

    std::string to_string() const
    {
        std::string s(len_, '0');
        for (std::size_t i = 0; i < len_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    void trim()
    {
        if (!words_.empty()) words_.back() &= detail::tail_mask(len_);
    }

private:
    void check(std::size_t i) const
    {
        if (i >= len_) throw std::out_of_range("BitVec index out of range");
    }
    void same_size(const BitVec& o) const
    {
        if (o.len_ != len_) throw std::invalid_argument("BitVec length mismatch");
    }

    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Row-major packed binary matrix. Each row occupies words_per_row() words.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), stride_(detail::words_for(cols)), data_(rows * stride_, 0)
    {
    }

    static BitMatrix identity(std::size_t n)
    {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i);
        return m;
    }

    /// Builds a matrix whose row i has bit j of row_masks[i] as entry (i, j); cols <= 64.
    static BitMatrix from_row_masks(std::span<const std::uint64_t> row_masks, std::size_t cols)
    {
        if (cols > 64) throw std::invalid_argument("from_row_masks: more than 64 columns");
        BitMatrix m(row_masks.size(), cols);
        for (std::size_t i = 0; i < row_masks.size(); ++i) {
            if (cols < 64 && (row_masks[i] >> cols) != 0)
                throw std::invalid_argument("from_row_masks: row mask has bits beyond the column count");
            if (cols > 0) m.data_[i * m.stride_] = row_masks[i];
        }
        return m;
    }

    static BitMatrix from_row_masks(std::span<const std::uint32_t> row_masks, std::size_t cols)
    {
        std::vector<std::uint64_t> wide(row_masks.begin(), row_masks.end());
        return from_row_masks(std::span<const std::uint64_t>(wide), cols);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return stride_; }
    bool is_square() const { return rows_ == cols_; }

    bool get(std::size_t i, std::size_t j) const
    {
        check(i, j);
        return (data_[i * stride_ + j / 64] >> (j % 64)) & 1U;
    }
    bool operator()(std::size_t i, std::size_t j) const { return get(i, j); }

    void set(std::size_t i, std::size_t j, bool value = true)
    {
        check(i, j);
        const std::uint64_t bit = std::uint64_t{1} << (j % 64);
        if (value) data_[i * stride_ + j / 64] |= bit;
        else data_[i * stride_ + j / 64] &= ~bit;
    }

    void flip(std::size_t i, std::size_t j)
    {
        check(i, j);
        data_[i * stride_ + j / 64] ^= std::uint64_t{1} << (j % 64);
    }

    std::span<const std::uint64_t> row_words(std::size_t i) const
    {
        return {data_.data() + i * stride_, stride_};
    }
    std::span<std::uint64_t> row_words(std::size_t i) { return {data_.data() + i * stride_, stride_}; }

    /// Row i as an integer mask; requires cols() <= 64.
    std::uint64_t row_mask(std::size_t i) const
    {
        if (cols_ > 64) throw std::invalid_argument("row_mask: more than 64 columns");
        if (i >= rows_) throw std::out_of_range("row_mask: row out of range");
        return cols_ == 0 ? 0 : data_[i * stride_];
    }

    std::vector<std::uint64_t> row_masks() const
    {
        std::vector<std::uint64_t> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = row_mask(i);
        return out;
    }

    BitVec row(std::size_t i) const
    {
        BitVec v(cols_);
        auto src = row_words(i);
        std::copy(src.begin(), src.end(), v.words().begin());
        return v;
    }

    BitVec col(std::size_t j) const
    {
        BitVec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            if (get(i, j)) v.set(i);
        return v;
    }

    void set_row(std::size_t i, const BitVec& v)
    {
        if (v.size() != cols_) throw std::invalid_argument("set_row: length mismatch");
        auto dst = row_words(i);
        std::copy(v.words().begin(), v.words().end(), dst.begin());
    }

    /// row dst ^= row src
    void xor_row_into(std::size_t src, std::size_t dst)
    {
        for (std::size_t w = 0; w < stride_; ++w) data_[dst * stride_ + w] ^= data_[src * stride_ + w];
    }

    /// column dst ^= column src
    void xor_col_into(std::size_t src, std::size_t dst)
    {
        for (std::size_t i = 0; i < rows_; ++i)
            if (get(i, src)) flip(i, dst);
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b) return;
        std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                         data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                         data_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
    }

    BitMatrix transposed() const
    {
        BitMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (get(i, j)) t.set(j, i);
        return t;
    }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

    std::string to_string() const
    {
        std::string s;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) s += get(i, j) ? '1' : '0';
            s += '\n';
        }
        return s;
    }

private:
    void check(std::size_t i, std::size_t j) const
    {
        if (i >= rows_ || j >= cols_) throw std::out_of_range("BitMatrix index out of range");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> data_;
};

inline BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b)
{
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: dimension mismatch");
    BitMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out = c.row_words(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (!a.get(i, k)) continue;
            auto in = b.row_words(k);
            for (std::size_t w = 0; w < out.size(); ++w) out[w] ^= in[w];
        }
    }
    return c;
}

/// Row-vector times matrix: v * M.
inline BitVec vec_mul(const BitVec& v, const BitMatrix& m)
{
    if (v.size() != m.rows()) throw std::invalid_argument("vec_mul: dimension mismatch");
    BitVec out(m.cols());
    auto dst = out.words();
    for (std::size_t k = 0; k < m.rows(); ++k) {
        if (!v.get(k)) continue;
        auto src = m.row_words(k);
        for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
    }
    return out;
}

/// Row rank over GF(2), by elimination on a copy.
inline std::size_t rank(BitMatrix m)
{
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && !m.get(p, c)) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(p, r);
        for (std::size_t i = r + 1; i < m.rows(); ++i)
            if (m.get(i, c)) m.xor_row_into(r, i);
        ++r;
    }
    return r;
}

inline bool det(const BitMatrix& m)
{
    if (!m.is_square()) throw std::invalid_argument("det: matrix is not square");
    return rank(m) == m.rows();
}

inline bool is_invertible(const BitMatrix& m) { return m.is_square() && rank(m) == m.rows(); }

namespace detail {

inline void check_index_list(const IndexList& idx, std::size_t bound, const char* what)
{
    std::vector<bool> seen(bound, false);
    for (auto i : idx) {
        if (i >= bound) throw std::invalid_argument(std::string(what) + ": index out of range");
        if (seen[i]) throw std::invalid_argument(std::string(what) + ": duplicate index");
        seen[i] = true;
    }
}

} // namespace detail

/// Copy of the submatrix with the given rows and columns, in list order.
inline BitMatrix submatrix(const BitMatrix& m, const IndexList& rows, const IndexList& cols)
{
    detail::check_index_list(rows, m.rows(), "submatrix rows");
    detail::check_index_list(cols, m.cols(), "submatrix cols");
    BitMatrix s(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b)
            if (m.get(rows[a], cols[b])) s.set(a, b);
    return s;
}

/// Determinant of the selected square minor. The empty minor has determinant 1.
inline bool minor_det(const BitMatrix& m, const IndexList& rows, const IndexList& cols)
{
    if (rows.size() != cols.size()) throw std::invalid_argument("minor_det: index lists differ in length");
    return det(submatrix(m, rows, cols));
}

/// Rank of the submatrix on the given rows, all columns.
inline std::size_t row_subset_rank(const BitMatrix& m, const IndexList& rows)
{
    IndexList all(m.cols());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
    return rank(submatrix(m, rows, all));
}

/// Grows a nonsingular minor to a nonsingular t x t minor, t = rank(m).
///
/// Rows are extended first (greedily, lowest index first) until the selected rows
/// reach rank t; columns are then extended the same way inside those rows. The
/// input indices keep their positions at the front of each returned list.
inline std::pair<IndexList, IndexList> extend_minor(const BitMatrix& m, IndexList rows, IndexList cols)
{
    if (!minor_det(m, rows, cols)) throw std::invalid_argument("extend_minor: starting minor is singular");
    const std::size_t t = rank(m);

    std::vector<bool> used_row(m.rows(), false);
    for (auto r : rows) used_row[r] = true;
    std::size_t current = rows.size();
    for (std::size_t r = 0; r < m.rows() && current < t; ++r) {
        if (used_row[r]) continue;
        rows.push_back(r);
        const std::size_t grown = row_subset_rank(m, rows);
        if (grown > current) current = grown;
        else rows.pop_back();
    }

    std::vector<bool> used_col(m.cols(), false);
    for (auto c : cols) used_col[c] = true;
    current = cols.size();
    for (std::size_t c = 0; c < m.cols() && current < t; ++c) {
        if (used_col[c]) continue;
        cols.push_back(c);
        const std::size_t grown = rank(submatrix(m, rows, cols));
        if (grown > current) current = grown;
        else cols.pop_back();
    }

    if (rows.size() != t || cols.size() != t || !minor_det(m, rows, cols))
        throw std::logic_error("extend_minor: extension failed");
    return {std::move(rows), std::move(cols)};
}

inline BitMatrix add_column(BitMatrix m, std::size_t src, std::size_t dst)
{
    if (src >= m.cols() || dst >= m.cols()) throw std::invalid_argument("add_column: index out of range");
    if (src == dst) throw std::invalid_argument("add_column: src equals dst");
    m.xor_col_into(src, dst);
    return m;
}

inline BitMatrix add_row(BitMatrix m, std::size_t src, std::size_t dst)
{
    if (src >= m.rows() || dst >= m.rows()) throw std::invalid_argument("add_row: index out of range");
    if (src == dst) throw std::invalid_argument("add_row: src equals dst");
    m.xor_row_into(src, dst);
    return m;
}

/// Whether the given vectors (all the same length) are linearly independent.
inline bool is_independent(std::span<const BitVec> vectors)
{
    if (vectors.empty()) return true;
    BitMatrix m(vectors.size(), vectors.front().size());
    for (std::size_t i = 0; i < vectors.size(); ++i) m.set_row(i, vectors[i]);
    return rank(m) == vectors.size();
}

/// Incremental echelon basis for vectors of up to 64 bits.
class SpanTracker {
public:
    /// Reduces v against the basis; zero iff v lies in the span.
    std::uint64_t reduce(std::uint64_t v) const
    {
        for (auto b : basis_) v = std::min(v, v ^ b);
        return v;
    }
    bool contains(std::uint64_t v) const { return reduce(v) == 0; }
    bool insert(std::uint64_t v)
    {
        v = reduce(v);
        if (v == 0) return false;
        basis_.push_back(v);
        // Keep the basis sorted by leading bit, descending, so min-reduction is exact.
        std::sort(basis_.begin(), basis_.end(), std::greater<>());
        return true;
    }
    std::size_t dim() const { return basis_.size(); }

private:
    std::vector<std::uint64_t> basis_;
};

/// Uniform random invertible n x n matrix; rows drawn uniformly outside the span of earlier rows.
template <class Engine>
BitMatrix random_invertible(std::size_t n, Engine& rng)
{
    if (n == 0 || n > 64) throw std::invalid_argument("random_invertible: dimension must be in [1, 64]");
    const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    std::vector<std::uint64_t> rows;
    SpanTracker span;
    while (rows.size() < n) {
        const std::uint64_t v = static_cast<std::uint64_t>(rng()) & mask;
        if (span.insert(v)) rows.push_back(v);
    }
    return BitMatrix::from_row_masks(std::span<const std::uint64_t>(rows), n);
}

inline BitMatrix random_invertible(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return random_invertible(n, rng);
}

/// |GL(k, 2)| = prod_{i<k} (2^k - 2^i).
inline BigInt gl_order(std::size_t k)
{
    BigInt order = 1;
    const BigInt full = BigInt(1) << k;
    for (std::size_t i = 0; i < k; ++i) order *= full - (BigInt(1) << i);
    return order;
}

inline constexpr std::size_t kMaxEnumerateDim = 5;

namespace detail {

template <class Fn>
void gl_recurse(std::size_t n, std::vector<std::uint32_t>& rows, std::vector<std::uint8_t>& in_span, Fn& fn)
{
    const std::size_t k = rows.size();
    if (k == n) {
        fn(std::span<const std::uint32_t>(rows));
        return;
    }
    const std::uint32_t size = 1U << n;
    for (std::uint32_t v = 0; v < size; ++v) {
        if (in_span[v]) continue;
        // span(rows + v) = span(rows) + (span(rows) ^ v)
        std::vector<std::uint32_t> added;
        for (std::uint32_t s = 0; s < size; ++s)
            if (in_span[s] && !in_span[s ^ v]) added.push_back(s ^ v);
        for (auto a : added) in_span[a] = 1;
        rows.push_back(v);
        gl_recurse(n, rows, in_span, fn);
        rows.pop_back();
        for (auto a : added) in_span[a] = 0;
    }
}

inline void check_enumerate_dim(std::size_t n)
{
    if (n == 0) throw std::invalid_argument("enumerate_gl: dimension must be at least 1");
    if (n > kMaxEnumerateDim)
        throw std::invalid_argument("enumerate_gl: refusing to enumerate GL(" + std::to_string(n) +
                                    ",2); dimension limit is 5");
}

} // namespace detail

/// Visits every invertible n x n matrix whose first row equals `first_row`,
/// lexicographically by row values. fn receives the row masks.
template <class Fn>
void for_each_gl_with_first_row(std::size_t n, std::uint32_t first_row, Fn&& fn)
{
    detail::check_enumerate_dim(n);
    if (first_row == 0 || first_row >= (1U << n)) return;
    std::vector<std::uint8_t> in_span(std::size_t{1} << n, 0);
    in_span[0] = 1;
    in_span[first_row] = 1;
    std::vector<std::uint32_t> rows{first_row};
    detail::gl_recurse(n, rows, in_span, fn);
}

/// Visits every element of GL(n, 2) exactly once, lexicographically by row values.
template <class Fn>
void for_each_gl(std::size_t n, Fn&& fn)
{
    detail::check_enumerate_dim(n);
    for (std::uint32_t r0 = 1; r0 < (1U << n); ++r0) for_each_gl_with_first_row(n, r0, fn);
}

/// Materialized enumeration; only sensible for small n.
inline std::vector<BitMatrix> enumerate_gl(std::size_t n)
{
    std::vector<BitMatrix> out;
    for_each_gl(n, [&](std::span<const std::uint32_t> rows) { out.push_back(BitMatrix::from_row_masks(rows, n)); });
    return out;
}

} // namespace polaraut
