#pragma once

// Monomials in n boolean variables, the reliability partial order, decreasing
// monomial codes and their generator matrices.
//
// Index convention: codeword position / row index j (bit k = coefficient of 2^k)
// corresponds to the evaluation point whose coordinate x_k is 1 - bit_k(j). Row j
// of H_N = F^{(x)n} is then the evaluation vector of the monomial whose mask is the
// bitwise complement of j. The last row (all ones) is the constant monomial.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gf2.hpp"

namespace polaraut {

inline constexpr int kMaxVariables = 16;

inline void check_variable_count(int n)
{
    if (n < 0 || n > kMaxVariables)
        throw std::invalid_argument("variable count must lie in [0, 16], got " + std::to_string(n));
}

/// x_0^{g_0} ... x_{n-1}^{g_{n-1}}; bit k of mask set iff x_k is present.
struct Monomial {
    std::uint32_t mask = 0;
    int n = 0;

    Monomial() = default;
    Monomial(std::uint32_t mask_, int n_) : mask(mask_), n(n_)
    {
        check_variable_count(n);
        if (n < 32 && (mask >> n) != 0) throw std::invalid_argument("Monomial: mask has bits beyond n");
    }

    static Monomial one(int n) { return {0, n}; }
    static Monomial from_variables(std::span<const int> vars, int n)
    {
        std::uint32_t m = 0;
        for (int v : vars) {
            if (v < 0 || v >= n) throw std::invalid_argument("Monomial: variable out of range");
            m |= 1U << v;
        }
        return {m, n};
    }

    bool has(int var) const { return (mask >> var) & 1U; }

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

inline int degree(Monomial f) { return std::popcount(f.mask); }

inline std::vector<int> variables(std::uint32_t mask)
{
    std::vector<int> v;
    for (int k = 0; mask >> k; ++k)
        if ((mask >> k) & 1U) v.push_back(k);
    return v;
}
inline std::vector<int> variables(Monomial f) { return variables(f.mask); }

inline std::string to_string(Monomial f)
{
    if (f.mask == 0) return "1";
    std::string s;
    for (int k : variables(f)) s += "x" + std::to_string(k);
    return s;
}

/// g <= f in the reliability order: equal degrees compare sorted variable indices
/// pointwise; a lower-degree g is compared against a divisor of f of its degree.
/// The best divisor keeps the largest variables of f, so a single comparison suffices.
inline bool leq(Monomial g, Monomial f)
{
    if (g.n != f.n) throw std::invalid_argument("leq: monomials over different variable counts");
    const int dg = degree(g);
    const int df = degree(f);
    if (dg > df) return false;
    const auto gv = variables(g);
    const auto fv = variables(f);
    const std::size_t skip = static_cast<std::size_t>(df - dg);
    for (std::size_t k = 0; k < gv.size(); ++k)
        if (gv[k] > fv[k + skip]) return false;
    return true;
}

inline std::size_t monomial_index(Monomial f)
{
    const std::uint32_t full = f.n == 32 ? ~0U : (1U << f.n) - 1;
    return ~f.mask & full;
}

inline Monomial index_monomial(std::size_t i, int n)
{
    check_variable_count(n);
    const std::size_t size = std::size_t{1} << n;
    if (i >= size) throw std::out_of_range("index_monomial: row index out of range");
    return {static_cast<std::uint32_t>(~i & (size - 1)), n};
}

/// A set of monomials over n variables, stored as sorted unique masks.
class MonomialSet {
public:
    MonomialSet() = default;
    explicit MonomialSet(int n) : n_(n) { check_variable_count(n); }
    MonomialSet(int n, std::vector<std::uint32_t> masks) : n_(n), masks_(std::move(masks))
    {
        check_variable_count(n);
        const std::uint32_t limit = 1U << n;
        for (auto m : masks_)
            if (m >= limit) throw std::invalid_argument("MonomialSet: mask has bits beyond n");
        std::sort(masks_.begin(), masks_.end());
        masks_.erase(std::unique(masks_.begin(), masks_.end()), masks_.end());
    }

    static MonomialSet full(int n)
    {
        std::vector<std::uint32_t> all(std::size_t{1} << n);
        std::iota(all.begin(), all.end(), 0U);
        return {n, std::move(all)};
    }

    /// All monomials of degree at most r: the Reed-Muller code RM(r, n).
    static MonomialSet reed_muller(int r, int n)
    {
        std::vector<std::uint32_t> out;
        for (std::uint32_t m = 0; m < (1U << n); ++m)
            if (std::popcount(m) <= r) out.push_back(m);
        return {n, std::move(out)};
    }

    int n() const { return n_; }
    std::size_t size() const { return masks_.size(); }
    bool empty() const { return masks_.empty(); }
    const std::vector<std::uint32_t>& masks() const { return masks_; }
    auto begin() const { return masks_.begin(); }
    auto end() const { return masks_.end(); }

    bool contains(std::uint32_t mask) const { return std::binary_search(masks_.begin(), masks_.end(), mask); }
    bool contains(Monomial f) const { return f.n == n_ && contains(f.mask); }

    void insert(std::uint32_t mask)
    {
        if (mask >= (1U << n_)) throw std::invalid_argument("MonomialSet::insert: mask has bits beyond n");
        auto it = std::lower_bound(masks_.begin(), masks_.end(), mask);
        if (it == masks_.end() || *it != mask) masks_.insert(it, mask);
    }

    std::vector<Monomial> monomials() const
    {
        std::vector<Monomial> out;
        out.reserve(masks_.size());
        for (auto m : masks_) out.emplace_back(m, n_);
        return out;
    }

    /// Membership indicator over row indices [0, 2^n).
    BitVec row_indicator() const
    {
        BitVec v(std::size_t{1} << n_);
        const std::uint32_t full = (1U << n_) - 1;
        for (auto m : masks_) v.set(~m & full);
        return v;
    }

    /// Sorted row indices of the members (the information set).
    std::vector<std::size_t> row_indices() const
    {
        std::vector<std::size_t> idx;
        idx.reserve(masks_.size());
        const std::uint32_t full = (1U << n_) - 1;
        for (auto m : masks_) idx.push_back(~m & full);
        std::sort(idx.begin(), idx.end());
        return idx;
    }

    bool is_subset_of(const MonomialSet& other) const
    {
        return n_ == other.n_ && std::includes(other.masks_.begin(), other.masks_.end(), masks_.begin(), masks_.end());
    }

    friend bool operator==(const MonomialSet&, const MonomialSet&) = default;

private:
    int n_ = 0;
    std::vector<std::uint32_t> masks_;
};

inline MonomialSet decreasing_closure(const MonomialSet& generators)
{
    const int n = generators.n();
    std::vector<std::uint32_t> out;
    for (std::uint32_t g = 0; g < (1U << n); ++g) {
        const Monomial gm{g, n};
        for (auto f : generators)
            if (leq(gm, Monomial{f, n})) {
                out.push_back(g);
                break;
            }
    }
    return {n, std::move(out)};
}

inline bool is_decreasing(const MonomialSet& m)
{
    const int n = m.n();
    for (auto f : m)
        for (std::uint32_t g = 0; g < (1U << n); ++g)
            if (!m.contains(g) && leq(Monomial{g, n}, Monomial{f, n})) return false;
    return true;
}

/// The maximal elements of a decreasing set; their closure is the set itself.
inline MonomialSet minimal_generators(const MonomialSet& m)
{
    if (!is_decreasing(m)) throw std::invalid_argument("minimal_generators: set is not decreasing");
    const int n = m.n();
    std::vector<std::uint32_t> out;
    for (auto f : m) {
        bool maximal = true;
        for (auto h : m)
            if (h != f && leq(Monomial{f, n}, Monomial{h, n})) {
                maximal = false;
                break;
            }
        if (maximal) out.push_back(f);
    }
    return {n, std::move(out)};
}

/// In-place superset-sum transform over GF(2) on a vector of length 2^n:
/// out[j] = XOR of in[i] over all i whose bits contain j's bits.
/// This is multiplication by H_N = F^{(x)n} and is its own inverse.
inline void polar_transform_inplace(std::span<std::uint64_t> words, int n)
{
    static constexpr std::uint64_t kLow[6] = {0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
                                              0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL};
    for (int k = 0; k < n && k < 6; ++k) {
        const unsigned shift = 1U << k;
        for (auto& w : words) w ^= (w >> shift) & kLow[k];
    }
    for (int k = 6; k < n; ++k) {
        const std::size_t stride = std::size_t{1} << (k - 6);
        for (std::size_t w = 0; w < words.size(); ++w)
            if ((w & stride) == 0) words[w] ^= words[w + stride];
    }
}

inline std::uint64_t polar_transform_word(std::uint64_t w, int n)
{
    polar_transform_inplace(std::span<std::uint64_t>(&w, 1), n);
    return w;
}

namespace detail {

inline int log2_length(std::size_t len)
{
    if (len == 0 || (len & (len - 1)) != 0) throw std::invalid_argument("length is not a power of two");
    const int n = std::countr_zero(len);
    check_variable_count(n);
    return n;
}

} // namespace detail

/// ANF coefficients of the function whose values at the code positions are v.
/// Entry i of the result is the coefficient of index_monomial(i). Involution.
inline BitVec anf(BitVec v)
{
    const int n = detail::log2_length(v.size());
    polar_transform_inplace(v.words(), n);
    return v;
}

inline MonomialSet anf_support(const BitVec& v)
{
    const int n = detail::log2_length(v.size());
    const BitVec coeff = anf(v);
    std::vector<std::uint32_t> masks;
    for (std::size_t i = 0; i < coeff.size(); ++i)
        if (coeff.get(i)) masks.push_back(index_monomial(i, n).mask);
    return {n, std::move(masks)};
}

/// Values of f at every code position: position j is 1 iff j shares no bit with f's mask.
inline BitVec evaluation_vector(Monomial f)
{
    const std::size_t len = std::size_t{1} << f.n;
    BitVec v(len);
    for (std::size_t j = 0; j < len; ++j)
        if ((j & f.mask) == 0) v.set(j);
    return v;
}

/// Truth table of the single variable x_k over the code positions.
inline BitVec variable_table(int k, int n) { return evaluation_vector(Monomial{1U << k, n}); }

enum class Construction { Bec, Pw, Explicit };

inline std::string to_string(Construction c)
{
    switch (c) {
    case Construction::Bec: return "bec";
    case Construction::Pw: return "pw";
    case Construction::Explicit: return "explicit";
    }
    return "?";
}

inline constexpr double kPwBeta = 1.189207115002721; // 2^{1/4}

struct CodeSpec {
    int n = 0;
    MonomialSet info;
    Construction construction = Construction::Explicit;
    std::optional<double> erasure_prob;

    std::size_t length() const { return std::size_t{1} << n; }
    std::size_t K() const { return info.size(); }
    std::vector<std::size_t> info_indices() const { return info.row_indices(); }

    /// frozen[j] is true iff row j carries no information.
    std::vector<bool> frozen() const
    {
        std::vector<bool> fz(length(), true);
        for (auto j : info_indices()) fz[j] = false;
        return fz;
    }
};

inline CodeSpec explicit_code(const MonomialSet& info)
{
    return CodeSpec{info.n(), info, Construction::Explicit, std::nullopt};
}

inline CodeSpec code_from_generators(const MonomialSet& m_min)
{
    return explicit_code(decreasing_closure(m_min));
}

namespace detail {

inline void check_dimension(int n, std::size_t K)
{
    check_variable_count(n);
    if (K < 1 || K > (std::size_t{1} << n))
        throw std::invalid_argument("K must lie in [1, 2^n], got " + std::to_string(K));
}

/// Indices of the K largest scores; ties go to the smaller index.
inline MonomialSet top_k(const std::vector<double>& score, std::size_t K, int n)
{
    std::vector<std::size_t> order(score.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    std::vector<std::uint32_t> masks;
    for (std::size_t k = 0; k < K; ++k) masks.push_back(index_monomial(order[k], n).mask);
    return {n, std::move(masks)};
}

} // namespace detail

/// BEC Bhattacharyya parameters of the N synthetic channels, indexed by row.
/// The most significant index bit is the first polarization step: 0 -> 2z - z^2, 1 -> z^2.
inline std::vector<double> bec_bhattacharyya(int n, double erasure_prob)
{
    check_variable_count(n);
    std::vector<double> z(std::size_t{1} << n);
    for (std::size_t i = 0; i < z.size(); ++i) {
        double v = erasure_prob;
        for (int k = n - 1; k >= 0; --k) v = ((i >> k) & 1U) ? v * v : 2 * v - v * v;
        z[i] = v;
    }
    return z;
}

inline CodeSpec construct_bec(int n, std::size_t K, double erasure_prob)
{
    detail::check_dimension(n, K);
    if (!(erasure_prob > 0.0 && erasure_prob < 1.0)) throw std::invalid_argument("erasure probability must lie in (0, 1)");
    auto z = bec_bhattacharyya(n, erasure_prob);
    for (auto& v : z) v = -v;
    return CodeSpec{n, detail::top_k(z, K, n), Construction::Bec, erasure_prob};
}

/// Polarization weight sum_k bit_k(i) * beta^k.
inline std::vector<double> pw_weights(int n, double beta = kPwBeta)
{
    check_variable_count(n);
    std::vector<double> w(std::size_t{1} << n, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i)
        for (int k = 0; k < n; ++k)
            if ((i >> k) & 1U) w[i] += std::pow(beta, k);
    return w;
}

inline CodeSpec construct_pw(int n, std::size_t K)
{
    detail::check_dimension(n, K);
    return CodeSpec{n, detail::top_k(pw_weights(n), K, n), Construction::Pw, std::nullopt};
}

/// K x 2^n matrix whose rows are the evaluation vectors of the information monomials,
/// ordered by ascending row index of H_N.
inline BitMatrix generator_matrix(const CodeSpec& spec)
{
    const auto idx = spec.info_indices();
    BitMatrix g(idx.size(), spec.length());
    for (std::size_t r = 0; r < idx.size(); ++r) g.set_row(r, evaluation_vector(index_monomial(idx[r], spec.n)));
    return g;
}

} // namespace polaraut
