#pragma once

// The affine automorphism group A-Aut(M) of a decreasing monomial code:
// exhaustive enumeration, comparison against the block lower-triangular group of
// the code's block profile, and executable witnesses showing that an upper entry
// a_{i,j} = 1 of any automorphism forces the variable transposition (i, j) into
// the group.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "affine.hpp"
#include "gf2.hpp"
#include "monomial.hpp"

namespace polaraut {

inline unsigned default_jobs()
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs fn(task) for task in [0, count) on up to `jobs` threads.
/// Tasks are claimed dynamically; callers write results into per-task slots.
template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn)
{
    jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (jobs == 1) {
        for (std::size_t t = 0; t < count; ++t) fn(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (std::size_t t = next++; t < count; t = next++) fn(t);
        });
    for (auto& th : pool) th.join();
}

/// Linear parts of A-Aut(M). Translations are always automorphisms of a decreasing
/// code, so (A, b) is an automorphism iff (A, 0) is; only linear parts are counted.
struct AutEnumeration {
    int n = 0;
    std::string code_id;
    std::uint64_t count = 0;
    /// Row masks of every automorphism, in enumeration order; filled for n <= 4.
    std::vector<std::vector<std::uint32_t>> elements;
    BlockProfile profile;
    /// Automorphisms found outside BLTA(profile); the first one in enumeration order.
    std::uint64_t outside_profile = 0;
    std::optional<std::vector<std::uint32_t>> first_outside;
};

inline constexpr int kMaxStoredEnumeration = 4;

namespace detail {

inline void check_group_input(const MonomialSet& m)
{
    if (m.n() < 1 || m.n() > static_cast<int>(kMaxEnumerateDim))
        throw std::invalid_argument("affine automorphism enumeration supports 1 <= n <= 5, got n = " +
                                    std::to_string(m.n()));
    if (!is_decreasing(m)) throw std::invalid_argument("information set is not decreasing");
}

inline bool rows_in_profile(std::span<const std::uint32_t> rows, const std::vector<int>& block)
{
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows.size(); ++c)
            if (((rows[r] >> c) & 1U) && block[c] > block[r]) return false;
    return true;
}

} // namespace detail

/// Scans GL(n, 2) for linear automorphisms of M. Work is partitioned by the value
/// of the first row; partition results are merged in row order so the output does
/// not depend on `jobs`.
inline AutEnumeration enumerate_affine_aut(const MonomialSet& m, std::string code_id = {}, unsigned jobs = 1)
{
    detail::check_group_input(m);
    const int n = m.n();
    const bool store = n <= kMaxStoredEnumeration;
    const BlockProfile profile = block_profile(m);
    const auto block = profile.block_of();
    const AutomorphismTester tester(m);

    struct Partition {
        std::uint64_t count = 0;
        std::uint64_t outside = 0;
        std::optional<std::vector<std::uint32_t>> first_outside;
        std::vector<std::vector<std::uint32_t>> elements;
    };
    const std::size_t parts = (std::size_t{1} << n) - 1;
    std::vector<Partition> results(parts);

    parallel_for(parts, jobs, [&](std::size_t p) {
        Partition& out = results[p];
        for_each_gl_with_first_row(static_cast<std::size_t>(n), static_cast<std::uint32_t>(p + 1),
                                   [&](std::span<const std::uint32_t> rows) {
                                       if (!tester.preserves(rows)) return;
                                       ++out.count;
                                       if (!detail::rows_in_profile(rows, block)) {
                                           if (!out.first_outside) out.first_outside.emplace(rows.begin(), rows.end());
                                           ++out.outside;
                                       }
                                       if (store) out.elements.emplace_back(rows.begin(), rows.end());
                                   });
    });

    AutEnumeration e;
    e.n = n;
    e.code_id = std::move(code_id);
    e.profile = profile;
    for (auto& part : results) {
        e.count += part.count;
        e.outside_profile += part.outside;
        if (!e.first_outside && part.first_outside) e.first_outside = part.first_outside;
        for (auto& el : part.elements) e.elements.push_back(std::move(el));
    }
    return e;
}

struct Theorem1Report {
    std::string code;
    int n = 0;
    std::size_t K = 0;
    BlockProfile profile;
    std::uint64_t aut_count = 0;
    BigInt blta_count = 0;
    bool pass = false;
    std::optional<std::vector<std::uint32_t>> counterexample;
};

/// Compares A-Aut(M) with BLTA(block_profile(M), n): every automorphism must lie in
/// the block lower-triangular group and the two counts must agree.
inline Theorem1Report verify_theorem1(const MonomialSet& m, std::string code_id = {}, unsigned jobs = 1)
{
    const AutEnumeration e = enumerate_affine_aut(m, code_id, jobs);
    Theorem1Report r;
    r.code = std::move(code_id);
    r.n = m.n();
    r.K = m.size();
    r.profile = e.profile;
    r.aut_count = e.count;
    r.blta_count = blta_linear_order(e.profile);
    r.counterexample = e.first_outside;
    r.pass = e.outside_profile == 0 && BigInt(e.count) == r.blta_count;
    return r;
}

// ---------------------------------------------------------------------------
// Witness procedures

struct ElementaryOp {
    enum class Kind { AddColumn, AddRow };
    Kind kind = Kind::AddColumn;
    std::size_t src = 0;
    std::size_t dst = 0;

    friend bool operator==(const ElementaryOp&, const ElementaryOp&) = default;
};

inline BitMatrix apply_op(BitMatrix a, const ElementaryOp& op)
{
    return op.kind == ElementaryOp::Kind::AddColumn ? add_column(std::move(a), op.src, op.dst)
                                                    : add_row(std::move(a), op.src, op.dst);
}

/// One extension step: the minor grows by row `row` paired with column `target`.
struct WitnessStep {
    std::size_t target = 0;      // variable of f being matched
    std::size_t rank = 0;        // rank of the submatrix the search runs in
    std::size_t rank_bound = 0;  // lower bound the proof guarantees for it
    std::size_t row = 0;         // s_k
    std::size_t col = 0;         // t_k
    std::optional<ElementaryOp> op;
    IndexList minor_rows;
    IndexList minor_cols;
    bool minor_nonsingular = false;
    bool invertible = false;
    bool in_aut = false;
};

/// Proof that the image of one monomial under the transposition lies in M.
struct MonomialWitness {
    std::uint32_t monomial = 0; // f, contains x_i but not x_{i+1}
    std::uint32_t image = 0;    // f with x_i replaced by x_{i+1}
    int case_tag = 0;           // 1: i largest, 2: i smallest, 3: interior
    std::vector<WitnessStep> steps;
    std::uint32_t source = 0;   // prod of the minor's row variables; source <= f
    bool source_in_m = false;
    bool coefficient = false;   // coefficient of `image` in source o A^{(r)}
    bool image_in_support = false;
    bool image_in_m = false;
    bool ok = false;
    std::string failure;
};

struct WitnessTrace {
    int n = 0;
    std::size_t i = 0;
    BitMatrix start;
    std::vector<MonomialWitness> monomials;
    /// Monomials settled without matrix work (neither or both of x_i, x_{i+1}, or only x_{i+1}).
    std::size_t direct_cases = 0;
    bool direct_cases_ok = false;
    bool transposition_verified = false; // independent mask-swap test of (i, i+1) on M
    bool verdict = false;
    std::string failure;

    std::vector<ElementaryOp> operations() const
    {
        std::vector<ElementaryOp> out;
        for (const auto& mw : monomials)
            for (const auto& st : mw.steps)
                if (st.op) out.push_back(*st.op);
        return out;
    }
};

namespace detail {

inline IndexList with(IndexList v, std::size_t x)
{
    v.push_back(x);
    return v;
}

inline bool contains(const IndexList& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

inline std::uint32_t mask_of(const IndexList& v)
{
    std::uint32_t m = 0;
    for (auto x : v) m |= 1U << x;
    return m;
}

/// Builds the chain A^{(1)}, ..., A^{(r)} for one monomial f and checks the conclusion.
inline MonomialWitness witness_monomial(const BitMatrix& a, const MonomialSet& m, const AutomorphismTester& tester,
                                        std::size_t i, std::uint32_t f)
{
    const std::size_t n = a.rows();
    MonomialWitness w;
    w.monomial = f;
    w.image = (f & ~(1U << i)) | (1U << (i + 1));

    IndexList targets;
    for (int v : variables(f))
        if (static_cast<std::size_t>(v) != i) targets.push_back(static_cast<std::size_t>(v));
    const bool below = std::any_of(targets.begin(), targets.end(), [&](std::size_t c) { return c < i; });
    const bool above = std::any_of(targets.begin(), targets.end(), [&](std::size_t c) { return c > i; });
    w.case_tag = above ? (below ? 3 : 2) : 1;

    BitMatrix cur = a;
    IndexList rows{i};
    IndexList cols{i + 1};

    for (std::size_t c : targets) {
        WitnessStep st;
        st.target = c;

        IndexList d_rows;
        for (std::size_t r = 0; r <= c; ++r) d_rows.push_back(r);
        if (i > c) d_rows.push_back(i);
        IndexList d_cols = cols;
        for (std::size_t q = c; q < n; ++q)
            if (!contains(d_cols, q)) d_cols.push_back(q);
        st.rank = rank(submatrix(cur, d_rows, d_cols));
        st.rank_bound = cols.size() + 1;

        bool found = false;
        if (st.rank >= st.rank_bound) {
            for (std::size_t s = 0; s <= c && !found; ++s) {
                if (contains(rows, s)) continue;
                for (std::size_t t = c; t < n && !found; ++t) {
                    if (contains(cols, t)) continue;
                    if (minor_det(cur, with(rows, s), with(cols, t))) {
                        st.row = s;
                        st.col = t;
                        found = true;
                    }
                }
            }
        }
        if (!found) {
            w.failure = st.rank < st.rank_bound ? "rank bound violated" : "no extending row/column pair";
            w.steps.push_back(std::move(st));
            return w;
        }

        rows.push_back(st.row);
        if (!minor_det(cur, rows, with(cols, c))) {
            // Adding column t to the target column restores independence. t > c,
            // so this is right multiplication by a lower unitriangular matrix.
            ElementaryOp op{ElementaryOp::Kind::AddColumn, st.col, c};
            cur = apply_op(std::move(cur), op);
            st.op = op;
        }
        cols.push_back(c);

        st.minor_rows = rows;
        st.minor_cols = cols;
        st.minor_nonsingular = minor_det(cur, rows, cols);
        st.invertible = is_invertible(cur);
        st.in_aut = tester.preserves(cur);
        const bool step_ok = st.minor_nonsingular && st.invertible && st.in_aut;
        w.steps.push_back(std::move(st));
        if (!step_ok) {
            w.failure = "step invariant violated";
            return w;
        }
    }

    // Pairing row s with column c where s <= c, and row i with column i+1, shows source <= f.
    w.source = mask_of(rows);
    const int nv = static_cast<int>(n);
    if (!leq(Monomial{w.source, nv}, Monomial{f, nv})) {
        w.failure = "source monomial does not precede f";
        return w;
    }
    w.source_in_m = m.contains(w.source);
    w.coefficient = lemma1_coefficient(cur, rows, cols);
    const MonomialSet support = transform_monomial_support(Monomial{w.source, nv}, AffineMap(cur));
    w.image_in_support = support.contains(w.image);
    w.image_in_m = m.contains(w.image);
    w.ok = w.source_in_m && w.coefficient && w.image_in_support && w.image_in_m && support.is_subset_of(m);
    if (!w.ok) w.failure = "conclusion failed";
    return w;
}

} // namespace detail

/// Given a linear automorphism A of decreasing M with a_{i,i+1} = 1, shows that
/// every monomial of M stays in M when x_i and x_{i+1} are exchanged.
///
/// A failed step is recorded in the trace (verdict false, with the reason) rather
/// than thrown: it would be a counterexample to the group characterization.
inline WitnessTrace transposition_witness(const BitMatrix& a, const MonomialSet& m, std::size_t i)
{
    const int n = m.n();
    if (!a.is_square() || static_cast<int>(a.rows()) != n)
        throw std::invalid_argument("transposition_witness: matrix size does not match the code");
    if (i + 1 >= static_cast<std::size_t>(n)) throw std::invalid_argument("transposition_witness: i + 1 out of range");
    if (!is_decreasing(m)) throw std::invalid_argument("transposition_witness: information set is not decreasing");
    if (!is_invertible(a)) throw std::invalid_argument("transposition_witness: matrix is singular");
    if (!a.get(i, i + 1)) throw std::invalid_argument("transposition_witness: a_{i,i+1} is zero");
    const AutomorphismTester tester(m);
    if (!tester.preserves(a)) throw std::invalid_argument("transposition_witness: matrix is not an automorphism");

    WitnessTrace tr;
    tr.n = n;
    tr.i = i;
    tr.start = a;
    tr.direct_cases_ok = true;
    const std::uint32_t bi = 1U << i;
    const std::uint32_t bj = 1U << (i + 1);
    for (auto f : m) {
        const bool has_i = f & bi;
        const bool has_j = f & bj;
        if (has_i && !has_j) {
            tr.monomials.push_back(detail::witness_monomial(a, m, tester, i, f));
            continue;
        }
        ++tr.direct_cases;
        // Unchanged, or x_{i+1} -> x_i which moves down in the order.
        const std::uint32_t image = (has_j && !has_i) ? ((f & ~bj) | bi) : f;
        if (!m.contains(image)) tr.direct_cases_ok = false;
    }

    tr.transposition_verified = transposition_preserves(m, static_cast<int>(i), static_cast<int>(i) + 1);
    const bool all_ok =
        std::all_of(tr.monomials.begin(), tr.monomials.end(), [](const MonomialWitness& w) { return w.ok; });
    tr.verdict = all_ok && tr.direct_cases_ok && tr.transposition_verified;
    if (!all_ok) {
        for (const auto& w : tr.monomials)
            if (!w.ok) {
                tr.failure = "monomial " + to_string(Monomial{w.monomial, n}) + ": " + w.failure;
                break;
            }
    } else if (!tr.direct_cases_ok) {
        tr.failure = "direct case left the information set";
    } else if (!tr.transposition_verified) {
        tr.failure = "witness succeeded but mask-swap test disagrees";
    }
    return tr;
}

struct ReductionResult {
    std::size_t i = 0;
    std::size_t j = 0;
    AffineMap start;
    BitMatrix linear;  // A after removing the translation
    BitMatrix filled;  // B with b_{k,k+1} = 1 for i <= k < j
    std::vector<ElementaryOp> ops;
    bool intermediates_ok = false;
    std::vector<WitnessTrace> traces;
    /// Adjacent transpositions whose product is (i, j).
    std::vector<std::pair<std::size_t, std::size_t>> chain;
    bool chain_is_ij = false;
    bool chain_preserves = false;
    bool transposition_verified = false;
    bool holds = false;
    std::string failure;
};

/// Reduces an automorphism with a_{i,j} = 1 (i < j) to adjacent witnesses and
/// concludes that (i, j) is an automorphism.
inline ReductionResult theorem1_reduction(const AffineMap& t, const MonomialSet& m, std::size_t i, std::size_t j)
{
    const int n = m.n();
    if (t.n() != n) throw std::invalid_argument("theorem1_reduction: map size does not match the code");
    if (!(i < j) || j >= static_cast<std::size_t>(n)) throw std::invalid_argument("theorem1_reduction: need i < j < n");
    if (!is_decreasing(m)) throw std::invalid_argument("theorem1_reduction: information set is not decreasing");
    if (!t.A().get(i, j)) throw std::invalid_argument("theorem1_reduction: a_{i,j} is zero");
    const AutomorphismTester tester(m);
    if (!tester.preserves(t)) throw std::invalid_argument("theorem1_reduction: map is not an automorphism");

    ReductionResult res;
    res.i = i;
    res.j = j;
    res.start = t;

    // (I, b) o (A, b) = (A, 0)
    const AffineMap stripped = compose(AffineMap::translation(t.b()), t);
    res.linear = stripped.A();
    res.intermediates_ok = !stripped.b().any() && tester.preserves(stripped);

    BitMatrix b = res.linear;
    auto step = [&](ElementaryOp op) {
        b = apply_op(std::move(b), op);
        res.ops.push_back(op);
        if (!is_invertible(b) || !tester.preserves(b)) res.intermediates_ok = false;
    };
    for (std::size_t k = i; k < j; ++k) {
        if (b.get(k, k + 1)) continue;
        // Column j into a preceding column and row i into a later row are both
        // multiplications by lower unitriangular matrices.
        if (!b.get(i, k + 1)) step({ElementaryOp::Kind::AddColumn, j, k + 1});
        // The column step may already have set b_{k,k+1}; adding row i would clear it again.
        if (!b.get(k, k + 1)) step({ElementaryOp::Kind::AddRow, i, k});
    }
    for (std::size_t k = i; k < j; ++k)
        if (!b.get(k, k + 1)) res.intermediates_ok = false;
    res.filled = b;

    bool traces_ok = res.intermediates_ok;
    if (res.intermediates_ok) {
        for (std::size_t k = i; k < j; ++k) {
            res.traces.push_back(transposition_witness(b, m, k));
            traces_ok = traces_ok && res.traces.back().verdict;
        }
    }

    // (i,j) = (i,i+1)(i+1,i+2)...(j-1,j)...(i+1,i+2)(i,i+1)
    for (std::size_t k = i; k < j; ++k) res.chain.emplace_back(k, k + 1);
    for (std::size_t k = j - 1; k-- > i;) res.chain.emplace_back(k, k + 1);
    std::vector<std::size_t> perm(static_cast<std::size_t>(n));
    for (std::size_t v = 0; v < perm.size(); ++v) perm[v] = v;
    MonomialSet moved = m;
    res.chain_preserves = true;
    for (auto [p, q] : res.chain) {
        std::swap(perm[p], perm[q]);
        moved = swap_variables(moved, static_cast<int>(p), static_cast<int>(q));
        if (!(moved == m)) res.chain_preserves = false;
    }
    res.chain_is_ij = true;
    for (std::size_t v = 0; v < perm.size(); ++v) {
        const std::size_t expect = v == i ? j : (v == j ? i : v);
        if (perm[v] != expect) res.chain_is_ij = false;
    }
    res.transposition_verified = transposition_preserves(m, static_cast<int>(i), static_cast<int>(j));
    res.holds = traces_ok && res.chain_is_ij && res.chain_preserves && res.transposition_verified;
    if (!res.intermediates_ok) res.failure = "row/column operations left the automorphism group";
    else if (!traces_ok) res.failure = "adjacent transposition witness failed";
    else if (!res.chain_is_ij || !res.chain_preserves) res.failure = "transposition chain does not compose to (i,j)";
    else if (!res.transposition_verified) res.failure = "mask-swap test of (i,j) disagrees";
    return res;
}

// ---------------------------------------------------------------------------
// Code batteries

/// Every down-closed subset of M_n (n <= 4; 2^(2^n) candidate subsets).
inline std::vector<MonomialSet> all_decreasing_sets(int n)
{
    if (n < 1 || n > 4) throw std::invalid_argument("all_decreasing_sets: supports 1 <= n <= 4");
    const std::uint32_t count = 1U << n;
    // Predecessors under the order, per monomial, as bit masks over monomials.
    std::vector<std::uint32_t> below(count, 0);
    for (std::uint32_t f = 0; f < count; ++f)
        for (std::uint32_t g = 0; g < count; ++g)
            if (leq(Monomial{g, n}, Monomial{f, n})) below[f] |= 1U << g;
    std::vector<MonomialSet> out;
    const std::uint64_t subsets = std::uint64_t{1} << count;
    for (std::uint64_t s = 0; s < subsets; ++s) {
        bool closed = true;
        for (std::uint32_t f = 0; f < count && closed; ++f)
            if (((s >> f) & 1U) && (below[f] & ~static_cast<std::uint32_t>(s))) closed = false;
        if (!closed) continue;
        std::vector<std::uint32_t> masks;
        for (std::uint32_t f = 0; f < count; ++f)
            if ((s >> f) & 1U) masks.push_back(f);
        out.emplace_back(n, std::move(masks));
    }
    return out;
}

/// Decreasing set generated by 1 to max_generators random monomials.
template <class Engine>
MonomialSet random_decreasing_set(int n, Engine& rng, int max_generators = 3)
{
    std::uniform_int_distribution<int> count(1, max_generators);
    std::uniform_int_distribution<std::uint32_t> mono(0, (1U << n) - 1);
    const int k = count(rng);
    std::vector<std::uint32_t> gens;
    for (int g = 0; g < k; ++g) gens.push_back(mono(rng));
    return decreasing_closure(MonomialSet(n, std::move(gens)));
}

/// A decreasing set, a linear automorphism of it, and an index i inside a block of
/// the profile with a_{i,i+1} = 1: a valid input for transposition_witness.
struct WitnessInstance {
    MonomialSet info;
    BitMatrix a;
    std::size_t i = 0;
};

template <class Engine>
WitnessInstance sample_witness_instance(int n, Engine& rng)
{
    if (n < 2) throw std::invalid_argument("sample_witness_instance: need n >= 2");
    for (;;) {
        MonomialSet m = random_decreasing_set(n, rng);
        const BlockProfile s = block_profile(m);
        if (s.blocks() == static_cast<std::size_t>(n)) continue;
        const auto block = s.block_of();
        const BitMatrix a = sample_blta(s, rng).A();
        IndexList candidates;
        for (int k = 0; k + 1 < n; ++k)
            if (block[k] == block[k + 1] && a.get(k, k + 1)) candidates.push_back(static_cast<std::size_t>(k));
        if (candidates.empty()) continue;
        const std::size_t pick = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
        return {std::move(m), a, pick};
    }
}

struct NamedCode {
    std::string id;
    MonomialSet info;
};

/// All down-closed sets at n = 3.
inline std::vector<NamedCode> battery_n3()
{
    std::vector<NamedCode> out;
    for (const auto& m : all_decreasing_sets(3)) {
        std::string id = "downset3:";
        for (std::size_t k = 0; k < m.masks().size(); ++k) id += (k ? "," : "") + std::to_string(m.masks()[k]);
        out.push_back({id, m});
    }
    return out;
}

/// RM(r,4) for all r, 100 seeded random decreasing sets, and PW / BEC(0.5) codes at K in {4,8,12}.
inline std::vector<NamedCode> battery_n4(std::uint64_t seed = 2024)
{
    std::vector<NamedCode> out;
    for (int r = 0; r <= 4; ++r) out.push_back({"RM(" + std::to_string(r) + ",4)", MonomialSet::reed_muller(r, 4)});
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 100; ++k) out.push_back({"random4#" + std::to_string(k), random_decreasing_set(4, rng)});
    for (std::size_t K : {4, 8, 12}) {
        out.push_back({"PW(4," + std::to_string(K) + ")", construct_pw(4, K).info});
        out.push_back({"BEC(4," + std::to_string(K) + ",0.5)", construct_bec(4, K, 0.5).info});
    }
    return out;
}

} // namespace polaraut
