#pragma once

// Polar encoding, min-sum successive cancellation decoding, automorphism
// ensemble decoding, channel models and a Monte Carlo BLER harness.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "affine.hpp"
#include "autgroup.hpp"
#include "gf2.hpp"
#include "monomial.hpp"

namespace polaraut {

/// Positive LLR means bit 0 is more likely.
using LlrVector = std::vector<double>;

/// Magnitude used for certain BEC observations; erasures are exactly 0.
inline constexpr double kBecCertainLlr = 1000.0;

/// x = u H_N with the info bits placed at the information rows (ascending) and zeros elsewhere.
inline BitVec polar_encode(const BitVec& info_bits, const CodeSpec& spec)
{
    const auto idx = spec.info_indices();
    if (info_bits.size() != idx.size()) throw std::invalid_argument("polar_encode: expected K info bits");
    BitVec u(spec.length());
    for (std::size_t k = 0; k < idx.size(); ++k)
        if (info_bits.get(k)) u.set(idx[k]);
    polar_transform_inplace(u.words(), spec.n);
    return u;
}

struct DecodeResult {
    BitVec info_bits;
    BitVec codeword;
    std::vector<double> scores; // one per ensemble member
    std::size_t chosen = 0;
};

/// Correlation sum_i (1 - 2 x_i) llr_i; the ML metric for BPSK.
inline double correlation(const BitVec& x, std::span<const double> llr)
{
    if (x.size() != llr.size()) throw std::invalid_argument("correlation: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < llr.size(); ++i) s += x.get(i) ? -llr[i] : llr[i];
    return s;
}

/// Reusable SC decoder for one code. Not thread-safe; use one instance per thread.
class ScDecoder {
public:
    explicit ScDecoder(const CodeSpec& spec)
        : n_(spec.n), len_(spec.length()), frozen_(spec.frozen()), info_(spec.info_indices()), u_(len_, 0)
    {
        // Scratch LLR and partial-sum buffers for every recursion depth.
        std::size_t total = 0;
        for (std::size_t l = len_; l >= 1; l /= 2) {
            offsets_.push_back(total);
            total += l;
            if (l == 1) break;
        }
        llr_.assign(total, 0.0);
        bits_.assign(2 * total, 0);
    }

    std::size_t length() const { return len_; }

    DecodeResult decode(std::span<const double> llr)
    {
        if (llr.size() != len_) throw std::invalid_argument("sc_decode: LLR length mismatch");
        std::copy(llr.begin(), llr.end(), llr_.begin());
        std::vector<std::uint8_t> x(len_, 0);
        recurse(0, 0, x.data());
        DecodeResult r;
        r.info_bits = BitVec(info_.size());
        for (std::size_t k = 0; k < info_.size(); ++k)
            if (u_[info_[k]]) r.info_bits.set(k);
        r.codeword = BitVec(len_);
        for (std::size_t j = 0; j < len_; ++j)
            if (x[j]) r.codeword.set(j);
        return r;
    }

private:
    static double check_node(double a, double b)
    {
        const double m = std::min(std::fabs(a), std::fabs(b));
        return ((a < 0) != (b < 0)) ? -m : m;
    }

    // Decodes the sub-block whose LLRs sit at depth `depth`; writes its codeword to x_out.
    void recurse(std::size_t depth, std::size_t u_off, std::uint8_t* x_out)
    {
        const std::size_t len = len_ >> depth;
        const double* in = llr_.data() + offsets_[depth];
        if (len == 1) {
            const std::uint8_t bit = frozen_[u_off] ? 0 : (in[0] < 0 ? 1 : 0);
            u_[u_off] = bit;
            x_out[0] = bit;
            return;
        }
        const std::size_t half = len / 2;
        double* child = llr_.data() + offsets_[depth + 1];
        std::uint8_t* left = bits_.data() + 2 * offsets_[depth + 1];
        std::uint8_t* right = left + half;

        for (std::size_t k = 0; k < half; ++k) child[k] = check_node(in[k], in[k + half]);
        recurse(depth + 1, u_off, left);
        for (std::size_t k = 0; k < half; ++k) child[k] = in[k + half] + (left[k] ? -in[k] : in[k]);
        recurse(depth + 1, u_off + half, right);
        for (std::size_t k = 0; k < half; ++k) {
            x_out[k] = left[k] ^ right[k];
            x_out[k + half] = right[k];
        }
    }

    int n_;
    std::size_t len_;
    std::vector<bool> frozen_;
    std::vector<std::size_t> info_;
    std::vector<std::uint8_t> u_;
    std::vector<std::size_t> offsets_;
    std::vector<double> llr_;
    std::vector<std::uint8_t> bits_;
};

/// Min-sum SC decoding; hard decision at LLR 0 is bit 0.
inline DecodeResult sc_decode(std::span<const double> llr, const CodeSpec& spec)
{
    ScDecoder dec(spec);
    return dec.decode(llr);
}

namespace detail {

inline BitVec info_from_codeword(const BitVec& x, const CodeSpec& spec)
{
    BitVec u = x;
    polar_transform_inplace(u.words(), spec.n);
    const auto idx = spec.info_indices();
    BitVec info(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        if (u.get(idx[k])) info.set(k);
    return info;
}

} // namespace detail

/// Decodes pi(llr) for each ensemble member, maps each candidate back and keeps the
/// one with the largest correlation (lowest member index on ties).
inline DecodeResult ae_decode(std::span<const double> llr, std::span<const PositionPermutation> perms,
                              const CodeSpec& spec, ScDecoder& dec)
{
    if (perms.empty()) throw std::invalid_argument("ae_decode: empty ensemble");
    DecodeResult best;
    for (std::size_t p = 0; p < perms.size(); ++p) {
        const auto permuted = perms[p].apply(llr);
        DecodeResult r = dec.decode(permuted);
        const BitVec candidate = perms[p].unapply(r.codeword);
        const double score = correlation(candidate, llr);
        best.scores.push_back(score);
        if (p == 0 || score > best.scores[best.chosen]) {
            best.chosen = p;
            best.codeword = candidate;
        }
    }
    best.info_bits = detail::info_from_codeword(best.codeword, spec);
    return best;
}

inline DecodeResult ae_decode(std::span<const double> llr, std::span<const PositionPermutation> perms,
                              const CodeSpec& spec)
{
    ScDecoder dec(spec);
    return ae_decode(llr, perms, spec, dec);
}

// ---------------------------------------------------------------------------
// Channels

struct ChannelModel {
    enum class Kind { Bec, Awgn };
    Kind kind = Kind::Awgn;
    double erasure_prob = 0.0; // BEC
    double ebn0_db = 0.0;      // AWGN
    double rate = 1.0;         // AWGN: K / N

    static ChannelModel bec(double eps) { return {Kind::Bec, eps, 0.0, 1.0}; }
    static ChannelModel awgn(double ebn0_db, double rate) { return {Kind::Awgn, 0.0, ebn0_db, rate}; }

    double noise_sigma() const { return std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0))); }

    /// Channel LLRs for a transmitted codeword.
    template <class Engine>
    LlrVector transmit(const BitVec& x, Engine& rng) const
    {
        LlrVector llr(x.size());
        if (kind == Kind::Bec) {
            if (erasure_prob < 0.0 || erasure_prob >= 1.0) throw std::invalid_argument("BEC erasure probability must lie in [0, 1)");
            std::bernoulli_distribution erase(erasure_prob);
            for (std::size_t i = 0; i < x.size(); ++i)
                llr[i] = erase(rng) ? 0.0 : (x.get(i) ? -kBecCertainLlr : kBecCertainLlr);
        } else {
            if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("AWGN code rate must lie in (0, 1]");
            const double sigma = noise_sigma();
            std::normal_distribution<double> noise(0.0, sigma);
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double y = (x.get(i) ? -1.0 : 1.0) + noise(rng);
                llr[i] = 2.0 * y / (sigma * sigma);
            }
        }
        return llr;
    }
};

/// Independent stream per (seed, index): splitmix64 finalizer.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

template <class Engine>
BitVec random_bits(std::size_t len, Engine& rng)
{
    BitVec v(len);
    for (auto& w : v.words()) w = rng();
    v.trim();
    return v;
}

// ---------------------------------------------------------------------------
// SC invariance

struct InvarianceReport {
    std::size_t trials = 0;
    std::size_t hard_equal = 0;  // SC(pi(L)) == pi(SC(L)) as codewords
    double fraction() const { return trials == 0 ? 1.0 : static_cast<double>(hard_equal) / static_cast<double>(trials); }
};

/// Tests SC(pi(L)) = pi(SC(L)) on noisy transmissions of random codewords.
inline InvarianceReport sc_invariance_check(const AffineMap& t, const CodeSpec& spec, std::size_t trials,
                                            std::uint64_t seed, const ChannelModel& channel)
{
    const auto pi = induced_permutation(t);
    ScDecoder dec(spec);
    InvarianceReport rep;
    rep.trials = trials;
    for (std::size_t k = 0; k < trials; ++k) {
        std::mt19937_64 rng(derive_seed(seed, k));
        const BitVec x = polar_encode(random_bits(spec.K(), rng), spec);
        const LlrVector llr = channel.transmit(x, rng);
        const BitVec direct = pi.apply(dec.decode(llr).codeword);
        const BitVec permuted = dec.decode(pi.apply(llr)).codeword;
        if (direct == permuted) ++rep.hard_equal;
    }
    return rep;
}

inline InvarianceReport sc_invariance_check(const AffineMap& t, const CodeSpec& spec, std::size_t trials,
                                            std::uint64_t seed)
{
    const double rate = static_cast<double>(spec.K()) / static_cast<double>(spec.length());
    return sc_invariance_check(t, spec, trials, seed, ChannelModel::awgn(2.0, rate));
}

// ---------------------------------------------------------------------------
// Ensemble preparation

struct Ensemble {
    std::vector<AffineMap> maps;
    std::vector<PositionPermutation> perms;
    std::size_t draws = 0;    // BLTA samples drawn
    std::size_t rejected = 0; // samples rejected as SC-equivalent to an earlier member
};

/// Identity followed by L - 1 BLTA(s) samples. With screening, a sample is kept
/// only if its ensemble candidates differ from every kept member's on a fixed set
/// of noisy probe frames; after `max_draws` samples screening gives up and fills
/// the ensemble with unscreened draws.
inline Ensemble sample_ensemble(const CodeSpec& spec, const BlockProfile& s, std::size_t L, std::uint64_t seed,
                                bool screen = true, std::size_t probes = 32, std::size_t max_draws = 4096)
{
    if (L == 0) throw std::invalid_argument("sample_ensemble: L must be positive");
    if (s.n() != spec.n) throw std::invalid_argument("sample_ensemble: profile does not match the code");
    Ensemble e;
    e.maps.push_back(AffineMap::identity(spec.n));
    e.perms.push_back(PositionPermutation::identity(spec.length()));

    ScDecoder dec(spec);
    const double rate = static_cast<double>(spec.K()) / static_cast<double>(spec.length());
    std::vector<LlrVector> probe_llrs;
    std::mt19937_64 probe_rng(derive_seed(seed, 0xC0DE));
    const ChannelModel probe_channel = ChannelModel::awgn(1.0, rate);
    for (std::size_t p = 0; p < probes; ++p)
        probe_llrs.push_back(probe_channel.transmit(polar_encode(random_bits(spec.K(), probe_rng), spec), probe_rng));
    auto signature = [&](const PositionPermutation& pi) {
        std::vector<BitVec> sig;
        for (const auto& llr : probe_llrs) sig.push_back(pi.unapply(dec.decode(pi.apply(llr)).codeword));
        return sig;
    };
    std::vector<std::vector<BitVec>> kept;
    if (screen) kept.push_back(signature(e.perms.front()));

    std::mt19937_64 rng(seed);
    while (e.perms.size() < L) {
        AffineMap t = sample_blta(s, rng);
        ++e.draws;
        auto pi = induced_permutation(t);
        if (screen && e.draws <= max_draws) {
            auto sig = signature(pi);
            if (std::find(kept.begin(), kept.end(), sig) != kept.end()) {
                ++e.rejected;
                continue;
            }
            kept.push_back(std::move(sig));
        }
        e.maps.push_back(std::move(t));
        e.perms.push_back(std::move(pi));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct DecoderConfig {
    enum class Kind { Sc, Ae };
    Kind kind = Kind::Sc;
    std::vector<PositionPermutation> perms; // AE ensemble
    std::string name() const { return kind == Kind::Sc ? "sc" : "ae"; }
    std::size_t L() const { return kind == Kind::Sc ? 1 : perms.size(); }
};

struct SimStats {
    std::uint64_t frames = 0;
    std::uint64_t errors = 0;
    std::uint64_t seed = 0;
    double bler = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
};

/// 95% Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t frames, double z = 1.959963984540054)
{
    if (frames == 0) return {0.0, 1.0};
    const double nf = static_cast<double>(frames);
    const double p = static_cast<double>(errors) / nf;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nf;
    const double centre = (p + z2 / (2.0 * nf)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)) / denom;
    const double lo = errors == 0 ? 0.0 : std::max(0.0, centre - half);
    const double hi = errors == frames ? 1.0 : std::min(1.0, centre + half);
    return {lo, hi};
}

/// Frame f uses the generator seeded by derive_seed(seed, f), so results are
/// independent of `jobs`.
inline SimStats simulate_bler(const CodeSpec& spec, const DecoderConfig& decoder, const ChannelModel& channel,
                              std::uint64_t frames, std::uint64_t seed, unsigned jobs = 1)
{
    if (frames == 0) throw std::invalid_argument("simulate_bler: need at least one frame");
    if (decoder.kind == DecoderConfig::Kind::Ae && decoder.perms.empty())
        throw std::invalid_argument("simulate_bler: AE decoder needs a nonempty ensemble");
    constexpr std::uint64_t kChunk = 1024;
    const std::size_t chunks = static_cast<std::size_t>((frames + kChunk - 1) / kChunk);
    std::vector<std::uint64_t> errors(chunks, 0);
    parallel_for(chunks, jobs, [&](std::size_t c) {
        ScDecoder dec(spec);
        const std::uint64_t lo = c * kChunk;
        const std::uint64_t hi = std::min<std::uint64_t>(frames, lo + kChunk);
        for (std::uint64_t f = lo; f < hi; ++f) {
            std::mt19937_64 rng(derive_seed(seed, f));
            const BitVec info = random_bits(spec.K(), rng);
            const LlrVector llr = channel.transmit(polar_encode(info, spec), rng);
            const DecodeResult r = decoder.kind == DecoderConfig::Kind::Sc ? dec.decode(llr)
                                                                           : ae_decode(llr, decoder.perms, spec, dec);
            if (!(r.info_bits == info)) ++errors[c];
        }
    });
    SimStats s;
    s.frames = frames;
    s.seed = seed;
    for (auto e : errors) s.errors += e;
    s.bler = static_cast<double>(s.errors) / static_cast<double>(frames);
    std::tie(s.wilson_lo, s.wilson_hi) = wilson_interval(s.errors, frames);
    return s;
}

} // namespace polaraut
