#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fblkit/channel.hpp"
#include "fblkit/errors.hpp"
#include "fblkit/rng.hpp"

namespace fblkit {

// Tie handling at the decoder. TiesAreErrors counts a trial as an error as
// soon as any competitor metric is >= the transmitted word's metric (the
// pessimistic convention the closed-form bounds are proved for).
// UniformTiebreak returns a uniformly random maximizer instead. Metric ties
// are detected by exact equality of the log-likelihood doubles; there is no
// tolerance.
enum class TiePolicy { TiesAreErrors, UniformTiebreak };

// Fresh-per-trial resamples the codebook every trial, which is the ensemble
// average the bounds speak about. The fixed-codebook mode reuses one random
// codebook across all trials; it estimates the error of that single code,
// NOT the ensemble quantity the bounds dominate, and exists for exploration
// only.
enum class CodebookMode { FreshPerTrial, FixedCodebook };

struct Codebook {
    Codebook(std::size_t blocklength, std::size_t num_words,
             std::size_t alphabet_size, std::vector<Symbol> words);

    std::size_t blocklength;
    std::size_t num_words;
    std::size_t alphabet_size;
    std::vector<Symbol> words;  // num_words x blocklength, row-major

    std::span<const Symbol> word(std::size_t m) const {
        return {words.data() + m * blocklength, blocklength};
    }
};

struct SimulationReport {
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;   // Wilson 95% interval; always contains p_hat
    double ci_high = 0.0;
    TiePolicy tie_policy = TiePolicy::TiesAreErrors;
    CodebookMode codebook_mode = CodebookMode::FreshPerTrial;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double rate = 0.0;
    std::uint64_t num_codewords = 0;
};

struct LlnEntry {
    std::size_t n = 0;
    double probability = 0.0;
    std::uint64_t trials = 0;
};

struct LlnReport {
    double delta = 0.0;
    std::vector<LlnEntry> entries;
};

// One atom of the exact distribution of the blocklength-n information
// density under the joint ensemble (X^n, Y^n).
struct DensityAtom {
    double value = 0.0;
    double probability = 0.0;
};

struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};

// Wilson 95% score interval for a binomial proportion.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

// i.i.d. codebook: M words of length n, letters drawn from px. Deterministic
// in seed (stream 0 of the seed).
Codebook sample_codebook(const InputDistribution& px, std::size_t n,
                         std::uint64_t num_words, std::uint64_t seed);

// Maximum-likelihood decoder. Returns the index of a metric maximizer: the
// lowest such index under TiesAreErrors (whose tie semantics live in
// estimate_error, not here), a uniformly random maximizer drawn from rng
// under UniformTiebreak.
std::size_t ml_decode(const Channel& ch, const Codebook& cb,
                      std::span<const Symbol> y, TiePolicy policy,
                      StreamRng& rng);

// Random-coding error estimate: every trial samples a fresh codebook
// (ensemble average), transmits word 0 and decodes the noisy output. Trial t
// uses the counter-based stream (seed, t), so reports are bit-identical
// regardless of max_threads (0 = one worker per hardware thread).
SimulationReport estimate_error(const Channel& ch, const InputDistribution& px,
                                std::size_t n, double rate,
                                std::uint64_t trials, std::uint64_t seed,
                                TiePolicy policy,
                                CodebookMode mode = CodebookMode::FreshPerTrial,
                                unsigned max_threads = 0);

// Exact ensemble error by full enumeration over (x, y) in X^n x Y^n:
//   P_e = sum_{x,y} P_X(x) P(y|x) * Pr{some competitor wins}.
// Under TiesAreErrors the inner probability is 1 - (1 - q)^{M-1} with
// q(x,y) = Pr{P(y|X') >= P(y|x)}; under UniformTiebreak the tie atom is
// split uniformly among the tied maximizers. Guarded to <= 1e7 (x, y) pairs.
double exact_ensemble_error(const Channel& ch, const InputDistribution& px,
                            std::size_t n, std::uint64_t num_words,
                            TiePolicy policy);

// Empirical Pr{i/n <= I - delta} for each n in n_list (trials each).
LlnReport lln_experiment(const Channel& ch, const InputDistribution& px,
                         std::span<const std::size_t> n_list, double delta,
                         std::uint64_t trials, std::uint64_t seed);

// Two-sided Kolmogorov-Smirnov distance between the empirical distribution
// of i/n and Normal(I, V/n). Throws ZeroDispersionError when V = 0.
double density_gaussian_check(const Channel& ch, const InputDistribution& px,
                              std::size_t n, std::uint64_t trials,
                              std::uint64_t seed);

// Exact pmf of the blocklength-n information density, computed by repeated
// convolution of the single-letter atoms. Atoms with equal double values
// merge; the support is guarded against combinatorial blowup.
std::vector<DensityAtom> exact_density_distribution(const Channel& ch,
                                                    const InputDistribution& px,
                                                    std::size_t n);

}  // namespace fblkit
