#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "fblkit/channel.hpp"
#include "fblkit/errors.hpp"
#include "fblkit/measures.hpp"

namespace fblkit {

// Code parameters for blocklength n and rate R (bits per channel use).
// The codebook size M = ceil(2^{nR}) is derived on demand; R must be
// positive so that M >= 2.
struct CodeParameters {
    CodeParameters(std::size_t blocklength, double rate);

    std::size_t blocklength;
    double rate;

    // ceil(2^{nR}), with values a few ulp from an integer snapped to it so
    // that rates of the form log2(M)/n recover M exactly.
    // Throws InstanceTooLargeError once 2^{nR} leaves the uint64 range.
    std::uint64_t num_codewords() const;
};

// Channel statistics plus the slack/target pair used by the closed-form
// bounds: delta > 0 (bits), epsilon in (0, 1).
struct BoundInputs {
    BoundInputs(ChannelStatistics stats, double delta, double epsilon);

    ChannelStatistics stats;
    double delta;
    double epsilon;
};

// Probability bound clipped to [0, 1] at the API boundary. The raw base-2
// exponent of the dominating term is kept alongside so that deeply clipped
// or vanishing values stay diagnosable. clipped is set once the raw value
// reaches 1, i.e. whenever the cap is active and the bound is vacuous.
struct ClippedBound {
    double value = 0.0;
    double exponent = 0.0;
    bool clipped = false;
};

struct RateEstimate {
    double rate = 0.0;
    bool negative = false;  // rate < 0: reported as-is, flagged for callers
};

// Markov/pairwise bound on the probability that a single independent
// competitor codeword beats (or ties) the transmitted one:
//   Pr{P(y|X') >= P(y|x)} <= P_Y(y)/P_{Y|X}(y|x) = 2^{-i(x;y)}.
// Not clipped; the bound legitimately exceeds 1 for atypical (x, y).
// Throws InfiniteBoundError when P(y|x) = 0 (conditioning event has
// probability zero) and UndefinedDensityError when the density is undefined.
double pairwise_markov_bound(const Channel& ch, const InputDistribution& px,
                             std::span<const Symbol> x,
                             std::span<const Symbol> y);

// Union bound over 2^{nR} competitors given the realized density i:
// min(1, 2^{nR - i}).
ClippedBound conditional_error_bound(const CodeParameters& params,
                                     double info_density_bits);

// Ensemble achievability bound eps + 2^{-n(I - delta - R)}, clipped to [0,1].
// eps is a bound on Pr{i/n <= I - delta}.
ClippedBound ensemble_error_bound(const CodeParameters& params,
                                  const BoundInputs& inputs);

// Gaussian approximation of the ensemble error,
//   Q((I - delta - R)/sqrt(V/n)) + 2^{-n delta},
// clipped to [0,1]. This is an approximation, not a guaranteed bound.
// For V = 0 the Gaussian degenerates to a step: the value is 2^{-n delta}
// when R + delta < I and 1 otherwise.
ClippedBound normal_approx_error(const CodeParameters& params,
                                 const BoundInputs& inputs);

// Rate at target error epsilon with explicit slack delta:
//   R = I - delta - sqrt(V/n) * Qinv(epsilon - 2^{-n delta}).
// Throws InfeasibleSlackError when epsilon <= 2^{-n delta}. A negative rate
// is returned as-is with the flag set.
RateEstimate normal_approx_rate(std::size_t n, double epsilon,
                                const ChannelStatistics& stats, double delta);

// Asymptotic form R = I - sqrt(V/n) * Qinv(epsilon).
double normal_approx_rate_asymptotic(std::size_t n, double epsilon,
                                     const ChannelStatistics& stats);

// Default slack schedule delta(n) = n^{-3/4}: decays slower than 1/n, so
// 2^{-n delta} still vanishes, but faster than 1/sqrt(n), so the rate
// penalty is asymptotically negligible against the dispersion term.
double delta_schedule(std::size_t n);

// Standard Gaussian tail Q(z) = Pr{N(0,1) > z} and its inverse.
// qfunc_inv brackets the root, bisects to the 1e-12 p-space tolerance and
// polishes with Newton steps; DomainError for p outside (0, 1).
double qfunc(double z);
double qfunc_inv(double p);

}  // namespace fblkit
