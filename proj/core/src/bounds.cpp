#include "fblkit/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace fblkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gaussian_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

CodeParameters::CodeParameters(std::size_t blocklength_, double rate_)
    : blocklength(blocklength_), rate(rate_) {
    if (blocklength < 1) {
        throw DomainError("blocklength must be >= 1");
    }
    if (!(rate > 0.0)) {
        throw DomainError("rate must be positive so that ceil(2^{nR}) >= 2");
    }
}

std::uint64_t CodeParameters::num_codewords() const {
    const double v = std::exp2(static_cast<double>(blocklength) * rate);
    if (!(v < 9.0e18)) {
        throw InstanceTooLargeError(
            "ceil(2^{nR}) does not fit in 64 bits (n = " +
            std::to_string(blocklength) + ", R = " + std::to_string(rate) + ")");
    }
    const double nearest = std::round(v);
    const double m =
        std::abs(v - nearest) <= v * 1e-12 ? nearest : std::ceil(v);
    if (m < 2.0) {
        throw DomainError("rate too small: ceil(2^{nR}) < 2");
    }
    return static_cast<std::uint64_t>(m);
}

BoundInputs::BoundInputs(ChannelStatistics stats_, double delta_,
                         double epsilon_)
    : stats(stats_), delta(delta_), epsilon(epsilon_) {
    if (!(delta > 0.0)) {
        throw DomainError("delta must be positive");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("epsilon must lie in (0, 1)");
    }
}

double pairwise_markov_bound(const Channel& ch, const InputDistribution& px,
                             std::span<const Symbol> x,
                             std::span<const Symbol> y) {
    const double density = information_density(ch, px, x, y);
    if (density == -kInf) {
        throw InfiniteBoundError(
            "P(y|x) = 0: the pairwise bound 2^{-i} is infinite because the "
            "conditioning event has probability zero");
    }
    return std::exp2(-density);
}

ClippedBound conditional_error_bound(const CodeParameters& params,
                                     double info_density_bits) {
    const double exponent =
        static_cast<double>(params.blocklength) * params.rate -
        info_density_bits;
    const double raw = std::exp2(exponent);
    return ClippedBound{std::min(1.0, raw), exponent, raw >= 1.0};
}

ClippedBound ensemble_error_bound(const CodeParameters& params,
                                  const BoundInputs& inputs) {
    const double n = static_cast<double>(params.blocklength);
    const double exponent =
        -n * (inputs.stats.mutual_information - inputs.delta - params.rate);
    const double raw = inputs.epsilon + std::exp2(exponent);
    return ClippedBound{std::min(1.0, raw), exponent, raw >= 1.0};
}

ClippedBound normal_approx_error(const CodeParameters& params,
                                 const BoundInputs& inputs) {
    const double n = static_cast<double>(params.blocklength);
    const double margin =
        inputs.stats.mutual_information - inputs.delta - params.rate;
    const double exponent = -n * inputs.delta;
    double raw;
    if (inputs.stats.dispersion > 0.0) {
        raw = qfunc(margin / std::sqrt(inputs.stats.dispersion / n)) +
              std::exp2(exponent);
    } else {
        raw = margin > 0.0 ? std::exp2(exponent) : 1.0;
    }
    return ClippedBound{std::min(1.0, raw), exponent, raw >= 1.0};
}

RateEstimate normal_approx_rate(std::size_t n, double epsilon,
                                const ChannelStatistics& stats, double delta) {
    if (n < 1) throw DomainError("blocklength must be >= 1");
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("epsilon must lie in (0, 1)");
    }
    const double tail = std::exp2(-static_cast<double>(n) * delta);
    const double slack = epsilon - tail;
    if (!(slack > 0.0)) {
        throw InfeasibleSlackError(
            "epsilon <= 2^{-n delta} (epsilon = " + std::to_string(epsilon) +
            ", 2^{-n delta} = " + std::to_string(tail) +
            "): no probability mass left for the Gaussian term");
    }
    const double rate =
        stats.mutual_information - delta -
        std::sqrt(stats.dispersion / static_cast<double>(n)) * qfunc_inv(slack);
    return RateEstimate{rate, rate < 0.0};
}

double normal_approx_rate_asymptotic(std::size_t n, double epsilon,
                                     const ChannelStatistics& stats) {
    if (n < 1) throw DomainError("blocklength must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("epsilon must lie in (0, 1)");
    }
    return stats.mutual_information -
           std::sqrt(stats.dispersion / static_cast<double>(n)) *
               qfunc_inv(epsilon);
}

double delta_schedule(std::size_t n) {
    if (n < 1) throw DomainError("blocklength must be >= 1");
    return std::pow(static_cast<double>(n), -0.75);
}

double qfunc(double z) {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double qfunc_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("qfunc_inv requires p in (0, 1)");
    }
    // Q is strictly decreasing; [-40, 40] covers every double p in (0, 1).
    double lo = -40.0;
    double hi = 40.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double f = qfunc(mid) - p;
        if (f == 0.0) {
            lo = mid;
            hi = mid;
            break;
        }
        if (f > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-15 && std::abs(f) <= 1e-12) break;
    }
    double z = 0.5 * (lo + hi);
    // Newton polish; the bisection bracket keeps the start close enough for
    // quadratic convergence, restoring full z-space accuracy in the far tails
    // where the p-space tolerance alone is too loose.
    for (int iter = 0; iter < 8; ++iter) {
        const double pdf = gaussian_pdf(z);
        if (!(pdf > 0.0)) break;
        const double step = (qfunc(z) - p) / pdf;
        z += step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

}  // namespace fblkit
