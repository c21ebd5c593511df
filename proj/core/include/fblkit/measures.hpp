#pragma once

#include <cstddef>
#include <span>

#include "fblkit/channel.hpp"
#include "fblkit/errors.hpp"

namespace fblkit {

// Single-letter statistics of (channel, input distribution), all in bits.
// mutual_information is E[i(X;Y)]; dispersion is Var(log2(P_Y/P_{Y|X})),
// which equals the variance of the information density (the log-ratio
// log2(P_Y/P_{Y|X}) has mean -I, the density has mean +I; only the sign
// differs and the variance is the same).
struct ChannelStatistics {
    double mutual_information = 0.0;
    double dispersion = 0.0;
    double entropy_output = 0.0;
};

struct CapacityResult {
    double capacity = 0.0;
    InputDistribution optimal_input;
    std::size_t iterations = 0;
    double final_gap = 0.0;
};

class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& message, CapacityResult best)
        : Error("NonConvergenceError", message), best_(std::move(best)) {}

    // Best iterate seen before the iteration budget ran out.
    const CapacityResult& best() const noexcept { return best_; }

private:
    CapacityResult best_;
};

// i(x;y) = sum_i log2( P(y_i|x_i) / P_Y(y_i) ).
// Returns -inf when some P(y_i|x_i) = 0 while P_Y(y_i) > 0.
// Throws UndefinedDensityError when P_Y(y_i) = 0 for some position (the
// output word is impossible under the ensemble).
double information_density(const Channel& ch, const InputDistribution& px,
                           std::span<const Symbol> x, std::span<const Symbol> y);

// I(X;Y) in bits, 0*log(0) = 0 convention.
double mutual_information(const Channel& ch, const InputDistribution& px);

// Var(log2(P_Y(Y)/P_{Y|X}(Y|X))) under the joint pmf, two-pass evaluation.
double dispersion(const Channel& ch, const InputDistribution& px);

ChannelStatistics channel_statistics(const Channel& ch,
                                     const InputDistribution& px);

// Blahut-Arimoto from the uniform input distribution. Stops once the
// standard upper/lower capacity gap is <= tol (bits); throws
// NonConvergenceError carrying the best iterate when max_iter is exhausted
// first. The returned capacity is mutual_information(ch, optimal_input), so
// feeding optimal_input back reproduces it bit for bit.
CapacityResult capacity(const Channel& ch, double tol = 1e-9,
                        std::size_t max_iter = 10000);

}  // namespace fblkit
