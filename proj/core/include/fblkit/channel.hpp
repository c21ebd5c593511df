#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fblkit/errors.hpp"

namespace fblkit {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

// Probability mass function over an index alphabet {0, ..., size-1}.
// Entries must be in [0, 1] and sum to 1 within 1e-12.
class InputDistribution {
public:
    explicit InputDistribution(std::vector<double> probs);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const noexcept { return probs_; }

private:
    std::vector<double> probs_;
};

class OutputDistribution {
public:
    explicit OutputDistribution(std::vector<double> probs);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const noexcept { return probs_; }

private:
    std::vector<double> probs_;
};

// Discrete memoryless channel: row-stochastic |X| x |Y| transition matrix,
// alphabets are index sets. Immutable after construction; construction
// validates every invariant (entries >= 0, row sums within 1e-12 of 1,
// both alphabets of size >= 2). Logs are base 2 throughout the toolkit and
// the per-entry log2 table is precomputed, with -inf standing in for
// log2(0) so that impossible transitions propagate through sums.
class Channel {
public:
    explicit Channel(const std::vector<std::vector<double>>& transition);

    std::size_t input_size() const noexcept { return input_size_; }
    std::size_t output_size() const noexcept { return output_size_; }

    double transition(Symbol x, Symbol y) const {
        return transition_[static_cast<std::size_t>(x) * output_size_ + y];
    }
    double log2_transition(Symbol x, Symbol y) const {
        return log2_transition_[static_cast<std::size_t>(x) * output_size_ + y];
    }

    std::span<const double> row(Symbol x) const {
        return {transition_.data() + static_cast<std::size_t>(x) * output_size_,
                output_size_};
    }
    std::span<const double> log2_row(Symbol x) const {
        return {log2_transition_.data() +
                    static_cast<std::size_t>(x) * output_size_,
                output_size_};
    }

private:
    std::size_t input_size_ = 0;
    std::size_t output_size_ = 0;
    std::vector<double> transition_;
    std::vector<double> log2_transition_;
};

// Validating constructor entry point.
Channel make_channel(const std::vector<std::vector<double>>& transition);

// Common channel families.
Channel make_bsc(double crossover);
Channel make_bec(double erasure);           // outputs: 0, 1, erasure
Channel make_z_channel(double crossover);   // input 1 flips to 0
Channel make_identity(std::size_t size);    // noiseless k-ary channel

InputDistribution uniform_input(std::size_t size);

// Sum over positions of log2 P(y_i | x_i); -inf as soon as any factor is 0.
double vector_log_likelihood(const Channel& ch, std::span<const Symbol> x,
                             std::span<const Symbol> y);

// P_Y(y) = sum_x P_X(x) P(y|x).
OutputDistribution output_distribution(const Channel& ch,
                                       const InputDistribution& px);

}  // namespace fblkit
