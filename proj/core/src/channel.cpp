#include "fblkit/channel.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fblkit {

namespace {

constexpr double kMassTolerance = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> validated_pmf(std::vector<double> probs, const char* what) {
    if (probs.empty()) {
        throw DimensionMismatchError(std::string(what) + " must be non-empty");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] >= 0.0)) {
            throw NegativeEntryError(std::string(what) + " entry " +
                                     std::to_string(i) + " is negative or NaN");
        }
        sum += probs[i];
    }
    if (!(std::abs(sum - 1.0) <= kMassTolerance)) {
        throw RowSumError(std::string(what) + " must sum to 1 (got " +
                          std::to_string(sum) + ")");
    }
    return probs;
}

void check_word(std::span<const Symbol> w, std::size_t alphabet,
                const char* what) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] >= alphabet) {
            throw SymbolOutOfRangeError(
                std::string(what) + " symbol at position " + std::to_string(i) +
                " is " + std::to_string(w[i]) + ", alphabet size is " +
                std::to_string(alphabet));
        }
    }
}

}  // namespace

InputDistribution::InputDistribution(std::vector<double> probs)
    : probs_(validated_pmf(std::move(probs), "input distribution")) {}

OutputDistribution::OutputDistribution(std::vector<double> probs)
    : probs_(validated_pmf(std::move(probs), "output distribution")) {}

Channel::Channel(const std::vector<std::vector<double>>& transition) {
    if (transition.size() < 2) {
        throw DegenerateAlphabetError("input alphabet must have size >= 2, got " +
                                      std::to_string(transition.size()));
    }
    const std::size_t cols = transition.front().size();
    if (cols < 2) {
        throw DegenerateAlphabetError("output alphabet must have size >= 2, got " +
                                      std::to_string(cols));
    }
    input_size_ = transition.size();
    output_size_ = cols;
    transition_.reserve(input_size_ * output_size_);
    for (std::size_t x = 0; x < input_size_; ++x) {
        const auto& row = transition[x];
        if (row.size() != cols) {
            throw DimensionMismatchError(
                "transition matrix is not rectangular: row " + std::to_string(x) +
                " has " + std::to_string(row.size()) + " entries, expected " +
                std::to_string(cols));
        }
        double sum = 0.0;
        for (std::size_t y = 0; y < cols; ++y) {
            if (!(row[y] >= 0.0)) {
                throw NegativeEntryError("entry (" + std::to_string(x) + ", " +
                                         std::to_string(y) +
                                         ") is negative or NaN");
            }
            sum += row[y];
        }
        if (!(std::abs(sum - 1.0) <= kMassTolerance)) {
            throw RowSumError("row " + std::to_string(x) + " sums to " +
                              std::to_string(sum) + ", expected 1 within 1e-12");
        }
        transition_.insert(transition_.end(), row.begin(), row.end());
    }
    log2_transition_.resize(transition_.size());
    for (std::size_t i = 0; i < transition_.size(); ++i) {
        log2_transition_[i] =
            transition_[i] > 0.0 ? std::log2(transition_[i]) : kNegInf;
    }
}

Channel make_channel(const std::vector<std::vector<double>>& transition) {
    return Channel(transition);
}

Channel make_bsc(double crossover) {
    return Channel({{1.0 - crossover, crossover}, {crossover, 1.0 - crossover}});
}

Channel make_bec(double erasure) {
    return Channel(
        {{1.0 - erasure, 0.0, erasure}, {0.0, 1.0 - erasure, erasure}});
}

Channel make_z_channel(double crossover) {
    return Channel({{1.0, 0.0}, {crossover, 1.0 - crossover}});
}

Channel make_identity(std::size_t size) {
    std::vector<std::vector<double>> m(size, std::vector<double>(size, 0.0));
    for (std::size_t i = 0; i < size; ++i) m[i][i] = 1.0;
    return Channel(m);
}

InputDistribution uniform_input(std::size_t size) {
    return InputDistribution(
        std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

double vector_log_likelihood(const Channel& ch, std::span<const Symbol> x,
                             std::span<const Symbol> y) {
    if (x.size() != y.size() || x.empty()) {
        throw LengthMismatchError("words must be non-empty and of equal length (got " +
                                  std::to_string(x.size()) + " and " +
                                  std::to_string(y.size()) + ")");
    }
    check_word(x, ch.input_size(), "input word");
    check_word(y, ch.output_size(), "output word");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += ch.log2_transition(x[i], y[i]);  // -inf propagates
    }
    return sum;
}

OutputDistribution output_distribution(const Channel& ch,
                                       const InputDistribution& px) {
    if (px.size() != ch.input_size()) {
        throw DimensionMismatchError(
            "input distribution has size " + std::to_string(px.size()) +
            ", channel input alphabet has size " +
            std::to_string(ch.input_size()));
    }
    std::vector<double> py(ch.output_size(), 0.0);
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
        const double p = px[x];
        if (p == 0.0) continue;
        const auto row = ch.row(static_cast<Symbol>(x));
        for (std::size_t y = 0; y < ch.output_size(); ++y) {
            py[y] += p * row[y];
        }
    }
    return OutputDistribution(std::move(py));
}

}  // namespace fblkit
