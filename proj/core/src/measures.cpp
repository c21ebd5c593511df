#include "fblkit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace fblkit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_dims(const Channel& ch, const InputDistribution& px) {
    if (px.size() != ch.input_size()) {
        throw DimensionMismatchError(
            "input distribution has size " + std::to_string(px.size()) +
            ", channel input alphabet has size " +
            std::to_string(ch.input_size()));
    }
}

double output_entropy(const OutputDistribution& py) {
    double h = 0.0;
    for (std::size_t y = 0; y < py.size(); ++y) {
        if (py[y] > 0.0) h -= py[y] * std::log2(py[y]);
    }
    return h;
}

}  // namespace

double information_density(const Channel& ch, const InputDistribution& px,
                           std::span<const Symbol> x,
                           std::span<const Symbol> y) {
    check_dims(ch, px);
    if (x.size() != y.size() || x.empty()) {
        throw LengthMismatchError("words must be non-empty and of equal length (got " +
                                  std::to_string(x.size()) + " and " +
                                  std::to_string(y.size()) + ")");
    }
    const OutputDistribution py = output_distribution(ch, px);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] >= ch.output_size()) {
            throw SymbolOutOfRangeError("output word symbol at position " +
                                        std::to_string(i) + " is out of range");
        }
        if (!(py[y[i]] > 0.0)) {
            throw UndefinedDensityError(
                "P_Y(y) = 0 at position " + std::to_string(i) +
                " (output symbol " + std::to_string(y[i]) +
                " is impossible under this input distribution)");
        }
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] >= ch.input_size()) {
            throw SymbolOutOfRangeError("input word symbol at position " +
                                        std::to_string(i) + " is out of range");
        }
    }
    double sum = 0.0;
    bool impossible = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = ch.transition(x[i], y[i]);
        if (w > 0.0) {
            sum += std::log2(w) - std::log2(py[y[i]]);
        } else {
            impossible = true;
        }
    }
    return impossible ? kNegInf : sum;
}

double mutual_information(const Channel& ch, const InputDistribution& px) {
    check_dims(ch, px);
    const OutputDistribution py = output_distribution(ch, px);
    double info = 0.0;
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
        if (px[x] == 0.0) continue;
        const auto row = ch.row(static_cast<Symbol>(x));
        for (std::size_t y = 0; y < ch.output_size(); ++y) {
            if (row[y] == 0.0) continue;
            info += px[x] * row[y] * (std::log2(row[y]) - std::log2(py[y]));
        }
    }
    return info;
}

double dispersion(const Channel& ch, const InputDistribution& px) {
    check_dims(ch, px);
    const OutputDistribution py = output_distribution(ch, px);
    double mean = 0.0;
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
        if (px[x] == 0.0) continue;
        const auto row = ch.row(static_cast<Symbol>(x));
        for (std::size_t y = 0; y < ch.output_size(); ++y) {
            if (row[y] == 0.0) continue;
            mean += px[x] * row[y] * (std::log2(py[y]) - std::log2(row[y]));
        }
    }
    double var = 0.0;
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
        if (px[x] == 0.0) continue;
        const auto row = ch.row(static_cast<Symbol>(x));
        for (std::size_t y = 0; y < ch.output_size(); ++y) {
            if (row[y] == 0.0) continue;
            const double z = std::log2(py[y]) - std::log2(row[y]);
            var += px[x] * row[y] * (z - mean) * (z - mean);
        }
    }
    return var;
}

ChannelStatistics channel_statistics(const Channel& ch,
                                     const InputDistribution& px) {
    check_dims(ch, px);
    ChannelStatistics stats;
    stats.mutual_information = mutual_information(ch, px);
    stats.dispersion = dispersion(ch, px);
    stats.entropy_output = output_entropy(output_distribution(ch, px));
    return stats;
}

CapacityResult capacity(const Channel& ch, double tol, std::size_t max_iter) {
    if (!(tol > 0.0)) {
        throw DomainError("capacity tolerance must be positive");
    }
    if (max_iter == 0) {
        throw DomainError("capacity iteration budget must be >= 1");
    }
    const std::size_t nx = ch.input_size();
    const std::size_t ny = ch.output_size();
    std::vector<double> r(nx, 1.0 / static_cast<double>(nx));
    std::vector<double> q(ny);
    std::vector<double> d(nx);

    std::vector<double> best_r = r;
    double best_gap = std::numeric_limits<double>::infinity();
    std::size_t best_iter = 0;

    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        std::fill(q.begin(), q.end(), 0.0);
        for (std::size_t x = 0; x < nx; ++x) {
            const auto row = ch.row(static_cast<Symbol>(x));
            for (std::size_t y = 0; y < ny; ++y) q[y] += r[x] * row[y];
        }
        // d[x] = D( P(.|x) || q ), the per-input divergence from the current
        // output distribution. max d is an upper bound on capacity, and
        // log2 sum r 2^d a lower bound; the gap drives the stop rule.
        double upper = kNegInf;
        for (std::size_t x = 0; x < nx; ++x) {
            const auto row = ch.row(static_cast<Symbol>(x));
            double div = 0.0;
            for (std::size_t y = 0; y < ny; ++y) {
                if (row[y] > 0.0) {
                    div += row[y] * (std::log2(row[y]) - std::log2(q[y]));
                }
            }
            d[x] = div;
            upper = std::max(upper, div);
        }
        double z = 0.0;
        for (std::size_t x = 0; x < nx; ++x) z += r[x] * std::exp2(d[x]);
        const double lower = std::log2(z);
        const double gap = std::max(upper - lower, 0.0);

        for (std::size_t x = 0; x < nx; ++x) r[x] = r[x] * std::exp2(d[x]) / z;

        if (gap < best_gap) {
            best_gap = gap;
            best_r = r;
            best_iter = iter;
        }
        if (gap <= tol) {
            double sum = 0.0;
            for (double v : r) sum += v;
            for (double& v : r) v /= sum;
            InputDistribution opt(r);
            const double cap = mutual_information(ch, opt);
            return CapacityResult{cap, std::move(opt), iter, gap};
        }
    }

    double sum = 0.0;
    for (double v : best_r) sum += v;
    for (double& v : best_r) v /= sum;
    InputDistribution opt(best_r);
    const double cap = mutual_information(ch, opt);
    throw NonConvergenceError(
        "Blahut-Arimoto did not reach gap <= " + std::to_string(tol) + " within " +
            std::to_string(max_iter) + " iterations (best gap " +
            std::to_string(best_gap) + ")",
        CapacityResult{cap, std::move(opt), best_iter, best_gap});
}

}  // namespace fblkit
