#include "fblkit/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "fblkit/bounds.hpp"
#include "fblkit/measures.hpp"

namespace fblkit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMaxEnumerationPairs = 1e7;
constexpr std::size_t kMaxDensityAtoms = 4u << 20;

// Stream id reserved for the shared codebook in fixed-codebook mode; trial
// streams use the trial index, which stays below the trial count.
constexpr std::uint64_t kFixedCodebookStream = ~0ULL;

// Inverse-CDF sampler over a small pmf. Zero-probability symbols are never
// produced: their cumulative step is empty.
class DiscreteSampler {
public:
    explicit DiscreteSampler(std::span<const double> pmf) {
        cum_.reserve(pmf.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < pmf.size(); ++i) {
            acc += pmf[i];
            cum_.push_back(acc);
            if (pmf[i] > 0.0) last_positive_ = i;
        }
    }

    Symbol sample(StreamRng& rng) const {
        const double u = rng.next_unit() * cum_.back();
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cum_.begin());
        if (idx >= cum_.size()) idx = last_positive_;
        return static_cast<Symbol>(idx);
    }

private:
    std::vector<double> cum_;
    std::size_t last_positive_ = 0;
};

void check_dims(const Channel& ch, const InputDistribution& px) {
    if (px.size() != ch.input_size()) {
        throw DimensionMismatchError(
            "input distribution has size " + std::to_string(px.size()) +
            ", channel input alphabet has size " +
            std::to_string(ch.input_size()));
    }
}

std::vector<DiscreteSampler> row_samplers(const Channel& ch) {
    std::vector<DiscreteSampler> samplers;
    samplers.reserve(ch.input_size());
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
        samplers.emplace_back(ch.row(static_cast<Symbol>(x)));
    }
    return samplers;
}

void fill_codebook(std::vector<Symbol>& words, std::size_t count,
                   const DiscreteSampler& input_sampler, StreamRng& rng) {
    words.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        words[i] = input_sampler.sample(rng);
    }
}

double word_metric(const Channel& ch, std::span<const Symbol> word,
                   std::span<const Symbol> y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < word.size(); ++i) {
        sum += ch.log2_transition(word[i], y[i]);
    }
    return sum;
}

// Scans all metrics once. Under UniformTiebreak the selected maximizer is
// reservoir-sampled so each of the tied words is returned with equal
// probability; under TiesAreErrors the first maximizer wins and rng is
// untouched.
std::size_t select_maximizer(const Channel& ch, std::span<const Symbol> words,
                             std::size_t num_words, std::size_t blocklength,
                             std::span<const Symbol> y, TiePolicy policy,
                             StreamRng& rng) {
    std::size_t selected = 0;
    double best = kNegInf;
    std::uint64_t tie_count = 0;
    for (std::size_t m = 0; m < num_words; ++m) {
        const double metric = word_metric(
            ch, words.subspan(m * blocklength, blocklength), y);
        if (metric > best) {
            best = metric;
            selected = m;
            tie_count = 1;
        } else if (metric == best) {
            if (policy == TiePolicy::UniformTiebreak) {
                ++tie_count;
                if (rng.next_below(tie_count) == 0) selected = m;
            }
        }
    }
    return selected;
}

// An explicit cap may exceed the hardware count (merging stays correct
// either way); 0 means one worker per hardware thread.
unsigned resolve_workers(unsigned max_threads, std::uint64_t trials) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned workers = max_threads == 0 ? hw : max_threads;
    if (trials < workers) workers = static_cast<unsigned>(trials);
    return std::max(workers, 1u);
}

// Odometer increment over words of `size`-ary symbols; returns false once
// the word wraps around to all zeros.
bool next_word(Word& w, std::size_t size) {
    for (std::size_t i = w.size(); i-- > 0;) {
        if (++w[i] < size) return true;
        w[i] = 0;
    }
    return false;
}

}  // namespace

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) throw DomainError("Wilson interval requires trials >= 1");
    if (successes > trials) {
        throw DomainError("successes must not exceed trials");
    }
    static const double z = qfunc_inv(0.025);  // 95% two-sided
    const double t = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / t;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / t;
    const double center = (p + z2 / (2.0 * t)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
    return WilsonInterval{std::max(0.0, center - half),
                          std::min(1.0, center + half)};
}

Codebook::Codebook(std::size_t blocklength_, std::size_t num_words_,
                   std::size_t alphabet_size_, std::vector<Symbol> words_)
    : blocklength(blocklength_),
      num_words(num_words_),
      alphabet_size(alphabet_size_),
      words(std::move(words_)) {
    if (blocklength < 1) throw DomainError("codebook blocklength must be >= 1");
    if (num_words < 1) throw DomainError("codebook needs at least 1 word");
    if (words.size() != num_words * blocklength) {
        throw DimensionMismatchError("codebook storage has " +
                                     std::to_string(words.size()) +
                                     " symbols, expected M*n");
    }
    for (Symbol s : words) {
        if (s >= alphabet_size) {
            throw SymbolOutOfRangeError("codebook symbol " + std::to_string(s) +
                                        " outside alphabet of size " +
                                        std::to_string(alphabet_size));
        }
    }
}

Codebook sample_codebook(const InputDistribution& px, std::size_t n,
                         std::uint64_t num_words, std::uint64_t seed) {
    if (n < 1) throw DomainError("blocklength must be >= 1");
    if (num_words < 1) throw DomainError("codebook needs at least 1 word");
    const DiscreteSampler sampler(px.probs());
    StreamRng rng(seed, 0);
    std::vector<Symbol> words;
    fill_codebook(words, static_cast<std::size_t>(num_words) * n, sampler, rng);
    return Codebook(n, static_cast<std::size_t>(num_words), px.size(),
                    std::move(words));
}

std::size_t ml_decode(const Channel& ch, const Codebook& cb,
                      std::span<const Symbol> y, TiePolicy policy,
                      StreamRng& rng) {
    if (y.size() != cb.blocklength) {
        throw LengthMismatchError("received word length " +
                                  std::to_string(y.size()) +
                                  " does not match codebook blocklength " +
                                  std::to_string(cb.blocklength));
    }
    if (cb.alphabet_size > ch.input_size()) {
        throw SymbolOutOfRangeError(
            "codebook alphabet exceeds channel input alphabet");
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] >= ch.output_size()) {
            throw SymbolOutOfRangeError("received symbol at position " +
                                        std::to_string(i) + " is out of range");
        }
    }
    return select_maximizer(ch, cb.words, cb.num_words, cb.blocklength, y,
                            policy, rng);
}

SimulationReport estimate_error(const Channel& ch, const InputDistribution& px,
                                std::size_t n, double rate,
                                std::uint64_t trials, std::uint64_t seed,
                                TiePolicy policy, CodebookMode mode,
                                unsigned max_threads) {
    check_dims(ch, px);
    if (trials < 1) throw DomainError("trials must be >= 1");
    const CodeParameters params(n, rate);
    const std::uint64_t num_words = params.num_codewords();
    if (static_cast<double>(num_words) * static_cast<double>(n) > 1e8) {
        throw InstanceTooLargeError(
            "codebook of " + std::to_string(num_words) + " words x " +
            std::to_string(n) + " letters is too large to simulate");
    }
    const std::size_t m = static_cast<std::size_t>(num_words);

    const DiscreteSampler input_sampler(px.probs());
    const std::vector<DiscreteSampler> noise = row_samplers(ch);

    std::vector<Symbol> fixed_words;
    if (mode == CodebookMode::FixedCodebook) {
        StreamRng rng(seed, kFixedCodebookStream);
        fill_codebook(fixed_words, m * n, input_sampler, rng);
    }

    // Per-trial draw order: codebook letters (fresh mode only), then the
    // noise word, then any tiebreak draws. All from stream (seed, trial).
    const auto run_trial = [&](std::uint64_t trial,
                               std::vector<Symbol>& words_buf,
                               std::vector<Symbol>& y_buf) -> bool {
        StreamRng rng(seed, trial);
        std::span<const Symbol> words;
        if (mode == CodebookMode::FreshPerTrial) {
            fill_codebook(words_buf, m * n, input_sampler, rng);
            words = words_buf;
        } else {
            words = fixed_words;
        }
        y_buf.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            y_buf[i] = noise[words[i]].sample(rng);
        }
        const std::span<const Symbol> y{y_buf};
        if (policy == TiePolicy::TiesAreErrors) {
            const double sent = word_metric(ch, words.subspan(0, n), y);
            for (std::size_t w = 1; w < m; ++w) {
                if (word_metric(ch, words.subspan(w * n, n), y) >= sent) {
                    return true;
                }
            }
            return false;
        }
        return select_maximizer(ch, words, m, n, y, policy, rng) != 0;
    };

    const unsigned workers = resolve_workers(max_threads, trials);
    std::vector<std::uint64_t> counts(workers, 0);
    if (workers == 1) {
        std::vector<Symbol> words_buf, y_buf;
        for (std::uint64_t t = 0; t < trials; ++t) {
            counts[0] += run_trial(t, words_buf, y_buf) ? 1 : 0;
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = trials / workers;
        const std::uint64_t rem = trials % workers;
        std::uint64_t begin = 0;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t end = begin + chunk + (w < rem ? 1 : 0);
            pool.emplace_back([&, w, begin, end] {
                std::vector<Symbol> words_buf, y_buf;
                std::uint64_t local = 0;
                for (std::uint64_t t = begin; t < end; ++t) {
                    local += run_trial(t, words_buf, y_buf) ? 1 : 0;
                }
                counts[w] = local;
            });
            begin = end;
        }
        for (auto& th : pool) th.join();
    }

    std::uint64_t errors = 0;
    for (std::uint64_t c : counts) errors += c;

    SimulationReport report;
    report.trials = trials;
    report.errors = errors;
    report.p_hat = static_cast<double>(errors) / static_cast<double>(trials);
    const WilsonInterval ci = wilson_interval(errors, trials);
    report.ci_low = ci.low;
    report.ci_high = ci.high;
    report.tie_policy = policy;
    report.codebook_mode = mode;
    report.seed = seed;
    report.n = n;
    report.rate = rate;
    report.num_codewords = num_words;
    return report;
}

double exact_ensemble_error(const Channel& ch, const InputDistribution& px,
                            std::size_t n, std::uint64_t num_words,
                            TiePolicy policy) {
    check_dims(ch, px);
    if (n < 1) throw DomainError("blocklength must be >= 1");
    if (num_words < 1) throw DomainError("num_words must be >= 1");
    const double x_words = std::pow(static_cast<double>(ch.input_size()),
                                    static_cast<double>(n));
    const double y_words = std::pow(static_cast<double>(ch.output_size()),
                                    static_cast<double>(n));
    if (!(x_words * y_words <= kMaxEnumerationPairs)) {
        throw InstanceTooLargeError(
            "|X|^n * |Y|^n = " + std::to_string(x_words * y_words) +
            " exceeds the enumeration guard of 1e7 pairs");
    }
    if (num_words == 1) return 0.0;  // no competitors
    const double competitors = static_cast<double>(num_words - 1);

    // Input words, their ensemble weights, and per-y metrics.
    const auto num_x = static_cast<std::size_t>(x_words);
    std::vector<Symbol> xwords(num_x * n);
    std::vector<double> xweight(num_x);
    {
        Word w(n, 0);
        std::size_t idx = 0;
        do {
            double weight = 1.0;
            for (std::size_t i = 0; i < n; ++i) weight *= px[w[i]];
            std::copy(w.begin(), w.end(), xwords.begin() + idx * n);
            xweight[idx] = weight;
            ++idx;
        } while (next_word(w, ch.input_size()));
    }

    std::vector<double> metric(num_x);
    std::vector<std::size_t> order(num_x);
    // Per distinct metric value (descending): total competitor mass at the
    // value and at or above it.
    std::vector<double> group_value;
    std::vector<double> group_mass_ge;
    std::vector<double> group_mass_eq;

    double total_error = 0.0;
    Word y(n, 0);
    do {
        for (std::size_t xi = 0; xi < num_x; ++xi) {
            const Symbol* xw = xwords.data() + xi * n;
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                sum += ch.log2_transition(xw[i], y[i]);
            }
            metric[xi] = sum;
        }
        for (std::size_t xi = 0; xi < num_x; ++xi) order[xi] = xi;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return metric[a] > metric[b];
        });
        group_value.clear();
        group_mass_ge.clear();
        group_mass_eq.clear();
        double running = 0.0;
        for (std::size_t pos = 0; pos < num_x;) {
            const double value = metric[order[pos]];
            double mass = 0.0;
            while (pos < num_x && metric[order[pos]] == value) {
                mass += xweight[order[pos]];
                ++pos;
            }
            running += mass;
            group_value.push_back(value);
            group_mass_ge.push_back(running);
            group_mass_eq.push_back(mass);
        }

        for (std::size_t xi = 0; xi < num_x; ++xi) {
            const Symbol* xw = xwords.data() + xi * n;
            double cond = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                cond *= ch.transition(xw[i], y[i]);
            }
            const double joint = xweight[xi] * cond;
            if (joint == 0.0) continue;

            const auto it =
                std::lower_bound(group_value.begin(), group_value.end(),
                                 metric[xi], std::greater<double>());
            const auto g = static_cast<std::size_t>(it - group_value.begin());
            double p_error;
            if (policy == TiePolicy::TiesAreErrors) {
                const double q = group_mass_ge[g];
                p_error = 1.0 - std::pow(1.0 - q, competitors);
            } else {
                // Split the tie atom uniformly: with j of the K competitors
                // tied and none strictly better, the sent word survives with
                // probability 1/(1+j). Summing the binomial series gives
                //   P(correct) = ((b+c)^{K+1} - c^{K+1}) / ((K+1) b),
                // with a/b/c the beat/tie/lose masses. Evaluated via expm1
                // to survive b -> 0.
                const double b = group_mass_eq[g];
                const double a = group_mass_ge[g] - b;
                const double survive = 1.0 - a;  // = b + c
                double p_correct;
                if (b <= 0.0) {
                    p_correct = std::pow(survive, competitors);
                } else if (survive <= 0.0) {
                    p_correct = 0.0;
                } else {
                    const double c = std::max(survive - b, 0.0);
                    const double l1 = (competitors + 1.0) * std::log(survive);
                    // (K+1) * log(c / survive), i.e. c^{K+1} = e^{l1 + lr}
                    const double lr =
                        c > 0.0
                            ? (competitors + 1.0) * std::log1p(-b / survive)
                            : kNegInf;
                    p_correct = -std::exp(l1) * std::expm1(lr) /
                                ((competitors + 1.0) * b);
                }
                p_error = 1.0 - p_correct;
            }
            total_error += joint * p_error;
        }
    } while (next_word(y, ch.output_size()));

    return std::min(total_error, 1.0);
}

LlnReport lln_experiment(const Channel& ch, const InputDistribution& px,
                         std::span<const std::size_t> n_list, double delta,
                         std::uint64_t trials, std::uint64_t seed) {
    check_dims(ch, px);
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    if (trials < 1) throw DomainError("trials must be >= 1");
    if (n_list.empty()) throw DomainError("n_list must be non-empty");
    for (std::size_t n : n_list) {
        if (n < 1) throw DomainError("every blocklength must be >= 1");
    }

    const double info = mutual_information(ch, px);
    const double threshold = info - delta;
    const OutputDistribution py = output_distribution(ch, px);
    const DiscreteSampler input_sampler(px.probs());
    const std::vector<DiscreteSampler> noise = row_samplers(ch);
    std::vector<double> letter_density(ch.input_size() * ch.output_size(), 0.0);
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
        for (std::size_t y = 0; y < ch.output_size(); ++y) {
            const double w = ch.transition(static_cast<Symbol>(x),
                                           static_cast<Symbol>(y));
            if (w > 0.0 && py[y] > 0.0) {
                letter_density[x * ch.output_size() + y] =
                    std::log2(w) - std::log2(py[y]);
            }
        }
    }

    LlnReport report;
    report.delta = delta;
    report.entries.reserve(n_list.size());
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        const std::size_t n = n_list[k];
        std::uint64_t count = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            StreamRng rng(seed, k * trials + t);
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const Symbol x = input_sampler.sample(rng);
                const Symbol y = noise[x].sample(rng);
                sum += letter_density[x * ch.output_size() + y];
            }
            if (sum / static_cast<double>(n) <= threshold) ++count;
        }
        report.entries.push_back(
            LlnEntry{n, static_cast<double>(count) / static_cast<double>(trials),
                     trials});
    }
    return report;
}

double density_gaussian_check(const Channel& ch, const InputDistribution& px,
                              std::size_t n, std::uint64_t trials,
                              std::uint64_t seed) {
    check_dims(ch, px);
    if (n < 1) throw DomainError("blocklength must be >= 1");
    if (trials < 1) throw DomainError("trials must be >= 1");
    const double info = mutual_information(ch, px);
    const double var = dispersion(ch, px);
    if (!(var > 0.0)) {
        throw ZeroDispersionError(
            "dispersion is zero: the density has no Gaussian limit to test");
    }
    const double sigma = std::sqrt(var / static_cast<double>(n));

    const OutputDistribution py = output_distribution(ch, px);
    const DiscreteSampler input_sampler(px.probs());
    const std::vector<DiscreteSampler> noise = row_samplers(ch);
    std::vector<double> letter_density(ch.input_size() * ch.output_size(), 0.0);
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
        for (std::size_t y = 0; y < ch.output_size(); ++y) {
            const double w = ch.transition(static_cast<Symbol>(x),
                                           static_cast<Symbol>(y));
            if (w > 0.0 && py[y] > 0.0) {
                letter_density[x * ch.output_size() + y] =
                    std::log2(w) - std::log2(py[y]);
            }
        }
    }

    std::vector<double> samples(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        StreamRng rng(seed, t);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Symbol x = input_sampler.sample(rng);
            const Symbol y = noise[x].sample(rng);
            sum += letter_density[x * ch.output_size() + y];
        }
        samples[t] = sum / static_cast<double>(n);
    }
    std::sort(samples.begin(), samples.end());

    const double count = static_cast<double>(trials);
    double ks = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const double cdf = 1.0 - qfunc((samples[i] - info) / sigma);
        const double above = static_cast<double>(i + 1) / count - cdf;
        const double below = cdf - static_cast<double>(i) / count;
        ks = std::max(ks, std::max(above, below));
    }
    return ks;
}

std::vector<DensityAtom> exact_density_distribution(
    const Channel& ch, const InputDistribution& px, std::size_t n) {
    check_dims(ch, px);
    if (n < 1) throw DomainError("blocklength must be >= 1");
    const OutputDistribution py = output_distribution(ch, px);
    std::vector<DensityAtom> letters;
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
        for (std::size_t y = 0; y < ch.output_size(); ++y) {
            const double w = ch.transition(static_cast<Symbol>(x),
                                           static_cast<Symbol>(y));
            const double joint = px[x] * w;
            if (joint > 0.0) {
                letters.push_back(
                    DensityAtom{std::log2(w) - std::log2(py[y]), joint});
            }
        }
    }
    std::map<double, double> current;
    for (const DensityAtom& a : letters) current[a.value] += a.probability;
    for (std::size_t step = 1; step < n; ++step) {
        std::map<double, double> next;
        for (const auto& [value, prob] : current) {
            for (const DensityAtom& a : letters) {
                next[value + a.value] += prob * a.probability;
            }
            if (next.size() > kMaxDensityAtoms) {
                throw InstanceTooLargeError(
                    "density support exceeded " +
                    std::to_string(kMaxDensityAtoms) +
                    " atoms at blocklength " + std::to_string(step + 1));
            }
        }
        current = std::move(next);
    }
    std::vector<DensityAtom> atoms;
    atoms.reserve(current.size());
    for (const auto& [value, prob] : current) {
        atoms.push_back(DensityAtom{value, prob});
    }
    return atoms;
}

}  // namespace fblkit
