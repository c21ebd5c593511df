#include "fblkit/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "fblkit/bounds.hpp"
#include "fblkit/channel.hpp"
#include "fblkit/channel_spec.hpp"
#include "fblkit/errors.hpp"
#include "fblkit/measures.hpp"
#include "fblkit/montecarlo.hpp"
#include "fblkit/output.hpp"
#include "json.hpp"

namespace fblkit::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kMaxGridPoints = 1000000;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string trimmed(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_double_field(const std::string& text, const std::string& what) {
    std::string tok = trimmed(text);
    double value = 0;
    auto [ptr, ec] =
        std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty())
        throw ParseError("expected a number for " + what + ", got '" + text +
                             "'",
                         what, 0, 0);
    return value;
}

std::uint64_t parse_u64_field(const std::string& text,
                              const std::string& what) {
    std::string tok = trimmed(text);
    std::uint64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty())
        throw ParseError("expected a nonnegative integer for " + what +
                             ", got '" + text + "'",
                         what, 0, 0);
    return value;
}

std::vector<std::uint64_t> parse_int_grid(const std::string& text) {
    auto parts = split(text, ':');
    if (parts.size() != 3)
        throw ParseError("grid must be start:stop:step, got '" + text + "'",
                         "--n-grid", 0, 0);
    std::uint64_t start = parse_u64_field(parts[0], "--n-grid");
    std::uint64_t stop = parse_u64_field(parts[1], "--n-grid");
    std::uint64_t step = parse_u64_field(parts[2], "--n-grid");
    if (start == 0 || step == 0 || stop < start)
        throw ParseError(
            "grid needs start >= 1, stop >= start, step >= 1, got '" + text +
                "'",
            "--n-grid", 0, 0);
    if ((stop - start) / step + 1 > kMaxGridPoints)
        throw ParseError("grid has more than 1000000 points", "--n-grid", 0, 0);
    std::vector<std::uint64_t> values;
    for (std::uint64_t v = start; v <= stop; v += step) {
        values.push_back(v);
        if (stop - v < step) break;
    }
    return values;
}

std::vector<double> parse_rate_grid(const std::string& text) {
    auto parts = split(text, ':');
    if (parts.size() != 3)
        throw ParseError("grid must be start:stop:step, got '" + text + "'",
                         "--rate-grid", 0, 0);
    double start = parse_double_field(parts[0], "--rate-grid");
    double stop = parse_double_field(parts[1], "--rate-grid");
    double step = parse_double_field(parts[2], "--rate-grid");
    if (!(start > 0) || !(step > 0) || !(stop >= start))
        throw ParseError(
            "grid needs start > 0, stop >= start, step > 0, got '" + text + "'",
            "--rate-grid", 0, 0);
    double count_f = std::floor((stop - start) / step + 1e-9) + 1;
    if (!(count_f <= static_cast<double>(kMaxGridPoints)))
        throw ParseError("grid has more than 1000000 points", "--rate-grid", 0,
                         0);
    std::size_t count = static_cast<std::size_t>(count_f);
    std::vector<double> values;
    values.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        values.push_back(start + static_cast<double>(k) * step);
    return values;
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
    std::vector<std::size_t> values;
    for (const std::string& part : split(text, ',')) {
        std::uint64_t v = parse_u64_field(part, "--n-list");
        if (v == 0)
            throw ParseError("blocklengths must be >= 1", "--n-list", 0, 0);
        values.push_back(static_cast<std::size_t>(v));
    }
    if (values.empty())
        throw ParseError("empty blocklength list", "--n-list", 0, 0);
    return values;
}

InputDistribution input_for(const Channel& ch, const std::string& text) {
    if (trimmed(text).empty()) return uniform_input(ch.input_size());
    std::vector<double> probs;
    for (const std::string& part : split(text, ','))
        probs.push_back(parse_double_field(part, "--input-dist"));
    if (probs.size() != ch.input_size())
        throw DimensionMismatchError(
            "--input-dist has " + std::to_string(probs.size()) +
            " entries, channel has " + std::to_string(ch.input_size()) +
            " inputs");
    return InputDistribution(std::move(probs));
}

// "auto" defers to delta_schedule(n); an explicit value must be positive.
std::optional<double> parse_delta_mode(const std::string& text) {
    if (trimmed(text) == "auto") return std::nullopt;
    double value = parse_double_field(text, "--delta");
    if (!(value > 0) || !std::isfinite(value))
        throw DomainError("--delta must be positive and finite");
    return value;
}

unsigned env_thread_cap() {
    const char* raw = std::getenv("FBLKIT_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(raw, raw + std::strlen(raw), value);
    if (ec != std::errc{} || *ptr != '\0') return 0;
    return value;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IoError", "cannot write file: " + path);
    return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw Error("IoError", "write failed: " + path);
}

void warn(std::ostream& err, const std::string& kind,
          const ordered_json& detail) {
    ordered_json rec;
    rec["warning"] = kind;
    for (const auto& item : detail.items()) rec[item.key()] = item.value();
    err << rec.dump() << "\n";
}

ordered_json channel_block(const ResolvedChannel& rc) {
    ordered_json block;
    block["name"] = rc.spec.name;
    block["input_size"] = rc.channel.input_size();
    block["output_size"] = rc.channel.output_size();
    return block;
}

// nlohmann serializes NaN as null; map it up-front so the schema is explicit.
ordered_json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

}  // namespace

int cmd_analyze(const AnalyzeConfig& config, std::ostream& out,
                std::ostream& err) {
    (void)err;
    ResolvedChannel rc = resolve_channel(config.channel);
    InputDistribution px = input_for(rc.channel, config.input_dist);
    ChannelStatistics stats = channel_statistics(rc.channel, px);
    CapacityResult cap = capacity(rc.channel);

    auto pmf_text = [](const std::vector<double>& probs) {
        std::string text;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (i > 0) text += " ";
            text += format_number(probs[i]);
        }
        return text;
    };

    auto line = [&out](const std::string& key, const std::string& value) {
        out << std::left << std::setw(22) << key << value << "\n";
    };
    line("channel", rc.spec.name);
    line("input_size", std::to_string(rc.channel.input_size()));
    line("output_size", std::to_string(rc.channel.output_size()));
    line("input_distribution", pmf_text(px.probs()));
    line("mutual_information", format_number(stats.mutual_information));
    line("dispersion", format_number(stats.dispersion));
    line("output_entropy", format_number(stats.entropy_output));
    line("capacity", format_number(cap.capacity));
    line("optimal_input", pmf_text(cap.optimal_input.probs()));
    line("capacity_iterations", std::to_string(cap.iterations));
    line("capacity_gap", format_number(cap.final_gap));

    if (!config.json_path.empty()) {
        ordered_json j;
        j["schema"] = 1;
        j["command"] = "analyze";
        j["channel"] = channel_block(rc);
        j["input_distribution"] = px.probs();
        j["mutual_information"] = stats.mutual_information;
        j["dispersion"] = stats.dispersion;
        j["output_entropy"] = stats.entropy_output;
        j["capacity"] = cap.capacity;
        j["optimal_input"] = cap.optimal_input.probs();
        j["capacity_iterations"] = cap.iterations;
        j["capacity_gap"] = cap.final_gap;
        std::ofstream jf = open_output(config.json_path);
        jf << j.dump(2) << "\n";
        finish_output(jf, config.json_path);
    }

    if (!config.emit_spec_path.empty())
        save_channel_spec(config.emit_spec_path, rc.spec);
    return 0;
}

int cmd_bounds(const BoundsConfig& config, std::ostream& out,
               std::ostream& err) {
    (void)out;
    ResolvedChannel rc = resolve_channel(config.channel);
    InputDistribution px = input_for(rc.channel, config.input_dist);
    ChannelStatistics stats = channel_statistics(rc.channel, px);

    if (!(config.eps > 0.0 && config.eps < 1.0))
        throw DomainError("--eps must lie in (0, 1)");
    const bool have_n_grid = !config.n_grid.empty();
    const bool have_rate_grid = !config.rate_grid.empty();
    if (have_n_grid == have_rate_grid)
        throw DomainError("give exactly one of --n-grid and --rate-grid");
    if (have_rate_grid && config.n == 0)
        throw DomainError("--rate-grid needs --n");
    std::optional<double> delta_fixed = parse_delta_mode(config.delta);
    if (config.csv_path.empty()) throw DomainError("--csv is required");

    std::ofstream csv = open_output(config.csv_path);
    csv_row(csv, {"n", "R", "eps", "delta", "eq6", "eq7", "eq8", "eq9",
                  "exponent", "clipped"});

    struct Row {
        std::uint64_t n;
        double rate;  // NaN when the rate is not defined for the row
        double eq8;
        bool warn_infeasible;
        std::string infeasible_message;
    };
    std::vector<Row> rows;
    if (have_n_grid) {
        // Each row pins R to the finite-n extracted rate, then evaluates the
        // error bounds at that operating point.
        for (std::uint64_t n : parse_int_grid(config.n_grid)) {
            double delta = delta_fixed ? *delta_fixed
                                       : delta_schedule(static_cast<std::size_t>(n));
            Row row{n, std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN(), false, ""};
            try {
                RateEstimate est = normal_approx_rate(
                    static_cast<std::size_t>(n), config.eps, stats, delta);
                row.rate = est.rate;
                row.eq8 = est.rate;
            } catch (const InfeasibleSlackError& e) {
                row.warn_infeasible = true;
                row.infeasible_message = e.what();
            }
            rows.push_back(std::move(row));
        }
    } else {
        std::vector<double> rates = parse_rate_grid(config.rate_grid);
        double delta =
            delta_fixed ? *delta_fixed
                        : delta_schedule(static_cast<std::size_t>(config.n));
        double eq8 = std::numeric_limits<double>::quiet_NaN();
        bool infeasible = false;
        std::string message;
        try {
            eq8 = normal_approx_rate(static_cast<std::size_t>(config.n),
                                     config.eps, stats, delta)
                      .rate;
        } catch (const InfeasibleSlackError& e) {
            infeasible = true;
            message = e.what();
        }
        for (std::size_t i = 0; i < rates.size(); ++i)
            rows.push_back(
                {config.n, rates[i], eq8, infeasible && i == 0, message});
    }

    for (const Row& row : rows) {
        std::size_t n = static_cast<std::size_t>(row.n);
        double delta = delta_fixed ? *delta_fixed : delta_schedule(n);
        double eq9 = normal_approx_rate_asymptotic(n, config.eps, stats);
        double eq6 = std::numeric_limits<double>::quiet_NaN();
        double eq7 = std::numeric_limits<double>::quiet_NaN();
        double exponent = std::numeric_limits<double>::quiet_NaN();
        bool clipped = false;
        if (row.warn_infeasible)
            warn(err, "InfeasibleSlackError",
                 {{"n", row.n}, {"message", row.infeasible_message}});
        if (std::isfinite(row.rate) && row.rate > 0.0) {
            CodeParameters params(n, row.rate);
            BoundInputs inputs(stats, delta, config.eps);
            ClippedBound b6 = ensemble_error_bound(params, inputs);
            ClippedBound b7 = normal_approx_error(params, inputs);
            eq6 = b6.value;
            eq7 = b7.value;
            exponent = b6.exponent;
            clipped = b6.clipped;
        } else if (std::isfinite(row.rate)) {
            warn(err, "NegativeRate",
                 {{"n", row.n}, {"rate", row.rate}});
        }
        csv_row(csv, {format_number(row.n), format_number(row.rate),
                      format_number(config.eps), format_number(delta),
                      format_number(eq6), format_number(eq7),
                      format_number(row.eq8), format_number(eq9),
                      format_number(exponent), clipped ? "1" : "0"});
    }
    finish_output(csv, config.csv_path);
    return 0;
}

int cmd_simulate(const SimulateConfig& config, std::ostream& out,
                 std::ostream& err) {
    (void)err;
    ResolvedChannel rc = resolve_channel(config.channel);
    InputDistribution px = input_for(rc.channel, config.input_dist);
    if (config.n == 0) throw DomainError("--n must be >= 1");
    if (config.trials == 0) throw DomainError("--trials must be >= 1");

    TiePolicy policy;
    if (config.tie_policy == "ties-error") {
        policy = TiePolicy::TiesAreErrors;
    } else if (config.tie_policy == "uniform") {
        policy = TiePolicy::UniformTiebreak;
    } else {
        throw DomainError("--tie-policy must be ties-error or uniform");
    }
    CodebookMode mode = config.fixed_codebook ? CodebookMode::FixedCodebook
                                              : CodebookMode::FreshPerTrial;
    std::size_t n = static_cast<std::size_t>(config.n);
    std::optional<double> delta_fixed = parse_delta_mode(config.delta);
    double delta = delta_fixed ? *delta_fixed : delta_schedule(n);

    SimulationReport report =
        estimate_error(rc.channel, px, n, config.rate, config.trials,
                       config.seed, policy, mode, env_thread_cap());
    ChannelStatistics stats = channel_statistics(rc.channel, px);
    double half_width = (report.ci_high - report.ci_low) / 2.0;

    ordered_json j;
    j["schema"] = 1;
    j["command"] = "simulate";
    j["channel"] = channel_block(rc);
    {
        ordered_json p;
        p["n"] = report.n;
        p["rate"] = report.rate;
        p["num_codewords"] = report.num_codewords;
        p["trials"] = report.trials;
        p["seed"] = report.seed;
        p["tie_policy"] = policy == TiePolicy::TiesAreErrors
                              ? "ties-are-errors"
                              : "uniform-tiebreak";
        p["codebook_mode"] = mode == CodebookMode::FreshPerTrial
                                 ? "fresh-per-trial"
                                 : "fixed-codebook";
        p["input_distribution"] = px.probs();
        p["delta"] = delta;
        j["parameters"] = p;
    }
    {
        ordered_json e;
        e["errors"] = report.errors;
        e["p_hat"] = report.p_hat;
        e["ci_low"] = report.ci_low;
        e["ci_high"] = report.ci_high;
        e["ci_half_width"] = half_width;
        j["estimate"] = e;
    }
    {
        // Plugs the exact blocklength-n density pmf into the closed forms.
        // The two union-bound variants differ only in the competitor count:
        // M-1 independent competitors versus the 2^{nR} power that the
        // displayed formula uses; both are reported.
        ordered_json b;
        b["mutual_information"] = stats.mutual_information;
        b["dispersion"] = stats.dispersion;
        b["delta"] = delta;
        double exponent =
            -static_cast<double>(n) *
            (stats.mutual_information - delta - report.rate);
        b["ensemble_exponent"] = exponent;
        bool available = true;
        double tail = 0.0;
        double union_m1 = 0.0;
        double union_pow = 0.0;
        try {
            std::vector<DensityAtom> atoms =
                exact_density_distribution(rc.channel, px, n);
            double log2_m1 = std::log2(
                static_cast<double>(report.num_codewords - 1));
            double nr = static_cast<double>(n) * report.rate;
            double threshold = static_cast<double>(n) *
                               (stats.mutual_information - delta);
            for (const DensityAtom& atom : atoms) {
                union_m1 += atom.probability *
                            std::min(1.0, std::exp2(log2_m1 - atom.value));
                union_pow += atom.probability *
                             std::min(1.0, std::exp2(nr - atom.value));
                if (atom.value <= threshold) tail += atom.probability;
            }
        } catch (const InstanceTooLargeError&) {
            available = false;
        }
        b["available"] = available;
        if (available) {
            double raw = tail + std::exp2(exponent);
            double value = std::min(1.0, raw);
            b["density_tail"] = json_number(tail);
            b["union_bound_competitors"] = json_number(std::min(1.0, union_m1));
            b["union_bound_rate_power"] = json_number(std::min(1.0, union_pow));
            b["ensemble_bound"] = json_number(value);
            b["ensemble_bound_clipped"] = raw >= 1.0;
            b["p_hat_within_ensemble_bound"] =
                report.p_hat <= value + half_width;
        } else {
            b["density_tail"] = nullptr;
            b["union_bound_competitors"] = nullptr;
            b["union_bound_rate_power"] = nullptr;
            b["ensemble_bound"] = nullptr;
            b["ensemble_bound_clipped"] = nullptr;
            b["p_hat_within_ensemble_bound"] = nullptr;
        }
        j["bounds"] = b;
    }
    if (config.exact) {
        ordered_json e;
        double value = exact_ensemble_error(rc.channel, px, n,
                                            report.num_codewords, policy);
        double diff = std::abs(report.p_hat - value);
        e["value"] = value;
        e["abs_diff"] = diff;
        e["ci_half_width"] = half_width;
        e["within_ci"] = diff <= half_width;
        j["exact"] = e;
    }

    if (config.json_path.empty()) {
        out << j.dump(2) << "\n";
    } else {
        std::ofstream jf = open_output(config.json_path);
        jf << j.dump(2) << "\n";
        finish_output(jf, config.json_path);
        out << "p_hat " << format_number(report.p_hat) << " ci ["
            << format_number(report.ci_low) << ", "
            << format_number(report.ci_high) << "] errors "
            << report.errors << "/" << report.trials << "\n";
    }
    return 0;
}

int cmd_lln(const LlnConfig& config, std::ostream& out, std::ostream& err) {
    (void)out;
    (void)err;
    ResolvedChannel rc = resolve_channel(config.channel);
    InputDistribution px = input_for(rc.channel, config.input_dist);
    std::vector<std::size_t> n_list = parse_n_list(config.n_list);
    if (!(config.delta > 0) || !std::isfinite(config.delta))
        throw DomainError("--delta must be positive and finite");
    if (config.trials == 0) throw DomainError("--trials must be >= 1");
    if (config.csv_path.empty()) throw DomainError("--csv is required");

    LlnReport report = lln_experiment(rc.channel, px, n_list, config.delta,
                                      config.trials, config.seed);

    std::ofstream csv = open_output(config.csv_path);
    csv_row(csv, {"n", "prob", "trials"});
    for (const LlnEntry& entry : report.entries)
        csv_row(csv, {format_number(static_cast<std::uint64_t>(entry.n)),
                      format_number(entry.probability),
                      format_number(entry.trials)});
    finish_output(csv, config.csv_path);
    return 0;
}

}  // namespace fblkit::cli
