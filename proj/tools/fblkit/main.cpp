#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "fblkit/channel_spec.hpp"
#include "fblkit/commands.hpp"
#include "fblkit/errors.hpp"
#include "json.hpp"

namespace {

// All failures leave a single-line JSON record on stderr so callers can
// parse the error kind without scraping prose.
int fail(const std::string& kind, const std::string& message,
         const fblkit::cli::ParseError* location = nullptr) {
    nlohmann::ordered_json rec;
    rec["error"] = kind;
    rec["message"] = message;
    if (location != nullptr && location->line() > 0) {
        rec["line"] = location->line();
        rec["column"] = location->column();
    }
    std::cerr << rec.dump() << "\n";
    return 1;
}

const char* kChannelHelp =
    "channel spec file, or bsc:p / bec:e / zchannel:p / identity:k";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-blocklength coding bounds for discrete memoryless "
                 "channels"};
    app.require_subcommand(1);

    fblkit::cli::AnalyzeConfig ac;
    fblkit::cli::BoundsConfig bc;
    fblkit::cli::SimulateConfig sc;
    fblkit::cli::LlnConfig lc;

    CLI::App* analyze = app.add_subcommand(
        "analyze", "channel statistics, capacity and the optimal input");
    analyze->add_option("channel", ac.channel, kChannelHelp)->required();
    analyze->add_option("--input-dist", ac.input_dist,
                        "comma-separated input pmf (default uniform)");
    analyze->add_option("--json", ac.json_path, "also write a JSON record");
    analyze->add_option("--emit-spec", ac.emit_spec_path,
                        "write the resolved channel as a spec file");

    CLI::App* bounds = app.add_subcommand(
        "bounds", "closed-form bound and rate grids as CSV");
    bounds->add_option("channel", bc.channel, kChannelHelp)->required();
    bounds->add_option("--eps", bc.eps, "target block error probability")
        ->required();
    bounds->add_option("--n-grid", bc.n_grid,
                       "blocklength grid start:stop:step");
    bounds->add_option("--rate-grid", bc.rate_grid,
                       "rate grid start:stop:step (needs --n)");
    bounds->add_option("--n", bc.n, "blocklength for --rate-grid");
    bounds->add_option("--delta", bc.delta,
                       "slack in bits, or 'auto' for n^(-3/4)");
    bounds->add_option("--input-dist", bc.input_dist,
                       "comma-separated input pmf (default uniform)");
    bounds->add_option("--csv", bc.csv_path, "output CSV path")->required();

    CLI::App* simulate = app.add_subcommand(
        "simulate", "random-coding error simulation, JSON report");
    simulate->add_option("channel", sc.channel, kChannelHelp)->required();
    simulate->add_option("--n", sc.n, "blocklength")->required();
    simulate->add_option("--rate", sc.rate, "rate in bits per channel use")
        ->required();
    simulate->add_option("--trials", sc.trials, "number of trials")
        ->required();
    simulate->add_option("--seed", sc.seed, "RNG seed")->required();
    simulate
        ->add_option("--tie-policy", sc.tie_policy,
                     "decoder tie handling: ties-error or uniform")
        ->check(CLI::IsMember({"ties-error", "uniform"}));
    simulate->add_flag("--exact", sc.exact,
                       "also enumerate the exact ensemble error");
    simulate->add_flag("--fixed-codebook", sc.fixed_codebook,
                       "reuse one codebook instead of the ensemble average");
    simulate->add_option("--delta", sc.delta,
                         "slack for the embedded bounds, or 'auto'");
    simulate->add_option("--input-dist", sc.input_dist,
                         "comma-separated input pmf (default uniform)");
    simulate->add_option("--json", sc.json_path, "output JSON path")
        ->required();

    CLI::App* lln = app.add_subcommand(
        "lln", "empirical information-density tail probabilities as CSV");
    lln->add_option("channel", lc.channel, kChannelHelp)->required();
    lln->add_option("--n-list", lc.n_list, "comma-separated blocklengths")
        ->required();
    lln->add_option("--delta", lc.delta, "tail offset in bits")->required();
    lln->add_option("--trials", lc.trials, "trials per blocklength")
        ->required();
    lln->add_option("--seed", lc.seed, "RNG seed")->required();
    lln->add_option("--input-dist", lc.input_dist,
                    "comma-separated input pmf (default uniform)");
    lln->add_option("--csv", lc.csv_path, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("UsageError", e.what());
    }

    try {
        if (analyze->parsed())
            return fblkit::cli::cmd_analyze(ac, std::cout, std::cerr);
        if (bounds->parsed())
            return fblkit::cli::cmd_bounds(bc, std::cout, std::cerr);
        if (simulate->parsed())
            return fblkit::cli::cmd_simulate(sc, std::cout, std::cerr);
        if (lln->parsed())
            return fblkit::cli::cmd_lln(lc, std::cout, std::cerr);
    } catch (const fblkit::cli::ParseError& e) {
        return fail(e.kind(), e.what(), &e);
    } catch (const fblkit::Error& e) {
        return fail(e.kind(), e.what());
    } catch (const std::exception& e) {
        return fail("InternalError", e.what());
    }
    return 0;
}
