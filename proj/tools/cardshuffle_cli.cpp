// Command-line front end: exact analysis, bounds, simulation, and the
// verification suite.  Formats are documented in docs/formats.md.
//
// Exit codes: 0 success, 2 validation error, 3 verification failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cardshuffle/cardshuffle.hpp"

namespace {

using namespace cardshuffle;

// --out is resolved against CARDSHUFFLE_OUT_DIR when relative.
void write_output(const std::string& content, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::string path = out_path;
    const char* dir = std::getenv("CARDSHUFFLE_OUT_DIR");
    if (dir != nullptr && *dir != '\0' && path.front() != '/')
        path = std::string(dir) + "/" + path;
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(Errc::invalid_character, "cannot open output file " + path);
    f << content;
}

std::vector<report::StatsRow> collect_stats(int n, int max_tier) {
    auto table = tier_solve(n, max_tier);
    std::vector<report::StatsRow> rows;
    for (int k = 1; k <= table.max_tier; ++k) rows.push_back(report::stats_row(tier_stats(table, k)));
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact and stochastic analysis of the two-color top-or-random shuffle"};
    app.require_subcommand(1);

    int n = 0;
    int k = -1;
    int max_tier = -1;
    std::string deck_text;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> max_steps;
    std::string format;
    std::string out_path;
    bool decimals = false;
    bool list_decks = false;
    std::string method = "tier";

    auto add_common = [&](CLI::App* cmd, const char* default_format) {
        cmd->add_option("--format", format,
                        std::string("output format (default ") + default_format + ")");
        cmd->add_option("--out", out_path, "output path (default stdout)");
    };
    auto fmt_or = [&](const char* fallback) { return format.empty() ? fallback : format; };

    auto* cmd_enumerate = app.add_subcommand("enumerate", "tier census of all canonical decks");
    cmd_enumerate->add_option("--n", n, "half-deck size")->required();
    cmd_enumerate->add_flag("--list", list_decks, "list decks instead of tier counts");
    add_common(cmd_enumerate, "csv");

    auto* cmd_solve = app.add_subcommand("solve", "exact expected moves to absorption per deck");
    cmd_solve->add_option("--n", n, "half-deck size")->required();
    cmd_solve->add_option("--max-tier", max_tier, "solve tiers 0..max-tier only");
    cmd_solve->add_option("--method", method, "tier | fundamental (default tier)");
    cmd_solve->add_flag("--decimals", decimals, "append a 6-decimal display column");
    add_common(cmd_solve, "csv");

    auto* cmd_stats = app.add_subcommand("stats", "per-tier extrema of expected moves");
    cmd_stats->add_option("--n", n, "half-deck size")->required();
    cmd_stats->add_option("--k", k, "restrict to one tier");
    cmd_stats->add_option("--max-tier", max_tier, "solve tiers 0..max-tier only");
    add_common(cmd_stats, "csv");

    auto* cmd_bounds = app.add_subcommand("bounds", "closed-form bounds per tier");
    cmd_bounds->add_option("--n", n, "half-deck size")->required();
    cmd_bounds->add_option("--k", k, "restrict to one tier");
    add_common(cmd_bounds, "csv");

    auto* cmd_simulate = app.add_subcommand("simulate", "seeded trials from one deck");
    cmd_simulate->add_option("--deck", deck_text, "start deck, e.g. 011010")->required();
    cmd_simulate->add_option("--trials", trials, "number of trials (default 1000)");
    cmd_simulate->add_option("--seed", seed, "master seed (default 0)");
    cmd_simulate->add_option("--max-steps", max_steps, "abort a trial after this many moves");
    add_common(cmd_simulate, "csv");

    auto* cmd_sweep = app.add_subcommand("sweep", "trials for every deck of the highest tier");
    cmd_sweep->add_option("--n", n, "half-deck size")->required();
    cmd_sweep->add_option("--trials", trials, "trials per deck (default 1000)");
    cmd_sweep->add_option("--seed", seed, "master seed (default 0)");
    add_common(cmd_sweep, "csv");

    auto* cmd_figure = app.add_subcommand("figure", "bounds and exact values per tier as SVG");
    cmd_figure->add_option("--n", n, "half-deck size")->required();
    add_common(cmd_figure, "svg");

    int verify_n = 5;
    auto* cmd_verify = app.add_subcommand("verify", "run the cross-module verification suite");
    cmd_verify->add_option("--n", verify_n, "largest n to verify (default 5)");
    add_common(cmd_verify, "json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_enumerate->parsed()) {
            if (fmt_or("csv") != "csv") raise(Errc::out_of_range, "enumerate supports --format csv");
            if (list_decks) {
                std::string out = "deck,tier,class\n";
                for (const Deck& d : enumerate_decks(n))
                    out += render(d) + "," + std::to_string(tier_of(d)) + "," +
                           report::class_name(classify(d)) + "\n";
                write_output(out, out_path);
            } else {
                write_output(report::census_csv(report::census_rows(census(n))), out_path);
            }
        } else if (cmd_solve->parsed()) {
            AbsorptionTable table;
            if (method == "tier")
                table = tier_solve(n, max_tier);
            else if (method == "fundamental")
                table = fundamental_solve(n);
            else
                raise(Errc::out_of_range, "unknown --method " + method);
            std::string fmt = fmt_or("csv");
            if (fmt == "csv")
                write_output(report::solve_csv(report::solve_rows(table, decimals)), out_path);
            else if (fmt == "json")
                write_output(report::solve_json(table, decimals), out_path);
            else
                raise(Errc::out_of_range, "solve supports --format csv|json");
        } else if (cmd_stats->parsed()) {
            if (k >= 0) max_tier = k;
            auto rows = collect_stats(n, max_tier);
            if (k >= 0) {
                std::vector<report::StatsRow> one;
                for (auto& r : rows)
                    if (r.k == k) one.push_back(r);
                rows = std::move(one);
                if (rows.empty()) raise(Errc::empty_tier, "no tier " + std::to_string(k));
            }
            std::string fmt = fmt_or("csv");
            if (fmt == "csv")
                write_output(report::stats_csv(rows), out_path);
            else if (fmt == "markdown")
                write_output(report::stats_markdown(rows), out_path);
            else
                raise(Errc::out_of_range, "stats supports --format csv|markdown");
        } else if (cmd_bounds->parsed()) {
            std::vector<BoundsRecord> rows;
            if (k >= 0)
                rows.push_back(bounds(n, k));
            else
                for (int kk = 1; kk <= n - 1; ++kk) rows.push_back(bounds(n, kk));
            std::string fmt = fmt_or("csv");
            if (fmt == "csv")
                write_output(report::bounds_csv(rows), out_path);
            else if (fmt == "markdown")
                write_output(report::bounds_markdown(rows), out_path);
            else
                raise(Errc::out_of_range, "bounds supports --format csv|markdown");
        } else if (cmd_simulate->parsed()) {
            if (fmt_or("csv") != "csv") raise(Errc::out_of_range, "simulate supports --format csv");
            SimConfig cfg;
            cfg.start = parse_deck(deck_text);
            cfg.n = static_cast<int>(cfg.start.half);
            cfg.trials = trials;
            cfg.master_seed = seed;
            cfg.max_steps = max_steps;
            write_output(report::simulate_csv({run_trials(cfg)}), out_path);
        } else if (cmd_sweep->parsed()) {
            if (fmt_or("csv") != "csv") raise(Errc::out_of_range, "sweep supports --format csv");
            write_output(report::sweep_csv(highest_tier_sweep(n, trials, seed)), out_path);
        } else if (cmd_figure->parsed()) {
            if (fmt_or("svg") != "svg") raise(Errc::out_of_range, "figure supports --format svg");
            auto table = tier_solve(n);
            write_output(report::figure_svg(report::figure_series(n, table)), out_path);
        } else if (cmd_verify->parsed()) {
            if (fmt_or("json") != "json") raise(Errc::out_of_range, "verify supports --format json");
            auto report_data = run_verify(verify_n);
            write_output(verify_json(report_data), out_path);
            if (!report_data.all_passed()) {
                for (const auto& c : report_data.checks)
                    if (!c.passed) std::cerr << "FAILED: " << c.name << " (" << c.detail << ")\n";
                return 3;
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
