// fgdet: (F,G)-LTL to deterministic generalized-Rabin / Rabin automata.

#include "fgdet/oracle.hpp"
#include "fgdet/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#ifndef FGDET_DATA_DIR
#define FGDET_DATA_DIR "data"
#endif

namespace {

using namespace fgdet;
using nlohmann::json;

enum Exit : int {
    kOk = 0,
    kReject = 1,
    kParseError = 2,
    kResourceLimit = 3,
    kDisagreement = 4,
    kInternal = 5,
};

struct Common {
    std::string merge = "on";
    std::string bisim = "off";
    std::string ap;
    std::size_t state_cap = 0;

    BuildOptions options() const
    {
        BuildOptions o;
        o.merge_letters = merge == "on";
        o.bisim_collapse = bisim == "on";
        if (const char* env = std::getenv("FGDET_STATE_CAP"))
            o.state_cap = std::stoull(env);
        if (state_cap > 0)
            o.state_cap = state_cap;
        return o;
    }

    std::optional<PropList> props() const
    {
        if (ap.empty())
            return std::nullopt;
        PropList out;
        std::stringstream in(ap);
        for (std::string p; std::getline(in, p, ',');)
            if (!p.empty())
                out.push_back(p);
        return out;
    }
};

void add_common(CLI::App* cmd, Common& c)
{
    auto on_off = CLI::IsMember({"on", "off"});
    cmd->add_option("--merge-letters", c.merge, "Merge letters with equal residues")->check(on_off);
    cmd->add_option("--bisim", c.bisim, "Bisimulation collapse")->check(on_off);
    cmd->add_option("--ap", c.ap, "Comma-separated proposition order");
    cmd->add_option("--state-cap", c.state_cap, "State cap (overrides FGDET_STATE_CAP)");
}

int cmd_translate(const std::string& text, const Common& c, const std::string& acceptance, const std::string& format)
{
    auto f = parse_formula(text, c.props());
    auto opts = c.options();
    auto aut = build(f, opts);
    auto gr = gen_rabin(aut);
    if (acceptance == "gr") {
        if (format == "json")
            std::cout << to_json(aut, gr).dump(2) << "\n";
        else
            std::cout << to_hoa(aut, gr);
    } else {
        auto rabin = degeneralize(aut, gr, opts.state_cap);
        if (format == "json")
            std::cout << to_json(rabin, f.props).dump(2) << "\n";
        else
            std::cout << to_hoa(rabin, f.props, f.to_string());
    }
    return kOk;
}

void print_stats_text(const StatsRow& r)
{
    std::cout << "formula         " << r.formula << "\n"
              << "logical states  " << r.logical_states << "\n"
              << "states          " << r.states << "\n"
              << "GR disjuncts    " << r.gr_disjuncts << "\n"
              << "GR factor       " << r.gr_factor << "\n"
              << "Rabin bound     " << r.rabin_bound << "\n"
              << "Rabin states    " << r.rabin_states << "\n"
              << "Rabin pairs     " << r.rabin_pairs << "\n"
              << "regime          " << r.regime << (r.merge_fallback ? " (fallback)" : "") << "\n"
              << "wall ms         " << std::fixed << std::setprecision(3) << r.wall_ms << "\n";
}

int cmd_stats(const std::string& text, const Common& c, bool as_json)
{
    auto row = compute_stats(parse_formula(text, c.props()), c.options());
    if (as_json)
        std::cout << to_json(row).dump(2) << "\n";
    else
        print_stats_text(row);
    return kOk;
}

int cmd_check(const std::string& text, const std::string& lasso, const Common& c)
{
    auto f = parse_formula(text, c.props());
    auto w = parse_lasso(lasso, f.props);
    auto base = c.options();
    std::vector<BackendConfig> configs{{base.merge_letters, base.bisim_collapse}};
    Subject subject(f, configs, base);
    auto v = crosscheck(subject, w);
    std::cout << "oracle: " << (v.oracle ? "accept" : "reject") << "\n";
    for (const auto& b : v.backends)
        std::cout << "automaton: " << (b.gr ? "accept" : "reject") << " (" << b.label << ", muller "
                  << (b.muller ? "accept" : "reject") << ", rabin " << (b.rabin ? "accept" : "reject") << ")\n";
    if (!v.agreement) {
        std::cerr << "disagreement: " << v.describe() << "\n";
        return kDisagreement;
    }
    return v.oracle ? kOk : kReject;
}

int cmd_difftest(DifftestConfig cfg, int threads, bool serial, bool as_json)
{
    auto start = std::chrono::steady_clock::now();
    auto sum = serial ? run_difftest_serial(cfg) : run_difftest(cfg, threads);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (as_json) {
        json failures = json::array();
        for (const auto& f : sum.failures)
            failures.push_back({{"index", f.index}, {"seed", f.case_seed}, {"formula", f.formula}, {"lasso", f.lasso},
                                {"reason", f.reason}});
        std::cout << json{{"seed", cfg.seed},
                          {"cases", sum.cases},
                          {"disagreements", sum.disagreements},
                          {"local_checks", sum.local_checks},
                          {"local_violations", sum.local_violations},
                          {"accepted", sum.accepted},
                          {"resource_skips", sum.resource_skips},
                          {"seconds", secs},
                          {"failures", failures}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "cases " << sum.cases << ", disagreements " << sum.disagreements << ", local violations "
                  << sum.local_violations << " of " << sum.local_checks << " positions, accepted " << sum.accepted
                  << ", skipped " << sum.resource_skips << ", " << std::fixed << std::setprecision(2) << secs
                  << " s\n";
        for (const auto& f : sum.failures)
            std::cout << "fgdet check '" << f.formula << "' '" << f.lasso << "'   # case " << f.index << ": "
                      << f.reason << "\n";
    }
    return sum.disagreements == 0 ? kOk : kDisagreement;
}

int cmd_bench(const std::string& table, const Common& c, bool as_json)
{
    auto rows = load_bench_table(table);
    auto opts = c.options();
    json out = json::array();
    bool all_ok = true;
    if (!as_json)
        std::cout << std::left << std::setw(4) << "id" << std::setw(62) << "formula" << std::right << std::setw(7)
                  << "states" << std::setw(8) << "M/GR" << std::setw(8) << "factor" << std::setw(8) << "bound"
                  << std::setw(8) << "rabin" << std::setw(8) << "bisim" << "  reference\n";
    for (const auto& row : rows) {
        auto r = run_bench_row(row, opts);
        all_ok = all_ok && r.ok;
        if (as_json) {
            out.push_back(to_json(r));
            continue;
        }
        std::cout << std::left << std::setw(4) << row.id << std::setw(62) << row.formula << std::right << std::setw(7)
                  << r.stats.logical_states << std::setw(8) << r.stats.states << std::setw(8) << r.stats.gr_factor
                  << std::setw(8) << r.stats.rabin_bound << std::setw(8) << r.stats.rabin_states << std::setw(8)
                  << r.collapsed_states << "  " << row.states << "/" << row.muller_gr << "/" << row.gr_factor << "/"
                  << row.rabin << " [" << row.check << (r.ok ? "" : ", FAILED") << "]\n";
        for (const auto& d : r.deviations)
            std::cout << "      deviation: " << d << "\n";
        if (row.ambiguous)
            std::cout << "      reading: " << row.reading << "\n";
    }
    if (as_json)
        std::cout << out.dump(2) << "\n";
    return all_ok ? kOk : kDisagreement;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Translate (F,G)-LTL formulas to deterministic generalized-Rabin and Rabin automata"};
    app.require_subcommand(1);

    Common common;
    std::string formula;

    auto* translate = app.add_subcommand("translate", "Print the automaton in HOA v1 or JSON");
    std::string acceptance = "gr";
    std::string format = "hoa";
    translate->add_option("formula", formula, "Formula")->required();
    translate->add_option("--acceptance", acceptance, "gr or rabin")->check(CLI::IsMember({"gr", "rabin"}));
    translate->add_option("--format", format, "hoa or json")->check(CLI::IsMember({"hoa", "json"}));
    add_common(translate, common);

    auto* stats = app.add_subcommand("stats", "Print size statistics");
    bool stats_json = false;
    stats->add_option("formula", formula, "Formula")->required();
    stats->add_flag("--json", stats_json, "JSON output");
    add_common(stats, common);

    auto* check = app.add_subcommand("check", "Decide a lasso word with the oracle and the automaton");
    std::string lasso;
    check->add_option("formula", formula, "Formula")->required();
    check->add_option("lasso", lasso, "prefix;period, e.g. \"{a};{b},{}\"")->required();
    add_common(check, common);

    auto* difftest = app.add_subcommand("difftest", "Random differential test against the oracle");
    DifftestConfig cfg;
    int threads = 0;
    bool serial = false;
    bool diff_json = false;
    difftest->add_option("--seed", cfg.seed, "Seed");
    difftest->add_option("--cases", cfg.cases, "Number of cases")->check(CLI::PositiveNumber);
    difftest->add_option("--max-size", cfg.max_size, "Largest formula size")->check(CLI::PositiveNumber);
    difftest->add_option("--props", cfg.num_props, "Number of propositions")->check(CLI::Range(1, 8));
    difftest->add_option("--max-prefix", cfg.max_prefix, "Longest lasso prefix");
    difftest->add_option("--max-period", cfg.max_period, "Longest lasso period")->check(CLI::PositiveNumber);
    difftest->add_option("--threads", threads, "OpenMP threads (0 = default)");
    difftest->add_flag("--serial", serial, "Use the serial kernel");
    difftest->add_flag("--json", diff_json, "JSON output");

    auto* bench = app.add_subcommand("bench", "Reproduce the benchmark size table");
    std::string table = std::string(FGDET_DATA_DIR) + "/table1.json";
    bool bench_json = false;
    bench->add_option("--table", table, "Benchmark table (JSON)");
    bench->add_flag("--json", bench_json, "JSON output");
    add_common(bench, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*translate)
            return cmd_translate(formula, common, acceptance, format);
        if (*stats)
            return cmd_stats(formula, common, stats_json);
        if (*check)
            return cmd_check(formula, lasso, common);
        if (*difftest) {
            if (const char* env = std::getenv("FGDET_STATE_CAP"))
                cfg.state_cap = std::stoull(env);
            return cmd_difftest(cfg, threads, serial, diff_json);
        }
        if (*bench)
            return cmd_bench(table, common, bench_json);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResourceLimit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
    return kOk;
}
