#include "fgdet/oracle.hpp"
#include "fgdet/report.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace fgdet;
using nlohmann::json;

namespace {

// Minimal reader for the state-based, explicitly labelled HOA subset we emit.
struct HoaDoc {
    std::map<std::string, std::string> header;
    std::size_t num_states = 0;
    std::size_t start = 0;
    std::size_t num_aps = 0;
    std::size_t num_sets = 0;
    /// Disjunction of conjunctions of (is_inf, set).
    std::vector<std::vector<std::pair<bool, std::size_t>>> condition;
    bool always_false = false;
    std::vector<std::set<std::size_t>> state_sets;
    /// Per state: (literals, target), literal = (ap, positive).
    std::vector<std::vector<std::pair<std::vector<std::pair<std::size_t, bool>>, std::size_t>>> edges;

    std::size_t step(std::size_t q, Letter a) const
    {
        std::optional<std::size_t> hit;
        for (const auto& [lits, target] : edges.at(q)) {
            bool ok = std::all_of(lits.begin(), lits.end(),
                                  [&](const auto& l) { return (((a >> l.first) & 1U) != 0) == l.second; });
            if (ok) {
                REQUIRE_FALSE(hit.has_value());
                hit = target;
            }
        }
        REQUIRE(hit.has_value());
        return *hit;
    }

    bool accepts(const LassoWord& w) const
    {
        std::size_t q = start;
        for (auto a : w.prefix)
            q = step(q, a);
        // iterate whole periods until the state at a period boundary repeats
        std::map<std::size_t, std::size_t> seen;
        std::vector<std::size_t> boundary;
        while (!seen.count(q)) {
            seen[q] = boundary.size();
            boundary.push_back(q);
            for (auto a : w.period)
                q = step(q, a);
        }
        std::set<std::size_t> inf_sets;
        std::size_t p = q;
        do {
            for (auto a : w.period) {
                inf_sets.insert(state_sets[p].begin(), state_sets[p].end());
                p = step(p, a);
            }
        } while (p != q);
        if (always_false)
            return false;
        for (const auto& conj : condition) {
            bool ok = std::all_of(conj.begin(), conj.end(), [&](const auto& t) {
                return t.first == (inf_sets.count(t.second) != 0);
            });
            if (ok)
                return true;
        }
        return false;
    }
};

std::string trim(std::string s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
        ++i;
    return s.substr(i);
}

HoaDoc read_hoa(const std::string& text)
{
    HoaDoc doc;
    std::istringstream in(text);
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "HOA: v1");
    while (std::getline(in, line) && line != "--BODY--") {
        auto colon = line.find(':');
        REQUIRE(colon != std::string::npos);
        doc.header[line.substr(0, colon)] = trim(line.substr(colon + 1));
    }
    doc.num_states = std::stoul(doc.header.at("States"));
    doc.start = std::stoul(doc.header.at("Start"));
    doc.num_aps = std::stoul(doc.header.at("AP"));
    const auto& acc = doc.header.at("Acceptance");
    auto space = acc.find(' ');
    doc.num_sets = std::stoul(acc.substr(0, space));
    auto cond = acc.substr(space + 1);
    if (cond == "f") {
        doc.always_false = true;
    } else {
        std::istringstream terms(cond);
        for (std::string term; std::getline(terms, term, '|');) {
            std::vector<std::pair<bool, std::size_t>> conj;
            std::string t = trim(term);
            REQUIRE(t.front() == '(');
            REQUIRE(t.back() == ')');
            std::istringstream atoms(t.substr(1, t.size() - 2));
            for (std::string atom; std::getline(atoms, atom, '&');) {
                bool inf = atom.rfind("Inf(", 0) == 0;
                REQUIRE((inf || atom.rfind("Fin(", 0) == 0));
                auto set = std::stoul(atom.substr(4, atom.size() - 5));
                REQUIRE(set < doc.num_sets);
                conj.emplace_back(inf, set);
            }
            doc.condition.push_back(conj);
        }
    }
    doc.state_sets.resize(doc.num_states);
    doc.edges.resize(doc.num_states);
    std::optional<std::size_t> current;
    while (std::getline(in, line) && line != "--END--") {
        if (line.rfind("State: ", 0) == 0) {
            std::istringstream s(line.substr(7));
            std::size_t q = 0;
            s >> q;
            REQUIRE(q < doc.num_states);
            current = q;
            auto brace = line.rfind('{');
            if (brace != std::string::npos && line.back() == '}' && line.find('"', brace) == std::string::npos) {
                std::istringstream sets(line.substr(brace + 1, line.size() - brace - 2));
                for (std::size_t k; sets >> k;)
                    doc.state_sets[q].insert(k);
            }
            continue;
        }
        REQUIRE(current.has_value());
        REQUIRE(line.front() == '[');
        auto close = line.find(']');
        auto label = line.substr(1, close - 1);
        std::vector<std::pair<std::size_t, bool>> lits;
        if (label != "t") {
            std::istringstream ls(label);
            for (std::string lit; std::getline(ls, lit, '&');) {
                bool pos = lit.front() != '!';
                lits.emplace_back(std::stoul(pos ? lit : lit.substr(1)), pos);
            }
        }
        auto target = std::stoul(line.substr(close + 1));
        REQUIRE(target < doc.num_states);
        doc.edges[*current].emplace_back(lits, target);
    }
    REQUIRE(line == "--END--");
    return doc;
}

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args, const std::string& env = "")
{
    static int counter = 0;
    std::string path = "fgdet_cli_out_" + std::to_string(counter++) + ".txt";
    std::string cmd = env + (env.empty() ? "" : " ") + "\"" FGDET_CLI "\" " + args + " > " + path + " 2>&1";
    int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    std::remove(path.c_str());
    return r;
}

} // namespace

TEST_CASE("statistics")
{
    auto row = compute_stats(parse_formula("F G a | G F b"), {});
    CHECK(row.formula == "F G a | G F b");
    CHECK(row.logical_states == 1);
    CHECK(row.states == 5);
    CHECK(row.gr_factor == 1);
    CHECK(row.rabin_bound == 5);
    CHECK(row.rabin_states <= row.rabin_bound);
    CHECK_FALSE(row.merge_fallback);

    auto j = to_json(row);
    for (const char* key : {"formula", "logical_states", "states", "gr_disjuncts", "gr_factor", "rabin_bound",
                            "rabin_states", "rabin_pairs", "regime", "merge_fallback", "bisim_collapse", "wall_ms"})
        CHECK_MESSAGE(j.contains(key), key);

    auto fallback = compute_stats(parse_formula("G F(a & F b)"), {});
    CHECK(fallback.merge_fallback);
    CHECK(fallback.regime == "refined");

    auto two = compute_stats(parse_formula("G(F a & F b)"), {});
    CHECK(two.gr_factor == 2);
    CHECK(two.rabin_bound == 10);
}

TEST_CASE("letter labels")
{
    CHECK(hoa_letter_label(0, 0) == "t");
    CHECK(hoa_letter_label(0, 2) == "!0&!1");
    CHECK(hoa_letter_label(1, 2) == "0&!1");
    CHECK(hoa_letter_label(3, 2) == "0&1");
}

TEST_CASE("HOA round trip")
{
    std::vector<std::string> formulas{"F G a | G F b", "G(F a & F b)", "F a & F b", "G F(a & F b)", "a & !a",
                                      "a | !a", "G F a & F G b", "(G(b | G F a) & G(c | G F !a)) | G b | G c"};
    for (std::uint64_t s = 0; s < 40; ++s)
        formulas.push_back(random_formula(s, 10, 3).to_string());
    for (const auto& text : formulas) {
        CAPTURE(text);
        auto f = parse_formula(text);
        for (bool bisim : {false, true}) {
            BuildOptions opts;
            opts.bisim_collapse = bisim;
            auto aut = build(f, opts);
            auto gr = gen_rabin(aut);
            auto rabin = degeneralize(aut, gr);
            auto gr_doc = read_hoa(to_hoa(aut, gr));
            auto rabin_doc = read_hoa(to_hoa(rabin, f.props, text));
            CHECK(gr_doc.num_states == aut.num_states());
            CHECK(gr_doc.num_aps == f.props.size());
            CHECK(gr_doc.header.at("acc-name").rfind("generalized-Rabin", 0) == 0);
            CHECK(rabin_doc.num_states == rabin.num_states());
            CHECK(rabin_doc.num_sets == 2 * rabin.pairs().size());
            for (std::uint64_t k = 0; k < 30; ++k) {
                auto w = random_lasso(k * 7919 + text.size(), 4, 4, f.props.size());
                bool expected = ltl_holds(f.nnf, w);
                REQUIRE(gr_doc.accepts(w) == expected);
                REQUIRE(rabin_doc.accepts(w) == expected);
            }
        }
    }
}

TEST_CASE("JSON documents")
{
    auto f = parse_formula("G(F a & F b)");
    auto aut = build(f);
    auto gr = gen_rabin(aut);
    auto j = to_json(aut, gr);
    CHECK(j.at("formula") == f.to_string());
    CHECK(j.at("props") == json({"a", "b"}));
    CHECK(j.at("states").size() == aut.num_states());
    CHECK(j.at("transitions").size() == aut.num_states());
    CHECK(j.at("transitions").at(0).size() == 4);
    CHECK(j.at("acceptance").at("kind") == "generalized-Rabin");
    CHECK(j.at("acceptance").at("disjuncts").size() == gr.disjuncts.size());
    CHECK(j.at("states").at(aut.initial()).at("marker") == true);

    auto rabin = degeneralize(aut, gr);
    auto r = to_json(rabin, f.props);
    CHECK(r.at("acceptance").at("kind") == "Rabin");
    CHECK(r.at("acceptance").at("pairs").size() == rabin.pairs().size());
    CHECK(r.at("states").size() == rabin.num_states());
}

TEST_CASE("benchmark table")
{
    auto rows = load_bench_table(std::string(FGDET_DATA_DIR) + "/table1.json");
    REQUIRE(rows.size() == 28);
    for (const auto& row : rows) {
        CAPTURE(row.formula);
        auto r = run_bench_row(row, {});
        CHECK(r.ok);
        CHECK(r.stats.logical_states == row.states);
        auto j = to_json(r);
        CHECK(j.at("id") == row.id);
        CHECK(j.at("ok") == r.ok);
    }
    CHECK(std::count_if(rows.begin(), rows.end(), [](const BenchRow& r) { return r.ambiguous; }) == 2);

    BenchRow wrong{99, "F G a | G F b", "exact", 1, 6, 1, 6, 0, false, ""};
    auto r = run_bench_row(wrong, {});
    CHECK_FALSE(r.ok);
    CHECK(r.deviations.size() == 2);
}

TEST_CASE("command line")
{
    SUBCASE("translate")
    {
        auto gr = run_cli("translate 'F G a | G F b'");
        CHECK(gr.code == 0);
        auto doc = read_hoa(gr.out);
        CHECK(doc.num_states == 5);
        auto rabin = run_cli("translate 'G(F a & F b)' --acceptance rabin");
        CHECK(rabin.code == 0);
        CHECK(read_hoa(rabin.out).header.at("acc-name").rfind("Rabin", 0) == 0);
        auto js = run_cli("translate 'F a' --format json");
        CHECK(js.code == 0);
        CHECK(json::parse(js.out).at("formula") == "F a");
        auto ap = run_cli("translate 'F b' --ap b,a");
        CHECK(ap.code == 0);
        CHECK(ap.out.find("AP: 2 \"b\" \"a\"") != std::string::npos);
    }
    SUBCASE("stats")
    {
        auto r = run_cli("stats 'F G a | G F b' --json");
        CHECK(r.code == 0);
        auto j = json::parse(r.out);
        CHECK(j.at("states") == 5);
        CHECK(j.at("logical_states") == 1);
        auto bisim = run_cli("stats 'F a & F b' --bisim on --json");
        CHECK(json::parse(bisim.out).at("states") == 4);
    }
    SUBCASE("check")
    {
        CHECK(run_cli("check 'F a & G F b' '{a};{b}'").code == 0);
        CHECK(run_cli("check 'F a & G F b' ';{b}'").code == 1);
        CHECK(run_cli("check 'G F(a & F b)' ';{a},{}'").code == 1);
        auto out = run_cli("check 'G F(a & F b)' ';{a},{b}' --merge-letters off");
        CHECK(out.code == 0);
        CHECK(out.out.find("oracle: accept") != std::string::npos);
    }
    SUBCASE("errors")
    {
        CHECK(run_cli("translate 'a U b'").code == 2);
        CHECK(run_cli("check 'F a' '{a}'").code == 2);
        CHECK(run_cli("stats 'G(F a & F b & F c)'", "FGDET_STATE_CAP=3").code == 3);
        CHECK(run_cli("stats 'G(F a & F b & F c)' --state-cap 2").code == 3);
        CHECK(run_cli("translate 'F a' --acceptance muller").code != 0);
        CHECK(run_cli("").code != 0);
    }
    SUBCASE("difftest and bench")
    {
        auto d = run_cli("difftest --cases 50 --seed 7 --json");
        CHECK(d.code == 0);
        auto j = json::parse(d.out);
        CHECK(j.at("cases") == 50);
        CHECK(j.at("disagreements") == 0);
        auto serial = run_cli("difftest --cases 50 --seed 7 --serial --json");
        auto js = json::parse(serial.out);
        CHECK(js.at("local_checks") == j.at("local_checks"));
        CHECK(js.at("accepted") == j.at("accepted"));
        auto b = run_cli("bench --json");
        CHECK(b.code == 0);
        CHECK(json::parse(b.out).size() == 28);
    }
}
