#include "fgdet/report.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fgdet {

using nlohmann::json;

StatsRow compute_stats(const Formula& f, const BuildOptions& opts)
{
    auto start = std::chrono::steady_clock::now();
    auto aut = build(f, opts);
    auto gr = gen_rabin(aut);
    auto rabin = degeneralize(aut, gr, opts.state_cap);
    StatsRow row;
    row.formula = f.to_string();
    row.logical_states = aut.chis().size();
    row.states = aut.num_states();
    row.gr_disjuncts = gr.disjuncts.size();
    row.gr_factor = gr_factor(gr);
    row.rabin_bound = rabin.bound();
    row.rabin_states = rabin.num_states();
    row.rabin_pairs = rabin.pairs().size();
    row.regime = to_string(aut.regime());
    row.merge_fallback = aut.merge_fallback();
    row.bisim_collapse = aut.collapsed();
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

json to_json(const StatsRow& row)
{
    return json{{"formula", row.formula},
                {"logical_states", row.logical_states},
                {"states", row.states},
                {"gr_disjuncts", row.gr_disjuncts},
                {"gr_factor", row.gr_factor},
                {"rabin_bound", row.rabin_bound},
                {"rabin_states", row.rabin_states},
                {"rabin_pairs", row.rabin_pairs},
                {"regime", row.regime},
                {"merge_fallback", row.merge_fallback},
                {"bisim_collapse", row.bisim_collapse},
                {"wall_ms", row.wall_ms}};
}

// ---------------------------------------------------------------------------
// HOA

std::string hoa_letter_label(Letter a, std::size_t num_props)
{
    if (num_props == 0)
        return "t";
    std::string out;
    for (std::size_t p = 0; p < num_props; ++p) {
        if (p > 0)
            out += '&';
        if (!((a >> p) & 1U))
            out += '!';
        out += std::to_string(p);
    }
    return out;
}

namespace {

std::string quoted(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

struct HoaAcceptance {
    std::string acc_name;
    std::string condition;
    std::size_t num_sets = 0;
    /// Acceptance sets of each state.
    std::vector<std::vector<std::size_t>> state_sets;
};

void write_hoa(std::ostringstream& out, const std::string& name, std::size_t num_states, StateId initial,
               const PropList& props, const HoaAcceptance& acc, std::span<const StateId> delta,
               const std::function<std::string(StateId)>& label)
{
    const std::size_t letters = std::size_t{1} << props.size();
    out << "HOA: v1\n";
    if (!name.empty())
        out << "name: " << quoted(name) << "\n";
    out << "States: " << num_states << "\n";
    out << "Start: " << initial << "\n";
    out << "AP: " << props.size();
    for (const auto& p : props)
        out << ' ' << quoted(p);
    out << "\n";
    out << "acc-name: " << acc.acc_name << "\n";
    out << "Acceptance: " << acc.num_sets << ' ' << acc.condition << "\n";
    out << "properties: trans-labels explicit-labels state-acc deterministic complete\n";
    out << "--BODY--\n";
    for (StateId q = 0; q < num_states; ++q) {
        out << "State: " << q << ' ' << quoted(label(q));
        const auto& sets = acc.state_sets[q];
        if (!sets.empty()) {
            out << " {";
            for (std::size_t k = 0; k < sets.size(); ++k)
                out << (k ? " " : "") << sets[k];
            out << "}";
        }
        out << "\n";
        for (Letter a = 0; a < letters; ++a)
            out << '[' << hoa_letter_label(a, props.size()) << "] " << delta[q * letters + a] << "\n";
    }
    out << "--END--\n";
}

} // namespace

std::string to_hoa(const Automaton& aut, const GrCondition& gr, const std::string& name)
{
    HoaAcceptance acc;
    acc.state_sets.resize(aut.num_states());
    acc.acc_name = "generalized-Rabin " + std::to_string(gr.disjuncts.size());
    std::string cond;
    for (const auto& d : gr.disjuncts) {
        acc.acc_name += " " + std::to_string(d.infs.size());
        std::string term = "Fin(" + std::to_string(acc.num_sets) + ")";
        for (auto q : d.fin.elements())
            acc.state_sets[q].push_back(acc.num_sets);
        ++acc.num_sets;
        for (const auto& s : d.infs) {
            term += "&Inf(" + std::to_string(acc.num_sets) + ")";
            for (auto q : s.elements())
                acc.state_sets[q].push_back(acc.num_sets);
            ++acc.num_sets;
        }
        cond += (cond.empty() ? "" : " | ") + std::string("(") + term + ")";
    }
    acc.condition = cond.empty() ? "f" : cond;

    std::ostringstream out;
    write_hoa(out, name.empty() ? aut.translation().formula().to_string() : name, aut.num_states(), aut.initial(),
              aut.props(), acc, aut.transitions(), [&](StateId q) { return aut.describe(q); });
    return out.str();
}

std::string to_hoa(const RabinAutomaton& rabin, const PropList& props, const std::string& name)
{
    HoaAcceptance acc;
    acc.state_sets.resize(rabin.num_states());
    acc.acc_name = "Rabin " + std::to_string(rabin.pairs().size());
    std::string cond;
    for (const auto& pair : rabin.pairs()) {
        auto fin = acc.num_sets++;
        auto inf = acc.num_sets++;
        for (auto q : pair.fin.elements())
            acc.state_sets[q].push_back(fin);
        for (auto q : pair.inf.elements())
            acc.state_sets[q].push_back(inf);
        cond += (cond.empty() ? "" : " | ") + ("(Fin(" + std::to_string(fin) + ")&Inf(" + std::to_string(inf) + "))");
    }
    for (auto& sets : acc.state_sets)
        std::sort(sets.begin(), sets.end());
    acc.condition = cond.empty() ? "f" : cond;

    std::ostringstream out;
    write_hoa(out, name, rabin.num_states(), rabin.initial(), props, acc, rabin.transitions(), [&](StateId p) {
        const auto& s = rabin.state(p);
        std::string label = "q" + std::to_string(s.base);
        for (std::size_t d = 0; d < rabin.pairs().size(); ++d)
            label += (d ? "," : " c=") + std::to_string(rabin.counter(p, d));
        return label;
    });
    return out.str();
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json state_list(const StateSet& s) { return json(s.elements()); }

json transition_rows(std::span<const StateId> delta, std::size_t num_states, std::size_t letters)
{
    json rows = json::array();
    for (std::size_t q = 0; q < num_states; ++q)
        rows.push_back(std::vector<StateId>(delta.begin() + static_cast<std::ptrdiff_t>(q * letters),
                                            delta.begin() + static_cast<std::ptrdiff_t>((q + 1) * letters)));
    return rows;
}

} // namespace

json to_json(const Automaton& aut, const GrCondition& gr)
{
    const auto& tr = aut.translation();
    json states = json::array();
    for (StateId q = 0; q < aut.num_states(); ++q) {
        json members = json::array();
        for (const auto& m : aut.state(q).members)
            members.push_back({{"chi", tr.render(aut.chi(m.chi))}, {"letter", letter_to_string(m.letter, aut.props())}});
        states.push_back({{"id", q}, {"marker", aut.state(q).is_marker()}, {"members", members}});
    }
    json disjuncts = json::array();
    for (const auto& d : gr.disjuncts) {
        json commitment = json::array();
        for (std::size_t t = 0; t < tr.index().size(); ++t)
            if ((d.commitment >> t) & 1U)
                commitment.push_back(tr.index().at(t).to_string(aut.props()));
        json infs = json::array();
        for (const auto& s : d.infs)
            infs.push_back(state_list(s));
        disjuncts.push_back({{"commitment", commitment}, {"fin", state_list(d.fin)}, {"infs", infs}});
    }
    return json{{"formula", tr.formula().to_string()},
                {"props", aut.props()},
                {"initial", aut.initial()},
                {"regime", to_string(aut.regime())},
                {"states", states},
                {"transitions", transition_rows(aut.transitions(), aut.num_states(), aut.num_letters())},
                {"acceptance", {{"kind", "generalized-Rabin"}, {"disjuncts", disjuncts}}}};
}

json to_json(const RabinAutomaton& rabin, const PropList& props)
{
    json states = json::array();
    for (StateId p = 0; p < rabin.num_states(); ++p) {
        std::vector<std::size_t> counters;
        for (std::size_t d = 0; d < rabin.pairs().size(); ++d)
            counters.push_back(rabin.counter(p, d));
        states.push_back({{"id", p}, {"base", rabin.state(p).base}, {"counters", counters}});
    }
    json pairs = json::array();
    for (const auto& pair : rabin.pairs())
        pairs.push_back({{"fin", state_list(pair.fin)}, {"inf", state_list(pair.inf)}});
    return json{{"props", props},
                {"initial", rabin.initial()},
                {"states", states},
                {"transitions", transition_rows(rabin.transitions(), rabin.num_states(), rabin.num_letters())},
                {"acceptance", {{"kind", "Rabin"}, {"pairs", pairs}}}};
}

// ---------------------------------------------------------------------------
// Benchmark

std::vector<BenchRow> load_bench_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open benchmark table " + path);
    auto doc = json::parse(in);
    std::vector<BenchRow> rows;
    for (const auto& r : doc.at("rows")) {
        BenchRow row;
        row.id = r.at("id").get<int>();
        row.formula = r.at("formula").get<std::string>();
        row.check = r.value("check", "reported");
        row.states = r.at("states").get<std::size_t>();
        row.muller_gr = r.at("muller_gr").get<std::size_t>();
        row.gr_factor = r.at("gr_factor").get<std::uint64_t>();
        row.rabin = r.at("rabin").get<std::uint64_t>();
        row.ltl2dstar = r.value("ltl2dstar", std::uint64_t{0});
        row.ambiguous = r.value("ambiguous", false);
        row.reading = r.value("reading", "");
        rows.push_back(std::move(row));
    }
    return rows;
}

BenchResult run_bench_row(const BenchRow& row, const BuildOptions& opts)
{
    BenchResult r;
    r.row = row;
    auto f = parse_formula(row.formula);
    r.stats = compute_stats(f, opts);
    auto collapsed_opts = opts;
    collapsed_opts.bisim_collapse = true;
    r.collapsed_states = build(f, collapsed_opts).num_states();

    auto note = [&](const std::string& what, auto ours, auto theirs) {
        if (ours != theirs)
            r.deviations.push_back(what + " " + std::to_string(ours) + " (reference " + std::to_string(theirs) + ")");
        return ours == theirs;
    };
    bool logical = note("logical states", r.stats.logical_states, row.states);
    bool states = note("states", r.stats.states, row.muller_gr);
    bool factor = note("GR factor", r.stats.gr_factor, row.gr_factor);
    bool bound = note("Rabin bound", r.stats.rabin_bound, row.rabin);

    if (row.check == "exact") {
        r.ok = logical && states && factor && bound;
    } else if (row.check == "tolerance") {
        bool within = r.stats.states * 4 <= row.muller_gr * 5 && r.stats.states >= r.collapsed_states;
        if (!within)
            r.deviations.push_back("states outside +25% of the reference or below the collapsed size " +
                                   std::to_string(r.collapsed_states));
        r.ok = logical && within;
    } else {
        r.ok = logical;
    }
    return r;
}

json to_json(const BenchResult& r)
{
    auto j = to_json(r.stats);
    j["id"] = r.row.id;
    j["check"] = r.row.check;
    j["collapsed_states"] = r.collapsed_states;
    j["reference"] = {{"states", r.row.states},
                      {"muller_gr", r.row.muller_gr},
                      {"gr_factor", r.row.gr_factor},
                      {"rabin", r.row.rabin},
                      {"ltl2dstar", r.row.ltl2dstar}};
    if (r.row.ambiguous)
        j["reading"] = r.row.reading;
    j["deviations"] = r.deviations;
    j["ok"] = r.ok;
    return j;
}

} // namespace fgdet
