// Release gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "fgdet/oracle.hpp"
#include "fgdet/report.hpp"
#include "gr_shapes.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

using namespace fgdet;
using namespace fgdet::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& why)
    {
        pass = false;
        detail << "\n    " << why;
    }
};

const std::vector<BenchRow>& table()
{
    static const auto rows = load_bench_table(std::string(FGDET_DATA_DIR) + "/table1.json");
    return rows;
}

const BenchRow& row(int id)
{
    for (const auto& r : table())
        if (r.id == id)
            return r;
    throw std::runtime_error("no benchmark row " + std::to_string(id));
}

std::string sizes(const StatsRow& s)
{
    return std::to_string(s.states) + "/" + std::to_string(s.gr_factor) + "/" + std::to_string(s.rabin_bound);
}

Outcome infinitary_rows()
{
    Outcome o;
    // FGa|FGb|GFc, FGa|GFb, GFa&FGb, FGa&GFa, GF(a|b)&GF(b|c), G(Fa&Fb), two and three fairness, five-to-one
    for (int id : {2, 10, 13, 15, 11, 16, 23, 24, 25}) {
        const auto& r = row(id);
        auto s = compute_stats(parse_formula(r.formula), {});
        bool ok = s.states == r.muller_gr && s.gr_factor == r.gr_factor && s.rabin_bound == r.rabin;
        o.detail << (o.detail.tellp() > 0 ? ", " : "") << sizes(s);
        if (!ok)
            o.fail(r.formula + ": " + sizes(s) + ", expected " + std::to_string(r.muller_gr) + "/" +
                   std::to_string(r.gr_factor) + "/" + std::to_string(r.rabin));
    }
    return o;
}

Outcome logical_states()
{
    Outcome o;
    for (const auto& r : table()) {
        auto aut = build(parse_formula(r.formula));
        if (aut.chis().size() != r.states)
            o.fail(r.formula + ": " + std::to_string(aut.chis().size()) + " logical states, expected " +
                   std::to_string(r.states));
    }
    o.detail << table().size() << " rows";
    return o;
}

Outcome finitary_rows()
{
    Outcome o;
    std::size_t n = 0;
    for (const auto& r : table()) {
        if (r.check != "tolerance")
            continue;
        ++n;
        auto res = run_bench_row(r, {});
        if (!res.ok)
            o.fail(r.formula + ": " + std::to_string(res.stats.states) + " states");
        else if (res.stats.states != r.muller_gr)
            o.detail << "\n    within tolerance: " << r.formula << " " << res.stats.states << " vs "
                     << r.muller_gr << " (collapsed " << res.collapsed_states << ")";
    }
    std::ostringstream head;
    head << n << " rows";
    o.detail.str(head.str() + o.detail.str());
    return o;
}

Outcome collapse()
{
    Outcome o;
    BuildOptions opts;
    opts.bisim_collapse = true;
    auto n = build(parse_formula("F a & F b"), opts).num_states();
    o.detail << "F a & F b collapses to " << n << " states";
    if (n != 4)
        o.fail("expected 4");
    return o;
}

Outcome differential()
{
    Outcome o;
    DifftestConfig cfg;
    cfg.cases = 10000;
    auto start = std::chrono::steady_clock::now();
    auto sum = run_difftest(cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.detail << sum.cases << " cases x 4 backends, " << sum.disagreements << " disagreements, " << sum.accepted
             << " accepted, " << sum.resource_skips << " skipped, " << secs << " s";
    if (sum.disagreements != 0 || sum.resource_skips != 0)
        o.fail("see failures");
    for (std::size_t k = 0; k < std::min<std::size_t>(5, sum.failures.size()); ++k)
        o.fail(sum.failures[k].formula + " on " + sum.failures[k].lasso + ": " + sum.failures[k].reason);
    return o;
}

Outcome local_correctness()
{
    Outcome o;
    std::size_t positions = 0;
    std::size_t violations = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        auto seed = case_seed(9001, s);
        auto f = random_formula(seed, 12, 3);
        Translation tr(f);
        auto w = random_lasso(seed, 4, 4, 3);
        auto [checked, violation] = check_local(tr, w);
        positions += checked;
        if (violation) {
            ++violations;
            o.fail(f.to_string() + " on " + lasso_to_string(w, f.props) + " at " + std::to_string(*violation));
        }
    }
    o.detail << "1000 pairs, " << positions << " positions, " << violations << " violations";
    return o;
}

Outcome muller_gr()
{
    Outcome o;
    std::size_t formulas = 0;
    std::size_t subsets = 0;
    for (const auto& r : table()) {
        auto aut = build(parse_formula(r.formula));
        if (non_marker(aut).size() > 12)
            continue;
        ++formulas;
        auto gr = gen_rabin(aut);
        for_each_subset(aut, [&](const std::vector<StateId>& m) {
            ++subsets;
            if (muller_accepting(aut, m) != evaluate_gr(gr, m))
                o.fail(r.formula + ": subset of size " + std::to_string(m.size()));
        });
    }
    o.detail << formulas << " formulas, " << subsets << " subsets";
    return o;
}

Outcome structure()
{
    Outcome o;
    for (const auto& r : table()) {
        auto f = parse_formula(r.formula);
        auto aut = build(f);
        auto gr = gen_rabin(aut);
        auto rabin = degeneralize(aut, gr);
        auto temporal = aut.translation().index().size();
        if (temporal < 64 && rabin.pairs().size() > (std::uint64_t{1} << temporal))
            o.fail(r.formula + ": too many pairs");
        if (rabin.bound() != gr_factor(gr) * aut.num_states())
            o.fail(r.formula + ": bound is not factor x states");
        if (rabin.num_states() > rabin.bound())
            o.fail(r.formula + ": product exceeds the bound");
    }
    {
        auto aut = build(parse_formula("F G a | G F b"));
        auto gr = gen_rabin(aut);
        auto not_a = states_where(aut, [](Letter a) { return !has(a, 0); });
        auto b = states_where(aut, [](Letter a) { return has(a, 1); });
        if (!same_disjuncts(gr, {{not_a, {}}, {StateSet(aut.num_states()), {b.elements()}}}))
            o.fail("F G a | G F b: condition differs from the two expected pairs");
    }
    {
        auto aut = build(parse_formula("(F G a | G F b) & (F G c | G F d)"));
        auto gr = gen_rabin(aut);
        auto set = [&](const std::function<bool(Letter)>& p) { return states_where(aut, p); };
        auto not_a = set([](Letter x) { return !has(x, 0); });
        auto not_c = set([](Letter x) { return !has(x, 2); });
        auto not_a_or_c = set([](Letter x) { return !has(x, 0) || !has(x, 2); });
        auto b = set([](Letter x) { return has(x, 1); }).elements();
        auto d = set([](Letter x) { return has(x, 3); }).elements();
        StateSet none(aut.num_states());
        if (!same_disjuncts(gr, {{not_a_or_c, {}}, {not_a, {d}}, {not_c, {b}}, {none, {b, d}}}))
            o.fail("two fairness constraints: condition differs from the four expected disjuncts");
    }
    o.detail << table().size() << " formulas, two condition shapes";
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, Outcome (*)()>> criteria{
        {"infinitary benchmark rows exact", infinitary_rows},
        {"logical states exact on every row", logical_states},
        {"finitary rows within tolerance", finitary_rows},
        {"bisimulation collapse of F a & F b", collapse},
        {"differential suite", differential},
        {"local correctness", local_correctness},
        {"Muller and generalized Rabin agree", muller_gr},
        {"structural bounds and condition shapes", structure},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << criteria[k].first << " ("
                  << o.detail.str() << ")" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
