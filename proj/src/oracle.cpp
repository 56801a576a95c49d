#include "fgdet/oracle.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fgdet {

// ---------------------------------------------------------------------------
// Semantics

LassoEvaluator::LassoEvaluator(LassoWord w) : w_(std::move(w)) {}

const std::vector<char>& LassoEvaluator::values(const NnfFormula& f)
{
    if (auto it = memo_.find(f.key()); it != memo_.end())
        return it->second;

    const auto n = w_.span();
    const auto loop = w_.prefix.size();
    std::vector<char> out(n, 0);
    switch (f.op()) {
    case NnfOp::True:
        std::fill(out.begin(), out.end(), 1);
        break;
    case NnfOp::False:
        break;
    case NnfOp::Atom:
    case NnfOp::NegAtom: {
        bool positive = f.op() == NnfOp::Atom;
        for (std::size_t p = 0; p < n; ++p)
            out[p] = (((w_.at(p) >> f.atom_index()) & 1U) != 0) == positive;
        break;
    }
    case NnfOp::And:
    case NnfOp::Or: {
        auto lhs = values(f.lhs());
        const auto& rhs = values(f.rhs());
        for (std::size_t p = 0; p < n; ++p)
            out[p] = f.op() == NnfOp::And ? (lhs[p] && rhs[p]) : (lhs[p] || rhs[p]);
        break;
    }
    case NnfOp::F:
    case NnfOp::G: {
        // From a loop position every loop position is reachable; prefix
        // positions see themselves and everything after.
        const auto& arg = values(f.arg());
        bool eventually = f.op() == NnfOp::F;
        bool on_loop = !eventually;
        for (std::size_t p = loop; p < n; ++p)
            on_loop = eventually ? (on_loop || arg[p]) : (on_loop && arg[p]);
        for (std::size_t p = loop; p < n; ++p)
            out[p] = on_loop;
        bool acc = on_loop;
        for (std::size_t p = loop; p-- > 0;) {
            acc = eventually ? (acc || arg[p]) : (acc && arg[p]);
            out[p] = acc;
        }
        break;
    }
    }
    return memo_.emplace(f.key(), std::move(out)).first->second;
}

bool ltl_holds(const NnfFormula& f, const LassoWord& w, std::size_t pos)
{
    LassoEvaluator ev(w);
    return ev.holds(f, pos);
}

// ---------------------------------------------------------------------------
// Acceptance

bool accepts(const Automaton& aut, const std::vector<std::vector<StateId>>& muller, const LassoWord& w)
{
    auto inf = aut.run(w).inf;
    return std::find(muller.begin(), muller.end(), inf) != muller.end();
}

bool accepts(const Automaton& aut, const GrCondition& gr, const LassoWord& w)
{
    return evaluate_gr(gr, aut.run(w).inf);
}

bool accepts(const RabinAutomaton& rabin, const LassoWord& w)
{
    return evaluate_rabin(rabin.pairs(), rabin.run(w).inf);
}

bool accepts_muller(const Automaton& aut, const LassoWord& w) { return muller_accepting(aut, aut.run(w).inf); }

// ---------------------------------------------------------------------------
// Random instances

PropList default_props(std::size_t n)
{
    PropList props;
    for (std::size_t i = 0; i < n; ++i)
        props.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "p" + std::to_string(i));
    return props;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

NnfFormula random_literal(std::mt19937_64& rng, std::size_t num_props)
{
    auto a = static_cast<std::uint32_t>(uniform(rng, 0, num_props - 1));
    return uniform(rng, 0, 1) == 0 ? NnfFormula::atom(a) : NnfFormula::neg_atom(a);
}

NnfFormula random_of_size(std::mt19937_64& rng, std::size_t size, std::size_t num_props)
{
    if (size <= 1)
        return random_literal(rng, num_props);
    auto pick = size == 2 ? 2 + uniform(rng, 0, 1) : uniform(rng, 0, 3);
    if (pick >= 2) {
        auto arg = random_of_size(rng, size - 1, num_props);
        return pick == 2 ? NnfFormula::eventually(arg) : NnfFormula::always(arg);
    }
    auto left = uniform(rng, 1, size - 2);
    auto l = random_of_size(rng, left, num_props);
    auto r = random_of_size(rng, size - 1 - left, num_props);
    return pick == 0 ? NnfFormula::conj(l, r) : NnfFormula::disj(l, r);
}

} // namespace

Formula random_formula(std::uint64_t seed, std::size_t max_size, std::size_t num_props)
{
    std::mt19937_64 rng(splitmix64(seed));
    auto size = uniform(rng, 1, std::max<std::size_t>(1, max_size));
    return Formula{random_of_size(rng, size, std::max<std::size_t>(1, num_props)), default_props(num_props)};
}

LassoWord random_lasso(std::uint64_t seed, std::size_t max_prefix, std::size_t max_period, std::size_t num_props)
{
    std::mt19937_64 rng(splitmix64(seed ^ 0x5bd1e995ULL));
    const Letter top = (Letter{1} << num_props) - 1;
    auto letter = [&] { return static_cast<Letter>(uniform(rng, 0, top)); };
    LassoWord w;
    w.prefix.resize(uniform(rng, 0, max_prefix));
    w.period.resize(uniform(rng, 1, std::max<std::size_t>(1, max_period)));
    std::generate(w.prefix.begin(), w.prefix.end(), letter);
    std::generate(w.period.begin(), w.period.end(), letter);
    return w;
}

// ---------------------------------------------------------------------------
// Differential checking

std::string BackendConfig::label() const
{
    return std::string("merge=") + (merge_letters ? "on" : "off") + ",bisim=" + (bisim_collapse ? "on" : "off");
}

std::vector<BackendConfig> all_backend_configs()
{
    return {{false, false}, {true, false}, {false, true}, {true, true}};
}

Subject::Subject(const Formula& f, std::span<const BackendConfig> configs, const BuildOptions& base)
    : tr_(std::make_shared<const Translation>(f)), base_(base)
{
    for (const auto& c : configs) {
        auto opts = base;
        opts.merge_letters = c.merge_letters;
        opts.bisim_collapse = c.bisim_collapse;
        Backend b{c, build(tr_, opts), {}, {}};
        b.gr = gen_rabin(b.aut);
        b.rabin = degeneralize(b.aut, b.gr, base.state_cap);
        backends_.push_back(std::move(b));
    }
}

std::string Verdict::describe() const
{
    std::ostringstream out;
    out << formula << " on " << lasso << ": oracle=" << (oracle ? "accept" : "reject");
    for (const auto& b : backends)
        out << " [" << b.label << " muller=" << b.muller << " gr=" << b.gr << " rabin=" << b.rabin << "]";
    if (local_violation)
        out << " local violation at position " << *local_violation;
    if (!commitments_ok)
        out << " commitment violated";
    return out.str();
}

std::pair<std::size_t, std::optional<std::size_t>> check_local(const Translation& tr, const LassoWord& w,
                                                               const BuildOptions& opts)
{
    LassoEvaluator ev(w);
    const auto& closure = tr.closure();
    const auto& idx = tr.index();
    const bool truth = ev.holds(tr.formula().nnf, 0);
    const auto horizon = w.prefix.size() + 2 * w.period.size();

    auto chi = tr.initial_function();
    for (std::size_t n = 0; n <= horizon; ++n) {
        auto letter = w.at(n);
        AtomSet atoms = tr.true_literals(letter);
        for (std::size_t t = 0; t < idx.size(); ++t)
            if (ev.holds(idx.at(t), n + 1))
                atoms.insert(closure.next(t));
        if (chi.eval(atoms) != truth)
            return {n + 1, n};
        chi = opts.successor_hook ? opts.successor_hook(tr, chi, letter) : tr.successor(chi, letter);
    }
    return {horizon + 1, std::nullopt};
}

namespace {

// Lemma-style sanity check: commitments of a satisfied disjunct hold on every
// loop position of the word.
bool commitments_hold(const Translation& tr, const GrCondition& gr, const std::vector<StateId>& inf,
                      LassoEvaluator& ev)
{
    const auto& w = ev.word();
    for (const auto& d : gr.disjuncts) {
        if (d.fin.intersects(inf))
            continue;
        if (!std::all_of(d.infs.begin(), d.infs.end(), [&](const StateSet& s) { return s.intersects(inf); }))
            continue;
        for (std::size_t t = 0; t < tr.index().size(); ++t) {
            if (!((d.commitment >> t) & 1U))
                continue;
            for (std::size_t p = w.prefix.size(); p < w.span(); ++p)
                if (!ev.holds(tr.index().at(t), p))
                    return false;
        }
        return true;
    }
    return true;
}

} // namespace

Verdict crosscheck(const Subject& subject, const LassoWord& w, bool local)
{
    const auto& tr = subject.translation();
    Verdict v;
    v.formula = subject.formula().to_string();
    v.lasso = lasso_to_string(w, subject.formula().props);
    LassoEvaluator ev(w);
    v.oracle = ev.holds(tr.formula().nnf, 0);

    for (const auto& b : subject.backends()) {
        auto inf = b.aut.run(w).inf;
        BackendVerdict bv{b.config.label(), muller_accepting(b.aut, inf), evaluate_gr(b.gr, inf),
                          accepts(b.rabin, w)};
        v.agreement = v.agreement && bv.muller == v.oracle && bv.gr == v.oracle && bv.rabin == v.oracle;
        // Merged states may pool letters whose operand truths differ outside
        // the reachable obligations, so the check needs one letter per state.
        bool exact = !b.config.merge_letters && !b.config.bisim_collapse;
        if (exact && bv.gr && !commitments_hold(tr, b.gr, inf, ev))
            v.commitments_ok = false;
        v.backends.push_back(std::move(bv));
    }
    if (local) {
        auto [checked, violation] = check_local(tr, w, subject.options());
        v.local_positions = checked;
        v.local_violation = violation;
    }
    v.agreement = v.agreement && !v.local_violation && v.commitments_ok;
    return v;
}

Verdict crosscheck(const Formula& f, const LassoWord& w, std::span<const BackendConfig> configs)
{
    return crosscheck(Subject(f, configs), w);
}

// ---------------------------------------------------------------------------
// Harness

std::uint64_t case_seed(std::uint64_t seed, std::size_t index)
{
    return splitmix64(seed * 0x100000001b3ULL + index);
}

namespace {

struct CaseResult {
    bool resource_skip = false;
    bool accepted = false;
    bool disagreement = false;
    bool local_violation = false;
    std::size_t local_checks = 0;
    std::optional<FailingCase> failure;
};

CaseResult run_case(const DifftestConfig& cfg, std::size_t index, const std::vector<BackendConfig>& configs)
{
    CaseResult r;
    auto s = case_seed(cfg.seed, index);
    auto f = random_formula(s, cfg.max_size, cfg.num_props);
    auto w = random_lasso(s, cfg.max_prefix, cfg.max_period, cfg.num_props);
    BuildOptions base;
    base.state_cap = cfg.state_cap;
    base.successor_hook = cfg.successor_hook;
    auto fail = [&](std::string reason) {
        return FailingCase{index, s, f.to_string(), lasso_to_string(w, f.props), std::move(reason)};
    };
    try {
        Subject subject(f, configs, base);
        auto v = crosscheck(subject, w, cfg.local);
        r.accepted = v.oracle;
        r.local_checks = v.local_positions;
        r.local_violation = v.local_violation.has_value();
        r.disagreement = !v.agreement;
        if (r.disagreement)
            r.failure = fail(v.describe());
    } catch (const ResourceLimit&) {
        r.resource_skip = true;
    } catch (const std::exception& e) {
        // A broken construction may also surface as an internal error.
        r.disagreement = true;
        r.failure = fail(std::string("internal error: ") + e.what());
    }
    return r;
}

void accumulate(DifftestSummary& sum, CaseResult&& r)
{
    ++sum.cases;
    sum.resource_skips += r.resource_skip;
    sum.accepted += r.accepted;
    sum.disagreements += r.disagreement;
    sum.local_violations += r.local_violation;
    sum.local_checks += r.local_checks;
    if (r.failure)
        sum.failures.push_back(std::move(*r.failure));
}

} // namespace

DifftestSummary run_difftest_serial(const DifftestConfig& cfg)
{
    const auto configs = all_backend_configs();
    DifftestSummary sum;
    for (std::size_t i = 0; i < cfg.cases; ++i)
        accumulate(sum, run_case(cfg, i, configs));
    return sum;
}

DifftestSummary run_difftest(const DifftestConfig& cfg, int threads)
{
    const auto configs = all_backend_configs();
    std::vector<CaseResult> results(cfg.cases);
    const auto n = static_cast<std::int64_t>(cfg.cases);
#ifdef _OPENMP
    if (threads <= 0)
        threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
#endif
    for (std::int64_t i = 0; i < n; ++i)
        results[static_cast<std::size_t>(i)] = run_case(cfg, static_cast<std::size_t>(i), configs);
    (void)threads;

    DifftestSummary sum;
    for (auto& r : results)
        accumulate(sum, std::move(r));
    return sum;
}

} // namespace fgdet
