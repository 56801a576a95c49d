#include "fgdet/acceptance.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

namespace fgdet {

// ---------------------------------------------------------------------------
// StateSet

StateSet StateSet::of(std::size_t universe, std::span<const StateId> states)
{
    StateSet s(universe);
    for (auto q : states)
        s.insert(q);
    return s;
}

bool StateSet::empty() const
{
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t StateSet::size() const
{
    std::size_t n = 0;
    for (auto w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool StateSet::subset_of(const StateSet& o) const
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        if ((words_[i] & ~o.words_[i]) != 0)
            return false;
    return true;
}

bool StateSet::intersects(const StateSet& o) const
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        if ((words_[i] & o.words_[i]) != 0)
            return true;
    return false;
}

bool StateSet::intersects(std::span<const StateId> states) const
{
    return std::any_of(states.begin(), states.end(), [this](StateId q) { return contains(q); });
}

StateSet StateSet::operator-(const StateSet& o) const
{
    StateSet out = *this;
    for (std::size_t i = 0; i < words_.size(); ++i)
        out.words_[i] &= ~o.words_[i];
    return out;
}

std::vector<StateId> StateSet::elements() const
{
    std::vector<StateId> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        auto w = words_[i];
        while (w != 0) {
            out.push_back(static_cast<StateId>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
            w &= w - 1;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Judgments

bool holds_under(const Translation& tr, const NnfFormula& psi, Letter alpha, CommitmentSet commitment)
{
    return tr.literal_view(psi).eval(tr.true_literals(alpha) | tr.next_atoms(commitment));
}

bool state_holds_under(const Translation& tr, const PosBool& chi, Letter alpha, CommitmentSet commitment)
{
    return chi.eval(tr.true_literals(alpha) | tr.next_atoms(commitment));
}

bool state_obligations_hold(const Automaton& aut, StateId q, CommitmentSet commitment)
{
    // Members share the residue, which only mentions X-atoms.
    return aut.state(q).residue.eval(aut.translation().next_atoms(commitment));
}

bool operand_holds(const Automaton& aut, StateId q, std::size_t t, CommitmentSet commitment)
{
    const auto& tr = aut.translation();
    const auto& view = tr.argument_view(t);
    auto committed = tr.next_atoms(commitment);
    const auto& members = aut.state(q).members;
    auto check = [&](const Member& m) { return view.eval(tr.true_literals(m.letter) | committed); };
    if (tr.index().is_f(t))
        return std::any_of(members.begin(), members.end(), check);
    return std::all_of(members.begin(), members.end(), check);
}

namespace {

void require_enumerable(const Translation& tr)
{
    if (tr.index().size() > 30)
        throw ResourceLimit("too many temporal subformulas to enumerate commitment sets");
}

StateSet non_marker_states(const Automaton& aut)
{
    StateSet all(aut.num_states());
    for (StateId q = 0; q < aut.num_states(); ++q)
        if (!aut.state(q).is_marker())
            all.insert(q);
    return all;
}

} // namespace

// ---------------------------------------------------------------------------
// Muller

bool muller_accepting(const Automaton& aut, std::span<const StateId> m, CommitmentSet commitment)
{
    const auto& idx = aut.translation().index();
    for (auto q : m)
        if (!state_obligations_hold(aut, q, commitment))
            return false;
    for (std::size_t t = 0; t < idx.size(); ++t) {
        if (!((commitment >> t) & 1U))
            continue;
        // operand_holds already quantifies over member letters per operator
        auto witness = [&](StateId q) { return operand_holds(aut, q, t, commitment); };
        bool ok = idx.is_f(t) ? std::any_of(m.begin(), m.end(), witness) : std::all_of(m.begin(), m.end(), witness);
        if (!ok)
            return false;
    }
    return true;
}

bool muller_accepting(const Automaton& aut, std::span<const StateId> m)
{
    require_enumerable(aut.translation());
    auto n = aut.translation().index().size();
    for (CommitmentSet i = 0; i < (CommitmentSet{1} << n); ++i)
        if (muller_accepting(aut, m, i))
            return true;
    return false;
}

std::vector<std::vector<StateId>> muller_condition(const Automaton& aut, std::size_t cap)
{
    auto candidates = non_marker_states(aut).elements();
    if (candidates.size() > cap)
        throw ResourceLimit("Muller condition enumeration is limited to " + std::to_string(cap) + " states");
    std::vector<std::vector<StateId>> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << candidates.size()); ++mask) {
        std::vector<StateId> m;
        for (std::size_t k = 0; k < candidates.size(); ++k)
            if ((mask >> k) & 1U)
                m.push_back(candidates[k]);
        if (muller_accepting(aut, m))
            out.push_back(std::move(m));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generalized Rabin

GrCondition gen_rabin_raw(const Automaton& aut)
{
    const auto& tr = aut.translation();
    const auto& idx = tr.index();
    require_enumerable(tr);
    const auto n = aut.num_states();
    const auto all = non_marker_states(aut);

    GrCondition gr;
    gr.num_states = n;
    for (CommitmentSet i = 0; i < (CommitmentSet{1} << idx.size()); ++i) {
        GrDisjunct d;
        d.commitment = i;
        d.fin = StateSet(n);
        for (auto q : all.elements()) {
            bool safe = state_obligations_hold(aut, q, i);
            for (std::size_t t = 0; t < idx.size() && safe; ++t)
                if (((i >> t) & 1U) && !idx.is_f(t))
                    safe = operand_holds(aut, q, t, i);
            if (!safe)
                d.fin.insert(q);
        }
        if (all.subset_of(d.fin))
            continue;
        bool vacuous = false;
        for (std::size_t t = 0; t < idx.size() && !vacuous; ++t) {
            if (!((i >> t) & 1U) || !idx.is_f(t))
                continue;
            StateSet inf(n);
            for (auto q : all.elements())
                if (operand_holds(aut, q, t, i))
                    inf.insert(q);
            vacuous = inf.empty();
            d.infs.push_back(std::move(inf));
        }
        if (!vacuous)
            gr.disjuncts.push_back(std::move(d));
    }
    return gr;
}

bool implies(const GrDisjunct& d, const GrDisjunct& e)
{
    if (!e.fin.subset_of(d.fin))
        return false;
    return std::all_of(e.infs.begin(), e.infs.end(), [&](const StateSet& target) {
        return std::any_of(d.infs.begin(), d.infs.end(), [&](const StateSet& s) { return s.subset_of(target); });
    });
}

GrCondition simplify(GrCondition gr, const Automaton& aut)
{
    const auto all = non_marker_states(aut);

    // (F1, I1) & (F2, I2) with I1 a subset of I2 is (F1 u F2, I1); Fin parts are
    // already merged, so only the redundant Inf sets go.
    for (auto& d : gr.disjuncts) {
        std::vector<StateSet> kept;
        for (std::size_t k = 0; k < d.infs.size(); ++k) {
            const auto& s = d.infs[k];
            if (all.subset_of(s))
                continue;
            bool redundant = false;
            for (std::size_t j = 0; j < d.infs.size() && !redundant; ++j) {
                if (j == k || !d.infs[j].subset_of(s))
                    continue;
                // strictly smaller, or an equal copy earlier in the list
                redundant = !(s.subset_of(d.infs[j])) || j < k;
            }
            if (!redundant)
                kept.push_back(s);
        }
        d.infs = std::move(kept);
    }

    // Drop disjuncts that imply another one; of mutually implying disjuncts
    // the one with the earliest (hence smallest) commitment survives.
    std::vector<GrDisjunct> out;
    const auto& ds = gr.disjuncts;
    for (std::size_t k = 0; k < ds.size(); ++k) {
        bool drop = false;
        for (std::size_t j = 0; j < ds.size() && !drop; ++j) {
            if (j == k || !implies(ds[k], ds[j]))
                continue;
            drop = !implies(ds[j], ds[k]) || j < k;
        }
        if (!drop)
            out.push_back(ds[k]);
    }
    gr.disjuncts = std::move(out);
    return gr;
}

GrCondition gen_rabin(const Automaton& aut) { return simplify(gen_rabin_raw(aut), aut); }

std::uint64_t gr_factor(const GrCondition& gr)
{
    std::uint64_t f = 1;
    for (const auto& d : gr.disjuncts)
        f *= std::max<std::uint64_t>(1, d.infs.size());
    return f;
}

bool evaluate_gr(const GrCondition& gr, std::span<const StateId> inf)
{
    return std::any_of(gr.disjuncts.begin(), gr.disjuncts.end(), [&](const GrDisjunct& d) {
        if (d.fin.intersects(inf))
            return false;
        return std::all_of(d.infs.begin(), d.infs.end(), [&](const StateSet& s) { return s.intersects(inf); });
    });
}

bool evaluate_rabin(std::span<const RabinPair> pairs, std::span<const StateId> inf)
{
    return std::any_of(pairs.begin(), pairs.end(),
                       [&](const RabinPair& p) { return !p.fin.intersects(inf) && p.inf.intersects(inf); });
}

// ---------------------------------------------------------------------------
// Degeneralization

std::size_t RabinAutomaton::counter(StateId p, std::size_t d) const
{
    return static_cast<std::size_t>((states_[p].counters / stride_[d]) % radix_[d]);
}

RabinAutomaton degeneralize(const Automaton& aut, const GrCondition& gr, std::size_t state_cap)
{
    RabinAutomaton r;
    const auto letters = aut.num_letters();
    r.num_letters_ = letters;
    r.factor_ = gr_factor(gr);
    r.bound_ = r.factor_ * aut.num_states();

    std::uint64_t stride = 1;
    for (const auto& d : gr.disjuncts) {
        auto k = std::max<std::uint64_t>(1, d.infs.size());
        r.radix_.push_back(k);
        r.stride_.push_back(stride);
        stride *= k;
    }

    // Counter j of disjunct d moves to j+1 (mod k) when leaving a state of infs[j].
    auto advance = [&](StateId q, std::uint64_t counters) {
        std::uint64_t out = 0;
        for (std::size_t d = 0; d < gr.disjuncts.size(); ++d) {
            auto k = r.radix_[d];
            auto j = (counters / r.stride_[d]) % k;
            if (k >= 2 && gr.disjuncts[d].infs[j].contains(q))
                j = (j + 1) % k;
            out += j * r.stride_[d];
        }
        return out;
    };

    std::unordered_map<std::uint64_t, StateId> ids;
    std::deque<StateId> queue;
    auto intern = [&](StateId q, std::uint64_t counters) {
        auto key = static_cast<std::uint64_t>(q) * r.factor_ + counters;
        auto [it, fresh] = ids.emplace(key, static_cast<StateId>(r.states_.size()));
        if (fresh) {
            if (r.states_.size() >= state_cap)
                throw ResourceLimit("Rabin product exceeds the state cap of " + std::to_string(state_cap));
            r.states_.push_back({q, counters});
            r.delta_.resize(r.delta_.size() + letters, 0);
            queue.push_back(it->second);
        }
        return it->second;
    };
    intern(aut.initial(), 0);
    while (!queue.empty()) {
        auto p = queue.front();
        queue.pop_front();
        auto [q, counters] = r.states_[p];
        auto next_counters = advance(q, counters);
        for (Letter a = 0; a < letters; ++a) {
            auto target = intern(aut.step(q, a), next_counters);
            r.delta_[static_cast<std::size_t>(p) * letters + a] = target;
        }
    }

    const auto n = r.states_.size();
    for (std::size_t d = 0; d < gr.disjuncts.size(); ++d) {
        const auto& dj = gr.disjuncts[d];
        RabinPair pair{StateSet(n), StateSet(n)};
        for (StateId p = 0; p < n; ++p) {
            auto q = r.states_[p].base;
            if (aut.state(q).is_marker())
                continue;
            if (dj.fin.contains(q))
                pair.fin.insert(p);
            bool in_inf = false;
            if (dj.infs.empty())
                in_inf = true;
            else if (dj.infs.size() == 1)
                in_inf = dj.infs[0].contains(q);
            else
                in_inf = r.counter(p, d) == dj.infs.size() - 1 && dj.infs.back().contains(q);
            if (in_inf)
                pair.inf.insert(p);
        }
        r.pairs_.push_back(std::move(pair));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Language comparison

namespace {

using Graph = std::vector<std::vector<StateId>>;

Graph successor_graph(const Automaton& aut)
{
    Graph g(aut.num_states());
    for (StateId q = 0; q < aut.num_states(); ++q) {
        auto& out = g[q];
        for (Letter a = 0; a < aut.num_letters(); ++a)
            out.push_back(aut.step(q, a));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return g;
}

// Non-trivial SCCs of the subgraph induced by `allowed` (iterative Tarjan).
std::vector<StateSet> sccs(const Graph& g, const StateSet& allowed)
{
    const auto n = g.size();
    std::vector<std::size_t> index(n, SIZE_MAX);
    std::vector<std::size_t> low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<StateId> stack;
    std::vector<StateSet> out;
    std::size_t counter = 0;

    struct Frame {
        StateId v;
        std::size_t edge;
    };
    for (auto root : allowed.elements()) {
        if (index[root] != SIZE_MAX)
            continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& f = call.back();
            const auto& succ = g[f.v];
            if (f.edge < succ.size()) {
                auto w = succ[f.edge++];
                if (!allowed.contains(w))
                    continue;
                if (index[w] == SIZE_MAX) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            auto v = f.v;
            call.pop_back();
            if (!call.empty())
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] != index[v])
                continue;
            StateSet comp(n);
            std::size_t size = 0;
            StateId w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.insert(w);
                ++size;
            } while (w != v);
            bool nontrivial = size > 1 || std::binary_search(g[v].begin(), g[v].end(), v);
            if (nontrivial)
                out.push_back(std::move(comp));
        }
    }
    return out;
}

struct CycleSearch {
    const Graph& g;
    const GrDisjunct& want;
    const GrCondition& negated;

    std::optional<StateSet> search(const StateSet& allowed) const
    {
        for (const auto& s : sccs(g, allowed))
            if (auto found = within(s))
                return found;
        return std::nullopt;
    }

    std::optional<StateSet> within(const StateSet& s) const
    {
        for (const auto& inf : want.infs)
            if (!inf.intersects(s))
                return std::nullopt;
        for (const auto& e : negated.disjuncts) {
            if (e.fin.intersects(s))
                continue;
            bool all_hit = std::all_of(e.infs.begin(), e.infs.end(), [&](const StateSet& x) { return x.intersects(s); });
            if (!all_hit)
                continue;
            // Every strongly connected subset also avoids e.fin, so it has to
            // miss one of e's Inf sets.
            for (const auto& x : e.infs)
                if (auto found = search(s - x))
                    return found;
            return std::nullopt;
        }
        return s;
    }
};

// Copies `gr` with every set pulled back along `proj` (reference state -> candidate state).
GrCondition pull_back(const GrCondition& gr, const std::vector<StateId>& proj)
{
    GrCondition out;
    out.num_states = proj.size();
    for (const auto& d : gr.disjuncts) {
        GrDisjunct e;
        e.commitment = d.commitment;
        e.fin = StateSet(proj.size());
        for (StateId q = 0; q < proj.size(); ++q)
            if (d.fin.contains(proj[q]))
                e.fin.insert(q);
        for (const auto& s : d.infs) {
            StateSet t(proj.size());
            for (StateId q = 0; q < proj.size(); ++q)
                if (s.contains(proj[q]))
                    t.insert(q);
            e.infs.push_back(std::move(t));
        }
        out.disjuncts.push_back(std::move(e));
    }
    return out;
}

} // namespace

std::optional<std::vector<StateId>> find_separating_cycle(const Automaton& aut, const GrDisjunct& d,
                                                          const GrCondition& negated)
{
    auto g = successor_graph(aut);
    StateSet allowed = non_marker_states(aut) - d.fin;
    CycleSearch cs{g, d, negated};
    if (auto found = cs.search(allowed))
        return found->elements();
    return std::nullopt;
}

bool language_equivalent(const Automaton& reference, const Automaton& cand)
{
    // Project reference states onto candidate states through their members.
    std::map<std::pair<PosBool, Letter>, StateId> where;
    for (StateId q = 0; q < cand.num_states(); ++q)
        for (const auto& m : cand.state(q).members)
            where.emplace(std::make_pair(cand.chi(m.chi), m.letter), q);
    std::vector<StateId> proj(reference.num_states(), cand.initial());
    for (StateId q = 0; q < reference.num_states(); ++q) {
        const auto& s = reference.state(q);
        if (s.is_marker())
            continue;
        auto it = where.find({reference.chi(s.members.front().chi), s.members.front().letter});
        if (it == where.end())
            return false;
        proj[q] = it->second;
    }

    auto ref_gr = gen_rabin(reference);
    auto cand_gr = pull_back(gen_rabin(cand), proj);
    for (const auto& d : ref_gr.disjuncts)
        if (find_separating_cycle(reference, d, cand_gr))
            return false;
    for (const auto& d : cand_gr.disjuncts)
        if (find_separating_cycle(reference, d, ref_gr))
            return false;
    return true;
}

} // namespace fgdet
