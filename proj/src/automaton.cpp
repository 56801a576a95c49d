#include "fgdet/automaton.hpp"

#include "fgdet/acceptance.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace fgdet {

// ---------------------------------------------------------------------------
// Translation

Translation::Translation(Formula f) : formula_(std::move(f)), index_(formula_.nnf)
{
    if (formula_.props.size() > kMaxProps)
        throw ResourceLimit("at most " + std::to_string(kMaxProps) + " atomic propositions are supported");
    if (index_.size() > 64)
        throw ResourceLimit("at most 64 temporal subformulas are supported");
    closure_ = Closure(formula_.props.size(), index_.size());
    initial_ = unfold(formula_.nnf, index_, closure_);

    unfolds_.reserve(index_.size());
    argument_views_.reserve(index_.size());
    reach_.reserve(index_.size());
    for (std::size_t t = 0; t < index_.size(); ++t) {
        unfolds_.push_back(unfold(index_.at(t), index_, closure_));
        argument_views_.push_back(literal_view(index_.at(t).arg()));
        // Operand obligations have smaller ids, so their reach is final.
        TemporalMask r = TemporalMask{1} << t;
        argument_views_.back().support().for_each([&](AtomId x) {
            if (closure_.kind(x) == Closure::Kind::Next)
                r |= reach_[closure_.payload(x)];
        });
        reach_.push_back(r);
    }
}

AtomSet Translation::true_literals(Letter alpha) const
{
    AtomSet s;
    for (std::size_t a = 0; a < num_props(); ++a)
        s.insert(((alpha >> a) & 1U) ? closure_.prop(a) : closure_.neg_prop(a));
    return s;
}

AtomSet Translation::false_literals(Letter alpha) const
{
    AtomSet s;
    for (std::size_t a = 0; a < num_props(); ++a)
        s.insert(((alpha >> a) & 1U) ? closure_.neg_prop(a) : closure_.prop(a));
    return s;
}

PosBool Translation::residue(const PosBool& chi, Letter alpha) const
{
    return chi.substitute(true_literals(alpha), false_literals(alpha));
}

PosBool Translation::unfold_next(const PosBool& residue) const
{
    // next() turns each minimal model {X psi_1, ..., X psi_k} into the
    // conjunction psi_1 & ... & psi_k; U distributes over & and |.
    auto out = PosBool::ff();
    for (const auto& model : residue.models()) {
        auto term = PosBool::tt();
        model.for_each([&](AtomId x) { term = term & unfolds_[closure_.payload(x)]; });
        out = out | term;
        if (out.is_tt())
            break;
    }
    return out;
}

PosBool Translation::literal_view(const NnfFormula& psi) const
{
    switch (psi.op()) {
    case NnfOp::True:
        return PosBool::tt();
    case NnfOp::False:
        return PosBool::ff();
    case NnfOp::Atom:
        return PosBool::atom(closure_.prop(psi.atom_index()));
    case NnfOp::NegAtom:
        return PosBool::atom(closure_.neg_prop(psi.atom_index()));
    case NnfOp::And:
        return literal_view(psi.lhs()) & literal_view(psi.rhs());
    case NnfOp::Or:
        return literal_view(psi.lhs()) | literal_view(psi.rhs());
    case NnfOp::F:
    case NnfOp::G:
        return PosBool::atom(closure_.next(index_.id_of(psi)));
    }
    return PosBool::ff();
}

TemporalMask Translation::reach(const PosBool& f) const
{
    TemporalMask r = 0;
    f.support().for_each([&](AtomId x) {
        if (closure_.kind(x) == Closure::Kind::Next)
            r |= reach_[closure_.payload(x)];
    });
    return r;
}

std::string Translation::atom_name(AtomId x) const { return fgdet::atom_name(x, closure_, index_, props()); }

std::string Translation::render(const PosBool& f) const
{
    return f.to_string([this](AtomId x) { return atom_name(x); });
}

std::string to_string(MergeRegime r)
{
    switch (r) {
    case MergeRegime::None:
        return "none";
    case MergeRegime::Residue:
        return "residue";
    case MergeRegime::Refined:
        return "refined";
    }
    return {};
}

PosBool successor(const Translation& tr, const PosBool& chi, Letter alpha) { return tr.successor(chi, alpha); }

// ---------------------------------------------------------------------------
// Runs

RunProfile run_lasso(std::span<const StateId> delta, std::size_t num_letters, StateId initial, const LassoWord& w)
{
    RunProfile prof;
    // (state, period index) -> step at which it was first seen
    std::unordered_map<std::uint64_t, std::size_t> seen;
    StateId q = initial;
    for (std::size_t n = 0;; ++n) {
        if (n >= w.prefix.size()) {
            auto key = (static_cast<std::uint64_t>(q) << 32) | ((n - w.prefix.size()) % w.period.size());
            auto [it, fresh] = seen.emplace(key, n);
            if (!fresh) {
                prof.states.push_back(q);
                prof.loop_start = it->second;
                break;
            }
        }
        prof.states.push_back(q);
        q = delta[static_cast<std::size_t>(q) * num_letters + w.at(n)];
    }
    prof.inf.assign(prof.states.begin() + static_cast<std::ptrdiff_t>(prof.loop_start), prof.states.end() - 1);
    std::sort(prof.inf.begin(), prof.inf.end());
    prof.inf.erase(std::unique(prof.inf.begin(), prof.inf.end()), prof.inf.end());
    return prof;
}

// ---------------------------------------------------------------------------
// Automaton

std::vector<Letter> Automaton::letter_class(StateId q) const
{
    std::vector<Letter> out;
    for (const auto& m : states_[q].members)
        out.push_back(m.letter);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string Automaton::describe(StateId q) const
{
    const auto& s = states_[q];
    if (s.is_marker())
        return "i";
    // group letters by logical component
    std::map<std::uint32_t, std::vector<Letter>> by_chi;
    for (const auto& m : s.members)
        by_chi[m.chi].push_back(m.letter);
    std::string out;
    for (const auto& [chi, letters] : by_chi) {
        if (!out.empty())
            out += " ; ";
        out += "<" + tr_->render(chis_[chi]) + ", ";
        for (std::size_t i = 0; i < letters.size(); ++i) {
            if (i > 0)
                out += ' ';
            out += letter_to_string(letters[i], props());
        }
        out += ">";
    }
    if (q == initial_)
        out = "i ; " + out;
    return out;
}

class AutomatonBuilder {
public:
    AutomatonBuilder(std::shared_ptr<const Translation> tr, MergeRegime regime, const BuildOptions& opts)
        : tr_(*tr), regime_(regime)
    {
        aut_.tr_ = std::move(tr);
        aut_.opts_ = opts;
        aut_.regime_ = regime;
    }

    Automaton run()
    {
        const auto letters = tr_.num_letters();
        aut_.states_.push_back(AutState{});
        aut_.delta_.assign(letters, 0);
        aut_.initial_ = 0;

        auto init_chi = discover(tr_.initial_function());
        for (Letter a = 0; a < letters; ++a)
            aut_.delta_[a] = state_of_[init_chi][a];

        while (!queue_.empty()) {
            auto chi_id = queue_.front();
            queue_.pop_front();
            for (auto q : states_of_chi_[chi_id]) {
                Letter rep = aut_.states_[q].members.front().letter;
                auto succ = next_chi(aut_.chis_[chi_id], rep, aut_.states_[q].residue);
                auto succ_id = discover(succ);
                auto base = static_cast<std::size_t>(q) * letters;
                for (Letter b = 0; b < letters; ++b)
                    aut_.delta_[base + b] = state_of_[succ_id][b];
            }
        }
        return std::move(aut_);
    }

private:
    PosBool next_chi(const PosBool& chi, Letter rep, const PosBool& residue) const
    {
        if (aut_.opts_.successor_hook)
            return aut_.opts_.successor_hook(tr_, chi, rep);
        return tr_.unfold_next(residue);
    }

    using ClassKey = std::vector<PosBool>;

    ClassKey class_key(const PosBool& residue, Letter a) const
    {
        ClassKey key{residue};
        if (regime_ == MergeRegime::Refined) {
            auto reach = tr_.reach(residue);
            auto tl = tr_.true_literals(a);
            auto fl = tr_.false_literals(a);
            for (std::size_t t = 0; t < tr_.index().size(); ++t)
                if ((reach >> t) & 1U)
                    key.push_back(tr_.argument_view(t).substitute(tl, fl));
        }
        return key;
    }

    std::uint32_t discover(const PosBool& chi)
    {
        auto it = chi_ids_.find(chi);
        if (it != chi_ids_.end())
            return it->second;
        auto id = static_cast<std::uint32_t>(aut_.chis_.size());
        chi_ids_.emplace(chi, id);
        aut_.chis_.push_back(chi);

        const auto letters = tr_.num_letters();
        std::vector<StateId> row(letters);
        std::vector<StateId> created;
        std::map<ClassKey, StateId> classes;
        for (Letter a = 0; a < letters; ++a) {
            auto residue = tr_.residue(chi, a);
            StateId q;
            if (regime_ == MergeRegime::None) {
                q = new_state(residue);
                created.push_back(q);
            } else {
                auto key = class_key(residue, a);
                auto found = classes.find(key);
                if (found == classes.end()) {
                    q = new_state(residue);
                    created.push_back(q);
                    classes.emplace(std::move(key), q);
                } else {
                    q = found->second;
                }
            }
            aut_.states_[q].members.push_back(Member{id, a});
            row[a] = q;
        }
        state_of_.push_back(std::move(row));
        states_of_chi_.push_back(std::move(created));
        queue_.push_back(id);
        return id;
    }

    StateId new_state(PosBool residue)
    {
        if (aut_.states_.size() >= aut_.opts_.state_cap)
            throw ResourceLimit("automaton exceeds the state cap of " + std::to_string(aut_.opts_.state_cap));
        auto q = static_cast<StateId>(aut_.states_.size());
        aut_.states_.push_back(AutState{{}, std::move(residue)});
        aut_.delta_.resize(aut_.delta_.size() + tr_.num_letters(), 0);
        return q;
    }

    const Translation& tr_;
    MergeRegime regime_;
    Automaton aut_;
    std::unordered_map<PosBool, std::uint32_t, PosBoolHash> chi_ids_;
    std::vector<std::vector<StateId>> state_of_;      // chi id -> letter -> state
    std::vector<std::vector<StateId>> states_of_chi_; // chi id -> its states
    std::deque<std::uint32_t> queue_;
};

Automaton build_with_regime(std::shared_ptr<const Translation> tr, MergeRegime regime, const BuildOptions& opts)
{
    return AutomatonBuilder(std::move(tr), regime, opts).run();
}

Automaton bisim_collapse(const Automaton& aut)
{
    const auto& tr = aut.translation();
    const auto n = aut.num_states();
    const auto letters = aut.num_letters();

    // Initial partition: residue plus operand residues of the obligations the
    // residue can still reach. A state whose members disagree on the latter
    // gets a block of its own.
    std::vector<std::size_t> block(n, 0);
    {
        std::map<std::vector<PosBool>, std::size_t> labels;
        std::size_t next_block = 0;
        for (StateId q = 0; q < n; ++q) {
            const auto& s = aut.state(q);
            if (s.is_marker()) {
                block[q] = SIZE_MAX;
                continue;
            }
            auto reach = tr.reach(s.residue);
            std::vector<PosBool> label;
            bool uniform = true;
            for (std::size_t i = 0; i < s.members.size() && uniform; ++i) {
                auto a = s.members[i].letter;
                std::vector<PosBool> l{s.residue};
                auto tl = tr.true_literals(a);
                auto fl = tr.false_literals(a);
                for (std::size_t t = 0; t < tr.index().size(); ++t)
                    if ((reach >> t) & 1U)
                        l.push_back(tr.argument_view(t).substitute(tl, fl));
                if (i == 0)
                    label = std::move(l);
                else
                    uniform = label == l;
            }
            if (!uniform) {
                block[q] = next_block++;
                continue;
            }
            auto [it, fresh] = labels.emplace(std::move(label), next_block);
            if (fresh)
                ++next_block;
            block[q] = it->second;
        }
    }

    // Refine by successor blocks until stable.
    std::vector<StateId> live;
    for (StateId q = 0; q < n; ++q)
        if (!aut.state(q).is_marker())
            live.push_back(q);
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> sigs;
        std::vector<std::size_t> next(n, SIZE_MAX);
        for (auto q : live) {
            std::vector<std::size_t> sig{block[q]};
            for (Letter b = 0; b < letters; ++b)
                sig.push_back(block[aut.step(q, b)]);
            auto [it, fresh] = sigs.emplace(std::move(sig), sigs.size());
            next[q] = it->second;
        }
        std::size_t before = 0;
        {
            std::vector<std::size_t> distinct;
            for (auto q : live)
                distinct.push_back(block[q]);
            std::sort(distinct.begin(), distinct.end());
            before = static_cast<std::size_t>(std::unique(distinct.begin(), distinct.end()) - distinct.begin());
        }
        for (auto q : live)
            block[q] = next[q];
        if (sigs.size() == before)
            break;
    }

    // The marker has no incoming edges, so it may join any block whose
    // outgoing transitions it shares.
    StateId old_init = aut.initial();
    std::size_t init_block = block[old_init];
    if (aut.state(old_init).is_marker()) {
        std::vector<std::size_t> row;
        for (Letter b = 0; b < letters; ++b)
            row.push_back(block[aut.step(old_init, b)]);
        for (auto q : live) {
            bool same = true;
            for (Letter b = 0; b < letters && same; ++b)
                same = block[aut.step(q, b)] == row[b];
            if (same) {
                init_block = block[q];
                break;
            }
        }
        block[old_init] = init_block;
    }

    // Number blocks in BFS order from the initial block.
    std::map<std::size_t, StateId> new_id;
    std::vector<StateId> repr;
    std::deque<StateId> queue;
    auto visit = [&](StateId q) {
        auto [it, fresh] = new_id.emplace(block[q], static_cast<StateId>(repr.size()));
        if (fresh) {
            repr.push_back(q);
            queue.push_back(q);
        }
        return it->second;
    };
    visit(old_init);
    while (!queue.empty()) {
        auto q = queue.front();
        queue.pop_front();
        for (Letter b = 0; b < letters; ++b)
            visit(aut.step(q, b));
    }

    Automaton out;
    out.tr_ = aut.tr_;
    out.opts_ = aut.opts_;
    out.regime_ = aut.regime_;
    out.fallback_ = aut.fallback_;
    out.collapsed_ = true;
    out.chis_ = aut.chis_;
    out.initial_ = 0;
    out.states_.resize(repr.size());
    out.delta_.assign(repr.size() * letters, 0);
    for (StateId q = 0; q < n; ++q) {
        auto it = new_id.find(block[q]);
        if (it == new_id.end())
            continue; // unreachable after the marker merged away
        auto& s = out.states_[it->second];
        const auto& src = aut.state(q);
        s.members.insert(s.members.end(), src.members.begin(), src.members.end());
        if (!src.is_marker())
            s.residue = src.residue;
    }
    for (auto& s : out.states_)
        std::sort(s.members.begin(), s.members.end());
    for (StateId i = 0; i < repr.size(); ++i)
        for (Letter b = 0; b < letters; ++b)
            out.delta_[static_cast<std::size_t>(i) * letters + b] = new_id.at(block[aut.step(repr[i], b)]);
    return out;
}

Automaton build(std::shared_ptr<const Translation> tr, const BuildOptions& opts)
{
    auto regime = opts.merge_letters ? MergeRegime::Residue : MergeRegime::None;
    auto aut = build_with_regime(tr, regime, opts);
    if (opts.bisim_collapse)
        aut = bisim_collapse(aut);
    if (!opts.verify_merge || (!opts.merge_letters && !opts.bisim_collapse))
        return aut;

    auto reference = build_with_regime(tr, MergeRegime::None, opts);
    if (aut.num_states() == reference.num_states() || language_equivalent(reference, aut))
        return aut;

    aut = build_with_regime(tr, MergeRegime::Refined, opts);
    if (opts.bisim_collapse)
        aut = bisim_collapse(aut);
    aut.fallback_ = true;
    if (!language_equivalent(reference, aut))
        throw std::logic_error("refined letter merging changed the language of " + tr->formula().to_string());
    return aut;
}

Automaton build(const Formula& f, const BuildOptions& opts)
{
    return build(std::make_shared<const Translation>(f), opts);
}

} // namespace fgdet
