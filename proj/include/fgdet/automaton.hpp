#pragma once

#include "fgdet/formula.hpp"
#include "fgdet/posbool.hpp"
#include "fgdet/word.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgdet {

using StateId = std::uint32_t;

/// Bit t set iff temporal subformula t is in the set.
using TemporalMask = std::uint64_t;

class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything derived from the formula alone: temporal index, closure, the
/// unfold of every temporal subformula, and the literal views used by the
/// acceptance judgments. Shared by all automata built for the formula.
class Translation {
public:
    explicit Translation(Formula f);

    const Formula& formula() const { return formula_; }
    const PropList& props() const { return formula_.props; }
    const TemporalIndex& index() const { return index_; }
    const Closure& closure() const { return closure_; }
    std::size_t num_props() const { return formula_.props.size(); }
    std::size_t num_letters() const { return std::size_t{1} << num_props(); }

    /// U(phi).
    const PosBool& initial_function() const { return initial_; }
    /// U(psi) for temporal subformula t.
    const PosBool& unfold_of(std::size_t t) const { return unfolds_[t]; }

    /// The literals made true by a letter: a for a in alpha, !a otherwise.
    AtomSet true_literals(Letter alpha) const;
    /// The complementary literals.
    AtomSet false_literals(Letter alpha) const;

    /// chi[alpha -> tt, Ap \ alpha -> ff]; a function over X-atoms only.
    PosBool residue(const PosBool& chi, Letter alpha) const;
    /// U(next(r)) for a residue r over X-atoms.
    PosBool unfold_next(const PosBool& residue) const;
    /// succ(chi, alpha).
    PosBool successor(const PosBool& chi, Letter alpha) const { return unfold_next(residue(chi, alpha)); }

    /// View of a formula with its maximal temporal subformulas t replaced by the
    /// atom next(t). `holds_under` judgments are evaluations of this view.
    PosBool literal_view(const NnfFormula& psi) const;
    /// literal_view of the operand of temporal subformula t.
    const PosBool& argument_view(std::size_t t) const { return argument_views_[t]; }

    /// Temporal subformulas reachable from t through operands (including t).
    TemporalMask reach_of(std::size_t t) const { return reach_[t]; }
    /// Union of reach_of over the X-atoms a function mentions.
    TemporalMask reach(const PosBool& f) const;
    /// The X-atoms of a commitment set.
    AtomSet next_atoms(TemporalMask mask) const { return closure_.next_atoms_of(mask); }

    std::string atom_name(AtomId x) const;
    std::string render(const PosBool& f) const;

private:
    Formula formula_;
    TemporalIndex index_;
    Closure closure_;
    PosBool initial_;
    std::vector<PosBool> unfolds_;
    std::vector<PosBool> argument_views_;
    std::vector<TemporalMask> reach_;
};

/// How letters are grouped inside one logical state.
enum class MergeRegime {
    None,    ///< one state per letter
    Residue, ///< letters with equal residue chi[alpha] share a state
    Refined, ///< equal residue and equal operand residues on the reachable obligations
};

std::string to_string(MergeRegime r);

struct BuildOptions {
    bool merge_letters = true;
    bool bisim_collapse = false;
    /// Check merged or collapsed automata against the letter-per-state
    /// automaton and fall back to the refined regime on a mismatch.
    bool verify_merge = true;
    std::size_t state_cap = 1'000'000;
    /// Replaces succ(chi, alpha) when set. Fault injection for the test harness.
    std::function<PosBool(const Translation&, const PosBool&, Letter)> successor_hook;
};

/// A concrete pair (chi, alpha) represented by an automaton state.
struct Member {
    std::uint32_t chi;
    Letter letter;

    friend auto operator<=>(const Member&, const Member&) = default;
};

struct AutState {
    /// Empty exactly for the initial marker i.
    std::vector<Member> members;
    /// Common residue of all members (unused for the marker).
    PosBool residue;

    bool is_marker() const { return members.empty(); }
};

struct RunProfile {
    /// s_0 = initial, s_{n+1} = delta(s_n, w[n]), up to and including the
    /// first repeated (state, period index) configuration.
    std::vector<StateId> states;
    std::size_t loop_start = 0;
    /// States visited infinitely often, sorted.
    std::vector<StateId> inf;
};

/// Runs a deterministic complete automaton given as a row-major transition
/// table on a lasso word.
RunProfile run_lasso(std::span<const StateId> delta, std::size_t num_letters, StateId initial, const LassoWord& w);

class Automaton {
public:
    Automaton() = default;

    const Translation& translation() const { return *tr_; }
    std::shared_ptr<const Translation> translation_ptr() const { return tr_; }
    const PropList& props() const { return tr_->props(); }
    const BuildOptions& options() const { return opts_; }
    MergeRegime regime() const { return regime_; }
    /// True when residue merging failed verification and the refined regime was used.
    bool merge_fallback() const { return fallback_; }
    bool collapsed() const { return collapsed_; }

    std::size_t num_states() const { return states_.size(); }
    std::size_t num_letters() const { return tr_->num_letters(); }
    StateId initial() const { return initial_; }
    /// Whether the initial state is the bare marker i (never visited twice).
    bool has_marker() const { return states_[initial_].is_marker(); }

    const AutState& state(StateId q) const { return states_[q]; }
    StateId step(StateId q, Letter a) const { return delta_[static_cast<std::size_t>(q) * num_letters() + a]; }
    std::span<const StateId> transitions() const { return delta_; }

    /// Distinct logical components among reachable states.
    const std::vector<PosBool>& chis() const { return chis_; }
    const PosBool& chi(std::uint32_t id) const { return chis_[id]; }

    /// Letters of the members with the given logical component.
    std::vector<Letter> letter_class(StateId q) const;
    /// Human-readable state description.
    std::string describe(StateId q) const;

    RunProfile run(const LassoWord& w) const { return run_lasso(delta_, num_letters(), initial_, w); }

private:
    friend class AutomatonBuilder;
    friend Automaton bisim_collapse(const Automaton& aut);
    friend Automaton build(std::shared_ptr<const Translation> tr, const BuildOptions& opts);

    std::shared_ptr<const Translation> tr_;
    BuildOptions opts_;
    MergeRegime regime_ = MergeRegime::None;
    bool fallback_ = false;
    bool collapsed_ = false;
    std::vector<PosBool> chis_;
    std::vector<AutState> states_;
    std::vector<StateId> delta_;
    StateId initial_ = 0;
};

/// succ(chi, alpha) for the formula's translation.
PosBool successor(const Translation& tr, const PosBool& chi, Letter alpha);

/// Builds the reachable automaton with a fixed letter regime, no collapse and
/// no verification.
Automaton build_with_regime(std::shared_ptr<const Translation> tr, MergeRegime regime, const BuildOptions& opts);

/// Builds the reachable automaton per the options: letter merging (verified),
/// then optional bisimulation collapse (verified).
Automaton build(std::shared_ptr<const Translation> tr, const BuildOptions& opts = {});
Automaton build(const Formula& f, const BuildOptions& opts = {});

/// Quotient merging states with equal residues and equal operand residues on
/// their reachable obligations, refined to a bisimulation; the initial marker
/// joins a block with identical outgoing transitions when one exists.
Automaton bisim_collapse(const Automaton& aut);

} // namespace fgdet
