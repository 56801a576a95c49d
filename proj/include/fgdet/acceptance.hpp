#pragma once

#include "fgdet/automaton.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fgdet {

/// Dense set of automaton states.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

    static StateSet of(std::size_t universe, std::span<const StateId> states);

    std::size_t universe() const { return universe_; }
    void insert(StateId q) { words_[q >> 6] |= std::uint64_t{1} << (q & 63); }
    void erase(StateId q) { words_[q >> 6] &= ~(std::uint64_t{1} << (q & 63)); }
    bool contains(StateId q) const { return (words_[q >> 6] >> (q & 63)) & 1U; }
    bool empty() const;
    std::size_t size() const;
    bool subset_of(const StateSet& o) const;
    bool intersects(const StateSet& o) const;
    bool intersects(std::span<const StateId> states) const;
    StateSet operator-(const StateSet& o) const;
    std::vector<StateId> elements() const;

    friend bool operator==(const StateSet&, const StateSet&) = default;

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

/// I is a subset of the temporal subformulas, bit t set iff t in I.
using CommitmentSet = TemporalMask;

// ---------------------------------------------------------------------------
// Judgments

/// I |=_alpha psi: propositions of psi read from alpha, maximal temporal
/// subformulas true iff committed in I.
bool holds_under(const Translation& tr, const NnfFormula& psi, Letter alpha, CommitmentSet commitment);

/// XI |=_alpha chi: prop atoms per alpha, X-atoms true iff their formula is in I.
bool state_holds_under(const Translation& tr, const PosBool& chi, Letter alpha, CommitmentSet commitment);

/// Condition 1 on an automaton state (uniform over its members).
bool state_obligations_hold(const Automaton& aut, StateId q, CommitmentSet commitment);

/// Operand of temporal subformula t under I at state q. G operands must hold for
/// every member letter, F operands for some member letter.
bool operand_holds(const Automaton& aut, StateId q, std::size_t t, CommitmentSet commitment);

// ---------------------------------------------------------------------------
// Muller condition

/// Whether M (non-empty, no marker) is Muller accepting for I.
bool muller_accepting(const Automaton& aut, std::span<const StateId> m, CommitmentSet commitment);
/// Whether M is Muller accepting for some I.
bool muller_accepting(const Automaton& aut, std::span<const StateId> m);

/// All accepting sets; each sorted, listed in increasing bitmask order.
/// Throws ResourceLimit when more than `cap` non-marker states exist.
std::vector<std::vector<StateId>> muller_condition(const Automaton& aut, std::size_t cap = 16);

// ---------------------------------------------------------------------------
// Generalized Rabin condition

struct GrDisjunct {
    CommitmentSet commitment = 0;
    StateSet fin;
    /// One set per retained F-commitment; empty means the Inf component is Q.
    std::vector<StateSet> infs;
};

struct GrCondition {
    std::size_t num_states = 0;
    std::vector<GrDisjunct> disjuncts;
};

/// Per-commitment disjuncts before simplification, vacuous ones dropped.
GrCondition gen_rabin_raw(const Automaton& aut);
/// gen_rabin_raw followed by simplify.
GrCondition gen_rabin(const Automaton& aut);
GrCondition simplify(GrCondition gr, const Automaton& aut);

/// Whether satisfying `d` implies satisfying `e`.
bool implies(const GrDisjunct& d, const GrDisjunct& e);

std::uint64_t gr_factor(const GrCondition& gr);

bool evaluate_gr(const GrCondition& gr, std::span<const StateId> inf);

// ---------------------------------------------------------------------------
// Rabin automaton by degeneralization

struct RabinPair {
    StateSet fin;
    StateSet inf;
};

bool evaluate_rabin(std::span<const RabinPair> pairs, std::span<const StateId> inf);

class RabinAutomaton {
public:
    struct ProductState {
        StateId base;
        std::uint64_t counters; ///< mixed-radix encoding of all round-robin counters
    };

    std::size_t num_states() const { return states_.size(); }
    std::size_t num_letters() const { return num_letters_; }
    StateId initial() const { return 0; }
    const ProductState& state(StateId p) const { return states_[p]; }
    /// Counter of disjunct d (0-based), or 0 when the disjunct has none.
    std::size_t counter(StateId p, std::size_t d) const;
    StateId step(StateId p, Letter a) const { return delta_[static_cast<std::size_t>(p) * num_letters_ + a]; }
    std::span<const StateId> transitions() const { return delta_; }
    const std::vector<RabinPair>& pairs() const { return pairs_; }
    std::uint64_t factor() const { return factor_; }
    /// gr_factor * |Q|.
    std::uint64_t bound() const { return bound_; }

    RunProfile run(const LassoWord& w) const { return run_lasso(delta_, num_letters_, 0, w); }

private:
    friend RabinAutomaton degeneralize(const Automaton&, const GrCondition&, std::size_t);

    std::size_t num_letters_ = 0;
    std::vector<ProductState> states_;
    std::vector<StateId> delta_;
    std::vector<RabinPair> pairs_;
    std::vector<std::uint64_t> radix_; ///< per disjunct: counter range (1 = no counter)
    std::vector<std::uint64_t> stride_;
    std::uint64_t factor_ = 1;
    std::uint64_t bound_ = 0;
};

RabinAutomaton degeneralize(const Automaton& aut, const GrCondition& gr, std::size_t state_cap = 1'000'000);

// ---------------------------------------------------------------------------
// Language comparison

/// Searches the reachable graph of `aut` for a strongly connected set that
/// satisfies `d` and violates every disjunct of `negated`. Sets of `negated`
/// range over the states of `aut`.
std::optional<std::vector<StateId>> find_separating_cycle(const Automaton& aut, const GrDisjunct& d,
                                                          const GrCondition& negated);

/// Whether `cand` (a quotient of `reference` built for the same formula)
/// accepts the same language. Both are compared by their GR conditions.
bool language_equivalent(const Automaton& reference, const Automaton& cand);

} // namespace fgdet
