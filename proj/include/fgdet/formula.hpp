#pragma once

#include "fgdet/posbool.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fgdet {

/// Ordered list of atomic proposition names.
using PropList = std::vector<std::string>;

class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, UnsupportedOperator, UnknownAtom };

    ParseError(Kind kind, std::size_t position, const std::string& what)
        : std::runtime_error(what + " at offset " + std::to_string(position)),
          kind_(kind),
          position_(position)
    {
    }

    Kind kind() const { return kind_; }
    std::size_t position() const { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

// ---------------------------------------------------------------------------
// Source formulas: the input surface, with negation and implication anywhere.

enum class SourceOp : std::uint8_t { True, False, Atom, Not, And, Or, Implies, F, G };

struct SourceNode;
using SourcePtr = std::shared_ptr<const SourceNode>;

struct SourceNode {
    SourceOp op;
    std::size_t atom = 0;    ///< index into the proposition list for Atom
    std::size_t position = 0; ///< byte offset of the operator / atom in the input
    SourcePtr lhs;
    SourcePtr rhs;
};

struct SourceFormula {
    SourcePtr root;
    PropList props;

    std::string to_string() const;
};

/// Parses the ASCII formula grammar. Without `ap_hint` the proposition list is
/// the atoms in order of first occurrence.
///
/// Precedence from lowest to highest: `->` (right associative), `|`, `&`,
/// then the prefix operators `!`, `F`, `G`. `tt` and `ff` are constants.
SourceFormula parse(std::string_view text, const std::optional<PropList>& ap_hint = std::nullopt);

// ---------------------------------------------------------------------------
// Negation normal form.

enum class NnfOp : std::uint8_t { True, False, Atom, NegAtom, And, Or, F, G };

class NnfFormula {
public:
    struct Node {
        NnfOp op;
        std::uint32_t atom = 0;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
        std::string key;        ///< structural identity, prefix notation over atom indices
        std::size_t size = 1;   ///< number of syntax-tree nodes
    };
    using NodePtr = std::shared_ptr<const Node>;

    NnfFormula() = default;
    explicit NnfFormula(NodePtr node) : node_(std::move(node)) {}

    static NnfFormula tt();
    static NnfFormula ff();
    static NnfFormula atom(std::uint32_t a);
    static NnfFormula neg_atom(std::uint32_t a);
    static NnfFormula conj(const NnfFormula& l, const NnfFormula& r);
    static NnfFormula disj(const NnfFormula& l, const NnfFormula& r);
    static NnfFormula eventually(const NnfFormula& f);
    static NnfFormula always(const NnfFormula& f);

    NnfOp op() const { return node_->op; }
    std::uint32_t atom_index() const { return node_->atom; }
    NnfFormula lhs() const { return NnfFormula(node_->lhs); }
    NnfFormula rhs() const { return NnfFormula(node_->rhs); }
    /// Operand of F/G.
    NnfFormula arg() const { return NnfFormula(node_->lhs); }
    const std::string& key() const { return node_->key; }
    std::size_t size() const { return node_->size; }
    bool is_temporal() const { return op() == NnfOp::F || op() == NnfOp::G; }
    const Node* node() const { return node_.get(); }

    std::string to_string(const PropList& props) const;

    friend bool operator==(const NnfFormula& a, const NnfFormula& b) { return a.key() == b.key(); }

private:
    NodePtr node_;
};

NnfFormula to_nnf(const SourceFormula& f);

/// Formula in NNF together with the proposition list it ranges over.
struct Formula {
    NnfFormula nnf;
    PropList props;

    std::string to_string() const { return nnf.to_string(props); }
};

/// parse() followed by to_nnf().
Formula parse_formula(std::string_view text, const std::optional<PropList>& ap_hint = std::nullopt);

// ---------------------------------------------------------------------------
// Temporal subformulas and the closure.

/// The distinct F- and G-rooted subformulas of a formula. Ids follow a
/// leftmost-innermost (post-order) traversal, so every temporal formula gets a
/// larger id than its temporal subformulas.
class TemporalIndex {
public:
    TemporalIndex() = default;
    explicit TemporalIndex(const NnfFormula& f);

    std::size_t size() const { return formulas_.size(); }
    const NnfFormula& at(std::size_t id) const { return formulas_[id]; }
    const std::vector<NnfFormula>& formulas() const { return formulas_; }
    std::optional<std::size_t> find(const NnfFormula& f) const;
    std::size_t id_of(const NnfFormula& f) const;

    std::vector<std::size_t> f_ids() const;
    std::vector<std::size_t> g_ids() const;
    bool is_f(std::size_t id) const { return formulas_[id].op() == NnfOp::F; }

private:
    void visit(const NnfFormula& f);

    std::vector<NnfFormula> formulas_;
    std::unordered_map<std::string, std::size_t> ids_;
};

inline TemporalIndex temporal_subformulas(const NnfFormula& f) { return TemporalIndex(f); }

/// Atom numbering for the closure: props, then negated props, then X-atoms by
/// temporal id. This numbering is also the canonical atom order.
class Closure {
public:
    enum class Kind { Prop, NegProp, Next };

    Closure() = default;
    Closure(std::size_t num_props, std::size_t num_temporal);

    std::size_t num_props() const { return num_props_; }
    std::size_t num_temporal() const { return num_temporal_; }
    std::size_t size() const { return 2 * num_props_ + num_temporal_; }

    AtomId prop(std::size_t a) const { return static_cast<AtomId>(a); }
    AtomId neg_prop(std::size_t a) const { return static_cast<AtomId>(num_props_ + a); }
    AtomId next(std::size_t t) const { return static_cast<AtomId>(2 * num_props_ + t); }

    Kind kind(AtomId x) const;
    /// Proposition index for Prop/NegProp atoms, temporal id for Next atoms.
    std::size_t payload(AtomId x) const;

    /// All X-atoms.
    const AtomSet& next_atoms() const { return next_atoms_; }
    /// X-atoms of the given temporal ids (bit t of `mask`).
    AtomSet next_atoms_of(std::uint64_t mask) const;

private:
    std::size_t num_props_ = 0;
    std::size_t num_temporal_ = 0;
    AtomSet next_atoms_;
};

/// The one-step unfold, as a canonical function over the closure.
PosBool unfold(const NnfFormula& f, const TemporalIndex& idx, const Closure& closure);

/// Renders closure atoms, e.g. "a", "!a", "XFa".
std::string atom_name(AtomId x, const Closure& closure, const TemporalIndex& idx, const PropList& props);

} // namespace fgdet
