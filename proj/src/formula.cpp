#include "fgdet/formula.hpp"

#include <algorithm>
#include <cctype>

namespace fgdet {

// ---------------------------------------------------------------------------
// Lexer / parser

namespace {

enum class Tok { Ident, Not, And, Or, Implies, LParen, RParen, OpF, OpG, True, False, End };

struct Token {
    Tok kind;
    std::size_t pos;
    std::string text;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (ident_start(c)) {
            while (i < s.size() && ident_char(s[i]))
                ++i;
            std::string_view word = s.substr(start, i - start);
            if (word == "tt" || word == "true") {
                out.push_back({Tok::True, start, std::string(word)});
                continue;
            }
            if (word == "ff" || word == "false") {
                out.push_back({Tok::False, start, std::string(word)});
                continue;
            }
            bool operators_only = std::all_of(word.begin(), word.end(), [](char ch) {
                return ch == 'F' || ch == 'G' || ch == 'X' || ch == 'U' || ch == 'R' || ch == 'W';
            });
            if (!operators_only) {
                out.push_back({Tok::Ident, start, std::string(word)});
                continue;
            }
            // "GF" is read as G F.
            for (std::size_t k = 0; k < word.size(); ++k) {
                char op = word[k];
                if (op == 'F')
                    out.push_back({Tok::OpF, start + k, "F"});
                else if (op == 'G')
                    out.push_back({Tok::OpG, start + k, "G"});
                else
                    throw ParseError(ParseError::Kind::UnsupportedOperator, start + k,
                                     std::string("unsupported operator '") + op + "'");
            }
            continue;
        }
        switch (c) {
        case '!':
            out.push_back({Tok::Not, start, "!"});
            ++i;
            break;
        case '(':
            out.push_back({Tok::LParen, start, "("});
            ++i;
            break;
        case ')':
            out.push_back({Tok::RParen, start, ")"});
            ++i;
            break;
        case '&':
            ++i;
            if (i < s.size() && s[i] == '&')
                ++i;
            out.push_back({Tok::And, start, "&"});
            break;
        case '|':
            ++i;
            if (i < s.size() && s[i] == '|')
                ++i;
            out.push_back({Tok::Or, start, "|"});
            break;
        case '-':
            if (i + 1 < s.size() && s[i + 1] == '>') {
                out.push_back({Tok::Implies, start, "->"});
                i += 2;
                break;
            }
            throw ParseError(ParseError::Kind::Syntax, start, "expected '->'");
        default:
            throw ParseError(ParseError::Kind::Syntax, start, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::End, s.size(), ""});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, const std::optional<PropList>& hint)
        : toks_(std::move(toks)), fixed_props_(hint.has_value())
    {
        if (hint)
            props_ = *hint;
    }

    SourceFormula run()
    {
        auto root = implication();
        if (peek().kind != Tok::End)
            throw ParseError(ParseError::Kind::Syntax, peek().pos, "unexpected '" + peek().text + "'");
        return SourceFormula{std::move(root), std::move(props_)};
    }

private:
    const Token& peek() const { return toks_[cur_]; }
    const Token& take() { return toks_[cur_++]; }

    static SourcePtr make(SourceOp op, std::size_t pos, SourcePtr l = nullptr, SourcePtr r = nullptr)
    {
        return std::make_shared<const SourceNode>(SourceNode{op, 0, pos, std::move(l), std::move(r)});
    }

    SourcePtr implication()
    {
        auto lhs = disjunction();
        if (peek().kind == Tok::Implies) {
            auto pos = take().pos;
            auto rhs = implication();
            return make(SourceOp::Implies, pos, lhs, rhs);
        }
        return lhs;
    }

    SourcePtr disjunction()
    {
        auto lhs = conjunction();
        while (peek().kind == Tok::Or) {
            auto pos = take().pos;
            lhs = make(SourceOp::Or, pos, lhs, conjunction());
        }
        return lhs;
    }

    SourcePtr conjunction()
    {
        auto lhs = unary();
        while (peek().kind == Tok::And) {
            auto pos = take().pos;
            lhs = make(SourceOp::And, pos, lhs, unary());
        }
        return lhs;
    }

    SourcePtr unary()
    {
        const auto& t = peek();
        switch (t.kind) {
        case Tok::Not:
        case Tok::OpF:
        case Tok::OpG: {
            auto op = t.kind == Tok::Not ? SourceOp::Not : t.kind == Tok::OpF ? SourceOp::F : SourceOp::G;
            auto pos = take().pos;
            return make(op, pos, unary());
        }
        default:
            return primary();
        }
    }

    SourcePtr primary()
    {
        const auto& t = take();
        switch (t.kind) {
        case Tok::True:
            return make(SourceOp::True, t.pos);
        case Tok::False:
            return make(SourceOp::False, t.pos);
        case Tok::Ident: {
            auto node = SourceNode{SourceOp::Atom, lookup(t), t.pos, nullptr, nullptr};
            return std::make_shared<const SourceNode>(std::move(node));
        }
        case Tok::LParen: {
            auto inner = implication();
            if (peek().kind != Tok::RParen)
                throw ParseError(ParseError::Kind::Syntax, peek().pos, "expected ')'");
            take();
            return inner;
        }
        case Tok::End:
            throw ParseError(ParseError::Kind::Syntax, t.pos, "unexpected end of input");
        default:
            throw ParseError(ParseError::Kind::Syntax, t.pos, "unexpected '" + t.text + "'");
        }
    }

    std::size_t lookup(const Token& t)
    {
        auto it = std::find(props_.begin(), props_.end(), t.text);
        if (it != props_.end())
            return static_cast<std::size_t>(it - props_.begin());
        if (fixed_props_)
            throw ParseError(ParseError::Kind::UnknownAtom, t.pos, "unknown atomic proposition '" + t.text + "'");
        props_.push_back(t.text);
        return props_.size() - 1;
    }

    std::vector<Token> toks_;
    std::size_t cur_ = 0;
    PropList props_;
    bool fixed_props_;
};

std::string render_source(const SourceNode& n, const PropList& props, bool top)
{
    auto wrap = [top](std::string s) { return top ? s : "(" + s + ")"; };
    switch (n.op) {
    case SourceOp::True:
        return "tt";
    case SourceOp::False:
        return "ff";
    case SourceOp::Atom:
        return props[n.atom];
    case SourceOp::Not:
        return "!" + render_source(*n.lhs, props, false);
    case SourceOp::F:
        return "F " + render_source(*n.lhs, props, false);
    case SourceOp::G:
        return "G " + render_source(*n.lhs, props, false);
    case SourceOp::And:
        return wrap(render_source(*n.lhs, props, false) + " & " + render_source(*n.rhs, props, false));
    case SourceOp::Or:
        return wrap(render_source(*n.lhs, props, false) + " | " + render_source(*n.rhs, props, false));
    case SourceOp::Implies:
        return wrap(render_source(*n.lhs, props, false) + " -> " + render_source(*n.rhs, props, false));
    }
    return {};
}

} // namespace

SourceFormula parse(std::string_view text, const std::optional<PropList>& ap_hint)
{
    return Parser(lex(text), ap_hint).run();
}

std::string SourceFormula::to_string() const { return render_source(*root, props, true); }

// ---------------------------------------------------------------------------
// NNF

namespace {

NnfFormula make_nnf(NnfOp op, std::uint32_t atom, NnfFormula::NodePtr l, NnfFormula::NodePtr r)
{
    NnfFormula::Node n{op, atom, std::move(l), std::move(r), {}, 1};
    switch (op) {
    case NnfOp::True:
        n.key = "t";
        break;
    case NnfOp::False:
        n.key = "f";
        break;
    case NnfOp::Atom:
        n.key = "p" + std::to_string(atom);
        break;
    case NnfOp::NegAtom:
        n.key = "n" + std::to_string(atom);
        break;
    case NnfOp::And:
    case NnfOp::Or:
        n.key = std::string(op == NnfOp::And ? "&(" : "|(") + n.lhs->key + "," + n.rhs->key + ")";
        n.size = 1 + n.lhs->size + n.rhs->size;
        break;
    case NnfOp::F:
    case NnfOp::G:
        n.key = std::string(op == NnfOp::F ? "F(" : "G(") + n.lhs->key + ")";
        n.size = 1 + n.lhs->size;
        break;
    }
    return NnfFormula(std::make_shared<const NnfFormula::Node>(std::move(n)));
}

NnfFormula nnf_of(const SourceNode& n, bool negated)
{
    switch (n.op) {
    case SourceOp::True:
        return negated ? NnfFormula::ff() : NnfFormula::tt();
    case SourceOp::False:
        return negated ? NnfFormula::tt() : NnfFormula::ff();
    case SourceOp::Atom: {
        auto a = static_cast<std::uint32_t>(n.atom);
        return negated ? NnfFormula::neg_atom(a) : NnfFormula::atom(a);
    }
    case SourceOp::Not:
        return nnf_of(*n.lhs, !negated);
    case SourceOp::And:
        return negated ? NnfFormula::disj(nnf_of(*n.lhs, true), nnf_of(*n.rhs, true))
                       : NnfFormula::conj(nnf_of(*n.lhs, false), nnf_of(*n.rhs, false));
    case SourceOp::Or:
        return negated ? NnfFormula::conj(nnf_of(*n.lhs, true), nnf_of(*n.rhs, true))
                       : NnfFormula::disj(nnf_of(*n.lhs, false), nnf_of(*n.rhs, false));
    case SourceOp::Implies:
        // p -> q  ==  !p | q
        return negated ? NnfFormula::conj(nnf_of(*n.lhs, false), nnf_of(*n.rhs, true))
                       : NnfFormula::disj(nnf_of(*n.lhs, true), nnf_of(*n.rhs, false));
    case SourceOp::F:
        return negated ? NnfFormula::always(nnf_of(*n.lhs, true)) : NnfFormula::eventually(nnf_of(*n.lhs, false));
    case SourceOp::G:
        return negated ? NnfFormula::eventually(nnf_of(*n.lhs, true)) : NnfFormula::always(nnf_of(*n.lhs, false));
    }
    return NnfFormula::ff();
}

std::string render_nnf(const NnfFormula::Node& n, const PropList& props, bool top, bool compact)
{
    auto wrap = [top](std::string s) { return top ? s : "(" + s + ")"; };
    const char* sep = compact ? "" : " ";
    switch (n.op) {
    case NnfOp::True:
        return "tt";
    case NnfOp::False:
        return "ff";
    case NnfOp::Atom:
        return props[n.atom];
    case NnfOp::NegAtom:
        return "!" + props[n.atom];
    case NnfOp::And:
        return wrap(render_nnf(*n.lhs, props, false, compact) + " & " + render_nnf(*n.rhs, props, false, compact));
    case NnfOp::Or:
        return wrap(render_nnf(*n.lhs, props, false, compact) + " | " + render_nnf(*n.rhs, props, false, compact));
    case NnfOp::F:
        return std::string("F") + sep + render_nnf(*n.lhs, props, false, compact);
    case NnfOp::G:
        return std::string("G") + sep + render_nnf(*n.lhs, props, false, compact);
    }
    return {};
}

} // namespace

NnfFormula NnfFormula::tt() { return make_nnf(NnfOp::True, 0, nullptr, nullptr); }
NnfFormula NnfFormula::ff() { return make_nnf(NnfOp::False, 0, nullptr, nullptr); }
NnfFormula NnfFormula::atom(std::uint32_t a) { return make_nnf(NnfOp::Atom, a, nullptr, nullptr); }
NnfFormula NnfFormula::neg_atom(std::uint32_t a) { return make_nnf(NnfOp::NegAtom, a, nullptr, nullptr); }
NnfFormula NnfFormula::conj(const NnfFormula& l, const NnfFormula& r) { return make_nnf(NnfOp::And, 0, l.node_, r.node_); }
NnfFormula NnfFormula::disj(const NnfFormula& l, const NnfFormula& r) { return make_nnf(NnfOp::Or, 0, l.node_, r.node_); }
NnfFormula NnfFormula::eventually(const NnfFormula& f) { return make_nnf(NnfOp::F, 0, f.node_, nullptr); }
NnfFormula NnfFormula::always(const NnfFormula& f) { return make_nnf(NnfOp::G, 0, f.node_, nullptr); }

std::string NnfFormula::to_string(const PropList& props) const { return render_nnf(*node_, props, true, false); }

NnfFormula to_nnf(const SourceFormula& f) { return nnf_of(*f.root, false); }

Formula parse_formula(std::string_view text, const std::optional<PropList>& ap_hint)
{
    auto src = parse(text, ap_hint);
    return Formula{to_nnf(src), src.props};
}

// ---------------------------------------------------------------------------
// Temporal index and closure

TemporalIndex::TemporalIndex(const NnfFormula& f) { visit(f); }

void TemporalIndex::visit(const NnfFormula& f)
{
    switch (f.op()) {
    case NnfOp::And:
    case NnfOp::Or:
        visit(f.lhs());
        visit(f.rhs());
        return;
    case NnfOp::F:
    case NnfOp::G:
        visit(f.arg());
        if (!ids_.contains(f.key())) {
            ids_.emplace(f.key(), formulas_.size());
            formulas_.push_back(f);
        }
        return;
    default:
        return;
    }
}

std::optional<std::size_t> TemporalIndex::find(const NnfFormula& f) const
{
    auto it = ids_.find(f.key());
    if (it == ids_.end())
        return std::nullopt;
    return it->second;
}

std::size_t TemporalIndex::id_of(const NnfFormula& f) const
{
    auto id = find(f);
    if (!id)
        throw std::out_of_range("formula is not a temporal subformula of the indexed formula");
    return *id;
}

std::vector<std::size_t> TemporalIndex::f_ids() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < formulas_.size(); ++i)
        if (formulas_[i].op() == NnfOp::F)
            out.push_back(i);
    return out;
}

std::vector<std::size_t> TemporalIndex::g_ids() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < formulas_.size(); ++i)
        if (formulas_[i].op() == NnfOp::G)
            out.push_back(i);
    return out;
}

Closure::Closure(std::size_t num_props, std::size_t num_temporal)
    : num_props_(num_props), num_temporal_(num_temporal)
{
    if (size() > kMaxAtoms)
        throw std::length_error("closure has " + std::to_string(size()) + " atoms; at most " +
                                std::to_string(kMaxAtoms) + " are supported");
    for (std::size_t t = 0; t < num_temporal; ++t)
        next_atoms_.insert(next(t));
}

Closure::Kind Closure::kind(AtomId x) const
{
    if (x < num_props_)
        return Kind::Prop;
    if (x < 2 * num_props_)
        return Kind::NegProp;
    return Kind::Next;
}

std::size_t Closure::payload(AtomId x) const
{
    switch (kind(x)) {
    case Kind::Prop:
        return x;
    case Kind::NegProp:
        return x - num_props_;
    case Kind::Next:
        return x - 2 * num_props_;
    }
    return 0;
}

AtomSet Closure::next_atoms_of(std::uint64_t mask) const
{
    AtomSet s;
    while (mask != 0) {
        auto t = static_cast<std::size_t>(std::countr_zero(mask));
        s.insert(next(t));
        mask &= mask - 1;
    }
    return s;
}

PosBool unfold(const NnfFormula& f, const TemporalIndex& idx, const Closure& closure)
{
    switch (f.op()) {
    case NnfOp::True:
        return PosBool::tt();
    case NnfOp::False:
        return PosBool::ff();
    case NnfOp::Atom:
        return PosBool::atom(closure.prop(f.atom_index()));
    case NnfOp::NegAtom:
        return PosBool::atom(closure.neg_prop(f.atom_index()));
    case NnfOp::And:
        return unfold(f.lhs(), idx, closure) & unfold(f.rhs(), idx, closure);
    case NnfOp::Or:
        return unfold(f.lhs(), idx, closure) | unfold(f.rhs(), idx, closure);
    case NnfOp::F:
        return unfold(f.arg(), idx, closure) | PosBool::atom(closure.next(idx.id_of(f)));
    case NnfOp::G:
        return unfold(f.arg(), idx, closure) & PosBool::atom(closure.next(idx.id_of(f)));
    }
    return PosBool::ff();
}

std::string atom_name(AtomId x, const Closure& closure, const TemporalIndex& idx, const PropList& props)
{
    auto p = closure.payload(x);
    switch (closure.kind(x)) {
    case Closure::Kind::Prop:
        return props[p];
    case Closure::Kind::NegProp:
        return "!" + props[p];
    case Closure::Kind::Next:
        return "X" + render_nnf(*idx.at(p).node(), props, false, true);
    }
    return {};
}

} // namespace fgdet
