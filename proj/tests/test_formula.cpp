#include "fgdet/automaton.hpp"
#include "fgdet/formula.hpp"
#include "fgdet/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace fgdet;
using fgdet::testing::naive_holds;

namespace {

// Source-level semantics with negation and implication, evaluated directly.
bool source_holds(const SourceNode& n, const LassoWord& w, std::size_t pos)
{
    auto horizon = std::max(pos, w.prefix.size()) + w.period.size();
    switch (n.op) {
    case SourceOp::True:
        return true;
    case SourceOp::False:
        return false;
    case SourceOp::Atom:
        return (w.at(pos) >> n.atom) & 1U;
    case SourceOp::Not:
        return !source_holds(*n.lhs, w, pos);
    case SourceOp::And:
        return source_holds(*n.lhs, w, pos) && source_holds(*n.rhs, w, pos);
    case SourceOp::Or:
        return source_holds(*n.lhs, w, pos) || source_holds(*n.rhs, w, pos);
    case SourceOp::Implies:
        return !source_holds(*n.lhs, w, pos) || source_holds(*n.rhs, w, pos);
    case SourceOp::F:
        for (auto m = pos; m < horizon; ++m)
            if (source_holds(*n.lhs, w, m))
                return true;
        return false;
    case SourceOp::G:
        for (auto m = pos; m < horizon; ++m)
            if (!source_holds(*n.lhs, w, m))
                return false;
        return true;
    }
    return false;
}

SourcePtr random_source(std::mt19937_64& rng, int depth, std::size_t props)
{
    auto node = std::make_shared<SourceNode>();
    int k = depth <= 0 ? 0 : static_cast<int>(rng() % 7);
    switch (k) {
    case 0:
        node->op = SourceOp::Atom;
        node->atom = rng() % props;
        break;
    case 1:
        node->op = SourceOp::Not;
        node->lhs = random_source(rng, depth - 1, props);
        break;
    case 2:
    case 3:
    case 4:
        node->op = k == 2 ? SourceOp::And : k == 3 ? SourceOp::Or : SourceOp::Implies;
        node->lhs = random_source(rng, depth - 1, props);
        node->rhs = random_source(rng, depth - 1, props);
        break;
    default:
        node->op = k == 5 ? SourceOp::F : SourceOp::G;
        node->lhs = random_source(rng, depth - 1, props);
    }
    return node;
}

} // namespace

TEST_CASE("parsing")
{
    SUBCASE("conjunction binds tighter than disjunction")
    {
        auto f = parse("F a & G F b");
        REQUIRE(f.root->op == SourceOp::And);
        CHECK(f.root->lhs->op == SourceOp::F);
        CHECK(f.root->rhs->op == SourceOp::G);
        CHECK(f.root->rhs->lhs->op == SourceOp::F);
        CHECK(f.props == PropList{"a", "b"});
        CHECK(parse("a | b & c").root->op == SourceOp::Or);
    }
    SUBCASE("implication is lowest and right associative")
    {
        auto f = parse("G F a1 -> G F b1");
        REQUIRE(f.root->op == SourceOp::Implies);
        CHECK(f.root->lhs->op == SourceOp::G);
        CHECK(f.props == PropList{"a1", "b1"});
        auto g = parse("a -> b -> c");
        REQUIRE(g.root->op == SourceOp::Implies);
        CHECK(g.root->rhs->op == SourceOp::Implies);
    }
    SUBCASE("unsupported operators")
    {
        try {
            parse("a U b");
            FAIL("expected an error");
        } catch (const ParseError& e) {
            CHECK(e.kind() == ParseError::Kind::UnsupportedOperator);
            CHECK(e.position() == 2);
        }
        CHECK_THROWS_AS(parse("X a"), ParseError);
        CHECK_THROWS_AS(parse("a R b"), ParseError);
        CHECK_THROWS_AS(parse("a W b"), ParseError);
    }
    SUBCASE("syntax errors carry positions")
    {
        try {
            parse("(a & b");
            FAIL("expected an error");
        } catch (const ParseError& e) {
            CHECK(e.kind() == ParseError::Kind::Syntax);
            CHECK(e.position() == 6);
        }
        CHECK_THROWS_AS(parse(""), ParseError);
        CHECK_THROWS_AS(parse("a &"), ParseError);
        CHECK_THROWS_AS(parse("a $ b"), ParseError);
    }
    SUBCASE("proposition hints")
    {
        auto f = parse("b & a", PropList{"a", "b"});
        CHECK(f.props == PropList{"a", "b"});
        CHECK(f.root->lhs->atom == 1);
        try {
            parse("a & c", PropList{"a", "b"});
            FAIL("expected an error");
        } catch (const ParseError& e) {
            CHECK(e.kind() == ParseError::Kind::UnknownAtom);
            CHECK(e.position() == 4);
        }
    }
    SUBCASE("compact operator runs and constants")
    {
        CHECK(parse_formula("GF a").to_string() == "G F a");
        // identifiers follow the atom grammar even when they start with F or G
        CHECK(parse_formula("GFa").nnf.op() == NnfOp::Atom);
        CHECK(parse_formula("FG(a||b)").to_string() == "F G (a | b)");
        CHECK(parse_formula("tt").nnf.op() == NnfOp::True);
        CHECK(parse_formula("!ff").nnf.op() == NnfOp::True);
        CHECK(parse_formula("Fa && true").nnf.op() == NnfOp::And);
    }
    SUBCASE("printing round-trips")
    {
        for (auto text : {"F a & G F b", "(G F a -> G F b) & F c", "!(a | G !b)", "G(a | F(b & c))"}) {
            auto f = parse_formula(text);
            CHECK(parse_formula(f.to_string(), f.props).to_string() == f.to_string());
        }
    }
}

TEST_CASE("negation normal form")
{
    CHECK(parse_formula("!(F a & G b)").to_string() == "G !a | F !b");
    CHECK(parse_formula("G F a -> G F b").to_string() == "F G !a | G F b");
    CHECK(parse_formula("F a").to_string() == "F a");
    CHECK(parse_formula("!!a").to_string() == "a");

    SUBCASE("implication rewrite agrees with the oracle")
    {
        auto src = parse("G F a -> G F b");
        auto nnf = to_nnf(src);
        for (std::uint64_t s = 0; s < 1000; ++s) {
            auto w = random_lasso(s, 4, 4, 2);
            bool expected = source_holds(*src.root, w, 0);
            REQUIRE(ltl_holds(nnf, w) == expected);
            REQUIRE(naive_holds(nnf, w, 0) == expected);
        }
    }
    SUBCASE("random source formulas keep their meaning")
    {
        std::mt19937_64 rng(3);
        for (int round = 0; round < 400; ++round) {
            SourceFormula src{random_source(rng, 4, 3), {"a", "b", "c"}};
            auto nnf = to_nnf(src);
            for (int k = 0; k < 5; ++k) {
                auto w = random_lasso(rng(), 3, 3, 3);
                REQUIRE(naive_holds(nnf, w, 0) == source_holds(*src.root, w, 0));
            }
        }
    }
}

TEST_CASE("temporal subformulas")
{
    SUBCASE("Fa & GFb")
    {
        auto f = parse_formula("F a & G F b");
        TemporalIndex idx(f.nnf);
        REQUIRE(idx.size() == 3);
        std::vector<std::string> fs;
        std::vector<std::string> gs;
        for (auto t : idx.f_ids())
            fs.push_back(idx.at(t).to_string(f.props));
        for (auto t : idx.g_ids())
            gs.push_back(idx.at(t).to_string(f.props));
        CHECK(fs == std::vector<std::string>{"F a", "F b"});
        CHECK(gs == std::vector<std::string>{"G F b"});
    }
    SUBCASE("FGa | GFb in post-order")
    {
        auto f = parse_formula("F G a | G F b");
        TemporalIndex idx(f.nnf);
        std::vector<std::string> names;
        for (const auto& t : idx.formulas())
            names.push_back(t.to_string(f.props));
        CHECK(names == std::vector<std::string>{"G a", "F G a", "F b", "G F b"});
    }
    SUBCASE("no temporal operators")
    {
        CHECK(TemporalIndex(parse_formula("a & !b").nnf).size() == 0);
    }
    SUBCASE("shared and repeated subformulas")
    {
        auto f = parse_formula("G F a & F a & G F a");
        CHECK(TemporalIndex(f.nnf).size() == 2);
        CHECK(TemporalIndex(parse_formula("F F a").nnf).size() == 2);
        CHECK(TemporalIndex(parse_formula("G G !a").nnf).size() == 2);
    }
    SUBCASE("deterministic")
    {
        auto f = parse_formula("(F(b & G F a) | F(c & G F !a)) & F b & F c");
        TemporalIndex a(f.nnf);
        TemporalIndex b(f.nnf);
        REQUIRE(a.size() == b.size());
        for (std::size_t t = 0; t < a.size(); ++t) {
            CHECK(a.at(t) == b.at(t));
            CHECK(a.id_of(a.at(t)) == t);
        }
    }
}

TEST_CASE("closure numbering")
{
    Closure c(2, 3);
    CHECK(c.size() == 7);
    CHECK(c.prop(1) == 1);
    CHECK(c.neg_prop(0) == 2);
    CHECK(c.next(2) == 6);
    CHECK(c.kind(3) == Closure::Kind::NegProp);
    CHECK(c.payload(5) == 1);
    CHECK(c.next_atoms().size() == 3);
}

TEST_CASE("one-step unfold")
{
    auto unfold_of = [](const std::string& text) {
        Translation tr(parse_formula(text));
        return std::make_pair(tr.render(tr.initial_function()), tr.initial_function());
    };
    SUBCASE("Fa & GFb")
    {
        Translation tr(parse_formula("F a & G F b"));
        const auto& c = tr.closure();
        // ids: Fa = 0, Fb = 1, GFb = 2
        auto x = [&](std::size_t t) { return PosBool::atom(c.next(t)); };
        auto p = [&](std::size_t a) { return PosBool::atom(c.prop(a)); };
        CHECK(tr.initial_function() == ((p(0) | x(0)) & (p(1) | x(1)) & x(2)));
    }
    SUBCASE("GF(a & Fb)")
    {
        Translation tr(parse_formula("G F(a & F b)"));
        const auto& c = tr.closure();
        // ids: Fb = 0, F(a & Fb) = 1, GF(a & Fb) = 2
        auto x = [&](std::size_t t) { return PosBool::atom(c.next(t)); };
        auto p = [&](std::size_t a) { return PosBool::atom(c.prop(a)); };
        CHECK(tr.initial_function() == (x(2) & (x(1) | (p(0) & (p(1) | x(0))))));
    }
    SUBCASE("FGa | GFb")
    {
        Translation tr(parse_formula("F G a | G F b"));
        const auto& c = tr.closure();
        // ids: Ga = 0, FGa = 1, Fb = 2, GFb = 3
        auto x = [&](std::size_t t) { return PosBool::atom(c.next(t)); };
        auto p = [&](std::size_t a) { return PosBool::atom(c.prop(a)); };
        CHECK(tr.initial_function() == (x(1) | (x(0) & p(0)) | (x(3) & (x(2) | p(1)))));
        CHECK(unfold_of("F G a | G F b").first == "(a & XGa) | (b & XGFb) | XFGa | (XFb & XGFb)");
    }
    SUBCASE("negated atoms use their own closure atoms")
    {
        Translation tr(parse_formula("G !a"));
        const auto& c = tr.closure();
        CHECK(tr.initial_function() == (PosBool::atom(c.neg_prop(0)) & PosBool::atom(c.next(0))));
    }
}

TEST_CASE("unfold soundness on random words")
{
    // w |= phi iff U(phi) holds with letters from w[0] and X psi read as w_1 |= psi
    for (std::uint64_t s = 0; s < 600; ++s) {
        auto f = random_formula(s, 10, 3);
        Translation tr(f);
        for (int k = 0; k < 4; ++k) {
            auto w = random_lasso(s * 31 + static_cast<std::uint64_t>(k), 3, 3, 3);
            AtomSet atoms = tr.true_literals(w.at(0));
            for (std::size_t t = 0; t < tr.index().size(); ++t)
                if (naive_holds(tr.index().at(t), w, 1))
                    atoms.insert(tr.closure().next(t));
            REQUIRE(tr.initial_function().eval(atoms) == naive_holds(f.nnf, w, 0));
        }
    }
}
