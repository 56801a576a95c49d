#pragma once

// Independent reference implementations used as test oracles.

#include "fgdet/formula.hpp"
#include "fgdet/posbool.hpp"
#include "fgdet/word.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace fgdet::testing {

/// Direct recursive evaluation on explicit positions, no memoization. From
/// position n the distinct suffixes are those starting in
/// [n, max(n, |prefix|) + |period|).
inline bool naive_holds(const NnfFormula& f, const LassoWord& w, std::size_t n)
{
    auto horizon = std::max(n, w.prefix.size()) + w.period.size();
    switch (f.op()) {
    case NnfOp::True:
        return true;
    case NnfOp::False:
        return false;
    case NnfOp::Atom:
        return (w.at(n) >> f.atom_index()) & 1U;
    case NnfOp::NegAtom:
        return !((w.at(n) >> f.atom_index()) & 1U);
    case NnfOp::And:
        return naive_holds(f.lhs(), w, n) && naive_holds(f.rhs(), w, n);
    case NnfOp::Or:
        return naive_holds(f.lhs(), w, n) || naive_holds(f.rhs(), w, n);
    case NnfOp::F:
        for (auto m = n; m < horizon; ++m)
            if (naive_holds(f.arg(), w, m))
                return true;
        return false;
    case NnfOp::G:
        for (auto m = n; m < horizon; ++m)
            if (!naive_holds(f.arg(), w, m))
                return false;
        return true;
    }
    return false;
}

/// Truth of an expression under the valuation given by the bits of `v`.
inline bool eval_expr(const BoolExpr& e, std::uint64_t v)
{
    switch (e.kind) {
    case BoolExpr::Kind::True:
        return true;
    case BoolExpr::Kind::False:
        return false;
    case BoolExpr::Kind::Atom:
        return (v >> e.atom) & 1U;
    case BoolExpr::Kind::And:
        return std::all_of(e.operands.begin(), e.operands.end(), [&](const BoolExpr& x) { return eval_expr(x, v); });
    case BoolExpr::Kind::Or:
        return std::any_of(e.operands.begin(), e.operands.end(), [&](const BoolExpr& x) { return eval_expr(x, v); });
    }
    return false;
}

inline AtomSet atoms_of_bits(std::uint64_t v, std::size_t n)
{
    AtomSet s;
    for (std::size_t a = 0; a < n; ++a)
        if ((v >> a) & 1U)
            s.insert(static_cast<AtomId>(a));
    return s;
}

inline BoolExpr random_expr(std::mt19937_64& rng, std::size_t atoms, int depth)
{
    std::uniform_int_distribution<int> kind(0, depth <= 0 ? 1 : 5);
    int k = kind(rng);
    if (k == 0 && depth > 0 && rng() % 8 == 0)
        return rng() % 2 ? BoolExpr::tt() : BoolExpr::ff();
    if (k <= 1)
        return BoolExpr::var(static_cast<AtomId>(rng() % atoms));
    std::vector<BoolExpr> xs;
    auto n = 2 + rng() % 2;
    for (std::size_t i = 0; i < n; ++i)
        xs.push_back(random_expr(rng, atoms, depth - 1));
    return k % 2 ? BoolExpr::conj(std::move(xs)) : BoolExpr::disj(std::move(xs));
}

} // namespace fgdet::testing
