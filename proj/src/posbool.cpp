#include "fgdet/posbool.hpp"

#include <algorithm>

namespace fgdet {

std::strong_ordering operator<=>(const AtomSet& a, const AtomSet& b)
{
    // Find the lowest atom in exactly one of the two sets. The set holding it
    // is smaller unless the other set has nothing beyond it (proper prefix).
    for (std::size_t i = 0; i < AtomSet::kWords; ++i) {
        auto diff = a.words_[i] ^ b.words_[i];
        if (diff == 0)
            continue;
        auto bit = static_cast<unsigned>(std::countr_zero(diff));
        bool in_a = (a.words_[i] >> bit) & 1U;
        const AtomSet& other = in_a ? b : a;
        bool other_continues = false;
        auto above = bit == 63 ? std::uint64_t{0} : (~std::uint64_t{0} << (bit + 1));
        if ((other.words_[i] & above) != 0)
            other_continues = true;
        for (std::size_t j = i + 1; j < AtomSet::kWords && !other_continues; ++j)
            other_continues = other.words_[j] != 0;
        bool a_less = in_a == other_continues;
        return a_less ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

namespace {

// Keeps only the subset-minimal sets and sorts them.
std::vector<AtomSet> minimize(std::vector<AtomSet> sets)
{
    std::sort(sets.begin(), sets.end(), [](const AtomSet& x, const AtomSet& y) {
        auto sx = x.size();
        auto sy = y.size();
        if (sx != sy)
            return sx < sy;
        return x < y;
    });
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());

    std::vector<AtomSet> kept;
    kept.reserve(sets.size());
    for (const auto& s : sets) {
        bool dominated = std::any_of(kept.begin(), kept.end(),
                                     [&](const AtomSet& k) { return k.subset_of(s); });
        if (!dominated)
            kept.push_back(s);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

} // namespace

PosBool PosBool::tt()
{
    PosBool f;
    f.models_.emplace_back();
    return f;
}

PosBool PosBool::atom(AtomId a)
{
    PosBool f;
    f.models_.push_back(AtomSet::single(a));
    return f;
}

PosBool PosBool::from_models(std::vector<AtomSet> models)
{
    PosBool f;
    f.models_ = minimize(std::move(models));
    return f;
}

bool PosBool::eval(const AtomSet& true_atoms) const
{
    return std::any_of(models_.begin(), models_.end(),
                       [&](const AtomSet& m) { return m.subset_of(true_atoms); });
}

PosBool PosBool::substitute(const AtomSet& tt_atoms, const AtomSet& ff_atoms) const
{
    std::vector<AtomSet> out;
    out.reserve(models_.size());
    for (const auto& m : models_) {
        if (m.intersects(ff_atoms))
            continue;
        out.push_back(m - tt_atoms);
    }
    return from_models(std::move(out));
}

AtomSet PosBool::support() const
{
    AtomSet s;
    for (const auto& m : models_)
        s |= m;
    return s;
}

PosBool operator|(const PosBool& a, const PosBool& b)
{
    if (a.is_tt() || b.is_ff())
        return a;
    if (b.is_tt() || a.is_ff())
        return b;
    std::vector<AtomSet> all = a.models_;
    all.insert(all.end(), b.models_.begin(), b.models_.end());
    return PosBool::from_models(std::move(all));
}

PosBool operator&(const PosBool& a, const PosBool& b)
{
    if (a.is_ff() || b.is_tt())
        return a;
    if (b.is_ff() || a.is_tt())
        return b;
    std::vector<AtomSet> all;
    all.reserve(a.models_.size() * b.models_.size());
    for (const auto& x : a.models_)
        for (const auto& y : b.models_)
            all.push_back(x | y);
    return PosBool::from_models(std::move(all));
}

std::size_t PosBool::hash() const
{
    std::size_t h = models_.size();
    for (const auto& m : models_)
        h = h * 31 + m.hash();
    return h;
}

std::string PosBool::to_string(const std::function<std::string(AtomId)>& name) const
{
    if (is_ff())
        return "ff";
    if (is_tt())
        return "tt";
    std::string out;
    bool several = models_.size() > 1;
    for (std::size_t i = 0; i < models_.size(); ++i) {
        if (i > 0)
            out += " | ";
        auto atoms = models_[i].elements();
        bool paren = several && atoms.size() > 1;
        if (paren)
            out += '(';
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            if (j > 0)
                out += " & ";
            out += name(atoms[j]);
        }
        if (paren)
            out += ')';
    }
    return out;
}

PosBool canonicalize(const BoolExpr& expr)
{
    switch (expr.kind) {
    case BoolExpr::Kind::True:
        return PosBool::tt();
    case BoolExpr::Kind::False:
        return PosBool::ff();
    case BoolExpr::Kind::Atom:
        return PosBool::atom(expr.atom);
    case BoolExpr::Kind::And: {
        auto acc = PosBool::tt();
        for (const auto& op : expr.operands) {
            acc = acc & canonicalize(op);
            if (acc.is_ff())
                break;
        }
        return acc;
    }
    case BoolExpr::Kind::Or: {
        auto acc = PosBool::ff();
        for (const auto& op : expr.operands) {
            acc = acc | canonicalize(op);
            if (acc.is_tt())
                break;
        }
        return acc;
    }
    }
    return PosBool::ff();
}

} // namespace fgdet
