#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fgdet {

using AtomId = std::uint16_t;

/// Upper bound on the number of distinct atoms a single function may mention.
inline constexpr std::size_t kMaxAtoms = 256;

/// Fixed-capacity bit set of atom ids.
class AtomSet {
public:
    AtomSet() = default;

    static AtomSet single(AtomId a)
    {
        AtomSet s;
        s.insert(a);
        return s;
    }

    void insert(AtomId a) { words_[a >> 6] |= (std::uint64_t{1} << (a & 63)); }
    void erase(AtomId a) { words_[a >> 6] &= ~(std::uint64_t{1} << (a & 63)); }
    bool contains(AtomId a) const { return (words_[a >> 6] >> (a & 63)) & 1U; }

    bool empty() const
    {
        for (auto w : words_)
            if (w != 0)
                return false;
        return true;
    }

    std::size_t size() const
    {
        std::size_t n = 0;
        for (auto w : words_)
            n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    bool subset_of(const AtomSet& o) const
    {
        for (std::size_t i = 0; i < kWords; ++i)
            if ((words_[i] & ~o.words_[i]) != 0)
                return false;
        return true;
    }

    bool intersects(const AtomSet& o) const
    {
        for (std::size_t i = 0; i < kWords; ++i)
            if ((words_[i] & o.words_[i]) != 0)
                return true;
        return false;
    }

    AtomSet& operator|=(const AtomSet& o)
    {
        for (std::size_t i = 0; i < kWords; ++i)
            words_[i] |= o.words_[i];
        return *this;
    }

    AtomSet& operator-=(const AtomSet& o)
    {
        for (std::size_t i = 0; i < kWords; ++i)
            words_[i] &= ~o.words_[i];
        return *this;
    }

    friend AtomSet operator|(AtomSet a, const AtomSet& b) { return a |= b; }
    friend AtomSet operator-(AtomSet a, const AtomSet& b) { return a -= b; }

    template <class Fn>
    void for_each(Fn&& fn) const
    {
        for (std::size_t i = 0; i < kWords; ++i) {
            auto w = words_[i];
            while (w != 0) {
                auto bit = static_cast<std::size_t>(std::countr_zero(w));
                fn(static_cast<AtomId>(i * 64 + bit));
                w &= w - 1;
            }
        }
    }

    std::vector<AtomId> elements() const
    {
        std::vector<AtomId> out;
        for_each([&](AtomId a) { out.push_back(a); });
        return out;
    }

    std::size_t hash() const
    {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (auto w : words_)
            h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
        return h;
    }

    /// Lexicographic order on the ascending element sequence.
    friend std::strong_ordering operator<=>(const AtomSet& a, const AtomSet& b);
    friend bool operator==(const AtomSet&, const AtomSet&) = default;

private:
    static constexpr std::size_t kWords = kMaxAtoms / 64;
    std::array<std::uint64_t, kWords> words_{};
};

/// Positive Boolean expression over atoms; input to canonicalize().
struct BoolExpr {
    enum class Kind : std::uint8_t { True, False, Atom, And, Or };

    Kind kind = Kind::False;
    AtomId atom = 0;
    std::vector<BoolExpr> operands;

    static BoolExpr tt() { return {Kind::True, 0, {}}; }
    static BoolExpr ff() { return {Kind::False, 0, {}}; }
    static BoolExpr var(AtomId a) { return {Kind::Atom, a, {}}; }
    static BoolExpr conj(std::vector<BoolExpr> xs) { return {Kind::And, 0, std::move(xs)}; }
    static BoolExpr disj(std::vector<BoolExpr> xs) { return {Kind::Or, 0, std::move(xs)}; }
};

/// A monotone Boolean function stored as the sorted antichain of its minimal
/// models. The representation is unique per function, so equality of values
/// is propositional equivalence.
class PosBool {
public:
    /// ff
    PosBool() = default;

    static PosBool tt();
    static PosBool ff() { return {}; }
    static PosBool atom(AtomId a);

    /// Builds the canonical function from an arbitrary family of models.
    static PosBool from_models(std::vector<AtomSet> models);

    const std::vector<AtomSet>& models() const { return models_; }

    bool is_tt() const { return models_.size() == 1 && models_.front().empty(); }
    bool is_ff() const { return models_.empty(); }

    /// True iff `true_atoms` contains some minimal model.
    bool eval(const AtomSet& true_atoms) const;

    /// Partial evaluation. `tt_atoms` and `ff_atoms` must be disjoint.
    PosBool substitute(const AtomSet& tt_atoms, const AtomSet& ff_atoms) const;

    /// Union of all minimal models; for monotone functions these are exactly
    /// the atoms the function depends on.
    AtomSet support() const;

    friend PosBool operator&(const PosBool& a, const PosBool& b);
    friend PosBool operator|(const PosBool& a, const PosBool& b);

    friend bool operator==(const PosBool&, const PosBool&) = default;
    friend auto operator<=>(const PosBool& a, const PosBool& b)
    {
        return std::lexicographical_compare_three_way(a.models_.begin(), a.models_.end(),
                                                      b.models_.begin(), b.models_.end());
    }

    std::size_t hash() const;

    /// Irredundant DNF, e.g. "(a & XFb) | XGa". Atoms inside a conjunct are in
    /// atom-id order.
    std::string to_string(const std::function<std::string(AtomId)>& name) const;

private:
    std::vector<AtomSet> models_;
};

struct PosBoolHash {
    std::size_t operator()(const PosBool& f) const { return f.hash(); }
};

PosBool canonicalize(const BoolExpr& expr);

inline PosBool substitute(const PosBool& f, const AtomSet& tt_atoms, const AtomSet& ff_atoms)
{
    return f.substitute(tt_atoms, ff_atoms);
}
inline bool is_tt(const PosBool& f) { return f.is_tt(); }
inline bool is_ff(const PosBool& f) { return f.is_ff(); }
inline bool equivalent(const PosBool& f, const PosBool& g) { return f == g; }
inline bool eval_total(const PosBool& f, const AtomSet& true_atoms) { return f.eval(true_atoms); }
inline AtomSet relevant_atoms(const PosBool& f) { return f.support(); }

} // namespace fgdet
