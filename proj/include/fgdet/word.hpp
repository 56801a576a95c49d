#pragma once

#include "fgdet/formula.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fgdet {

/// A letter of 2^Ap: bit a is set iff proposition a holds.
using Letter = std::uint32_t;

/// Largest supported |Ap|; the alphabet is enumerated explicitly.
inline constexpr std::size_t kMaxProps = 20;

/// Ultimately periodic word prefix . period^omega.
struct LassoWord {
    std::vector<Letter> prefix;
    std::vector<Letter> period; ///< never empty

    /// Number of distinct suffix positions.
    std::size_t span() const { return prefix.size() + period.size(); }

    /// Position n folded into [0, span()).
    std::size_t normalize(std::size_t n) const
    {
        if (n < prefix.size())
            return n;
        return prefix.size() + (n - prefix.size()) % period.size();
    }

    Letter at(std::size_t n) const
    {
        auto p = normalize(n);
        return p < prefix.size() ? prefix[p] : period[p - prefix.size()];
    }

    /// Successor of a normalized position.
    std::size_t next_position(std::size_t p) const { return p + 1 < span() ? p + 1 : prefix.size(); }

    friend bool operator==(const LassoWord&, const LassoWord&) = default;
};

/// "{a},{}" style letter lists separated by ';' into prefix and period, e.g.
/// "{a};{b},{}" or ";{a},{b}".
LassoWord parse_lasso(std::string_view spec, const PropList& props);
std::string lasso_to_string(const LassoWord& w, const PropList& props);
std::string letter_to_string(Letter a, const PropList& props);

} // namespace fgdet
