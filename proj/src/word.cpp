#include "fgdet/word.hpp"

#include <algorithm>
#include <cctype>

namespace fgdet {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<Letter> parse_letters(std::string_view s, const PropList& props, std::size_t base)
{
    std::vector<Letter> out;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
    };
    skip_ws();
    while (i < s.size()) {
        if (s[i] != '{')
            throw ParseError(ParseError::Kind::Syntax, base + i, "expected '{'");
        auto close = s.find('}', i);
        if (close == std::string_view::npos)
            throw ParseError(ParseError::Kind::Syntax, base + i, "unterminated letter");
        Letter letter = 0;
        std::size_t j = i + 1;
        while (j < close) {
            auto comma = std::min(s.find(',', j), close);
            auto name = trim(s.substr(j, comma - j));
            if (!name.empty()) {
                auto it = std::find(props.begin(), props.end(), name);
                if (it == props.end())
                    throw ParseError(ParseError::Kind::UnknownAtom, base + j,
                                     "unknown atomic proposition '" + std::string(name) + "'");
                letter |= Letter{1} << (it - props.begin());
            }
            j = comma + 1;
        }
        out.push_back(letter);
        i = close + 1;
        skip_ws();
        if (i < s.size()) {
            if (s[i] != ',')
                throw ParseError(ParseError::Kind::Syntax, base + i, "expected ','");
            ++i;
            skip_ws();
            if (i >= s.size())
                throw ParseError(ParseError::Kind::Syntax, base + i, "expected letter after ','");
        }
    }
    return out;
}

} // namespace

LassoWord parse_lasso(std::string_view spec, const PropList& props)
{
    auto semi = spec.find(';');
    if (semi == std::string_view::npos)
        throw ParseError(ParseError::Kind::Syntax, spec.size(), "expected ';' between prefix and period");
    LassoWord w;
    w.prefix = parse_letters(spec.substr(0, semi), props, 0);
    w.period = parse_letters(spec.substr(semi + 1), props, semi + 1);
    if (w.period.empty())
        throw ParseError(ParseError::Kind::Syntax, spec.size(), "period must contain at least one letter");
    return w;
}

std::string letter_to_string(Letter a, const PropList& props)
{
    std::string out = "{";
    bool first = true;
    for (std::size_t p = 0; p < props.size(); ++p) {
        if ((a >> p) & 1U) {
            if (!first)
                out += ',';
            out += props[p];
            first = false;
        }
    }
    return out + "}";
}

std::string lasso_to_string(const LassoWord& w, const PropList& props)
{
    std::string out;
    for (std::size_t i = 0; i < w.prefix.size(); ++i) {
        if (i > 0)
            out += ',';
        out += letter_to_string(w.prefix[i], props);
    }
    out += ';';
    for (std::size_t i = 0; i < w.period.size(); ++i) {
        if (i > 0)
            out += ',';
        out += letter_to_string(w.period[i], props);
    }
    return out;
}

} // namespace fgdet
