#pragma once

// Identity files: one term per line, "<integer coefficient> <monomial>", with
// '#' starting a comment and blank lines ignored.

#include "qjd/error.hpp"
#include "qjd/expansion.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace qjd {

inline Polynomial parse_identity(std::string_view text)
{
    Polynomial out;
    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        std::size_t line_end = text.find('\n', line_start);
        if (line_end == std::string_view::npos)
            line_end = text.size();
        std::string_view line = text.substr(line_start, line_end - line_start);
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);

        std::size_t i = 0;
        auto skip_space = [&] {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
                ++i;
        };
        skip_space();
        if (i < line.size()) {
            std::int64_t coef = 0;
            const char* first = line.data() + i;
            const char* plus_skip = first;
            if (*plus_skip == '+')
                ++plus_skip;
            auto [ptr, ec] = std::from_chars(plus_skip, line.data() + line.size(), coef);
            if (ec != std::errc())
                throw ParseError("expected an integer coefficient", line_start + i);
            i = static_cast<std::size_t>(ptr - line.data());
            std::size_t before = i;
            skip_space();
            if (i == before)
                throw ParseError("expected whitespace after the coefficient", line_start + i);
            std::size_t mono_start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
                ++i;
            std::string_view mono = line.substr(mono_start, i - mono_start);
            if (mono.empty())
                throw ParseError("empty term", line_start + mono_start);
            skip_space();
            if (i != line.size())
                throw ParseError("trailing characters", line_start + i);
            try {
                out.add(parse_monomial(mono), coef);
            } catch (const ParseError& e) {
                throw ParseError(std::string("bad monomial '") + std::string(mono) + "'",
                                 line_start + mono_start + e.offset());
            }
        }
        line_start = line_end + 1;
    }
    return out;
}

inline Polynomial read_identity_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open identity file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_identity(buf.str());
}

inline std::string format_identity(const Polynomial& p, std::string_view header = {})
{
    std::string out;
    if (!header.empty()) {
        out += "# ";
        out += header;
        out += '\n';
    }
    for (const auto& [m, c] : p) {
        out += std::to_string(c);
        out += ' ';
        out += to_string(m);
        out += '\n';
    }
    return out;
}

} // namespace qjd
