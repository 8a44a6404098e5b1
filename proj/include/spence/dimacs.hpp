#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spence/cnf.hpp"

namespace spence::dimacs {

enum class ParseErrorKind {
    MissingHeader,
    MalformedHeader,
    InvalidToken,
    VariableOutOfRange,
    DuplicateLiteral,
    MissingTerminator,
    ClauseCountMismatch,
};

inline const char* toString(ParseErrorKind k) {
    switch (k) {
    case ParseErrorKind::MissingHeader: return "missing header";
    case ParseErrorKind::MalformedHeader: return "malformed header";
    case ParseErrorKind::InvalidToken: return "invalid token";
    case ParseErrorKind::VariableOutOfRange: return "variable out of range";
    case ParseErrorKind::DuplicateLiteral: return "duplicate literal";
    case ParseErrorKind::MissingTerminator: return "missing terminating 0";
    case ParseErrorKind::ClauseCountMismatch: return "clause count mismatch";
    }
    return "unknown";
}

class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
        : Error("line " + std::to_string(line) + ": " + toString(kind) + ": " + detail), kind_(kind), line_(line) {}

    [[nodiscard]] ParseErrorKind kind() const { return kind_; }
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    ParseErrorKind kind_;
    std::size_t line_;
};

/// Emits DIMACS CNF. Each comment string becomes one `c` line ahead of the header.
/// Output depends only on the arguments.
inline std::string write(const CnfFormula& f, std::span<const std::string> comments = {}) {
    std::string out;
    for (const auto& c : comments) {
        out += c.empty() ? "c" : "c " + c;
        out += '\n';
    }
    out += "p cnf " + std::to_string(f.numVariables()) + " " + std::to_string(f.numClauses()) + "\n";
    for (const Clause& c : f.clauses()) {
        for (Literal l : c) {
            out += std::to_string(l.dimacs());
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

/// Parses DIMACS CNF text. Clause and literal order are preserved exactly.
///
/// Clauses may span lines; a clause that is still open at end of input is a
/// MissingTerminator error reported at the last line. A `%` line (as found in
/// the SATLIB benchmark files) ends the input.
inline CnfFormula read(std::string_view text) {
    std::optional<std::int64_t> declaredVars;
    std::int64_t declaredClauses = 0;
    std::vector<Clause> clauses;
    std::vector<Literal> current;
    std::size_t lineNo = 0;
    std::size_t clauseStartLine = 0;

    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineNo;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);

        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos)
            continue;
        line.remove_prefix(first);
        if (line[0] == 'c')
            continue;
        if (line[0] == '%')
            break;

        if (line[0] == 'p') {
            if (declaredVars)
                throw ParseError(ParseErrorKind::MalformedHeader, lineNo, "duplicate header");
            std::istringstream iss{std::string(line)};
            std::string p, fmt, extra;
            std::int64_t v = -1, c = -1;
            if (!(iss >> p >> fmt >> v >> c) || p != "p" || fmt != "cnf" || v < 1 || c < 0 || (iss >> extra))
                throw ParseError(ParseErrorKind::MalformedHeader, lineNo,
                                 "expected 'p cnf <vars >= 1> <clauses >= 0>', got '" + std::string(line) + "'");
            if (v > INT32_MAX)
                throw ParseError(ParseErrorKind::MalformedHeader, lineNo, "variable count too large");
            declaredVars = v;
            declaredClauses = c;
            continue;
        }

        if (!declaredVars)
            throw ParseError(ParseErrorKind::MissingHeader, lineNo, "clause data before 'p cnf' header");

        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
                ++i;
            if (i >= line.size())
                break;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t')
                ++j;
            std::string_view tok = line.substr(i, j - i);
            i = j;

            std::int64_t value = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc() || ptr != tok.data() + tok.size())
                throw ParseError(ParseErrorKind::InvalidToken, lineNo, "'" + std::string(tok) + "'");

            if (value == 0) {
                for (std::size_t a = 0; a < current.size(); ++a)
                    for (std::size_t b = a + 1; b < current.size(); ++b)
                        if (current[a] == current[b])
                            throw ParseError(ParseErrorKind::DuplicateLiteral, lineNo,
                                             "literal " + std::to_string(current[a].dimacs()) + " repeated");
                clauses.emplace_back(std::move(current));
                current.clear();
                continue;
            }
            std::int64_t var = value < 0 ? -value : value;
            if (var > *declaredVars)
                throw ParseError(ParseErrorKind::VariableOutOfRange, lineNo,
                                 "literal " + std::to_string(value) + " exceeds declared " +
                                     std::to_string(*declaredVars) + " variables");
            if (current.empty())
                clauseStartLine = lineNo;
            current.push_back(Literal::fromDimacs(static_cast<std::int32_t>(value)));
        }
    }

    if (!declaredVars)
        throw ParseError(ParseErrorKind::MissingHeader, lineNo, "no 'p cnf' header found");
    if (!current.empty())
        throw ParseError(ParseErrorKind::MissingTerminator, lineNo,
                         "clause starting on line " + std::to_string(clauseStartLine) + " is not terminated by 0");
    if (static_cast<std::int64_t>(clauses.size()) != declaredClauses)
        throw ParseError(ParseErrorKind::ClauseCountMismatch, lineNo,
                         "header declares " + std::to_string(declaredClauses) + " clauses, found " +
                             std::to_string(clauses.size()));
    return CnfFormula(static_cast<Variable>(*declaredVars), std::move(clauses));
}

} // namespace spence::dimacs
