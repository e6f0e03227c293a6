#pragma once

// Reader and writer for the line-oriented `.trs` program format:
//
//   constructors: eps/0, s0/1, s1/1
//   functions:    reverse/2 valency(1,0)
//   precedence:   delta0 = delta1 < h < f      # optional
//   main:         reverse
//   rules:
//     reverse(eps, y)   -> y
//     reverse(s0(x), y) -> reverse(x, s0(y))
//
// `#` starts a comment. Identifiers that are not declared symbols are
// variables.

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>

#include "llpo/term.hpp"

namespace llpo {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                             message),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

namespace detail {

/// Cursor over one source line; columns are 1-based.
class LineCursor {
public:
    LineCursor(std::string_view text, std::size_t line, std::size_t offset = 0)
        : text_(text), line_(line), pos_(offset) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(std::string_view token) {
        skip_space();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view token) {
        if (!accept(token)) fail("expected '" + std::string(token) + "'");
    }

    std::string identifier() {
        skip_space();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
        }
        if (start == pos_) fail("expected identifier");
        return std::string(text_.substr(start, pos_ - start));
    }

    std::size_t number() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected number");
        return std::stoul(std::string(text_.substr(start, pos_ - start)));
    }

    std::size_t column() const { return pos_ + 1; }
    std::size_t line() const { return line_; }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_, pos_ + 1, message); }
    [[noreturn]] void fail_at(std::size_t column, const std::string& message) const {
        throw ParseError(line_, column, message);
    }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_;
};

inline Term parse_term_at(LineCursor& cur, const Signature& sig) {
    cur.skip_space();
    std::size_t col = cur.column();
    std::string name = cur.identifier();
    std::vector<Term> args;
    bool parens = false;
    if (cur.accept("(")) {
        parens = true;
        if (!cur.accept(")")) {
            do {
                args.push_back(parse_term_at(cur, sig));
            } while (cur.accept(","));
            cur.expect(")");
        }
    }
    if (!sig.is_declared(name)) {
        if (parens) cur.fail_at(col, "undeclared symbol '" + name + "'");
        return Term::var(name);
    }
    std::size_t expected = sig.arity(name);
    if (args.size() != expected)
        cur.fail_at(col, "arity mismatch: '" + name + "' expects " + std::to_string(expected) +
                             " argument(s), got " + std::to_string(args.size()));
    return Term::app(name, std::move(args));
}

inline std::string strip_comment(const std::string& line) {
    auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

}  // namespace detail

/// Parses a single term against the signature; the whole text must be consumed.
inline Term parse_term(std::string_view text, const Signature& sig) {
    detail::LineCursor cur(text, 1);
    Term t = detail::parse_term_at(cur, sig);
    if (!cur.at_end()) cur.fail("unexpected trailing input");
    return t;
}

inline Program parse_program(std::istream& in) {
    enum class Section { None, Constructors, Functions, Precedence, Main, Rules };
    Program program;
    Section section = Section::None;
    std::string main_name;
    std::size_t main_line = 0;
    std::vector<std::vector<std::string>> prec_classes;
    std::size_t prec_line = 0;
    bool saw_precedence = false;
    struct PendingRule {
        std::string text;
        std::size_t line;
        std::size_t offset;
    };
    std::vector<PendingRule> pending;

    auto parse_constructors = [&](detail::LineCursor& cur) {
        while (!cur.at_end()) {
            cur.skip_space();
            std::size_t col = cur.column();
            std::string name = cur.identifier();
            cur.expect("/");
            std::size_t arity = cur.number();
            try {
                program.signature.add_constructor(name, arity);
            } catch (const SignatureError& e) {
                cur.fail_at(col, e.what());
            }
            if (!cur.accept(",")) break;
        }
        if (!cur.at_end()) cur.fail("unexpected input in constructor list");
    };

    auto parse_functions = [&](detail::LineCursor& cur) {
        while (!cur.at_end()) {
            cur.skip_space();
            std::size_t col = cur.column();
            std::string name = cur.identifier();
            cur.expect("/");
            std::size_t arity = cur.number();
            std::optional<ValencyVector> valency;
            if (cur.accept("valency")) {
                cur.expect("(");
                ValencyVector v;
                do {
                    std::size_t bit = cur.number();
                    if (bit > 1) cur.fail("valency entries must be 0 or 1");
                    v.push_back(static_cast<int>(bit));
                } while (cur.accept(","));
                cur.expect(")");
                valency = std::move(v);
            }
            try {
                program.signature.add_function(name, arity, std::move(valency));
            } catch (const SignatureError& e) {
                cur.fail_at(col, e.what());
            }
            if (!cur.accept(",")) break;
        }
        if (!cur.at_end()) cur.fail("unexpected input in function list");
    };

    auto parse_precedence = [&](detail::LineCursor& cur) {
        if (cur.at_end()) return;
        saw_precedence = true;
        prec_line = cur.line();
        if (prec_classes.empty()) prec_classes.emplace_back();
        else if (!cur.accept("<")) cur.fail("expected '<' continuing precedence");
        else prec_classes.emplace_back();
        prec_classes.back().push_back(cur.identifier());
        while (!cur.at_end()) {
            if (cur.accept("=")) prec_classes.back().push_back(cur.identifier());
            else if (cur.accept("<")) prec_classes.push_back({cur.identifier()});
            else cur.fail("expected '=' or '<' in precedence");
        }
    };

    static const std::pair<std::string_view, Section> headers[] = {
        {"constructors:", Section::Constructors}, {"functions:", Section::Functions},
        {"precedence:", Section::Precedence},     {"main:", Section::Main},
        {"rules:", Section::Rules},
    };

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = detail::strip_comment(raw);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        detail::LineCursor cur(line, line_no);
        if (cur.at_end()) continue;

        for (const auto& [header, sec] : headers) {
            if (cur.accept(header)) {
                section = sec;
                break;
            }
        }
        if (cur.at_end()) continue;
        switch (section) {
            case Section::None:
                cur.fail("expected a section header (constructors:, functions:, precedence:, main:, rules:)");
            case Section::Constructors:
                parse_constructors(cur);
                break;
            case Section::Functions:
                parse_functions(cur);
                break;
            case Section::Precedence:
                parse_precedence(cur);
                break;
            case Section::Main:
                if (!main_name.empty()) cur.fail("main declared twice");
                main_line = line_no;
                main_name = cur.identifier();
                if (!cur.at_end()) cur.fail("unexpected input after main symbol");
                break;
            case Section::Rules:
                cur.skip_space();
                pending.push_back({line, line_no, cur.column() - 1});
                break;
        }
    }

    auto& sig = program.signature;
    if (!sig.has_constant()) throw ParseError(line_no == 0 ? 1 : line_no, 1, "signature needs a 0-ary constructor");
    if (main_name.empty()) {
        if (sig.functions().empty()) throw ParseError(line_no == 0 ? 1 : line_no, 1, "no defined symbols declared");
        main_name = sig.functions().front().name;
    }
    if (!sig.is_defined(main_name))
        throw ParseError(main_line, 1, "main symbol '" + main_name + "' is not a declared function");
    sig.set_main(main_name);

    if (saw_precedence) {
        for (const auto& cls : prec_classes)
            for (const auto& name : cls)
                if (!sig.is_defined(name))
                    throw ParseError(prec_line, 1, "precedence mentions undeclared function '" + name + "'");
        try {
            program.precedence = Precedence::from_classes(prec_classes);
        } catch (const PrecedenceError& e) {
            throw ParseError(prec_line, 1, e.what());
        }
        for (const auto& f : sig.functions())
            if (!program.precedence->contains(f.name))
                throw ParseError(prec_line, 1, "precedence does not rank function '" + f.name + "'");
    }

    for (const auto& pr : pending) {
        detail::LineCursor cur(pr.text, pr.line, pr.offset);
        Term lhs = detail::parse_term_at(cur, sig);
        cur.expect("->");
        Term rhs = detail::parse_term_at(cur, sig);
        if (!cur.at_end()) cur.fail("unexpected input after rule");
        program.rules.push_back({std::move(lhs), std::move(rhs)});
    }
    return program;
}

inline Program parse_program(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_program(in);
}

inline Program load_program(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_program(in);
}

/// Serializes a program; valencies and precedence are written when present.
inline std::string write_program(const Program& p, const std::optional<Valency>& valency = std::nullopt) {
    std::ostringstream out;
    const auto& sig = p.signature;
    out << "constructors: ";
    for (std::size_t i = 0; i < sig.constructors().size(); ++i) {
        if (i) out << ", ";
        out << sig.constructors()[i].name << "/" << sig.constructors()[i].arity;
    }
    out << "\nfunctions:    ";
    for (std::size_t i = 0; i < sig.functions().size(); ++i) {
        const auto& f = sig.functions()[i];
        if (i) out << ", ";
        out << f.name << "/" << f.arity;
        std::optional<ValencyVector> v = f.valency;
        if (valency && valency->contains(f.name)) v = valency->of(f.name);
        if (v) out << " valency" << valency_to_string(*v);
    }
    out << "\n";
    if (p.precedence) out << "precedence:   " << p.precedence->to_string() << "\n";
    out << "main:         " << sig.main() << "\nrules:\n";
    for (const auto& r : p.rules) out << "  " << r.to_string() << "\n";
    return out.str();
}

}  // namespace llpo
