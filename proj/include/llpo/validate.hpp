#pragma once

#include <string>
#include <vector>

#include "llpo/term.hpp"

namespace llpo {

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity;
    std::size_t rule;  // 0-based rule index
    std::string message;

    std::string to_string() const {
        return std::string(severity == Severity::Error ? "error" : "warning") + ": rule " +
               std::to_string(rule + 1) + ": " + message;
    }
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::Error) return true;
    return false;
}

namespace detail {

inline Term resolve(const Term& t, const Substitution& s) {
    if (t.is_var()) {
        auto it = s.find(t.name());
        return it == s.end() ? t : resolve(it->second, s);
    }
    return t;
}

inline bool occurs(const std::string& x, const Term& t, const Substitution& s) {
    Term r = resolve(t, s);
    if (r.is_var()) return r.name() == x;
    for (const auto& a : r.args())
        if (occurs(x, a, s)) return true;
    return false;
}

inline bool unify_into(const Term& a, const Term& b, Substitution& s) {
    Term x = resolve(a, s);
    Term y = resolve(b, s);
    if (x.is_var() && y.is_var() && x.name() == y.name()) return true;
    if (x.is_var()) {
        if (occurs(x.name(), y, s)) return false;
        s.emplace(x.name(), y);
        return true;
    }
    if (y.is_var()) return unify_into(y, x, s);
    if (x.name() != y.name() || x.arity() != y.arity()) return false;
    for (std::size_t i = 0; i < x.arity(); ++i)
        if (!unify_into(x.arg(i), y.arg(i), s)) return false;
    return true;
}

inline Term rename(const Term& t, const std::string& suffix) {
    if (t.is_var()) return Term::var(t.name() + suffix);
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(rename(a, suffix));
    return Term::app(t.name(), std::move(args));
}

}  // namespace detail

/// Most general unifier of two terms, fully resolved.
inline std::optional<Substitution> unify(const Term& a, const Term& b) {
    Substitution s;
    if (!detail::unify_into(a, b, s)) return std::nullopt;
    Substitution out;
    for (const auto& [x, _] : s) {
        Term t = Term::var(x);
        // resolve to a fixpoint
        Term prev = t;
        do {
            prev = t;
            t = substitute(t, s);
        } while (!(t == prev));
        out.emplace(x, t);
    }
    return out;
}

inline bool is_left_linear(const Term& lhs) {
    std::vector<std::string> seen;
    std::function<bool(const Term&)> walk = [&](const Term& t) {
        if (t.is_var()) {
            if (std::find(seen.begin(), seen.end(), t.name()) != seen.end()) return false;
            seen.push_back(t.name());
            return true;
        }
        for (const auto& a : t.args())
            if (!walk(a)) return false;
        return true;
    };
    return walk(lhs);
}

/// Errors for malformed rules; warnings for non-left-linear or overlapping
/// left-hand sides. No diagnostics means the program is orthogonal.
inline std::vector<Diagnostic> validate_program(const Program& p) {
    std::vector<Diagnostic> out;
    const auto& sig = p.signature;
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
        const auto& r = p.rules[i];
        for (const Term* side : {&r.lhs, &r.rhs}) {
            try {
                sig.check_term(*side);
            } catch (const SignatureError& e) {
                out.push_back({Severity::Error, i, e.what()});
            }
        }
        if (r.lhs.is_var() || !sig.is_defined(r.lhs.name())) {
            out.push_back({Severity::Error, i, "lhs must be rooted at a defined symbol"});
        } else {
            for (const auto& a : r.lhs.args())
                if (!sig.is_constructor_term(a))
                    out.push_back({Severity::Error, i, "lhs argument " + a.to_string() + " is not a pattern"});
        }
        auto lhs_vars = variables_of(r.lhs);
        for (const auto& x : variables_of(r.rhs))
            if (std::find(lhs_vars.begin(), lhs_vars.end(), x) == lhs_vars.end())
                out.push_back({Severity::Error, i, x + " not in Var(lhs)"});
        if (!is_left_linear(r.lhs)) out.push_back({Severity::Warning, i, "lhs is not left-linear"});
    }
    for (std::size_t i = 0; i < p.rules.size(); ++i)
        for (std::size_t j = i + 1; j < p.rules.size(); ++j) {
            const auto& a = p.rules[i].lhs;
            Term b = detail::rename(p.rules[j].lhs, "'");
            if (a.is_var() || b.is_var() || a.name() != b.name()) continue;
            if (auto mgu = unify(a, b)) {
                std::string binding;
                for (const auto& [x, t] : *mgu) {
                    if (!binding.empty()) binding += ", ";
                    binding += x + " -> " + t.to_string();
                }
                out.push_back({Severity::Warning, j,
                               "lhs overlaps rule " + std::to_string(i + 1) + " (mgu {" + binding + "})"});
            }
        }
    return out;
}

}  // namespace llpo
