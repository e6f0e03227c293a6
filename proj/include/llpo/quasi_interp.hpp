#pragma once

// The quasi-interpretation built from F_k(X) = X^(d^(d^k)), its bound
// polynomials, and empirical checks of the decrease and space bounds along
// actual derivations.

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "llpo/certifier.hpp"
#include "llpo/qivalue.hpp"
#include "llpo/rewrite.hpp"

namespace llpo {

/// max(2, 1 + largest rhs size).
inline unsigned long choose_d(const Program& p) {
    std::size_t biggest = 0;
    for (const auto& r : p.rules) biggest = std::max(biggest, r.rhs.size());
    return std::max<unsigned long>(2, biggest + 1);
}

/// d^(d^k).
inline mpz_class fk_exponent(std::size_t k, unsigned long d, std::size_t digit_cap = kDefaultDigitCap) {
    if (d < 2) throw std::invalid_argument("d must be at least 2");
    mpz_class dk;
    mpz_ui_pow_ui(dk.get_mpz_t(), d, k);
    double digits = mpz_get_d(dk.get_mpz_t()) * std::log10(static_cast<double>(d));
    if (!dk.fits_ulong_p() || digits > static_cast<double>(digit_cap))
        throw MagnitudeError("exponent of F_" + std::to_string(k) + " for d=" + std::to_string(d) +
                             " exceeds the digit cap");
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), d, dk.get_ui());
    return e;
}

inline QIValue F(std::size_t k, const QIValue& x, unsigned long d, std::size_t digit_cap = kDefaultDigitCap) {
    return power(x, fk_exponent(k, d, digit_cap), digit_cap);
}

/// F_k applied alpha times.
inline QIValue F_iter(std::size_t k, std::size_t alpha, QIValue x, unsigned long d,
                      std::size_t digit_cap = kDefaultDigitCap) {
    mpz_class e = fk_exponent(k, d, digit_cap);
    for (std::size_t i = 0; i < alpha; ++i) x = power(x, e, digit_cap);
    return x;
}

struct QIContext {
    unsigned long d = 2;
    std::map<std::string, std::size_t> rank;  // defined symbols; constructors are rank 0
    Valency valency;
    std::size_t digit_cap = kDefaultDigitCap;
};

inline QIContext make_qi_context(const Program& p, const Valency& nu, const Precedence& prec,
                                 std::size_t digit_cap = kDefaultDigitCap) {
    QIContext ctx{choose_d(p), {}, nu, digit_cap};
    for (const auto& f : p.signature.functions()) ctx.rank[f.name] = prec.level(f.name);
    return ctx;
}

inline QIContext make_qi_context(const Program& p, const Certificate& cert, std::size_t digit_cap = kDefaultDigitCap) {
    return make_qi_context(p, cert.valency, cert.precedence, digit_cap);
}

/// Interpretation of ground terms, memoized per term node.
class QIEvaluator {
public:
    QIEvaluator(const Signature& sig, QIContext ctx) : sig_(sig), ctx_(std::move(ctx)) {}

    const QIContext& context() const { return ctx_; }

    QIValue operator()(const Term& t) { return eval(t); }

private:
    const QIValue& eval(const Term& t) {
        if (auto it = cache_.find(t.id()); it != cache_.end()) return it->second.second;
        QIValue v = compute(t);
        return cache_.emplace(t.id(), std::make_pair(t, std::move(v))).first->second.second;
    }

    QIValue compute(const Term& t) {
        if (t.is_var()) throw std::invalid_argument("cannot interpret variable " + t.name());
        const QIValue d(ctx_.d);
        if (sig_.is_constructor(t.name())) return t.arity() == 0 ? d : eval(t.arg(0)) + d;
        auto rank = ctx_.rank.find(t.name());
        if (rank == ctx_.rank.end()) throw std::invalid_argument("no rank for " + t.name());
        QIValue sum, safe;
        for (std::size_t i = 0; i < t.arity(); ++i) {
            const QIValue& a = eval(t.arg(i));
            if (ctx_.valency.at(t.name(), i) == 1) sum = sum + a;
            else safe = qi_max(safe, a, ctx_.digit_cap);
        }
        return F(rank->second, qi_max(d, sum, ctx_.digit_cap), ctx_.d, ctx_.digit_cap) + safe;
    }

    const Signature& sig_;
    QIContext ctx_;
    std::unordered_map<const void*, std::pair<Term, QIValue>> cache_;
};

inline QIValue qi(const Term& t, const Signature& sig, const QIContext& ctx) { return QIEvaluator(sig, ctx)(t); }

/// P(X) = F_k(dX) + dX.
struct BoundPoly {
    std::size_t k = 1;
    unsigned long d = 2;

    QIValue eval(const mpz_class& x, std::size_t digit_cap = kDefaultDigitCap) const {
        mpz_class dx = x * d;
        return F(k, QIValue(dx), d, digit_cap) + QIValue(dx);
    }

    std::string to_string() const {
        std::string ds = std::to_string(d);
        return "P(X) = F_" + std::to_string(k) + "(" + ds + "X) + " + ds + "X";
    }
};

inline BoundPoly bound_poly(const Program& p, const Precedence& prec, const std::string& f) {
    if (!p.signature.is_defined(f)) throw std::invalid_argument(f + " is not a defined symbol");
    return {prec.level(f), choose_d(p)};
}

// ---------------------------------------------------------------------------
// Empirical checks along derivations

using InputTuple = std::vector<Term>;

inline std::string tuple_to_string(const InputTuple& args) {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? ", " : "") + args[i].to_string();
    return out + ")";
}

struct DecreaseReport {
    std::size_t inputs = 0;
    std::size_t steps = 0;        // checks of [[next]] <= [[prev]]
    std::size_t root_checks = 0;  // checks of [[r sigma]] < [[l sigma]]
    std::size_t unverified = 0;
    std::vector<std::string> violations;
    std::vector<std::string> notes;  // first few unverified cases

    bool ok() const { return violations.empty(); }
};

/// Runs each main(args) to normal form and checks that the interpretation
/// never grows along the derivation and strictly drops at every redex.
inline DecreaseReport verify_decrease(const Program& p, const Certificate& cert, const std::vector<InputTuple>& inputs,
                                      std::size_t fuel = 1'000'000, std::size_t digit_cap = kDefaultDigitCap) {
    DecreaseReport report;
    RuleIndex index(p);
    QIContext ctx = make_qi_context(p, cert, digit_cap);
    auto note = [&](std::string s) {
        ++report.unverified;
        if (report.notes.size() < 10) report.notes.push_back(std::move(s));
    };
    for (const auto& args : inputs) {
        ++report.inputs;
        QIEvaluator interp(p.signature, ctx);
        Term cur = Term::app(p.signature.main(), args);
        for (std::size_t n = 0;; ++n) {
            if (n == fuel) throw FuelExhausted(fuel);
            auto step = rewrite_step(index, cur);
            if (!step) break;
            std::string where = "input " + tuple_to_string(args) + " step " + std::to_string(n + 1);
            try {
                ++report.steps;
                auto c = compare(interp(step->result), interp(cur), digit_cap);
                if (!c) note(where + ": [[next]] <= [[prev]] undecided");
                else if (*c == std::strong_ordering::greater)
                    report.violations.push_back(where + ": interpretation grows from " + cur.to_string() + " to " +
                                                step->result.to_string());
                ++report.root_checks;
                const Term& l = subterm_at(cur, step->position);
                const Term& r = subterm_at(step->result, step->position);
                auto s = compare(interp(r), interp(l), digit_cap);
                if (!s) note(where + ": [[r sigma]] < [[l sigma]] undecided");
                else if (*s != std::strong_ordering::less)
                    report.violations.push_back(where + ": rule " + std::to_string(step->rule + 1) +
                                                " does not decrease at " + l.to_string());
            } catch (const MagnitudeError& e) {
                note(where + ": " + e.what());
            }
            cur = step->result;
        }
    }
    return report;
}

struct SpaceReport {
    std::size_t inputs = 0;
    std::size_t checks = 0;
    std::size_t unverified = 0;
    std::size_t undefined = 0;  // inputs on which call-by-value evaluation is stuck
    std::size_t max_height = 0;
    std::size_t max_constructor_size = 0;
    std::size_t max_h = 0;
    std::size_t max_bindings = 0;
    std::size_t max_binding_size = 0;
    std::vector<std::string> violations;
    std::vector<std::string> notes;

    bool ok() const { return violations.empty(); }
};

namespace detail {

/// Largest ground constructor subterm.
inline std::size_t largest_constructor_subterm(const Term& t, const Signature& sig) {
    if (sig.is_value(t)) return t.size();
    std::size_t best = 0;
    for (const auto& a : t.args()) best = std::max(best, largest_constructor_subterm(a, sig));
    return best;
}

}  // namespace detail

/// For each input of total size N, checks heights along the derivation,
/// constructor subterm sizes, the interpreter's h and its bound values
/// against P(N), and its live bindings against max-arity * h.
inline SpaceReport space_report(const Program& p, const Certificate& cert, const std::vector<InputTuple>& inputs,
                                std::size_t fuel = 1'000'000, std::size_t digit_cap = kDefaultDigitCap) {
    SpaceReport report;
    const auto& main = p.signature.main();
    BoundPoly P = bound_poly(p, cert.precedence, main);
    std::map<std::size_t, QIValue> bounds;
    std::size_t max_arity = p.signature.max_arity();

    for (const auto& args : inputs) {
        ++report.inputs;
        std::size_t N = 0;
        for (const auto& a : args) N += a.size();
        std::string who = "input " + tuple_to_string(args);
        auto it = bounds.find(N);
        if (it == bounds.end()) it = bounds.emplace(N, P.eval(mpz_class(static_cast<unsigned long>(N)), digit_cap)).first;
        const QIValue& bound = it->second;
        auto within = [&](std::size_t v, const std::string& what) {
            ++report.checks;
            auto c = compare(QIValue(static_cast<unsigned long>(v)), bound, digit_cap);
            if (!c) {
                ++report.unverified;
                if (report.notes.size() < 10) report.notes.push_back(who + ": " + what + " undecided");
            } else if (*c == std::strong_ordering::greater) {
                report.violations.push_back(who + ": " + what + " = " + std::to_string(v) + " exceeds P(" +
                                            std::to_string(N) + ")");
            }
        };

        auto run = normalize(p, Term::app(main, args), fuel, true);
        if (run.status == NormalizeStatus::FuelExhausted) throw FuelExhausted(fuel);
        std::size_t height = Term::app(main, args).height();
        std::size_t csize = detail::largest_constructor_subterm(Term::app(main, args), p.signature);
        for (const auto& s : run.trace) {
            height = std::max(height, s.result.height());
            csize = std::max(csize, detail::largest_constructor_subterm(s.result, p.signature));
        }
        report.max_height = std::max(report.max_height, height);
        report.max_constructor_size = std::max(report.max_constructor_size, csize);
        within(height, "derivation height");
        within(csize, "constructor subterm size");

        Substitution sigma;
        std::vector<Term> vars;
        for (std::size_t i = 0; i < args.size(); ++i) {
            std::string x = "x" + std::to_string(i + 1);
            sigma.emplace(x, args[i]);
            vars.push_back(Term::var(x));
        }
        auto ev = cbv_eval(p, Term::app(main, vars), sigma, {fuel, EvalLimits{}.max_depth});
        if (ev.status != EvalStatus::Value) {
            ++report.undefined;
            continue;
        }
        report.max_h = std::max(report.max_h, ev.h);
        report.max_bindings = std::max(report.max_bindings, ev.max_bindings);
        report.max_binding_size = std::max(report.max_binding_size, ev.max_binding_size);
        within(ev.h, "interpreter h");
        within(ev.max_binding_size, "largest binding");
        ++report.checks;
        if (ev.max_bindings > max_arity * ev.h)
            report.violations.push_back(who + ": " + std::to_string(ev.max_bindings) + " live bindings exceed " +
                                        std::to_string(max_arity) + " * h = " + std::to_string(max_arity * ev.h));
    }
    return report;
}

}  // namespace llpo
