#pragma once

// Emitters for the two ramified recursion templates. Sub-functions (G, H,
// and the parameter substitutions) are declared as opaque symbols below F;
// the emitted fragment has rules for F only.

#include <string>
#include <vector>

#include "llpo/certifier.hpp"

namespace llpo {

enum class SchemaKind { Flat, ParamSubst };

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SchemaSpec {
    SchemaKind kind = SchemaKind::Flat;
    std::string f = "f";
    std::string g = "g";
    std::string h = "h";
    std::size_t params = 1;    // n: side parameters after the recursion argument
    std::size_t branches = 2;  // m: recursive calls in the step case (param_subst only)
    std::size_t recursion_tier = 1;
    std::vector<std::size_t> param_tiers;  // defaults to output_tier for every parameter
    std::size_t output_tier = 0;
    /// Recursive calls pass parameters unchanged instead of through substitution functions.
    bool identity_substitutions = false;
    std::vector<ConstructorDecl> constructors{{"b", 0}, {"c", 1}};
    std::vector<std::string> variables;  // defaults to x1..xn, recursion variable t
    /// When set, the emitted program extends this signature: its constructors
    /// are used and G, H and the substitutions must already be declared.
    std::optional<Signature> signature;

    const std::vector<ConstructorDecl>& constructor_list() const {
        return signature ? signature->constructors() : constructors;
    }

    std::size_t tier_of_param(std::size_t i) const {
        return param_tiers.empty() ? output_tier : param_tiers.at(i);
    }

    /// Name of the substitution function for parameter i (0-based) in branch j.
    std::string substitution_name(std::size_t i, std::size_t j) const {
        if (params == 1) return "delta" + std::to_string(j);
        return "sigma" + std::to_string(i + 1) + "_" + std::to_string(j);
    }
};

struct EmittedSchema {
    Program program;
    Valency valency;
};

namespace detail {

inline void check_schema_spec(const SchemaSpec& spec) {
    if (!spec.param_tiers.empty() && spec.param_tiers.size() != spec.params)
        throw SchemaError("expected " + std::to_string(spec.params) + " parameter tiers, got " +
                          std::to_string(spec.param_tiers.size()));
    for (std::size_t i = 0; i < spec.params; ++i)
        if (spec.tier_of_param(i) < spec.output_tier)
            throw SchemaError("parameter " + std::to_string(i + 1) + " has a tier below the output tier");
    if (spec.recursion_tier < spec.output_tier)
        throw SchemaError("recursion argument has a tier below the output tier");
    const auto& cs = spec.constructor_list();
    if (std::none_of(cs.begin(), cs.end(),
                     [](const ConstructorDecl& c) { return c.arity == 0; }))
        throw SchemaError("schema needs a 0-ary constructor");
    if (spec.kind == SchemaKind::ParamSubst && spec.branches == 0)
        throw SchemaError("recursion with parameter substitution needs at least one branch");
}

inline std::vector<Term> parameter_vars(const SchemaSpec& spec) {
    std::vector<Term> xs;
    for (std::size_t i = 0; i < spec.params; ++i)
        xs.push_back(Term::var(spec.variables.size() > i ? spec.variables[i] : "x" + std::to_string(i + 1)));
    return xs;
}

inline std::vector<Term> prepend(Term head, const std::vector<Term>& rest) {
    std::vector<Term> out{std::move(head)};
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

/// Tier-derived valency of F: 0 exactly where the argument sits at the output tier.
inline ValencyVector tier_valency(const SchemaSpec& spec) {
    ValencyVector v{spec.recursion_tier == spec.output_tier ? 0 : 1};
    for (std::size_t i = 0; i < spec.params; ++i) v.push_back(spec.tier_of_param(i) == spec.output_tier ? 0 : 1);
    return v;
}

inline Signature initial_signature(const SchemaSpec& spec) {
    if (spec.signature) return *spec.signature;
    Signature sig;
    for (const auto& c : spec.constructors) sig.add_constructor(c.name, c.arity);
    return sig;
}

/// Declares a sub-function, or checks the caller's declaration. F itself may
/// be new either way.
inline void declare(Signature& sig, const SchemaSpec& spec, const std::string& name, std::size_t arity,
                    const ValencyVector& valency, bool opaque = true) {
    if (spec.signature && sig.is_declared(name)) {
        if (!sig.is_defined(name) || sig.arity(name) != arity)
            throw SchemaError(name + " must be a defined symbol of arity " + std::to_string(arity));
        sig.set_valency(name, valency);
        return;
    }
    if (spec.signature && opaque) throw SchemaError(name + " is not declared");
    sig.add_function(name, arity, valency);
}

}  // namespace detail

/// F(b, xs) -> G(b, xs) for each constant b, F(c(t), xs) -> H(t, xs) for
/// each successor c; G, H < F.
inline EmittedSchema emit_flat_recursion(const SchemaSpec& spec) {
    detail::check_schema_spec(spec);
    const std::size_t arity = spec.params + 1;
    EmittedSchema out;
    auto& sig = out.program.signature;
    sig = detail::initial_signature(spec);
    ValencyVector fv = detail::tier_valency(spec);
    detail::declare(sig, spec, spec.f, arity, fv, false);
    detail::declare(sig, spec, spec.g, arity, fv);
    detail::declare(sig, spec, spec.h, arity, fv);
    sig.set_main(spec.f);
    for (const auto& decl : {spec.f, spec.g, spec.h}) out.valency.set(decl, fv);

    auto xs = detail::parameter_vars(spec);
    Term t = Term::var("t");
    for (const auto& c : sig.constructors()) {
        if (c.arity == 0) {
            Term b = Term::app(c.name);
            out.program.rules.push_back(
                {Term::app(spec.f, detail::prepend(b, xs)), Term::app(spec.g, detail::prepend(b, xs))});
        } else {
            out.program.rules.push_back({Term::app(spec.f, detail::prepend(Term::app(c.name, {t}), xs)),
                                         Term::app(spec.h, detail::prepend(t, xs))});
        }
    }
    out.program.precedence = Precedence::from_classes({{spec.g}, {spec.h}, {spec.f}});
    return out;
}

/// F(b, xs) -> G(xs) and F(c(t), xs) -> H(t, xs, A_1, .., A_m) with
/// A_j = F(t, sigma_1^j(xs), .., sigma_n^j(xs)). Parameters above the output
/// tier are passed unchanged. With no parameters the base case keeps the
/// constant, G(b), since defined symbols need positive arity.
inline EmittedSchema emit_param_subst_recursion(const SchemaSpec& spec) {
    if (spec.recursion_tier <= spec.output_tier)
        throw SchemaError("recursion argument tier " + std::to_string(spec.recursion_tier) +
                          " must exceed output tier " + std::to_string(spec.output_tier));
    detail::check_schema_spec(spec);
    const std::size_t n = spec.params;
    const std::size_t m = spec.branches;
    EmittedSchema out;
    auto& sig = out.program.signature;
    sig = detail::initial_signature(spec);

    ValencyVector fv = detail::tier_valency(spec);
    ValencyVector gv = n == 0 ? ValencyVector{1} : ValencyVector(fv.begin() + 1, fv.end());
    ValencyVector hv = fv;
    hv.insert(hv.end(), m, 0);
    detail::declare(sig, spec, spec.f, n + 1, fv, false);
    detail::declare(sig, spec, spec.g, std::max<std::size_t>(n, 1), gv);
    detail::declare(sig, spec, spec.h, n + 1 + m, hv);
    out.valency.set(spec.f, fv);
    out.valency.set(spec.g, gv);
    out.valency.set(spec.h, hv);

    std::vector<std::string> substitutions;
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            if (spec.identity_substitutions || fv[i + 1] == 1) continue;
            auto name = spec.substitution_name(i, j);
            detail::declare(sig, spec, name, n, ValencyVector(n, 0));
            out.valency.set(name, ValencyVector(n, 0));
            substitutions.push_back(name);
        }
    sig.set_main(spec.f);

    auto xs = detail::parameter_vars(spec);
    Term t = Term::var("t");
    for (const auto& c : sig.constructors()) {
        if (c.arity == 0) {
            Term b = Term::app(c.name);
            Term rhs = n == 0 ? Term::app(spec.g, {b}) : Term::app(spec.g, xs);
            out.program.rules.push_back({Term::app(spec.f, detail::prepend(b, xs)), rhs});
            continue;
        }
        std::vector<Term> h_args = detail::prepend(t, xs);
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<Term> call{t};
            for (std::size_t i = 0; i < n; ++i) {
                if (spec.identity_substitutions || fv[i + 1] == 1) call.push_back(xs[i]);
                else call.push_back(Term::app(spec.substitution_name(i, j), xs));
            }
            h_args.push_back(Term::app(spec.f, std::move(call)));
        }
        out.program.rules.push_back(
            {Term::app(spec.f, detail::prepend(Term::app(c.name, {t}), xs)), Term::app(spec.h, std::move(h_args))});
    }

    std::vector<std::vector<std::string>> classes;
    if (!substitutions.empty()) classes.push_back(substitutions);
    classes.push_back({spec.g});
    classes.push_back({spec.h});
    classes.push_back({spec.f});
    out.program.precedence = Precedence::from_classes(classes);
    return out;
}

inline EmittedSchema emit_schema(const SchemaSpec& spec) {
    return spec.kind == SchemaKind::Flat ? emit_flat_recursion(spec) : emit_param_subst_recursion(spec);
}

}  // namespace llpo
