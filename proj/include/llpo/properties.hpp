#pragma once

// Seeded random checks of the ordering laws: <1 inside <0 inside the
// lexicographic path ordering, the subterm property, monotonicity in
// valency-1 positions, irreflexivity and same-root <1-incomparability.

#include <map>
#include <random>
#include <string>

#include "llpo/baseline.hpp"
#include "llpo/generators.hpp"
#include "llpo/llpo_order.hpp"

namespace llpo {

struct PropertyStats {
    std::size_t checked = 0;
    std::size_t counterexamples = 0;
    std::string example;  // first counterexample

    void record(bool holds, const std::string& what) {
        ++checked;
        if (holds) return;
        if (counterexamples++ == 0) example = what;
    }
};

struct PropertyReport {
    std::size_t pairs = 0;
    std::map<std::string, PropertyStats> properties;

    bool ok() const {
        return std::all_of(properties.begin(), properties.end(),
                           [](const auto& kv) { return kv.second.counterexamples == 0; });
    }
};

/// Three constructors a/0, s/1, t/1 and three defined symbols f/2, g/1, h/2.
inline Signature property_signature() {
    Signature sig;
    sig.add_constructor("a", 0);
    sig.add_constructor("s", 1);
    sig.add_constructor("t", 1);
    sig.add_function("f", 2);
    sig.add_function("g", 1);
    sig.add_function("h", 2);
    sig.set_main("f");
    return sig;
}

struct OrderingSetup {
    Valency valency;
    Precedence precedence;
};

/// Uniform valencies and a random pre-order whose classes agree on arity
/// and valency.
inline OrderingSetup random_setup(const Signature& sig, std::mt19937_64& rng) {
    while (true) {
        Valency nu;
        std::map<std::string, std::size_t> ranks;
        for (const auto& f : sig.functions()) {
            ValencyVector v(f.arity);
            for (auto& b : v) b = std::uniform_int_distribution<int>(0, 1)(rng);
            nu.set(f.name, v);
            ranks[f.name] = std::uniform_int_distribution<std::size_t>(0, sig.functions().size() - 1)(rng);
        }
        Precedence prec = Precedence::from_ranks(ranks);
        try {
            check_class_agreement(sig, nu, prec);
        } catch (const PrecedenceError&) {
            continue;
        }
        return {nu, prec};
    }
}

namespace detail {

inline void proper_subterms(const Term& t, std::vector<Term>& out) {
    for (const auto& a : t.args()) {
        out.push_back(a);
        proper_subterms(a, out);
    }
}

inline bool has_symbol_above(const Term& t, const std::string& f, const Signature& sig, const Precedence& prec) {
    if (t.is_var()) return false;
    if (sig.is_defined(t.name()) && prec.less(f, t.name())) return true;
    return std::any_of(t.args().begin(), t.args().end(),
                       [&](const Term& a) { return has_symbol_above(a, f, sig, prec); });
}

/// Random term over constructors, variables and defined symbols strictly below f.
inline Term term_below(const std::string& f, const Signature& sig, const Precedence& prec, std::mt19937_64& rng,
                       std::size_t budget) {
    std::vector<std::pair<std::string, std::size_t>> inner;
    for (const auto& c : sig.constructors())
        if (c.arity > 0 && c.arity < budget) inner.push_back({c.name, c.arity});
    for (const auto& g : sig.functions())
        if (prec.less(g.name, f) && g.arity < budget) inner.push_back({g.name, g.arity});
    if (budget <= 1 || inner.empty() || std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
        if (std::uniform_int_distribution<int>(0, 1)(rng)) return Term::var("z");
        for (const auto& c : sig.constructors())
            if (c.arity == 0) return Term::app(c.name);
    }
    auto [name, arity] = inner[std::uniform_int_distribution<std::size_t>(0, inner.size() - 1)(rng)];
    std::vector<Term> args;
    std::size_t share = std::max<std::size_t>(1, (budget - 1) / arity);
    for (std::size_t i = 0; i < arity; ++i) args.push_back(term_below(f, sig, prec, rng, share));
    return Term::app(name, std::move(args));
}

}  // namespace detail

/// Draws `pairs` term pairs of size at most max_size (a fresh valency and
/// precedence every 50 pairs) and checks each law where it applies.
inline PropertyReport run_ordering_properties(std::uint64_t seed, std::size_t pairs, std::size_t max_size = 7) {
    Signature sig = property_signature();
    std::mt19937_64 rng(seed);
    TermGenerator gen(sig, seed ^ 0x9e3779b97f4a7c15ULL);
    PropertyReport report;
    auto& p1_in_p0 = report.properties["prec1 implies prec0"];
    auto& p0_in_lpo = report.properties["prec0 implies lpo"];
    auto& replay = report.properties["proofs replay"];
    auto& subterm = report.properties["subterm property"];
    auto& mono = report.properties["valency-1 monotonicity"];
    auto& irrefl = report.properties["irreflexivity"];
    auto& same_root = report.properties["same-root prec1 incomparability"];
    auto& same_root_clause = report.properties["same-root prec1 proofs use clause 3"];

    OrderingSetup setup = random_setup(sig, rng);
    for (std::size_t i = 0; i < pairs; ++i) {
        if (i % 50 == 0) setup = random_setup(sig, rng);
        const auto& nu = setup.valency;
        const auto& prec = setup.precedence;
        Term t = gen.term(max_size);
        Term s = [&] {
            std::vector<Term> subs;
            detail::proper_subterms(t, subs);
            int mode = std::uniform_int_distribution<int>(0, 2)(rng);
            if (mode == 1 && !subs.empty()) {
                // A subterm of t, sometimes wrapped once more.
                Term u = subs[std::uniform_int_distribution<std::size_t>(0, subs.size() - 1)(rng)];
                if (std::uniform_int_distribution<int>(0, 1)(rng)) u = Term::app("s", {u});
                return u;
            }
            if (mode == 2 && !t.is_var() && sig.is_defined(t.name())) {
                // Same root as t.
                std::vector<Term> args;
                for (std::size_t k = 0; k < t.arity(); ++k) args.push_back(gen.term(3));
                return Term::app(t.name(), std::move(args));
            }
            return gen.term(max_size);
        }();
        ++report.pairs;
        std::string pair = s.to_string() + " vs " + t.to_string() + " under " + prec.to_string();

        LlpoDecider dec(sig, nu, prec);
        ProofPtr pf1 = dec.prec1(s, t);
        ProofPtr pf0 = dec.prec0(s, t);
        if (pf1) p1_in_p0.record(pf0 != nullptr, pair);
        if (pf0) p0_in_lpo.record(lpo(s, t, sig, prec), pair);
        for (const auto& pf : {pf1, pf0})
            if (pf) replay.record(replay_proof(*pf, sig, nu, prec), pair);

        for (const auto& u : {s, t}) {
            irrefl.record(!dec.prec1(u, u) && !dec.prec0(u, u), u.to_string());
            std::vector<Term> subs;
            detail::proper_subterms(u, subs);
            for (const auto& v : subs) subterm.record(dec.prec0(v, u) != nullptr, v.to_string() + " in " + u.to_string());
        }

        if (pf1) {
            // Place s and t at a valency-1 position of a random defined symbol.
            const auto& fns = sig.functions();
            const auto& f = fns[std::uniform_int_distribution<std::size_t>(0, fns.size() - 1)(rng)];
            std::vector<std::size_t> normal;
            for (std::size_t k = 0; k < f.arity; ++k)
                if (nu.at(f.name, k) == 1) normal.push_back(k);
            if (!normal.empty()) {
                std::size_t at = normal[std::uniform_int_distribution<std::size_t>(0, normal.size() - 1)(rng)];
                std::vector<Term> ctx;
                for (std::size_t k = 0; k < f.arity; ++k) {
                    if (k == at) ctx.push_back(s);
                    else if (k < at || nu.at(f.name, k) == 1) ctx.push_back(gen.term(4));
                    else ctx.push_back(detail::term_below(f.name, sig, prec, rng, 4));
                }
                Term lhs = Term::app(f.name, ctx);
                ctx[at] = t;
                Term rhs = Term::app(f.name, ctx);
                mono.record(dec.prec0(lhs, rhs) != nullptr, lhs.to_string() + " vs " + rhs.to_string());
            }
        }

        if (!s.is_var() && !t.is_var() && s.name() == t.name() && sig.is_defined(s.name())) {
            if (pf1) same_root_clause.record(pf1->clause == 3, pair);
            if (!contains_subterm(t, s) && !detail::has_symbol_above(t, s.name(), sig, prec))
                same_root.record(pf1 == nullptr, pair);
        }
    }
    return report;
}

}  // namespace llpo
