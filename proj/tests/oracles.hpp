#pragma once

// Hand-built expectations shared by the unit tests and the acceptance run.

#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "llpo/parser.hpp"
#include "llpo/proof.hpp"

namespace oracle {

/// A sequent: relation, both sides as text and the clause that closes it.
struct Node {
    llpo::Relation relation;
    int clause;
    std::string left;
    std::string right;
    std::vector<Node> premises;
};

inline Node eq(const std::string& t) { return {llpo::Relation::Equal, 0, t, t, {}}; }

/// Expected derivation of h(x, y, f(x, delta0(y)), f(x, delta1(y))) <0 f(c(x), y),
/// with one recursive-call branch per delta.
inline Node param_subst_tree() {
    using llpo::Relation;
    const std::string top = "f(c(x), y)";
    Node x_lt_cx{Relation::Prec1, 1, "x", "c(x)", {eq("x")}};
    Node x_lt_top{Relation::Prec1, 3, "x", top, {x_lt_cx}};
    Node y_lt_top{Relation::Prec0, 1, "y", top, {eq("y")}};
    auto branch = [&](const std::string& delta) {
        Node d{Relation::Prec0, 3, delta + "(y)", top, {y_lt_top}};
        return Node{Relation::Prec0, 4, "f(x, " + delta + "(y))", top, {x_lt_cx, d}};
    };
    return {Relation::Prec0, 3, "h(x, y, f(x, delta0(y)), f(x, delta1(y)))", top,
            {x_lt_top, y_lt_top, branch("delta0"), branch("delta1")}};
}

/// Empty string when the proof has the same shape, sequents and clauses.
inline std::string diff(const llpo::OrderProof& pf, const Node& want, const std::string& path = "root") {
    if (pf.relation != want.relation || pf.left.to_string() != want.left || pf.right.to_string() != want.right)
        return path + ": got " + pf.conclusion() + ", want " + want.left + " " + llpo::relation_symbol(want.relation) +
               " " + want.right;
    if (pf.clause != want.clause)
        return path + ": clause " + std::to_string(pf.clause) + ", want " + std::to_string(want.clause);
    if (pf.premises.size() != want.premises.size())
        return path + ": " + std::to_string(pf.premises.size()) + " premises, want " +
               std::to_string(want.premises.size());
    for (std::size_t i = 0; i < want.premises.size(); ++i)
        if (auto d = diff(*pf.premises[i], want.premises[i], path + "." + std::to_string(i + 1)); !d.empty())
            return d;
    return {};
}

/// F_k by its recursive definition: F_0(X) = X^d, F_{k+1} = F_k iterated d times.
inline mpz_class F_by_iteration(std::size_t k, const mpz_class& x, unsigned long d) {
    if (k == 0) {
        mpz_class out;
        mpz_pow_ui(out.get_mpz_t(), x.get_mpz_t(), d);
        return out;
    }
    mpz_class v = x;
    for (unsigned long i = 0; i < d; ++i) v = F_by_iteration(k - 1, v, d);
    return v;
}

/// Interpretation of a ground constructor term from its size alone.
inline mpz_class constructor_value(const llpo::Term& u, unsigned long d) {
    return mpz_class(static_cast<unsigned long>(u.size())) * d;
}

}  // namespace oracle
