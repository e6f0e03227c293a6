#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "llpo/parser.hpp"
#include "llpo/term.hpp"

namespace llpo {

enum class Relation { Prec1, Prec0, Equal };

inline std::string relation_symbol(Relation r) {
    switch (r) {
        case Relation::Prec1: return "<1";
        case Relation::Prec0: return "<0";
        case Relation::Equal: return "=";
    }
    return "?";
}

inline Relation relation_from_symbol(const std::string& s) {
    if (s == "<1") return Relation::Prec1;
    if (s == "<0") return Relation::Prec0;
    if (s == "=") return Relation::Equal;
    throw std::invalid_argument("unknown relation tag " + s);
}

struct OrderProof;
using ProofPtr = std::shared_ptr<const OrderProof>;

/// One inference: `left relation right` by `clause`, from `premises`.
/// Equal nodes are leaves (clause 0). `position` is the 0-based argument
/// index a clause singled out (subterm clauses and the lexicographic
/// clause of <0), or -1.
struct OrderProof {
    Relation relation;
    int clause;
    int position;
    Term left;
    Term right;
    std::vector<ProofPtr> premises;

    std::string conclusion() const {
        return left.to_string() + " " + relation_symbol(relation) + " " + right.to_string();
    }
};

inline ProofPtr make_identity(const Term& t) {
    return std::make_shared<OrderProof>(OrderProof{Relation::Equal, 0, -1, t, t, {}});
}

inline std::size_t proof_node_count(const OrderProof& pf) {
    std::size_t n = 1;
    for (const auto& c : pf.premises) n += proof_node_count(*c);
    return n;
}

/// Indented inference tree, conclusion first, premises below.
inline void render_text(const OrderProof& pf, std::ostream& out, std::size_t indent = 0) {
    out << std::string(indent, ' ') << pf.conclusion();
    if (pf.relation != Relation::Equal) {
        out << "   [" << relation_symbol(pf.relation) << " clause " << pf.clause;
        if (pf.position >= 0) out << ", argument " << pf.position + 1;
        out << "]";
    }
    out << "\n";
    for (const auto& c : pf.premises) render_text(*c, out, indent + 2);
}

inline std::string render_text(const OrderProof& pf) {
    std::ostringstream out;
    render_text(pf, out);
    return out.str();
}

inline nlohmann::json proof_to_json(const OrderProof& pf) {
    nlohmann::json j;
    j["relation"] = relation_symbol(pf.relation);
    j["clause"] = pf.clause;
    if (pf.position >= 0) j["position"] = pf.position + 1;
    j["left"] = pf.left.to_string();
    j["right"] = pf.right.to_string();
    auto premises = nlohmann::json::array();
    for (const auto& c : pf.premises) premises.push_back(proof_to_json(*c));
    j["premises"] = std::move(premises);
    return j;
}

/// Terms are re-read against the signature, so the original variable and
/// constant distinction is recovered.
inline ProofPtr proof_from_json(const nlohmann::json& j, const Signature& sig) {
    OrderProof pf{relation_from_symbol(j.at("relation").get<std::string>()),
                  j.at("clause").get<int>(),
                  j.contains("position") ? j.at("position").get<int>() - 1 : -1,
                  parse_term(j.at("left").get<std::string>(), sig),
                  parse_term(j.at("right").get<std::string>(), sig),
                  {}};
    for (const auto& c : j.at("premises")) pf.premises.push_back(proof_from_json(c, sig));
    return std::make_shared<OrderProof>(std::move(pf));
}

inline bool same_proof(const OrderProof& a, const OrderProof& b) {
    if (a.relation != b.relation || a.clause != b.clause || a.position != b.position || !(a.left == b.left) ||
        !(a.right == b.right) || a.premises.size() != b.premises.size())
        return false;
    for (std::size_t i = 0; i < a.premises.size(); ++i)
        if (!same_proof(*a.premises[i], *b.premises[i])) return false;
    return true;
}

}  // namespace llpo
