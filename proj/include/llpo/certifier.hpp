#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "llpo/llpo_order.hpp"
#include "llpo/validate.hpp"

namespace llpo {

/// Valency, precedence and one `rhs <0 lhs` proof per rule.
struct Certificate {
    Valency valency;
    Precedence precedence;
    std::vector<ProofPtr> proofs;
};

struct RuleFailure {
    std::size_t rule;  // 0-based
    std::optional<FailedObligation> obligation;
};

struct CheckResult {
    std::optional<Certificate> certificate;
    std::vector<RuleFailure> failures;

    bool certified() const { return certificate.has_value(); }
};

class InvalidProgram : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require_valid(const Program& p) {
    auto diags = validate_program(p);
    for (const auto& d : diags)
        if (d.severity == Severity::Error) throw InvalidProgram(d.to_string());
}

namespace detail {

inline CheckResult check_rules(const Program& p, const Valency& nu, const Precedence& prec, bool stop_early) {
    CheckResult out;
    Certificate cert{nu, prec, {}};
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
        LlpoDecider decider(p.signature, nu, prec);
        auto pf = decider.prec0(p.rules[i].rhs, p.rules[i].lhs);
        if (!pf) {
            out.failures.push_back({i, decider.deepest_failure()});
            if (stop_early) return out;
            continue;
        }
        cert.proofs.push_back(pf);
    }
    if (out.failures.empty()) out.certificate = std::move(cert);
    return out;
}

}  // namespace detail

/// Certificate iff every rule satisfies rhs <0 lhs; otherwise every failing
/// rule with its deepest undischarged obligation.
inline CheckResult check_llpo(const Program& p, const Valency& nu, const Precedence& prec) {
    require_valid(p);
    check_class_agreement(p.signature, nu, prec);
    return detail::check_rules(p, nu, prec, false);
}

/// Replays the stored proofs under the stored valency and precedence.
inline bool verify_certificate(const Program& p, const Certificate& cert) {
    try {
        check_class_agreement(p.signature, cert.valency, cert.precedence);
    } catch (const PrecedenceError&) {
        return false;
    }
    if (cert.proofs.size() != p.rules.size()) return false;
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
        const auto& pf = cert.proofs[i];
        if (!pf || pf->relation != Relation::Prec0 || !(pf->left == p.rules[i].rhs) ||
            !(pf->right == p.rules[i].lhs))
            return false;
        if (!replay_proof(*pf, p.signature, cert.valency, cert.precedence)) return false;
    }
    return true;
}

class SearchCapExceeded : public std::runtime_error {
public:
    explicit SearchCapExceeded(std::size_t cap)
        : std::runtime_error("certificate search gave up after " + std::to_string(cap) + " candidates") {}
};

struct InferenceResult {
    std::optional<Certificate> certificate;
    std::size_t candidates = 0;  // (valency, precedence) pairs checked
};

/// Calls visit(ranks) for every weak ordering of n items, fewest classes
/// first, each as a rank vector in lexicographic order. Stops when visit
/// returns true.
template <typename Visit>
bool for_each_weak_order(std::size_t n, Visit&& visit) {
    if (n == 0) {
        std::vector<std::size_t> none;
        return visit(none);
    }
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<std::size_t> ranks(n, 0);
        while (true) {
            std::vector<bool> used(k, false);
            for (auto r : ranks) used[r] = true;
            if (std::all_of(used.begin(), used.end(), [](bool b) { return b; }))
                if (visit(ranks)) return true;
            std::size_t i = n;
            while (i > 0 && ranks[i - 1] == k - 1) ranks[--i] = 0;
            if (i == 0) break;
            ++ranks[i - 1];
        }
    }
    return false;
}

/// What the search may not change: per-symbol valencies and, optionally,
/// the whole precedence.
struct SearchConstraints {
    Valency valency;
    std::optional<Precedence> precedence;
};

/// Declarations in the program become constraints.
inline SearchConstraints declared_constraints(const Program& p) {
    SearchConstraints c;
    for (const auto& f : p.signature.functions())
        if (f.valency) c.valency.set(f.name, *f.valency);
    c.precedence = p.precedence;
    return c;
}

/// Exhaustive search: valency assignments in declaration order starting from
/// all-ones, and for each, precedences coarsest first. Returns the first
/// certificate found, or none once the space is exhausted; throws
/// SearchCapExceeded when `cap` candidates were checked without an answer.
inline InferenceResult infer_certificate(const Program& p, std::size_t cap = 1'000'000,
                                         const SearchConstraints& fixed = {}) {
    require_valid(p);
    const auto& fns = p.signature.functions();
    std::size_t bits = 0;
    for (const auto& f : fns)
        if (!fixed.valency.contains(f.name)) bits += f.arity;
    if (bits >= 63) throw SearchCapExceeded(cap);

    InferenceResult result;
    auto try_candidate = [&](const Valency& nu, const Precedence& prec) {
        try {
            check_class_agreement(p.signature, nu, prec);
        } catch (const PrecedenceError&) {
            return false;
        }
        if (result.candidates >= cap) throw SearchCapExceeded(cap);
        ++result.candidates;
        auto checked = detail::check_rules(p, nu, prec, true);
        if (!checked.certificate) return false;
        result.certificate = std::move(checked.certificate);
        return true;
    };

    const std::uint64_t total = std::uint64_t{1} << bits;
    for (std::uint64_t step = 0; step < total; ++step) {
        std::uint64_t mask = total - 1 - step;
        Valency nu;
        std::size_t bit = bits;
        for (const auto& f : fns) {
            if (fixed.valency.contains(f.name)) {
                nu.set(f.name, fixed.valency.of(f.name));
                continue;
            }
            ValencyVector v(f.arity);
            for (auto& b : v) b = static_cast<int>((mask >> --bit) & 1U);
            nu.set(f.name, std::move(v));
        }
        bool found = fixed.precedence
                         ? try_candidate(nu, *fixed.precedence)
                         : for_each_weak_order(fns.size(), [&](const std::vector<std::size_t>& ranks) {
                               std::map<std::string, std::size_t> rank_map;
                               for (std::size_t i = 0; i < fns.size(); ++i) rank_map[fns[i].name] = ranks[i];
                               return try_candidate(nu, Precedence::from_ranks(rank_map));
                           });
        if (found) break;
    }
    return result;
}

inline nlohmann::json certificate_to_json(const Certificate& cert) {
    nlohmann::json j;
    nlohmann::json val = nlohmann::json::object();
    for (const auto& [f, v] : cert.valency.all()) val[f] = v;
    j["valency"] = val;
    j["precedence"] = cert.precedence.to_string();
    auto proofs = nlohmann::json::array();
    for (std::size_t i = 0; i < cert.proofs.size(); ++i)
        proofs.push_back({{"rule", i + 1}, {"proof", proof_to_json(*cert.proofs[i])}});
    j["proofs"] = proofs;
    return j;
}

/// Parses "a = b < c" style precedence text.
inline Precedence parse_precedence(const std::string& text) {
    std::vector<std::vector<std::string>> classes(1);
    std::string word;
    auto flush = [&] {
        if (!word.empty()) classes.back().push_back(word);
        word.clear();
    };
    for (char c : text) {
        if (c == '<') {
            flush();
            classes.emplace_back();
        } else if (c == '=' || std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            word += c;
        }
    }
    flush();
    if (classes.size() == 1 && classes[0].empty()) classes.clear();
    return Precedence::from_classes(classes);
}

inline Certificate certificate_from_json(const nlohmann::json& j, const Signature& sig) {
    Valency nu;
    for (const auto& [f, v] : j.at("valency").items()) nu.set(f, v.get<ValencyVector>());
    Certificate cert{nu, parse_precedence(j.at("precedence").get<std::string>()), {}};
    for (const auto& entry : j.at("proofs")) cert.proofs.push_back(proof_from_json(entry.at("proof"), sig));
    return cert;
}

}  // namespace llpo
