#pragma once

// The two layered orderings of the light lexicographic path ordering.
//
// s <1 t holds by one of
//   (1) s <=1 u             implies  s <1 c(u)               c a constructor
//   (2) s <1 f(ts)          implies  c(s) <1 f(ts)           c a constructor
//   (3) s <=1 t_i, nu(f,i)=1 implies s <1 f(.., t_i, ..)
//   (4) g <D f, all s_i <1 f(ts) implies g(ss) <1 f(ts)
// and s <0 t by one of
//   (1) s <=0 t_i           implies  s <0 h(.., t_i, ..)     h any symbol
//   (2) s <0 f(ts)          implies  c(s) <0 f(ts)
//   (3) g <D f, s_i <nu(g,i) f(ts)  implies  g(ss) <0 f(ts)
//   (4) g ~D f, s_1..s_{p-1} = t_1..t_{p-1}, s_p <1 t_p with nu(f,p)=1,
//       and every later s_j is either <=1 t_j at a valency-1 position or a
//       term over constructors and symbols below f with s_j <0 f(ts) at a
//       valency-0 position       implies  g(ss) <0 f(ts)
// In clauses (2)-(4) the right-hand head f is a defined symbol.

#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "llpo/proof.hpp"
#include "llpo/term.hpp"

namespace llpo {

struct OrderContext {
    const Signature& sig;
    const Valency& nu;
    const Precedence& prec;
};

/// Every defined symbol in t is strictly below f.
inline bool only_symbols_below(const Term& t, const std::string& f, const OrderContext& ctx) {
    if (t.is_var()) return true;
    if (ctx.sig.is_defined(t.name()) && !ctx.prec.less(t.name(), f)) return false;
    for (const auto& a : t.args())
        if (!only_symbols_below(a, f, ctx)) return false;
    return true;
}

/// Obligation that could not be discharged.
struct FailedObligation {
    Relation relation;
    Term left;
    Term right;
    std::string note;
    std::size_t depth;

    std::string to_string() const {
        std::string out = left.to_string() + " " + relation_symbol(relation) + " " + right.to_string();
        if (!note.empty()) out += " (" + note + ")";
        return out;
    }
};

/// Memoized decision procedure for <1 and <0 under fixed valency and
/// precedence. Clauses are tried in order; the first derivation found is
/// returned.
class LlpoDecider {
public:
    LlpoDecider(const Signature& sig, const Valency& nu, const Precedence& prec) : ctx_{sig, nu, prec} {}

    ProofPtr prec1(const Term& s, const Term& t) { return entry(Relation::Prec1, s, t); }
    ProofPtr prec0(const Term& s, const Term& t) { return entry(Relation::Prec0, s, t); }

    const std::optional<FailedObligation>& deepest_failure() const { return deepest_; }
    const OrderContext& context() const { return ctx_; }

private:
    struct Key {
        const void* s;
        const void* t;
        Relation rel;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return detail::hash_combine(detail::hash_combine(std::hash<const void*>{}(k.s),
                                                             std::hash<const void*>{}(k.t)),
                                        static_cast<std::size_t>(k.rel));
        }
    };

    ProofPtr entry(Relation rel, const Term& s, const Term& t) {
        ctx_.sig.check_term(s);
        ctx_.sig.check_term(t);
        roots_.push_back(s);
        roots_.push_back(t);
        depth_ = 0;
        return rel == Relation::Prec1 ? lt1(s, t) : lt0(s, t);
    }

    static ProofPtr node(Relation rel, int clause, int position, const Term& s, const Term& t,
                         std::vector<ProofPtr> premises) {
        return std::make_shared<OrderProof>(OrderProof{rel, clause, position, s, t, std::move(premises)});
    }

    void fail(Relation rel, const Term& s, const Term& t, std::string note = {}) {
        if (!deepest_ || depth_ >= deepest_->depth) deepest_ = FailedObligation{rel, s, t, std::move(note), depth_};
    }

    ProofPtr le1(const Term& s, const Term& t) { return s == t ? make_identity(s) : lt1(s, t); }
    ProofPtr le0(const Term& s, const Term& t) { return s == t ? make_identity(s) : lt0(s, t); }

    ProofPtr lt1(const Term& s, const Term& t) { return memoized(Relation::Prec1, s, t); }
    ProofPtr lt0(const Term& s, const Term& t) { return memoized(Relation::Prec0, s, t); }

    ProofPtr memoized(Relation rel, const Term& s, const Term& t) {
        Key key{s.id(), t.id(), rel};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        ++depth_;
        ProofPtr result = rel == Relation::Prec1 ? decide1(s, t) : decide0(s, t);
        if (!result) fail(rel, s, t);
        --depth_;
        memo_.emplace(key, result);
        return result;
    }

    ProofPtr decide1(const Term& s, const Term& t) {
        if (t.is_var()) return nullptr;
        const auto& sig = ctx_.sig;
        if (sig.is_constructor(t.name())) {
            if (t.arity() == 1)
                if (auto pf = le1(s, t.arg(0))) return node(Relation::Prec1, 1, -1, s, t, {pf});
            return nullptr;
        }
        const std::string& f = t.name();
        if (!s.is_var() && sig.is_constructor(s.name()) && s.arity() == 1)
            if (auto pf = lt1(s.arg(0), t)) return node(Relation::Prec1, 2, -1, s, t, {pf});
        for (std::size_t i = 0; i < t.arity(); ++i)
            if (ctx_.nu.at(f, i) == 1)
                if (auto pf = le1(s, t.arg(i))) return node(Relation::Prec1, 3, static_cast<int>(i), s, t, {pf});
        if (!s.is_var() && sig.is_defined(s.name()) && ctx_.prec.less(s.name(), f)) {
            std::vector<ProofPtr> premises;
            for (const auto& si : s.args()) {
                auto pf = lt1(si, t);
                if (!pf) return nullptr;
                premises.push_back(pf);
            }
            return node(Relation::Prec1, 4, -1, s, t, std::move(premises));
        }
        return nullptr;
    }

    ProofPtr decide0(const Term& s, const Term& t) {
        if (t.is_var()) return nullptr;
        const auto& sig = ctx_.sig;
        for (std::size_t i = 0; i < t.arity(); ++i)
            if (auto pf = le0(s, t.arg(i))) return node(Relation::Prec0, 1, static_cast<int>(i), s, t, {pf});
        if (sig.is_constructor(t.name()) || s.is_var()) return nullptr;
        const std::string& f = t.name();
        if (sig.is_constructor(s.name())) {
            if (s.arity() == 1)
                if (auto pf = lt0(s.arg(0), t)) return node(Relation::Prec0, 2, -1, s, t, {pf});
            return nullptr;
        }
        const std::string& g = s.name();
        if (ctx_.prec.less(g, f)) {
            std::vector<ProofPtr> premises;
            for (std::size_t i = 0; i < s.arity(); ++i) {
                auto pf = ctx_.nu.at(g, i) == 1 ? lt1(s.arg(i), t) : lt0(s.arg(i), t);
                if (!pf) return nullptr;
                premises.push_back(pf);
            }
            return node(Relation::Prec0, 3, -1, s, t, std::move(premises));
        }
        if (ctx_.prec.equivalent(g, f) && s.arity() == t.arity()) return lexicographic(s, t);
        return nullptr;
    }

    ProofPtr lexicographic(const Term& s, const Term& t) {
        const std::string& f = t.name();
        const std::size_t n = t.arity();
        for (std::size_t p = 0; p < n; ++p) {
            if (p > 0 && !(s.arg(p - 1) == t.arg(p - 1))) break;
            if (ctx_.nu.at(f, p) != 1) continue;
            auto head = lt1(s.arg(p), t.arg(p));
            if (!head) continue;
            std::vector<ProofPtr> premises;
            for (std::size_t q = 0; q < p; ++q) premises.push_back(make_identity(s.arg(q)));
            premises.push_back(head);
            bool ok = true;
            for (std::size_t j = p + 1; j < n && ok; ++j) {
                ProofPtr pf;
                if (ctx_.nu.at(f, j) == 1) {
                    pf = le1(s.arg(j), t.arg(j));
                } else if (!only_symbols_below(s.arg(j), f, ctx_)) {
                    ++depth_;
                    fail(Relation::Prec0, s.arg(j), t, "not built from constructors and symbols below " + f);
                    --depth_;
                } else {
                    pf = lt0(s.arg(j), t);
                }
                if (!pf) ok = false;
                else premises.push_back(pf);
            }
            if (ok) return node(Relation::Prec0, 4, static_cast<int>(p), s, t, std::move(premises));
        }
        return nullptr;
    }

    OrderContext ctx_;
    std::unordered_map<Key, ProofPtr, KeyHash> memo_;
    std::vector<Term> roots_;  // keeps memo keys alive
    std::size_t depth_ = 0;
    std::optional<FailedObligation> deepest_;
};

inline ProofPtr prec1(const Term& s, const Term& t, const Signature& sig, const Valency& nu,
                      const Precedence& prec) {
    LlpoDecider d(sig, nu, prec);
    return d.prec1(s, t);
}

inline ProofPtr prec0(const Term& s, const Term& t, const Signature& sig, const Valency& nu,
                      const Precedence& prec) {
    LlpoDecider d(sig, nu, prec);
    return d.prec0(s, t);
}

namespace detail {

inline bool replay_le(const ProofPtr& pf, Relation strict, const Term& s, const Term& t, const OrderContext& ctx);

inline bool replay_node(const OrderProof& pf, const OrderContext& ctx) {
    const Term& s = pf.left;
    const Term& t = pf.right;
    const auto& sig = ctx.sig;
    const auto& ps = pf.premises;
    auto premise_is = [&](std::size_t k, Relation rel, const Term& l, const Term& r) {
        return k < ps.size() && ps[k] && ps[k]->relation == rel && ps[k]->left == l && ps[k]->right == r &&
               replay_node(*ps[k], ctx);
    };
    if (pf.relation == Relation::Equal) return ps.empty() && s == t;
    if (t.is_var()) return false;
    const bool t_defined = sig.is_defined(t.name());
    if (pf.relation == Relation::Prec1) {
        switch (pf.clause) {
            case 1:
                return sig.is_constructor(t.name()) && t.arity() == 1 && ps.size() == 1 &&
                       replay_le(ps[0], Relation::Prec1, s, t.arg(0), ctx);
            case 2:
                return t_defined && !s.is_var() && sig.is_constructor(s.name()) && s.arity() == 1 &&
                       ps.size() == 1 && premise_is(0, Relation::Prec1, s.arg(0), t);
            case 3: {
                if (!t_defined || pf.position < 0 || static_cast<std::size_t>(pf.position) >= t.arity()) return false;
                auto i = static_cast<std::size_t>(pf.position);
                return ctx.nu.at(t.name(), i) == 1 && ps.size() == 1 &&
                       replay_le(ps[0], Relation::Prec1, s, t.arg(i), ctx);
            }
            case 4: {
                if (!t_defined || s.is_var() || !sig.is_defined(s.name()) || !ctx.prec.less(s.name(), t.name()))
                    return false;
                if (ps.size() != s.arity()) return false;
                for (std::size_t i = 0; i < s.arity(); ++i)
                    if (!premise_is(i, Relation::Prec1, s.arg(i), t)) return false;
                return true;
            }
            default: return false;
        }
    }
    switch (pf.clause) {
        case 1: {
            if (pf.position < 0 || static_cast<std::size_t>(pf.position) >= t.arity()) return false;
            return ps.size() == 1 &&
                   replay_le(ps[0], Relation::Prec0, s, t.arg(static_cast<std::size_t>(pf.position)), ctx);
        }
        case 2:
            return t_defined && !s.is_var() && sig.is_constructor(s.name()) && s.arity() == 1 && ps.size() == 1 &&
                   premise_is(0, Relation::Prec0, s.arg(0), t);
        case 3: {
            if (!t_defined || s.is_var() || !sig.is_defined(s.name()) || !ctx.prec.less(s.name(), t.name()))
                return false;
            if (ps.size() != s.arity()) return false;
            for (std::size_t i = 0; i < s.arity(); ++i) {
                Relation rel = ctx.nu.at(s.name(), i) == 1 ? Relation::Prec1 : Relation::Prec0;
                if (!premise_is(i, rel, s.arg(i), t)) return false;
            }
            return true;
        }
        case 4: {
            if (!t_defined || s.is_var() || !sig.is_defined(s.name()) || !ctx.prec.equivalent(s.name(), t.name()))
                return false;
            const std::size_t n = t.arity();
            if (s.arity() != n || pf.position < 0 || static_cast<std::size_t>(pf.position) >= n || ps.size() != n)
                return false;
            const auto p = static_cast<std::size_t>(pf.position);
            const std::string& f = t.name();
            for (std::size_t q = 0; q < p; ++q)
                if (!premise_is(q, Relation::Equal, s.arg(q), t.arg(q))) return false;
            if (ctx.nu.at(f, p) != 1 || !premise_is(p, Relation::Prec1, s.arg(p), t.arg(p))) return false;
            for (std::size_t j = p + 1; j < n; ++j) {
                if (ctx.nu.at(f, j) == 1) {
                    if (!replay_le(ps[j], Relation::Prec1, s.arg(j), t.arg(j), ctx)) return false;
                } else if (!only_symbols_below(s.arg(j), f, ctx) || !premise_is(j, Relation::Prec0, s.arg(j), t)) {
                    return false;
                }
            }
            return true;
        }
        default: return false;
    }
}

inline bool replay_le(const ProofPtr& pf, Relation strict, const Term& s, const Term& t, const OrderContext& ctx) {
    if (!pf || !(pf->left == s) || !(pf->right == t)) return false;
    if (pf->relation != Relation::Equal && pf->relation != strict) return false;
    return replay_node(*pf, ctx);
}

}  // namespace detail

/// Re-checks every inference of a proof against the clause premises.
inline bool replay_proof(const OrderProof& pf, const Signature& sig, const Valency& nu, const Precedence& prec) {
    OrderContext ctx{sig, nu, prec};
    try {
        sig.check_term(pf.left);
        sig.check_term(pf.right);
        return detail::replay_node(pf, ctx);
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace llpo
