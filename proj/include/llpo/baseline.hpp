#pragma once

// Classic lexicographic and multiset path orderings. Constructors sit below
// every defined symbol and are mutually incomparable; defined symbols are
// compared by precedence, and equivalent heads are compared argumentwise.

#include <unordered_map>
#include <vector>

#include "llpo/term.hpp"

namespace llpo {

namespace detail {

class PathOrderBase {
protected:
    PathOrderBase(const Signature& sig, const Precedence& prec) : sig_(sig), prec_(prec) {}

    /// g strictly below f in the extended symbol order.
    bool symbol_less(const std::string& g, const std::string& f) const {
        if (!sig_.is_defined(f)) return false;
        if (sig_.is_constructor(g)) return true;
        return prec_.less(g, f);
    }

    /// Same symbol, or equivalent defined symbols of equal arity.
    bool symbol_equiv(const Term& s, const Term& t) const {
        if (s.name() == t.name()) return true;
        return sig_.is_defined(s.name()) && sig_.is_defined(t.name()) && s.arity() == t.arity() &&
               prec_.equivalent(s.name(), t.name());
    }

    const Signature& sig_;
    const Precedence& prec_;
};

struct PairHash {
    std::size_t operator()(const std::pair<const void*, const void*>& p) const {
        return hash_combine(std::hash<const void*>{}(p.first), std::hash<const void*>{}(p.second));
    }
};

}  // namespace detail

class LpoDecider : detail::PathOrderBase {
public:
    LpoDecider(const Signature& sig, const Precedence& prec) : PathOrderBase(sig, prec) {}

    bool less(const Term& s, const Term& t) {
        roots_.push_back(s);
        roots_.push_back(t);
        return lt(s, t);
    }

private:
    bool le(const Term& s, const Term& t) { return s == t || lt(s, t); }

    bool lt(const Term& s, const Term& t) {
        auto key = std::make_pair(s.id(), t.id());
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool r = decide(s, t);
        memo_.emplace(key, r);
        return r;
    }

    bool decide(const Term& s, const Term& t) {
        if (t.is_var()) return false;
        for (const auto& ti : t.args())
            if (le(s, ti)) return true;
        if (s.is_var()) return false;
        if (symbol_less(s.name(), t.name())) {
            for (const auto& si : s.args())
                if (!lt(si, t)) return false;
            return true;
        }
        if (symbol_equiv(s, t)) {
            for (std::size_t i = 0; i < s.arity(); ++i) {
                if (i > 0 && !(s.arg(i - 1) == t.arg(i - 1))) return false;
                if (!lt(s.arg(i), t.arg(i))) continue;
                for (std::size_t j = i + 1; j < s.arity(); ++j)
                    if (!lt(s.arg(j), t)) return false;
                return true;
            }
        }
        return false;
    }

    std::unordered_map<std::pair<const void*, const void*>, bool, detail::PairHash> memo_;
    std::vector<Term> roots_;
};

class MpoDecider : detail::PathOrderBase {
public:
    MpoDecider(const Signature& sig, const Precedence& prec) : PathOrderBase(sig, prec) {}

    bool less(const Term& s, const Term& t) {
        roots_.push_back(s);
        roots_.push_back(t);
        return lt(s, t);
    }

private:
    bool le(const Term& s, const Term& t) { return s == t || lt(s, t); }

    bool lt(const Term& s, const Term& t) {
        auto key = std::make_pair(s.id(), t.id());
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool r = decide(s, t);
        memo_.emplace(key, r);
        return r;
    }

    bool decide(const Term& s, const Term& t) {
        if (t.is_var()) return false;
        for (const auto& ti : t.args())
            if (le(s, ti)) return true;
        if (s.is_var()) return false;
        if (symbol_less(s.name(), t.name())) {
            for (const auto& si : s.args())
                if (!lt(si, t)) return false;
            return true;
        }
        if (symbol_equiv(s, t)) return multiset_less(s.args(), t.args());
        return false;
    }

    /// M << N: after cancelling common elements, N keeps something and every
    /// remaining element of M is below some remaining element of N.
    bool multiset_less(std::span<const Term> m, std::span<const Term> n) {
        std::vector<Term> rest_m(m.begin(), m.end());
        std::vector<Term> rest_n;
        for (const auto& x : n) {
            auto it = std::find(rest_m.begin(), rest_m.end(), x);
            if (it != rest_m.end()) rest_m.erase(it);
            else rest_n.push_back(x);
        }
        if (rest_n.empty()) return false;
        for (const auto& x : rest_m) {
            bool dominated = false;
            for (const auto& y : rest_n)
                if (lt(x, y)) {
                    dominated = true;
                    break;
                }
            if (!dominated) return false;
        }
        return true;
    }

    std::unordered_map<std::pair<const void*, const void*>, bool, detail::PairHash> memo_;
    std::vector<Term> roots_;
};

inline bool lpo(const Term& s, const Term& t, const Signature& sig, const Precedence& prec) {
    return LpoDecider(sig, prec).less(s, t);
}

inline bool mpo(const Term& s, const Term& t, const Signature& sig, const Precedence& prec) {
    return MpoDecider(sig, prec).less(s, t);
}

}  // namespace llpo
