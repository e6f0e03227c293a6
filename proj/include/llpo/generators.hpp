#pragma once

// Exhaustive input enumeration and seeded random terms for property tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "llpo/term.hpp"

namespace llpo {

/// Every ground constructor term of exactly `size` symbols.
inline std::vector<Term> values_of_size(const Signature& sig, std::size_t size) {
    std::vector<Term> out;
    if (size == 0) return out;
    if (size == 1) {
        for (const auto& c : sig.constructors())
            if (c.arity == 0) out.push_back(Term::app(c.name));
        return out;
    }
    for (const auto& inner : values_of_size(sig, size - 1))
        for (const auto& c : sig.constructors())
            if (c.arity == 1) out.push_back(Term::app(c.name, {inner}));
    return out;
}

/// Tuples of `arity` values whose sizes add up to exactly `total`.
inline std::vector<std::vector<Term>> tuples_of_total_size(const Signature& sig, std::size_t arity, std::size_t total) {
    std::vector<std::vector<Term>> out;
    if (arity == 0) {
        if (total == 0) out.emplace_back();
        return out;
    }
    for (std::size_t first = 1; first + (arity - 1) <= total; ++first) {
        auto heads = values_of_size(sig, first);
        if (heads.empty()) continue;
        for (const auto& rest : tuples_of_total_size(sig, arity - 1, total - first))
            for (const auto& h : heads) {
                std::vector<Term> t{h};
                t.insert(t.end(), rest.begin(), rest.end());
                out.push_back(std::move(t));
            }
    }
    return out;
}

/// Inputs to the main symbol with total size in [lo, hi].
inline std::vector<std::vector<Term>> main_inputs(const Signature& sig, std::size_t lo, std::size_t hi) {
    std::size_t arity = sig.arity(sig.main());
    std::vector<std::vector<Term>> out;
    for (std::size_t n = lo; n <= hi; ++n) {
        auto batch = tuples_of_total_size(sig, arity, n);
        out.insert(out.end(), std::make_move_iterator(batch.begin()), std::make_move_iterator(batch.end()));
    }
    return out;
}

class TermGenerator {
public:
    TermGenerator(const Signature& sig, std::uint64_t seed, std::vector<std::string> variables = {"x", "y", "z"})
        : sig_(sig), rng_(seed), variables_(std::move(variables)) {
        for (const auto& c : sig.constructors()) symbols_.push_back({c.name, c.arity});
        for (const auto& f : sig.functions()) symbols_.push_back({f.name, f.arity});
    }

    std::mt19937_64& rng() { return rng_; }

    /// A random term of at most max_size symbols; variables only when allowed.
    Term term(std::size_t max_size, bool allow_variables = true) {
        std::size_t budget = std::uniform_int_distribution<std::size_t>(1, max_size)(rng_);
        return build(budget, allow_variables);
    }

    /// A random ground constructor term of at most max_size symbols.
    Term value(std::size_t max_size) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_size)(rng_);
        std::vector<const ConstructorDecl*> constants, successors;
        for (const auto& c : sig_.constructors()) (c.arity == 0 ? constants : successors).push_back(&c);
        Term t = Term::app(pick(constants)->name);
        if (successors.empty()) return t;
        for (std::size_t i = 1; i < n; ++i) t = Term::app(pick(successors)->name, {t});
        return t;
    }

private:
    struct Sym {
        std::string name;
        std::size_t arity;
    };

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng_)];
    }

    /// A term of exactly `budget` symbols when the signature allows it.
    Term build(std::size_t budget, bool allow_variables) {
        std::vector<const Sym*> inner;
        for (const auto& s : symbols_)
            if (s.arity > 0 && s.arity < budget) inner.push_back(&s);
        if (budget == 1 || inner.empty()) {
            std::size_t constants = 0;
            for (const auto& s : symbols_) constants += s.arity == 0;
            std::size_t vars = allow_variables ? variables_.size() : 0;
            std::size_t k = std::uniform_int_distribution<std::size_t>(0, constants + vars - 1)(rng_);
            if (k >= constants) return Term::var(variables_[k - constants]);
            for (const auto& s : symbols_)
                if (s.arity == 0 && k-- == 0) return Term::app(s.name);
        }
        const Sym& s = *pick(inner);
        std::vector<std::size_t> parts(s.arity, 1);
        for (std::size_t extra = budget - 1 - s.arity; extra > 0; --extra)
            ++parts[std::uniform_int_distribution<std::size_t>(0, s.arity - 1)(rng_)];
        std::vector<Term> args;
        for (auto part : parts) args.push_back(build(part, allow_variables));
        return Term::app(s.name, std::move(args));
    }

    const Signature& sig_;
    std::mt19937_64 rng_;
    std::vector<std::string> variables_;
    std::vector<Sym> symbols_;
};

}  // namespace llpo
