#pragma once

// Leftmost-innermost rewriting, normalization, and a metered call-by-value
// interpreter that reports the height of its computation tree and the peak
// footprint of its variable bindings.

#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "llpo/term.hpp"

namespace llpo {

class FuelExhausted : public std::runtime_error {
public:
    explicit FuelExhausted(std::size_t fuel)
        : std::runtime_error("fuel exhausted after " + std::to_string(fuel) + " steps") {}
};

struct RewriteStep {
    Term result;
    Position position;
    std::size_t rule;  // 0-based, file order
};

/// Rules grouped by head symbol, file order preserved.
class RuleIndex {
public:
    explicit RuleIndex(const Program& p) : program_(&p) {
        for (std::size_t i = 0; i < p.rules.size(); ++i) by_head_[p.rules[i].lhs.name()].push_back(i);
    }

    /// First rule whose lhs matches t, with the matcher.
    std::optional<std::pair<std::size_t, Substitution>> first_match(const Term& t) const {
        if (t.is_var()) return std::nullopt;
        auto it = by_head_.find(t.name());
        if (it == by_head_.end()) return std::nullopt;
        for (auto i : it->second)
            if (auto theta = match_pattern(program_->rules[i].lhs, t)) return std::make_pair(i, std::move(*theta));
        return std::nullopt;
    }

    const std::vector<std::size_t>& rules_for(const std::string& f) const {
        static const std::vector<std::size_t> none;
        auto it = by_head_.find(f);
        return it == by_head_.end() ? none : it->second;
    }

    const Program& program() const { return *program_; }

private:
    const Program* program_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_head_;
};

namespace detail {

inline std::optional<RewriteStep> innermost_step(const RuleIndex& index, const Term& t, Position& path) {
    if (t.is_var()) return std::nullopt;
    for (std::size_t i = 0; i < t.arity(); ++i) {
        path.push_back(i);
        if (auto inner = innermost_step(index, t.arg(i), path)) {
            inner->result = t.with_arg(i, std::move(inner->result));
            return inner;
        }
        path.pop_back();
    }
    if (auto m = index.first_match(t))
        return RewriteStep{substitute(index.program().rules[m->first].rhs, m->second), path, m->first};
    return std::nullopt;
}

}  // namespace detail

/// Reduces the leftmost-innermost redex with the first matching rule;
/// nothing iff t is a normal form.
inline std::optional<RewriteStep> rewrite_step(const RuleIndex& index, const Term& t) {
    Position path;
    return detail::innermost_step(index, t, path);
}

inline std::optional<RewriteStep> rewrite_step(const Program& p, const Term& t) {
    return rewrite_step(RuleIndex(p), t);
}

enum class NormalizeStatus { NormalForm, FuelExhausted };

struct NormalizeResult {
    NormalizeStatus status;
    Term term;  // the normal form, or the last term reached
    std::size_t steps = 0;
    std::vector<RewriteStep> trace;  // filled when requested
};

inline NormalizeResult normalize(const Program& p, const Term& t, std::size_t fuel, bool keep_trace = false) {
    RuleIndex index(p);
    NormalizeResult out{NormalizeStatus::NormalForm, t, 0, {}};
    while (true) {
        auto step = rewrite_step(index, out.term);
        if (!step) return out;
        if (out.steps == fuel) {
            out.status = NormalizeStatus::FuelExhausted;
            return out;
        }
        ++out.steps;
        out.term = step->result;
        if (keep_trace) out.trace.push_back(std::move(*step));
    }
}

/// Every one-step reduct: all redex positions, all matching rules.
inline std::vector<RewriteStep> all_steps(const RuleIndex& index, const Term& t) {
    std::vector<RewriteStep> out;
    Position path;
    auto visit = [&](auto&& self, const Term& s) -> void {
        if (s.is_var()) return;
        for (auto r : index.rules_for(s.name()))
            if (auto theta = match_pattern(index.program().rules[r].lhs, s))
                out.push_back({substitute(index.program().rules[r].rhs, *theta), path, r});
        for (std::size_t i = 0; i < s.arity(); ++i) {
            path.push_back(i);
            self(self, s.arg(i));
            path.pop_back();
        }
    };
    visit(visit, t);
    for (auto& step : out) step.result = replace_at(t, step.position, step.result);
    return out;
}

/// Largest height among all terms reachable from t by rewriting at any
/// redex with any rule. Throws FuelExhausted after `fuel` expansions.
inline std::size_t max_reachable_height(const Program& p, const Term& t, std::size_t fuel) {
    RuleIndex index(p);
    std::unordered_set<Term> seen{t};
    std::deque<Term> queue{t};
    std::size_t best = t.height();
    std::size_t expanded = 0;
    while (!queue.empty()) {
        if (expanded == fuel) throw FuelExhausted(fuel);
        ++expanded;
        Term s = std::move(queue.front());
        queue.pop_front();
        for (auto& step : all_steps(index, s)) {
            if (!seen.insert(step.result).second) continue;
            best = std::max(best, step.result.height());
            queue.push_back(std::move(step.result));
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Call-by-value evaluation

enum class EvalStatus { Value, Undefined, FuelExhausted, DepthExceeded };

inline std::string eval_status_name(EvalStatus s) {
    switch (s) {
        case EvalStatus::Value: return "value";
        case EvalStatus::Undefined: return "undefined";
        case EvalStatus::FuelExhausted: return "fuel exhausted";
        case EvalStatus::DepthExceeded: return "depth exceeded";
    }
    return "?";
}

struct EvalResult {
    EvalStatus status = EvalStatus::Value;
    std::optional<Term> value;
    std::size_t h = 0;                 // height of the computation tree
    std::size_t max_bindings = 0;      // peak number of live variable bindings
    std::size_t max_binding_size = 0;  // largest value ever bound
    std::size_t calls = 0;             // rule applications
    std::string stuck;                 // the call with no matching rule, when undefined
};

struct EvalLimits {
    std::size_t fuel = 1'000'000;
    std::size_t max_depth = 5000;
};

namespace detail {

/// Evaluates rule bodies with one frame per active call. A binding stays
/// live until the last occurrence of its variable has been read, so a frame
/// whose variables are all consumed before a tail call costs nothing while
/// the callee runs.
class CbvMachine {
public:
    CbvMachine(const Program& p, EvalLimits limits) : index_(p), limits_(limits) {}

    EvalResult run(const Term& t, const Substitution& sigma) {
        push_frame(t, sigma);
        auto value = eval(t, 0);
        pop_frame();
        if (value) {
            result_.value = value->first;
            result_.h = value->second;
        }
        return result_;
    }

private:
    struct Frame {
        Substitution theta;
        std::map<std::string, std::size_t> remaining;  // unread occurrences per variable
    };

    struct Abort {};

    void push_frame(const Term& body, const Substitution& theta) {
        Frame f{theta, {}};
        count_variables(body, f.remaining);
        for (const auto& [name, count] : f.remaining) {
            auto it = theta.find(name);
            if (it != theta.end()) result_.max_binding_size = std::max(result_.max_binding_size, it->second.size());
        }
        live_ += f.remaining.size();
        frames_.push_back(std::move(f));
        result_.max_bindings = std::max(result_.max_bindings, live_);
    }

    static void count_variables(const Term& t, std::map<std::string, std::size_t>& out) {
        if (t.is_var()) {
            ++out[t.name()];
            return;
        }
        for (const auto& a : t.args()) count_variables(a, out);
    }

    void pop_frame() {
        live_ -= frames_.back().remaining.size();
        frames_.pop_back();
    }

    Term read(const std::string& x) {
        auto& f = frames_.back();
        auto it = f.theta.find(x);
        if (it == f.theta.end()) throw std::invalid_argument("unbound variable " + x);
        Term v = it->second;
        auto rem = f.remaining.find(x);
        if (rem != f.remaining.end() && --rem->second == 0) {
            f.remaining.erase(rem);
            --live_;
        }
        return v;
    }

    std::optional<std::pair<Term, std::size_t>> eval(const Term& t, std::size_t depth) {
        try {
            return eval_inner(t, depth);
        } catch (const Abort&) {
            return std::nullopt;
        }
    }

    std::pair<Term, std::size_t> eval_inner(const Term& t, std::size_t depth) {
        if (t.is_var()) {
            Term v = read(t.name());
            return {v, v.size()};
        }
        const auto& sig = index_.program().signature;
        if (sig.is_constructor(t.name())) {
            if (t.arity() == 0) return {t, 1};
            auto [v, h] = eval_inner(t.arg(0), depth);
            return {Term::app(t.name(), {v}), h + 1};
        }
        std::vector<Term> values;
        std::size_t h = 0;
        for (const auto& a : t.args()) {
            auto [v, ha] = eval_inner(a, depth);
            values.push_back(std::move(v));
            h = std::max(h, ha + 1);
        }
        Term call = Term::app(t.name(), std::move(values));
        auto m = index_.first_match(call);
        if (!m) {
            result_.status = EvalStatus::Undefined;
            result_.stuck = call.to_string();
            throw Abort{};
        }
        if (result_.calls == limits_.fuel) {
            result_.status = EvalStatus::FuelExhausted;
            throw Abort{};
        }
        if (depth + 1 > limits_.max_depth) {
            result_.status = EvalStatus::DepthExceeded;
            throw Abort{};
        }
        ++result_.calls;
        const Term& rhs = index_.program().rules[m->first].rhs;
        push_frame(rhs, m->second);
        auto [u, h0] = eval_inner(rhs, depth + 1);
        pop_frame();
        return {u, std::max(h, h0)};
    }

    RuleIndex index_;
    EvalLimits limits_;
    std::vector<Frame> frames_;
    std::size_t live_ = 0;
    EvalResult result_;
};

}  // namespace detail

/// Call-by-value evaluation of t under a ground substitution.
inline EvalResult cbv_eval(const Program& p, const Term& t, const Substitution& sigma = {}, EvalLimits limits = {}) {
    for (const auto& x : variables_of(t))
        if (!sigma.count(x)) throw std::invalid_argument("variable " + x + " is not bound");
    for (const auto& [x, v] : sigma)
        if (!p.signature.is_value(v))
            throw std::invalid_argument("binding for " + x + " is not a constructor value: " + v.to_string());
    return detail::CbvMachine(p, limits).run(t, sigma);
}

}  // namespace llpo
