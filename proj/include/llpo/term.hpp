#pragma once

// First-order terms over constructors and defined symbols, signatures,
// programs, substitutions and matching.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace llpo {

class Term;

namespace detail {

struct TermNode {
    bool variable = false;
    std::string name;
    std::vector<Term> args;
    std::size_t size = 1;
    std::size_t height = 1;
    std::size_t hash = 0;
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace detail

/// Immutable term: either a variable or a symbol applied to arguments.
/// Copies share structure.
class Term {
public:
    static Term var(std::string name) {
        auto node = std::make_shared<detail::TermNode>();
        node->variable = true;
        node->hash = detail::hash_combine(0x51ed27, std::hash<std::string>{}(name));
        node->name = std::move(name);
        return Term(std::move(node));
    }

    static Term app(std::string symbol, std::vector<Term> args = {}) {
        auto node = std::make_shared<detail::TermNode>();
        std::size_t hash = std::hash<std::string>{}(symbol);
        std::size_t size = 1;
        std::size_t height = 0;
        for (const auto& a : args) {
            size += a.size();
            height = std::max(height, a.height());
            hash = detail::hash_combine(hash, a.hash());
        }
        node->name = std::move(symbol);
        node->args = std::move(args);
        node->size = size;
        node->height = height + 1;
        node->hash = hash;
        return Term(std::move(node));
    }

    bool is_var() const { return node_->variable; }
    const std::string& name() const { return node_->name; }
    std::span<const Term> args() const { return node_->args; }
    const Term& arg(std::size_t i) const { return node_->args.at(i); }
    std::size_t arity() const { return node_->args.size(); }

    /// Number of symbols; variables count 1.
    std::size_t size() const { return node_->size; }
    /// Longest branch; constants and variables have height 1.
    std::size_t height() const { return node_->height; }
    std::size_t hash() const { return node_->hash; }

    /// Node identity; stable for the lifetime of any copy of this term.
    const void* id() const { return node_.get(); }

    bool is_ground() const {
        if (is_var()) return false;
        return std::all_of(node_->args.begin(), node_->args.end(),
                           [](const Term& a) { return a.is_ground(); });
    }

    Term with_arg(std::size_t i, Term replacement) const {
        std::vector<Term> args(node_->args.begin(), node_->args.end());
        args.at(i) = std::move(replacement);
        return app(name(), std::move(args));
    }

    friend bool operator==(const Term& a, const Term& b) {
        if (a.node_ == b.node_) return true;
        if (a.node_->hash != b.node_->hash || a.node_->variable != b.node_->variable ||
            a.node_->size != b.node_->size || a.node_->name != b.node_->name ||
            a.node_->args.size() != b.node_->args.size())
            return false;
        for (std::size_t i = 0; i < a.node_->args.size(); ++i)
            if (!(a.node_->args[i] == b.node_->args[i])) return false;
        return true;
    }

    std::string to_string() const {
        std::string out;
        write(out);
        return out;
    }

private:
    explicit Term(std::shared_ptr<const detail::TermNode> node) : node_(std::move(node)) {}

    void write(std::string& out) const {
        out += node_->name;
        if (node_->variable || node_->args.empty()) return;
        out += '(';
        for (std::size_t i = 0; i < node_->args.size(); ++i) {
            if (i) out += ", ";
            node_->args[i].write(out);
        }
        out += ')';
    }

    std::shared_ptr<const detail::TermNode> node_;
};

inline std::ostream& operator<<(std::ostream& os, const Term& t) { return os << t.to_string(); }

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Path from the root: sequence of 0-based argument indices.
using Position = std::vector<std::size_t>;

inline std::string position_to_string(const Position& pos) {
    if (pos.empty()) return "root";
    std::string out;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(pos[i] + 1);
    }
    return out;
}

inline const Term& subterm_at(const Term& t, const Position& pos) {
    const Term* cur = &t;
    for (auto i : pos) cur = &cur->arg(i);
    return *cur;
}

inline Term replace_at(const Term& t, const Position& pos, std::size_t depth, const Term& replacement) {
    if (depth == pos.size()) return replacement;
    return t.with_arg(pos[depth], replace_at(t.arg(pos[depth]), pos, depth + 1, replacement));
}

inline Term replace_at(const Term& t, const Position& pos, const Term& replacement) {
    return replace_at(t, pos, 0, replacement);
}

/// Variables in left-to-right order of first occurrence.
inline std::vector<std::string> variables_of(const Term& t) {
    std::vector<std::string> out;
    std::function<void(const Term&)> walk = [&](const Term& u) {
        if (u.is_var()) {
            if (std::find(out.begin(), out.end(), u.name()) == out.end()) out.push_back(u.name());
            return;
        }
        for (const auto& a : u.args()) walk(a);
    };
    walk(t);
    return out;
}

/// Variable occurrences counted with multiplicity.
inline std::size_t variable_occurrences(const Term& t) {
    if (t.is_var()) return 1;
    std::size_t n = 0;
    for (const auto& a : t.args()) n += variable_occurrences(a);
    return n;
}

inline bool contains_subterm(const Term& t, const Term& sub) {
    if (t == sub) return true;
    if (t.is_var() || t.size() <= sub.size()) return false;
    for (const auto& a : t.args())
        if (contains_subterm(a, sub)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Signatures

/// Per-symbol argument valencies: 1 marks a recursion-driving ("normal")
/// position, 0 a substituted ("safe") one.
using ValencyVector = std::vector<int>;

class SignatureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConstructorDecl {
    std::string name;
    std::size_t arity = 0;
};

struct FunctionDecl {
    std::string name;
    std::size_t arity = 1;
    std::optional<ValencyVector> valency;
};

/// Constructors (arity 0 or 1) and defined symbols (arity >= 1), kept in
/// declaration order.
class Signature {
public:
    void add_constructor(const std::string& name, std::size_t arity) {
        if (arity > 1)
            throw SignatureError("constructor " + name + " has arity " + std::to_string(arity) +
                                 "; constructors must have arity 0 or 1");
        ensure_fresh(name);
        index_[name] = {true, constructors_.size()};
        constructors_.push_back({name, arity});
    }

    void add_function(const std::string& name, std::size_t arity,
                      std::optional<ValencyVector> valency = std::nullopt) {
        if (arity == 0) throw SignatureError("defined symbol " + name + " must have arity > 0");
        if (valency) {
            if (valency->size() != arity)
                throw SignatureError("valency of " + name + " has " + std::to_string(valency->size()) +
                                     " entries, expected " + std::to_string(arity));
            for (int v : *valency)
                if (v != 0 && v != 1) throw SignatureError("valency entries must be 0 or 1");
        }
        ensure_fresh(name);
        index_[name] = {false, functions_.size()};
        functions_.push_back({name, arity, std::move(valency)});
    }

    void set_main(const std::string& name) {
        if (!is_defined(name)) throw SignatureError("main symbol " + name + " is not a defined symbol");
        main_ = name;
    }

    const std::string& main() const { return main_; }
    const std::vector<ConstructorDecl>& constructors() const { return constructors_; }
    const std::vector<FunctionDecl>& functions() const { return functions_; }

    bool is_constructor(const std::string& name) const {
        auto it = index_.find(name);
        return it != index_.end() && it->second.first;
    }
    bool is_defined(const std::string& name) const {
        auto it = index_.find(name);
        return it != index_.end() && !it->second.first;
    }
    bool is_declared(const std::string& name) const { return index_.count(name) != 0; }

    std::size_t arity(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw SignatureError("undeclared symbol " + name);
        return it->second.first ? constructors_[it->second.second].arity
                                : functions_[it->second.second].arity;
    }

    const FunctionDecl& function(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end() || it->second.first) throw SignatureError("undeclared defined symbol " + name);
        return functions_[it->second.second];
    }

    void set_valency(const std::string& name, ValencyVector valency) {
        auto it = index_.find(name);
        if (it == index_.end() || it->second.first) throw SignatureError("undeclared defined symbol " + name);
        if (valency.size() != functions_[it->second.second].arity)
            throw SignatureError("valency arity mismatch for " + name);
        functions_[it->second.second].valency = std::move(valency);
    }

    bool has_constant() const {
        return std::any_of(constructors_.begin(), constructors_.end(),
                           [](const ConstructorDecl& c) { return c.arity == 0; });
    }

    std::size_t max_arity() const {
        std::size_t m = 0;
        for (const auto& c : constructors_) m = std::max(m, c.arity);
        for (const auto& f : functions_) m = std::max(m, f.arity);
        return m;
    }

    /// Throws SignatureError unless every node is declared with its arity.
    void check_term(const Term& t) const {
        if (t.is_var()) return;
        if (!is_declared(t.name())) throw SignatureError("undeclared symbol " + t.name());
        if (arity(t.name()) != t.arity())
            throw SignatureError("symbol " + t.name() + " expects " + std::to_string(arity(t.name())) +
                                 " arguments, got " + std::to_string(t.arity()));
        for (const auto& a : t.args()) check_term(a);
    }

    bool is_constructor_term(const Term& t) const {
        if (t.is_var()) return true;
        if (!is_constructor(t.name())) return false;
        return std::all_of(t.args().begin(), t.args().end(),
                           [this](const Term& a) { return is_constructor_term(a); });
    }

    /// Ground term built from constructors only: a data value.
    bool is_value(const Term& t) const { return t.is_ground() && is_constructor_term(t); }

private:
    void ensure_fresh(const std::string& name) const {
        if (index_.count(name)) throw SignatureError("symbol " + name + " declared twice");
    }

    std::vector<ConstructorDecl> constructors_;
    std::vector<FunctionDecl> functions_;
    std::map<std::string, std::pair<bool, std::size_t>> index_;
    std::string main_;
};

struct Rule {
    Term lhs;
    Term rhs;

    std::string to_string() const { return lhs.to_string() + " -> " + rhs.to_string(); }
};

// ---------------------------------------------------------------------------
// Precedence and valency assignments

class PrecedenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Total pre-order on defined symbols given as a rank map.
class Precedence {
public:
    Precedence() = default;

    /// Classes listed in ascending order.
    static Precedence from_classes(const std::vector<std::vector<std::string>>& classes) {
        Precedence p;
        for (std::size_t r = 0; r < classes.size(); ++r)
            for (const auto& name : classes[r]) {
                if (p.rank_.count(name)) throw PrecedenceError("symbol " + name + " listed twice in precedence");
                p.rank_[name] = r;
            }
        return p;
    }

    static Precedence from_ranks(std::map<std::string, std::size_t> ranks) {
        Precedence p;
        p.rank_ = std::move(ranks);
        p.compact();
        return p;
    }

    bool contains(const std::string& f) const { return rank_.count(f) != 0; }

    std::size_t rank(const std::string& f) const {
        auto it = rank_.find(f);
        if (it == rank_.end()) throw PrecedenceError("symbol " + f + " missing from precedence");
        return it->second;
    }

    bool less(const std::string& g, const std::string& f) const { return rank(g) < rank(f); }
    bool equivalent(const std::string& g, const std::string& f) const { return rank(g) == rank(f); }

    const std::map<std::string, std::size_t>& ranks() const { return rank_; }

    /// Ascending classes; members in name order.
    std::vector<std::vector<std::string>> classes() const {
        std::size_t n = 0;
        for (const auto& [_, r] : rank_) n = std::max(n, r + 1);
        std::vector<std::vector<std::string>> out(n);
        for (const auto& [name, r] : rank_) out[r].push_back(name);
        out.erase(std::remove_if(out.begin(), out.end(), [](const auto& c) { return c.empty(); }), out.end());
        return out;
    }

    /// Number of strictly lower classes plus one.
    std::size_t level(const std::string& f) const {
        std::set<std::size_t> lower;
        std::size_t r = rank(f);
        for (const auto& [_, q] : rank_)
            if (q < r) lower.insert(q);
        return lower.size() + 1;
    }

    std::string to_string() const {
        std::string out;
        auto cls = classes();
        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (i) out += " < ";
            for (std::size_t j = 0; j < cls[i].size(); ++j) {
                if (j) out += " = ";
                out += cls[i][j];
            }
        }
        return out;
    }

    friend bool operator==(const Precedence& a, const Precedence& b) { return a.classes() == b.classes(); }

private:
    void compact() {
        std::set<std::size_t> used;
        for (const auto& [_, r] : rank_) used.insert(r);
        std::map<std::size_t, std::size_t> dense;
        for (auto r : used) dense[r] = dense.size();
        for (auto& [_, r] : rank_) r = dense[r];
    }

    std::map<std::string, std::size_t> rank_;
};

/// Valency vectors for every defined symbol.
class Valency {
public:
    Valency() = default;
    explicit Valency(std::map<std::string, ValencyVector> bits) : bits_(std::move(bits)) {}

    void set(const std::string& f, ValencyVector v) { bits_[f] = std::move(v); }

    /// Valency of f at 0-based argument index i.
    int at(const std::string& f, std::size_t i) const {
        auto it = bits_.find(f);
        if (it == bits_.end()) throw SignatureError("no valency for " + f);
        return it->second.at(i);
    }

    const ValencyVector& of(const std::string& f) const {
        auto it = bits_.find(f);
        if (it == bits_.end()) throw SignatureError("no valency for " + f);
        return it->second;
    }

    bool contains(const std::string& f) const { return bits_.count(f) != 0; }
    const std::map<std::string, ValencyVector>& all() const { return bits_; }

    friend bool operator==(const Valency&, const Valency&) = default;

private:
    std::map<std::string, ValencyVector> bits_;
};

inline std::string valency_to_string(const ValencyVector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out + ")";
}

/// Equivalent symbols must agree on arity and valency.
inline void check_class_agreement(const Signature& sig, const Valency& nu, const Precedence& prec) {
    for (const auto& f : sig.functions()) {
        if (!prec.contains(f.name)) throw PrecedenceError("precedence does not rank " + f.name);
        if (!nu.contains(f.name)) throw PrecedenceError("no valency for " + f.name);
    }
    for (const auto& f : sig.functions())
        for (const auto& g : sig.functions()) {
            if (f.name >= g.name || !prec.equivalent(f.name, g.name)) continue;
            if (f.arity != g.arity)
                throw PrecedenceError("equivalent symbols " + f.name + " and " + g.name + " differ in arity");
            if (nu.of(f.name) != nu.of(g.name))
                throw PrecedenceError("equivalent symbols " + f.name + " and " + g.name + " differ in valency");
        }
}

// ---------------------------------------------------------------------------
// Programs

struct Program {
    Signature signature;
    std::vector<Rule> rules;
    /// Declared in the source, if any; otherwise inferred on demand.
    std::optional<Precedence> precedence;

    /// Declared valencies, present only when every defined symbol has one.
    std::optional<Valency> declared_valency() const {
        Valency v;
        for (const auto& f : signature.functions()) {
            if (!f.valency) return std::nullopt;
            v.set(f.name, *f.valency);
        }
        return v;
    }
};

// ---------------------------------------------------------------------------
// Substitutions and matching

using Substitution = std::map<std::string, Term>;

inline Term substitute(const Term& t, const Substitution& sigma) {
    if (t.is_var()) {
        auto it = sigma.find(t.name());
        return it == sigma.end() ? t : it->second;
    }
    if (t.arity() == 0) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const auto& a : t.args()) {
        args.push_back(substitute(a, sigma));
        changed = changed || args.back().id() != a.id();
    }
    return changed ? Term::app(t.name(), std::move(args)) : t;
}

namespace detail {
inline bool match_into(const Term& pattern, const Term& subject, Substitution& theta) {
    if (pattern.is_var()) {
        auto [it, inserted] = theta.emplace(pattern.name(), subject);
        return inserted || it->second == subject;
    }
    if (subject.is_var() || pattern.name() != subject.name() || pattern.arity() != subject.arity()) return false;
    for (std::size_t i = 0; i < pattern.arity(); ++i)
        if (!match_into(pattern.arg(i), subject.arg(i), theta)) return false;
    return true;
}
}  // namespace detail

/// theta with substitute(pattern, theta) == subject; repeated variables
/// must bind equal subterms.
inline std::optional<Substitution> match_pattern(const Term& pattern, const Term& subject) {
    Substitution theta;
    if (!detail::match_into(pattern, subject, theta)) return std::nullopt;
    return theta;
}

}  // namespace llpo

template <>
struct std::hash<llpo::Term> {
    std::size_t operator()(const llpo::Term& t) const noexcept { return t.hash(); }
};
