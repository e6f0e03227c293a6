#include <gtest/gtest.h>

#include "llpo/generators.hpp"
#include "llpo/parser.hpp"
#include "llpo/rewrite.hpp"

using namespace llpo;

namespace {

Program load(const char* name) { return load_program(std::string(LLPO_PROGRAMS_DIR) + "/" + name); }

// Reverses a word by walking it, independently of the rules.
Term reverse_onto(Term w, Term acc) {
    while (w.arity() == 1) {
        acc = Term::app(w.name(), {acc});
        w = w.arg(0);
    }
    return acc;
}

std::size_t unary(const Term& t) { return t.arity() == 0 ? 0 : 1 + unary(t.arg(0)); }

}  // namespace

TEST(Step, LeftmostInnermost) {
    auto p = load("mul.trs");
    Term t = parse_term("add(add(z, z), mul(z, z))", p.signature);
    auto step = rewrite_step(p, t);
    ASSERT_TRUE(step);
    EXPECT_EQ(step->position, (Position{0}));
    EXPECT_EQ(step->rule, 0u);
    EXPECT_EQ(step->result.to_string(), "add(z, mul(z, z))");
    EXPECT_FALSE(rewrite_step(p, parse_term("s(z)", p.signature)));
}

TEST(Normalize, ReverseExample) {
    auto p = load("reverse.trs");
    auto r = normalize(p, parse_term("reverse(s0(s1(eps)), eps)", p.signature), 100, true);
    EXPECT_EQ(r.status, NormalizeStatus::NormalForm);
    EXPECT_EQ(r.term.to_string(), "s1(s0(eps))");
    EXPECT_EQ(r.steps, 3u);
    ASSERT_EQ(r.trace.size(), 3u);
    EXPECT_EQ(r.trace[0].rule, 1u);
    EXPECT_EQ(r.trace[2].rule, 0u);
}

TEST(Normalize, AgreesWithDirectReversal) {
    auto p = load("reverse.trs");
    for (std::size_t n = 1; n <= 7; ++n)
        for (const auto& args : tuples_of_total_size(p.signature, 2, n)) {
            auto r = normalize(p, Term::app("reverse", args), 1000);
            EXPECT_EQ(r.term, reverse_onto(args[0], args[1]));
            EXPECT_EQ(r.steps, args[0].size());
        }
}

TEST(Normalize, ArithmeticMatchesIntegers) {
    auto p = load("mul.trs");
    for (std::size_t a = 0; a <= 5; ++a)
        for (std::size_t b = 0; b <= 5; ++b) {
            Term ta = parse_term("z", p.signature), tb = ta;
            for (std::size_t i = 0; i < a; ++i) ta = Term::app("s", {ta});
            for (std::size_t i = 0; i < b; ++i) tb = Term::app("s", {tb});
            auto r = normalize(p, Term::app("mul", {ta, tb}), 10000);
            ASSERT_EQ(r.status, NormalizeStatus::NormalForm);
            EXPECT_EQ(unary(r.term), a * b);
        }
}

TEST(Normalize, FuelRunsOut) {
    auto p = load("loop.trs");
    auto r = normalize(p, parse_term("f(eps)", p.signature), 50);
    EXPECT_EQ(r.status, NormalizeStatus::FuelExhausted);
    EXPECT_EQ(r.steps, 50u);
    // f(eps) reaches only itself, so the breadth-first search still ends.
    EXPECT_EQ(max_reachable_height(p, parse_term("f(eps)", p.signature), 10), 2u);
}

TEST(AllSteps, EnumeratesEveryRedex) {
    auto p = load("mul.trs");
    RuleIndex index(p);
    auto steps = all_steps(index, parse_term("add(add(z, z), mul(z, z))", p.signature));
    EXPECT_EQ(steps.size(), 2u);
}

TEST(Reachable, HeightOfReverse) {
    auto p = load("reverse.trs");
    // The accumulator grows to the full word while the input shrinks.
    EXPECT_EQ(max_reachable_height(p, parse_term("reverse(s0(s1(eps)), eps)", p.signature), 1000), 4u);
}

TEST(Cbv, ReverseMeasures) {
    auto p = load("reverse.trs");
    auto r = cbv_eval(p, parse_term("reverse(s0(s1(eps)), eps)", p.signature));
    ASSERT_EQ(r.status, EvalStatus::Value);
    EXPECT_EQ(r.value->to_string(), "s1(s0(eps))");
    EXPECT_EQ(r.calls, 3u);
    EXPECT_EQ(r.h, 4u);
    EXPECT_EQ(r.max_binding_size, 3u);
}

TEST(Cbv, UndefinedWhenNoRuleMatches) {
    auto p = load("partial.trs");
    auto r = cbv_eval(p, parse_term("f(eps)", p.signature));
    EXPECT_EQ(r.status, EvalStatus::Undefined);
    EXPECT_EQ(r.stuck, "f(eps)");
    EXPECT_FALSE(r.value);
}

TEST(Cbv, LimitsAreReported) {
    auto p = load("loop.trs");
    auto r = cbv_eval(p, parse_term("f(eps)", p.signature), {}, {1000, 100000});
    EXPECT_EQ(r.status, EvalStatus::FuelExhausted);
    auto q = load("reverse.trs");
    Term w = parse_term("eps", q.signature);
    for (int i = 0; i < 50; ++i) w = Term::app("s0", {w});
    auto deep = cbv_eval(q, Term::app("reverse", {w, parse_term("eps", q.signature)}), {}, {1000000, 10});
    EXPECT_EQ(deep.status, EvalStatus::DepthExceeded);
}

TEST(Cbv, SubstitutionMustBindValues) {
    auto p = load("reverse.trs");
    Term t = parse_term("reverse(x, eps)", p.signature);
    EXPECT_THROW(cbv_eval(p, t), std::invalid_argument);
    EXPECT_THROW(cbv_eval(p, t, {{"x", parse_term("reverse(eps, eps)", p.signature)}}), std::invalid_argument);
    auto r = cbv_eval(p, t, {{"x", parse_term("s1(eps)", p.signature)}});
    ASSERT_EQ(r.status, EvalStatus::Value);
    EXPECT_EQ(r.value->to_string(), "s1(eps)");
}

TEST(Cbv, AgreesWithNormalizeOnCertifiedPrograms) {
    for (const char* name : {"reverse.trs", "mul.trs", "paramsubst.trs"}) {
        auto p = load(name);
        for (const auto& args : main_inputs(p.signature, 1, 6)) {
            Term t = Term::app(p.signature.main(), args);
            auto nf = normalize(p, t, 100000);
            auto r = cbv_eval(p, t);
            if (r.status == EvalStatus::Value) {
                EXPECT_EQ(*r.value, nf.term) << name << " " << t.to_string();
                EXPECT_LE(r.h, max_reachable_height(p, t, 100000)) << name << " " << t.to_string();
            } else {
                // Stuck calls leave a defined symbol in the normal form.
                EXPECT_EQ(r.status, EvalStatus::Undefined) << name;
                EXPECT_FALSE(p.signature.is_value(nf.term)) << name;
            }
        }
    }
}
