#include <gtest/gtest.h>

#include "llpo/parser.hpp"
#include "llpo/schema.hpp"

using namespace llpo;

namespace {

bool certified(const EmittedSchema& e) {
    auto res = check_llpo(e.program, e.valency, *e.program.precedence);
    return res.certificate && verify_certificate(e.program, *res.certificate);
}

// Every parameter tier vector with entries in [k, top].
std::vector<std::vector<std::size_t>> tier_vectors(std::size_t n, std::size_t k, std::size_t top) {
    std::vector<std::vector<std::size_t>> out{{}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& v : out)
            for (std::size_t t = k; t <= top; ++t) {
                auto w = v;
                w.push_back(t);
                next.push_back(w);
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace

TEST(Flat, BinaryWordsGiveThreeRules) {
    SchemaSpec spec;
    spec.kind = SchemaKind::Flat;
    spec.constructors = {{"eps", 0}, {"s0", 1}, {"s1", 1}};
    spec.params = 1;
    auto e = emit_flat_recursion(spec);
    ASSERT_EQ(e.program.rules.size(), 3u);
    EXPECT_EQ(e.program.rules[0].to_string(), "f(eps, x1) -> g(eps, x1)");
    EXPECT_EQ(e.program.rules[1].to_string(), "f(s0(t), x1) -> h(t, x1)");
    EXPECT_EQ(e.valency.of("f"), (ValencyVector{1, 0}));
    EXPECT_TRUE(certified(e));
}

TEST(ParamSubst, MatchesTheHandWrittenProgram) {
    SchemaSpec spec;
    spec.kind = SchemaKind::ParamSubst;
    spec.params = 1;
    spec.branches = 2;
    spec.recursion_tier = 1;
    spec.output_tier = 0;
    auto e = emit_param_subst_recursion(spec);
    ASSERT_EQ(e.program.rules.size(), 2u);
    EXPECT_EQ(e.program.rules[0].to_string(), "f(b, x1) -> g(x1)");
    EXPECT_EQ(e.program.rules[1].to_string(), "f(c(t), x1) -> h(t, x1, f(t, delta0(x1)), f(t, delta1(x1)))");
    EXPECT_EQ(e.valency.of("h"), (ValencyVector{1, 0, 0, 0}));
    EXPECT_EQ(e.program.precedence->to_string(), "delta0 = delta1 < g < h < f");
    EXPECT_TRUE(certified(e));
}

TEST(ParamSubst, EqualTiersAreRejected) {
    for (std::size_t k = 0; k <= 2; ++k) {
        SchemaSpec spec;
        spec.kind = SchemaKind::ParamSubst;
        spec.recursion_tier = k;
        spec.output_tier = k;
        EXPECT_THROW(emit_param_subst_recursion(spec), SchemaError) << k;
    }
}

TEST(ParamSubst, NoParametersKeepsTheConstant) {
    SchemaSpec spec;
    spec.kind = SchemaKind::ParamSubst;
    spec.params = 0;
    spec.branches = 1;
    auto e = emit_schema(spec);
    EXPECT_EQ(e.program.rules[0].to_string(), "f(b) -> g(b)");
    EXPECT_EQ(e.program.rules[1].to_string(), "f(c(t)) -> h(t, f(t))");
    EXPECT_TRUE(certified(e));
}

TEST(ParamSubst, HigherTierParametersPassUnchanged) {
    SchemaSpec spec;
    spec.kind = SchemaKind::ParamSubst;
    spec.params = 2;
    spec.branches = 1;
    spec.recursion_tier = 2;
    spec.output_tier = 0;
    spec.param_tiers = {1, 0};
    auto e = emit_schema(spec);
    EXPECT_EQ(e.program.rules[1].to_string(), "f(c(t), x1, x2) -> h(t, x1, x2, f(t, x1, sigma2_0(x1, x2)))");
    EXPECT_EQ(e.valency.of("f"), (ValencyVector{1, 1, 0}));
    EXPECT_TRUE(certified(e));
}

TEST(Schemas, EveryTierConfigurationCertifies) {
    std::size_t configurations = 0;
    for (std::size_t k = 0; k <= 2; ++k)
        for (std::size_t p = k + 1; p <= 2; ++p)
            for (std::size_t n = 0; n <= 2; ++n)
                for (const auto& tiers : tier_vectors(n, k, 2))
                    for (std::size_t m = 1; m <= 2; ++m)
                        for (auto kind : {SchemaKind::Flat, SchemaKind::ParamSubst})
                            for (bool identity : {false, true}) {
                                SchemaSpec spec;
                                spec.kind = kind;
                                spec.params = n;
                                spec.branches = m;
                                spec.recursion_tier = p;
                                spec.output_tier = k;
                                spec.param_tiers = tiers;
                                spec.identity_substitutions = identity;
                                auto e = emit_schema(spec);
                                EXPECT_TRUE(certified(e)) << write_program(e.program, e.valency);
                                ++configurations;
                            }
    EXPECT_GT(configurations, 0u);
}

TEST(Schemas, RejectBadSpecs) {
    SchemaSpec spec;
    spec.kind = SchemaKind::Flat;
    spec.constructors = {{"s", 1}};
    EXPECT_THROW(emit_schema(spec), SchemaError);
    spec = {};
    spec.params = 2;
    spec.param_tiers = {0};
    EXPECT_THROW(emit_schema(spec), SchemaError);
    spec = {};
    spec.kind = SchemaKind::ParamSubst;
    spec.branches = 0;
    EXPECT_THROW(emit_schema(spec), SchemaError);
}

TEST(Schemas, UserSignatureMustDeclareSubFunctions) {
    Signature sig;
    sig.add_constructor("b", 0);
    sig.add_constructor("c", 1);
    sig.add_function("g", 1);
    SchemaSpec spec;
    spec.kind = SchemaKind::Flat;
    spec.signature = sig;
    EXPECT_THROW(emit_schema(spec), SchemaError) << "g has the wrong arity and h is missing";
    Signature full;
    full.add_constructor("b", 0);
    full.add_constructor("c", 1);
    full.add_function("g", 2);
    full.add_function("h", 2);
    spec.signature = full;
    auto e = emit_schema(spec);
    EXPECT_TRUE(certified(e));
}
