#include <gtest/gtest.h>

#include <set>

#include "llpo/certifier.hpp"

using namespace llpo;

namespace {

Program load(const char* name) { return load_program(std::string(LLPO_PROGRAMS_DIR) + "/" + name); }

// Number of weak orderings of n items (ordered Bell numbers).
std::size_t fubini(std::size_t n) {
    std::vector<std::size_t> a(n + 1, 0);
    a[0] = 1;
    for (std::size_t m = 1; m <= n; ++m) {
        std::size_t binom = 1;
        for (std::size_t k = 1; k <= m; ++k) {
            binom = binom * (m - k + 1) / k;
            a[m] += binom * a[m - k];
        }
    }
    return a[n];
}

}  // namespace

TEST(Check, ReverseCertifies) {
    auto p = load("reverse.trs");
    auto res = check_llpo(p, *p.declared_valency(), Precedence::from_classes({{"reverse"}}));
    ASSERT_TRUE(res.certificate);
    EXPECT_TRUE(res.failures.empty());
    EXPECT_EQ(res.certificate->proofs.size(), 3u);
    EXPECT_TRUE(verify_certificate(p, *res.certificate));
}

TEST(Check, ReportsEveryFailingRule) {
    auto p = load("reverse.trs");
    Valency nu;
    nu.set("reverse", {0, 1});
    auto res = check_llpo(p, nu, Precedence::from_classes({{"reverse"}}));
    EXPECT_FALSE(res.certificate);
    ASSERT_EQ(res.failures.size(), 2u);
    EXPECT_EQ(res.failures[0].rule, 1u);
    EXPECT_EQ(res.failures[1].rule, 2u);
    EXPECT_TRUE(res.failures[0].obligation);
}

TEST(Check, RejectsInvalidProgramsAndBadPrecedences) {
    auto bad = parse_program("constructors: e/0\nfunctions: f/1\nrules:\n  f(x) -> y\n");
    Valency nu;
    nu.set("f", {1});
    EXPECT_THROW(check_llpo(bad, nu, Precedence::from_classes({{"f"}})), InvalidProgram);

    auto p = load("paramsubst.trs");
    Valency mixed = *p.declared_valency();
    mixed.set("delta1", {1});
    EXPECT_THROW(check_llpo(p, mixed, *p.precedence), PrecedenceError);
}

TEST(Check, MultiplicationCertifies) {
    auto p = load("mul.trs");
    auto res = check_llpo(p, *p.declared_valency(), *p.precedence);
    ASSERT_TRUE(res.certificate);
    EXPECT_TRUE(verify_certificate(p, *res.certificate));
}

TEST(Verify, DetectsForeignCertificates) {
    auto p = load("reverse.trs");
    auto res = check_llpo(p, *p.declared_valency(), Precedence::from_classes({{"reverse"}}));
    ASSERT_TRUE(res.certificate);
    Certificate cert = *res.certificate;
    std::swap(cert.proofs[1], cert.proofs[2]);
    EXPECT_FALSE(verify_certificate(p, cert));
    cert = *res.certificate;
    cert.proofs.pop_back();
    EXPECT_FALSE(verify_certificate(p, cert));
}

TEST(Certificate, JsonRoundTrip) {
    auto p = load("paramsubst.trs");
    auto res = check_llpo(p, *p.declared_valency(), *p.precedence);
    ASSERT_TRUE(res.certificate);
    auto j = certificate_to_json(*res.certificate);
    EXPECT_EQ(j["precedence"], "delta0 = delta1 < h < f");
    auto back = certificate_from_json(nlohmann::json::parse(j.dump()), p.signature);
    EXPECT_EQ(back.valency, res.certificate->valency);
    EXPECT_EQ(back.precedence, res.certificate->precedence);
    EXPECT_TRUE(verify_certificate(p, back));
}

TEST(Precedence, ParsesText) {
    auto prec = parse_precedence("a = b < c");
    EXPECT_TRUE(prec.equivalent("a", "b"));
    EXPECT_TRUE(prec.less("b", "c"));
    EXPECT_THROW(parse_precedence("a < a"), PrecedenceError);
}

TEST(WeakOrders, CountsMatchOrderedBellNumbers) {
    for (std::size_t n = 0; n <= 5; ++n) {
        std::set<std::vector<std::size_t>> seen;
        std::size_t classes_before = 0;
        bool coarsest_first = true;
        for_each_weak_order(n, [&](const std::vector<std::size_t>& r) {
            seen.insert(r);
            std::size_t k = r.empty() ? 0 : *std::max_element(r.begin(), r.end()) + 1;
            if (k < classes_before) coarsest_first = false;
            classes_before = k;
            return false;
        });
        EXPECT_EQ(seen.size(), fubini(n)) << n;
        EXPECT_TRUE(coarsest_first) << n;
    }
    EXPECT_EQ(fubini(3), 13u);
}

TEST(Infer, FindsReverseFromScratch) {
    auto p = load("reverse.trs");
    auto res = infer_certificate(p);
    ASSERT_TRUE(res.certificate);
    EXPECT_EQ(res.certificate->valency.of("reverse"), (ValencyVector{1, 0}));
    EXPECT_TRUE(verify_certificate(p, *res.certificate));
}

TEST(Infer, ExponentialSpaceIsExhausted) {
    auto p = load("exp.trs");
    auto res = infer_certificate(p);
    EXPECT_FALSE(res.certificate);
    // One symbol of arity 2: four valency vectors, one precedence each.
    EXPECT_EQ(res.candidates, 4u);
}

TEST(Infer, KeepsDeclaredParts) {
    auto p = load("reverse.trs");
    auto res = infer_certificate(p, 1'000'000, declared_constraints(p));
    ASSERT_TRUE(res.certificate);
    EXPECT_EQ(res.candidates, 1u);

    auto q = load("paramsubst.trs");
    res = infer_certificate(q, 1'000'000, declared_constraints(q));
    ASSERT_TRUE(res.certificate);
    EXPECT_EQ(res.certificate->precedence, *q.precedence);
    EXPECT_EQ(res.candidates, 1u);
}

TEST(Infer, ParamSubstFromScratch) {
    auto p = load("paramsubst.trs");
    auto res = infer_certificate(p);
    ASSERT_TRUE(res.certificate);
    EXPECT_TRUE(verify_certificate(p, *res.certificate));
    EXPECT_TRUE(res.certificate->precedence.less("h", "f"));
}

TEST(Infer, CapIsEnforced) {
    auto p = load("paramsubst.trs");
    EXPECT_THROW(infer_certificate(p, 10), SearchCapExceeded);
}
