#include <gtest/gtest.h>

#include "elh/errors.hpp"
#include "elh/reasoner.hpp"
#include "elh/text_format.hpp"
#include "elh/updates.hpp"
#include "support/generators.hpp"

using namespace elh;

namespace {

Concept C(const char* s) { return parseConcept(s); }

struct Harness {
  OracleSession session;
  LearnerContext ctx;
  Harness(const TBox& t, const ABox& a)
      : session(t, a, QueryLanguage::IQ), ctx(session.framework(), session, &session) {}
};

ABox narrowAbox() { return parseABox("A: r(a,b)\nA: A1(b)\nA: A2(b)"); }

ABox withCopy(const ABox& a, const std::string& suffix) {
  ABox out = a;
  for (const auto& ca : a.conceptAssertions()) out.addConcept(ca.name, ca.individual + suffix);
  for (const auto& ra : a.roleAssertions()) out.addRole(ra.role, ra.from + suffix, ra.to + suffix);
  for (const auto& i : a.individuals()) out.declare(i + suffix);
  return out;
}

}  // namespace

TEST(BisimPreservation, SameAbox) {
  TBox t = parseTBox("CI: some r. A1 [= B");
  TBox h = parseTBox("CI: some r. (A1 and A2) [= B");
  EXPECT_EQ(checkBisimPreservation(t, h, narrowAbox(), narrowAbox()), Preservation::Preserved);
}

TEST(BisimPreservation, ExtraBranchNotApplicable) {
  TBox t = parseTBox("CI: some r. A1 [= B");
  TBox h = parseTBox("CI: some r. (A1 and A2) [= B");
  ABox a = narrowAbox();
  a.merge(parseABox("A: r(a2,b2)\nA: A1(b2)"));
  EXPECT_EQ(checkBisimPreservation(t, h, narrowAbox(), a), Preservation::NotApplicable);
  EXPECT_FALSE(inseparable(t, h, a, QueryLanguage::IQ).inseparable);
}

TEST(BisimPreservation, DisjointCopyPreserved) {
  TBox t = parseTBox("CI: some r. A1 [= B");
  TBox h = parseTBox("CI: some r. (A1 and A2) [= B");
  ABox a = withCopy(narrowAbox(), "_c");
  auto sym = std::make_shared<SymbolTable>();
  auto I = canonicalAboxModel(a, sym);
  EXPECT_TRUE(bisimilar(I, I.find("a"), I, I.find("a_c")));
  EXPECT_EQ(checkBisimPreservation(t, h, narrowAbox(), a), Preservation::Preserved);
}

TEST(BisimPreservation, PreconditionViolations) {
  TBox t = parseTBox("CI: some r. A1 [= B");
  EXPECT_THROW(checkBisimPreservation(t, TBox{}, narrowAbox(), narrowAbox()), ContractViolation);
  TBox withRole = parseTBox("CI: some r. A1 [= B\nRI: r [= s");
  EXPECT_THROW(checkBisimPreservation(withRole, t, narrowAbox(), narrowAbox()), ContractViolation);
}

TEST(Generalise, DropsName) {
  TBox t = parseTBox("CI: some r. A1 [= B");
  Harness run(t, narrowAbox());
  GeneraliseStats stats;
  TBox g = generalise(run.ctx, parseTBox("CI: some r. (A1 and A2) [= B"), &stats);
  EXPECT_EQ(formatTBox(g), formatTBox(t));
  EXPECT_EQ(stats.steps, 1u);
}

TEST(Generalise, RaisesName) {
  TBox t = parseTBox("CI: A [= A2\nCI: some r. A2 [= B");
  Harness run(t, parseABox("A: A(a)\nA: r(b,a)"));
  TBox g = generalise(run.ctx, parseTBox("CI: some r. A [= B"));
  EXPECT_EQ(formatTBox(g), formatTBox(parseTBox("CI: some r. A2 [= B")));
}

TEST(Generalise, RaisesRole) {
  TBox t = parseTBox("RI: r [= s\nCI: some s. A [= B");
  Harness run(t, parseABox("A: A(a)\nA: r(b,a)"));
  TBox g = generalise(run.ctx, parseTBox("RI: r [= s\nCI: some r. A [= B"));
  EXPECT_EQ(formatTBox(g), formatTBox(t));
}

TEST(Generalise, UnchangedWithoutReplacement) {
  TBox t = parseTBox("CI: some r. A1 [= B\nCI: A1 [= some s. top");
  Harness run(t, narrowAbox());
  GeneraliseStats stats;
  EXPECT_EQ(formatTBox(generalise(run.ctx, t, &stats)), formatTBox(t));
  EXPECT_EQ(stats.steps, 0u);
}

TEST(LinearDerivation, Examples) {
  EXPECT_TRUE(linearDerivation(parseTBox("CI: A [= B"), "A", "B"));
  EXPECT_FALSE(linearDerivation(parseTBox("CI: A [= B and C"), "A", "B"));
  EXPECT_TRUE(linearDerivation(parseTBox("CI: A [= B"), "A", "A"));
  EXPECT_FALSE(linearDerivation(parseTBox("CI: A [= B"), "B", "A"));
  EXPECT_TRUE(linearDerivation(parseTBox("RI: r [= s"), "r", "s", true));
  EXPECT_FALSE(linearDerivation(parseTBox("RI: r [= s\nRI: r [= u"), "r", "s", true));
}

TEST(GeneralisedClosure, Membership) {
  TBox t = parseTBox("CI: A [= B");
  ABox a0 = parseABox("A: A(a)");
  EXPECT_TRUE(inGeneralisedClosure(t, a0, a0));
  EXPECT_TRUE(inGeneralisedClosure(t, a0, parseABox("A: B(a)")));
  EXPECT_FALSE(inGeneralisedClosure(t, a0, parseABox("A: A(a)\nA: B(c)")));
  EXPECT_FALSE(inGeneralisedClosure(t, parseABox("A: B(a)"), parseABox("A: A(a)")));
}

TEST(GeneralisedClosure, ReplacementsMayMerge) {
  TBox t = parseTBox("CI: A [= B");
  ABox a0 = parseABox("A: A(a)\nA: B(a)");
  EXPECT_TRUE(inGeneralisedClosure(t, a0, parseABox("A: B(a)")));
  EXPECT_FALSE(inGeneralisedClosure(t, parseABox("A: A(a)"), parseABox("A: A(a)\nA: B(a)")));
}

TEST(GeneralisedClosure, EnumerationMatchesMembership) {
  TBox t = parseTBox("CI: A [= B\nRI: r [= s");
  ABox a0 = parseABox("A: A(a)\nA: A(b)\nA: r(a,b)");
  auto all = enumerateClosure(t, a0, 100);
  EXPECT_EQ(all.size(), 8u);
  EXPECT_EQ(all.front(), a0);
  for (const auto& a : all) EXPECT_TRUE(inGeneralisedClosure(t, a0, a));
  EXPECT_EQ(enumerateClosure(t, a0, 3).size(), 3u);
}

TEST(LearnWithUpdates, RequiresCoveringSignature) {
  TBox t = parseTBox("CI: some r. A1 [= B");
  OracleSession s(t, narrowAbox(), QueryLanguage::IQ);
  EXPECT_THROW(learnWithUpdates(s.framework(), s, s), ConfigurationError);
}

TEST(LearnWithUpdates, NarrowHypothesisGeneralised) {
  TBox t = parseTBox("CI: some r. A1 [= B");
  ABox a0 = narrowAbox();
  a0.addConcept("B", "c");
  OracleSession s(t, a0, QueryLanguage::IQ);
  auto r = learnWithUpdates(s.framework(), s, s);
  EXPECT_EQ(formatTBox(r.hypothesis), formatTBox(t));
  ABox a = a0;
  a.merge(parseABox("A: r(a2,b2)\nA: A1(b2)"));
  EXPECT_TRUE(inseparable(t, r.hypothesis, a, QueryLanguage::IQ).inseparable);
}

TEST(LearnWithUpdates, NoDerivationsReducesToIQ) {
  TBox t = parseTBox("CI: A [= some r. B\nCI: some r. C [= D");
  ABox a0 = parseABox("A: A(a)\nA: r(a,b)\nA: C(b)\nA: B(c)\nA: D(c)");
  ASSERT_EQ(enumerateClosure(t, a0).size(), 1u);
  OracleSession s1(t, a0, QueryLanguage::IQ);
  auto plain = learnIQ(s1.framework(), s1, s1);
  OracleSession s2(t, a0, QueryLanguage::IQ);
  ClosureOracle closure(s2, enumerateClosure(t, a0));
  auto updated = learnWithUpdates(s2.framework(), s2, closure);
  EXPECT_TRUE(inseparable(t, updated.hypothesis, a0, QueryLanguage::IQ).inseparable);
  EXPECT_TRUE(inseparable(plain.hypothesis, updated.hypothesis, a0, QueryLanguage::IQ).inseparable);
}

TEST(LearnWithUpdates, ChainReplacedAbox) {
  TBox t = parseTBox("CI: A [= B\nCI: some r. B [= C");
  ABox a0 = parseABox("A: A(a)\nA: r(b,a)\nA: C(c)\nA: B(d)");
  auto closure = enumerateClosure(t, a0);
  ASSERT_EQ(closure.size(), 2u);
  OracleSession s(t, a0, QueryLanguage::IQ);
  ClosureOracle eq(s, closure);
  auto r = learnWithUpdates(s.framework(), s, eq);
  for (const auto& a : closure) EXPECT_TRUE(inseparable(t, r.hypothesis, a, QueryLanguage::IQ).inseparable);
}

TEST(LearnWithUpdates, RandomInstancesSatisfyClosureProperties) {
  testgen::GeneratorConfig cfg;
  cfg.coverSignature = true;
  testgen::Generator gen(11, cfg);
  for (int i = 0; i < 40; ++i) {
    auto inst = gen.instance();
    auto closure = enumerateClosure(inst.tbox, inst.abox, 12);
    OracleSession s(inst.tbox, inst.abox, QueryLanguage::IQ);
    ClosureOracle eq(s, closure);
    auto r = learnWithUpdates(s.framework(), s, eq);
    for (const auto& ci : r.hypothesis.conceptInclusions()) EXPECT_TRUE(entailsCI(inst.tbox, ci)) << ci.str();
    Reasoner hr(r.hypothesis);
    for (const auto& a : closure) {
      EXPECT_TRUE(inGeneralisedClosure(inst.tbox, inst.abox, a));
      EXPECT_TRUE(inseparable(inst.tbox, r.hypothesis, a, QueryLanguage::IQ).inseparable) << formatTBox(inst.tbox);
      for (const auto& ca : a.conceptAssertions())
        EXPECT_TRUE(hr.entails(inst.abox, Query::atomic(ca.name, ca.individual)));
      for (const auto& ra : a.roleAssertions())
        EXPECT_TRUE(hr.entails(inst.abox, Query::atomicRole(ra.role, ra.from, ra.to)));
    }
    ABox copy = withCopy(inst.abox, "_c");
    EXPECT_EQ(checkBisimPreservation(inst.tbox, r.hypothesis, inst.abox, copy), Preservation::Preserved);
  }
}
