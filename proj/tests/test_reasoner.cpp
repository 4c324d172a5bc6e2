#include <gtest/gtest.h>

#include "elh/errors.hpp"
#include "elh/reasoner.hpp"
#include "elh/text_format.hpp"

using namespace elh;

namespace {
Concept C(const char* s) { return parseConcept(s); }
}  // namespace

TEST(CanonicalAboxModel, DeclaredIndividualHasEmptyLabel) {
  ABox a;
  a.declare("a");
  auto I = canonicalAboxModel(a);
  ASSERT_EQ(I.size(), 1u);
  EXPECT_TRUE(I.label(0).empty());
}

TEST(CanonicalAboxModel, Extensions) {
  auto I = canonicalAboxModel(parseABox("A: r(a,b)\nA: B(b)\n"));
  EXPECT_TRUE(I.hasEdge(I.find("a"), "r", I.find("b")));
  EXPECT_TRUE(I.hasLabel(I.find("b"), "B"));
  EXPECT_FALSE(I.hasLabel(I.find("a"), "B"));
}

TEST(RegularModel, ChainWithTopFillers) {
  auto m = buildRegularModel(parseTBox("CI: A [= some r. some s. top"), parseABox("A: A(a)"));
  int a = m.individual("a");
  const auto& I = m.interpretation;
  ASSERT_EQ(I.successors(a).size(), 1u);
  int x = I.successors(a)[0].target;
  EXPECT_FALSE(m.isNamed(x));
  ASSERT_EQ(I.successors(x).size(), 1u);
  int y = I.successors(x)[0].target;
  EXPECT_TRUE(I.label(x).empty());
  EXPECT_TRUE(I.label(y).empty());
  EXPECT_TRUE(I.successors(y).empty());
}

TEST(RegularModel, CyclicDefinitionLoops) {
  auto m = buildRegularModel(parseTBox("CI: B [= some s. B"), parseABox("A: B(b)"));
  const auto& I = m.interpretation;
  int b = m.individual("b");
  ASSERT_EQ(I.successors(b).size(), 1u);
  int x = I.successors(b)[0].target;
  EXPECT_TRUE(I.hasLabel(x, "B"));
  ASSERT_EQ(I.successors(x).size(), 1u);
  EXPECT_EQ(I.successors(x)[0].target, x);
}

TEST(EntailsRI, Closure) {
  EXPECT_TRUE(entailsRI(parseTBox("RI: r [= s"), {"r", "s"}));
  EXPECT_TRUE(entailsRI(parseTBox("RI: r [= s\nRI: s [= u"), {"r", "u"}));
  EXPECT_FALSE(entailsRI(TBox{}, {"r", "s"}));
  EXPECT_TRUE(entailsRI(TBox{}, {"r", "r"}));
}

TEST(EntailsCI, Examples) {
  EXPECT_TRUE(entailsCI(parseTBox("CI: B [= A"), {C("B"), C("A")}));
  EXPECT_TRUE(entailsCI(parseTBox("CI: A [= some r. B\nCI: B [= C"), {C("A"), C("some r. C")}));
  EXPECT_TRUE(entailsCI(parseTBox("CI: B [= some s. B\nCI: some r. some s. B [= A"), {C("some r. B"), C("A")}));
  EXPECT_FALSE(entailsCI(parseTBox("CI: B [= A"), {C("A"), C("B")}));
}

TEST(EntailsCI, RoleInclusionsLiftExistentials) {
  TBox t = parseTBox("RI: r [= s\nCI: some s. A [= B");
  EXPECT_TRUE(entailsCI(t, {C("some r. A"), C("B")}));
  EXPECT_FALSE(entailsCI(t, {C("some s. A"), C("some r. A")}));
}

TEST(AnswersQuery, LoopChainAtomicQuery) {
  TBox t = parseTBox("CI: B [= some s. B\nCI: some r. some s. B [= A");
  ABox a = parseABox("A: r(a,b)\nA: B(b)");
  EXPECT_TRUE(answersQuery(t, a, Query::atomic("A", "a")));
  EXPECT_FALSE(answersQuery(t, a, Query::atomic("A", "b")));
}

TEST(AnswersQuery, InstanceAndRootedConjunctive) {
  TBox t = parseTBox("CI: A [= some r. some s. top");
  ABox a = parseABox("A: A(a)");
  EXPECT_TRUE(answersQuery(t, a, parseQuery("IQ (some r. some s. top)(a)")));
  EXPECT_TRUE(answersQuery(t, a, parseQuery("CQ a ; exists x1 x2 x3 x4 x5 ; r(a,x1), r(a,x2), s(x1,x3), s(x1,x4), "
                                             "s(x2,x4), s(x2,x5)")));
  EXPECT_FALSE(answersQuery(t, a, parseQuery("CQ a ; exists x y ; r(a,x), s(x,y), s(y,x)")));
}

TEST(AnswersQuery, BooleanQueryOverEmptyTBox) {
  EXPECT_FALSE(answersQuery(TBox{}, parseABox("A: A(a)"), parseQuery("CQ ; exists x ; M(x)")));
  EXPECT_TRUE(answersQuery(parseTBox("CI: A [= some r. M"), parseABox("A: A(a)"), parseQuery("CQ ; exists x ; M(x)")));
}

TEST(AnswersQuery, UnsupportedNonRootedQuery) {
  EXPECT_THROW(answersQuery(TBox{}, parseABox("A: A(a)"), parseQuery("CQ ; exists x y ; r(x,y)")),
               UnsupportedQueryError);
}

TEST(AboxHomomorphism, Examples) {
  auto h = aboxHomomorphism(parseABox("A: A(a)"), parseABox("A: A(b)\nA: B(b)"));
  ASSERT_TRUE(h);
  EXPECT_EQ(h->at("a"), "b");
  auto g = aboxHomomorphism(parseABox("A: r(a,b)"), parseABox("A: r(c,c)"));
  ASSERT_TRUE(g);
  EXPECT_EQ(g->at("a"), "c");
  EXPECT_EQ(g->at("b"), "c");
  EXPECT_FALSE(aboxHomomorphism(parseABox("A: A(a)"), parseABox("A: B(b)")));
}

TEST(Simulation, LoopNotSimulatedByFiniteChain) {
  auto sym = std::make_shared<SymbolTable>();
  auto I = canonicalAboxModel(parseABox("A: r(a,a)"), sym);
  auto J = canonicalAboxModel(parseABox("A: r(b,c)"), sym);
  auto s = simulation(I, J);
  EXPECT_FALSE(s.contains(I.find("a"), J.find("b")));
  EXPECT_EQ(s.removalRound(I.find("a"), J.find("b")), 2);
  auto back = simulation(J, I);
  EXPECT_TRUE(back.contains(J.find("b"), I.find("a")));
}

TEST(Bisimulation, ExtraBranchUpdate) {
  auto a0 = canonicalAboxModel(parseABox("A: r(a,b)\nA: A1(b)\nA: A2(b)"));
  auto a = canonicalAboxModel(parseABox("A: r(a,b)\nA: A1(b)\nA: A2(b)\nA: r(a2,b2)\nA: A1(b2)"));
  EXPECT_FALSE(bisimilar(a0, a0.find("a"), a, a.find("a2")));
  EXPECT_TRUE(bisimilar(a0, a0.find("a"), a, a.find("a")));
}

TEST(Bisimulation, SelfLoops) {
  auto I = canonicalAboxModel(parseABox("A: r(a,a)\nA: A(a)\nA: r(b,c)\nA: r(c,b)\nA: A(b)\nA: A(c)"));
  EXPECT_TRUE(bisimilar(I, I.find("a"), I, I.find("b")));
}

TEST(Inseparable, ExtraBranchPair) {
  TBox t = parseTBox("CI: some r. A1 [= B");
  TBox h = parseTBox("CI: some r. (A1 and A2) [= B");
  ABox a0 = parseABox("A: r(a,b)\nA: A1(b)\nA: A2(b)");
  EXPECT_TRUE(inseparable(t, h, a0, QueryLanguage::IQ).inseparable);
  ABox a = a0;
  a.merge(parseABox("A: r(a2,b2)\nA: A1(b2)"));
  auto r = inseparable(t, h, a, QueryLanguage::IQ);
  ASSERT_FALSE(r.inseparable);
  EXPECT_EQ(r.counterexample->str(), Query::instance(Concept::atom("B"), "a2").str());
}

TEST(Inseparable, AtomicCounterexample) {
  auto r = inseparable(parseTBox("CI: B [= A"), TBox{}, parseABox("A: B(b)"), QueryLanguage::AQ);
  ASSERT_FALSE(r.inseparable);
  EXPECT_EQ(*r.counterexample, Query::atomic("A", "b"));
}

TEST(Inseparable, ZigzagCounterexample) {
  TBox t = parseTBox("CI: A [= some r. some s. top");
  ABox a = parseABox("A: A(a)");
  auto r = inseparable(t, TBox{}, a, QueryLanguage::CQr, {WitnessStyle::Zigzag, 0});
  ASSERT_FALSE(r.inseparable);
  EXPECT_EQ(formatQuery(*r.counterexample),
            "CQ a ; exists x1 x2 x3 x4 x5 ; r(a,x1), r(a,x2), s(x1,x3), s(x1,x4), s(x2,x4), s(x2,x5)");
  EXPECT_TRUE(answersQuery(t, a, *r.counterexample));
}

TEST(Inseparable, IdenticalTBoxes) {
  TBox t = parseTBox("CI: A [= some r. B\nCI: some r. B [= C\nRI: r [= s");
  ABox a = parseABox("A: A(a)\nA: r(a,b)");
  for (auto l : {QueryLanguage::AQ, QueryLanguage::IQ, QueryLanguage::CQr}) EXPECT_TRUE(inseparable(t, t, a, l).inseparable);
}
