#include <gtest/gtest.h>

#include "elh/errors.hpp"
#include "elh/syntax.hpp"
#include "elh/text_format.hpp"

using namespace elh;

TEST(Size, TopIsOneSymbol) { EXPECT_EQ(size(Concept::top()), 1u); }

TEST(Size, ExistentialOverConjunctionCountsParentheses) {
  // ∃ r . ( A ⊓ B ) = 8 symbols in the canonical serialization.
  Concept c = Concept::exists("r", Concept::conj({Concept::atom("A"), Concept::atom("B")}));
  EXPECT_EQ(c.str(), "∃r.(A⊓B)");
  EXPECT_EQ(size(c), 8u);
}

TEST(Size, SingleCiTBox) {
  TBox t = parseTBox("CI: A [= some r. B");
  EXPECT_EQ(t.conceptInclusions().front().str(), "A⊑∃r.B");
  EXPECT_EQ(size(t), 6u);
}

TEST(Size, MultiCharacterNamesCountOnce) {
  EXPECT_EQ(symbolCount("Person⊑∃hasParent.Person"), 6u);
}

TEST(ConceptTree, TopIsSingleUnlabelledVertex) {
  auto t = treeOfConcept(Concept::top());
  ASSERT_EQ(t.vertexCount(), 1u);
  EXPECT_TRUE(t.labels[0].empty());
  EXPECT_TRUE(t.edges.empty());
}

TEST(ConceptTree, ExistsAtomIsEdgeToLabelledLeaf) {
  auto t = treeOfConcept(parseConcept("some r. A"));
  ASSERT_EQ(t.vertexCount(), 2u);
  ASSERT_EQ(t.edges.size(), 1u);
  EXPECT_EQ(t.edges[0].role, "r");
  EXPECT_EQ(t.labels[static_cast<std::size_t>(t.edges[0].to)], std::set<std::string>{"A"});
}

TEST(ConceptTree, EncodingDoesNotMergeEqualSuccessors) {
  Concept c = Concept::conj({Concept::conj({Concept::atom("A"), Concept::exists("r", Concept::atom("B"))}),
                             Concept::exists("r", Concept::atom("B"))});
  auto t = treeOfConcept(c);
  EXPECT_EQ(t.vertexCount(), 3u);
  EXPECT_EQ(t.labels[static_cast<std::size_t>(t.root)], std::set<std::string>{"A"});
  for (const auto& e : t.edges) EXPECT_EQ(t.labels[static_cast<std::size_t>(e.to)], std::set<std::string>{"B"});
}

TEST(ConceptTree, InverseEncoding) {
  ConceptTree t;
  t.addVertex();
  EXPECT_EQ(conceptOfTree(t), Concept::top());
  ConceptTree u;
  int r = u.addVertex({"A"});
  int l = u.addVertex({"B"});
  u.addEdge(r, "r", l);
  EXPECT_EQ(conceptOfTree(u), parseConcept("A and some r. B"));
}

TEST(ConceptTree, MalformedTreeIsRejected) {
  ConceptTree t;
  int a = t.addVertex();
  int b = t.addVertex();
  t.addEdge(a, "r", b);
  t.addEdge(b, "r", a);
  EXPECT_THROW(conceptOfTree(t), StructuralError);
}

TEST(AboxOfConcept, AtomAndChain) {
  auto a = aboxOfConcept(Concept::atom("A"));
  EXPECT_EQ(a.root, "x0");
  EXPECT_TRUE(a.abox.contains(ConceptAssertion{"A", "x0"}));
  EXPECT_EQ(a.abox.assertionCount(), 1u);

  auto b = aboxOfConcept(parseConcept("some r. some s. B"));
  EXPECT_EQ(b.abox.assertionCount(), 3u);
  EXPECT_TRUE(b.abox.contains(RoleAssertion{"r", "x0", "x1"}));
  EXPECT_TRUE(b.abox.contains(RoleAssertion{"s", "x1", "x2"}));
  EXPECT_TRUE(b.abox.contains(ConceptAssertion{"B", "x2"}));
}

TEST(AboxOfConcept, TopDeclaresRoot) {
  auto a = aboxOfConcept(Concept::top());
  EXPECT_EQ(a.abox.assertionCount(), 0u);
  EXPECT_EQ(a.abox.individuals(), std::set<std::string>{"x0"});
}

TEST(TextFormat, ParsesCiAndRi) {
  TBox t = parseTBox("CI: A [= some r. B\nRI: r [= s\n");
  ASSERT_EQ(t.conceptInclusions().size(), 1u);
  EXPECT_EQ(t.conceptInclusions()[0].lhs, Concept::atom("A"));
  EXPECT_EQ(t.conceptInclusions()[0].rhs, parseConcept("some r. B"));
  ASSERT_EQ(t.roleInclusions().size(), 1u);
  EXPECT_EQ(t.roleInclusions()[0].sub, "r");
  EXPECT_EQ(t.roleInclusions()[0].sup, "s");
}

TEST(TextFormat, DuplicateDefinitionsMergeOrFail) {
  const char* text = "CI: A [= B\nCI: A [= C\n";
  TBox merged = parseTBox(text);
  ASSERT_EQ(merged.conceptInclusions().size(), 1u);
  EXPECT_EQ(merged.conceptInclusions()[0].rhs, parseConcept("B and C"));
  ParseOptions strict;
  strict.mergeDefinitions = false;
  EXPECT_THROW(parseTBox(text, strict), TerminologyError);
}

TEST(TextFormat, SyntaxErrorCarriesPosition) {
  try {
    parseTBox("CI: A [= B\nCI: A [= some . B\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(TextFormat, NamespacesAreDisjoint) {
  EXPECT_THROW(parseDocument("CI: A [= some A. B\n"), ParseError);
}

TEST(TextFormat, RoundTrip) {
  const char* text =
      "CI: A [= B and some r. (C and some s. top)\n"
      "CI: some r. B [= A\n"
      "RI: r [= s\n"
      "A: B(a)\nA: r(a,b)\nIND: c\n"
      "Q: IQ (some r. B)(a)\n"
      "Q: CQ a ; exists x y ; r(a,x), s(x,y), B(y)\n";
  Document d = parseDocument(text);
  std::string again = formatTBox(d.tbox) + formatABox(d.abox);
  for (const auto& q : d.queries) again += "Q: " + formatQuery(q) + "\n";
  Document e = parseDocument(again);
  EXPECT_EQ(formatTBox(e.tbox), formatTBox(d.tbox));
  EXPECT_EQ(e.abox, d.abox);
  ASSERT_EQ(e.queries.size(), d.queries.size());
  for (std::size_t i = 0; i < d.queries.size(); ++i) EXPECT_EQ(e.queries[i], d.queries[i]);
}

TEST(Terminology, RejectsComplexBothSides) {
  TBox t;
  t.addConceptInclusion({parseConcept("some r. A"), parseConcept("some s. B")});
  EXPECT_FALSE(t.isTerminology());
  EXPECT_THROW(t.checkTerminology(), TerminologyError);
}

TEST(Query, Rootedness) {
  Query q = parseQuery("CQ a ; exists x y ; r(a,x), s(x,y)");
  EXPECT_TRUE(q.cq().isRooted());
  Query u = parseQuery("CQ ; exists x ; M(x)");
  EXPECT_FALSE(u.cq().isRooted());
}
