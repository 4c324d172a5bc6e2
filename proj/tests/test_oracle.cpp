#include <gtest/gtest.h>

#include <chrono>

#include "elh/reasoner.hpp"
#include "elh/text_format.hpp"
#include "support/bruteforce.hpp"

using namespace elh;
using namespace elh::testgen;

TEST(BruteForceChase, FollowsExistentialChains) {
  TBox t = parseTBox("CI: B [= some s. B\nCI: some r. some s. B [= A");
  BruteForceChase chase(t, parseABox("A: r(a,b)\nA: B(b)"));
  EXPECT_TRUE(chase.holds(Concept::atom("A"), "a"));
  EXPECT_TRUE(chase.truncated());
}

TEST(BruteForceChase, RoleInclusions) {
  BruteForceChase chase(parseTBox("RI: r [= s\nCI: some s. A [= B"), parseABox("A: r(a,b)\nA: A(b)"));
  EXPECT_TRUE(chase.hasRole("s", "a", "b"));
  EXPECT_TRUE(chase.holds(Concept::atom("B"), "a"));
  EXPECT_FALSE(chase.truncated());
}

TEST(BruteForceChase, EntailsCI) {
  TBox t = parseTBox("CI: A [= some r. B\nCI: B [= C");
  EXPECT_TRUE(bruteForceEntailsCI(t, parseConcept("A"), parseConcept("some r. C")));
  EXPECT_FALSE(bruteForceEntailsCI(t, parseConcept("C"), parseConcept("B")));
}

TEST(EnumerateConcepts, Counts) {
  EXPECT_EQ(enumerateConcepts({"A", "B"}, {}, 0, 2).size(), 4u);  // top, A, B, A and B
  // one role, depth 1: atoms A, B and 4 existentials; 1 + 6 + 15
  EXPECT_EQ(enumerateConcepts({"A", "B"}, {"r"}, 1, 2).size(), 22u);
}

TEST(ReasonerOracle, AgreesWithBruteForceChase) {
  auto start = std::chrono::steady_clock::now();
  OracleAgreement r = compareWithBruteForce(200);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& f : r.failures) ADD_FAILURE() << f;
  EXPECT_EQ(r.disagreements, 0u);
  EXPECT_GE(r.checks(), 10000u);
  EXPECT_LE(seconds, 60.0);
}
