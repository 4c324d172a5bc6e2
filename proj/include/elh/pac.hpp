#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "elh/learner.hpp"
#include "elh/syntax.hpp"
#include "elh/teacher.hpp"

namespace elh {

// m_i = ceil((1/eps) (ln(1/delta) + i ln 2)), at least 1.
std::size_t sampleCount(double eps, double delta, std::size_t i);

// Answers the i-th inseparability query with m_i labelled draws; the first
// draw on which the hypothesis disagrees with its label is returned.
class SampledEquivalenceOracle : public EquivalenceOracle {
 public:
  SampledEquivalenceOracle(ExampleOracle examples, double eps, double delta);
  std::optional<Example> inseparabilityQuery(const TBox& h) override;
  const std::vector<std::size_t>& schedule() const { return schedule_; }
  std::size_t samplesUsed() const { return examples_.draws(); }

 private:
  ExampleOracle examples_;
  double eps_;
  double delta_;
  std::vector<std::size_t> schedule_;
};

struct PacResult {
  TBox hypothesis;
  std::vector<std::size_t> schedule;  // m_i for every inseparability query asked
  std::size_t samplesUsed = 0;
  LearnerStats stats;
};

// Runs the exact learner of the session's language with sampled
// inseparability queries. Membership queries still go to the session.
PacResult pacFromExact(OracleSession& session, double eps, double delta, const Distribution& dist,
                       LearnerOptions options = {});

// Weight of the support examples on which h and t disagree.
double trueError(const TBox& h, const TBox& t, const ABox& a0, const Distribution& dist);

// Queries over the individuals of a0 for the given language, at most `cap`:
// concept and role assertions, then existential restrictions of depth one.
std::vector<Example> enumerateExamples(const ABox& a0, const Signature& sig, QueryLanguage lang,
                                       std::size_t cap = 200);

// Distribution file: {"examples": [{"abox": ..., "query": ...}], "weights": [...], "seed": n}.
std::string distributionToJson(const Distribution& d);
Distribution distributionFromJson(const std::string& text);

// ------------------------------------------------------------- fixture

// T_sigma = {A ⊑ ∃sigma.M} ∪ T_0 over the roles r and s.
struct SigmaFixture {
  std::size_t n = 1;
  std::string sigma;  // word over {r, s} of length n

  static TBox baseTBox(std::size_t n);  // T_0
  TBox tbox() const;
  static ABox abox();             // {A(a)}
  static Query existsM();         // ∃x M(x)
  static Concept path(const std::string& word, const Concept& filler);
  void validate() const;          // throws ConfigurationError
};

struct FixtureLearnResult {
  TBox hypothesis;
  std::optional<std::string> sigma;  // revealed or chosen word, if any
  std::size_t steps = 0;             // reasoner checks
};

// Returns T_0 or some T_sigma consistent with every labelled example.
// Throws DataError when no fixture target explains the sample.
FixtureLearnResult fixturePacLearner(const std::vector<LabeledExample>& sample, std::size_t n);

// Membership and inseparability oracle for the fixture that keeps the set of
// words still consistent with its answers and answers "no" whenever some
// remaining word allows it. Counterexamples are ∃x M(x) while the hypothesis
// misses M, and negative ∃sigma'.M(a) when it guesses a word sigma'.
class AdversarialFixtureOracle : public MembershipOracle, public EquivalenceOracle {
 public:
  explicit AdversarialFixtureOracle(std::size_t n);
  bool membershipQuery(const ABox& a, const Query& q) override;
  std::optional<Example> inseparabilityQuery(const TBox& h) override;
  std::size_t remaining() const { return remaining_.size(); }
  std::size_t queries() const { return queries_; }
  // The only word left; requires remaining() == 1.
  const std::string& identified() const;

 private:
  std::size_t n_;
  Reasoner base_;
  std::set<std::string> remaining_;
  std::size_t queries_ = 0;
};

struct FixtureExactResult {
  std::string sigma;
  std::size_t membershipQueries = 0;
  std::size_t equivalenceQueries = 0;
  std::size_t total() const { return membershipQueries + equivalenceQueries; }
};

// Exact learner for the fixture that asks ∃tau.M(a) for words tau in
// lexicographic order and confirms with an inseparability query.
FixtureExactResult fixtureExactLearner(MembershipOracle& mq, EquivalenceOracle& eq, std::size_t n);

// ------------------------------------------------------------- VC dimension

// True when the hypotheses realise all 2^|x| labellings of x. `budget`
// bounds the number of hypothesis evaluations (0 means unlimited); when it
// runs out before the answer is known, BudgetExceeded is thrown.
bool shatters(const std::vector<TBox>& hypotheses, const std::vector<Example>& x, std::size_t budget = 0);

// {r(a_i,a_{i+1}), s(a_i,a_i) | 1 <= i < n} ∪ {r(a_n,a_1)}; n >= 2.
ABox cyclicAboxGen(std::size_t n);
// C_i = ∃r^(n-i).∃s.⊤, false exactly at a_i in the cyclic ABox.
Concept identifyingConcept(std::size_t n, std::size_t i);
// {⊓_{i∈K} C_i ⊑ A | ∅ ≠ K ⊆ {1..n}} plus {C_i ⊑ A | 1 <= i <= n}.
std::vector<TBox> identifyingHypotheses(std::size_t n);
// The examples (A0, A(a_i)) for 1 <= i <= n.
std::vector<Example> cyclicExamples(const ABox& a0, std::size_t n);

}  // namespace elh
