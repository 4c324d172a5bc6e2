#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "elh/reasoner.hpp"
#include "elh/syntax.hpp"
#include "elh/teacher.hpp"

namespace elh {

struct LearnerOptions {
  bool membershipOnly = true;            // AQ phase finds counterexamples with membership queries
  std::size_t maxOracleCalls = 0;        // 0 means unlimited
  std::size_t maxTreeShapeRounds = 256;  // unfold/minimize rounds per counterexample
  std::optional<TBox> initialHypothesis; // IQ and CQr learners skip the AQ phase when set
  bool recordPositiveQueries = false;    // keep every positive membership query (batch construction)
};

struct ConversionRecord {
  std::size_t membershipQueries = 0;
  std::size_t bound = 0;
};

// A change to the hypothesis together with the positive example that justifies it.
struct HypothesisUpdate {
  enum class Kind { Atomic, Role, TreeShape, Definition };
  Kind kind = Kind::Atomic;
  Example example;
};
std::string toString(HypothesisUpdate::Kind k);
HypothesisUpdate::Kind updateKindFromString(const std::string& s);

struct LearnerStats {
  std::size_t iterations = 0;
  std::size_t counterexamples = 0;
  std::size_t conversions = 0;
  std::size_t membershipQueries = 0;  // oracle calls, memoized repeats excluded
  std::size_t equivalenceQueries = 0;
  std::size_t largestCounterexample = 0;
  std::size_t replacements = 0;
  std::size_t replacementGrowthViolations = 0;
  std::vector<std::vector<std::size_t>> treeShapeCounts;  // post-Minimize |ind| per TreeShape call
  std::vector<std::size_t> essentialSizes;                // |C| of every T-essential A ⊑ C produced
  std::vector<ConversionRecord> conversionRecords;
  std::vector<Example> treeShapeExamples;                 // (tree ABox, B(root)) behind each learned C ⊑ B
  std::vector<Example> counterexampleLog;                 // counterexamples in arrival order
  std::vector<Example> positiveQueries;                   // with recordPositiveQueries
  std::vector<HypothesisUpdate> updates;                  // every change to the hypothesis, in order
};

struct LearnResult {
  TBox hypothesis;
  LearnerStats stats;
};

// Oracle access with memoization, budget and statistics shared by all learners.
class LearnerContext {
 public:
  LearnerContext(Framework framework, MembershipOracle& mq, EquivalenceOracle* eq, LearnerOptions options = {});

  const Framework& framework() const { return framework_; }
  const Signature& signature() const { return framework_.signature; }
  const LearnerOptions& options() const { return options_; }
  LearnerStats& stats() { return stats_; }

  bool ask(const ABox& a, const Query& q);
  std::optional<Example> equivalence(const TBox& h);

  void recordUpdate(HypothesisUpdate::Kind kind, Example example);
  // Hypothesis reported when the budget runs out.
  void setHypothesis(const TBox& h) { current_ = h; }
  const TBox& hypothesis() const { return current_; }

 private:
  void spend();

  Framework framework_;
  MembershipOracle& mq_;
  EquivalenceOracle* eq_;
  LearnerOptions options_;
  LearnerStats stats_;
  TBox current_;
  std::unordered_map<std::string, bool> memo_;
};

// ----------------------------------------------------------- shared helpers

// Adds every assertion over the signature and ind(a) entailed by (h, a).
ABox saturateAbox(const Reasoner& h, const ABox& a, const Signature& sig);
// Concept of an ABox that is a directed tree rooted at `root`; throws StructuralError otherwise.
Concept conceptOfRootedAbox(const ABox& a, const std::string& root);

// ------------------------------------------------------------------- AQ

struct Cycle {
  std::vector<std::string> nodes;         // a0 ... a(k-1)
  std::vector<RoleAssertion> assertions;  // assertions[i] joins nodes[i] and nodes[i+1 mod k]; assertions[0] = r1(a0,a1)
};

TBox bootstrapAtomic(LearnerContext& ctx);
// Shortest undirected cycle; ties broken by lexicographic node order.
std::optional<Cycle> findCycle(const ABox& a);
// Unfolds the cycle; `origin` maps each created copy to the individual it copies.
ABox unfoldCycle(const ABox& a, const Cycle& c, std::map<std::string, std::string>* origin = nullptr);

struct MinimizeResult {
  ABox abox;
  std::optional<ConceptAssertion> target;  // the pair (B, b) minimized for
};
MinimizeResult minimize(LearnerContext& ctx, const ABox& a, const TBox& h,
                        const std::optional<ConceptAssertion>& preferred = std::nullopt,
                        const std::set<std::string>& clones = {});

struct TreeShapeResult {
  ABox abox;
  ConceptAssertion target;
  std::vector<std::size_t> individualCounts;
};
TreeShapeResult treeShape(LearnerContext& ctx, const ABox& a, const TBox& h, const ConceptAssertion& counterexample);

// One step of the AQ learner for a positive counterexample (a, B(b)).
void learnFromAtomicCounterexample(LearnerContext& ctx, TBox& h, const ABox& a, const ConceptAssertion& counterexample);

TBox learnAQ(LearnerContext& ctx);
// AQ learning driven by membership queries only; first phase of the IQ and CQr learners.
TBox learnAtomicPhase(LearnerContext& ctx);
LearnResult learnAQ(const Framework& fw, MembershipOracle& mq, EquivalenceOracle* eq, const LearnerOptions& options = {});

// ------------------------------------------------------------------- IQ

struct LearnedInclusion {
  std::string name;
  Concept rhs;
};

LearnedInclusion reduceCounterexample(LearnerContext& ctx, const ABox& a, const Concept& c, const std::string& ind,
                                      const TBox& h);

// Single essentialization operations on A ⊑ C; each returns true when it changed C.
bool conceptSaturate(LearnerContext& ctx, const std::string& name, Concept& c);
bool roleSaturate(LearnerContext& ctx, const std::string& name, Concept& c, const TBox& h);
bool siblingMerge(LearnerContext& ctx, const std::string& name, Concept& c);
// Returns the decomposed inclusion when case (a) applies; applies case (b) in place.
std::optional<LearnedInclusion> decomposeRight(LearnerContext& ctx, const std::string& name, Concept& c, const TBox& h,
                                               bool* changed);
// Applies the four operations to a fixpoint.
LearnedInclusion essentialize(LearnerContext& ctx, LearnedInclusion ci, const TBox& h);
// Essentializes A ⊑ C1 ⊓ C2; the result may have a different left-hand side.
LearnedInclusion mergeEssential(LearnerContext& ctx, const std::string& name, const Concept& c1, const Concept& c2,
                                const TBox& h);
// Adds an essential CI to h, merging with an existing definition of its name.
void addEssential(LearnerContext& ctx, TBox& h, LearnedInclusion ci);

// Processes a positive IQ counterexample (or its atomic/role special cases).
void learnFromInstanceCounterexample(LearnerContext& ctx, TBox& h, const Example& ex);
// Adds every role inclusion over the signature confirmed by membership queries.
void learnRoleInclusions(LearnerContext& ctx, TBox& h);

TBox learnIQ(LearnerContext& ctx);
LearnResult learnIQ(const Framework& fw, MembershipOracle& mq, EquivalenceOracle& eq, const LearnerOptions& options = {});

// ------------------------------------------------------------------ CQr

ConjunctiveQuery individualSaturate(LearnerContext& ctx, const ConjunctiveQuery& q);
ConjunctiveQuery mergeVariables(LearnerContext& ctx, const ConjunctiveQuery& q);
ConjunctiveQuery queryRoleSaturate(LearnerContext& ctx, const ConjunctiveQuery& q, const TBox& h);
// Positive IQ counterexample obtained from a positive rooted-CQ counterexample.
Query cqToIq(LearnerContext& ctx, const ConjunctiveQuery& q, const TBox& h);

TBox learnCQr(LearnerContext& ctx);
LearnResult learnCQr(const Framework& fw, MembershipOracle& mq, EquivalenceOracle& eq, const LearnerOptions& options = {});

// Dispatches on the framework language.
LearnResult learn(const Framework& fw, MembershipOracle& mq, EquivalenceOracle& eq, const LearnerOptions& options = {});

}  // namespace elh
