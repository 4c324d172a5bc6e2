#include <deque>

#include "elh/errors.hpp"
#include "elh/learner.hpp"
#include "elh/text_format.hpp"

namespace elh {

LearnerContext::LearnerContext(Framework framework, MembershipOracle& mq, EquivalenceOracle* eq,
                               LearnerOptions options)
    : framework_(std::move(framework)), mq_(mq), eq_(eq), options_(std::move(options)) {}

void LearnerContext::spend() {
  if (options_.maxOracleCalls == 0) return;
  if (stats_.membershipQueries + stats_.equivalenceQueries >= options_.maxOracleCalls)
    throw BudgetExceeded("oracle budget of " + std::to_string(options_.maxOracleCalls) + " calls exhausted",
                         formatTBox(current_));
}

bool LearnerContext::ask(const ABox& a, const Query& q) {
  std::string key = formatABox(a) + "\n?" + q.str();
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  spend();
  ++stats_.membershipQueries;
  bool answer = mq_.membershipQuery(a, q);
  if (answer && options_.recordPositiveQueries) stats_.positiveQueries.push_back(Example{a, q});
  memo_.emplace(std::move(key), answer);
  return answer;
}

void LearnerContext::recordUpdate(HypothesisUpdate::Kind kind, Example example) {
  stats_.updates.push_back(HypothesisUpdate{kind, std::move(example)});
}

std::string toString(HypothesisUpdate::Kind k) {
  switch (k) {
    case HypothesisUpdate::Kind::Atomic:
      return "atomic";
    case HypothesisUpdate::Kind::Role:
      return "role";
    case HypothesisUpdate::Kind::TreeShape:
      return "tree";
    case HypothesisUpdate::Kind::Definition:
      return "definition";
  }
  return "atomic";
}

HypothesisUpdate::Kind updateKindFromString(const std::string& s) {
  for (auto k : {HypothesisUpdate::Kind::Atomic, HypothesisUpdate::Kind::Role, HypothesisUpdate::Kind::TreeShape,
                 HypothesisUpdate::Kind::Definition})
    if (toString(k) == s) return k;
  throw ConfigurationError("unknown update kind: " + s);
}

std::optional<Example> LearnerContext::equivalence(const TBox& h) {
  if (eq_ == nullptr) throw ConfigurationError("learner has no equivalence oracle");
  current_ = h;
  spend();
  ++stats_.equivalenceQueries;
  auto ce = eq_->inseparabilityQuery(h);
  if (ce) {
    ++stats_.counterexamples;
    stats_.largestCounterexample = std::max(stats_.largestCounterexample, size(*ce));
    stats_.counterexampleLog.push_back(*ce);
  }
  return ce;
}

ABox saturateAbox(const Reasoner& h, const ABox& a, const Signature& sig) {
  ABox out = a;
  RegularModel m = h.model(a);
  const Interpretation& I = m.interpretation;
  for (const auto& ind : a.individuals()) {
    int e = m.individual(ind);
    for (const auto& name : I.labelNames(e))
      if (sig.containsConcept(name)) out.addConcept(name, ind);
    for (const auto& edge : I.successors(e)) {
      if (!m.isNamed(edge.target)) continue;
      for (int r : edge.roles.elements()) {
        const std::string& role = I.symbols().roleName(r);
        if (sig.containsRole(role)) out.addRole(role, ind, I.elementName(edge.target));
      }
    }
  }
  return out;
}

Concept conceptOfRootedAbox(const ABox& a, const std::string& root) {
  std::map<std::string, std::vector<RoleAssertion>> out;
  for (const auto& ra : a.roleAssertions()) out[ra.from].push_back(ra);
  std::map<std::string, std::set<std::string>> labels;
  for (const auto& ca : a.conceptAssertions()) labels[ca.individual].insert(ca.name);

  ConceptTree t;
  std::map<std::string, int> vertex;
  vertex[root] = t.addVertex(labels[root]);
  std::deque<std::string> queue{root};
  while (!queue.empty()) {
    std::string u = queue.front();
    queue.pop_front();
    for (const auto& ra : out[u]) {
      if (vertex.count(ra.to) != 0) throw StructuralError("ABox is not a tree rooted at " + root);
      vertex[ra.to] = t.addVertex(labels[ra.to]);
      t.addEdge(vertex[u], ra.role, vertex[ra.to]);
      queue.push_back(ra.to);
    }
  }
  for (const auto& ind : a.individuals())
    if (vertex.count(ind) == 0) throw StructuralError("individual " + ind + " is not reachable from " + root);
  return conceptOfTree(t).normalized();
}

LearnResult learn(const Framework& fw, MembershipOracle& mq, EquivalenceOracle& eq, const LearnerOptions& options) {
  switch (fw.language) {
    case QueryLanguage::AQ:
      return learnAQ(fw, mq, &eq, options);
    case QueryLanguage::IQ:
      return learnIQ(fw, mq, eq, options);
    case QueryLanguage::CQr:
      return learnCQr(fw, mq, eq, options);
  }
  throw ConfigurationError("unknown query language");
}

}  // namespace elh
