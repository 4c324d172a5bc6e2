#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "elh/syntax.hpp"

namespace elh {

// Growable bit set over interned symbol ids.
class NameSet {
 public:
  void insert(int id);
  bool contains(int id) const;
  bool insertAll(const NameSet& other);  // returns true when something was added
  bool subsetOf(const NameSet& other) const;
  bool empty() const;
  std::size_t count() const;
  std::vector<int> elements() const;
  friend bool operator==(const NameSet& a, const NameSet& b);

 private:
  std::vector<std::uint64_t> words_;
};

class SymbolTable {
 public:
  int conceptId(const std::string& name);
  int role(const std::string& name);
  int findConcept(const std::string& name) const;
  int findRole(const std::string& name) const;
  const std::string& conceptName(int id) const { return concepts_.at(static_cast<std::size_t>(id)); }
  const std::string& roleName(int id) const { return roles_.at(static_cast<std::size_t>(id)); }
  std::size_t conceptCount() const { return concepts_.size(); }
  std::size_t roleCount() const { return roles_.size(); }

 private:
  std::unordered_map<std::string, int> conceptIds_;
  std::unordered_map<std::string, int> roleIds_;
  std::vector<std::string> concepts_;
  std::vector<std::string> roles_;
};

struct Edge {
  int target = 0;
  NameSet roles;
};

// Finite interpretation with labelled elements and role-set edges.
class Interpretation {
 public:
  explicit Interpretation(std::shared_ptr<SymbolTable> symbols = nullptr);

  int addElement(const std::string& name);
  int find(const std::string& name) const;
  std::size_t size() const { return names_.size(); }
  const std::string& elementName(int e) const { return names_.at(static_cast<std::size_t>(e)); }

  const NameSet& label(int e) const { return labels_.at(static_cast<std::size_t>(e)); }
  bool addLabel(int e, int conceptId);
  void addLabel(int e, const std::string& name);
  bool addLabels(int e, const NameSet& names);
  bool hasLabel(int e, const std::string& name) const;
  std::set<std::string> labelNames(int e) const;

  const std::vector<Edge>& successors(int e) const { return succ_.at(static_cast<std::size_t>(e)); }
  bool addEdge(int from, int to, const NameSet& roles);
  void addEdge(int from, const std::string& role, int to);
  const NameSet* edgeRoles(int from, int to) const;
  bool hasEdge(int from, const std::string& role, int to) const;

  std::vector<int> reachable(const std::vector<int>& roots) const;

  SymbolTable& symbols() const { return *symbols_; }
  const std::shared_ptr<SymbolTable>& symbolTable() const { return symbols_; }

  std::string str() const;

 private:
  std::shared_ptr<SymbolTable> symbols_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<NameSet> labels_;
  std::vector<std::vector<Edge>> succ_;
};

// Finite presentation of the canonical model: the individuals of the ABox
// come first, followed by one anonymous element per existential restriction
// occurring on a right-hand side of the TBox.
struct RegularModel {
  Interpretation interpretation;
  std::size_t namedCount = 0;

  int individual(const std::string& ind) const;
  bool isNamed(int e) const { return e >= 0 && static_cast<std::size_t>(e) < namedCount; }
  // Elements reachable from the individuals.
  std::vector<int> reachableElements() const;
};

// Canonical interpretation of an ABox without any TBox.
Interpretation canonicalAboxModel(const ABox& a, std::shared_ptr<SymbolTable> symbols = nullptr);

class Reasoner {
 public:
  explicit Reasoner(const TBox& t, std::shared_ptr<SymbolTable> symbols = nullptr);

  const TBox& tbox() const;
  const std::shared_ptr<SymbolTable>& symbols() const;

  RegularModel model(const ABox& a) const;
  bool entails(const ABox& a, const Query& q) const;
  bool entails(const RegularModel& m, const Query& q) const;
  bool subsumes(const Concept& c, const Concept& d) const;  // T entails C ⊑ D
  bool roleSubsumes(const std::string& r, const std::string& s) const;
  std::size_t anonymousCount() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

RegularModel buildRegularModel(const TBox& t, const ABox& a);
// Named part of the model plus every anonymous path of length <= depth.
Interpretation unravel(const RegularModel& m, std::size_t depth);

bool entailsCI(const TBox& t, const ConceptInclusion& ci);
bool entailsRI(const TBox& t, const RoleInclusion& ri);
bool answersQuery(const TBox& t, const ABox& a, const Query& q);

// Evaluates an EL concept at an element.
bool holdsAt(const Interpretation& I, const Concept& c, int element);

// Match of a rooted conjunctive query in the canonical model, as a map from
// query terms to element descriptions; nullopt when there is none.
std::optional<std::map<std::string, std::string>> matchQuery(const RegularModel& m, const ConjunctiveQuery& q);

// Backtracking search for an ABox homomorphism extending `fixed`.
std::optional<std::map<std::string, std::string>> aboxHomomorphism(const ABox& from, const ABox& to,
                                                                   const std::map<std::string, std::string>& fixed = {});

enum class EdgeMatch { PerRole, RoleSet };

// Greatest simulation of I by J computed by synchronous refinement rounds.
class SimulationRelation {
 public:
  SimulationRelation(const Interpretation& I, const Interpretation& J, EdgeMatch mode);

  bool contains(int d, int e) const { return round_[index(d, e)] < 0; }
  // Refinement round in which the pair was removed; -1 while it is contained.
  int removalRound(int d, int e) const { return round_[index(d, e)]; }
  std::vector<std::pair<int, int>> pairs() const;

  const Interpretation& left() const { return *I_; }
  const Interpretation& right() const { return *J_; }
  EdgeMatch mode() const { return mode_; }

 private:
  friend class WitnessBuilder;
  std::size_t index(int d, int e) const { return static_cast<std::size_t>(d) * J_->size() + static_cast<std::size_t>(e); }

  const Interpretation* I_;
  const Interpretation* J_;
  EdgeMatch mode_;
  std::vector<int> round_;
};

SimulationRelation simulation(const Interpretation& I, const Interpretation& J, EdgeMatch mode = EdgeMatch::PerRole);
bool bisimilar(const Interpretation& I, int d, const Interpretation& J, int e);

// Tree-shaped witness of a failed simulation; edges carry role sets so that
// the same structure serves as an EL concept or as a rooted query.
struct WitnessTree {
  struct Node {
    NameSet labels;
    std::vector<std::pair<NameSet, int>> children;
  };
  std::vector<Node> nodes;  // node 0 is the root

  std::size_t depth() const;
  bool holdsAt(const Interpretation& J, int element) const;
  Concept toConcept(const SymbolTable& symbols) const;
  ConjunctiveQuery toQuery(const SymbolTable& symbols, const std::string& root) const;
  // Rooted query in which every tree vertex at depth k is copied k+1 times and
  // copy i of a parent points to copies i and i+1 of the child.
  ConjunctiveQuery toZigzagQuery(const SymbolTable& symbols, const std::string& root) const;
};

// Concept (or role-set tree) true at d in I and false at e in J. Requires a
// pair that is not in the simulation.
WitnessTree distinguishingWitness(const SimulationRelation& sim, int d, int e);
// Greedily drops labels and subtrees while the witness stays false at e in J.
// With an rng the removal order is shuffled.
WitnessTree shrinkWitness(const WitnessTree& w, const Interpretation& J, int e, std::mt19937_64* rng = nullptr);

enum class WitnessStyle { Minimal, Randomized, Unshrunk, Zigzag };

struct SeparationOptions {
  WitnessStyle style = WitnessStyle::Minimal;
  std::uint64_t seed = 0;
};

struct InseparabilityResult {
  bool inseparable = true;
  std::optional<Query> counterexample;
  bool positive = true;  // counterexample entailed by the first TBox only
};

struct SeparationCandidate {
  std::string individual;
  bool positive = true;
  std::size_t depth = 0;
  bool isAssertion = false;  // atomic difference (concept name or role edge)
  Query assertion;           // set when isAssertion
  int leftElement = -1;
  int rightElement = -1;
};

// Decides whether (t, a) and (h, a) entail the same queries of the given
// language and enumerates the separating positions.
class SeparationAnalysis {
 public:
  SeparationAnalysis(const TBox& t, const TBox& h, const ABox& a, QueryLanguage lang);
  SeparationAnalysis(const SeparationAnalysis&) = delete;
  SeparationAnalysis& operator=(const SeparationAnalysis&) = delete;

  bool inseparable() const { return candidates_.empty(); }
  const std::vector<SeparationCandidate>& candidates() const { return candidates_; }
  Query render(const SeparationCandidate& c, WitnessStyle style, std::mt19937_64* rng = nullptr) const;
  InseparabilityResult result(const SeparationOptions& options = {}) const;

 private:
  QueryLanguage lang_;
  std::shared_ptr<SymbolTable> symbols_;
  RegularModel left_;
  RegularModel right_;
  std::unique_ptr<SimulationRelation> forward_;
  std::unique_ptr<SimulationRelation> backward_;
  std::vector<SeparationCandidate> candidates_;
};

InseparabilityResult inseparable(const TBox& t, const TBox& h, const ABox& a, QueryLanguage lang,
                                 const SeparationOptions& options = {});

}  // namespace elh
