#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace elh {

// Names are tokens of letters, digits and underscores that start with a letter.
bool isValidName(std::string_view name);

// Number of symbols in a canonical serialization: a run of name characters
// counts once, every other code point counts once, whitespace is ignored.
std::size_t symbolCount(std::string_view canonical);

class Concept {
 public:
  enum class Kind { Top, Atom, Conj, Exists };

  Concept();  // top
  static Concept top();
  static Concept atom(std::string name);
  static Concept conj(std::vector<Concept> parts);
  static Concept exists(std::string role, Concept filler);

  Kind kind() const { return kind_; }
  bool isTop() const { return kind_ == Kind::Top; }
  bool isAtom() const { return kind_ == Kind::Atom; }
  bool isConj() const { return kind_ == Kind::Conj; }
  bool isExists() const { return kind_ == Kind::Exists; }

  // Concept name for atoms, role name for existential restrictions.
  const std::string& name() const { return name_; }
  const std::string& role() const { return name_; }
  const std::vector<Concept>& parts() const { return args_; }
  const Concept& filler() const;

  // Flattened, deduplicated conjunctions sorted by serialization; a
  // conjunction of zero parts becomes top, of one part becomes that part.
  Concept normalized() const;

  // Top-level conjuncts of the normal form (top yields none).
  std::vector<Concept> conjuncts() const;

  // Canonical serialization using the symbols top, and, exists.
  std::string str() const;

  std::size_t depth() const;
  std::set<std::string> conceptNames() const;
  std::set<std::string> roleNames() const;

  friend bool operator==(const Concept& a, const Concept& b);
  friend std::strong_ordering operator<=>(const Concept& a, const Concept& b);

 private:
  Kind kind_ = Kind::Top;
  std::string name_;
  std::vector<Concept> args_;
};

std::size_t size(const Concept& c);

// Flat tree view of an EL concept. Vertex labels are sets of concept names,
// edges carry one role each.
struct ConceptTree {
  struct Edge {
    int from = 0;
    int to = 0;
    std::string role;
  };

  std::vector<std::set<std::string>> labels;
  std::vector<Edge> edges;
  int root = 0;

  int addVertex(std::set<std::string> label = {});
  void addEdge(int from, const std::string& role, int to);
  std::size_t vertexCount() const { return labels.size(); }

  // Children of every vertex in edge order. Requires a well-formed tree.
  std::vector<std::vector<std::pair<std::string, int>>> children() const;
  std::vector<int> parents() const;
  // Vertices in breadth-first order from the root.
  std::vector<int> bfsOrder() const;

  // Copy of the subtree rooted at v, with v as new root.
  ConceptTree subtree(int v) const;
  // Copy without the subtree rooted at v (v must not be the root).
  ConceptTree withoutSubtree(int v) const;
  // Merges sibling b into sibling a: labels are united, b's children move to a.
  ConceptTree mergeSiblings(int a, int b) const;
  // Same tree with a fresh root whose single role-successor is the old root.
  ConceptTree underExistential(const std::string& role) const;

  void validate() const;  // throws StructuralError
};

ConceptTree treeOfConcept(const Concept& c);
Concept conceptOfTree(const ConceptTree& t);

struct ConceptInclusion {
  Concept lhs;
  Concept rhs;

  std::string str() const;
  friend bool operator==(const ConceptInclusion&, const ConceptInclusion&) = default;
};

struct RoleInclusion {
  std::string sub;
  std::string sup;

  std::string str() const;
  friend auto operator<=>(const RoleInclusion&, const RoleInclusion&) = default;
};

std::size_t size(const ConceptInclusion& ci);
std::size_t size(const RoleInclusion& ri);

struct Signature {
  std::set<std::string> concepts;
  std::set<std::string> roles;

  void merge(const Signature& other);
  bool containsConcept(const std::string& n) const { return concepts.count(n) != 0; }
  bool containsRole(const std::string& n) const { return roles.count(n) != 0; }
  bool includes(const Signature& other) const;
  std::size_t size() const { return concepts.size() + roles.size(); }
  friend bool operator==(const Signature&, const Signature&) = default;
};

class TBox {
 public:
  // Adds a CI in normal form. With mergeDefinitions set, a second CI A ⊑ D
  // for a name that already has A ⊑ C turns the pair into A ⊑ C ⊓ D.
  void addConceptInclusion(ConceptInclusion ci, bool mergeDefinitions = true);
  void addRoleInclusion(RoleInclusion ri);

  const std::vector<ConceptInclusion>& conceptInclusions() const { return cis_; }
  const std::vector<RoleInclusion>& roleInclusions() const { return ris_; }

  // Right-hand side of the unique CI A ⊑ C with atomic left side A.
  std::optional<Concept> definition(const std::string& name) const;
  void setDefinition(const std::string& name, const Concept& rhs);
  void removeConceptInclusion(std::size_t index);
  void replaceConceptInclusion(std::size_t index, ConceptInclusion ci);

  // Every CI has an atomic side and each name has at most one CI A ⊑ C.
  bool isTerminology() const;
  void checkTerminology() const;  // throws TerminologyError

  Signature signature() const;
  bool empty() const { return cis_.empty() && ris_.empty(); }

 private:
  std::vector<ConceptInclusion> cis_;
  std::vector<RoleInclusion> ris_;
};

std::size_t size(const TBox& t);

struct ConceptAssertion {
  std::string name;
  std::string individual;
  friend auto operator<=>(const ConceptAssertion&, const ConceptAssertion&) = default;
};

struct RoleAssertion {
  std::string role;
  std::string from;
  std::string to;
  friend auto operator<=>(const RoleAssertion&, const RoleAssertion&) = default;
};

class ABox {
 public:
  void add(ConceptAssertion a);
  void add(RoleAssertion a);
  void addConcept(const std::string& name, const std::string& ind) { add(ConceptAssertion{name, ind}); }
  void addRole(const std::string& role, const std::string& from, const std::string& to) {
    add(RoleAssertion{role, from, to});
  }
  // Individuals may be declared without any assertion.
  void declare(const std::string& ind);

  bool remove(const ConceptAssertion& a);
  bool remove(const RoleAssertion& a);
  // Removes the individual and every assertion mentioning it.
  ABox withoutIndividual(const std::string& ind) const;

  bool contains(const ConceptAssertion& a) const { return concepts_.count(a) != 0; }
  bool contains(const RoleAssertion& a) const { return roles_.count(a) != 0; }

  const std::set<ConceptAssertion>& conceptAssertions() const { return concepts_; }
  const std::set<RoleAssertion>& roleAssertions() const { return roles_; }
  const std::set<std::string>& declared() const { return declared_; }

  std::set<std::string> individuals() const;
  Signature signature() const;
  std::size_t assertionCount() const { return concepts_.size() + roles_.size(); }
  bool empty() const { return concepts_.empty() && roles_.empty() && declared_.empty(); }

  void merge(const ABox& other);

  friend bool operator==(const ABox&, const ABox&) = default;

 private:
  std::set<ConceptAssertion> concepts_;
  std::set<RoleAssertion> roles_;
  std::set<std::string> declared_;
};

std::size_t size(const ABox& a);

// ABox encoding of a concept: one individual per tree vertex, named x0, x1, ...
// in breadth-first order; the root x0 is always declared.
struct ConceptAbox {
  ABox abox;
  std::string root;
};
ConceptAbox aboxOfConcept(const Concept& c, const std::string& prefix = "x");

struct QueryAtom {
  bool isRole = false;
  std::string predicate;
  std::string first;
  std::string second;  // only for role atoms

  std::string str() const;
  friend auto operator<=>(const QueryAtom&, const QueryAtom&) = default;
};

struct ConjunctiveQuery {
  std::vector<std::string> individuals;  // individual terms
  std::vector<std::string> variables;    // existentially quantified
  std::vector<QueryAtom> atoms;

  bool isVariable(const std::string& term) const;
  std::vector<std::string> terms() const;
  // Every variable is reachable from an individual term along role atoms.
  bool isRooted() const;
  std::string str() const;
};

enum class QueryLanguage { AQ, IQ, CQr };

std::string toString(QueryLanguage l);
QueryLanguage queryLanguageFromString(const std::string& s);

class Query {
 public:
  enum class Kind { AQ, IQ, CQ };
  enum class Shape { ConceptAssertion, RoleAssertion, Conjunctive };

  static Query atomic(const std::string& name, const std::string& ind);
  static Query atomicRole(const std::string& role, const std::string& from, const std::string& to);
  static Query instance(const Concept& c, const std::string& ind);
  static Query instanceRole(const std::string& role, const std::string& from, const std::string& to);
  static Query conjunctive(ConjunctiveQuery q);

  Kind kind() const { return kind_; }
  Shape shape() const { return shape_; }
  bool isConceptQuery() const { return shape_ == Shape::ConceptAssertion; }
  bool isRoleQuery() const { return shape_ == Shape::RoleAssertion; }
  bool isConjunctive() const { return shape_ == Shape::Conjunctive; }

  const Concept& queryConcept() const { return concept_; }
  const std::string& individual() const { return ind_; }
  const std::string& role() const { return role_; }
  const std::string& second() const { return ind2_; }
  const ConjunctiveQuery& cq() const { return cq_; }

  // The same query as a conjunctive query (concepts are unfolded into atoms).
  ConjunctiveQuery asConjunctive() const;
  Signature signature() const;
  std::set<std::string> individuals() const;
  std::string str() const;

  friend bool operator==(const Query& a, const Query& b) { return a.str() == b.str(); }

 private:
  Kind kind_ = Kind::AQ;
  Shape shape_ = Shape::ConceptAssertion;
  Concept concept_;
  std::string ind_;
  std::string role_;
  std::string ind2_;
  ConjunctiveQuery cq_;
};

std::size_t size(const Query& q);

struct Example {
  ABox abox;
  Query query;
};

struct LabeledExample {
  ABox abox;
  Query query;
  bool label = true;
};

std::size_t size(const Example& e);

// Fresh individual name with the given stem that does not occur in `taken`.
std::string freshName(const std::string& stem, const std::set<std::string>& taken);

}  // namespace elh
