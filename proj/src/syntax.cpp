#include "elh/syntax.hpp"

#include <algorithm>
#include <deque>
#include <cctype>
#include <functional>

#include "elh/errors.hpp"

namespace elh {

namespace {

bool isNameChar(unsigned char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_';
}

const char* kTop = "⊤";
const char* kAnd = "⊓";
const char* kExists = "∃";
const char* kSub = "⊑";
const char* kWedge = "∧";

}  // namespace

bool isValidName(std::string_view name) {
  if (name.empty()) return false;
  unsigned char first = static_cast<unsigned char>(name.front());
  if (!((first >= 'a' && first <= 'z') || (first >= 'A' && first <= 'Z'))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) { return isNameChar(static_cast<unsigned char>(c)); });
}

std::size_t symbolCount(std::string_view s) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    auto ch = static_cast<unsigned char>(s[i]);
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
      ++i;
    } else if (isNameChar(ch)) {
      while (i < s.size() && isNameChar(static_cast<unsigned char>(s[i]))) ++i;
      ++count;
    } else {
      std::size_t len = 1;
      if ((ch & 0xE0) == 0xC0) len = 2;
      else if ((ch & 0xF0) == 0xE0) len = 3;
      else if ((ch & 0xF8) == 0xF0) len = 4;
      i += len;
      ++count;
    }
  }
  return count;
}

// ---------------------------------------------------------------- Concept

Concept::Concept() = default;

Concept Concept::top() { return Concept(); }

Concept Concept::atom(std::string name) {
  Concept c;
  c.kind_ = Kind::Atom;
  c.name_ = std::move(name);
  return c;
}

Concept Concept::conj(std::vector<Concept> parts) {
  Concept c;
  c.kind_ = Kind::Conj;
  c.args_ = std::move(parts);
  return c;
}

Concept Concept::exists(std::string role, Concept filler) {
  Concept c;
  c.kind_ = Kind::Exists;
  c.name_ = std::move(role);
  c.args_.push_back(std::move(filler));
  return c;
}

const Concept& Concept::filler() const {
  if (kind_ != Kind::Exists) throw StructuralError("filler() on a concept that is not an existential restriction");
  return args_.front();
}

Concept Concept::normalized() const {
  switch (kind_) {
    case Kind::Top:
    case Kind::Atom:
      return *this;
    case Kind::Exists:
      return exists(name_, args_.front().normalized());
    case Kind::Conj: {
      std::vector<Concept> flat;
      std::function<void(const Concept&)> collect = [&](const Concept& c) {
        if (c.kind_ == Kind::Conj) {
          for (const auto& p : c.args_) collect(p);
        } else if (c.kind_ != Kind::Top) {
          flat.push_back(c.normalized());
        }
      };
      collect(*this);
      std::vector<std::pair<std::string, Concept>> keyed;
      keyed.reserve(flat.size());
      for (auto& c : flat) keyed.emplace_back(c.str(), std::move(c));
      std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
                  keyed.end());
      if (keyed.empty()) return top();
      if (keyed.size() == 1) return keyed.front().second;
      std::vector<Concept> parts;
      parts.reserve(keyed.size());
      for (auto& k : keyed) parts.push_back(std::move(k.second));
      return conj(std::move(parts));
    }
  }
  return *this;
}

std::vector<Concept> Concept::conjuncts() const {
  Concept n = normalized();
  if (n.isTop()) return {};
  if (n.isConj()) return n.args_;
  return {n};
}

std::string Concept::str() const {
  switch (kind_) {
    case Kind::Top:
      return kTop;
    case Kind::Atom:
      return name_;
    case Kind::Exists: {
      const Concept& f = args_.front();
      std::string inner = f.str();
      if (f.isConj()) inner = "(" + inner + ")";
      return std::string(kExists) + name_ + "." + inner;
    }
    case Kind::Conj: {
      std::string out;
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) out += kAnd;
        std::string part = args_[i].str();
        out += args_[i].isConj() ? "(" + part + ")" : part;
      }
      return out;
    }
  }
  return {};
}

std::size_t Concept::depth() const {
  std::size_t d = 0;
  if (kind_ == Kind::Exists) return 1 + args_.front().depth();
  for (const auto& a : args_) d = std::max(d, a.depth());
  return d;
}

std::set<std::string> Concept::conceptNames() const {
  std::set<std::string> out;
  std::function<void(const Concept&)> go = [&](const Concept& c) {
    if (c.isAtom()) out.insert(c.name_);
    for (const auto& a : c.args_) go(a);
  };
  go(*this);
  return out;
}

std::set<std::string> Concept::roleNames() const {
  std::set<std::string> out;
  std::function<void(const Concept&)> go = [&](const Concept& c) {
    if (c.isExists()) out.insert(c.name_);
    for (const auto& a : c.args_) go(a);
  };
  go(*this);
  return out;
}

bool operator==(const Concept& a, const Concept& b) { return a.str() == b.str(); }

std::strong_ordering operator<=>(const Concept& a, const Concept& b) { return a.str() <=> b.str(); }

std::size_t size(const Concept& c) { return symbolCount(c.str()); }

// ------------------------------------------------------------ ConceptTree

int ConceptTree::addVertex(std::set<std::string> label) {
  labels.push_back(std::move(label));
  return static_cast<int>(labels.size()) - 1;
}

void ConceptTree::addEdge(int from, const std::string& role, int to) { edges.push_back(Edge{from, to, role}); }

std::vector<std::vector<std::pair<std::string, int>>> ConceptTree::children() const {
  std::vector<std::vector<std::pair<std::string, int>>> out(labels.size());
  for (const auto& e : edges) out.at(static_cast<std::size_t>(e.from)).emplace_back(e.role, e.to);
  return out;
}

std::vector<int> ConceptTree::parents() const {
  std::vector<int> out(labels.size(), -1);
  for (const auto& e : edges) out.at(static_cast<std::size_t>(e.to)) = e.from;
  return out;
}

std::vector<int> ConceptTree::bfsOrder() const {
  auto kids = children();
  std::vector<int> order;
  std::vector<char> seen(labels.size(), 0);
  std::deque<int> queue{root};
  seen.at(static_cast<std::size_t>(root)) = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (const auto& [role, c] : kids[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = 1;
        queue.push_back(c);
      }
    }
  }
  return order;
}

void ConceptTree::validate() const {
  const auto n = static_cast<int>(labels.size());
  if (n == 0) throw StructuralError("concept tree has no vertices");
  if (root < 0 || root >= n) throw StructuralError("concept tree root out of range");
  std::vector<int> indegree(labels.size(), 0);
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) throw StructuralError("concept tree edge out of range");
    if (!isValidName(e.role)) throw StructuralError("invalid role name '" + e.role + "' in concept tree");
    ++indegree[static_cast<std::size_t>(e.to)];
  }
  if (indegree[static_cast<std::size_t>(root)] != 0) throw StructuralError("concept tree root has a parent");
  for (int v = 0; v < n; ++v) {
    if (v != root && indegree[static_cast<std::size_t>(v)] != 1)
      throw StructuralError("concept tree vertex " + std::to_string(v) + " does not have exactly one parent");
  }
  if (static_cast<int>(bfsOrder().size()) != n) throw StructuralError("concept tree is not connected");
  for (const auto& l : labels)
    for (const auto& name : l)
      if (!isValidName(name)) throw StructuralError("invalid concept name '" + name + "' in concept tree");
}

ConceptTree ConceptTree::subtree(int v) const {
  auto kids = children();
  ConceptTree out;
  std::function<int(int)> copy = [&](int u) {
    int nu = out.addVertex(labels[static_cast<std::size_t>(u)]);
    for (const auto& [role, c] : kids[static_cast<std::size_t>(u)]) {
      int nc = copy(c);
      out.addEdge(nu, role, nc);
    }
    return nu;
  };
  out.root = copy(v);
  return out;
}

ConceptTree ConceptTree::withoutSubtree(int v) const {
  if (v == root) throw StructuralError("cannot remove the root subtree");
  auto kids = children();
  ConceptTree out;
  std::function<int(int)> copy = [&](int u) {
    int nu = out.addVertex(labels[static_cast<std::size_t>(u)]);
    for (const auto& [role, c] : kids[static_cast<std::size_t>(u)]) {
      if (c == v) continue;
      int nc = copy(c);
      out.addEdge(nu, role, nc);
    }
    return nu;
  };
  out.root = copy(root);
  return out;
}

ConceptTree ConceptTree::mergeSiblings(int a, int b) const {
  auto kids = children();
  ConceptTree out;
  std::function<int(int)> copy = [&](int u) {
    std::set<std::string> label = labels[static_cast<std::size_t>(u)];
    if (u == a) label.insert(labels[static_cast<std::size_t>(b)].begin(), labels[static_cast<std::size_t>(b)].end());
    int nu = out.addVertex(std::move(label));
    auto own = kids[static_cast<std::size_t>(u)];
    if (u == a) {
      const auto& extra = kids[static_cast<std::size_t>(b)];
      own.insert(own.end(), extra.begin(), extra.end());
    }
    for (const auto& [role, c] : own) {
      if (c == b) continue;
      int nc = copy(c);
      out.addEdge(nu, role, nc);
    }
    return nu;
  };
  out.root = copy(root);
  return out;
}

ConceptTree ConceptTree::underExistential(const std::string& role) const {
  ConceptTree out;
  out.root = out.addVertex();
  ConceptTree copy = subtree(root);
  const int offset = static_cast<int>(out.labels.size());
  for (auto& l : copy.labels) out.labels.push_back(l);
  for (const auto& e : copy.edges) out.addEdge(e.from + offset, e.role, e.to + offset);
  out.addEdge(out.root, role, copy.root + offset);
  return out;
}

ConceptTree treeOfConcept(const Concept& c) {
  ConceptTree t;
  t.root = t.addVertex();
  std::function<void(const Concept&, int)> build = [&](const Concept& d, int v) {
    switch (d.kind()) {
      case Concept::Kind::Top:
        break;
      case Concept::Kind::Atom:
        t.labels[static_cast<std::size_t>(v)].insert(d.name());
        break;
      case Concept::Kind::Conj:
        for (const auto& p : d.parts()) build(p, v);
        break;
      case Concept::Kind::Exists: {
        int child = t.addVertex();
        t.addEdge(v, d.role(), child);
        build(d.filler(), child);
        break;
      }
    }
  };
  build(c, t.root);
  return t;
}

Concept conceptOfTree(const ConceptTree& t) {
  t.validate();
  auto kids = t.children();
  std::function<Concept(int)> build = [&](int v) {
    std::vector<Concept> parts;
    for (const auto& n : t.labels[static_cast<std::size_t>(v)]) parts.push_back(Concept::atom(n));
    for (const auto& [role, c] : kids[static_cast<std::size_t>(v)]) parts.push_back(Concept::exists(role, build(c)));
    return Concept::conj(std::move(parts));
  };
  return build(t.root).normalized();
}

// ------------------------------------------------------------------ Axioms

std::string ConceptInclusion::str() const { return lhs.str() + kSub + rhs.str(); }
std::string RoleInclusion::str() const { return sub + kSub + sup; }

std::size_t size(const ConceptInclusion& ci) { return symbolCount(ci.str()); }
std::size_t size(const RoleInclusion& ri) { return symbolCount(ri.str()); }

void Signature::merge(const Signature& other) {
  concepts.insert(other.concepts.begin(), other.concepts.end());
  roles.insert(other.roles.begin(), other.roles.end());
}

bool Signature::includes(const Signature& other) const {
  return std::includes(concepts.begin(), concepts.end(), other.concepts.begin(), other.concepts.end()) &&
         std::includes(roles.begin(), roles.end(), other.roles.begin(), other.roles.end());
}

void TBox::addConceptInclusion(ConceptInclusion ci, bool mergeDefinitions) {
  ci.lhs = ci.lhs.normalized();
  ci.rhs = ci.rhs.normalized();
  if (ci.lhs.isAtom()) {
    for (auto& existing : cis_) {
      if (existing.lhs.isAtom() && existing.lhs.name() == ci.lhs.name()) {
        if (existing.rhs == ci.rhs) return;
        if (!mergeDefinitions)
          throw TerminologyError("concept name " + ci.lhs.name() + " already has a CI with atomic left-hand side");
        existing.rhs = Concept::conj({existing.rhs, ci.rhs}).normalized();
        return;
      }
    }
  }
  for (const auto& existing : cis_)
    if (existing == ci) return;
  cis_.push_back(std::move(ci));
}

void TBox::addRoleInclusion(RoleInclusion ri) {
  if (std::find(ris_.begin(), ris_.end(), ri) == ris_.end()) ris_.push_back(std::move(ri));
}

std::optional<Concept> TBox::definition(const std::string& name) const {
  for (const auto& ci : cis_)
    if (ci.lhs.isAtom() && ci.lhs.name() == name) return ci.rhs;
  return std::nullopt;
}

void TBox::setDefinition(const std::string& name, const Concept& rhs) {
  for (auto& ci : cis_) {
    if (ci.lhs.isAtom() && ci.lhs.name() == name) {
      ci.rhs = rhs.normalized();
      return;
    }
  }
  cis_.push_back(ConceptInclusion{Concept::atom(name), rhs.normalized()});
}

void TBox::removeConceptInclusion(std::size_t index) { cis_.erase(cis_.begin() + static_cast<std::ptrdiff_t>(index)); }

void TBox::replaceConceptInclusion(std::size_t index, ConceptInclusion ci) {
  ci.lhs = ci.lhs.normalized();
  ci.rhs = ci.rhs.normalized();
  cis_.at(index) = std::move(ci);
}

bool TBox::isTerminology() const {
  try {
    checkTerminology();
  } catch (const TerminologyError&) {
    return false;
  }
  return true;
}

void TBox::checkTerminology() const {
  std::set<std::string> defined;
  for (const auto& ci : cis_) {
    if (!ci.lhs.isAtom() && !ci.rhs.isAtom())
      throw TerminologyError("CI " + ci.str() + " has no atomic side");
    if (ci.lhs.isAtom() && !defined.insert(ci.lhs.name()).second)
      throw TerminologyError("concept name " + ci.lhs.name() + " has more than one CI with atomic left-hand side");
  }
}

Signature TBox::signature() const {
  Signature s;
  for (const auto& ci : cis_) {
    for (const auto* c : {&ci.lhs, &ci.rhs}) {
      auto cn = c->conceptNames();
      auto rn = c->roleNames();
      s.concepts.insert(cn.begin(), cn.end());
      s.roles.insert(rn.begin(), rn.end());
    }
  }
  for (const auto& ri : ris_) {
    s.roles.insert(ri.sub);
    s.roles.insert(ri.sup);
  }
  return s;
}

std::size_t size(const TBox& t) {
  std::size_t total = 0;
  for (const auto& ci : t.conceptInclusions()) total += size(ci);
  for (const auto& ri : t.roleInclusions()) total += size(ri);
  return total;
}

// -------------------------------------------------------------------- ABox

void ABox::add(ConceptAssertion a) { concepts_.insert(std::move(a)); }
void ABox::add(RoleAssertion a) { roles_.insert(std::move(a)); }
void ABox::declare(const std::string& ind) { declared_.insert(ind); }

bool ABox::remove(const ConceptAssertion& a) { return concepts_.erase(a) != 0; }
bool ABox::remove(const RoleAssertion& a) { return roles_.erase(a) != 0; }

ABox ABox::withoutIndividual(const std::string& ind) const {
  ABox out;
  for (const auto& c : concepts_)
    if (c.individual != ind) out.add(c);
  for (const auto& r : roles_)
    if (r.from != ind && r.to != ind) out.add(r);
  for (const auto& d : declared_)
    if (d != ind) out.declare(d);
  return out;
}

std::set<std::string> ABox::individuals() const {
  std::set<std::string> out = declared_;
  for (const auto& c : concepts_) out.insert(c.individual);
  for (const auto& r : roles_) {
    out.insert(r.from);
    out.insert(r.to);
  }
  return out;
}

Signature ABox::signature() const {
  Signature s;
  for (const auto& c : concepts_) s.concepts.insert(c.name);
  for (const auto& r : roles_) s.roles.insert(r.role);
  return s;
}

void ABox::merge(const ABox& other) {
  concepts_.insert(other.concepts_.begin(), other.concepts_.end());
  roles_.insert(other.roles_.begin(), other.roles_.end());
  declared_.insert(other.declared_.begin(), other.declared_.end());
}

std::size_t size(const ABox& a) {
  std::size_t total = 0;
  std::set<std::string> mentioned;
  for (const auto& c : a.conceptAssertions()) {
    total += symbolCount(c.name + "(" + c.individual + ")");
    mentioned.insert(c.individual);
  }
  for (const auto& r : a.roleAssertions()) {
    total += symbolCount(r.role + "(" + r.from + "," + r.to + ")");
    mentioned.insert(r.from);
    mentioned.insert(r.to);
  }
  for (const auto& d : a.declared())
    if (!mentioned.count(d)) total += 1;
  return total;
}

ConceptAbox aboxOfConcept(const Concept& c, const std::string& prefix) {
  ConceptTree t = treeOfConcept(c.normalized());
  auto order = t.bfsOrder();
  std::vector<std::string> names(t.vertexCount());
  for (std::size_t i = 0; i < order.size(); ++i) names[static_cast<std::size_t>(order[i])] = prefix + std::to_string(i);
  ConceptAbox out;
  out.root = names[static_cast<std::size_t>(t.root)];
  out.abox.declare(out.root);
  for (int v : order) {
    for (const auto& n : t.labels[static_cast<std::size_t>(v)]) out.abox.addConcept(n, names[static_cast<std::size_t>(v)]);
  }
  for (int v : order) {
    for (const auto& e : t.edges)
      if (e.from == v)
        out.abox.addRole(e.role, names[static_cast<std::size_t>(e.from)], names[static_cast<std::size_t>(e.to)]);
  }
  return out;
}

// ------------------------------------------------------------------ Queries

std::string QueryAtom::str() const {
  if (isRole) return predicate + "(" + first + "," + second + ")";
  return predicate + "(" + first + ")";
}

bool ConjunctiveQuery::isVariable(const std::string& term) const {
  return std::find(variables.begin(), variables.end(), term) != variables.end();
}

std::vector<std::string> ConjunctiveQuery::terms() const {
  std::vector<std::string> out = individuals;
  out.insert(out.end(), variables.begin(), variables.end());
  return out;
}

bool ConjunctiveQuery::isRooted() const {
  std::set<std::string> reached(individuals.begin(), individuals.end());
  bool grown = true;
  while (grown) {
    grown = false;
    for (const auto& a : atoms) {
      if (a.isRole && reached.count(a.first) && !reached.count(a.second)) {
        reached.insert(a.second);
        grown = true;
      }
    }
  }
  return std::all_of(variables.begin(), variables.end(), [&](const std::string& v) { return reached.count(v) != 0; });
}

std::string ConjunctiveQuery::str() const {
  std::string body;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) body += kWedge;
    body += atoms[i].str();
  }
  if (atoms.empty()) body = kTop;
  if (variables.empty()) return body;
  std::string head = kExists;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (i) head += ",";
    head += variables[i];
  }
  return head + ".(" + body + ")";
}

std::string toString(QueryLanguage l) {
  switch (l) {
    case QueryLanguage::AQ:
      return "AQ";
    case QueryLanguage::IQ:
      return "IQ";
    case QueryLanguage::CQr:
      return "CQr";
  }
  return "?";
}

QueryLanguage queryLanguageFromString(const std::string& s) {
  std::string lower;
  for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "aq") return QueryLanguage::AQ;
  if (lower == "iq") return QueryLanguage::IQ;
  if (lower == "cqr" || lower == "cq_r" || lower == "cq") return QueryLanguage::CQr;
  throw ConfigurationError("unknown query language '" + s + "'");
}

Query Query::atomic(const std::string& name, const std::string& ind) {
  Query q;
  q.kind_ = Kind::AQ;
  q.shape_ = Shape::ConceptAssertion;
  q.concept_ = Concept::atom(name);
  q.ind_ = ind;
  return q;
}

Query Query::atomicRole(const std::string& role, const std::string& from, const std::string& to) {
  Query q;
  q.kind_ = Kind::AQ;
  q.shape_ = Shape::RoleAssertion;
  q.role_ = role;
  q.ind_ = from;
  q.ind2_ = to;
  return q;
}

Query Query::instance(const Concept& c, const std::string& ind) {
  Query q;
  q.kind_ = Kind::IQ;
  q.shape_ = Shape::ConceptAssertion;
  q.concept_ = c.normalized();
  q.ind_ = ind;
  return q;
}

Query Query::instanceRole(const std::string& role, const std::string& from, const std::string& to) {
  Query q = atomicRole(role, from, to);
  q.kind_ = Kind::IQ;
  return q;
}

Query Query::conjunctive(ConjunctiveQuery cq) {
  Query q;
  q.kind_ = Kind::CQ;
  q.shape_ = Shape::Conjunctive;
  q.cq_ = std::move(cq);
  return q;
}

ConjunctiveQuery Query::asConjunctive() const {
  if (shape_ == Shape::Conjunctive) return cq_;
  ConjunctiveQuery out;
  if (shape_ == Shape::RoleAssertion) {
    out.individuals = {ind_};
    if (ind2_ != ind_) out.individuals.push_back(ind2_);
    out.atoms.push_back(QueryAtom{true, role_, ind_, ind2_});
    return out;
  }
  out.individuals = {ind_};
  ConceptTree t = treeOfConcept(concept_);
  auto order = t.bfsOrder();
  std::vector<std::string> names(t.vertexCount());
  std::set<std::string> taken{ind_};
  for (int v : order) {
    if (v == t.root) {
      names[static_cast<std::size_t>(v)] = ind_;
      continue;
    }
    std::string name = freshName("y", taken);
    taken.insert(name);
    names[static_cast<std::size_t>(v)] = name;
    out.variables.push_back(name);
  }
  for (int v : order) {
    for (const auto& n : t.labels[static_cast<std::size_t>(v)])
      out.atoms.push_back(QueryAtom{false, n, names[static_cast<std::size_t>(v)], {}});
    for (const auto& e : t.edges)
      if (e.from == v)
        out.atoms.push_back(
            QueryAtom{true, e.role, names[static_cast<std::size_t>(e.from)], names[static_cast<std::size_t>(e.to)]});
  }
  return out;
}

Signature Query::signature() const {
  Signature s;
  switch (shape_) {
    case Shape::ConceptAssertion: {
      s.concepts = concept_.conceptNames();
      s.roles = concept_.roleNames();
      break;
    }
    case Shape::RoleAssertion:
      s.roles.insert(role_);
      break;
    case Shape::Conjunctive:
      for (const auto& a : cq_.atoms) (a.isRole ? s.roles : s.concepts).insert(a.predicate);
      break;
  }
  return s;
}

std::set<std::string> Query::individuals() const {
  switch (shape_) {
    case Shape::ConceptAssertion:
      return {ind_};
    case Shape::RoleAssertion:
      return {ind_, ind2_};
    case Shape::Conjunctive:
      return {cq_.individuals.begin(), cq_.individuals.end()};
  }
  return {};
}

std::string Query::str() const {
  switch (shape_) {
    case Shape::ConceptAssertion: {
      std::string c = concept_.str();
      if (!concept_.isAtom()) c = "(" + c + ")";
      return c + "(" + ind_ + ")";
    }
    case Shape::RoleAssertion:
      return role_ + "(" + ind_ + "," + ind2_ + ")";
    case Shape::Conjunctive:
      return cq_.str();
  }
  return {};
}

std::size_t size(const Query& q) { return symbolCount(q.str()); }

std::size_t size(const Example& e) { return size(e.abox) + size(e.query); }

std::string freshName(const std::string& stem, const std::set<std::string>& taken) {
  for (std::size_t k = 1;; ++k) {
    std::string candidate = stem + std::to_string(k);
    if (!taken.count(candidate)) return candidate;
  }
}

}  // namespace elh
