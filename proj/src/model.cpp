#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <sstream>

#include "elh/errors.hpp"
#include "elh/reasoner.hpp"

namespace elh {

// ---------------------------------------------------------------- NameSet

void NameSet::insert(int id) {
  auto w = static_cast<std::size_t>(id) / 64;
  if (words_.size() <= w) words_.resize(w + 1, 0);
  words_[w] |= std::uint64_t{1} << (static_cast<std::size_t>(id) % 64);
}

bool NameSet::contains(int id) const {
  if (id < 0) return false;
  auto w = static_cast<std::size_t>(id) / 64;
  return w < words_.size() && ((words_[w] >> (static_cast<std::size_t>(id) % 64)) & 1U);
}

bool NameSet::insertAll(const NameSet& other) {
  if (words_.size() < other.words_.size()) words_.resize(other.words_.size(), 0);
  bool changed = false;
  for (std::size_t i = 0; i < other.words_.size(); ++i) {
    std::uint64_t merged = words_[i] | other.words_[i];
    if (merged != words_[i]) {
      words_[i] = merged;
      changed = true;
    }
  }
  return changed;
}

bool NameSet::subsetOf(const NameSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t theirs = i < other.words_.size() ? other.words_[i] : 0;
    if (words_[i] & ~theirs) return false;
  }
  return true;
}

bool NameSet::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t NameSet::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<int> NameSet::elements() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w) {
      int bit = std::countr_zero(w);
      out.push_back(static_cast<int>(i * 64 + static_cast<std::size_t>(bit)));
      w &= w - 1;
    }
  }
  return out;
}

bool operator==(const NameSet& a, const NameSet& b) { return a.subsetOf(b) && b.subsetOf(a); }

// ------------------------------------------------------------ SymbolTable

int SymbolTable::conceptId(const std::string& name) {
  auto [it, inserted] = conceptIds_.emplace(name, static_cast<int>(concepts_.size()));
  if (inserted) concepts_.push_back(name);
  return it->second;
}

int SymbolTable::role(const std::string& name) {
  auto [it, inserted] = roleIds_.emplace(name, static_cast<int>(roles_.size()));
  if (inserted) roles_.push_back(name);
  return it->second;
}

int SymbolTable::findConcept(const std::string& name) const {
  auto it = conceptIds_.find(name);
  return it == conceptIds_.end() ? -1 : it->second;
}

int SymbolTable::findRole(const std::string& name) const {
  auto it = roleIds_.find(name);
  return it == roleIds_.end() ? -1 : it->second;
}

// --------------------------------------------------------- Interpretation

Interpretation::Interpretation(std::shared_ptr<SymbolTable> symbols)
    : symbols_(symbols ? std::move(symbols) : std::make_shared<SymbolTable>()) {}

int Interpretation::addElement(const std::string& name) {
  auto [it, inserted] = index_.emplace(name, static_cast<int>(names_.size()));
  if (!inserted) return it->second;
  names_.push_back(name);
  labels_.emplace_back();
  succ_.emplace_back();
  return it->second;
}

int Interpretation::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

bool Interpretation::addLabel(int e, int conceptId) {
  auto& l = labels_.at(static_cast<std::size_t>(e));
  if (l.contains(conceptId)) return false;
  l.insert(conceptId);
  return true;
}

void Interpretation::addLabel(int e, const std::string& name) { addLabel(e, symbols_->conceptId(name)); }

bool Interpretation::addLabels(int e, const NameSet& names) {
  return labels_.at(static_cast<std::size_t>(e)).insertAll(names);
}

bool Interpretation::hasLabel(int e, const std::string& name) const {
  return label(e).contains(symbols_->findConcept(name));
}

std::set<std::string> Interpretation::labelNames(int e) const {
  std::set<std::string> out;
  for (int id : label(e).elements()) out.insert(symbols_->conceptName(id));
  return out;
}

bool Interpretation::addEdge(int from, int to, const NameSet& roles) {
  auto& edges = succ_.at(static_cast<std::size_t>(from));
  for (auto& e : edges)
    if (e.target == to) return e.roles.insertAll(roles);
  edges.push_back(Edge{to, roles});
  return true;
}

void Interpretation::addEdge(int from, const std::string& role, int to) {
  NameSet r;
  r.insert(symbols_->role(role));
  addEdge(from, to, r);
}

const NameSet* Interpretation::edgeRoles(int from, int to) const {
  for (const auto& e : successors(from))
    if (e.target == to) return &e.roles;
  return nullptr;
}

bool Interpretation::hasEdge(int from, const std::string& role, int to) const {
  const NameSet* r = edgeRoles(from, to);
  return r && r->contains(symbols_->findRole(role));
}

std::vector<int> Interpretation::reachable(const std::vector<int>& roots) const {
  std::vector<char> seen(size(), 0);
  std::vector<int> out;
  std::deque<int> queue;
  for (int r : roots) {
    if (!seen[static_cast<std::size_t>(r)]) {
      seen[static_cast<std::size_t>(r)] = 1;
      queue.push_back(r);
    }
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    out.push_back(v);
    for (const auto& e : successors(v)) {
      if (!seen[static_cast<std::size_t>(e.target)]) {
        seen[static_cast<std::size_t>(e.target)] = 1;
        queue.push_back(e.target);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Interpretation::str() const {
  std::ostringstream os;
  for (std::size_t e = 0; e < size(); ++e) {
    os << names_[e] << " {";
    bool first = true;
    for (const auto& n : labelNames(static_cast<int>(e))) {
      os << (first ? "" : ",") << n;
      first = false;
    }
    os << "}";
    for (const auto& edge : succ_[e]) {
      os << " ";
      bool firstRole = true;
      for (int r : edge.roles.elements()) {
        os << (firstRole ? "" : "|") << symbols_->roleName(r);
        firstRole = false;
      }
      os << "->" << names_[static_cast<std::size_t>(edge.target)];
    }
    os << "\n";
  }
  return os.str();
}

int RegularModel::individual(const std::string& ind) const {
  int e = interpretation.find(ind);
  return isNamed(e) ? e : -1;
}

std::vector<int> RegularModel::reachableElements() const {
  std::vector<int> roots;
  for (std::size_t i = 0; i < namedCount; ++i) roots.push_back(static_cast<int>(i));
  return interpretation.reachable(roots);
}

Interpretation canonicalAboxModel(const ABox& a, std::shared_ptr<SymbolTable> symbols) {
  Interpretation I(std::move(symbols));
  for (const auto& ind : a.individuals()) I.addElement(ind);
  for (const auto& c : a.conceptAssertions()) I.addLabel(I.find(c.individual), c.name);
  for (const auto& r : a.roleAssertions()) I.addEdge(I.find(r.from), r.role, I.find(r.to));
  return I;
}

// ----------------------------------------------------- concept evaluation

namespace {

struct CompiledConcept {
  struct Node {
    NameSet names;
    std::vector<std::pair<int, int>> succ;  // role id, child node
  };
  std::vector<Node> nodes;
};

CompiledConcept compile(const Concept& c, SymbolTable& symbols) {
  CompiledConcept out;
  out.nodes.emplace_back();
  std::function<void(const Concept&, std::size_t)> go = [&](const Concept& d, std::size_t n) {
    switch (d.kind()) {
      case Concept::Kind::Top:
        break;
      case Concept::Kind::Atom:
        out.nodes[n].names.insert(symbols.conceptId(d.name()));
        break;
      case Concept::Kind::Conj:
        for (const auto& p : d.parts()) go(p, n);
        break;
      case Concept::Kind::Exists: {
        std::size_t child = out.nodes.size();
        out.nodes.emplace_back();
        int role = symbols.role(d.role());
        out.nodes[n].succ.emplace_back(role, static_cast<int>(child));
        go(d.filler(), child);
        break;
      }
    }
  };
  go(c, 0);
  return out;
}

class Evaluator {
 public:
  Evaluator(const CompiledConcept& c, const Interpretation& I)
      : c_(c), I_(I), memo_(c.nodes.size() * I.size(), static_cast<signed char>(-1)) {}

  bool holds(int node, int element) {
    auto& slot = memo_[static_cast<std::size_t>(node) * I_.size() + static_cast<std::size_t>(element)];
    if (slot >= 0) return slot != 0;
    const auto& n = c_.nodes[static_cast<std::size_t>(node)];
    bool ok = n.names.subsetOf(I_.label(element));
    for (std::size_t i = 0; ok && i < n.succ.size(); ++i) {
      const auto& [role, child] = n.succ[i];
      bool found = false;
      for (const auto& e : I_.successors(element)) {
        if (e.roles.contains(role) && holds(child, e.target)) {
          found = true;
          break;
        }
      }
      ok = found;
    }
    slot = ok ? 1 : 0;
    return ok;
  }

 private:
  const CompiledConcept& c_;
  const Interpretation& I_;
  std::vector<signed char> memo_;
};

bool evaluate(const CompiledConcept& c, const Interpretation& I, int element) {
  Evaluator ev(c, I);
  return ev.holds(0, element);
}

}  // namespace

bool holdsAt(const Interpretation& I, const Concept& c, int element) {
  if (element < 0) return false;
  CompiledConcept cc = compile(c, I.symbols());
  return evaluate(cc, I, element);
}

// ------------------------------------------------------------- Reasoner

struct Effect {
  NameSet names;
  std::vector<int> anon;
};

struct Reasoner::Impl {
  TBox tbox;
  std::shared_ptr<SymbolTable> symbols;
  std::vector<NameSet> sup;
  std::unordered_map<int, Effect> definitions;
  struct Rule {
    CompiledConcept lhs;
    Effect effect;
  };
  std::vector<Rule> rules;
  struct Anon {
    int role = 0;
    NameSet roles;
    Effect base;
  };
  std::vector<Anon> anon;
  std::unordered_map<std::string, int> anonIndex;
  Interpretation anonPart;

  NameSet supOf(int role) const {
    if (role >= 0 && static_cast<std::size_t>(role) < sup.size()) return sup[static_cast<std::size_t>(role)];
    NameSet s;
    s.insert(role);
    return s;
  }

  Effect effectOf(const Concept& c) {
    Effect e;
    for (const auto& part : c.conjuncts()) {
      if (part.isAtom()) e.names.insert(symbols->conceptId(part.name()));
      else if (part.isExists()) e.anon.push_back(internAnon(part.role(), part.filler()));
    }
    std::sort(e.anon.begin(), e.anon.end());
    e.anon.erase(std::unique(e.anon.begin(), e.anon.end()), e.anon.end());
    return e;
  }

  int internAnon(const std::string& role, const Concept& filler) {
    std::string key = role + "|" + filler.normalized().str();
    auto it = anonIndex.find(key);
    if (it != anonIndex.end()) return it->second;
    int id = static_cast<int>(anon.size());
    anonIndex.emplace(key, id);
    anon.emplace_back();
    int roleId = symbols->role(role);
    Effect base = effectOf(filler.normalized());
    anon[static_cast<std::size_t>(id)].role = roleId;
    anon[static_cast<std::size_t>(id)].base = std::move(base);
    return id;
  }

  bool effectPresent(const Interpretation& I, int e, const Effect& eff, int offset) const {
    if (!eff.names.subsetOf(I.label(e))) return false;
    for (int j : eff.anon) {
      const NameSet* r = I.edgeRoles(e, j + offset);
      if (!r || !anon[static_cast<std::size_t>(j)].roles.subsetOf(*r)) return false;
    }
    return true;
  }

  bool apply(Interpretation& I, int e, const Effect& eff, int offset) const {
    bool changed = I.addLabels(e, eff.names);
    for (int j : eff.anon) changed |= I.addEdge(e, j + offset, anon[static_cast<std::size_t>(j)].roles);
    return changed;
  }

  // Applies the TBox rules to the given elements until nothing changes.
  void saturate(Interpretation& I, int first, int last, int offset) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int e = first; e < last; ++e) {
        for (int a : I.label(e).elements()) {
          auto it = definitions.find(a);
          if (it != definitions.end()) changed |= apply(I, e, it->second, offset);
        }
        for (const auto& rule : rules) {
          if (effectPresent(I, e, rule.effect, offset)) continue;
          if (evaluate(rule.lhs, I, e)) changed |= apply(I, e, rule.effect, offset);
        }
      }
    }
  }
};

Reasoner::Reasoner(const TBox& t, std::shared_ptr<SymbolTable> symbols) {
  auto impl = std::make_shared<Impl>();
  impl->tbox = t;
  impl->symbols = symbols ? std::move(symbols) : std::make_shared<SymbolTable>();
  auto& sym = *impl->symbols;
  Signature sig = t.signature();
  for (const auto& c : sig.concepts) sym.conceptId(c);
  for (const auto& r : sig.roles) sym.role(r);

  // Reflexive-transitive closure of the role inclusions.
  std::size_t roleCount = sym.roleCount();
  std::vector<std::vector<int>> up(roleCount);
  for (const auto& ri : t.roleInclusions()) up[static_cast<std::size_t>(sym.role(ri.sub))].push_back(sym.role(ri.sup));
  impl->sup.resize(roleCount);
  for (std::size_t r = 0; r < roleCount; ++r) {
    std::deque<int> queue{static_cast<int>(r)};
    impl->sup[r].insert(static_cast<int>(r));
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int w : up[static_cast<std::size_t>(v)]) {
        if (!impl->sup[r].contains(w)) {
          impl->sup[r].insert(w);
          queue.push_back(w);
        }
      }
    }
  }

  for (const auto& ci : t.conceptInclusions()) {
    Effect eff = impl->effectOf(ci.rhs);
    if (ci.lhs.isAtom()) {
      auto& slot = impl->definitions[sym.conceptId(ci.lhs.name())];
      slot.names.insertAll(eff.names);
      for (int j : eff.anon)
        if (std::find(slot.anon.begin(), slot.anon.end(), j) == slot.anon.end()) slot.anon.push_back(j);
    } else {
      impl->rules.push_back(Impl::Rule{compile(ci.lhs, sym), std::move(eff)});
    }
  }
  for (auto& a : impl->anon) a.roles = impl->supOf(a.role);

  impl->anonPart = Interpretation(impl->symbols);
  for (std::size_t i = 0; i < impl->anon.size(); ++i) impl->anonPart.addElement("_:" + std::to_string(i));
  for (std::size_t i = 0; i < impl->anon.size(); ++i) impl->apply(impl->anonPart, static_cast<int>(i), impl->anon[i].base, 0);
  impl->saturate(impl->anonPart, 0, static_cast<int>(impl->anon.size()), 0);
  impl_ = std::move(impl);
}

const TBox& Reasoner::tbox() const { return impl_->tbox; }
const std::shared_ptr<SymbolTable>& Reasoner::symbols() const { return impl_->symbols; }
std::size_t Reasoner::anonymousCount() const { return impl_->anon.size(); }

RegularModel Reasoner::model(const ABox& a) const {
  const Impl& im = *impl_;
  RegularModel m;
  m.interpretation = Interpretation(im.symbols);
  Interpretation& I = m.interpretation;
  for (const auto& ind : a.individuals()) I.addElement(ind);
  m.namedCount = I.size();
  const int offset = static_cast<int>(m.namedCount);
  for (std::size_t j = 0; j < im.anon.size(); ++j) {
    int e = I.addElement("_:" + std::to_string(j));
    I.addLabels(e, im.anonPart.label(static_cast<int>(j)));
  }
  for (std::size_t j = 0; j < im.anon.size(); ++j)
    for (const auto& edge : im.anonPart.successors(static_cast<int>(j)))
      I.addEdge(static_cast<int>(j) + offset, edge.target + offset, edge.roles);
  for (const auto& c : a.conceptAssertions()) I.addLabel(I.find(c.individual), im.symbols->conceptId(c.name));
  for (const auto& r : a.roleAssertions())
    I.addEdge(I.find(r.from), I.find(r.to), im.supOf(im.symbols->role(r.role)));
  im.saturate(I, 0, offset, offset);
  return m;
}

bool Reasoner::entails(const ABox& a, const Query& q) const {
  ABox extended = a;
  for (const auto& ind : q.individuals()) extended.declare(ind);
  return entails(model(extended), q);
}

bool Reasoner::entails(const RegularModel& m, const Query& q) const {
  const Interpretation& I = m.interpretation;
  switch (q.shape()) {
    case Query::Shape::ConceptAssertion: {
      int e = m.individual(q.individual());
      if (e < 0) return q.queryConcept().isTop();
      return holdsAt(I, q.queryConcept(), e);
    }
    case Query::Shape::RoleAssertion: {
      int a = m.individual(q.individual());
      int b = m.individual(q.second());
      if (a < 0 || b < 0) return false;
      const NameSet* r = I.edgeRoles(a, b);
      return r && r->contains(impl_->symbols->findRole(q.role()));
    }
    case Query::Shape::Conjunctive:
      return matchQuery(m, q.cq()).has_value();
  }
  return false;
}

bool Reasoner::subsumes(const Concept& c, const Concept& d) const {
  ConceptAbox ca = aboxOfConcept(c);
  RegularModel m = model(ca.abox);
  return holdsAt(m.interpretation, d, m.individual(ca.root));
}

bool Reasoner::roleSubsumes(const std::string& r, const std::string& s) const {
  if (r == s) return true;
  int rid = impl_->symbols->findRole(r);
  int sid = impl_->symbols->findRole(s);
  if (rid < 0 || sid < 0) return false;
  return impl_->supOf(rid).contains(sid);
}

RegularModel buildRegularModel(const TBox& t, const ABox& a) { return Reasoner(t).model(a); }

Interpretation unravel(const RegularModel& m, std::size_t depth) {
  const Interpretation& M = m.interpretation;
  Interpretation out(M.symbolTable());
  for (std::size_t e = 0; e < m.namedCount; ++e) {
    int id = out.addElement(M.elementName(static_cast<int>(e)));
    out.addLabels(id, M.label(static_cast<int>(e)));
  }
  for (std::size_t e = 0; e < m.namedCount; ++e)
    for (const auto& edge : M.successors(static_cast<int>(e)))
      if (m.isNamed(edge.target)) out.addEdge(static_cast<int>(e), edge.target, edge.roles);
  struct Item {
    int source;  // element in M
    int copy;    // element in out
    std::size_t level;
  };
  std::deque<Item> queue;
  for (std::size_t e = 0; e < m.namedCount; ++e) queue.push_back({static_cast<int>(e), static_cast<int>(e), 0});
  while (!queue.empty()) {
    Item it = queue.front();
    queue.pop_front();
    if (it.level == depth) continue;
    for (const auto& edge : M.successors(it.source)) {
      if (m.isNamed(edge.target)) continue;
      int child = out.addElement(out.elementName(it.copy) + "/" + M.elementName(edge.target));
      out.addLabels(child, M.label(edge.target));
      out.addEdge(it.copy, child, edge.roles);
      queue.push_back({edge.target, child, it.level + 1});
    }
  }
  return out;
}

bool entailsCI(const TBox& t, const ConceptInclusion& ci) { return Reasoner(t).subsumes(ci.lhs, ci.rhs); }

bool entailsRI(const TBox& t, const RoleInclusion& ri) { return Reasoner(t).roleSubsumes(ri.sub, ri.sup); }

bool answersQuery(const TBox& t, const ABox& a, const Query& q) { return Reasoner(t).entails(a, q); }

// ------------------------------------------------------- query matching

namespace {

class QueryMatcher {
 public:
  QueryMatcher(const RegularModel& m, const ConjunctiveQuery& q) : m_(m), I_(m.interpretation), q_(q) {
    for (std::size_t e = 0; e < m.namedCount; ++e) nodes_.push_back(Node{static_cast<int>(e), -1, {}, false});
  }

  std::optional<std::map<std::string, std::string>> run() {
    // Weakly connected components over the query terms.
    std::vector<std::string> terms = q_.terms();
    std::map<std::string, std::string> parent;
    for (const auto& t : terms) parent[t] = t;
    std::function<std::string(const std::string&)> findRoot = [&](const std::string& t) {
      std::string r = t;
      while (parent[r] != r) r = parent[r];
      return r;
    };
    for (const auto& a : q_.atoms)
      if (a.isRole) parent[findRoot(a.first)] = findRoot(a.second);
    std::map<std::string, std::vector<std::string>> components;
    for (const auto& t : terms) components[findRoot(t)].push_back(t);
    for (const auto& [root, members] : components) {
      bool hasIndividual = std::any_of(members.begin(), members.end(), [&](const std::string& t) { return !q_.isVariable(t); });
      if (hasIndividual) continue;
      bool hasRole = std::any_of(q_.atoms.begin(), q_.atoms.end(), [&](const QueryAtom& a) {
        return a.isRole && (a.first == members.front() || a.second == members.front());
      });
      if (members.size() != 1 || hasRole) throw UnsupportedQueryError("conjunctive query is not rooted: " + q_.str());
    }
    const auto& sym = I_.symbols();
    for (const auto& ind : q_.individuals)
      if (m_.individual(ind) < 0) return std::nullopt;
    for (const auto& a : q_.atoms) {
      int id = a.isRole ? sym.findRole(a.predicate) : sym.findConcept(a.predicate);
      if (id < 0) return std::nullopt;
      ids_.push_back(id);
    }

    std::map<std::string, std::string> witness;
    for (const auto& [root, members] : components) {
      bool hasIndividual = std::any_of(members.begin(), members.end(), [&](const std::string& t) { return !q_.isVariable(t); });
      if (!hasIndividual) {
        if (members.size() != 1) throw UnsupportedQueryError("conjunctive query is not rooted: " + q_.str());
        auto found = matchIsolated(members.front());
        if (!found) return std::nullopt;
        witness[members.front()] = I_.elementName(*found);
        continue;
      }
      if (!solveComponent(members, witness)) return std::nullopt;
    }
    return witness;
  }

 private:
  struct Node {
    int element;
    int parent;
    std::vector<int> kids;
    bool expanded;
  };

  std::optional<int> matchIsolated(const std::string& var) {
    for (const auto& a : q_.atoms)
      if (a.isRole && (a.first == var || a.second == var))
        throw UnsupportedQueryError("conjunctive query is not rooted: " + q_.str());
    for (int e : m_.reachableElements()) {
      bool ok = true;
      for (std::size_t i = 0; ok && i < q_.atoms.size(); ++i)
        if (!q_.atoms[i].isRole && q_.atoms[i].first == var) ok = I_.label(e).contains(ids_[i]);
      if (ok) return e;
    }
    return std::nullopt;
  }

  const std::vector<int>& kids(int node) {
    if (!nodes_[static_cast<std::size_t>(node)].expanded) {
      std::vector<int> created;
      int element = nodes_[static_cast<std::size_t>(node)].element;
      for (const auto& e : I_.successors(element)) {
        if (m_.isNamed(e.target)) continue;
        nodes_.push_back(Node{e.target, node, {}, false});
        created.push_back(static_cast<int>(nodes_.size()) - 1);
      }
      nodes_[static_cast<std::size_t>(node)].kids = std::move(created);
      nodes_[static_cast<std::size_t>(node)].expanded = true;
    }
    return nodes_[static_cast<std::size_t>(node)].kids;
  }

  bool roleHolds(int fromNode, int toNode, int role) const {
    const Node& to = nodes_[static_cast<std::size_t>(toNode)];
    const Node& from = nodes_[static_cast<std::size_t>(fromNode)];
    if (m_.isNamed(to.element) && to.parent < 0) {
      if (!(m_.isNamed(from.element) && from.parent < 0)) return false;
    } else if (to.parent != fromNode) {
      return false;
    }
    const NameSet* r = I_.edgeRoles(from.element, to.element);
    return r && r->contains(role);
  }

  bool consistent(const std::map<std::string, int>& image, const std::string& term) const {
    for (std::size_t i = 0; i < q_.atoms.size(); ++i) {
      const auto& a = q_.atoms[i];
      if (a.first != term && (!a.isRole || a.second != term)) continue;
      auto f = image.find(a.first);
      if (f == image.end()) continue;
      if (!a.isRole) {
        if (!I_.label(nodes_[static_cast<std::size_t>(f->second)].element).contains(ids_[i])) return false;
        continue;
      }
      auto s = image.find(a.second);
      if (s == image.end()) continue;
      if (!roleHolds(f->second, s->second, ids_[i])) return false;
    }
    return true;
  }

  // Sound over-approximation of the possible images: arc consistency of the
  // query against the finite model.
  bool computeDomains(const std::vector<std::string>& members) {
    std::size_t n = I_.size();
    if (preds_.empty()) {
      preds_.resize(n);
      for (std::size_t e = 0; e < n; ++e)
        for (const auto& edge : I_.successors(static_cast<int>(e)))
          preds_[static_cast<std::size_t>(edge.target)].push_back(Edge{static_cast<int>(e), edge.roles});
    }
    std::vector<bool> reach(n, false);
    for (int e : m_.reachableElements()) reach[static_cast<std::size_t>(e)] = true;
    for (const auto& t : members) {
      std::vector<bool> d(n, false);
      if (q_.isVariable(t)) {
        d = reach;
      } else {
        d[static_cast<std::size_t>(m_.individual(t))] = true;
      }
      for (std::size_t i = 0; i < q_.atoms.size(); ++i)
        if (!q_.atoms[i].isRole && q_.atoms[i].first == t)
          for (std::size_t e = 0; e < n; ++e)
            if (d[e] && !I_.label(static_cast<int>(e)).contains(ids_[i])) d[e] = false;
      domain_[t] = std::move(d);
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < q_.atoms.size(); ++i) {
        const auto& a = q_.atoms[i];
        if (!a.isRole) continue;
        auto& dx = domain_[a.first];
        auto& dy = domain_[a.second];
        for (std::size_t e = 0; e < n; ++e) {
          if (!dx[e]) continue;
          bool ok = false;
          for (const auto& edge : I_.successors(static_cast<int>(e)))
            if (dy[static_cast<std::size_t>(edge.target)] && edge.roles.contains(ids_[i])) ok = true;
          if (!ok) dx[e] = false, changed = true;
        }
        for (std::size_t e = 0; e < n; ++e) {
          if (!dy[e]) continue;
          bool ok = false;
          for (const auto& edge : preds_[e])
            if (dx[static_cast<std::size_t>(edge.target)] && edge.roles.contains(ids_[i])) ok = true;
          if (!ok) dy[e] = false, changed = true;
        }
      }
    }
    for (const auto& t : members)
      if (std::none_of(domain_[t].begin(), domain_[t].end(), [](bool b) { return b; })) return false;
    return true;
  }

  bool isRoot(int node) const {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    return n.parent < 0;
  }

  // Nodes the variable can take given the already placed neighbours.
  std::vector<int> candidates(const std::string& var, const std::map<std::string, int>& image) {
    std::optional<std::vector<int>> result;
    auto intersect = [&](std::vector<int> c) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      if (!result) {
        result = std::move(c);
        return;
      }
      std::vector<int> out;
      std::set_intersection(result->begin(), result->end(), c.begin(), c.end(), std::back_inserter(out));
      result = std::move(out);
    };
    for (std::size_t i = 0; i < q_.atoms.size(); ++i) {
      const auto& a = q_.atoms[i];
      if (!a.isRole) continue;
      int role = ids_[i];
      if (a.second == var && a.first != var) {
        auto f = image.find(a.first);
        if (f == image.end()) continue;
        int from = f->second;
        std::vector<int> c;
        int el = nodes_[static_cast<std::size_t>(from)].element;
        if (isRoot(from))
          for (const auto& e : I_.successors(el))
            if (m_.isNamed(e.target) && e.roles.contains(role)) c.push_back(e.target);
        for (int child : kids(from)) {
          const NameSet* r = I_.edgeRoles(el, nodes_[static_cast<std::size_t>(child)].element);
          if (r && r->contains(role)) c.push_back(child);
        }
        intersect(std::move(c));
      } else if (a.first == var && a.second != var) {
        auto f = image.find(a.second);
        if (f == image.end()) continue;
        int to = f->second;
        const Node& tn = nodes_[static_cast<std::size_t>(to)];
        std::vector<int> c;
        if (isRoot(to)) {
          for (const auto& e : preds_[static_cast<std::size_t>(tn.element)])
            if (m_.isNamed(e.target) && e.roles.contains(role)) c.push_back(e.target);
        } else {
          const NameSet* r = I_.edgeRoles(nodes_[static_cast<std::size_t>(tn.parent)].element, tn.element);
          if (r && r->contains(role)) c.push_back(tn.parent);
        }
        intersect(std::move(c));
      }
    }
    if (!result) return {};
    const auto& dom = domain_[var];
    std::vector<int> out;
    for (int c : *result)
      if (dom[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(c)].element)]) out.push_back(c);
    return out;
  }

  bool anchored(const std::string& var, const std::map<std::string, int>& image) const {
    for (const auto& a : q_.atoms)
      if (a.isRole && ((a.second == var && image.count(a.first)) || (a.first == var && image.count(a.second))))
        return true;
    return false;
  }

  std::vector<std::vector<std::string>> split(const std::vector<std::string>& vars) const {
    std::map<std::string, std::string> parent;
    for (const auto& v : vars) parent[v] = v;
    std::function<std::string(const std::string&)> findRoot = [&](const std::string& t) {
      std::string r = t;
      while (parent[r] != r) r = parent[r];
      return r;
    };
    for (const auto& a : q_.atoms)
      if (a.isRole && parent.count(a.first) && parent.count(a.second)) parent[findRoot(a.first)] = findRoot(a.second);
    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& v : vars) groups[findRoot(v)].push_back(v);
    std::vector<std::vector<std::string>> out;
    for (auto& [root, g] : groups) out.push_back(std::move(g));
    return out;
  }

  std::string memoKey(const std::vector<std::string>& comp, const std::map<std::string, int>& image) const {
    std::set<std::string> inComp(comp.begin(), comp.end());
    std::set<std::pair<std::string, int>> boundary;
    for (const auto& a : q_.atoms) {
      if (!a.isRole) continue;
      if (inComp.count(a.first) && image.count(a.second)) boundary.emplace(a.second, image.at(a.second));
      if (inComp.count(a.second) && image.count(a.first)) boundary.emplace(a.first, image.at(a.first));
    }
    std::string key;
    for (const auto& v : comp) key += v + ",";
    key += "|";
    for (const auto& [t, n] : boundary) key += t + "=" + std::to_string(n) + ",";
    return key;
  }

  // Solves the unplaced variables; independent groups are solved separately.
  bool solveSet(const std::vector<std::string>& vars, std::map<std::string, int>& image,
                std::map<std::string, int>& out) {
    for (const auto& comp : split(vars)) {
      std::string key = memoKey(comp, image);
      auto it = memo_.find(key);
      if (it == memo_.end()) {
        std::map<std::string, int> assignment;
        bool ok = solveConnected(comp, image, assignment);
        it = memo_.emplace(key, ok ? std::optional<std::map<std::string, int>>(std::move(assignment)) : std::nullopt)
                 .first;
      }
      if (!it->second) return false;
      out.insert(it->second->begin(), it->second->end());
    }
    return true;
  }

  bool solveConnected(const std::vector<std::string>& comp, std::map<std::string, int>& image,
                      std::map<std::string, int>& assignment) {
    std::optional<std::string> best;
    std::vector<int> bestCands;
    for (const auto& v : comp) {
      if (!anchored(v, image)) continue;
      auto c = candidates(v, image);
      if (!best || c.size() < bestCands.size()) {
        best = v;
        bestCands = std::move(c);
      }
      if (bestCands.size() <= 1) break;
    }
    if (!best) throw UnsupportedQueryError("conjunctive query is not rooted: " + q_.str());
    std::vector<std::string> rest;
    for (const auto& v : comp)
      if (v != *best) rest.push_back(v);
    for (int c : bestCands) {
      image[*best] = c;
      std::map<std::string, int> sub;
      if (consistent(image, *best) && solveSet(rest, image, sub)) {
        image.erase(*best);
        assignment = std::move(sub);
        assignment[*best] = c;
        return true;
      }
    }
    image.erase(*best);
    return false;
  }

  bool solveComponent(const std::vector<std::string>& members, std::map<std::string, std::string>& witness) {
    std::map<std::string, int> image;
    std::vector<std::string> vars;
    for (const auto& t : members) {
      if (q_.isVariable(t)) {
        vars.push_back(t);
        continue;
      }
      image[t] = m_.individual(t);
    }
    for (const auto& t : members)
      if (!q_.isVariable(t) && !consistent(image, t)) return false;
    if (!computeDomains(members)) return false;
    memo_.clear();
    std::map<std::string, int> out;
    if (!solveSet(vars, image, out)) return false;
    image.insert(out.begin(), out.end());
    for (const auto& [term, node] : image) witness[term] = describe(node);
    return true;
  }

  std::string describe(int node) const {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    if (n.parent < 0) return I_.elementName(n.element);
    return describe(n.parent) + "/" + I_.elementName(n.element);
  }

  const RegularModel& m_;
  const Interpretation& I_;
  const ConjunctiveQuery& q_;
  std::vector<int> ids_;
  std::vector<Node> nodes_;
  std::vector<std::vector<Edge>> preds_;  // edge.target holds the source
  std::map<std::string, std::vector<bool>> domain_;
  std::map<std::string, std::optional<std::map<std::string, int>>> memo_;
};

}  // namespace

std::optional<std::map<std::string, std::string>> matchQuery(const RegularModel& m, const ConjunctiveQuery& q) {
  return QueryMatcher(m, q).run();
}

// ------------------------------------------------------ homomorphisms

std::optional<std::map<std::string, std::string>> aboxHomomorphism(const ABox& from, const ABox& to,
                                                                   const std::map<std::string, std::string>& fixed) {
  std::vector<std::string> sources;
  {
    // Breadth-first over the undirected structure so that constraints bite early.
    std::set<std::string> all = from.individuals();
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& r : from.roleAssertions()) {
      adj[r.from].push_back(r.to);
      adj[r.to].push_back(r.from);
    }
    std::set<std::string> seen;
    std::vector<std::string> seeds;
    for (const auto& [k, v] : fixed) seeds.push_back(k);
    for (const auto& i : all) seeds.push_back(i);
    for (const auto& s : seeds) {
      if (!all.count(s) || seen.count(s)) continue;
      std::deque<std::string> queue{s};
      seen.insert(s);
      while (!queue.empty()) {
        std::string v = queue.front();
        queue.pop_front();
        sources.push_back(v);
        for (const auto& w : adj[v])
          if (seen.insert(w).second) queue.push_back(w);
      }
    }
  }
  const std::set<std::string> targetSet = to.individuals();
  std::vector<std::string> targets(targetSet.begin(), targetSet.end());
  std::map<std::string, std::set<std::string>> needs;
  for (const auto& c : from.conceptAssertions()) needs[c.individual].insert(c.name);
  std::map<std::string, std::string> h;

  auto ok = [&](const std::string& x) {
    const std::string& hx = h.at(x);
    for (const auto& c : needs[x])
      if (!to.contains(ConceptAssertion{c, hx})) return false;
    for (const auto& r : from.roleAssertions()) {
      if (r.from != x && r.to != x) continue;
      auto f = h.find(r.from);
      auto t = h.find(r.to);
      if (f == h.end() || t == h.end()) continue;
      if (!to.contains(RoleAssertion{r.role, f->second, t->second})) return false;
    }
    return true;
  };

  std::function<bool(std::size_t)> search = [&](std::size_t k) -> bool {
    if (k == sources.size()) return true;
    const std::string& x = sources[k];
    auto fx = fixed.find(x);
    if (fx != fixed.end()) {
      h[x] = fx->second;
      if (ok(x) && search(k + 1)) return true;
      h.erase(x);
      return false;
    }
    for (const auto& y : targets) {
      h[x] = y;
      if (ok(x) && search(k + 1)) return true;
    }
    h.erase(x);
    return false;
  };
  if (!search(0)) return std::nullopt;
  return h;
}

}  // namespace elh
