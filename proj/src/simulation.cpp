#include <algorithm>
#include <deque>
#include <functional>
#include <tuple>

#include "elh/errors.hpp"
#include "elh/reasoner.hpp"

namespace elh {

namespace {

bool edgeMatches(const NameSet& want, const NameSet& have, int role, EdgeMatch mode) {
  return mode == EdgeMatch::PerRole ? have.contains(role) : want.subsetOf(have);
}

Interpretation rebase(const Interpretation& J, const std::shared_ptr<SymbolTable>& table) {
  Interpretation out(table);
  const SymbolTable& from = J.symbols();
  for (std::size_t e = 0; e < J.size(); ++e) {
    int id = out.addElement(J.elementName(static_cast<int>(e)));
    for (int c : J.label(static_cast<int>(e)).elements()) out.addLabel(id, table->conceptId(from.conceptName(c)));
  }
  for (std::size_t e = 0; e < J.size(); ++e) {
    for (const auto& edge : J.successors(static_cast<int>(e))) {
      NameSet roles;
      for (int r : edge.roles.elements()) roles.insert(table->role(from.roleName(r)));
      out.addEdge(static_cast<int>(e), edge.target, roles);
    }
  }
  return out;
}

}  // namespace

SimulationRelation::SimulationRelation(const Interpretation& I, const Interpretation& J, EdgeMatch mode)
    : I_(&I), J_(&J), mode_(mode), round_(I.size() * J.size(), -1) {
  if (I.symbolTable() != J.symbolTable())
    throw ContractViolation("simulation requires interpretations over a shared symbol table");
  for (std::size_t d = 0; d < I.size(); ++d)
    for (std::size_t e = 0; e < J.size(); ++e)
      if (!I.label(static_cast<int>(d)).subsetOf(J.label(static_cast<int>(e))))
        round_[index(static_cast<int>(d), static_cast<int>(e))] = 0;

  auto stepOk = [&](int d, int e) {
    for (const auto& de : I.successors(d)) {
      auto matched = [&](int role) {
        for (const auto& ee : J.successors(e))
          if (edgeMatches(de.roles, ee.roles, role, mode) && contains(de.target, ee.target)) return true;
        return false;
      };
      if (mode == EdgeMatch::PerRole) {
        for (int r : de.roles.elements())
          if (!matched(r)) return false;
      } else if (!matched(-1)) {
        return false;
      }
    }
    return true;
  };

  for (int k = 1;; ++k) {
    std::vector<std::size_t> removed;
    for (std::size_t d = 0; d < I.size(); ++d)
      for (std::size_t e = 0; e < J.size(); ++e)
        if (contains(static_cast<int>(d), static_cast<int>(e)) && !stepOk(static_cast<int>(d), static_cast<int>(e)))
          removed.push_back(index(static_cast<int>(d), static_cast<int>(e)));
    if (removed.empty()) break;
    for (auto i : removed) round_[i] = k;
  }
}

std::vector<std::pair<int, int>> SimulationRelation::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t d = 0; d < I_->size(); ++d)
    for (std::size_t e = 0; e < J_->size(); ++e)
      if (contains(static_cast<int>(d), static_cast<int>(e))) out.emplace_back(static_cast<int>(d), static_cast<int>(e));
  return out;
}

SimulationRelation simulation(const Interpretation& I, const Interpretation& J, EdgeMatch mode) {
  return SimulationRelation(I, J, mode);
}

bool bisimilar(const Interpretation& I, int d, const Interpretation& Jin, int e) {
  Interpretation J = Jin.symbolTable() == I.symbolTable() ? Jin : rebase(Jin, I.symbolTable());
  const std::size_t n = I.size();
  const std::size_t m = J.size();
  std::vector<char> rel(n * m, 0);
  auto at = [&](std::size_t x, std::size_t y) -> char& { return rel[x * m + y]; };
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < m; ++y) at(x, y) = I.label(static_cast<int>(x)) == J.label(static_cast<int>(y));

  auto covered = [&](const Interpretation& A, int a, const Interpretation& B, int b, bool swapped) {
    for (const auto& ea : A.successors(a)) {
      for (int r : ea.roles.elements()) {
        bool found = false;
        for (const auto& eb : B.successors(b)) {
          if (!eb.roles.contains(r)) continue;
          bool linked = swapped ? at(static_cast<std::size_t>(eb.target), static_cast<std::size_t>(ea.target))
                                : at(static_cast<std::size_t>(ea.target), static_cast<std::size_t>(eb.target));
          if (linked) {
            found = true;
            break;
          }
        }
        if (!found) return false;
      }
    }
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < m; ++y) {
        if (!at(x, y)) continue;
        if (!covered(I, static_cast<int>(x), J, static_cast<int>(y), false) ||
            !covered(J, static_cast<int>(y), I, static_cast<int>(x), true)) {
          at(x, y) = 0;
          changed = true;
        }
      }
    }
  }
  return at(static_cast<std::size_t>(d), static_cast<std::size_t>(e)) != 0;
}

// ------------------------------------------------------------ witnesses

std::size_t WitnessTree::depth() const {
  std::function<std::size_t(int)> go = [&](int v) -> std::size_t {
    std::size_t d = 0;
    for (const auto& [roles, c] : nodes[static_cast<std::size_t>(v)].children) d = std::max(d, 1 + go(c));
    return d;
  };
  return nodes.empty() ? 0 : go(0);
}

bool WitnessTree::holdsAt(const Interpretation& J, int element) const {
  std::vector<signed char> memo(nodes.size() * J.size(), -1);
  std::function<bool(int, int)> go = [&](int v, int e) -> bool {
    auto& slot = memo[static_cast<std::size_t>(v) * J.size() + static_cast<std::size_t>(e)];
    if (slot >= 0) return slot != 0;
    const Node& n = nodes[static_cast<std::size_t>(v)];
    bool ok = n.labels.subsetOf(J.label(e));
    for (std::size_t i = 0; ok && i < n.children.size(); ++i) {
      const auto& [roles, child] = n.children[i];
      bool found = false;
      for (const auto& edge : J.successors(e)) {
        if (roles.subsetOf(edge.roles) && go(child, edge.target)) {
          found = true;
          break;
        }
      }
      ok = found;
    }
    slot = ok ? 1 : 0;
    return ok;
  };
  return go(0, element);
}

namespace {

std::vector<std::string> sortedNames(const NameSet& s, bool roles, const SymbolTable& symbols) {
  std::vector<std::string> out;
  for (int id : s.elements()) out.push_back(roles ? symbols.roleName(id) : symbols.conceptName(id));
  std::sort(out.begin(), out.end());
  return out;
}

// Children ordered by their serialization so that rendering is canonical.
std::vector<int> bfs(const WitnessTree& w) {
  std::vector<int> order;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (const auto& [roles, c] : w.nodes[static_cast<std::size_t>(v)].children) queue.push_back(c);
  }
  return order;
}

}  // namespace

Concept WitnessTree::toConcept(const SymbolTable& symbols) const {
  std::function<Concept(int)> go = [&](int v) {
    const Node& n = nodes[static_cast<std::size_t>(v)];
    std::vector<Concept> parts;
    for (const auto& name : sortedNames(n.labels, false, symbols)) parts.push_back(Concept::atom(name));
    for (const auto& [roles, child] : n.children) {
      auto rs = sortedNames(roles, true, symbols);
      if (rs.size() != 1) throw ContractViolation("witness edge with several roles has no concept form");
      parts.push_back(Concept::exists(rs.front(), go(child)));
    }
    return Concept::conj(std::move(parts)).normalized();
  };
  return go(0);
}

ConjunctiveQuery WitnessTree::toQuery(const SymbolTable& symbols, const std::string& root) const {
  ConjunctiveQuery q;
  q.individuals = {root};
  auto order = bfs(*this);
  std::vector<std::string> term(nodes.size());
  std::size_t next = 1;
  for (int v : order) {
    if (v == 0) {
      term[0] = root;
      continue;
    }
    term[static_cast<std::size_t>(v)] = "x" + std::to_string(next++);
    q.variables.push_back(term[static_cast<std::size_t>(v)]);
  }
  for (int v : order) {
    const Node& n = nodes[static_cast<std::size_t>(v)];
    for (const auto& name : sortedNames(n.labels, false, symbols))
      q.atoms.push_back(QueryAtom{false, name, term[static_cast<std::size_t>(v)], {}});
    for (const auto& [roles, child] : n.children)
      for (const auto& r : sortedNames(roles, true, symbols))
        q.atoms.push_back(QueryAtom{true, r, term[static_cast<std::size_t>(v)], term[static_cast<std::size_t>(child)]});
  }
  return q;
}

ConjunctiveQuery WitnessTree::toZigzagQuery(const SymbolTable& symbols, const std::string& root) const {
  ConjunctiveQuery q;
  q.individuals = {root};
  auto order = bfs(*this);
  std::vector<std::vector<std::string>> copies(nodes.size());
  copies[0] = {root};
  std::size_t next = 1;
  for (int v : order) {
    const Node& n = nodes[static_cast<std::size_t>(v)];
    const auto& mine = copies[static_cast<std::size_t>(v)];
    for (const auto& term : mine)
      for (const auto& name : sortedNames(n.labels, false, symbols)) q.atoms.push_back(QueryAtom{false, name, term, {}});
    for (const auto& [roles, child] : n.children) {
      auto& theirs = copies[static_cast<std::size_t>(child)];
      for (std::size_t i = 0; i <= mine.size(); ++i) {
        theirs.push_back("x" + std::to_string(next++));
        q.variables.push_back(theirs.back());
      }
      for (std::size_t i = 0; i < mine.size(); ++i)
        for (const auto& r : sortedNames(roles, true, symbols)) {
          q.atoms.push_back(QueryAtom{true, r, mine[i], theirs[i]});
          q.atoms.push_back(QueryAtom{true, r, mine[i], theirs[i + 1]});
        }
    }
  }
  return q;
}

namespace {

void graft(WitnessTree& into, int at, const WitnessTree& from, int node) {
  const auto& src = from.nodes[static_cast<std::size_t>(node)];
  into.nodes[static_cast<std::size_t>(at)].labels.insertAll(src.labels);
  for (const auto& [roles, child] : src.children) {
    into.nodes.emplace_back();
    int copy = static_cast<int>(into.nodes.size()) - 1;
    into.nodes[static_cast<std::size_t>(at)].children.emplace_back(roles, copy);
    graft(into, copy, from, child);
  }
}

}  // namespace

class WitnessBuilder {
 public:
  explicit WitnessBuilder(const SimulationRelation& sim) : sim_(sim) {}

  WitnessTree build(int d, int e) {
    auto key = std::make_pair(d, e);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const Interpretation& I = *sim_.I_;
    const Interpretation& J = *sim_.J_;
    int k = sim_.removalRound(d, e);
    if (k < 0) throw ContractViolation("pair is contained in the simulation; no witness exists");
    WitnessTree w;
    w.nodes.emplace_back();
    if (k == 0) {
      const SymbolTable& sym = I.symbols();
      std::string best;
      int bestId = -1;
      for (int c : I.label(d).elements()) {
        if (J.label(e).contains(c)) continue;
        if (bestId < 0 || sym.conceptName(c) < best) {
          best = sym.conceptName(c);
          bestId = c;
        }
      }
      w.nodes[0].labels.insert(bestId);
      memo_.emplace(key, w);
      return w;
    }
    for (const auto& de : I.successors(d)) {
      std::vector<NameSet> options;
      if (sim_.mode_ == EdgeMatch::PerRole) {
        for (int r : de.roles.elements()) {
          NameSet one;
          one.insert(r);
          options.push_back(one);
        }
      } else {
        options.push_back(de.roles);
      }
      for (const auto& roles : options) {
        bool blocked = true;
        std::vector<int> matches;
        for (const auto& ee : J.successors(e)) {
          if (!roles.subsetOf(ee.roles)) continue;
          int r = sim_.removalRound(de.target, ee.target);
          if (r < 0 || r >= k) {
            blocked = false;
            break;
          }
          matches.push_back(ee.target);
        }
        if (!blocked) continue;
        WitnessTree child;
        child.nodes.emplace_back();
        for (int t : matches) graft(child, 0, build(de.target, t), 0);
        w.nodes.emplace_back();
        w.nodes[0].children.emplace_back(roles, 1);
        graft(w, 1, child, 0);
        memo_.emplace(key, w);
        return w;
      }
    }
    throw ContractViolation("no witness edge found for a removed simulation pair");
  }

 private:
  const SimulationRelation& sim_;
  std::map<std::pair<int, int>, WitnessTree> memo_;
};

WitnessTree distinguishingWitness(const SimulationRelation& sim, int d, int e) { return WitnessBuilder(sim).build(d, e); }

namespace {

WitnessTree dropChild(const WitnessTree& w, int parent, std::size_t childIndex) {
  WitnessTree out;
  out.nodes.emplace_back();
  std::function<void(int, int)> copy = [&](int src, int dst) {
    const auto& n = w.nodes[static_cast<std::size_t>(src)];
    out.nodes[static_cast<std::size_t>(dst)].labels = n.labels;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (src == parent && i == childIndex) continue;
      out.nodes.emplace_back();
      int c = static_cast<int>(out.nodes.size()) - 1;
      out.nodes[static_cast<std::size_t>(dst)].children.emplace_back(n.children[i].first, c);
      copy(n.children[i].second, c);
    }
  };
  copy(0, 0);
  return out;
}

// Unraveling of I at d up to the given depth, truncated after `cap` nodes.
WitnessTree unravelTree(const Interpretation& I, int d, std::size_t depth, std::size_t cap, bool perRole) {
  WitnessTree w;
  w.nodes.emplace_back();
  w.nodes[0].labels = I.label(d);
  std::deque<std::tuple<int, int, std::size_t>> queue{{0, d, 0}};
  while (!queue.empty()) {
    auto [node, element, level] = queue.front();
    queue.pop_front();
    if (level == depth) continue;
    for (const auto& edge : I.successors(element)) {
      std::vector<NameSet> sets;
      if (perRole) {
        for (int r : edge.roles.elements()) {
          NameSet one;
          one.insert(r);
          sets.push_back(one);
        }
      } else {
        sets.push_back(edge.roles);
      }
      for (const auto& roles : sets) {
        if (w.nodes.size() >= cap) return w;
        w.nodes.emplace_back();
        int child = static_cast<int>(w.nodes.size()) - 1;
        w.nodes[static_cast<std::size_t>(child)].labels = I.label(edge.target);
        w.nodes[static_cast<std::size_t>(node)].children.emplace_back(roles, child);
        queue.emplace_back(child, edge.target, level + 1);
      }
    }
  }
  return w;
}

constexpr std::size_t kAdversarialNodeCap = 48;

}  // namespace

WitnessTree shrinkWitness(const WitnessTree& input, const Interpretation& J, int e, std::mt19937_64* rng) {
  WitnessTree w = input;
  bool progress = true;
  while (progress) {
    progress = false;
    struct Op {
      bool isChild;
      int node;
      std::size_t index;  // child index or concept id
    };
    std::vector<Op> ops;
    for (int v : bfs(w))
      for (std::size_t i = 0; i < w.nodes[static_cast<std::size_t>(v)].children.size(); ++i) ops.push_back({true, v, i});
    for (int v : bfs(w))
      for (int c : w.nodes[static_cast<std::size_t>(v)].labels.elements()) ops.push_back({false, v, static_cast<std::size_t>(c)});
    if (rng) std::shuffle(ops.begin(), ops.end(), *rng);
    for (const auto& op : ops) {
      WitnessTree candidate;
      if (op.isChild) {
        candidate = dropChild(w, op.node, op.index);
      } else {
        candidate = w;
        NameSet kept;
        for (int c : w.nodes[static_cast<std::size_t>(op.node)].labels.elements())
          if (static_cast<std::size_t>(c) != op.index) kept.insert(c);
        candidate.nodes[static_cast<std::size_t>(op.node)].labels = kept;
      }
      if (!candidate.holdsAt(J, e)) {
        w = std::move(candidate);
        progress = true;
        break;
      }
    }
  }
  return w;
}

// ------------------------------------------------------- inseparability

SeparationAnalysis::SeparationAnalysis(const TBox& t, const TBox& h, const ABox& a, QueryLanguage lang)
    : lang_(lang), symbols_(std::make_shared<SymbolTable>()) {
  Reasoner rt(t, symbols_);
  Reasoner rh(h, symbols_);
  left_ = rt.model(a);
  right_ = rh.model(a);
  const Interpretation& L = left_.interpretation;
  const Interpretation& R = right_.interpretation;
  const std::size_t n = left_.namedCount;

  Signature sig = t.signature();
  sig.merge(h.signature());
  sig.merge(a.signature());

  std::vector<SeparationCandidate> found;
  auto roleName = [&](const std::string& r, const std::string& x, const std::string& y) {
    return lang == QueryLanguage::AQ ? Query::atomicRole(r, x, y) : Query::instanceRole(r, x, y);
  };
  // Differences between role edges among individuals.
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const NameSet* lr = L.edgeRoles(static_cast<int>(x), static_cast<int>(y));
      const NameSet* rr = R.edgeRoles(static_cast<int>(x), static_cast<int>(y));
      for (const auto& role : sig.roles) {
        int id = symbols_->findRole(role);
        bool inL = lr && lr->contains(id);
        bool inR = rr && rr->contains(id);
        if (inL == inR) continue;
        SeparationCandidate c;
        c.individual = L.elementName(static_cast<int>(x));
        c.positive = inL;
        c.isAssertion = true;
        c.assertion = roleName(role, L.elementName(static_cast<int>(x)), L.elementName(static_cast<int>(y)));
        found.push_back(c);
      }
    }
  }
  if (lang == QueryLanguage::AQ) {
    for (std::size_t x = 0; x < n; ++x) {
      for (const auto& name : sig.concepts) {
        int id = symbols_->findConcept(name);
        bool inL = L.label(static_cast<int>(x)).contains(id);
        bool inR = R.label(static_cast<int>(x)).contains(id);
        if (inL == inR) continue;
        SeparationCandidate c;
        c.individual = L.elementName(static_cast<int>(x));
        c.positive = inL;
        c.isAssertion = true;
        c.assertion = Query::atomic(name, c.individual);
        found.push_back(c);
      }
    }
  } else {
    EdgeMatch mode = lang == QueryLanguage::IQ ? EdgeMatch::PerRole : EdgeMatch::RoleSet;
    forward_ = std::make_unique<SimulationRelation>(L, R, mode);
    backward_ = std::make_unique<SimulationRelation>(R, L, mode);
    for (std::size_t x = 0; x < n; ++x) {
      for (bool positive : {true, false}) {
        const SimulationRelation& sim = positive ? *forward_ : *backward_;
        if (sim.contains(static_cast<int>(x), static_cast<int>(x))) continue;
        SeparationCandidate c;
        c.individual = L.elementName(static_cast<int>(x));
        c.positive = positive;
        c.depth = static_cast<std::size_t>(sim.removalRound(static_cast<int>(x), static_cast<int>(x)));
        c.leftElement = static_cast<int>(x);
        c.rightElement = static_cast<int>(x);
        found.push_back(c);
      }
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const SeparationCandidate& p, const SeparationCandidate& q) {
    if (p.positive != q.positive) return p.positive;
    return p.depth < q.depth;
  });
  candidates_ = std::move(found);
}

Query SeparationAnalysis::render(const SeparationCandidate& c, WitnessStyle style, std::mt19937_64* rng) const {
  if (c.isAssertion) {
    if (lang_ == QueryLanguage::CQr) return Query::conjunctive(c.assertion.asConjunctive());
    return c.assertion;
  }
  const SimulationRelation& sim = c.positive ? *forward_ : *backward_;
  const Interpretation& other = c.positive ? right_.interpretation : left_.interpretation;
  const Interpretation& own = c.positive ? left_.interpretation : right_.interpretation;
  WitnessTree w = distinguishingWitness(sim, c.leftElement, c.rightElement);
  switch (style) {
    case WitnessStyle::Minimal:
      w = shrinkWitness(w, other, c.rightElement);
      break;
    case WitnessStyle::Randomized:
      w = shrinkWitness(w, other, c.rightElement, rng);
      break;
    case WitnessStyle::Unshrunk:
    case WitnessStyle::Zigzag: {
      // Replace the witness by a deeper unraveling of the separating element.
      WitnessTree big = unravelTree(own, c.leftElement, w.depth() + 1, kAdversarialNodeCap, lang_ == QueryLanguage::IQ);
      NameSet rootLabels;
      for (int name : big.nodes[0].labels.elements())
        if (!other.label(c.rightElement).contains(name)) rootLabels.insert(name);
      big.nodes[0].labels = rootLabels;
      if (big.holdsAt(other, c.rightElement)) graft(big, 0, w, 0);
      w = std::move(big);
      break;
    }
  }
  if (lang_ == QueryLanguage::IQ) return Query::instance(w.toConcept(*symbols_), c.individual);
  if (style == WitnessStyle::Zigzag) return Query::conjunctive(w.toZigzagQuery(*symbols_, c.individual));
  return Query::conjunctive(w.toQuery(*symbols_, c.individual));
}

InseparabilityResult SeparationAnalysis::result(const SeparationOptions& options) const {
  InseparabilityResult out;
  if (candidates_.empty()) return out;
  out.inseparable = false;
  const SeparationCandidate* chosen = &candidates_.front();
  std::mt19937_64 rng(options.seed);
  if (options.style == WitnessStyle::Randomized) {
    std::vector<const SeparationCandidate*> pool;
    for (const auto& c : candidates_)
      if (c.positive == candidates_.front().positive) pool.push_back(&c);
    chosen = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
  }
  out.positive = chosen->positive;
  out.counterexample = render(*chosen, options.style, &rng);
  return out;
}

InseparabilityResult inseparable(const TBox& t, const TBox& h, const ABox& a, QueryLanguage lang,
                                 const SeparationOptions& options) {
  return SeparationAnalysis(t, h, a, lang).result(options);
}

}  // namespace elh
