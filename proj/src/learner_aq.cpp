#include <algorithm>
#include <deque>

#include "elh/errors.hpp"
#include "elh/learner.hpp"

namespace elh {

namespace {

const char* kBootA = "a";
const char* kBootB = "b";

struct UndirectedEdge {
  std::string other;
  std::size_t index;
};

// Puts the smallest assertion first, oriented away from nodes[0].
Cycle normalizeCycle(std::vector<std::string> nodes, std::vector<RoleAssertion> as) {
  std::size_t k = nodes.size();
  std::size_t j = static_cast<std::size_t>(std::min_element(as.begin(), as.end()) - as.begin());
  Cycle c;
  if (as[j].from == nodes[j] && as[j].to == nodes[(j + 1) % k]) {
    for (std::size_t i = 0; i < k; ++i) {
      c.nodes.push_back(nodes[(j + i) % k]);
      c.assertions.push_back(as[(j + i) % k]);
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      c.nodes.push_back(nodes[(j + 1 + k - i) % k]);
      c.assertions.push_back(as[(j + k - i) % k]);
    }
  }
  return c;
}

std::vector<std::string> sortedNodes(const std::vector<std::string>& v) {
  std::vector<std::string> s = v;
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

TBox bootstrapAtomic(LearnerContext& ctx) {
  TBox h;
  const Signature& sig = ctx.signature();
  for (const auto& a : sig.concepts) {
    ABox single;
    single.addConcept(a, kBootA);
    for (const auto& b : sig.concepts)
      if (a != b && ctx.ask(single, Query::atomic(b, kBootA))) {
        h.addConceptInclusion(ConceptInclusion{Concept::atom(a), Concept::atom(b)});
        ctx.recordUpdate(HypothesisUpdate::Kind::Atomic, Example{single, Query::atomic(b, kBootA)});
      }
  }
  learnRoleInclusions(ctx, h);
  ctx.setHypothesis(h);
  return h;
}

void learnRoleInclusions(LearnerContext& ctx, TBox& h) {
  const Signature& sig = ctx.signature();
  std::set<RoleInclusion> known(h.roleInclusions().begin(), h.roleInclusions().end());
  for (const auto& r : sig.roles) {
    ABox single;
    single.addRole(r, kBootA, kBootB);
    for (const auto& s : sig.roles) {
      if (r == s || known.count(RoleInclusion{r, s}) != 0) continue;
      if (ctx.ask(single, Query::atomicRole(s, kBootA, kBootB))) {
        h.addRoleInclusion(RoleInclusion{r, s});
        ctx.recordUpdate(HypothesisUpdate::Kind::Role, Example{single, Query::atomicRole(s, kBootA, kBootB)});
      }
    }
  }
}

std::optional<Cycle> findCycle(const ABox& a) {
  const auto& roles = a.roleAssertions();
  std::vector<RoleAssertion> edges(roles.begin(), roles.end());
  for (const auto& e : edges)
    if (e.from == e.to) return Cycle{{e.from}, {e}};

  std::map<std::string, std::vector<UndirectedEdge>> adj;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].from].push_back({edges[i].to, i});
    adj[edges[i].to].push_back({edges[i].from, i});
  }

  std::optional<Cycle> best;
  std::vector<std::string> bestKey;
  for (const auto& [start, unused] : adj) {
    std::map<std::string, std::size_t> dist;
    std::map<std::string, std::pair<std::string, std::size_t>> parent;
    std::deque<std::string> queue{start};
    dist[start] = 0;
    auto pathTo = [&](std::string u) {
      std::vector<std::string> nodes;
      std::vector<std::size_t> via;
      while (u != start) {
        nodes.push_back(u);
        via.push_back(parent[u].second);
        u = parent[u].first;
      }
      std::reverse(nodes.begin(), nodes.end());
      std::reverse(via.begin(), via.end());
      return std::make_pair(nodes, via);
    };
    while (!queue.empty()) {
      std::string u = queue.front();
      queue.pop_front();
      if (best && 2 * dist[u] > best->nodes.size()) break;
      for (const auto& [v, ei] : adj[u]) {
        if (u != start && parent[u].second == ei) continue;
        if (dist.count(v) == 0) {
          dist[v] = dist[u] + 1;
          parent[v] = {u, ei};
          queue.push_back(v);
          continue;
        }
        auto [pu, eu] = pathTo(u);
        auto [pv, ev] = pathTo(v);
        std::set<std::string> seen(pu.begin(), pu.end());
        bool disjoint = std::none_of(pv.begin(), pv.end(), [&](const std::string& x) { return seen.count(x) != 0; });
        if (!disjoint) continue;
        std::vector<std::string> nodes{start};
        std::vector<RoleAssertion> as;
        for (std::size_t i = 0; i < pu.size(); ++i) {
          nodes.push_back(pu[i]);
          as.push_back(edges[eu[i]]);
        }
        as.push_back(edges[ei]);
        for (std::size_t i = pv.size(); i-- > 0;) {
          nodes.push_back(pv[i]);
          as.push_back(edges[ev[i]]);
        }
        auto key = sortedNodes(nodes);
        if (!best || nodes.size() < best->nodes.size() || (nodes.size() == best->nodes.size() && key < bestKey)) {
          best = normalizeCycle(nodes, as);
          bestKey = key;
        }
      }
    }
  }
  return best;
}

ABox unfoldCycle(const ABox& a, const Cycle& c, std::map<std::string, std::string>* origin) {
  std::size_t k = c.nodes.size();
  if (k == 0 || c.assertions.size() != k) throw StructuralError("malformed cycle");
  for (std::size_t i = 0; i < k; ++i) {
    const auto& as = c.assertions[i];
    const auto& x = c.nodes[i];
    const auto& y = c.nodes[(i + 1) % k];
    if (!a.contains(as)) throw StructuralError("cycle assertion is not in the ABox");
    if (!((as.from == x && as.to == y) || (as.from == y && as.to == x)))
      throw StructuralError("cycle assertions do not join consecutive nodes");
  }
  const RoleAssertion& first = c.assertions[0];
  if (first.from != c.nodes[0]) throw StructuralError("first cycle assertion must leave the first node");

  ABox out = a;
  out.remove(first);
  std::set<std::string> taken = out.individuals();
  std::set<std::string> members(c.nodes.begin(), c.nodes.end());
  std::map<std::string, std::string> hat;
  for (const auto& n : c.nodes) {
    if (hat.count(n) != 0) continue;
    std::string fresh = freshName(n + "_", taken);
    taken.insert(fresh);
    hat[n] = fresh;
    out.declare(fresh);
    if (origin != nullptr) {
      auto it = origin->find(n);
      (*origin)[fresh] = it == origin->end() ? n : it->second;
    }
  }
  ABox base = out;
  for (const auto& ca : base.conceptAssertions())
    if (members.count(ca.individual) != 0) out.addConcept(ca.name, hat[ca.individual]);
  for (const auto& ra : base.roleAssertions()) {
    if (members.count(ra.from) == 0) continue;
    std::string to = members.count(ra.to) != 0 ? hat[ra.to] : ra.to;
    out.addRole(ra.role, hat[ra.from], to);
  }
  const std::string& a1 = k == 1 ? c.nodes[0] : c.nodes[1];
  out.addRole(first.role, c.nodes[0], hat[a1]);
  out.addRole(first.role, hat[c.nodes[0]], a1);
  return out;
}

MinimizeResult minimize(LearnerContext& ctx, const ABox& a, const TBox& h,
                        const std::optional<ConceptAssertion>& preferred, const std::set<std::string>& clones) {
  Reasoner hr(h);
  MinimizeResult res;
  res.abox = saturateAbox(hr, a, ctx.signature());
  const ABox& sat = res.abox;

  auto qualifies = [&](const ConceptAssertion& p) {
    if (sat.individuals().count(p.individual) == 0 || sat.contains(p)) return false;
    return ctx.ask(sat, Query::atomic(p.name, p.individual));
  };
  if (preferred && qualifies(*preferred)) res.target = *preferred;
  if (!res.target) {
    for (const auto& ind : sat.individuals()) {
      for (const auto& b : ctx.signature().concepts) {
        ConceptAssertion p{b, ind};
        if (qualifies(p)) {
          res.target = p;
          break;
        }
      }
      if (res.target) break;
    }
  }
  if (!res.target) return res;
  Query goal = Query::atomic(res.target->name, res.target->individual);

  std::vector<std::string> order;
  for (const auto& c : clones)
    if (sat.individuals().count(c) != 0) order.push_back(c);
  for (const auto& ind : sat.individuals())
    if (clones.count(ind) == 0) order.push_back(ind);
  for (const auto& ind : order) {
    if (ind == res.target->individual) continue;
    ABox smaller = res.abox.withoutIndividual(ind);
    if (ctx.ask(smaller, goal)) res.abox = std::move(smaller);
  }
  auto roles = res.abox.roleAssertions();
  for (const auto& ra : roles) {
    ABox smaller = res.abox;
    smaller.remove(ra);
    if (ctx.ask(smaller, goal)) res.abox = std::move(smaller);
  }
  res.abox.declare(res.target->individual);
  return res;
}

TreeShapeResult treeShape(LearnerContext& ctx, const ABox& a, const TBox& h, const ConceptAssertion& counterexample) {
  std::map<std::string, std::string> origin;
  auto cloneSet = [&] {
    std::set<std::string> s;
    for (const auto& [k, v] : origin) s.insert(k);
    return s;
  };
  MinimizeResult cur = minimize(ctx, a, h, counterexample);
  if (!cur.target) throw ContractViolation("counterexample " + counterexample.name + "(" + counterexample.individual +
                                           ") is not a positive counterexample");
  TreeShapeResult out;
  out.individualCounts.push_back(cur.abox.individuals().size());
  std::size_t rounds = 0;
  while (auto cycle = findCycle(cur.abox)) {
    if (++rounds > ctx.options().maxTreeShapeRounds)
      throw ContractViolation("tree shaping did not terminate within the round limit");
    ABox unfolded = unfoldCycle(cur.abox, *cycle, &origin);
    MinimizeResult next = minimize(ctx, unfolded, h, cur.target, cloneSet());
    if (!next.target) throw ContractViolation("unfolding lost every positive counterexample");
    cur = std::move(next);
    out.individualCounts.push_back(cur.abox.individuals().size());
  }
  out.abox = std::move(cur.abox);
  out.target = *cur.target;
  ctx.stats().treeShapeCounts.push_back(out.individualCounts);
  return out;
}

void learnFromAtomicCounterexample(LearnerContext& ctx, TBox& h, const ABox& a, const ConceptAssertion& counterexample) {
  TreeShapeResult ts = treeShape(ctx, a, h, counterexample);
  const std::string& root = ts.target.individual;
  Concept lhs = conceptOfRootedAbox(ts.abox, root);
  Reasoner hr(h);
  for (const auto& b : ctx.signature().concepts) {
    Query q = Query::atomic(b, root);
    if (!ctx.ask(ts.abox, q) || hr.entails(ts.abox, q)) continue;
    h.addConceptInclusion(ConceptInclusion{lhs, Concept::atom(b)});
    ctx.stats().treeShapeExamples.push_back(Example{ts.abox, q});
    ctx.recordUpdate(HypothesisUpdate::Kind::TreeShape, Example{ts.abox, q});
    ctx.setHypothesis(h);
    return;
  }
  throw ContractViolation("tree-shaped ABox yields no new consequence");
}

namespace {

TBox runAQ(LearnerContext& ctx, bool membershipOnly) {
  TBox h = bootstrapAtomic(ctx);
  const ABox& a0 = ctx.framework().abox;
  while (true) {
    ++ctx.stats().iterations;
    std::optional<ConceptAssertion> ce;
    if (membershipOnly) {
      Reasoner hr(h);
      RegularModel m = hr.model(a0);
      for (const auto& ind : a0.individuals()) {
        for (const auto& b : ctx.signature().concepts) {
          Query q = Query::atomic(b, ind);
          if (!hr.entails(m, q) && ctx.ask(a0, q)) {
            ce = ConceptAssertion{b, ind};
            break;
          }
        }
        if (ce) break;
      }
    } else {
      auto ex = ctx.equivalence(h);
      if (!ex) break;
      const Query& q = ex->query;
      if (q.isRoleQuery()) {
        std::size_t before = h.roleInclusions().size();
        learnRoleInclusions(ctx, h);
        if (h.roleInclusions().size() == before) throw ContractViolation("role counterexample teaches nothing");
        ctx.setHypothesis(h);
        continue;
      }
      if (!q.isConceptQuery() || !q.queryConcept().isAtom())
        throw ContractViolation("AQ learner received a non-atomic counterexample " + q.str());
      ce = ConceptAssertion{q.queryConcept().name(), q.individual()};
      learnFromAtomicCounterexample(ctx, h, ex->abox, *ce);
      continue;
    }
    if (!ce) break;
    learnFromAtomicCounterexample(ctx, h, a0, *ce);
  }
  ctx.setHypothesis(h);
  return h;
}

}  // namespace

TBox learnAQ(LearnerContext& ctx) { return runAQ(ctx, ctx.options().membershipOnly); }

TBox learnAtomicPhase(LearnerContext& ctx) { return runAQ(ctx, true); }

LearnResult learnAQ(const Framework& fw, MembershipOracle& mq, EquivalenceOracle* eq, const LearnerOptions& options) {
  LearnerContext ctx(fw, mq, eq, options);
  TBox h = learnAQ(ctx);
  return LearnResult{h, ctx.stats()};
}

}  // namespace elh
