#include "elh/updates.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <unordered_set>

#include "elh/errors.hpp"
#include "elh/reasoner.hpp"
#include "elh/text_format.hpp"

namespace elh {

std::string toString(Preservation p) { return p == Preservation::Preserved ? "PRESERVED" : "NOT_PRESERVED"; }

Preservation checkBisimPreservation(const TBox& t, const TBox& h, const ABox& a0, const ABox& a) {
  std::set<std::string> roles = t.signature().roles;
  for (const auto& r : h.signature().roles) roles.insert(r);
  for (const auto& r : roles)
    for (const auto& s : roles)
      if (r != s && entailsRI(t, {r, s}) != entailsRI(h, {r, s}))
        throw ContractViolation("target and hypothesis disagree on " + r + " [= " + s);
  if (!inseparable(t, h, a0, QueryLanguage::IQ).inseparable)
    throw ContractViolation("hypothesis is not IQ-inseparable from the target on the original ABox");

  auto symbols = std::make_shared<SymbolTable>();
  Interpretation before = canonicalAboxModel(a0, symbols);
  Interpretation after = canonicalAboxModel(a, symbols);
  for (const auto& b : a.individuals()) {
    int e = after.find(b);
    bool matched = false;
    for (const auto& orig : a0.individuals()) {
      if (bisimilar(after, e, before, before.find(orig))) {
        matched = true;
        break;
      }
    }
    if (!matched) return Preservation::NotApplicable;
  }
  if (!inseparable(t, h, a, QueryLanguage::IQ).inseparable)
    throw ContractViolation("bisimilar update is separable: " + formatABox(a));
  return Preservation::Preserved;
}

namespace {

const char* kInd = "a";
const char* kSucc = "b";

class Generaliser {
 public:
  Generaliser(LearnerContext& ctx, GeneraliseStats& stats) : ctx_(ctx), stats_(stats) {}

  Concept run(Concept lhs, const std::string& target) {
    while (true) {
      ConceptTree t = treeOfConcept(lhs);
      if (auto next = conceptStep(t, target)) {
        lhs = *next;
        ++stats_.steps;
        continue;
      }
      if (auto next = roleStep(t, target)) {
        lhs = *next;
        ++stats_.steps;
        continue;
      }
      return lhs;
    }
  }

 private:
  bool ask(const ABox& a, const Query& q) {
    std::size_t before = ctx_.stats().membershipQueries;
    bool answer = ctx_.ask(a, q);
    stats_.membershipQueries += ctx_.stats().membershipQueries - before;
    return answer;
  }

  bool entailed(const Concept& lhs, const std::string& target) {
    ConceptAbox ca = aboxOfConcept(lhs);
    return ask(ca.abox, Query::atomic(target, ca.root));
  }

  bool conceptBelow(const std::string& x, const std::string& y) {
    ABox single;
    single.addConcept(x, kInd);
    return ask(single, Query::atomic(y, kInd));
  }

  bool roleBelow(const std::string& r, const std::string& s) {
    ABox single;
    single.addRole(r, kInd, kSucc);
    return ask(single, Query::atomicRole(s, kInd, kSucc));
  }

  std::optional<Concept> conceptStep(const ConceptTree& t, const std::string& target) {
    for (int v : t.bfsOrder()) {
      for (const auto& b : t.labels[static_cast<std::size_t>(v)]) {
        ConceptTree dropped = t;
        dropped.labels[static_cast<std::size_t>(v)].erase(b);
        Concept c = conceptOfTree(dropped).normalized();
        if (entailed(c, target)) return c;
        for (const auto& up : ctx_.signature().concepts) {
          if (up == b || !conceptBelow(b, up) || conceptBelow(up, b)) continue;
          ConceptTree raised = dropped;
          raised.labels[static_cast<std::size_t>(v)].insert(up);
          Concept d = conceptOfTree(raised).normalized();
          if (entailed(d, target)) return d;
        }
      }
    }
    return std::nullopt;
  }

  std::optional<Concept> roleStep(const ConceptTree& t, const std::string& target) {
    for (std::size_t i = 0; i < t.edges.size(); ++i) {
      const std::string& r = t.edges[i].role;
      for (const auto& s : ctx_.signature().roles) {
        if (s == r || !roleBelow(r, s) || roleBelow(s, r)) continue;
        ConceptTree raised = t;
        raised.edges[i].role = s;
        Concept c = conceptOfTree(raised).normalized();
        if (entailed(c, target)) return c;
      }
    }
    return std::nullopt;
  }

  LearnerContext& ctx_;
  GeneraliseStats& stats_;
};

}  // namespace

TBox generalise(LearnerContext& ctx, const TBox& h, GeneraliseStats* stats) {
  GeneraliseStats local;
  GeneraliseStats& s = stats != nullptr ? *stats : local;
  Generaliser g(ctx, s);
  TBox out = h;
  for (std::size_t i = 0; i < out.conceptInclusions().size(); ++i) {
    ConceptInclusion ci = out.conceptInclusions()[i];
    if (ci.lhs.isAtom() || !ci.rhs.isAtom()) continue;
    Concept lhs = g.run(ci.lhs, ci.rhs.name());
    if (lhs != ci.lhs) out.replaceConceptInclusion(i, ConceptInclusion{lhs, ci.rhs});
  }
  return out;
}

bool linearDerivation(const TBox& t, const std::string& x, const std::string& y, bool isRole) {
  if (x == y) return true;
  Signature sig = t.signature();
  if (isRole) {
    if (!entailsRI(t, {x, y})) return false;
    for (const auto& z : sig.roles)
      if (entailsRI(t, {x, z}) && !entailsRI(t, {z, y})) return false;
    return true;
  }
  Concept cx = Concept::atom(x);
  Concept cy = Concept::atom(y);
  if (!entailsCI(t, {cx, cy})) return false;
  for (const auto& z : sig.concepts) {
    Concept cz = Concept::atom(z);
    if (entailsCI(t, {cx, cz}) && !entailsCI(t, {cz, cy})) return false;
  }
  return true;
}

namespace {

// Reflexive-transitive closure of the linear-derivation relation over names.
class Reach {
 public:
  Reach(const TBox& t, bool isRole) {
    Signature sig = t.signature();
    const auto& names = isRole ? sig.roles : sig.concepts;
    for (const auto& x : names)
      for (const auto& y : names)
        if (x != y && linearDerivation(t, x, y, isRole)) step_[x].push_back(y);
  }

  const std::vector<std::string>& next(const std::string& x) const {
    static const std::vector<std::string> none;
    auto it = step_.find(x);
    return it == step_.end() ? none : it->second;
  }

  bool reaches(const std::string& x, const std::string& y) {
    if (x == y) return true;
    auto& row = cache_[x];
    if (row.empty()) {
      std::deque<std::string> queue{x};
      row.insert(x);
      while (!queue.empty()) {
        std::string u = queue.front();
        queue.pop_front();
        for (const auto& v : next(u))
          if (row.insert(v).second) queue.push_back(v);
      }
    }
    return row.count(y) != 0;
  }

 private:
  std::map<std::string, std::vector<std::string>> step_;
  std::map<std::string, std::set<std::string>> cache_;
};

// A surjection from `from` onto `to` along `edge` exists iff every source has
// an edge and the targets can be matched to distinct sources.
bool surjects(std::size_t from, std::size_t to, const std::function<bool(std::size_t, std::size_t)>& edge) {
  std::vector<std::vector<std::size_t>> adj(to);
  std::vector<bool> hasTarget(from, false);
  for (std::size_t j = 0; j < to; ++j)
    for (std::size_t i = 0; i < from; ++i)
      if (edge(i, j)) {
        adj[j].push_back(i);
        hasTarget[i] = true;
      }
  for (bool b : hasTarget)
    if (!b) return false;
  std::vector<long> owner(from, -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t j, std::vector<bool>& seen) {
    for (std::size_t i : adj[j]) {
      if (seen[i]) continue;
      seen[i] = true;
      if (owner[i] < 0 || augment(static_cast<std::size_t>(owner[i]), seen)) {
        owner[i] = static_cast<long>(j);
        return true;
      }
    }
    return false;
  };
  for (std::size_t j = 0; j < to; ++j) {
    std::vector<bool> seen(from, false);
    if (!augment(j, seen)) return false;
  }
  return true;
}

}  // namespace

bool inGeneralisedClosure(const TBox& t, const ABox& a0, const ABox& a) {
  if (a0.individuals() != a.individuals()) return false;
  Reach concepts(t, false);
  Reach roles(t, true);

  std::map<std::string, std::pair<std::vector<std::string>, std::vector<std::string>>> byInd;
  for (const auto& ca : a0.conceptAssertions()) byInd[ca.individual].first.push_back(ca.name);
  for (const auto& ca : a.conceptAssertions()) byInd[ca.individual].second.push_back(ca.name);
  for (auto& [ind, sides] : byInd) {
    const auto& [src, dst] = sides;
    if (!surjects(src.size(), dst.size(), [&](std::size_t i, std::size_t j) { return concepts.reaches(src[i], dst[j]); }))
      return false;
  }

  std::map<std::pair<std::string, std::string>, std::pair<std::vector<std::string>, std::vector<std::string>>> byPair;
  for (const auto& ra : a0.roleAssertions()) byPair[{ra.from, ra.to}].first.push_back(ra.role);
  for (const auto& ra : a.roleAssertions()) byPair[{ra.from, ra.to}].second.push_back(ra.role);
  for (auto& [pair, sides] : byPair) {
    const auto& [src, dst] = sides;
    if (!surjects(src.size(), dst.size(), [&](std::size_t i, std::size_t j) { return roles.reaches(src[i], dst[j]); }))
      return false;
  }
  return true;
}

std::vector<ABox> enumerateClosure(const TBox& t, const ABox& a0, std::size_t cap) {
  Reach concepts(t, false);
  Reach roles(t, true);
  std::vector<ABox> out;
  std::unordered_set<std::string> seen;
  std::deque<ABox> queue{a0};
  seen.insert(formatABox(a0));
  while (!queue.empty() && out.size() < cap) {
    ABox x = queue.front();
    queue.pop_front();
    out.push_back(x);
    auto push = [&](ABox y) {
      if (seen.insert(formatABox(y)).second) queue.push_back(std::move(y));
    };
    for (const auto& ca : x.conceptAssertions()) {
      for (const auto& up : concepts.next(ca.name)) {
        ABox y = x;
        y.remove(ca);
        y.addConcept(up, ca.individual);
        push(std::move(y));
      }
    }
    for (const auto& ra : x.roleAssertions()) {
      for (const auto& up : roles.next(ra.role)) {
        ABox y = x;
        y.remove(ra);
        y.addRole(up, ra.from, ra.to);
        push(std::move(y));
      }
    }
  }
  return out;
}

ClosureOracle::ClosureOracle(OracleSession& session, std::vector<ABox> aboxes)
    : session_(session), aboxes_(std::move(aboxes)) {
  if (aboxes_.empty()) aboxes_.push_back(session.framework().abox);
}

std::optional<Example> ClosureOracle::inseparabilityQuery(const TBox& h) {
  return session_.inseparabilityQueryOver(h, aboxes_);
}

UpdateLearnResult learnWithUpdates(const Framework& fw, MembershipOracle& mq, EquivalenceOracle& eq,
                                   const LearnerOptions& options) {
  if (fw.language != QueryLanguage::IQ) throw ConfigurationError("learning with updates requires IQ");
  if (!fw.abox.signature().includes(fw.signature))
    throw ConfigurationError("target signature is not contained in the signature of the fixed ABox");
  LearnerContext ctx(fw, mq, &eq, options);
  UpdateLearnResult result;
  TBox h = options.initialHypothesis ? *options.initialHypothesis : learnAtomicPhase(ctx);
  h = generalise(ctx, h, &result.generalisation);
  ctx.setHypothesis(h);
  while (auto ex = ctx.equivalence(h)) {
    ++ctx.stats().iterations;
    learnFromInstanceCounterexample(ctx, h, *ex);
    h = generalise(ctx, h, &result.generalisation);
    ctx.setHypothesis(h);
  }
  result.hypothesis = h;
  result.stats = ctx.stats();
  return result;
}

}  // namespace elh
