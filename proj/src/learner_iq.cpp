#include <algorithm>

#include "elh/errors.hpp"
#include "elh/learner.hpp"

namespace elh {

namespace {

const char* kInd = "a";
constexpr std::size_t kSwitchLimit = 1000;

ABox singleton(const std::string& name) {
  ABox a;
  a.addConcept(name, kInd);
  return a;
}

bool implies(LearnerContext& ctx, const std::string& name, const Concept& c) {
  return ctx.ask(singleton(name), Query::instance(c.normalized(), kInd));
}

bool implies(LearnerContext& ctx, const std::string& name, const ConceptTree& t) {
  return implies(ctx, name, conceptOfTree(t));
}

bool equivalentNames(LearnerContext& ctx, const std::string& a, const std::string& b) {
  if (a == b) return true;
  return ctx.ask(singleton(a), Query::atomic(b, kInd)) && ctx.ask(singleton(b), Query::atomic(a, kInd));
}

Concept finish(const ConceptTree& t) { return conceptOfTree(t).normalized(); }

// Like essentialize, but also reports the last verified right-hand side for
// the original name when the left-hand side switches.
LearnedInclusion essentializeTracked(LearnerContext& ctx, LearnedInclusion ci, const TBox& h,
                                     std::optional<Concept>* lastForOriginal) {
  const std::string original = ci.name;
  ci.rhs = ci.rhs.normalized();
  std::size_t switches = 0;
  while (true) {
    bool changed = conceptSaturate(ctx, ci.name, ci.rhs);
    changed = roleSaturate(ctx, ci.name, ci.rhs, h) || changed;
    changed = siblingMerge(ctx, ci.name, ci.rhs) || changed;
    bool decomposed = false;
    auto next = decomposeRight(ctx, ci.name, ci.rhs, h, &decomposed);
    if (next) {
      if (++switches > kSwitchLimit) throw ContractViolation("essentialization did not terminate");
      if (ci.name == original && lastForOriginal != nullptr && !lastForOriginal->has_value()) *lastForOriginal = ci.rhs;
      ci = *next;
      ci.rhs = ci.rhs.normalized();
      continue;
    }
    if (!changed && !decomposed) return ci;
  }
}

std::size_t vertexCount(const Concept& c) { return treeOfConcept(c).vertexCount(); }

}  // namespace

LearnedInclusion reduceCounterexample(LearnerContext& ctx, const ABox& a, const Concept& c, const std::string& ind,
                                      const TBox& h) {
  Reasoner hr(h);
  ABox sat = saturateAbox(hr, a, ctx.signature());
  Concept cur = c.normalized();
  std::string at = ind;
  for (std::size_t depth = 0; depth <= c.depth(); ++depth) {
    std::optional<Concept> chosen;
    for (const auto& d : cur.conjuncts()) {
      if (!d.isExists()) continue;
      Query q = Query::instance(d, at);
      if (ctx.ask(a, q) && !hr.entails(sat, q)) {
        chosen = d;
        break;
      }
    }
    if (!chosen) throw ContractViolation("no existential conjunct separates at " + at);
    const std::string& r = chosen->role();
    const Concept& filler = chosen->filler();
    std::optional<std::string> successor;
    for (const auto& ra : sat.roleAssertions()) {
      if (ra.from != at || !hr.roleSubsumes(ra.role, r)) continue;
      if (ctx.ask(a, Query::instance(filler, ra.to))) {
        successor = ra.to;
        break;
      }
    }
    if (successor) {
      cur = filler.normalized();
      at = *successor;
      continue;
    }
    for (const auto& ca : sat.conceptAssertions()) {
      if (ca.individual != at) continue;
      if (implies(ctx, ca.name, *chosen)) return LearnedInclusion{ca.name, *chosen};
    }
    throw ContractViolation("no concept name at " + at + " implies " + chosen->str());
  }
  throw ContractViolation("counterexample reduction exceeded the concept depth");
}

bool conceptSaturate(LearnerContext& ctx, const std::string& name, Concept& c) {
  ConceptTree t = treeOfConcept(c.normalized());
  bool changed = false;
  for (int v : t.bfsOrder()) {
    for (const auto& b : ctx.signature().concepts) {
      auto& label = t.labels[static_cast<std::size_t>(v)];
      if (label.count(b) != 0) continue;
      ConceptTree next = t;
      next.labels[static_cast<std::size_t>(v)].insert(b);
      if (implies(ctx, name, next)) {
        t = std::move(next);
        changed = true;
      }
    }
  }
  if (changed) c = finish(t);
  return changed;
}

bool roleSaturate(LearnerContext& ctx, const std::string& name, Concept& c, const TBox& h) {
  Reasoner hr(h);
  ConceptTree t = treeOfConcept(c.normalized());
  bool changed = false;
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    bool found = true;
    while (found) {
      found = false;
      for (const auto& s : ctx.signature().roles) {
        const std::string r = t.edges[e].role;
        if (s == r || !hr.roleSubsumes(s, r) || hr.roleSubsumes(r, s)) continue;
        ConceptTree next = t;
        next.edges[e].role = s;
        if (implies(ctx, name, next)) {
          t = std::move(next);
          changed = found = true;
          break;
        }
      }
    }
  }
  if (changed) c = finish(t);
  return changed;
}

bool siblingMerge(LearnerContext& ctx, const std::string& name, Concept& c) {
  ConceptTree t = treeOfConcept(c.normalized());
  bool changed = false;
  bool found = true;
  while (found) {
    found = false;
    auto kids = t.children();
    for (int v : t.bfsOrder()) {
      const auto& ks = kids[static_cast<std::size_t>(v)];
      for (std::size_t i = 0; i < ks.size() && !found; ++i) {
        for (std::size_t j = i + 1; j < ks.size() && !found; ++j) {
          if (ks[i].first != ks[j].first) continue;
          ConceptTree next = t.mergeSiblings(ks[i].second, ks[j].second);
          if (implies(ctx, name, next)) {
            t = std::move(next);
            changed = found = true;
          }
        }
      }
      if (found) break;
    }
  }
  if (changed) c = finish(t);
  return changed;
}

std::optional<LearnedInclusion> decomposeRight(LearnerContext& ctx, const std::string& name, Concept& c,
                                               const TBox& h, bool* changed) {
  Reasoner hr(h);
  ConceptTree t = treeOfConcept(c.normalized());
  auto kids = t.children();
  for (int v : t.bfsOrder()) {
    for (const auto& [role, child] : kids[static_cast<std::size_t>(v)]) {
      Concept sub = Concept::exists(role, finish(t.subtree(child)));
      for (const auto& a : t.labels[static_cast<std::size_t>(v)]) {
        if (v == t.root && equivalentNames(ctx, a, name)) continue;
        if (!implies(ctx, a, sub)) continue;
        if (!hr.entails(singleton(a), Query::instance(sub, kInd))) return LearnedInclusion{a, sub};
        c = finish(t.withoutSubtree(child));
        if (changed != nullptr) *changed = true;
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

LearnedInclusion essentialize(LearnerContext& ctx, LearnedInclusion ci, const TBox& h) {
  return essentializeTracked(ctx, std::move(ci), h, nullptr);
}

LearnedInclusion mergeEssential(LearnerContext& ctx, const std::string& name, const Concept& c1, const Concept& c2,
                                const TBox& h) {
  return essentialize(ctx, LearnedInclusion{name, Concept::conj({c1, c2})}, h);
}

namespace {

void recordDefinition(LearnerContext& ctx, const std::string& name, const Concept& rhs) {
  ABox single;
  single.addConcept(name, kInd);
  ctx.recordUpdate(HypothesisUpdate::Kind::Definition, Example{single, Query::instance(rhs, kInd)});
}

}  // namespace

void addEssential(LearnerContext& ctx, TBox& h, LearnedInclusion ci) {
  for (std::size_t guard = 0; guard < kSwitchLimit; ++guard) {
    auto def = h.definition(ci.name);
    if (!def) {
      h.addConceptInclusion(ConceptInclusion{Concept::atom(ci.name), ci.rhs});
      recordDefinition(ctx, ci.name, ci.rhs);
      ctx.stats().essentialSizes.push_back(size(ci.rhs));
      ctx.setHypothesis(h);
      return;
    }
    std::optional<Concept> before;
    LearnedInclusion merged =
        essentializeTracked(ctx, LearnedInclusion{ci.name, Concept::conj({*def, ci.rhs})}, h, &before);
    if (merged.name == ci.name) {
      ++ctx.stats().replacements;
      if (vertexCount(merged.rhs) <= vertexCount(*def)) ++ctx.stats().replacementGrowthViolations;
      h.setDefinition(ci.name, merged.rhs);
      recordDefinition(ctx, ci.name, merged.rhs);
      ctx.stats().essentialSizes.push_back(size(merged.rhs));
      ctx.setHypothesis(h);
      return;
    }
    if (before) {
      h.setDefinition(ci.name, Concept::conj({*def, *before}).normalized());
      recordDefinition(ctx, ci.name, *h.definition(ci.name));
    }
    ci = merged;
  }
  throw ContractViolation("merging essential inclusions did not terminate");
}

void learnFromInstanceCounterexample(LearnerContext& ctx, TBox& h, const Example& ex) {
  const Query& q = ex.query;
  if (q.isRoleQuery()) {
    std::size_t before = h.roleInclusions().size();
    learnRoleInclusions(ctx, h);
    if (h.roleInclusions().size() == before) throw ContractViolation("role counterexample teaches nothing");
    ctx.setHypothesis(h);
    return;
  }
  if (!q.isConceptQuery()) throw ContractViolation("expected an instance query counterexample: " + q.str());
  Reasoner hr(h);
  if (hr.entails(ex.abox, q)) throw ContractViolation("counterexample is already entailed by the hypothesis");
  const std::string& ind = q.individual();
  Concept c = q.queryConcept().normalized();

  ABox sat = saturateAbox(hr, ex.abox, ctx.signature());
  bool existential = false;
  for (const auto& d : c.conjuncts()) {
    Query dq = Query::instance(d, ind);
    if (!ctx.ask(ex.abox, dq) || hr.entails(sat, dq)) continue;
    if (d.isExists()) {
      existential = true;
      break;
    }
    if (d.isAtom()) {
      learnFromAtomicCounterexample(ctx, h, ex.abox, ConceptAssertion{d.name(), ind});
      return;
    }
  }
  if (!existential) throw ContractViolation("counterexample is not entailed by the target: " + q.str());
  LearnedInclusion ci = reduceCounterexample(ctx, ex.abox, c, ind, h);
  addEssential(ctx, h, essentialize(ctx, ci, h));
}

TBox learnIQ(LearnerContext& ctx) {
  TBox h = ctx.options().initialHypothesis ? *ctx.options().initialHypothesis : learnAtomicPhase(ctx);
  ctx.setHypothesis(h);
  while (auto ex = ctx.equivalence(h)) {
    ++ctx.stats().iterations;
    learnFromInstanceCounterexample(ctx, h, *ex);
    ctx.setHypothesis(h);
  }
  return h;
}

LearnResult learnIQ(const Framework& fw, MembershipOracle& mq, EquivalenceOracle& eq, const LearnerOptions& options) {
  LearnerContext ctx(fw, mq, &eq, options);
  TBox h = learnIQ(ctx);
  return LearnResult{h, ctx.stats()};
}

}  // namespace elh
