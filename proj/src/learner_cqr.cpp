#include <algorithm>
#include <functional>

#include "elh/errors.hpp"
#include "elh/learner.hpp"

namespace elh {

namespace {

void normalize(ConjunctiveQuery& q) {
  std::sort(q.atoms.begin(), q.atoms.end());
  q.atoms.erase(std::unique(q.atoms.begin(), q.atoms.end()), q.atoms.end());
}

ConjunctiveQuery substitute(const ConjunctiveQuery& q, const std::string& from, const std::string& to,
                            bool toIndividual) {
  ConjunctiveQuery out = q;
  for (auto& atom : out.atoms) {
    if (atom.first == from) atom.first = to;
    if (atom.isRole && atom.second == from) atom.second = to;
  }
  out.variables.erase(std::remove(out.variables.begin(), out.variables.end(), from), out.variables.end());
  if (toIndividual && std::find(out.individuals.begin(), out.individuals.end(), to) == out.individuals.end())
    out.individuals.push_back(to);
  normalize(out);
  return out;
}

bool askQuery(LearnerContext& ctx, const ConjunctiveQuery& q) {
  return ctx.ask(ctx.framework().abox, Query::conjunctive(q));
}

// Tree unravelling of the variable part of q below x, cut at the variable count.
Concept conceptOfVariable(const ConjunctiveQuery& q, const std::string& x) {
  std::size_t limit = q.variables.size();
  std::function<Concept(const std::string&, std::size_t)> build = [&](const std::string& v, std::size_t depth) {
    std::vector<Concept> parts;
    for (const auto& atom : q.atoms) {
      if (!atom.isRole && atom.first == v) parts.push_back(Concept::atom(atom.predicate));
      if (atom.isRole && atom.first == v && q.isVariable(atom.second) && depth < limit)
        parts.push_back(Concept::exists(atom.predicate, build(atom.second, depth + 1)));
    }
    return Concept::conj(parts).normalized();
  };
  return build(x, 0);
}

}  // namespace

ConjunctiveQuery individualSaturate(LearnerContext& ctx, const ConjunctiveQuery& q) {
  ConjunctiveQuery cur = q;
  normalize(cur);
  const auto inds = ctx.framework().abox.individuals();
  for (const auto& x : q.variables) {
    for (const auto& b : inds) {
      ConjunctiveQuery next = substitute(cur, x, b, true);
      if (askQuery(ctx, next)) {
        cur = std::move(next);
        break;
      }
    }
  }
  return cur;
}

ConjunctiveQuery mergeVariables(LearnerContext& ctx, const ConjunctiveQuery& q) {
  ConjunctiveQuery cur = q;
  normalize(cur);
  for (std::size_t i = 0; i < cur.variables.size(); ++i) {
    std::size_t j = i + 1;
    while (j < cur.variables.size()) {
      ConjunctiveQuery next = substitute(cur, cur.variables[j], cur.variables[i], false);
      if (askQuery(ctx, next))
        cur = std::move(next);
      else
        ++j;
    }
  }
  return cur;
}

ConjunctiveQuery queryRoleSaturate(LearnerContext& ctx, const ConjunctiveQuery& q, const TBox& h) {
  Reasoner hr(h);
  ConjunctiveQuery cur = q;
  normalize(cur);
  for (std::size_t k = 0; k < cur.atoms.size(); ++k) {
    if (!cur.atoms[k].isRole) continue;
    bool found = true;
    while (found) {
      found = false;
      for (const auto& s : ctx.signature().roles) {
        const std::string r = cur.atoms[k].predicate;
        if (s == r || !hr.roleSubsumes(s, r) || hr.roleSubsumes(r, s)) continue;
        ConjunctiveQuery next = cur;
        next.atoms[k].predicate = s;
        if (askQuery(ctx, next)) {
          cur = std::move(next);
          found = true;
          break;
        }
      }
    }
  }
  normalize(cur);
  return cur;
}

Query cqToIq(LearnerContext& ctx, const ConjunctiveQuery& q, const TBox& h) {
  const ABox& a0 = ctx.framework().abox;
  if (!q.isRooted()) throw UnsupportedQueryError("counterexample query is not rooted: " + q.str());
  std::size_t before = ctx.stats().membershipQueries;
  ConjunctiveQuery cur = q;
  normalize(cur);
  while (true) {
    ConjunctiveQuery next = queryRoleSaturate(ctx, mergeVariables(ctx, individualSaturate(ctx, cur)), h);
    if (next.str() == cur.str()) break;
    cur = std::move(next);
  }
  std::size_t qs = size(Query::conjunctive(q));
  ++ctx.stats().conversions;
  ctx.stats().conversionRecords.push_back(ConversionRecord{
      ctx.stats().membershipQueries - before, size(a0) * qs + qs * qs + qs * ctx.signature().size()});

  Reasoner hr(h);
  RegularModel m = hr.model(a0);
  auto separates = [&](const Query& iq) { return !hr.entails(m, iq) && ctx.ask(a0, iq); };

  for (const auto& atom : cur.atoms) {
    if (cur.isVariable(atom.first) || (atom.isRole && cur.isVariable(atom.second))) continue;
    Query iq = atom.isRole ? Query::instanceRole(atom.predicate, atom.first, atom.second)
                           : Query::instance(Concept::atom(atom.predicate), atom.first);
    if (separates(iq)) return iq;
  }
  for (const auto& atom : cur.atoms) {
    if (!atom.isRole || cur.isVariable(atom.first) || !cur.isVariable(atom.second)) continue;
    Query iq = Query::instance(Concept::exists(atom.predicate, conceptOfVariable(cur, atom.second)), atom.first);
    if (separates(iq)) return iq;
  }
  for (const auto& x : cur.variables) {
    Concept cx = conceptOfVariable(cur, x);
    for (const auto& r : ctx.signature().roles)
      for (const auto& ind : a0.individuals()) {
        Query iq = Query::instance(Concept::exists(r, cx), ind);
        if (separates(iq)) return iq;
      }
  }
  throw ContractViolation("no instance query counterexample found for " + q.str());
}

TBox learnCQr(LearnerContext& ctx) {
  TBox h = ctx.options().initialHypothesis ? *ctx.options().initialHypothesis : learnAtomicPhase(ctx);
  ctx.setHypothesis(h);
  while (auto ex = ctx.equivalence(h)) {
    ++ctx.stats().iterations;
    ConjunctiveQuery cq = ex->query.asConjunctive();
    Query iq = cqToIq(ctx, cq, h);
    learnFromInstanceCounterexample(ctx, h, Example{ex->abox, iq});
    ctx.setHypothesis(h);
  }
  return h;
}

LearnResult learnCQr(const Framework& fw, MembershipOracle& mq, EquivalenceOracle& eq, const LearnerOptions& options) {
  LearnerContext ctx(fw, mq, &eq, options);
  TBox h = learnCQr(ctx);
  return LearnResult{h, ctx.stats()};
}

}  // namespace elh
