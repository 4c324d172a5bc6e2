#include "generators.hpp"

namespace elh::testgen {

Generator::Generator(std::uint64_t seed, GeneratorConfig config) : config_(config), rng_(seed) {}

std::size_t Generator::pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

bool Generator::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

Concept Generator::randomConcept(const std::vector<std::string>& names, const std::vector<std::string>& roles,
                           std::size_t depth) {
  std::size_t parts = 1 + pick(2);
  std::vector<Concept> out;
  for (std::size_t i = 0; i < parts; ++i) {
    if (depth > 0 && !roles.empty() && coin(0.5))
      out.push_back(Concept::exists(roles[pick(roles.size())], coin(0.3) ? Concept::top()
                                                                          : randomConcept(names, roles, depth - 1)));
    else
      out.push_back(Concept::atom(names[pick(names.size())]));
  }
  return Concept::conj(out).normalized();
}

Instance Generator::instance() {
  static const std::vector<std::string> conceptPool{"A", "B", "C", "D", "E"};
  static const std::vector<std::string> rolePool{"r", "s", "t"};
  while (true) {
    std::size_t nr = 1 + pick(2);
    std::size_t nc = 1 + pick(std::min<std::size_t>(4, config_.maxSignature - nr));
    std::vector<std::string> names(conceptPool.begin(), conceptPool.begin() + static_cast<long>(nc));
    std::vector<std::string> roles(rolePool.begin(), rolePool.begin() + static_cast<long>(nr));

    Instance inst;
    std::size_t axioms = 2 + pick(5);
    for (std::size_t i = 0; i < axioms; ++i) {
      std::size_t depth = 1 + pick(config_.maxDepth);
      const std::string& a = names[pick(nc)];
      Concept c = randomConcept(names, roles, depth);
      std::vector<Concept> rest;
      for (const auto& part : c.conjuncts())
        if (!(part.isAtom() && part.name() == a)) rest.push_back(part);
      if (rest.empty()) continue;
      c = Concept::conj(rest).normalized();
      if (coin(0.5))
        inst.tbox.addConceptInclusion(ConceptInclusion{Concept::atom(a), c});
      else
        inst.tbox.addConceptInclusion(ConceptInclusion{c, Concept::atom(a)});
    }
    for (std::size_t i = 0; i + 1 < nr; ++i)
      if (coin(0.4)) inst.tbox.addRoleInclusion(RoleInclusion{roles[i], roles[i + 1 + pick(nr - i - 1)]});
    if (!inst.tbox.isTerminology() || size(inst.tbox) > config_.maxTBoxSize) continue;
    std::vector<ConceptInclusion> cis = inst.tbox.conceptInclusions();
    bool trivial = false;
    for (const auto& ci : cis)
      if (ci.lhs == ci.rhs) trivial = true;
    if (trivial) continue;

    std::size_t ni = 2 + pick(config_.maxIndividuals - 1);
    std::vector<std::string> inds;
    for (std::size_t i = 0; i < ni; ++i) inds.push_back("a" + std::to_string(i + 1));
    std::size_t na = 3 + pick(config_.maxAssertions - 2);
    if (config_.coverSignature) {
      Signature sig = inst.tbox.signature();
      for (const auto& c : sig.concepts) inst.abox.addConcept(c, inds[pick(ni)]);
      for (const auto& r : sig.roles) inst.abox.addRole(r, inds[pick(ni)], inds[pick(ni)]);
    }
    for (std::size_t i = inst.abox.assertionCount(); i < na; ++i) {
      if (coin(0.4))
        inst.abox.addConcept(names[pick(nc)], inds[pick(ni)]);
      else
        inst.abox.addRole(roles[pick(nr)], inds[pick(ni)], inds[pick(ni)]);
    }
    for (const auto& i : inds) inst.abox.declare(i);
    return inst;
  }
}

}  // namespace elh::testgen
