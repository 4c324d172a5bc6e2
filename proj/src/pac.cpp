#include "elh/pac.hpp"

#include <cmath>
#include <map>

#include "elh/errors.hpp"
#include "elh/reasoner.hpp"
#include "elh/text_format.hpp"
#include "json.hpp"

namespace elh {

std::size_t sampleCount(double eps, double delta, std::size_t i) {
  if (!(eps > 0 && eps < 1) || !(delta > 0 && delta < 1))
    throw ConfigurationError("eps and delta must lie in (0, 1)");
  double m = std::ceil((1.0 / eps) * (std::log(1.0 / delta) + static_cast<double>(i) * std::log(2.0)));
  return m < 1 ? 1 : static_cast<std::size_t>(m);
}

SampledEquivalenceOracle::SampledEquivalenceOracle(ExampleOracle examples, double eps, double delta)
    : examples_(std::move(examples)), eps_(eps), delta_(delta) {
  sampleCount(eps, delta, 1);
}

std::optional<Example> SampledEquivalenceOracle::inseparabilityQuery(const TBox& h) {
  std::size_t m = sampleCount(eps_, delta_, schedule_.size() + 1);
  schedule_.push_back(m);
  Reasoner hr(h);
  for (std::size_t j = 0; j < m; ++j) {
    LabeledExample e = examples_.draw();
    if (hr.entails(e.abox, e.query) != e.label) return Example{e.abox, e.query};
  }
  return std::nullopt;
}

PacResult pacFromExact(OracleSession& session, double eps, double delta, const Distribution& dist,
                       LearnerOptions options) {
  SampledEquivalenceOracle eq(session.exampleOracle(dist), eps, delta);
  options.membershipOnly = false;
  LearnResult r = learn(session.framework(), session, eq, options);
  return PacResult{r.hypothesis, eq.schedule(), eq.samplesUsed(), r.stats};
}

double trueError(const TBox& h, const TBox& t, const ABox&, const Distribution& dist) {
  dist.validate();
  Reasoner hr(h);
  Reasoner tr(t);
  double err = 0;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    const Example& e = dist.support[i];
    if (hr.entails(e.abox, e.query) != tr.entails(e.abox, e.query)) err += dist.weights[i];
  }
  return err;
}

std::vector<Example> enumerateExamples(const ABox& a0, const Signature& sig, QueryLanguage lang, std::size_t cap) {
  std::vector<Query> queries;
  auto inds = a0.individuals();
  bool instance = lang != QueryLanguage::AQ;
  for (const auto& a : inds)
    for (const auto& name : sig.concepts)
      queries.push_back(instance ? Query::instance(Concept::atom(name), a) : Query::atomic(name, a));
  for (const auto& r : sig.roles)
    for (const auto& a : inds)
      for (const auto& b : inds)
        queries.push_back(instance ? Query::instanceRole(r, a, b) : Query::atomicRole(r, a, b));
  if (instance) {
    for (const auto& a : inds) {
      for (const auto& r : sig.roles) {
        queries.push_back(Query::instance(Concept::exists(r, Concept::top()), a));
        for (const auto& name : sig.concepts)
          queries.push_back(Query::instance(Concept::exists(r, Concept::atom(name)), a));
      }
    }
  }
  std::vector<Example> out;
  for (const auto& q : queries) {
    if (out.size() >= cap) break;
    out.push_back(Example{a0, lang == QueryLanguage::CQr ? Query::conjunctive(q.asConjunctive()) : q});
  }
  return out;
}

std::string distributionToJson(const Distribution& d) {
  nlohmann::json j;
  j["examples"] = nlohmann::json::array();
  for (const auto& e : d.support)
    j["examples"].push_back({{"abox", formatABox(e.abox)}, {"query", formatQuery(e.query)}});
  j["weights"] = d.weights;
  j["seed"] = d.seed;
  return j.dump(2);
}

Distribution distributionFromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 1, 1);
  }
  Distribution d;
  for (const auto& e : j.at("examples"))
    d.support.push_back(Example{parseABox(e.at("abox").get<std::string>()), parseQuery(e.at("query").get<std::string>())});
  if (j.contains("weights"))
    d.weights = j.at("weights").get<std::vector<double>>();
  else
    d.weights.assign(d.support.size(), d.support.empty() ? 0.0 : 1.0 / static_cast<double>(d.support.size()));
  d.seed = j.value("seed", std::uint64_t{0});
  d.validate();
  return d;
}

// ------------------------------------------------------------- fixture

namespace {

std::string xName(std::size_t i) { return "X" + std::to_string(i); }

std::string wordOf(std::size_t k, std::size_t n) {
  std::string w(n, 'r');
  for (std::size_t i = 0; i < n; ++i)
    if ((k >> (n - 1 - i)) & 1U) w[i] = 's';
  return w;
}

// Role words of length n read along the root paths of a concept.
std::set<std::string> pathPrefixes(const Concept& c, std::size_t n) {
  ConceptTree t = treeOfConcept(c);
  std::vector<std::string> word(t.vertexCount());
  std::set<std::string> out;
  auto children = t.children();
  for (int v : t.bfsOrder()) {
    const std::string& w = word[static_cast<std::size_t>(v)];
    if (w.size() == n) {
      out.insert(w);
      continue;
    }
    for (const auto& [role, child] : children[static_cast<std::size_t>(v)])
      word[static_cast<std::size_t>(child)] = w + role;
  }
  return out;
}

bool isExistsM(const Query& q) { return q.isConjunctive() && q.str() == SigmaFixture::existsM().str(); }

}  // namespace

TBox SigmaFixture::baseTBox(std::size_t n) {
  TBox t;
  t.addConceptInclusion(ConceptInclusion{Concept::atom("A"), Concept::atom(xName(0))});
  t.addConceptInclusion(ConceptInclusion{
      Concept::atom("M"), Concept::conj({Concept::exists("r", Concept::atom("M")), Concept::exists("s", Concept::atom("M"))})});
  for (std::size_t i = 0; i < n; ++i) {
    Concept next = Concept::atom(xName(i + 1));
    t.addConceptInclusion(
        ConceptInclusion{Concept::atom(xName(i)), Concept::conj({Concept::exists("r", next), Concept::exists("s", next)})});
  }
  return t;
}

TBox SigmaFixture::tbox() const {
  validate();
  TBox t = baseTBox(n);
  t.addConceptInclusion(ConceptInclusion{Concept::atom("A"), path(sigma, Concept::atom("M"))});
  return t;
}

ABox SigmaFixture::abox() {
  ABox a;
  a.addConcept("A", "a");
  return a;
}

Query SigmaFixture::existsM() {
  ConjunctiveQuery q;
  q.variables = {"x"};
  q.atoms = {QueryAtom{false, "M", "x", ""}};
  return Query::conjunctive(q);
}

Concept SigmaFixture::path(const std::string& word, const Concept& filler) {
  Concept c = filler;
  for (auto it = word.rbegin(); it != word.rend(); ++it) c = Concept::exists(std::string(1, *it), c);
  return c;
}

void SigmaFixture::validate() const {
  if (n == 0 || sigma.size() != n || sigma.find_first_not_of("rs") != std::string::npos)
    throw ConfigurationError("sigma must be a word over {r, s} of length n >= 1");
}

FixtureLearnResult fixturePacLearner(const std::vector<LabeledExample>& sample, std::size_t n) {
  if (n == 0) throw ConfigurationError("fixture needs n >= 1");
  FixtureLearnResult out;
  Reasoner base(SigmaFixture::baseTBox(n));

  auto consistent = [&](const TBox& h) {
    Reasoner hr(h);
    for (const auto& e : sample) {
      ++out.steps;
      if (hr.entails(e.abox, e.query) != e.label) return false;
    }
    return true;
  };

  bool needsM = false;
  std::set<std::string> revealed;
  std::set<std::string> excluded;
  for (const auto& e : sample) {
    ++out.steps;
    if (base.entails(e.abox, e.query)) continue;
    if (e.label) needsM = true;
    if (!e.query.isConceptQuery()) continue;
    for (const auto& w : pathPrefixes(e.query.queryConcept(), n)) {
      if (e.label) {
        revealed.insert(w);
        continue;
      }
      ++out.steps;
      if (answersQuery(SigmaFixture{n, w}.tbox(), e.abox, e.query)) excluded.insert(w);
    }
  }

  if (!needsM) {
    out.hypothesis = SigmaFixture::baseTBox(n);
    if (!consistent(out.hypothesis)) throw DataError("sample is inconsistent with every fixture target");
    return out;
  }
  std::vector<std::string> candidates(revealed.begin(), revealed.end());
  if (candidates.empty()) {
    for (std::size_t k = 0; candidates.size() <= excluded.size() && k < (std::size_t{1} << n); ++k) {
      std::string w = wordOf(k, n);
      if (excluded.count(w) == 0) candidates.push_back(w);
    }
  }
  for (const auto& w : candidates) {
    TBox h = SigmaFixture{n, w}.tbox();
    if (consistent(h)) {
      out.hypothesis = h;
      out.sigma = w;
      return out;
    }
  }
  throw DataError("sample is inconsistent with every fixture target");
}

AdversarialFixtureOracle::AdversarialFixtureOracle(std::size_t n)
    : n_(n), base_(SigmaFixture::baseTBox(n == 0 || n > 16 ? 1 : n)) {
  if (n == 0 || n > 16) throw ConfigurationError("adversarial fixture supports 1 <= n <= 16");
  for (std::size_t k = 0; k < (std::size_t{1} << n); ++k) remaining_.insert(wordOf(k, n));
}

const std::string& AdversarialFixtureOracle::identified() const {
  if (remaining_.size() != 1) throw ContractViolation("the adversary has not committed to a word yet");
  return *remaining_.begin();
}

bool AdversarialFixtureOracle::membershipQuery(const ABox& a, const Query& q) {
  ++queries_;
  if (base_.entails(a, q)) return true;
  std::set<std::string> yes;
  bool fixedAbox = a == SigmaFixture::abox();
  if (fixedAbox && isExistsM(q)) return true;
  if (fixedAbox && q.isConceptQuery()) {
    for (const auto& w : pathPrefixes(q.queryConcept(), n_))
      if (remaining_.count(w) != 0 && answersQuery(SigmaFixture{n_, w}.tbox(), a, q)) yes.insert(w);
  } else {
    for (const auto& w : remaining_)
      if (answersQuery(SigmaFixture{n_, w}.tbox(), a, q)) yes.insert(w);
  }
  if (yes.size() == remaining_.size()) return true;
  for (const auto& w : yes) remaining_.erase(w);
  return false;
}

std::optional<Example> AdversarialFixtureOracle::inseparabilityQuery(const TBox& h) {
  ++queries_;
  ABox a0 = SigmaFixture::abox();
  Reasoner hr(h);
  if (!hr.entails(a0, SigmaFixture::existsM())) return Example{a0, SigmaFixture::existsM()};
  if (remaining_.size() > 1) {
    for (std::size_t k = 0; k < (std::size_t{1} << n_); ++k) {
      std::string w = wordOf(k, n_);
      Query q = Query::instance(SigmaFixture::path(w, Concept::atom("M")), "a");
      if (!hr.entails(a0, q)) continue;
      remaining_.erase(w);
      return Example{a0, q};
    }
  }
  for (const auto& w : remaining_) {
    auto r = inseparable(SigmaFixture{n_, w}.tbox(), h, a0, QueryLanguage::IQ);
    if (r.inseparable) continue;
    std::set<std::string> agree;
    bool hAnswer = hr.entails(a0, *r.counterexample);
    for (const auto& v : remaining_)
      if (answersQuery(SigmaFixture{n_, v}.tbox(), a0, *r.counterexample) == hAnswer) agree.insert(v);
    for (const auto& v : agree) remaining_.erase(v);
    return Example{a0, *r.counterexample};
  }
  return std::nullopt;
}

FixtureExactResult fixtureExactLearner(MembershipOracle& mq, EquivalenceOracle& eq, std::size_t n) {
  if (n == 0 || n > 16) throw ConfigurationError("fixture learner supports 1 <= n <= 16");
  FixtureExactResult out;
  ABox a0 = SigmaFixture::abox();
  TBox h = SigmaFixture::baseTBox(n);
  ++out.equivalenceQueries;
  if (!eq.inseparabilityQuery(h)) return out;
  std::size_t words = std::size_t{1} << n;
  std::string sigma = wordOf(words - 1, n);
  for (std::size_t k = 0; k + 1 < words; ++k) {
    std::string w = wordOf(k, n);
    ++out.membershipQueries;
    if (mq.membershipQuery(a0, Query::instance(SigmaFixture::path(w, Concept::atom("M")), "a"))) {
      sigma = w;
      break;
    }
  }
  ++out.equivalenceQueries;
  if (eq.inseparabilityQuery(SigmaFixture{n, sigma}.tbox()))
    throw ContractViolation("fixture target is not of the form T_sigma");
  out.sigma = sigma;
  return out;
}

// ------------------------------------------------------------- VC dimension

bool shatters(const std::vector<TBox>& hypotheses, const std::vector<Example>& x, std::size_t budget) {
  if (x.empty()) return true;
  if (x.size() >= 63) throw ConfigurationError("too many examples to enumerate labellings");
  const std::uint64_t needed = std::uint64_t{1} << x.size();
  std::set<std::uint64_t> seen;
  std::size_t evaluations = 0;
  for (const auto& h : hypotheses) {
    if (seen.size() == needed) return true;
    if (budget != 0 && evaluations >= budget)
      throw BudgetExceeded("hypothesis budget exhausted after " + std::to_string(evaluations) + " evaluations",
                           std::to_string(seen.size()) + " of " + std::to_string(needed) + " labellings realised");
    ++evaluations;
    Reasoner hr(h);
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (hr.entails(x[i].abox, x[i].query)) mask |= std::uint64_t{1} << i;
    seen.insert(mask);
  }
  return seen.size() == needed;
}

ABox cyclicAboxGen(std::size_t n) {
  if (n < 2) throw ConfigurationError("cyclic ABox needs n >= 2");
  ABox a;
  auto ind = [](std::size_t i) { return "a" + std::to_string(i); };
  for (std::size_t i = 1; i < n; ++i) {
    a.addRole("r", ind(i), ind(i + 1));
    a.addRole("s", ind(i), ind(i));
  }
  a.addRole("r", ind(n), ind(1));
  return a;
}

Concept identifyingConcept(std::size_t n, std::size_t i) {
  if (i < 1 || i > n) throw ConfigurationError("identifying concept index out of range");
  Concept c = Concept::exists("s", Concept::top());
  for (std::size_t k = 0; k < n - i; ++k) c = Concept::exists("r", c);
  return c;
}

std::vector<TBox> identifyingHypotheses(std::size_t n) {
  if (n < 1 || n >= 20) throw ConfigurationError("identifying hypotheses need 1 <= n < 20");
  std::vector<TBox> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Concept> parts;
    for (std::size_t i = 1; i <= n; ++i)
      if ((mask >> (i - 1)) & 1U) parts.push_back(identifyingConcept(n, i));
    TBox t;
    t.addConceptInclusion(ConceptInclusion{Concept::conj(parts), Concept::atom("A")});
    out.push_back(t);
  }
  TBox all;
  for (std::size_t i = 1; i <= n; ++i) all.addConceptInclusion(ConceptInclusion{identifyingConcept(n, i), Concept::atom("A")});
  out.push_back(all);
  return out;
}

std::vector<Example> cyclicExamples(const ABox& a0, std::size_t n) {
  std::vector<Example> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(Example{a0, Query::atomic("A", "a" + std::to_string(i))});
  return out;
}

}  // namespace elh
