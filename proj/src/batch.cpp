#include "elh/batch.hpp"

#include <algorithm>
#include <sstream>

#include "elh/errors.hpp"
#include "elh/teacher.hpp"
#include "elh/text_format.hpp"
#include "json.hpp"

namespace elh {

std::size_t Batch::size() const {
  std::size_t n = 0;
  for (const auto& u : examples) n += elh::size(u.example);
  return n;
}

Batch buildBatch(const TBox& t, const ABox& a0, QueryLanguage lang) {
  if (!a0.signature().includes(t.signature()))
    throw ConfigurationError("target signature is not contained in the signature of the fixed ABox");
  OracleSession session(t, a0, lang);
  LearnResult r = learn(session.framework(), session, session);
  return Batch{r.stats.updates};
}

namespace {

const ConceptAssertion& singleConcept(const ABox& a) {
  if (a.conceptAssertions().size() != 1 || !a.roleAssertions().empty())
    throw StructuralError("expected an ABox with a single concept assertion: " + formatABox(a));
  return *a.conceptAssertions().begin();
}

}  // namespace

TBox learnFromBatch(const Batch& b, const ABox&, QueryLanguage) {
  TBox h;
  for (const auto& u : b.examples) {
    const ABox& a = u.example.abox;
    const Query& q = u.example.query;
    switch (u.kind) {
      case HypothesisUpdate::Kind::Atomic: {
        const auto& ca = singleConcept(a);
        if (!q.isConceptQuery() || !q.queryConcept().isAtom())
          throw StructuralError("atomic example needs an atomic query: " + q.str());
        h.addConceptInclusion(ConceptInclusion{Concept::atom(ca.name), q.queryConcept()});
        break;
      }
      case HypothesisUpdate::Kind::Role: {
        if (a.roleAssertions().size() != 1 || !a.conceptAssertions().empty() || !q.isRoleQuery())
          throw StructuralError("role example needs a single role assertion and a role query");
        h.addRoleInclusion(RoleInclusion{a.roleAssertions().begin()->role, q.role()});
        break;
      }
      case HypothesisUpdate::Kind::TreeShape: {
        if (!q.isConceptQuery() || !q.queryConcept().isAtom())
          throw StructuralError("tree example needs an atomic query: " + q.str());
        h.addConceptInclusion(ConceptInclusion{conceptOfRootedAbox(a, q.individual()), q.queryConcept()});
        break;
      }
      case HypothesisUpdate::Kind::Definition: {
        const auto& ca = singleConcept(a);
        if (!q.isConceptQuery() || q.individual() != ca.individual)
          throw StructuralError("definition example needs an instance query on its individual: " + q.str());
        h.setDefinition(ca.name, q.queryConcept());
        break;
      }
    }
  }
  return h;
}

std::string batchToJsonLines(const Batch& b) {
  std::ostringstream out;
  for (std::size_t i = 0; i < b.examples.size(); ++i) {
    const auto& u = b.examples[i];
    nlohmann::json j;
    j["abox"] = formatABox(u.example.abox);
    j["query"] = formatQuery(u.example.query);
    j["label"] = 1;
    j["kind"] = toString(u.kind);
    j["order"] = i;
    out << j.dump() << '\n';
  }
  return out.str();
}

Batch batchFromJsonLines(const std::string& text) {
  std::vector<std::pair<std::size_t, HypothesisUpdate>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.what(), lineNo, 1);
    }
    if (j.value("label", 1) != 1) throw StructuralError("batches contain positive examples only");
    HypothesisUpdate u;
    u.kind = updateKindFromString(j.at("kind").get<std::string>());
    u.example = Example{parseABox(j.at("abox").get<std::string>()), parseQuery(j.at("query").get<std::string>())};
    rows.emplace_back(j.value("order", rows.size()), std::move(u));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  Batch b;
  for (auto& [order, u] : rows) b.examples.push_back(std::move(u));
  return b;
}

}  // namespace elh
