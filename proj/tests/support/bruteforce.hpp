#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "elh/syntax.hpp"

namespace elh::testgen {

// Chase of (T, A) in which every CI fires once per element and no element deeper than `maxDepth`
// below an individual gets new successors. Every fact it derives is
// entailed; `truncated` records whether the depth bound cut off a rule.
class BruteForceChase {
 public:
  BruteForceChase(const TBox& t, const ABox& a, std::size_t maxDepth = 6);

  bool holds(const Concept& c, const std::string& individual) const;
  bool hasRole(const std::string& role, const std::string& from, const std::string& to) const;
  bool truncated() const { return truncated_; }
  std::size_t size() const { return labels_.size(); }

 private:
  struct Edge {
    std::size_t to;
    std::set<std::string> roles;
  };

  std::size_t node(const std::string& individual) const;
  std::set<std::string> superRoles(const std::string& r) const;
  bool holdsAt(const Concept& c, std::size_t n) const;
  bool add(const Concept& c, std::size_t n);
  void addEdge(std::size_t from, std::size_t to, const std::string& role);

  TBox t_;
  std::size_t maxDepth_;
  bool truncated_ = false;
  std::map<std::string, std::size_t> named_;
  std::vector<std::set<std::string>> labels_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<std::size_t> depth_;
};

// T ⊨ C ⊑ D decided on the chase of the tree ABox of C.
bool bruteForceEntailsCI(const TBox& t, const Concept& c, const Concept& d, std::size_t maxDepth = 6);
// Every concept over the names and roles with at most `maxConj` conjuncts per
// level and depth at most `depth`, without repeated conjuncts.
std::vector<Concept> enumerateConcepts(const std::vector<std::string>& names, const std::vector<std::string>& roles,
                                       std::size_t depth, std::size_t maxConj);

struct OracleAgreement {
  std::size_t ciChecks = 0;
  std::size_t iqChecks = 0;
  std::size_t disagreements = 0;
  std::size_t truncatedDisagreements = 0;  // disagreements where the chase was cut off
  std::vector<std::string> failures;       // first few, for diagnostics

  std::size_t checks() const { return ciChecks + iqChecks; }
};

// Compares entailsCI and answersQuery(IQ) with the chase on `instances`
// random terminologies over at most four names with concepts of depth <= 3.
// Queries are every concept of depth <= 1 with up to two conjuncts per level
// and every conjunction-free concept of depth <= 3.
OracleAgreement compareWithBruteForce(std::size_t instances, std::uint64_t seed = 0);

}  // namespace elh::testgen
