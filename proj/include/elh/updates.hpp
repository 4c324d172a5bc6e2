#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "elh/learner.hpp"
#include "elh/syntax.hpp"
#include "elh/teacher.hpp"

namespace elh {

enum class Preservation { Preserved, NotApplicable };
std::string toString(Preservation p);

// Decides whether every individual of `a` is bisimilar to an individual of
// `a0`. Requires that t and h entail the same role inclusions and that
// (h, a0) and (t, a0) are IQ-inseparable; throws ContractViolation otherwise.
// A Preserved verdict is cross-checked with the reasoner.
Preservation checkBisimPreservation(const TBox& t, const TBox& h, const ABox& a0, const ABox& a);

struct GeneraliseStats {
  std::size_t steps = 0;            // applied replacements
  std::size_t membershipQueries = 0;
};

// Weakens the left-hand side of every CI C ⊑ A with non-atomic C: concept
// names are dropped or replaced by strictly more general names, then roles
// are replaced by strictly more general roles, as long as the target still
// entails the CI. CIs with an atomic left-hand side are kept as they are.
TBox generalise(LearnerContext& ctx, const TBox& h, GeneraliseStats* stats = nullptr);

// T entails x ⊑ y and every z over the signature of T with T ⊨ x ⊑ z also
// satisfies T ⊨ z ⊑ y. x = y always holds.
bool linearDerivation(const TBox& t, const std::string& x, const std::string& y, bool isRole = false);

// Membership in the closure of a0 under single-assertion replacements along
// linear derivations.
bool inGeneralisedClosure(const TBox& t, const ABox& a0, const ABox& a);

// Breadth-first enumeration of the closure, a0 first, at most `cap` ABoxes.
std::vector<ABox> enumerateClosure(const TBox& t, const ABox& a0, std::size_t cap = 64);

// Inseparability oracle answering over a fixed family of ABoxes.
class ClosureOracle : public EquivalenceOracle {
 public:
  ClosureOracle(OracleSession& session, std::vector<ABox> aboxes);
  std::optional<Example> inseparabilityQuery(const TBox& h) override;
  const std::vector<ABox>& aboxes() const { return aboxes_; }

 private:
  OracleSession& session_;
  std::vector<ABox> aboxes_;
};

struct UpdateLearnResult {
  TBox hypothesis;
  LearnerStats stats;
  GeneraliseStats generalisation;
};

// IQ learning in which counterexamples may come from any ABox of the
// closure; the hypothesis is generalised after every step. Requires that the
// target signature is contained in the signature of the fixed ABox.
UpdateLearnResult learnWithUpdates(const Framework& fw, MembershipOracle& mq, EquivalenceOracle& eq,
                                   const LearnerOptions& options = {});

}  // namespace elh
