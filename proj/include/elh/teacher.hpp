#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "elh/reasoner.hpp"
#include "elh/syntax.hpp"

namespace elh {

enum class CounterexamplePolicy { Minimal, Randomized, Adversarial };

std::string toString(CounterexamplePolicy p);
CounterexamplePolicy counterexamplePolicyFromString(const std::string& s);

// Fixed-ABox learning framework as seen by the learner.
struct Framework {
  ABox abox;
  QueryLanguage language = QueryLanguage::AQ;
  Signature signature;  // signature of the target
};

class MembershipOracle {
 public:
  virtual ~MembershipOracle() = default;
  virtual bool membershipQuery(const ABox& a, const Query& q) = 0;
};

class EquivalenceOracle {
 public:
  virtual ~EquivalenceOracle() = default;
  // nullopt means the hypothesis is inseparable from the target.
  virtual std::optional<Example> inseparabilityQuery(const TBox& h) = 0;
};

struct OracleStats {
  std::size_t mqCount = 0;
  std::size_t eqCount = 0;
  std::size_t mqInputSize = 0;
  std::size_t eqInputSize = 0;
  std::size_t largestCounterexample = 0;

  std::size_t totalInputSize() const { return mqInputSize + eqInputSize; }
};

struct TranscriptEntry {
  std::string kind;  // MQ or EQ
  std::size_t inputSize = 0;
  std::string answer;
  std::string detail;
  std::size_t mqCount = 0;
  std::size_t eqCount = 0;
  std::size_t totalInputSize = 0;
};

// Finite-support distribution over fixed-ABox examples.
struct Distribution {
  std::vector<Example> support;
  std::vector<double> weights;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigurationError
  static Distribution uniform(std::vector<Example> support, std::uint64_t seed = 0);
};

// Draws labelled examples for a hidden target.
class ExampleOracle {
 public:
  ExampleOracle(std::shared_ptr<const Reasoner> target, Distribution dist);
  LabeledExample draw();
  std::size_t draws() const { return draws_; }

 private:
  std::shared_ptr<const Reasoner> target_;
  Distribution dist_;
  std::mt19937_64 rng_;
  std::discrete_distribution<std::size_t> pick_;
  std::vector<signed char> labels_;  // -1 until first drawn
  std::size_t draws_ = 0;
};

// Simulated teacher holding the hidden target.
class OracleSession : public MembershipOracle, public EquivalenceOracle {
 public:
  OracleSession(TBox target, ABox fixedAbox, QueryLanguage language,
                CounterexamplePolicy policy = CounterexamplePolicy::Minimal, std::uint64_t seed = 0);

  const Framework& framework() const { return framework_; }
  CounterexamplePolicy policy() const { return policy_; }

  bool membershipQuery(const ABox& a, const Query& q) override;
  std::optional<Example> inseparabilityQuery(const TBox& h) override;
  // Inseparability query over another ABox; used with updated data.
  std::optional<Example> inseparabilityQueryOver(const TBox& h, const ABox& a);
  // One inseparability query answered over several ABoxes; the first separable one yields the counterexample.
  std::optional<Example> inseparabilityQueryOver(const TBox& h, const std::vector<ABox>& aboxes);

  ExampleOracle exampleOracle(Distribution dist) const;

  // Independent check that does not touch the counters.
  bool verifyInseparable(const TBox& h) const;

  const OracleStats& stats() const { return stats_; }
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  std::string transcriptJsonLines() const;

 private:
  void checkSignature(const Signature& s, const ABox& a, const char* what) const;
  void record(const std::string& kind, std::size_t inputSize, const std::string& answer, const std::string& detail);

  std::shared_ptr<const Reasoner> target_;
  TBox targetTBox_;
  Framework framework_;
  CounterexamplePolicy policy_;
  std::uint64_t seed_;
  OracleStats stats_;
  std::vector<TranscriptEntry> transcript_;
};

}  // namespace elh
