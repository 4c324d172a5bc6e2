#include "elh/teacher.hpp"

#include <cmath>
#include <numeric>

#include "json.hpp"

#include "elh/errors.hpp"
#include "elh/text_format.hpp"

namespace elh {

std::string toString(CounterexamplePolicy p) {
  switch (p) {
    case CounterexamplePolicy::Minimal:
      return "minimal";
    case CounterexamplePolicy::Randomized:
      return "randomized";
    case CounterexamplePolicy::Adversarial:
      return "adversarial";
  }
  return "minimal";
}

CounterexamplePolicy counterexamplePolicyFromString(const std::string& s) {
  if (s == "minimal") return CounterexamplePolicy::Minimal;
  if (s == "randomized" || s == "random") return CounterexamplePolicy::Randomized;
  if (s == "adversarial" || s == "adversarial-cq") return CounterexamplePolicy::Adversarial;
  throw ConfigurationError("unknown counterexample policy '" + s + "'");
}

void Distribution::validate() const {
  if (support.empty()) throw ConfigurationError("distribution has empty support");
  if (weights.size() != support.size()) throw ConfigurationError("distribution needs one weight per example");
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0)) throw ConfigurationError("distribution weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigurationError("distribution weights must sum to 1");
}

Distribution Distribution::uniform(std::vector<Example> support, std::uint64_t seed) {
  Distribution d;
  d.weights.assign(support.size(), support.empty() ? 0.0 : 1.0 / static_cast<double>(support.size()));
  d.support = std::move(support);
  d.seed = seed;
  return d;
}

ExampleOracle::ExampleOracle(std::shared_ptr<const Reasoner> target, Distribution dist)
    : target_(std::move(target)), dist_(std::move(dist)), rng_(dist_.seed) {
  dist_.validate();
  pick_ = std::discrete_distribution<std::size_t>(dist_.weights.begin(), dist_.weights.end());
  labels_.assign(dist_.support.size(), -1);
}

LabeledExample ExampleOracle::draw() {
  std::size_t i = pick_(rng_);
  const Example& e = dist_.support[i];
  ++draws_;
  if (labels_[i] < 0) labels_[i] = target_->entails(e.abox, e.query) ? 1 : 0;
  return LabeledExample{e.abox, e.query, labels_[i] == 1};
}

OracleSession::OracleSession(TBox target, ABox fixedAbox, QueryLanguage language, CounterexamplePolicy policy,
                             std::uint64_t seed)
    : target_(std::make_shared<Reasoner>(target)), targetTBox_(std::move(target)), policy_(policy), seed_(seed) {
  framework_.abox = std::move(fixedAbox);
  framework_.language = language;
  framework_.signature = targetTBox_.signature();
}

void OracleSession::checkSignature(const Signature& s, const ABox& a, const char* what) const {
  Signature allowed = framework_.signature;
  allowed.merge(a.signature());
  if (!allowed.includes(s)) throw SignatureError(std::string(what) + " uses symbols outside the framework signature");
}

void OracleSession::record(const std::string& kind, std::size_t inputSize, const std::string& answer,
                           const std::string& detail) {
  transcript_.push_back(
      TranscriptEntry{kind, inputSize, answer, detail, stats_.mqCount, stats_.eqCount, stats_.totalInputSize()});
}

bool OracleSession::membershipQuery(const ABox& a, const Query& q) {
  checkSignature(q.signature(), a, "membership query");
  bool answer = target_->entails(a, q);
  std::size_t n = size(a) + size(q);
  ++stats_.mqCount;
  stats_.mqInputSize += n;
  record("MQ", n, answer ? "yes" : "no", formatQuery(q));
  return answer;
}

std::optional<Example> OracleSession::inseparabilityQuery(const TBox& h) {
  return inseparabilityQueryOver(h, framework_.abox);
}

std::optional<Example> OracleSession::inseparabilityQueryOver(const TBox& h, const ABox& a) {
  return inseparabilityQueryOver(h, std::vector<ABox>{a});
}

std::optional<Example> OracleSession::inseparabilityQueryOver(const TBox& h, const std::vector<ABox>& aboxes) {
  std::size_t n = size(h);
  for (const auto& a : aboxes) checkSignature(h.signature(), a, "hypothesis");
  ++stats_.eqCount;
  stats_.eqInputSize += n;

  for (const auto& a : aboxes) {
    SeparationAnalysis analysis(targetTBox_, h, a, framework_.language);
    if (analysis.inseparable()) continue;
    Reasoner hyp(h);
    auto genuine = [&](const Query& q) { return target_->entails(a, q) != hyp.entails(a, q); };

    SeparationOptions options;
    options.seed = seed_ + stats_.eqCount;
    switch (policy_) {
      case CounterexamplePolicy::Minimal:
        options.style = WitnessStyle::Minimal;
        break;
      case CounterexamplePolicy::Randomized:
        options.style = WitnessStyle::Randomized;
        break;
      case CounterexamplePolicy::Adversarial:
        options.style = framework_.language == QueryLanguage::CQr ? WitnessStyle::Zigzag : WitnessStyle::Unshrunk;
        break;
    }
    auto result = analysis.result(options);
    if (!genuine(*result.counterexample)) {
      options.style = WitnessStyle::Minimal;
      result = analysis.result(options);
      if (!genuine(*result.counterexample))
        throw ContractViolation("teacher produced a counterexample that does not separate: " +
                                result.counterexample->str());
    }
    Example ce{a, *result.counterexample};
    stats_.largestCounterexample = std::max(stats_.largestCounterexample, size(ce));
    record("EQ", n, "counterexample", formatQuery(ce.query));
    return ce;
  }
  record("EQ", n, "yes", "");
  return std::nullopt;
}

ExampleOracle OracleSession::exampleOracle(Distribution dist) const { return ExampleOracle(target_, std::move(dist)); }

bool OracleSession::verifyInseparable(const TBox& h) const {
  return SeparationAnalysis(targetTBox_, h, framework_.abox, framework_.language).inseparable();
}

std::string OracleSession::transcriptJsonLines() const {
  std::string out;
  for (const auto& e : transcript_) {
    nlohmann::json j;
    j["kind"] = e.kind;
    j["inputSize"] = e.inputSize;
    j["answer"] = e.answer;
    if (!e.detail.empty()) j["query"] = e.detail;
    j["runningTotals"] = {{"mqCount", e.mqCount}, {"eqCount", e.eqCount}, {"totalInputSize", e.totalInputSize}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace elh
