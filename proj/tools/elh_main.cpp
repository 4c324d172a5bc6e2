#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "elh/batch.hpp"
#include "elh/errors.hpp"
#include "elh/learner.hpp"
#include "elh/pac.hpp"
#include "elh/reasoner.hpp"
#include "elh/teacher.hpp"
#include "elh/text_format.hpp"
#include "elh/updates.hpp"
#include "json.hpp"

using namespace elh;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kNo = 1, kInput = 2, kUnsupported = 3, kBudget = 4 };

void setupLogging() {
  auto logger = spdlog::stderr_color_mt("elh");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("ELH_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

void writeText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write file '" + path + "'");
  out << text;
}

Document readFile(const std::string& path, const ParseOptions& options = {}) {
  try {
    return readDocument(path, options);
  } catch (const ParseError&) {
    std::cerr << path << ": ";
    throw;
  }
}

TBox readTBox(const std::string& path) { return readFile(path).tbox; }
ABox readABox(const std::string& path) { return readFile(path, {.requireTerminology = false}).abox; }

Query readQuery(const std::string& path) {
  Document d = readFile(path, {.requireTerminology = false});
  if (d.queries.empty()) throw ConfigurationError("no query in '" + path + "'");
  return d.queries.front();
}

// ------------------------------------------------------------------ reason

struct ReasonArgs {
  std::string tbox, abox, query;
  bool explain = false;
};

void explainMatch(const std::map<std::string, std::string>& match) {
  std::cout << "match:\n";
  for (const auto& [term, element] : match) std::cout << "  " << term << " -> " << element << "\n";
}

void explainConceptFailure(const RegularModel& m, const Query& q) {
  int e = m.individual(q.individual());
  std::cout << "frontier at " << q.individual() << ":\n";
  for (const auto& c : q.queryConcept().conjuncts())
    std::cout << "  " << (holdsAt(m.interpretation, c, e) ? "holds " : "fails ") << formatConcept(c) << "\n";
}

// Longest rooted prefix of the atoms that still has a match.
void explainQueryFailure(const RegularModel& m, const ConjunctiveQuery& q) {
  ConjunctiveQuery prefix;
  prefix.individuals = q.individuals;
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    prefix.atoms.push_back(q.atoms[i]);
    for (const auto& t : {q.atoms[i].first, q.atoms[i].second})
      if (!t.empty() && q.isVariable(t) &&
          std::find(prefix.variables.begin(), prefix.variables.end(), t) == prefix.variables.end())
        prefix.variables.push_back(t);
    if (!prefix.isRooted()) continue;
    if (!matchQuery(m, prefix)) {
      std::cout << "frontier: " << i << " atom(s) matched, no match extends to " << q.atoms[i].str() << "\n";
      return;
    }
  }
  std::cout << "frontier: no match of the whole query\n";
}

int runReason(const ReasonArgs& args) {
  TBox t = readTBox(args.tbox);
  ABox a = readABox(args.abox);
  Query q = readQuery(args.query);
  Reasoner r(t);
  RegularModel m = r.model(a);
  bool yes = r.entails(m, q);
  std::cout << (yes ? "ENTAILED" : "NOT_ENTAILED") << "\n";
  if (args.explain) {
    if (yes) {
      if (auto match = matchQuery(m, q.asConjunctive())) explainMatch(*match);
    } else if (q.isConceptQuery()) {
      explainConceptFailure(m, q);
    } else if (q.isRoleQuery()) {
      std::cout << "frontier: no " << q.role() << "-edge from " << q.individual() << " to " << q.second() << "\n";
    } else {
      explainQueryFailure(m, q.cq());
    }
  }
  return yes ? kOk : kNo;
}

// ------------------------------------------------------------------ learn

struct LearnArgs {
  std::string mode, target, abox;
  std::string policy = "minimal";
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::string stats, out, transcript, csv;
};

json transcriptTotals(const OracleSession& s) {
  std::size_t mq = 0, eq = 0, input = 0;
  for (const auto& e : s.transcript()) {
    (e.kind == "MQ" ? mq : eq) += 1;
    input += e.inputSize;
  }
  return {{"mqCount", mq}, {"eqCount", eq}, {"totalQueryInputSize", input}};
}

int runLearn(const LearnArgs& args) {
  QueryLanguage lang = queryLanguageFromString(args.mode);
  TBox t = readTBox(args.target);
  ABox a = readABox(args.abox);
  OracleSession session(t, a, lang, counterexamplePolicyFromString(args.policy), args.seed);
  LearnerOptions options;
  options.maxOracleCalls = args.budget;

  TBox h;
  LearnerStats stats;
  bool exceeded = false;
  try {
    LearnResult r = learn(session.framework(), session, session, options);
    h = std::move(r.hypothesis);
    stats = std::move(r.stats);
  } catch (const BudgetExceeded& e) {
    spdlog::warn("{}", e.what());
    exceeded = true;
    h = parseTBox(e.partialHypothesis(), {.mergeDefinitions = false, .splitDefinitions = false, .requireTerminology = false});
  }

  json j = transcriptTotals(session);
  j["mode"] = toString(lang);
  j["policy"] = toString(session.policy());
  j["seed"] = args.seed;
  j["hypothesisSize"] = size(h);
  j["iterations"] = stats.iterations;
  j["conversions"] = stats.conversions;
  j["counterexamples"] = stats.counterexamples;
  j["largestCounterexample"] = session.stats().largestCounterexample;
  j["verifiedInseparable"] = inseparable(t, h, a, lang).inseparable;
  j["budgetExceeded"] = exceeded;
  spdlog::info("learned {} axioms with {} MQs and {} EQs", h.conceptInclusions().size() + h.roleInclusions().size(),
               j["mqCount"].get<std::size_t>(), j["eqCount"].get<std::size_t>());

  writeText(args.out, formatTBox(h));
  if (!args.stats.empty()) writeText(args.stats, j.dump(2) + "\n");
  if (!args.transcript.empty()) writeText(args.transcript, session.transcriptJsonLines());
  if (!args.csv.empty()) {
    std::string csv = "mode,policy,seed,mqCount,eqCount,totalQueryInputSize,hypothesisSize,verifiedInseparable\n";
    csv += fmt::format("{},{},{},{},{},{},{},{}\n", toString(lang), toString(session.policy()), args.seed,
                       j["mqCount"].get<std::size_t>(), j["eqCount"].get<std::size_t>(),
                       j["totalQueryInputSize"].get<std::size_t>(), size(h), j["verifiedInseparable"].get<bool>());
    writeText(args.csv, csv);
  }
  return exceeded ? kBudget : kOk;
}

// ------------------------------------------------------------------ update-check

struct UpdateArgs {
  std::string target, hypothesis, a0, a, stats;
};

int runUpdateCheck(const UpdateArgs& args) {
  TBox t = readTBox(args.target);
  TBox h = readTBox(args.hypothesis);
  ABox a0 = readABox(args.a0);
  ABox a = readABox(args.a);
  Preservation p = checkBisimPreservation(t, h, a0, a);
  bool insep = inseparable(t, h, a, QueryLanguage::IQ).inseparable;
  std::cout << toString(p) << "\n";
  if (!args.stats.empty())
    writeText(args.stats, json{{"verdict", toString(p)}, {"inseparableOnUpdate", insep}}.dump(2) + "\n");
  return p == Preservation::Preserved ? kOk : kNo;
}

// ------------------------------------------------------------------ batch

struct BatchArgs {
  std::string target, abox, batch, lang = "iq", out, stats;
};

int runBatchBuild(const BatchArgs& args) {
  Batch b = buildBatch(readTBox(args.target), readABox(args.abox), queryLanguageFromString(args.lang));
  spdlog::info("batch of {} examples, size {}", b.examples.size(), b.size());
  writeText(args.out, batchToJsonLines(b));
  return kOk;
}

int runBatchLearn(const BatchArgs& args) {
  QueryLanguage lang = queryLanguageFromString(args.lang);
  ABox a = readABox(args.abox);
  Batch b = batchFromJsonLines(readTextFile(args.batch));
  TBox h = learnFromBatch(b, a, lang);
  writeText(args.out, formatTBox(h));
  json j = {{"examples", b.examples.size()}, {"batchSize", b.size()}, {"hypothesisSize", size(h)}, {"oracleCalls", 0}};
  int code = kOk;
  if (!args.target.empty()) {
    bool insep = inseparable(readTBox(args.target), h, a, lang).inseparable;
    j["verifiedInseparable"] = insep;
    if (!insep) code = kNo;
  }
  if (!args.stats.empty()) writeText(args.stats, j.dump(2) + "\n");
  return code;
}

// ------------------------------------------------------------------ pac

struct PacArgs {
  std::string target, abox, lang = "iq", dist, out, csv;
  double eps = 0.1, delta = 0.1;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
};

int runPac(const PacArgs& args) {
  QueryLanguage lang = queryLanguageFromString(args.lang);
  TBox t = readTBox(args.target);
  ABox a = readABox(args.abox);
  Signature sig = t.signature();
  sig.merge(a.signature());
  Distribution base = args.dist.empty() ? Distribution::uniform(enumerateExamples(a, sig, lang))
                                        : distributionFromJson(readTextFile(args.dist));
  base.validate();

  std::string lines;
  std::string csv = "trial,seed,queries,samplesUsed,trueError\n";
  std::size_t within = 0;
  for (std::size_t i = 0; i < args.trials; ++i) {
    Distribution d = base;
    d.seed = args.seed + i;
    OracleSession session(t, a, lang, CounterexamplePolicy::Minimal, d.seed);
    PacResult r = pacFromExact(session, args.eps, args.delta, d);
    double err = trueError(r.hypothesis, t, a, d);
    if (err <= args.eps) ++within;
    json j = {{"trial", i},
              {"seed", d.seed},
              {"schedule", r.schedule},
              {"samplesUsed", r.samplesUsed},
              {"trueError", err}};
    lines += j.dump() + "\n";
    csv += fmt::format("{},{},{},{},{}\n", i, d.seed, r.schedule.size(), r.samplesUsed, err);
  }
  json summary = {{"trials", args.trials},      {"eps", args.eps},
                  {"delta", args.delta},        {"supportSize", base.support.size()},
                  {"withinEps", within},        {"fractionWithinEps", args.trials ? double(within) / args.trials : 1.0}};
  lines += json{{"summary", summary}}.dump() + "\n";
  writeText(args.out, lines);
  if (!args.csv.empty()) writeText(args.csv, csv);
  return kOk;
}

// ------------------------------------------------------------------ vc

struct VcArgs {
  std::size_t n = 2;
  bool extraLoop = false;
  std::size_t budget = 0;
};

int runVc(const VcArgs& args) {
  ABox a = cyclicAboxGen(args.n);
  if (args.extraLoop) a.addRole("s", "a" + std::to_string(args.n), "a" + std::to_string(args.n));
  bool yes = shatters(identifyingHypotheses(args.n), cyclicExamples(a, args.n), args.budget);
  std::cout << (yes ? "SHATTERED" : "NOT_SHATTERED") << "\n";
  return yes ? kOk : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  setupLogging();
  CLI::App app{"Reasoning and exact learning for ELH terminologies over a fixed ABox"};
  app.require_subcommand(1);

  ReasonArgs reason;
  auto* cReason = app.add_subcommand("reason", "Decide whether a query follows from a TBox and an ABox");
  cReason->add_option("tbox", reason.tbox, "TBox file")->required();
  cReason->add_option("abox", reason.abox, "ABox file")->required();
  cReason->add_option("query", reason.query, "file with a query line")->required();
  cReason->add_flag("--explain", reason.explain, "print the match or the failure frontier");

  LearnArgs learnArgs;
  auto* cLearn = app.add_subcommand("learn", "Learn a hypothesis from a simulated teacher");
  cLearn->add_option("mode", learnArgs.mode, "aq, iq or cqr")->required()->check(CLI::IsMember({"aq", "iq", "cqr"}));
  cLearn->add_option("target", learnArgs.target, "target TBox file")->required();
  cLearn->add_option("abox", learnArgs.abox, "fixed ABox file")->required();
  cLearn->add_option("--oracle-policy", learnArgs.policy, "minimal, randomized or adversarial")
      ->check(CLI::IsMember({"minimal", "randomized", "adversarial", "adversarial-cq"}));
  cLearn->add_option("--seed", learnArgs.seed);
  cLearn->add_option("--budget", learnArgs.budget, "maximum number of oracle calls, 0 for none");
  cLearn->add_option("--stats", learnArgs.stats, "stats JSON output file");
  cLearn->add_option("--out", learnArgs.out, "hypothesis output file (default stdout)");
  cLearn->add_option("--transcript", learnArgs.transcript, "oracle transcript JSON-lines file");
  cLearn->add_option("--csv", learnArgs.csv, "stats CSV output file");

  UpdateArgs update;
  auto* cUpdate = app.add_subcommand("update-check", "Check whether an ABox update preserves IQ-inseparability");
  cUpdate->add_option("target", update.target)->required();
  cUpdate->add_option("hypothesis", update.hypothesis)->required();
  cUpdate->add_option("a0", update.a0)->required();
  cUpdate->add_option("a", update.a)->required();
  cUpdate->add_option("--stats", update.stats, "JSON output file");

  BatchArgs batch;
  auto* cBatch = app.add_subcommand("batch", "Build or replay example batches");
  cBatch->require_subcommand(1);
  auto* cBuild = cBatch->add_subcommand("build", "Collect the examples a learner uses");
  cBuild->add_option("target", batch.target)->required();
  cBuild->add_option("abox", batch.abox)->required();
  cBuild->add_option("--lang", batch.lang)->check(CLI::IsMember({"aq", "iq", "cqr"}));
  cBuild->add_option("--out", batch.out, "JSON-lines output file (default stdout)");
  auto* cReplay = cBatch->add_subcommand("learn", "Rebuild a hypothesis from a batch without oracles");
  cReplay->add_option("batch", batch.batch)->required();
  cReplay->add_option("abox", batch.abox)->required();
  cReplay->add_option("--lang", batch.lang)->check(CLI::IsMember({"aq", "iq", "cqr"}));
  cReplay->add_option("--target", batch.target, "target TBox used to verify the result");
  cReplay->add_option("--out", batch.out, "hypothesis output file (default stdout)");
  cReplay->add_option("--stats", batch.stats, "JSON output file");

  PacArgs pac;
  auto* cPac = app.add_subcommand("pac", "PAC experiments");
  cPac->require_subcommand(1);
  auto* cPacRun = cPac->add_subcommand("run", "Run the exact learner with sampled inseparability queries");
  cPacRun->add_option("target", pac.target)->required();
  cPacRun->add_option("abox", pac.abox)->required();
  cPacRun->add_option("--lang", pac.lang)->check(CLI::IsMember({"aq", "iq", "cqr"}));
  cPacRun->add_option("--eps", pac.eps)->check(CLI::Range(0.0, 1.0));
  cPacRun->add_option("--delta", pac.delta)->check(CLI::Range(0.0, 1.0));
  cPacRun->add_option("--trials", pac.trials);
  cPacRun->add_option("--seed", pac.seed);
  cPacRun->add_option("--dist", pac.dist, "distribution JSON file (default uniform over generated queries)");
  cPacRun->add_option("--out", pac.out, "per-trial JSON-lines output file (default stdout)");
  cPacRun->add_option("--csv", pac.csv, "per-trial CSV output file");

  VcArgs vc;
  auto* cVc = app.add_subcommand("vc", "VC-dimension checks");
  cVc->require_subcommand(1);
  auto* cVcCheck = cVc->add_subcommand("check", "Check shattering on the cyclic ABox");
  cVcCheck->add_option("--n", vc.n)->check(CLI::Range(2, 16));
  cVcCheck->add_flag("--extra-loop", vc.extraLoop, "add s(a_n, a_n)");
  cVcCheck->add_option("--budget", vc.budget, "maximum hypothesis evaluations, 0 for none");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (cReason->parsed()) return runReason(reason);
    if (cLearn->parsed()) return runLearn(learnArgs);
    if (cUpdate->parsed()) return runUpdateCheck(update);
    if (cBuild->parsed()) return runBatchBuild(batch);
    if (cReplay->parsed()) return runBatchLearn(batch);
    if (cPacRun->parsed()) return runPac(pac);
    if (cVcCheck->parsed()) return runVc(vc);
  } catch (const UnsupportedQueryError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kUnsupported;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
