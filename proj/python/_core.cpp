#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "elh/batch.hpp"
#include "elh/errors.hpp"
#include "elh/learner.hpp"
#include "elh/pac.hpp"
#include "elh/reasoner.hpp"
#include "elh/text_format.hpp"
#include "elh/updates.hpp"

namespace py = pybind11;
using namespace elh;

namespace {

py::dict statsDict(const OracleSession& s, const LearnerStats& st, const TBox& h) {
  py::dict d;
  d["mqCount"] = s.stats().mqCount;
  d["eqCount"] = s.stats().eqCount;
  d["totalQueryInputSize"] = s.stats().totalInputSize();
  d["largestCounterexample"] = s.stats().largestCounterexample;
  d["hypothesisSize"] = size(h);
  d["iterations"] = st.iterations;
  d["conversions"] = st.conversions;
  d["counterexamples"] = st.counterexamples;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reasoning and exact learning for ELH terminologies over a fixed ABox";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<UnsupportedQueryError>(m, "UnsupportedQueryError", base);
  py::register_exception<ContractViolation>(m, "ContractViolation", base);
  py::register_exception<ConfigurationError>(m, "ConfigurationError", base);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base);

  py::class_<Concept>(m, "Concept")
      .def(py::init(&parseConcept), py::arg("text"))
      .def("depth", &Concept::depth)
      .def("__str__", &formatConcept)
      .def("__repr__", [](const Concept& c) { return "Concept('" + formatConcept(c) + "')"; })
      .def("__eq__", [](const Concept& a, const Concept& b) { return a == b; });

  py::class_<TBox>(m, "TBox")
      .def(py::init([](const std::string& text) { return parseTBox(text); }), py::arg("text") = "")
      .def("size", [](const TBox& t) { return size(t); })
      .def("is_terminology", &TBox::isTerminology)
      .def("__str__", &formatTBox);

  py::class_<ABox>(m, "ABox")
      .def(py::init([](const std::string& text) { return parseABox(text); }), py::arg("text") = "")
      .def("individuals", &ABox::individuals)
      .def("size", [](const ABox& a) { return size(a); })
      .def("__str__", &formatABox);

  py::class_<Query>(m, "Query")
      .def(py::init(&parseQuery), py::arg("text"))
      .def("__str__", &formatQuery);

  m.def("entails", &answersQuery, py::arg("tbox"), py::arg("abox"), py::arg("query"));
  m.def(
      "entails_ci", [](const TBox& t, const Concept& c, const Concept& d) { return entailsCI(t, {c, d}); },
      py::arg("tbox"), py::arg("lhs"), py::arg("rhs"));
  m.def(
      "inseparable",
      [](const TBox& t, const TBox& h, const ABox& a, const std::string& lang) {
        auto r = inseparable(t, h, a, queryLanguageFromString(lang));
        std::optional<std::string> ce;
        if (r.counterexample) ce = formatQuery(*r.counterexample);
        return py::make_tuple(r.inseparable, ce);
      },
      py::arg("target"), py::arg("hypothesis"), py::arg("abox"), py::arg("lang") = "iq");

  m.def(
      "learn",
      [](const TBox& t, const ABox& a, const std::string& lang, const std::string& policy, std::uint64_t seed,
         std::size_t budget) {
        OracleSession s(t, a, queryLanguageFromString(lang), counterexamplePolicyFromString(policy), seed);
        LearnerOptions options;
        options.maxOracleCalls = budget;
        LearnResult r = learn(s.framework(), s, s, options);
        return py::make_tuple(r.hypothesis, statsDict(s, r.stats, r.hypothesis));
      },
      py::arg("target"), py::arg("abox"), py::arg("lang") = "iq", py::arg("policy") = "minimal", py::arg("seed") = 0,
      py::arg("budget") = 0);

  m.def(
      "check_bisim_preservation",
      [](const TBox& t, const TBox& h, const ABox& a0, const ABox& a) {
        return toString(checkBisimPreservation(t, h, a0, a));
      },
      py::arg("target"), py::arg("hypothesis"), py::arg("a0"), py::arg("a"));

  m.def(
      "build_batch",
      [](const TBox& t, const ABox& a0, const std::string& lang) {
        return batchToJsonLines(buildBatch(t, a0, queryLanguageFromString(lang)));
      },
      py::arg("target"), py::arg("abox"), py::arg("lang") = "iq");
  m.def(
      "learn_from_batch",
      [](const std::string& jsonLines, const ABox& a0, const std::string& lang) {
        return learnFromBatch(batchFromJsonLines(jsonLines), a0, queryLanguageFromString(lang));
      },
      py::arg("batch"), py::arg("abox"), py::arg("lang") = "iq");

  m.def("sample_count", &sampleCount, py::arg("eps"), py::arg("delta"), py::arg("i"));
  m.def(
      "pac_run",
      [](const TBox& t, const ABox& a, const std::string& lang, double eps, double delta, std::uint64_t seed) {
        QueryLanguage l = queryLanguageFromString(lang);
        Signature sig = t.signature();
        sig.merge(a.signature());
        Distribution d = Distribution::uniform(enumerateExamples(a, sig, l), seed);
        OracleSession s(t, a, l, CounterexamplePolicy::Minimal, seed);
        PacResult r = pacFromExact(s, eps, delta, d);
        py::dict out;
        out["hypothesis"] = r.hypothesis;
        out["schedule"] = r.schedule;
        out["samplesUsed"] = r.samplesUsed;
        out["trueError"] = trueError(r.hypothesis, t, a, d);
        return out;
      },
      py::arg("target"), py::arg("abox"), py::arg("lang") = "iq", py::arg("eps") = 0.1, py::arg("delta") = 0.1,
      py::arg("seed") = 0);
  m.def(
      "cyclic_shattered",
      [](std::size_t n, bool extraLoop) {
        ABox a = cyclicAboxGen(n);
        if (extraLoop) a.addRole("s", "a" + std::to_string(n), "a" + std::to_string(n));
        return shatters(identifyingHypotheses(n), cyclicExamples(a, n));
      },
      py::arg("n"), py::arg("extra_loop") = false);
}
