#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "elh/learner.hpp"
#include "elh/syntax.hpp"

namespace elh {

// Positive examples in the order in which a learner used them.
struct Batch {
  std::vector<HypothesisUpdate> examples;
  std::size_t size() const;  // sum of the example sizes
};

// Runs the learner for `lang` against the target and collects the examples
// behind every hypothesis change. Requires that the signature of t is
// contained in the signature of a0.
Batch buildBatch(const TBox& t, const ABox& a0, QueryLanguage lang);

// Rebuilds the hypothesis from a batch without any oracle. Tree examples
// must be tree-shaped ABoxes rooted at the query individual.
TBox learnFromBatch(const Batch& b, const ABox& a0, QueryLanguage lang);

// JSON-lines: {"abox", "query", "label": 1, "kind", "order"} per example.
std::string batchToJsonLines(const Batch& b);
Batch batchFromJsonLines(const std::string& text);

}  // namespace elh
