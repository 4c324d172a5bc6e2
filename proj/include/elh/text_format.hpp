#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "elh/syntax.hpp"

namespace elh {

struct ParseOptions {
  bool mergeDefinitions = true;   // A [= C and A [= D become A [= C and D
  bool splitDefinitions = true;   // A == C becomes A [= C and C [= A
  bool requireTerminology = true;
};

struct Document {
  TBox tbox;
  ABox abox;
  std::vector<Query> queries;
};

// Line-oriented text format:
//   CI: A [= some r. B          RI: r [= s          A: B(a)   A: r(a,b)
//   IND: a                      Q: IQ (some r. B)(a)
//   Q: CQ a ; exists x y ; r(a,x), s(x,y), B(y)
// '#' starts a comment. Unicode forms of top, and, exists and [= are accepted.
Document parseDocument(std::string_view text, const ParseOptions& options = {});
Document readDocument(const std::string& path, const ParseOptions& options = {});

TBox parseTBox(std::string_view text, const ParseOptions& options = {});
ABox parseABox(std::string_view text);
Concept parseConcept(std::string_view text);
// Accepts "AQ ...", "IQ ...", "CQ ..." with or without the "Q:" prefix.
Query parseQuery(std::string_view text);

std::string formatConcept(const Concept& c);
std::string formatTBox(const TBox& t);
std::string formatABox(const ABox& a);
std::string formatQuery(const Query& q);  // without the "Q: " prefix

std::string readTextFile(const std::string& path);

}  // namespace elh
