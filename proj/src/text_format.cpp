#include "elh/text_format.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "elh/errors.hpp"

namespace elh {

namespace {

enum class Tok { Name, Top, And, Some, Exists, Sub, Equiv, LParen, RParen, Comma, Dot, Semicolon, Wedge, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t column = 1;
};

bool nameChar(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

class Lexer {
 public:
  Lexer(std::string_view text, std::size_t line, std::size_t column0) : text_(text), line_(line), col0_(column0) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t i = 0;
    std::size_t col = col0_;
    auto push = [&](Tok k, std::string t, std::size_t c) { out.push_back(Token{k, std::move(t), c}); };
    while (i < text_.size()) {
      auto ch = static_cast<unsigned char>(text_[i]);
      if (ch == ' ' || ch == '\t' || ch == '\r') {
        ++i;
        ++col;
        continue;
      }
      if (nameChar(ch)) {
        std::size_t start = i;
        while (i < text_.size() && nameChar(static_cast<unsigned char>(text_[i]))) ++i;
        std::string word(text_.substr(start, i - start));
        if (!((ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z')))
          throw ParseError("names must start with a letter: '" + word + "'", line_, col);
        Tok k = Tok::Name;
        if (word == "top") k = Tok::Top;
        else if (word == "and") k = Tok::And;
        else if (word == "some") k = Tok::Some;
        else if (word == "exists") k = Tok::Exists;
        push(k, word, col);
        col += i - start;
        continue;
      }
      auto starts = [&](std::string_view s) { return text_.substr(i, s.size()) == s; };
      struct Sym {
        std::string_view text;
        Tok kind;
      };
      static const Sym syms[] = {{"[=", Tok::Sub},   {"==", Tok::Equiv},   {"⊑", Tok::Sub},   {"≡", Tok::Equiv},
                                 {"⊤", Tok::Top},    {"⊓", Tok::And},      {"∃", Tok::Some},  {"∧", Tok::Wedge},
                                 {"(", Tok::LParen}, {")", Tok::RParen},   {",", Tok::Comma}, {".", Tok::Dot},
                                 {";", Tok::Semicolon}};
      bool matched = false;
      for (const auto& s : syms) {
        if (starts(s.text)) {
          push(s.kind, std::string(s.text), col);
          i += s.text.size();
          ++col;
          if (s.text == "[=" || s.text == "==") ++col;
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError("unexpected character '" + std::string(1, static_cast<char>(ch)) + "'", line_, col);
    }
    out.push_back(Token{Tok::End, "", col});
    return out;
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t col0_;
};

enum class NameKind { Concept, Role, Individual };

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::size_t line) : toks_(std::move(tokens)), line_(line) {}

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, peek().column); }

  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what + (peek().text.empty() ? "" : ", found '" + peek().text + "'"));
    return take();
  }

  void expectEnd() {
    if (!at(Tok::End)) fail("unexpected trailing input '" + peek().text + "'");
  }

  std::string name(NameKind kind, const char* what) {
    Token t = expect(Tok::Name, what);
    uses.push_back({t.text, kind, t.column});
    return t.text;
  }

  Concept conceptExpr() {
    std::vector<Concept> parts{unary()};
    while (at(Tok::And)) {
      take();
      parts.push_back(unary());
    }
    if (parts.size() == 1) return parts.front();
    return Concept::conj(std::move(parts));
  }

  Concept unary() {
    if (at(Tok::Top)) {
      take();
      return Concept::top();
    }
    if (at(Tok::LParen)) {
      take();
      Concept c = conceptExpr();
      expect(Tok::RParen, "')'");
      return c;
    }
    if (at(Tok::Some)) {
      take();
      std::string r = name(NameKind::Role, "role name");
      expect(Tok::Dot, "'.' after role name");
      return Concept::exists(r, unary());
    }
    if (at(Tok::Name)) return Concept::atom(name(NameKind::Concept, "concept name"));
    fail("expected a concept");
  }

  struct Use {
    std::string text;
    NameKind kind;
    std::size_t column;
  };
  std::vector<Use> uses;

  std::size_t line() const { return line_; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

class NameRegistry {
 public:
  void check(const Parser& p) {
    for (const auto& u : p.uses) {
      auto [it, inserted] = kinds_.emplace(u.text, u.kind);
      if (!inserted && it->second != u.kind)
        throw ParseError("name '" + u.text + "' is used in two different namespaces", p.line(), u.column);
    }
  }

 private:
  std::map<std::string, NameKind> kinds_;
};

Query parseQueryTokens(Parser& p) {
  Token head = p.expect(Tok::Name, "query kind AQ, IQ or CQ");
  if (head.text == "AQ" || head.text == "IQ") {
    bool aq = head.text == "AQ";
    if (p.at(Tok::Name) && p.peek(1).kind == Tok::LParen && p.peek(2).kind == Tok::Name &&
        p.peek(3).kind == Tok::Comma) {
      std::string r = p.name(NameKind::Role, "role name");
      p.take();
      std::string a = p.name(NameKind::Individual, "individual");
      p.take();
      std::string b = p.name(NameKind::Individual, "individual");
      p.expect(Tok::RParen, "')'");
      p.expectEnd();
      return aq ? Query::atomicRole(r, a, b) : Query::instanceRole(r, a, b);
    }
    Concept c = aq ? Concept::atom(p.name(NameKind::Concept, "concept name")) : p.conceptExpr();
    p.expect(Tok::LParen, "'(' before the individual");
    std::string a = p.name(NameKind::Individual, "individual");
    p.expect(Tok::RParen, "')'");
    p.expectEnd();
    return aq ? Query::atomic(c.name(), a) : Query::instance(c, a);
  }
  if (head.text != "CQ") p.fail("unknown query kind '" + head.text + "'");
  ConjunctiveQuery cq;
  while (p.at(Tok::Name) || p.at(Tok::Comma)) {
    if (p.at(Tok::Comma)) {
      p.take();
      continue;
    }
    cq.individuals.push_back(p.name(NameKind::Individual, "individual"));
  }
  p.expect(Tok::Semicolon, "';' after answer individuals");
  if (p.at(Tok::Exists)) {
    p.take();
    while (p.at(Tok::Name) || p.at(Tok::Comma)) {
      if (p.at(Tok::Comma)) {
        p.take();
        continue;
      }
      cq.variables.push_back(p.take().text);
    }
  }
  p.expect(Tok::Semicolon, "';' before the query atoms");
  auto term = [&]() {
    Token t = p.expect(Tok::Name, "term");
    if (!cq.isVariable(t.text)) {
      p.uses.push_back({t.text, NameKind::Individual, t.column});
      if (std::find(cq.individuals.begin(), cq.individuals.end(), t.text) == cq.individuals.end())
        cq.individuals.push_back(t.text);
    }
    return t.text;
  };
  while (!p.at(Tok::End)) {
    Token pred = p.expect(Tok::Name, "atom predicate");
    p.expect(Tok::LParen, "'('");
    std::string first = term();
    QueryAtom atom;
    atom.predicate = pred.text;
    atom.first = first;
    if (p.at(Tok::Comma)) {
      p.take();
      atom.isRole = true;
      atom.second = term();
    }
    p.uses.push_back({pred.text, atom.isRole ? NameKind::Role : NameKind::Concept, pred.column});
    p.expect(Tok::RParen, "')'");
    cq.atoms.push_back(atom);
    if (p.at(Tok::Comma) || p.at(Tok::Wedge) || p.at(Tok::And)) p.take();
  }
  return Query::conjunctive(std::move(cq));
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

Document parseDocument(std::string_view text, const ParseOptions& options) {
  Document doc;
  NameRegistry registry;
  std::size_t lineNo = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    ++lineNo;
    start = end + 1;
    std::size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (trim(raw).empty()) {
      if (end == text.size()) break;
      continue;
    }
    std::size_t colon = raw.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected a line prefix such as CI:, RI:, A:, IND: or Q:", lineNo, 1);
    std::string prefix = trim(raw.substr(0, colon));
    std::string_view body = raw.substr(colon + 1);
    Parser p(Lexer(body, lineNo, colon + 2).run(), lineNo);
    if (prefix == "CI") {
      Concept lhs = p.conceptExpr();
      bool equiv = false;
      if (p.at(Tok::Equiv)) {
        if (!options.splitDefinitions) p.fail("concept definitions are disabled");
        equiv = true;
        p.take();
      } else {
        p.expect(Tok::Sub, "'[='");
      }
      Concept rhs = p.conceptExpr();
      p.expectEnd();
      registry.check(p);
      doc.tbox.addConceptInclusion({lhs, rhs}, options.mergeDefinitions);
      if (equiv) doc.tbox.addConceptInclusion({rhs, lhs}, options.mergeDefinitions);
    } else if (prefix == "RI") {
      std::string r = p.name(NameKind::Role, "role name");
      bool equiv = p.at(Tok::Equiv);
      if (equiv) p.take();
      else p.expect(Tok::Sub, "'[='");
      std::string s = p.name(NameKind::Role, "role name");
      p.expectEnd();
      registry.check(p);
      doc.tbox.addRoleInclusion({r, s});
      if (equiv) doc.tbox.addRoleInclusion({s, r});
    } else if (prefix == "A") {
      Token pred = p.expect(Tok::Name, "assertion predicate");
      p.expect(Tok::LParen, "'('");
      std::string a = p.name(NameKind::Individual, "individual");
      if (p.at(Tok::Comma)) {
        p.take();
        std::string b = p.name(NameKind::Individual, "individual");
        p.uses.push_back({pred.text, NameKind::Role, pred.column});
        doc.abox.addRole(pred.text, a, b);
      } else {
        p.uses.push_back({pred.text, NameKind::Concept, pred.column});
        doc.abox.addConcept(pred.text, a);
      }
      p.expect(Tok::RParen, "')'");
      p.expectEnd();
      registry.check(p);
    } else if (prefix == "IND") {
      while (!p.at(Tok::End)) {
        if (p.at(Tok::Comma)) {
          p.take();
          continue;
        }
        doc.abox.declare(p.name(NameKind::Individual, "individual"));
      }
      registry.check(p);
    } else if (prefix == "Q") {
      Query q = parseQueryTokens(p);
      registry.check(p);
      doc.queries.push_back(std::move(q));
    } else {
      throw ParseError("unknown line prefix '" + prefix + "'", lineNo, 1);
    }
    if (end == text.size()) break;
  }
  if (options.requireTerminology) doc.tbox.checkTerminology();
  return doc;
}

std::string readTextFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Document readDocument(const std::string& path, const ParseOptions& options) {
  return parseDocument(readTextFile(path), options);
}

TBox parseTBox(std::string_view text, const ParseOptions& options) { return parseDocument(text, options).tbox; }

ABox parseABox(std::string_view text) { return parseDocument(text).abox; }

Concept parseConcept(std::string_view text) {
  Parser p(Lexer(text, 1, 1).run(), 1);
  Concept c = p.conceptExpr();
  p.expectEnd();
  NameRegistry().check(p);
  return c;
}

Query parseQuery(std::string_view text) {
  std::string body = trim(text);
  if (body.rfind("Q:", 0) == 0) body = body.substr(2);
  Parser p(Lexer(body, 1, 1).run(), 1);
  Query q = parseQueryTokens(p);
  NameRegistry().check(p);
  return q;
}

std::string formatConcept(const Concept& c) {
  switch (c.kind()) {
    case Concept::Kind::Top:
      return "top";
    case Concept::Kind::Atom:
      return c.name();
    case Concept::Kind::Exists: {
      std::string inner = formatConcept(c.filler());
      if (c.filler().isConj()) inner = "(" + inner + ")";
      return "some " + c.role() + "." + inner;
    }
    case Concept::Kind::Conj: {
      std::string out;
      for (std::size_t i = 0; i < c.parts().size(); ++i) {
        if (i) out += " and ";
        const Concept& part = c.parts()[i];
        out += part.isConj() ? "(" + formatConcept(part) + ")" : formatConcept(part);
      }
      return out;
    }
  }
  return {};
}

std::string formatTBox(const TBox& t) {
  std::string out;
  for (const auto& ci : t.conceptInclusions())
    out += "CI: " + formatConcept(ci.lhs) + " [= " + formatConcept(ci.rhs) + "\n";
  for (const auto& ri : t.roleInclusions()) out += "RI: " + ri.sub + " [= " + ri.sup + "\n";
  return out;
}

std::string formatABox(const ABox& a) {
  std::string out;
  std::set<std::string> mentioned;
  for (const auto& c : a.conceptAssertions()) {
    out += "A: " + c.name + "(" + c.individual + ")\n";
    mentioned.insert(c.individual);
  }
  for (const auto& r : a.roleAssertions()) {
    out += "A: " + r.role + "(" + r.from + "," + r.to + ")\n";
    mentioned.insert(r.from);
    mentioned.insert(r.to);
  }
  for (const auto& d : a.declared())
    if (!mentioned.count(d)) out += "IND: " + d + "\n";
  return out;
}

std::string formatQuery(const Query& q) {
  switch (q.shape()) {
    case Query::Shape::RoleAssertion:
      return std::string(q.kind() == Query::Kind::AQ ? "AQ " : "IQ ") + q.role() + "(" + q.individual() + "," +
             q.second() + ")";
    case Query::Shape::ConceptAssertion: {
      if (q.kind() == Query::Kind::AQ) return "AQ " + q.queryConcept().name() + "(" + q.individual() + ")";
      std::string c = formatConcept(q.queryConcept());
      if (!q.queryConcept().isAtom()) c = "(" + c + ")";
      return "IQ " + c + "(" + q.individual() + ")";
    }
    case Query::Shape::Conjunctive: {
      const auto& cq = q.cq();
      std::string out = "CQ";
      for (const auto& i : cq.individuals) out += " " + i;
      out += " ;";
      if (!cq.variables.empty()) {
        out += " exists";
        for (const auto& v : cq.variables) out += " " + v;
      }
      out += " ;";
      for (std::size_t i = 0; i < cq.atoms.size(); ++i) {
        out += i ? ", " : " ";
        out += cq.atoms[i].str();
      }
      return out;
    }
  }
  return {};
}

}  // namespace elh
