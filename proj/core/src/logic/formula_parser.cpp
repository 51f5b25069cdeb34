#include <cctype>

#include "stamp/logic/formula.hpp"

namespace stamp::logic {

namespace {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  FormulaPtr parse() {
    FormulaPtr f = implication();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

  Term parse_single_term() {
    Term t = term();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return t;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw MalformedFormula(what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#' || c == '*';
  }

  std::string identifier() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  bool peek_keyword(std::string_view kw) {
    skip();
    if (text_.substr(pos_, kw.size()) != kw) return false;
    std::size_t end = pos_ + kw.size();
    return end >= text_.size() || !ident_char(text_[end]);
  }

  FormulaPtr implication() {
    FormulaPtr lhs = disjunction();
    if (accept("->")) return Formula::implies(lhs, implication());
    return lhs;
  }

  FormulaPtr disjunction() {
    std::vector<FormulaPtr> parts{conjunction()};
    while (accept("|")) parts.push_back(conjunction());
    return Formula::disj(std::move(parts));
  }

  FormulaPtr conjunction() {
    std::vector<FormulaPtr> parts{unary()};
    while (accept("&")) parts.push_back(unary());
    return Formula::conj(std::move(parts));
  }

  FormulaPtr unary() {
    skip();
    if (text_.substr(pos_, 2) != "!=" && accept("!")) return Formula::negate(unary());
    for (bool universal : {true, false}) {
      std::string_view kw = universal ? "forall" : "exists";
      if (peek_keyword(kw)) {
        pos_ += kw.size();
        std::string var = identifier();
        std::string sort;
        if (accept(":")) sort = identifier();
        expect(".");
        FormulaPtr body = implication();
        return universal ? Formula::forall(var, sort, body) : Formula::exists(var, sort, body);
      }
    }
    if (accept("(")) {
      FormulaPtr inner = implication();
      expect(")");
      return inner;
    }
    if (peek_keyword("true")) {
      pos_ += 4;
      return Formula::constant(true);
    }
    if (peek_keyword("false")) {
      pos_ += 5;
      return Formula::constant(false);
    }
    Term lhs = term();
    if (accept("!=")) return Formula::negate(Formula::equal(lhs, term()));
    if (accept("=")) return Formula::equal(lhs, term());
    // A bare name or application at formula level is a relation atom.
    return Formula::atom(lhs.name, lhs.args);
  }

  Term term() {
    std::string name = identifier();
    if (accept("(")) {
      std::vector<Term> args;
      if (!accept(")")) {
        do {
          args.push_back(term());
        } while (accept(","));
        expect(")");
      }
      return Term::apply(std::move(name), std::move(args));
    }
    return Term::symbol(std::move(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

} // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).parse(); }

Term parse_term(std::string_view text) { return Parser(text).parse_single_term(); }

} // namespace stamp::logic
