#include "neuconj/tptp/parser.hpp"

#include <optional>
#include <sstream>

#include "neuconj/tptp/tokenizer.hpp"

namespace neuconj::tptp {

namespace {

std::string describe(int line, int column, const std::vector<std::string>& expected,
                     const std::string& found) {
  std::ostringstream os;
  os << "syntax error at " << line << ':' << column << ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) os << (i + 1 == expected.size() ? " or " : ", ");
    os << expected[i];
  }
  os << ", found " << (found.empty() ? "end of input" : "'" + found + "'");
  return os.str();
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(lex_tptp(text)) {
    if (!tokens_.empty()) {
      eof_line_ = tokens_.back().line;
      eof_column_ = tokens_.back().column + static_cast<int>(tokens_.back().text.size());
    }
  }

  Problem problem() {
    Problem p;
    while (!at_end()) p.formulas.push_back(statement());
    return p;
  }

  Formula standalone_formula() {
    Formula f = formula();
    if (!at_end()) fail({"end of input"});
    return f;
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }

  const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? &tokens_[pos_ + ahead] : nullptr;
  }

  bool peek_is(std::string_view text, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t && t->text == text;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    if (const Token* t = peek()) throw SyntaxError(t->line, t->column, std::move(expected), t->text);
    throw SyntaxError(eof_line_, eof_column_, std::move(expected), "");
  }

  void expect(std::string_view text) {
    if (!peek_is(text)) fail({"'" + std::string(text) + "'"});
    ++pos_;
  }

  bool accept(std::string_view text) {
    if (!peek_is(text)) return false;
    ++pos_;
    return true;
  }

  std::string word(bool (*pred)(std::string_view), const char* what) {
    const Token* t = peek();
    if (!t || t->kind != TokenKind::Word || !pred(t->text)) fail({what});
    ++pos_;
    return t->text;
  }

  AnnotatedFormula statement() {
    AnnotatedFormula af;
    if (accept("fof")) {
      af.language = Language::Fof;
    } else if (accept("cnf")) {
      af.language = Language::Cnf;
    } else {
      fail({"'fof'", "'cnf'"});
    }
    expect("(");
    af.name = word(is_symbol_name, "formula name");
    expect(",");
    af.role = role();
    expect(",");
    af.formula = formula();
    if (peek_is(",")) skip_annotations();
    expect(")");
    expect(".");
    return af;
  }

  Role role() {
    const Token* t = peek();
    if (t) {
      std::optional<Role> r;
      if (t->text == "axiom") r = Role::Axiom;
      if (t->text == "conjecture") r = Role::Conjecture;
      if (t->text == "plain") r = Role::Plain;
      if (t->text == "negated_conjecture") r = Role::NegatedConjecture;
      if (r) {
        ++pos_;
        return *r;
      }
    }
    fail({"'axiom'", "'conjecture'", "'plain'", "'negated_conjecture'"});
  }

  // Consumes `, annotation ...` up to (not including) the closing `)`.
  void skip_annotations() {
    int depth = 0;
    while (const Token* t = peek()) {
      if (depth == 0 && t->text == ")") return;
      if (t->text == "(" || t->text == "[") ++depth;
      if (t->text == ")" || t->text == "]") {
        if (--depth < 0) fail({"balanced annotation"});
      }
      ++pos_;
    }
    fail({"')'"});
  }

  static std::optional<Connective> binary_connective(const Token* t) {
    if (!t) return std::nullopt;
    if (t->text == "=>") return Connective::Implies;
    if (t->text == "<=>") return Connective::Iff;
    return std::nullopt;
  }

  static std::optional<Connective> assoc_connective(const Token* t) {
    if (!t) return std::nullopt;
    if (t->text == "&") return Connective::And;
    if (t->text == "|") return Connective::Or;
    return std::nullopt;
  }

  Formula formula() {
    Formula left = assoc_formula();
    if (auto c = binary_connective(peek())) {
      ++pos_;
      Formula right = assoc_formula();
      if (binary_connective(peek())) fail({"')'", "',' or end of formula"});
      return binary(*c, std::move(left), std::move(right));
    }
    return left;
  }

  Formula assoc_formula() {
    Formula left = unit_formula();
    const auto first = assoc_connective(peek());
    if (!first) return left;
    while (auto c = assoc_connective(peek())) {
      if (*c != *first) {
        fail({"'" + std::string(to_string(*first)) + "'", "parenthesized subformula"});
      }
      ++pos_;
      left = binary(*c, std::move(left), unit_formula());
    }
    return left;
  }

  Formula unit_formula() {
    if (accept("~")) return neg(unit_formula());
    if (peek_is("!") || peek_is("?")) return quantified();
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    return atomic();
  }

  Formula quantified() {
    const Quantifier q = peek_is("!") ? Quantifier::Forall : Quantifier::Exists;
    ++pos_;
    expect("[");
    std::vector<std::string> vars;
    vars.push_back(word(is_variable_name, "variable"));
    while (accept(",")) vars.push_back(word(is_variable_name, "variable"));
    expect("]");
    expect(":");
    Formula body = unit_formula();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      body = Formula{Quantified{q, *it, std::move(body)}};
    }
    return body;
  }

  // `!=` may arrive split as `!` `=` in space-tokenized text.
  std::optional<bool> equality_operator() {
    if (accept("=")) return false;
    if (accept("!=")) return true;
    if (peek_is("!") && peek_is("=", 1)) {
      pos_ += 2;
      return true;
    }
    return std::nullopt;
  }

  Formula atomic() {
    const Token* t = peek();
    if (t && t->kind == TokenKind::Word && is_variable_name(t->text)) {
      Term left = term();
      auto op = equality_operator();
      if (!op) fail({"'='", "'!='"});
      return Formula{Equality{std::move(left), term(), *op}};
    }
    if (!t || t->kind != TokenKind::Word || !is_symbol_name(t->text)) {
      fail({"'~'", "'!'", "'?'", "'('", "atom"});
    }
    Term head = term();
    if (auto op = equality_operator()) {
      return Formula{Equality{std::move(head), term(), *op}};
    }
    auto& a = std::get<Application>(head.node);
    return atom(std::move(a.symbol), std::move(a.args));
  }

  Term term() {
    const Token* t = peek();
    if (t && t->kind == TokenKind::Word && is_variable_name(t->text)) {
      ++pos_;
      return var(t->text);
    }
    std::string symbol = word(is_symbol_name, "term");
    std::vector<Term> args;
    if (accept("(")) {
      args.push_back(term());
      while (accept(",")) args.push_back(term());
      expect(")");
    }
    return app(std::move(symbol), std::move(args));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int eof_line_ = 1;
  int eof_column_ = 1;
};

}  // namespace

SyntaxError::SyntaxError(int line, int column, std::vector<std::string> expected,
                         std::string found)
    : Error(describe(line, column, expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

Problem parse_problem(std::string_view text) { return Parser(text).problem(); }

Formula parse_formula(std::string_view text) { return Parser(text).standalone_formula(); }

}  // namespace neuconj::tptp
