/******************************************************************************
 * Copyright 2026 The SDM Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "sdm/condition.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace sdm {
namespace {

using Kind = ExprNode::Kind;

[[noreturn]] void type_error(const std::string& what) {
  throw Error(Errc::kTypeError, "type error: " + what);
}

ExprPtr make(ExprNode node) {
  return std::make_shared<const ExprNode>(std::move(node));
}

void require_numeric(const ExprPtr& e, std::string_view context) {
  if (e->is_boolean()) {
    type_error("boolean operand to " + std::string(context));
  }
}

void require_boolean(const ExprPtr& e, std::string_view context) {
  if (!e->is_boolean()) {
    type_error("numeric operand to " + std::string(context));
  }
}

std::string_view op_text(CompareOp op) {
  switch (op) {
    case CompareOp::kLess: return "<";
    case CompareOp::kLessEqual: return "<=";
    case CompareOp::kGreater: return ">";
    case CompareOp::kGreaterEqual: return ">=";
    case CompareOp::kEqual: return "==";
  }
  return "?";
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  const auto head = static_cast<unsigned char>(s.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool is_reserved(std::string_view s) {
  return s == "abs" || s == "collision" || s == "linked";
}

// SI unit symbols accepted after numeric literals; an optional integer
// exponent may follow directly ("s2") or via '^'.
bool is_unit_atom(std::string_view ident) {
  static constexpr std::string_view kAtoms[] = {
      "m", "s", "km", "h", "kg", "g", "rad", "deg", "Hz", "N", "ms", "mm",
      "cm"};
  const auto digits = ident.find_first_of("0123456789");
  const auto stem = ident.substr(0, digits);
  if (digits != std::string_view::npos &&
      ident.find_first_not_of("0123456789", digits) != std::string_view::npos) {
    return false;
  }
  return std::find(std::begin(kAtoms), std::end(kAtoms), stem) !=
         std::end(kAtoms);
}

// --- Lexer -----------------------------------------------------------------

struct Token {
  enum class Type { kNumber, kIdent, kString, kSymbol, kEnd };
  Type type = Type::kEnd;
  std::string text;
  double value = 0.0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (i_ >= text_.size()) {
        out.push_back({Token::Type::kEnd, "", 0.0, i_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void skip_space() {
    while (i_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[i_]))) {
      ++i_;
    }
  }

  Token next() {
    const std::size_t start = i_;
    const char c = text_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number(start);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[i_])) ||
              text_[i_] == '_')) {
        ++i_;
      }
      return {Token::Type::kIdent, std::string(text_.substr(start, i_ - start)),
              0.0, start};
    }
    if (c == '"') return string_literal(start);
    static constexpr std::string_view kTwo[] = {"||", "&&", "<=", ">=", "=="};
    for (auto sym : kTwo) {
      if (text_.substr(i_, 2) == sym) {
        i_ += 2;
        return {Token::Type::kSymbol, std::string(sym), 0.0, start};
      }
    }
    if (std::string_view("()!,+-*/<>^").find(c) != std::string_view::npos) {
      ++i_;
      return {Token::Type::kSymbol, std::string(1, c), 0.0, start};
    }
    throw SyntaxError(start, {"token"}, std::string(1, c));
  }

  Token number(std::size_t start) {
    auto digits = [&] {
      const std::size_t from = i_;
      while (i_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[i_]))) {
        ++i_;
      }
      return i_ > from;
    };
    bool any = digits();
    if (i_ < text_.size() && text_[i_] == '.') {
      ++i_;
      any = digits() || any;
    }
    if (!any) throw SyntaxError(start, {"number"}, std::string(1, text_[start]));
    if (i_ < text_.size() && (text_[i_] == 'e' || text_[i_] == 'E')) {
      std::size_t save = i_++;
      if (i_ < text_.size() && (text_[i_] == '+' || text_[i_] == '-')) ++i_;
      if (!digits()) i_ = save;  // "2e" is 2 followed by identifier e
    }
    const std::string_view lexeme = text_.substr(start, i_ - start);
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
    if (ec != std::errc() || ptr != lexeme.data() + lexeme.size() ||
        !std::isfinite(value)) {
      throw SyntaxError(start, {"finite number"}, std::string(lexeme));
    }
    return {Token::Type::kNumber, std::string(lexeme), value, start};
  }

  Token string_literal(std::size_t start) {
    std::string value;
    ++i_;
    while (i_ < text_.size() && text_[i_] != '"') {
      if (text_[i_] == '\\' && i_ + 1 < text_.size()) ++i_;
      value += text_[i_++];
    }
    if (i_ >= text_.size()) {
      throw SyntaxError(i_, {"\""}, "end of input");
    }
    ++i_;
    return {Token::Type::kString, value, 0.0, start};
  }

  std::string_view text_;
  std::size_t i_ = 0;
};

// --- Parser ----------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  ExprPtr run() {
    auto root = or_expr();
    if (peek().type != Token::Type::kEnd) {
      fail({"||", "&&", "end of input"});
    }
    if (!root->is_boolean()) type_error("condition must be boolean");
    return root;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at_symbol(std::string_view sym, std::size_t ahead = 0) const {
    const auto& t = peek(ahead);
    return t.type == Token::Type::kSymbol && t.text == sym;
  }
  bool accept(std::string_view sym) {
    if (!at_symbol(sym)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view sym) {
    if (!accept(sym)) fail({std::string(sym)});
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const auto& t = peek();
    throw SyntaxError(t.pos, std::move(expected),
                      t.type == Token::Type::kEnd ? "end of input" : t.text);
  }

  ExprPtr or_expr() {
    std::vector<ExprPtr> items{and_expr()};
    while (accept("||")) items.push_back(and_expr());
    if (items.size() == 1) return items.front();
    return expr::logical(Kind::kOr, std::move(items));
  }

  ExprPtr and_expr() {
    std::vector<ExprPtr> items{not_expr()};
    while (accept("&&")) items.push_back(not_expr());
    if (items.size() == 1) return items.front();
    return expr::logical(Kind::kAnd, std::move(items));
  }

  ExprPtr not_expr() {
    if (accept("!")) return expr::logical_not(not_expr());
    return comparison();
  }

  ExprPtr comparison() {
    auto lhs = sum();
    static constexpr std::pair<std::string_view, CompareOp> kOps[] = {
        {"<", CompareOp::kLess},
        {"<=", CompareOp::kLessEqual},
        {">", CompareOp::kGreater},
        {">=", CompareOp::kGreaterEqual},
        {"==", CompareOp::kEqual}};
    for (const auto& [sym, op] : kOps) {
      if (accept(sym)) return expr::compare(op, lhs, sum());
    }
    return lhs;
  }

  ExprPtr sum() {
    auto lhs = product();
    for (;;) {
      if (accept("+")) {
        lhs = expr::arithmetic(Kind::kAdd, lhs, product());
      } else if (accept("-")) {
        lhs = expr::arithmetic(Kind::kSubtract, lhs, product());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr product() {
    auto lhs = unary();
    for (;;) {
      if (accept("*")) {
        lhs = expr::arithmetic(Kind::kMultiply, lhs, unary());
      } else if (accept("/")) {
        lhs = expr::arithmetic(Kind::kDivide, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    if (accept("-")) {
      if (peek().type == Token::Type::kNumber) {
        const double value = -peek().value;
        ++pos_;
        skip_unit();
        return expr::number(value);
      }
      return expr::negate(unary());
    }
    return primary();
  }

  void skip_unit() {
    if (peek().type != Token::Type::kIdent || !is_unit_atom(peek().text)) return;
    ++pos_;
    skip_exponent();
    while ((at_symbol("/") || at_symbol("*")) &&
           peek(1).type == Token::Type::kIdent && is_unit_atom(peek(1).text)) {
      pos_ += 2;
      skip_exponent();
    }
  }

  void skip_exponent() {
    if (at_symbol("^") && peek(1).type == Token::Type::kNumber) pos_ += 2;
  }

  std::string reference() {
    const auto& t = peek();
    if (t.type == Token::Type::kIdent || t.type == Token::Type::kString) {
      ++pos_;
      return t.text;
    }
    fail({"identifier", "string"});
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.type) {
      case Token::Type::kNumber: {
        const double value = t.value;
        ++pos_;
        skip_unit();
        return expr::number(value);
      }
      case Token::Type::kIdent: {
        if (t.text == "abs") {
          ++pos_;
          expect("(");
          auto inner = or_expr();
          expect(")");
          return expr::abs(inner);
        }
        if (t.text == "collision") {
          ++pos_;
          expect("(");
          auto a = reference();
          expect(",");
          auto b = reference();
          expect(")");
          return expr::collision(std::move(a), std::move(b));
        }
        if (t.text == "linked") {
          ++pos_;
          expect("(");
          auto uid = reference();
          expect(",");
          const Token& which = peek();
          LinkBoundary boundary;
          if (which.type == Token::Type::kIdent && which.text == "start") {
            boundary = LinkBoundary::kStart;
          } else if (which.type == Token::Type::kIdent && which.text == "end") {
            boundary = LinkBoundary::kEnd;
          } else {
            fail({"start", "end"});
          }
          ++pos_;
          expect(")");
          return expr::linked(std::move(uid), boundary);
        }
        ++pos_;
        return expr::variable(t.text);
      }
      case Token::Type::kSymbol:
        if (accept("(")) {
          auto inner = or_expr();
          expect(")");
          return inner;
        }
        break;
      default:
        break;
    }
    fail({"number", "identifier", "(", "-", "!", "abs", "collision", "linked"});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// --- Printer ---------------------------------------------------------------

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case Kind::kOr: return 1;
    case Kind::kAnd: return 2;
    case Kind::kNot: return 3;
    case Kind::kCompare: return 4;
    case Kind::kAdd:
    case Kind::kSubtract: return 5;
    case Kind::kMultiply:
    case Kind::kDivide: return 6;
    case Kind::kNegate: return 7;
    case Kind::kNumber: return n.number < 0 || std::signbit(n.number) ? 7 : 8;
    default: return 8;
  }
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_reference(const std::string& name) {
  if (is_identifier(name) && !is_reserved(name)) return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void print_node(const ExprNode& n, std::string& out);

void print_child(const ExprNode& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print_node(child, out);
  if (parens) out += ')';
}

void print_node(const ExprNode& n, std::string& out) {
  const int prec = precedence(n);
  switch (n.kind) {
    case Kind::kNumber:
      out += format_number(n.number);
      return;
    case Kind::kVariable:
      out += n.names.front();
      return;
    case Kind::kNegate: {
      const auto& c = *n.children.front();
      // A bare positive literal after '-' would be folded into a negative
      // literal by the parser, so it needs parentheses too.
      const bool parens = precedence(c) < 7 ||
                          (c.kind == Kind::kNumber && precedence(c) == 8);
      out += '-';
      print_child(c, parens, out);
      return;
    }
    case Kind::kAdd:
    case Kind::kSubtract:
    case Kind::kMultiply:
    case Kind::kDivide: {
      static constexpr std::string_view kSym[] = {" + ", " - ", " * ", " / "};
      const auto idx = static_cast<int>(n.kind) - static_cast<int>(Kind::kAdd);
      print_child(*n.children[0], precedence(*n.children[0]) < prec, out);
      out += kSym[idx];
      print_child(*n.children[1], precedence(*n.children[1]) <= prec, out);
      return;
    }
    case Kind::kAbs:
      out += "abs(";
      print_node(*n.children.front(), out);
      out += ')';
      return;
    case Kind::kCompare:
      print_child(*n.children[0], precedence(*n.children[0]) <= prec, out);
      out += ' ';
      out += op_text(n.op);
      out += ' ';
      print_child(*n.children[1], precedence(*n.children[1]) <= prec, out);
      return;
    case Kind::kAnd:
    case Kind::kOr: {
      const std::string_view sym = n.kind == Kind::kAnd ? " && " : " || ";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += sym;
        print_child(*n.children[i], precedence(*n.children[i]) <= prec, out);
      }
      return;
    }
    case Kind::kNot: {
      const auto& c = *n.children.front();
      out += '!';
      print_child(c, precedence(c) < 8 && c.kind != Kind::kNot, out);
      return;
    }
    case Kind::kCollision:
      out += "collision(" + format_reference(n.names[0]) + ", " +
             format_reference(n.names[1]) + ")";
      return;
    case Kind::kLinked:
      out += "linked(" + format_reference(n.names[0]) + ", " +
             (n.boundary == LinkBoundary::kStart ? "start" : "end") + ")";
      return;
  }
}

// --- Traversal -------------------------------------------------------------

template <typename F>
void visit(const ExprNode& n, F&& f) {
  f(n);
  for (const auto& c : n.children) visit(*c, f);
}

}  // namespace

bool ExprNode::is_boolean() const {
  switch (kind) {
    case Kind::kCompare:
    case Kind::kAnd:
    case Kind::kOr:
    case Kind::kNot:
    case Kind::kCollision:
    case Kind::kLinked:
      return true;
    default:
      return false;
  }
}

ConditionExpr::ConditionExpr(ExprPtr root) : root_(std::move(root)) {
  if (!root_) throw Error(Errc::kInvalidArgument, "null condition");
  if (!root_->is_boolean()) type_error("condition must be boolean");
}

bool structurally_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.names != b.names ||
      a.children.size() != b.children.size()) {
    return false;
  }
  if (a.kind == Kind::kNumber && a.number != b.number) return false;
  if (a.kind == Kind::kCompare && a.op != b.op) return false;
  if (a.kind == Kind::kLinked && a.boundary != b.boundary) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

bool operator==(const ConditionExpr& a, const ConditionExpr& b) {
  return structurally_equal(*a.root_, *b.root_);
}

namespace expr {

ExprPtr number(double value) {
  if (!std::isfinite(value)) {
    throw Error(Errc::kNonFinite, "numeric literal must be finite");
  }
  ExprNode n;
  n.kind = Kind::kNumber;
  n.number = value;
  return make(std::move(n));
}

ExprPtr variable(std::string name) {
  if (!is_identifier(name) || is_reserved(name)) {
    throw Error(Errc::kInvalidArgument, "invalid variable name '" + name + "'");
  }
  ExprNode n;
  n.kind = Kind::kVariable;
  n.names = {std::move(name)};
  return make(std::move(n));
}

ExprPtr negate(ExprPtr operand) {
  require_numeric(operand, "unary -");
  ExprNode n;
  n.kind = Kind::kNegate;
  n.children = {std::move(operand)};
  return make(std::move(n));
}

ExprPtr arithmetic(Kind kind, ExprPtr lhs, ExprPtr rhs) {
  static constexpr std::string_view kSym[] = {"+", "-", "*", "/"};
  if (kind < Kind::kAdd || kind > Kind::kDivide) {
    throw Error(Errc::kInvalidArgument, "not an arithmetic operator");
  }
  const auto sym =
      kSym[static_cast<int>(kind) - static_cast<int>(Kind::kAdd)];
  require_numeric(lhs, sym);
  require_numeric(rhs, sym);
  ExprNode n;
  n.kind = kind;
  n.children = {std::move(lhs), std::move(rhs)};
  return make(std::move(n));
}

ExprPtr abs(ExprPtr operand) {
  require_numeric(operand, "abs");
  ExprNode n;
  n.kind = Kind::kAbs;
  n.children = {std::move(operand)};
  return make(std::move(n));
}

ExprPtr compare(CompareOp op, ExprPtr lhs, ExprPtr rhs) {
  require_numeric(lhs, op_text(op));
  require_numeric(rhs, op_text(op));
  ExprNode n;
  n.kind = Kind::kCompare;
  n.op = op;
  n.children = {std::move(lhs), std::move(rhs)};
  return make(std::move(n));
}

ExprPtr logical(Kind kind, std::vector<ExprPtr> operands) {
  if ((kind != Kind::kAnd && kind != Kind::kOr) || operands.size() < 2) {
    throw Error(Errc::kInvalidArgument,
                "logical node needs an operator and two or more operands");
  }
  for (const auto& op : operands) {
    require_boolean(op, kind == Kind::kAnd ? "&&" : "||");
  }
  ExprNode n;
  n.kind = kind;
  n.children = std::move(operands);
  return make(std::move(n));
}

ExprPtr logical_not(ExprPtr operand) {
  require_boolean(operand, "!");
  ExprNode n;
  n.kind = Kind::kNot;
  n.children = {std::move(operand)};
  return make(std::move(n));
}

ExprPtr collision(std::string a, std::string b) {
  if (a.empty() || b.empty()) {
    throw Error(Errc::kInvalidArgument, "collision() needs two actor names");
  }
  ExprNode n;
  n.kind = Kind::kCollision;
  n.names = {std::move(a), std::move(b)};
  return make(std::move(n));
}

ExprPtr linked(std::string activity_uid, LinkBoundary boundary) {
  if (activity_uid.empty()) {
    throw Error(Errc::kInvalidArgument, "linked() needs an activity uid");
  }
  ExprNode n;
  n.kind = Kind::kLinked;
  n.boundary = boundary;
  n.names = {std::move(activity_uid)};
  return make(std::move(n));
}

}  // namespace expr

SyntaxError::SyntaxError(std::size_t position, std::vector<std::string> expected,
                         const std::string& found)
    : Error(Errc::kSyntaxError,
            [&] {
              std::ostringstream msg;
              msg << "syntax error at position " << position << ": expected ";
              for (std::size_t i = 0; i < expected.size(); ++i) {
                msg << (i ? ", " : "") << "'" << expected[i] << "'";
              }
              msg << " but found '" << found << "'";
              return msg.str();
            }()),
      position_(position),
      expected_(std::move(expected)) {}

ConditionExpr parse(std::string_view text) {
  return ConditionExpr(Parser(text).run());
}

std::string print(const ExprNode& node) {
  std::string out;
  print_node(node, out);
  return out;
}

std::string print(const ConditionExpr& condition) {
  return print(condition.root());
}

bool EvaluationContext::collision(std::string_view a,
                                  std::string_view b) const {
  throw Error(Errc::kInvalidArgument, "no collision oracle for collision(" +
                                          std::string(a) + ", " +
                                          std::string(b) + ")");
}

bool EvaluationContext::linked(std::string_view activity_uid,
                               LinkBoundary) const {
  throw Error(Errc::kInvalidArgument,
              "no activity timeline for linked(" + std::string(activity_uid) +
                  ")");
}

double evaluate_numeric(const ExprNode& n, const EvaluationContext& env) {
  switch (n.kind) {
    case Kind::kNumber:
      return n.number;
    case Kind::kVariable: {
      const auto value = env.variable(n.names.front());
      if (!value) {
        throw Error(Errc::kUnboundVariable,
                    "unbound variable '" + n.names.front() + "'");
      }
      return *value;
    }
    case Kind::kNegate:
      return -evaluate_numeric(*n.children[0], env);
    case Kind::kAdd:
      return evaluate_numeric(*n.children[0], env) +
             evaluate_numeric(*n.children[1], env);
    case Kind::kSubtract:
      return evaluate_numeric(*n.children[0], env) -
             evaluate_numeric(*n.children[1], env);
    case Kind::kMultiply:
      return evaluate_numeric(*n.children[0], env) *
             evaluate_numeric(*n.children[1], env);
    case Kind::kDivide: {
      const double num = evaluate_numeric(*n.children[0], env);
      const double den = evaluate_numeric(*n.children[1], env);
      if (std::fabs(den) < kDivisionEpsilon) {
        throw Error(Errc::kDivisionGuard,
                    "division guard: |" + print(*n.children[1]) + "| < 1e-9");
      }
      return num / den;
    }
    case Kind::kAbs:
      return std::fabs(evaluate_numeric(*n.children[0], env));
    default:
      type_error("boolean node in numeric context");
  }
}

bool evaluate(const ExprNode& n, const EvaluationContext& env) {
  switch (n.kind) {
    case Kind::kCompare: {
      const double a = evaluate_numeric(*n.children[0], env);
      const double b = evaluate_numeric(*n.children[1], env);
      switch (n.op) {
        case CompareOp::kLess: return a < b;
        case CompareOp::kLessEqual: return a <= b;
        case CompareOp::kGreater: return a > b;
        case CompareOp::kGreaterEqual: return a >= b;
        case CompareOp::kEqual: return std::fabs(a - b) <= kEqualityTolerance;
      }
      return false;
    }
    case Kind::kAnd:
      for (const auto& c : n.children) {
        if (!evaluate(*c, env)) return false;
      }
      return true;
    case Kind::kOr:
      for (const auto& c : n.children) {
        if (evaluate(*c, env)) return true;
      }
      return false;
    case Kind::kNot:
      return !evaluate(*n.children[0], env);
    case Kind::kCollision:
      return env.collision(n.names[0], n.names[1]);
    case Kind::kLinked:
      return env.linked(n.names[0], n.boundary);
    default:
      type_error("numeric node in boolean context");
  }
}

bool evaluate(const ConditionExpr& condition, const EvaluationContext& env) {
  return evaluate(condition.root(), env);
}

std::set<std::string> free_variables(const ExprNode& node) {
  std::set<std::string> out;
  visit(node, [&](const ExprNode& n) {
    if (n.kind == Kind::kVariable) out.insert(n.names.front());
  });
  return out;
}

std::set<std::string> free_variables(const ConditionExpr& condition) {
  return free_variables(condition.root());
}

std::set<std::string> collision_actors(const ConditionExpr& condition) {
  std::set<std::string> out;
  visit(condition.root(), [&](const ExprNode& n) {
    if (n.kind == Kind::kCollision) out.insert(n.names.begin(), n.names.end());
  });
  return out;
}

std::vector<LinkReference> link_references(const ConditionExpr& condition) {
  std::vector<LinkReference> out;
  visit(condition.root(), [&](const ExprNode& n) {
    if (n.kind == Kind::kLinked) out.push_back({n.names.front(), n.boundary});
  });
  return out;
}

std::optional<LinkReference> as_mode_transition(
    const ConditionExpr& condition) {
  const auto& root = condition.root();
  if (root.kind != Kind::kLinked) return std::nullopt;
  return LinkReference{root.names.front(), root.boundary};
}

std::vector<ExprPtr> disjuncts(const ConditionExpr& condition) {
  if (condition.root().kind == Kind::kOr) return condition.root().children;
  return {condition.root_ptr()};
}

}  // namespace sdm
