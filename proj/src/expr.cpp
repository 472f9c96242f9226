#include "germ/expr.hpp"

#include <cctype>

namespace germ::expr {

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t line, std::size_t offset)
      : text_(text), line_(line), offset_(offset) {}

  NodePtr parse_all() {
    skip_ws();
    if (at_end()) fail("empty expression");
    NodePtr n = parse_expr();
    skip_ws();
    if (!at_end()) {
      if (peek() == ')') fail("unbalanced parenthesis: unexpected ')'");
      fail(std::string("unexpected character '") + peek() + "'");
    }
    return n;
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t offset_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  std::size_t column() const { return offset_ + pos_ + 1; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(line_) + ", column " + std::to_string(column()) +
                         ": " + msg,
                     line_, column());
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  NodePtr make(Node::Kind k, NodePtr l, NodePtr r, std::size_t col) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    n->column = col;
    return n;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') return lhs;
      std::size_t col = column();
      ++pos_;
      NodePtr rhs = parse_term();
      lhs = make(c == '+' ? Node::Kind::Add : Node::Kind::Sub, lhs, rhs, col);
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      std::size_t col = column();
      ++pos_;
      NodePtr rhs = parse_unary();
      lhs = make(c == '*' ? Node::Kind::Mul : Node::Kind::Div, lhs, rhs, col);
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    char c = peek();
    if (c == '-' || c == '+') {
      std::size_t col = column();
      ++pos_;
      NodePtr inner = parse_unary();
      if (c == '+') return inner;
      return make(Node::Kind::Neg, inner, nullptr, col);
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    skip_ws();
    if (peek() != '^') return base;
    std::size_t col = column();
    ++pos_;
    skip_ws();
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail("exponent must be a non-negative integer");
    unsigned long e = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      e = e * 10 + static_cast<unsigned long>(peek() - '0');
      if (e > 100000) fail("exponent too large");
      ++pos_;
    }
    auto n = make(Node::Kind::Pow, base, nullptr, col);
    std::const_pointer_cast<Node>(n)->exponent = e;
    return n;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (at_end()) fail("unexpected end of expression");
    char c = peek();
    std::size_t col = column();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      skip_ws();
      if (peek() != ')') fail("unbalanced parenthesis: expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Number;
      n->value = mpz_class(std::string(text_.substr(start, pos_ - start)));
      n->column = col;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                           peek() == '\''))
        ++pos_;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Variable;
      n->name = std::string(text_.substr(start, pos_ - start));
      n->column = col;
      return n;
    }
    if (c == ')') fail("unbalanced parenthesis: unexpected ')'");
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

NodePtr parse(std::string_view text, std::size_t line, std::size_t column_offset) {
  return Parser(text, line, column_offset).parse_all();
}

std::vector<std::pair<std::string, std::size_t>> split_top_level(std::string_view text, char sep,
                                                                 std::size_t line,
                                                                 std::size_t column_offset) {
  std::vector<std::pair<std::string, std::size_t>> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (--depth < 0)
        throw ParseError("line " + std::to_string(line) + ", column " +
                             std::to_string(column_offset + i + 1) +
                             ": unbalanced parenthesis: unexpected ')'",
                         line, column_offset + i + 1);
    } else if (c == sep && depth == 0) {
      parts.emplace_back(std::string(text.substr(start, i - start)), column_offset + start);
      start = i + 1;
    }
  }
  if (depth != 0)
    throw ParseError("line " + std::to_string(line) + ", column " +
                         std::to_string(column_offset + text.size() + 1) +
                         ": unbalanced parenthesis: missing ')'",
                     line, column_offset + text.size() + 1);
  parts.emplace_back(std::string(text.substr(start)), column_offset + start);
  return parts;
}

std::vector<NodePtr> parse_tuple(std::string_view text, std::size_t line,
                                 std::size_t column_offset) {
  std::size_t b = 0;
  while (b < text.size() && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  std::size_t e = text.size();
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  if (b >= e || text[b] != '(')
    throw ParseError("line " + std::to_string(line) + ", column " +
                         std::to_string(column_offset + b + 1) + ": expected '('",
                     line, column_offset + b + 1);
  // Reject unbalanced input before looking at the closing bracket.
  split_top_level(text.substr(b, e - b), '\0', line, column_offset + b);
  if (text[e - 1] != ')')
    throw ParseError("line " + std::to_string(line) + ", column " +
                         std::to_string(column_offset + e + 1) + ": unbalanced parenthesis",
                     line, column_offset + e + 1);
  std::string_view inner = text.substr(b + 1, e - b - 2);
  std::vector<NodePtr> out;
  bool blank = true;
  for (char c : inner)
    if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
  if (blank) return out;
  for (auto& [piece, col] : split_top_level(inner, ',', line, column_offset + b + 1))
    out.push_back(parse(piece, line, col));
  return out;
}

void collect_variables(const Node& node, std::vector<std::string>& out) {
  if (node.kind == Node::Kind::Variable) {
    for (auto& s : out)
      if (s == node.name) return;
    out.push_back(node.name);
    return;
  }
  if (node.lhs) collect_variables(*node.lhs, out);
  if (node.rhs) collect_variables(*node.rhs, out);
}

}  // namespace germ::expr
