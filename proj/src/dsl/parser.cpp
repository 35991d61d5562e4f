// Copyright 2026 The srtr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <charconv>
#include <numbers>
#include <set>
#include <sstream>

#include "srtr/dsl.hpp"

namespace srtr {
namespace {

enum class Tok { kEnd, kIdent, kNsIdent, kNumber, kString, kPunct };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;    // identifier name, punctuation, or string contents
  std::string ns;      // "in", "var" or "param" for kNsIdent
  double number = 0;   // kNumber
  SourcePos pos;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd: return "end of input";
    case Tok::kIdent: return "'" + t.text + "'";
    case Tok::kNsIdent: return "'" + t.ns + ":" + t.text + "'";
    case Tok::kNumber: return "number '" + t.text + "'";
    case Tok::kString: return "string \"" + t.text + "\"";
    case Tok::kPunct: return "'" + t.text + "'";
  }
  return "?";
}

[[noreturn]] void syntax_error(SourcePos pos, const std::string& msg) {
  throw Error(ErrorKind::kSyntaxError, format_pos(pos) + ": " + msg);
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.pos = {line_, col_};
      if (at_end()) {
        out.push_back(t);
        return out;
      }
      char c = peek();
      if (ident_start(c)) {
        std::string word = take_while(ident_char);
        if ((word == "in" || word == "var" || word == "param") &&
            peek() == ':' && ident_start(peek(1))) {
          advance();
          t.kind = Tok::kNsIdent;
          t.ns = word;
          t.text = take_while(ident_char);
        } else {
          t.kind = Tok::kIdent;
          t.text = word;
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        lex_number(t);
      } else if (c == '"') {
        advance();
        t.kind = Tok::kString;
        while (!at_end() && peek() != '"' && peek() != '\n') t.text += advance();
        if (at_end() || peek() != '"') syntax_error(t.pos, "unterminated string");
        advance();
      } else {
        t.kind = Tok::kPunct;
        static const char* kTwo[] = {":=", "<=", ">=", "==", "!=", "&&", "||"};
        for (const char* p : kTwo) {
          if (c == p[0] && peek(1) == p[1]) {
            t.text = p;
            advance();
            advance();
            break;
          }
        }
        if (t.text.empty()) {
          if (std::string_view("{}()<>;,:+-*/=").find(c) == std::string_view::npos) {
            syntax_error(t.pos, std::string("unexpected character '") + c + "'");
          }
          t.text = std::string(1, advance());
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t k = 0) const {
    return i_ + k < src_.size() ? src_[i_ + k] : '\0';
  }
  char advance() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  template <class Pred>
  std::string take_while(Pred pred) {
    std::string s;
    while (!at_end() && pred(peek())) s += advance();
    return s;
  }

  void skip_space() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
        continue;
      }
      return;
    }
  }

  void lex_number(Token& t) {
    std::string s = take_while([](char c) {
      return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
    });
    if (peek() == 'e' || peek() == 'E') {
      char sign = peek(1);
      bool has_sign = sign == '+' || sign == '-';
      if (std::isdigit(static_cast<unsigned char>(peek(has_sign ? 2 : 1)))) {
        s += advance();
        if (has_sign) s += advance();
        s += take_while([](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
      }
    }
    double value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      syntax_error(t.pos, "malformed number '" + s + "'");
    }
    t.kind = Tok::kNumber;
    t.text = s;
    t.number = value;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::optional<BinaryOp> infix_op(const Token& t) {
  if (t.kind != Tok::kPunct) return std::nullopt;
  static const BinaryOp kInfix[] = {
      BinaryOp::kAdd, BinaryOp::kSub, BinaryOp::kMul, BinaryOp::kDiv,
      BinaryOp::kLt,  BinaryOp::kGt,  BinaryOp::kLe,  BinaryOp::kGe,
      BinaryOp::kEq,  BinaryOp::kNe,  BinaryOp::kAnd, BinaryOp::kOr};
  for (BinaryOp op : kInfix) {
    if (op_info(op).spelling == t.text) return op;
  }
  return std::nullopt;
}

// Vector-literal components are parsed above the comparison level so that
// the closing '>' is not taken for an operator.
constexpr int kVectorComponentPrecedence = 5;

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  TransitionFn parse_file() {
    TransitionFn fn;
    parse_header(fn.sig);
    expect_word("transition");
    fn.body = parse_block_stmt();
    expect_end();
    return fn;
  }

  StmtPtr parse_block_only() {
    StmtPtr s = parse_block_stmt();
    expect_end();
    return s;
  }

  ExprPtr parse_expression_only() {
    ExprPtr e = parse_expr(1);
    expect_end();
    return e;
  }

 private:
  const Token& cur() const { return toks_[k_]; }
  const Token& next() { return toks_[k_ < toks_.size() - 1 ? k_++ : k_]; }

  bool is_punct(std::string_view p) const {
    return cur().kind == Tok::kPunct && cur().text == p;
  }
  bool is_word(std::string_view w) const {
    return cur().kind == Tok::kIdent && cur().text == w;
  }

  [[noreturn]] void fail_expected(const std::string& what) const {
    syntax_error(cur().pos, "expected " + what + ", found " + describe(cur()));
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail_expected("'" + std::string(p) + "'");
    next();
  }
  void expect_word(std::string_view w) {
    if (!is_word(w)) fail_expected("'" + std::string(w) + "'");
    next();
  }
  void expect_end() {
    if (cur().kind != Tok::kEnd) fail_expected("end of input");
  }
  std::string expect_ident(const std::string& what) {
    if (cur().kind != Tok::kIdent) fail_expected(what);
    return next().text;
  }

  // ---- header ------------------------------------------------------------

  void parse_header(Signature& sig) {
    expect_word("states");
    expect_punct("{");
    std::set<std::string> seen;
    do {
      SourcePos pos = cur().pos;
      std::string s = expect_ident("state name");
      if (!seen.insert(s).second) syntax_error(pos, "duplicate state '" + s + "'");
      sig.states.push_back(s);
    } while (is_punct(",") && (next(), true));
    expect_punct("}");
    expect_word("start");
    SourcePos start_pos = cur().pos;
    sig.start = expect_ident("start state");
    expect_word("end");
    SourcePos end_pos = cur().pos;
    sig.end = expect_ident("end state");
    expect_punct(";");
    if (!sig.has_state(sig.start)) unbound_state(start_pos, sig.start);
    if (!sig.has_state(sig.end)) unbound_state(end_pos, sig.end);

    std::set<std::string> sections;
    std::set<std::string> var_names;
    while (!is_word("transition")) {
      SourcePos pos = cur().pos;
      std::string section = expect_ident("'inputs', 'vars', 'locals', 'params' or 'transition'");
      if (!sections.insert(section).second) {
        syntax_error(pos, "duplicate '" + section + "' section");
      }
      if (section == "inputs") {
        parse_list([&] {
          auto d = parse_typed_name();
          if (sig.input_type(d.name)) syntax_error(pos, "duplicate input '" + d.name + "'");
          sig.inputs.push_back(d);
        });
      } else if (section == "vars") {
        parse_list([&] {
          SourcePos p = cur().pos;
          auto d = parse_typed_name();
          expect_punct("=");
          VarDeclaration v{d.name, d.type, parse_literal()};
          if (type_of(v.initial) != v.type) {
            throw Error(ErrorKind::kTypeError,
                        format_pos(p) + ": initial value of '" + v.name +
                            "' has type " + type_name(type_of(v.initial)) +
                            ", expected " + type_name(v.type));
          }
          if (!var_names.insert(v.name).second) syntax_error(p, "duplicate variable '" + v.name + "'");
          sig.vars.push_back(v);
        });
      } else if (section == "locals") {
        parse_list([&] {
          SourcePos p = cur().pos;
          auto d = parse_typed_name();
          if (!var_names.insert(d.name).second) syntax_error(p, "duplicate variable '" + d.name + "'");
          sig.locals.push_back(d);
        });
      } else if (section == "params") {
        parse_list([&] {
          SourcePos p = cur().pos;
          std::string name = expect_ident("parameter name");
          if (sig.has_param(name)) syntax_error(p, "duplicate parameter '" + name + "'");
          sig.params.push_back(name);
        });
      } else {
        syntax_error(pos, "unknown section '" + section + "'");
      }
    }
  }

  [[noreturn]] void unbound_state(SourcePos pos, const std::string& s) {
    throw Error(ErrorKind::kUnboundIdentifier,
                format_pos(pos) + ": state '" + s + "' is not declared");
  }

  template <class F>
  void parse_list(F item) {
    expect_punct("{");
    if (!is_punct("}")) {
      item();
      while (is_punct(",")) {
        next();
        item();
      }
    }
    expect_punct("}");
    expect_punct(";");
  }

  Declaration parse_typed_name() {
    Declaration d;
    d.name = expect_ident("identifier");
    expect_punct(":");
    SourcePos pos = cur().pos;
    std::string t = expect_ident("type ('num' or 'vec2')");
    if (t == "num") {
      d.type = Type::kNum;
    } else if (t == "vec2") {
      d.type = Type::kVec2;
    } else {
      syntax_error(pos, "expected type ('num' or 'vec2'), found '" + t + "'");
    }
    return d;
  }

  double parse_signed_number() {
    bool negative = false;
    if (is_punct("-")) {
      next();
      negative = true;
    }
    if (cur().kind != Tok::kNumber) fail_expected("number");
    double v = next().number;
    return negative ? -v : v;
  }

  Value parse_literal() {
    if (is_punct("<")) {
      next();
      double x = parse_signed_number();
      expect_punct(",");
      double y = parse_signed_number();
      expect_punct(">");
      return Vec2{x, y};
    }
    return parse_signed_number();
  }

  // ---- statements --------------------------------------------------------

  StmtPtr parse_block_stmt() {
    SourcePos pos = cur().pos;
    expect_punct("{");
    std::vector<StmtPtr> body;
    while (!is_punct("}")) {
      if (cur().kind == Tok::kEnd) fail_expected("'}'");
      body.push_back(parse_stmt());
    }
    next();
    return Stmt::block(std::move(body), pos);
  }

  StmtPtr parse_stmt() {
    SourcePos pos = cur().pos;
    if (is_punct("{")) return parse_block_stmt();
    if (is_word("return")) {
      next();
      ExprPtr e = parse_expr(1);
      expect_punct(";");
      return Stmt::make_return(e, pos);
    }
    if (is_word("if")) {
      next();
      expect_punct("(");
      ExprPtr cond = parse_expr(1);
      expect_punct(")");
      StmtPtr then_branch = parse_stmt();
      StmtPtr else_branch;
      if (is_word("else")) {
        next();
        else_branch = parse_stmt();
      } else {
        else_branch = Stmt::block({}, cur().pos);
      }
      return Stmt::make_if(cond, then_branch, else_branch, pos);
    }
    if (cur().kind == Tok::kNsIdent) {
      if (cur().ns != "var") {
        syntax_error(pos, "only 'var:' identifiers can be assigned, found " +
                              describe(cur()));
      }
      std::string target = next().text;
      expect_punct(":=");
      ExprPtr e = parse_expr(1);
      expect_punct(";");
      return Stmt::assign(target, e, pos);
    }
    fail_expected("statement ('return', 'if', '{' or 'var:x := ...')");
  }

  // ---- expressions -------------------------------------------------------

  ExprPtr parse_expr(int min_prec) {
    ExprPtr lhs = parse_unary();
    for (;;) {
      auto op = infix_op(cur());
      if (!op) return lhs;
      int prec = op_info(*op).precedence;
      if (prec < min_prec) return lhs;
      SourcePos pos = cur().pos;
      next();
      ExprPtr rhs = parse_expr(prec + 1);
      lhs = Expr::binary(*op, lhs, rhs, pos);
    }
  }

  ExprPtr parse_unary() {
    if (is_punct("-")) {
      SourcePos pos = cur().pos;
      next();
      if (cur().kind == Tok::kNumber) return Expr::constant(-next().number, pos);
      return Expr::unary(UnaryOp::kNeg, parse_unary(), pos);
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token& t = cur();
    SourcePos pos = t.pos;
    switch (t.kind) {
      case Tok::kNumber:
        return Expr::constant(next().number, pos);
      case Tok::kString:
        return Expr::constant(StateName{next().text}, pos);
      case Tok::kNsIdent: {
        Token id = next();
        if (id.ns == "in") return Expr::input(id.text, pos);
        if (id.ns == "var") return Expr::var(id.text, pos);
        return Expr::param(id.text, pos);
      }
      case Tok::kIdent: {
        std::string word = next().text;
        if (word == "state") return Expr::state_ref(pos);
        if (word == "true") return Expr::constant(true, pos);
        if (word == "false") return Expr::constant(false, pos);
        if (word == "pi") return Expr::constant(std::numbers::pi, pos);
        if (auto op = unary_function(word)) {
          expect_punct("(");
          ExprPtr arg = parse_expr(1);
          expect_punct(")");
          return Expr::unary(*op, arg, pos);
        }
        if (auto op = binary_function(word)) {
          expect_punct("(");
          ExprPtr a = parse_expr(1);
          expect_punct(",");
          ExprPtr b = parse_expr(1);
          expect_punct(")");
          return Expr::binary(*op, a, b, pos);
        }
        syntax_error(pos, "unknown identifier '" + word +
                              "' (identifiers need an 'in:', 'var:' or "
                              "'param:' prefix)");
      }
      case Tok::kPunct:
        if (t.text == "(") {
          next();
          ExprPtr e = parse_expr(1);
          expect_punct(")");
          return e;
        }
        if (t.text == "<") {
          next();
          ExprPtr x = parse_expr(kVectorComponentPrecedence);
          expect_punct(",");
          ExprPtr y = parse_expr(kVectorComponentPrecedence);
          expect_punct(">");
          if (x->kind == Expr::Kind::kConst && y->kind == Expr::Kind::kConst &&
              type_of(x->value) == Type::kNum && type_of(y->value) == Type::kNum) {
            return Expr::constant(
                Vec2{std::get<double>(x->value), std::get<double>(y->value)}, pos);
          }
          return Expr::vec2(x, y, pos);
        }
        break;
      case Tok::kEnd:
        break;
    }
    fail_expected("expression");
  }

  std::vector<Token> toks_;
  std::size_t k_ = 0;
};

}  // namespace

TransitionFn parse_rsm(std::string_view source) {
  TransitionFn fn = Parser(source).parse_file();
  auto diags = typecheck(fn);
  if (!diags.empty()) {
    std::string msg = format_diagnostic(diags.front());
    if (diags.size() > 1) {
      msg += " (and " + std::to_string(diags.size() - 1) + " more)";
    }
    throw Error(diags.front().kind, msg);
  }
  return fn;
}

StmtPtr parse_block(std::string_view source) {
  return Parser(source).parse_block_only();
}

ExprPtr parse_expression(std::string_view source) {
  return Parser(source).parse_expression_only();
}

}  // namespace srtr
