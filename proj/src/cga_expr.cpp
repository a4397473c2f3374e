#include "cgaedit/cga_expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include "cgaedit/format.hpp"

namespace cgaedit {

std::string_view to_string(CgaErrorKind kind) {
  switch (kind) {
    case CgaErrorKind::lexical: return "lexical";
    case CgaErrorKind::syntax: return "syntax";
    case CgaErrorKind::arity: return "arity";
    case CgaErrorKind::plane_argument: return "plane_argument";
    case CgaErrorKind::unknown_identifier: return "unknown_identifier";
    case CgaErrorKind::type: return "type";
    case CgaErrorKind::domain: return "domain";
    case CgaErrorKind::non_finite: return "non_finite";
    case CgaErrorKind::request: return "request";
  }
  return "unknown";
}

CgaError::CgaError(CgaErrorKind kind, const std::string &message, std::size_t position)
    : Error(std::string(to_string(kind)) + " error at " + std::to_string(position) + ": " + message),
      kind_(kind),
      position_(position) {}

bool CgaAst::is_pure_dilation() const { return factors.size() == 1 && factors.front().head == MotorHead::D; }

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { number, ident, lparen, rparen, comma, star, plus, minus, slash, end };

struct Token {
  Tok type = Tok::end;
  std::string_view text;
  double value = 0.0;
  std::size_t pos = 0;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
      while (i < src.size() && is_digit(src[i])) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (i < src.size() && is_digit(src[i])) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && is_digit(src[j])) {
          i = j;
          while (i < src.size() && is_digit(src[i])) ++i;
        }
      }
      if (i < src.size() && is_ident_char(src[i]))
        throw CgaError(CgaErrorKind::lexical, "malformed number", start);
      std::string literal(src.substr(start, i - start));
      if (literal.back() == '.') literal.pop_back();
      if (literal.front() == '.') literal.insert(literal.begin(), '0');
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(literal.data(), literal.data() + literal.size(), value);
      if (ec != std::errc() || ptr != literal.data() + literal.size())
        throw CgaError(CgaErrorKind::lexical, "malformed number", start);
      out.push_back({Tok::number, src.substr(start, i - start), value, start});
      continue;
    }
    if (is_ident_start(c)) {
      while (true) {
        while (i < src.size() && is_ident_char(src[i])) ++i;
        if (i + 1 < src.size() && src[i] == '.' && is_ident_start(src[i + 1])) {
          ++i;
          continue;
        }
        break;
      }
      out.push_back({Tok::ident, src.substr(start, i - start), 0.0, start});
      continue;
    }
    Tok type;
    switch (c) {
      case '(': type = Tok::lparen; break;
      case ')': type = Tok::rparen; break;
      case ',': type = Tok::comma; break;
      case '*': type = Tok::star; break;
      case '+': type = Tok::plus; break;
      case '-': type = Tok::minus; break;
      case '/': type = Tok::slash; break;
      default: throw CgaError(CgaErrorKind::lexical, std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({type, src.substr(start, 1), 0.0, start});
    ++i;
  }
  out.push_back({Tok::end, {}, 0.0, src.size()});
  return out;
}

// ---------------------------------------------------------------------------
// Identifier table

enum class Symbol { motor_t, motor_r, motor_d, e1, e2, e3, no, ni, pi, sqrt };

std::optional<Symbol> lookup(std::string_view name) {
  if (name == "T") return Symbol::motor_t;
  if (name == "R") return Symbol::motor_r;
  if (name == "D") return Symbol::motor_d;
  if (name == "e1") return Symbol::e1;
  if (name == "e2") return Symbol::e2;
  if (name == "e3") return Symbol::e3;
  if (name == "no") return Symbol::no;
  if (name == "ni") return Symbol::ni;
  if (name == "pi" || name == "np.pi" || name == "math.pi") return Symbol::pi;
  if (name == "sqrt" || name == "math.sqrt" || name == "np.sqrt") return Symbol::sqrt;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Static typing of argument expressions

enum class ValueType { scalar, vector, conformal };

ValueType join_vectors(ValueType a, ValueType b) {
  return (a == ValueType::conformal || b == ValueType::conformal) ? ValueType::conformal : ValueType::vector;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
  explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

  CgaAst parse() {
    CgaAst ast;
    if (peek().type == Tok::end) throw CgaError(CgaErrorKind::syntax, "empty expression", 0);
    ast.factors.push_back(factor());
    while (peek().type == Tok::star) {
      advance();
      ast.factors.push_back(factor());
    }
    if (peek().type != Tok::end) throw CgaError(CgaErrorKind::syntax, "expected '*' between motor factors", peek().pos);
    return ast;
  }

private:
  struct Typed {
    ExprNode node;
    ValueType type;
    std::size_t pos;
  };

  const Token &peek() const { return tokens_[index_]; }
  const Token &advance() { return tokens_[index_++]; }

  void expect(Tok type, const char *what) {
    if (peek().type != type) throw CgaError(CgaErrorKind::syntax, std::string("expected ") + what, peek().pos);
    advance();
  }

  MotorCall factor() {
    const Token &tok = peek();
    if (tok.type != Tok::ident) throw CgaError(CgaErrorKind::syntax, "expected motor T(...), R(...) or D(...)", tok.pos);
    const auto symbol = lookup(tok.text);
    if (!symbol) throw CgaError(CgaErrorKind::unknown_identifier, "unknown identifier '" + std::string(tok.text) + "'", tok.pos);
    MotorCall call;
    switch (*symbol) {
      case Symbol::motor_t: call.head = MotorHead::T; break;
      case Symbol::motor_r: call.head = MotorHead::R; break;
      case Symbol::motor_d: call.head = MotorHead::D; break;
      default: throw CgaError(CgaErrorKind::syntax, "expected motor T(...), R(...) or D(...)", tok.pos);
    }
    const std::size_t call_pos = tok.pos;
    advance();
    expect(Tok::lparen, "'('");
    std::vector<Typed> args;
    if (peek().type != Tok::rparen) {
      args.push_back(sum());
      while (peek().type == Tok::comma) {
        advance();
        args.push_back(sum());
      }
    }
    expect(Tok::rparen, "')'");

    const std::size_t expected = call.head == MotorHead::R ? 3 : 1;
    if (args.size() != expected) {
      const char *name = call.head == MotorHead::T ? "T" : (call.head == MotorHead::R ? "R" : "D");
      throw CgaError(CgaErrorKind::arity,
                     std::string(name) + " takes " + std::to_string(expected) + " argument(s), got " +
                         std::to_string(args.size()),
                     call_pos);
    }

    switch (call.head) {
      case MotorHead::T:
        if (args[0].type != ValueType::vector)
          throw CgaError(CgaErrorKind::type, "T expects a Euclidean displacement over e1, e2, e3", args[0].pos);
        break;
      case MotorHead::D:
        if (args[0].type != ValueType::scalar) throw CgaError(CgaErrorKind::type, "D expects a scalar factor", args[0].pos);
        break;
      case MotorHead::R:
        if (args[0].type != ValueType::scalar) throw CgaError(CgaErrorKind::type, "R expects a scalar angle", args[0].pos);
        for (int k = 1; k <= 2; ++k) {
          if (args[k].node.kind != ExprNode::Kind::basis)
            throw CgaError(CgaErrorKind::plane_argument, "R plane arguments must be basis vectors e1, e2 or e3",
                           args[k].pos);
        }
        if (args[1].node.basis == args[2].node.basis)
          throw CgaError(CgaErrorKind::plane_argument, "R plane needs two distinct basis vectors", args[2].pos);
        break;
    }
    for (auto &a : args) call.args.push_back(std::move(a.node));
    return call;
  }

  Typed sum() {
    Typed left = product();
    while (peek().type == Tok::plus || peek().type == Tok::minus) {
      const Token op = advance();
      Typed right = product();
      if ((left.type == ValueType::scalar) != (right.type == ValueType::scalar))
        throw CgaError(CgaErrorKind::type, "cannot add a scalar and a vector", op.pos);
      const ValueType type = left.type == ValueType::scalar ? ValueType::scalar : join_vectors(left.type, right.type);
      ExprNode node{op.type == Tok::plus ? ExprNode::Kind::add : ExprNode::Kind::subtract, 0.0, 0,
                    {std::move(left.node), std::move(right.node)}};
      left = {std::move(node), type, left.pos};
    }
    return left;
  }

  Typed product() {
    Typed left = unary();
    while (peek().type == Tok::star || peek().type == Tok::slash) {
      const Token op = advance();
      Typed right = unary();
      ValueType type;
      if (op.type == Tok::star) {
        if (left.type != ValueType::scalar && right.type != ValueType::scalar)
          throw CgaError(CgaErrorKind::type, "product of two vectors is not a displacement", op.pos);
        type = left.type == ValueType::scalar ? right.type : left.type;
      } else {
        if (right.type != ValueType::scalar) throw CgaError(CgaErrorKind::type, "division by a vector", op.pos);
        type = left.type;
      }
      ExprNode node{op.type == Tok::star ? ExprNode::Kind::multiply : ExprNode::Kind::divide, 0.0, 0,
                    {std::move(left.node), std::move(right.node)}};
      left = {std::move(node), type, left.pos};
    }
    return left;
  }

  Typed unary() {
    if (peek().type == Tok::minus) {
      const std::size_t pos = advance().pos;
      Typed inner = unary();
      if (inner.node.kind == ExprNode::Kind::number) {
        inner.node.value = -inner.node.value;
        inner.pos = pos;
        return inner;
      }
      return {ExprNode{ExprNode::Kind::negate, 0.0, 0, {std::move(inner.node)}}, inner.type, pos};
    }
    return primary();
  }

  Typed primary() {
    const Token tok = peek();
    switch (tok.type) {
      case Tok::number:
        advance();
        return {ExprNode{ExprNode::Kind::number, tok.value, 0, {}}, ValueType::scalar, tok.pos};
      case Tok::lparen: {
        advance();
        Typed inner = sum();
        expect(Tok::rparen, "')'");
        inner.pos = tok.pos;
        return inner;
      }
      case Tok::ident: {
        const auto symbol = lookup(tok.text);
        if (!symbol)
          throw CgaError(CgaErrorKind::unknown_identifier, "unknown identifier '" + std::string(tok.text) + "'", tok.pos);
        advance();
        switch (*symbol) {
          case Symbol::e1:
          case Symbol::e2:
          case Symbol::e3: {
            const int b = *symbol == Symbol::e1 ? 1 : (*symbol == Symbol::e2 ? 2 : 3);
            return {ExprNode{ExprNode::Kind::basis, 0.0, b, {}}, ValueType::vector, tok.pos};
          }
          case Symbol::no: return {ExprNode{ExprNode::Kind::null_origin, 0.0, 0, {}}, ValueType::conformal, tok.pos};
          case Symbol::ni: return {ExprNode{ExprNode::Kind::null_infinity, 0.0, 0, {}}, ValueType::conformal, tok.pos};
          case Symbol::pi: return {ExprNode{ExprNode::Kind::pi, 0.0, 0, {}}, ValueType::scalar, tok.pos};
          case Symbol::sqrt: {
            expect(Tok::lparen, "'(' after sqrt");
            Typed inner = sum();
            expect(Tok::rparen, "')'");
            if (inner.type != ValueType::scalar) throw CgaError(CgaErrorKind::type, "sqrt expects a scalar", inner.pos);
            return {ExprNode{ExprNode::Kind::sqrt, 0.0, 0, {std::move(inner.node)}}, ValueType::scalar, tok.pos};
          }
          default: throw CgaError(CgaErrorKind::syntax, "motor call inside an argument", tok.pos);
        }
      }
      case Tok::end: throw CgaError(CgaErrorKind::syntax, "unexpected end of expression", tok.pos);
      default: throw CgaError(CgaErrorKind::syntax, "unexpected '" + std::string(tok.text) + "'", tok.pos);
    }
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

// ---------------------------------------------------------------------------
// Printing

int precedence(const ExprNode &n) {
  switch (n.kind) {
    case ExprNode::Kind::add:
    case ExprNode::Kind::subtract: return 1;
    case ExprNode::Kind::multiply:
    case ExprNode::Kind::divide: return 2;
    case ExprNode::Kind::negate: return 3;
    default: return 4;
  }
}

void print_node(const ExprNode &n, std::string &out) {
  auto child = [&](const ExprNode &c, bool parens) {
    if (parens) out += '(';
    print_node(c, out);
    if (parens) out += ')';
  };
  switch (n.kind) {
    case ExprNode::Kind::number: out += format_number(n.value); break;
    case ExprNode::Kind::pi: out += "pi"; break;
    case ExprNode::Kind::basis: out += "e" + std::to_string(n.basis); break;
    case ExprNode::Kind::null_origin: out += "no"; break;
    case ExprNode::Kind::null_infinity: out += "ni"; break;
    case ExprNode::Kind::sqrt:
      out += "sqrt";
      child(n.children[0], true);
      break;
    case ExprNode::Kind::negate:
      out += '-';
      child(n.children[0], precedence(n.children[0]) < 3 || n.children[0].kind == ExprNode::Kind::number);
      break;
    default: {
      const int p = precedence(n);
      const char *op = n.kind == ExprNode::Kind::add        ? " + "
                       : n.kind == ExprNode::Kind::subtract ? " - "
                       : n.kind == ExprNode::Kind::multiply ? "*"
                                                            : "/";
      child(n.children[0], precedence(n.children[0]) < p);
      out += op;
      child(n.children[1], precedence(n.children[1]) <= p);
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluation

// Linear combination over {e1, e2, e3, no, ni} or a scalar.
struct Value {
  bool is_vector = false;
  double scalar = 0.0;
  std::array<double, 5> vec{};
};

Value eval(const ExprNode &n) {
  Value v;
  switch (n.kind) {
    case ExprNode::Kind::number: v.scalar = n.value; break;
    case ExprNode::Kind::pi: v.scalar = std::numbers::pi; break;
    case ExprNode::Kind::basis:
      v.is_vector = true;
      v.vec[n.basis - 1] = 1.0;
      break;
    case ExprNode::Kind::null_origin:
      v.is_vector = true;
      v.vec[3] = 1.0;
      break;
    case ExprNode::Kind::null_infinity:
      v.is_vector = true;
      v.vec[4] = 1.0;
      break;
    case ExprNode::Kind::sqrt: {
      const Value a = eval(n.children[0]);
      if (a.scalar < 0) throw CgaError(CgaErrorKind::domain, "sqrt of a negative number");
      v.scalar = std::sqrt(a.scalar);
      break;
    }
    case ExprNode::Kind::negate: {
      v = eval(n.children[0]);
      v.scalar = -v.scalar;
      for (double &c : v.vec) c = -c;
      break;
    }
    case ExprNode::Kind::add:
    case ExprNode::Kind::subtract: {
      const Value a = eval(n.children[0]);
      const Value b = eval(n.children[1]);
      const double sign = n.kind == ExprNode::Kind::add ? 1.0 : -1.0;
      v.is_vector = a.is_vector;
      v.scalar = a.scalar + sign * b.scalar;
      for (int i = 0; i < 5; ++i) v.vec[i] = a.vec[i] + sign * b.vec[i];
      break;
    }
    case ExprNode::Kind::multiply: {
      const Value a = eval(n.children[0]);
      const Value b = eval(n.children[1]);
      if (a.is_vector) {
        v = a;
        for (double &c : v.vec) c *= b.scalar;
      } else if (b.is_vector) {
        v = b;
        for (double &c : v.vec) c *= a.scalar;
      } else {
        v.scalar = a.scalar * b.scalar;
      }
      break;
    }
    case ExprNode::Kind::divide: {
      const Value a = eval(n.children[0]);
      const Value b = eval(n.children[1]);
      if (b.scalar == 0.0) throw CgaError(CgaErrorKind::non_finite, "division by zero");
      v = a;
      v.scalar /= b.scalar;
      for (double &c : v.vec) c /= b.scalar;
      break;
    }
  }
  if (!std::isfinite(v.scalar)) throw CgaError(CgaErrorKind::non_finite, "non-finite intermediate value");
  for (double c : v.vec)
    if (!std::isfinite(c)) throw CgaError(CgaErrorKind::non_finite, "non-finite intermediate value");
  return v;
}

const Multivector &euclidean_basis(int i) {
  static const std::array<Multivector, 3> basis{Multivector::basis(1), Multivector::basis(2), Multivector::basis(3)};
  return basis[i - 1];
}

}  // namespace

CgaAst parse_cga(std::string_view expr) { return Parser(expr).parse(); }

std::string print_expr(const ExprNode &node) {
  std::string out;
  print_node(node, out);
  return out;
}

std::string print_cga(const CgaAst &ast) {
  std::string out;
  for (std::size_t i = 0; i < ast.factors.size(); ++i) {
    const auto &f = ast.factors[i];
    if (i) out += '*';
    out += f.head == MotorHead::T ? "T(" : (f.head == MotorHead::R ? "R(" : "D(");
    for (std::size_t k = 0; k < f.args.size(); ++k) {
      if (k) out += ", ";
      out += print_expr(f.args[k]);
    }
    out += ')';
  }
  return out;
}

MotorProgram evaluate_cga(const CgaAst &ast) {
  if (ast.factors.empty()) throw CgaError(CgaErrorKind::syntax, "expression has no motor factors");
  MotorProgram program;
  std::vector<ChainOp> ops;
  for (const auto &f : ast.factors) {
    switch (f.head) {
      case MotorHead::T: {
        const Value d = eval(f.args.at(0));
        if (!d.is_vector || d.vec[3] != 0.0 || d.vec[4] != 0.0)
          throw CgaError(CgaErrorKind::type, "T expects a Euclidean displacement");
        program.factor_motors.push_back(translator(d.vec[0], d.vec[1], d.vec[2]));
        ops.push_back({OpKind::translate, {d.vec[0], d.vec[1], d.vec[2]}});
        break;
      }
      case MotorHead::R: {
        const double angle = eval(f.args.at(0)).scalar;
        const int i = f.args.at(1).basis;
        const int j = f.args.at(2).basis;
        program.factor_motors.push_back(rotor(angle, euclidean_basis(i), euclidean_basis(j)));
        Vec3 u, v;
        u[i - 1] = 1.0;
        v[j - 1] = 1.0;
        const Vec3 axis = cross(u, v) * angle;
        ops.push_back({OpKind::rotate, {axis.x, axis.y, axis.z}});
        break;
      }
      case MotorHead::D: {
        const double s = eval(f.args.at(0)).scalar;
        if (!(s > 0.0)) throw CgaError(CgaErrorKind::domain, "D requires a positive factor, got " + format_number(s));
        program.factor_motors.push_back(dilator(s));
        ops.push_back({OpKind::dilate, {s}});
        break;
      }
    }
  }
  program.composed = compose(program.factor_motors);
  if (!program.composed.value.is_finite()) throw CgaError(CgaErrorKind::non_finite, "composed motor is not finite");
  program.op_chain.ops.assign(ops.rbegin(), ops.rend());
  return program;
}

EditRequest edit_request_from_json(const nlohmann::ordered_json &doc) {
  if (!doc.is_object()) throw CgaError(CgaErrorKind::request, "edit request must be a JSON object");
  if (doc.empty()) throw CgaError(CgaErrorKind::request, "edit request has no assignments");
  EditRequest request;
  for (const auto &[name, value] : doc.items()) {
    if (!value.is_string()) throw CgaError(CgaErrorKind::request, "value for '" + name + "' must be a string");
    request.assignments.emplace_back(name, value.get<std::string>());
  }
  return request;
}

EditRequest parse_edit_request(std::string_view json_text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    throw CgaError(CgaErrorKind::request, std::string("malformed JSON: ") + e.what());
  }
  return edit_request_from_json(doc);
}

nlohmann::ordered_json edit_request_to_json(const EditRequest &request) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto &[name, expr] : request.assignments) doc[name] = expr;
  return doc;
}

bool ExecutionResult::all_ok() const {
  for (const auto &s : statuses)
    if (!s.ok) return false;
  return true;
}

ExecutionResult execute_request(const Scene &scene, const EditRequest &request) {
  ExecutionResult result{scene, {}};
  for (const auto &[name, expr] : request.assignments) {
    AssignmentStatus status{name, expr, false, false, {}, {}};
    try {
      const CgaAst ast = parse_cga(expr);
      const MotorProgram program = evaluate_cga(ast);
      if (ast.is_pure_dilation()) {
        result.scene = scale_object(result.scene, name, program.op_chain.ops.front().params.front());
        status.scaled = true;
      } else {
        result.scene = apply_motor_to_object(result.scene, name, program.composed);
      }
      status.ok = true;
    } catch (const Error &e) {
      status.error = e.what();
    }
    result.statuses.push_back(std::move(status));
  }
  return result;
}

}  // namespace cgaedit
