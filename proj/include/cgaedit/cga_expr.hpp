#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cgaedit/conformal.hpp"
#include "cgaedit/errors.hpp"
#include "cgaedit/operation_chain.hpp"
#include "cgaedit/scene.hpp"

namespace cgaedit {

enum class CgaErrorKind {
  lexical,
  syntax,
  arity,
  plane_argument,
  unknown_identifier,
  type,
  domain,
  non_finite,
  request,
};

std::string_view to_string(CgaErrorKind kind);

class CgaError : public Error {
public:
  CgaError(CgaErrorKind kind, const std::string &message, std::size_t position = 0);
  CgaErrorKind kind() const { return kind_; }
  std::size_t position() const { return position_; }

private:
  CgaErrorKind kind_;
  std::size_t position_;
};

// Arithmetic tree over literals, pi, sqrt and the sandbox symbols. A unary
// minus applied directly to a literal is folded into the literal.
struct ExprNode {
  enum class Kind { number, pi, basis, null_origin, null_infinity, sqrt, negate, add, subtract, multiply, divide };

  Kind kind = Kind::number;
  double value = 0.0;  // number
  int basis = 0;       // 1..3 for e1..e3
  std::vector<ExprNode> children;

  bool operator==(const ExprNode &) const = default;
};

enum class MotorHead { T, R, D };

struct MotorCall {
  MotorHead head = MotorHead::T;
  // T: one vector expression. R: scalar angle, basis, basis. D: scalar.
  std::vector<ExprNode> args;

  bool operator==(const MotorCall &) const = default;
};

struct CgaAst {
  std::vector<MotorCall> factors;  // left-to-right as written

  bool operator==(const CgaAst &) const = default;
  // Exactly one D(...) factor and nothing else.
  bool is_pure_dilation() const;
};

// Throws CgaError.
CgaAst parse_cga(std::string_view expr);

// Canonical text; parse_cga(print_cga(ast)) == ast.
std::string print_cga(const CgaAst &ast);
std::string print_expr(const ExprNode &node);

struct MotorProgram {
  std::vector<Motor> factor_motors;  // same order as the factors
  Motor composed;
  OperationChain op_chain;  // execution order: rightmost factor first
};

// Throws CgaError (domain, type, non_finite).
MotorProgram evaluate_cga(const CgaAst &ast);

// The model's output object: object name -> expression, in document order.
struct EditRequest {
  std::vector<std::pair<std::string, std::string>> assignments;

  bool operator==(const EditRequest &) const = default;
};

// Flat JSON object of strings. Throws CgaError(request) on structural errors.
EditRequest parse_edit_request(std::string_view json_text);
EditRequest edit_request_from_json(const nlohmann::ordered_json &doc);
nlohmann::ordered_json edit_request_to_json(const EditRequest &request);

struct AssignmentStatus {
  std::string name;
  std::string expression;
  bool ok = false;
  bool scaled = false;  // object-centric scale path taken
  std::string error;
  std::vector<std::string> warnings;
};

struct ExecutionResult {
  Scene scene;
  std::vector<AssignmentStatus> statuses;

  bool all_ok() const;
};

// Applies each assignment in order. A lone D(s) scales the object's size with
// its center fixed; any other chain moves the center by the composed motor.
// Failures are reported per assignment and leave that object untouched.
ExecutionResult execute_request(const Scene &scene, const EditRequest &request);

}  // namespace cgaedit
