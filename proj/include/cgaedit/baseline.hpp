#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cgaedit/cga_expr.hpp"
#include "cgaedit/errors.hpp"
#include "cgaedit/operation_chain.hpp"
#include "cgaedit/scene.hpp"

namespace cgaedit {

// Schema violation in a Compact SE3 or 4x4 matrix document.
class SchemaError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Compact SE3 queues

struct Se3Translate {
  Vec3 v;
  bool operator==(const Se3Translate &) const = default;
};

struct Se3Rotate {
  Vec3 axis;  // unit length after parsing
  double angle_rad = 0.0;
  bool operator==(const Se3Rotate &) const = default;
};

struct Se3Scale {
  double factor = 1.0;
  bool operator==(const Se3Scale &) const = default;
};

using Se3Op = std::variant<Se3Translate, Se3Rotate, Se3Scale>;

struct Se3Request {
  std::vector<std::pair<std::string, std::vector<Se3Op>>> assignments;
};

// {"Name": [{"type":"T","v":[dx,dy,dz]}, {"type":"R","axis":[..],
// "angle_rad":a}, {"type":"D","factor":s}], ...}. Throws SchemaError.
Se3Request parse_se3(std::string_view json_text);
Se3Request se3_from_json(const nlohmann::ordered_json &doc);
nlohmann::ordered_json se3_to_json(const Se3Request &request);

// Operations run left to right: T moves the center, R rotates the center about
// the world origin, D scales the size with the center fixed.
ExecutionResult apply_se3(const Scene &scene, const Se3Request &request);

// Rodrigues rotation of p about the unit axis through the origin.
Vec3 rotate_about_axis(const Vec3 &p, const Vec3 &unit_axis, double angle_rad);

OperationChain se3_chain(const std::vector<Se3Op> &ops);

// ---------------------------------------------------------------------------
// Euclidean 4x4 matrices

// Row-major homogeneous transform acting on column vectors.
using Mat4 = std::array<std::array<double, 4>, 4>;

Mat4 mat4_identity();
Mat4 operator*(const Mat4 &a, const Mat4 &b);
Mat4 mat4_translation(const Vec3 &t);
Mat4 mat4_rotation(const Vec3 &unit_axis, double angle_rad);

struct Mat4Request {
  std::vector<std::pair<std::string, Mat4>> assignments;
};

// Values are 4x4 nested numeric arrays, or strings holding one (optionally
// wrapped in np.array(...)). Throws SchemaError on shape or type errors.
Mat4Request parse_mat4(std::string_view json_text);
Mat4Request mat4_from_json(const nlohmann::ordered_json &doc);
nlohmann::ordered_json mat4_to_json(const Mat4Request &request);

// center <- dehomogenized m * [center; 1]; size unchanged. A bottom row other
// than (0,0,0,1) is reported as a warning. w' = 0 fails the assignment.
ExecutionResult apply_mat4(const Scene &scene, const Mat4Request &request);

struct RotationDiagnostic {
  double orthonormality_residual = 0.0;  // max |U^T U - I|
  double det = 0.0;
};

RotationDiagnostic rotation_consistency_check(const Mat4 &m);

// One opaque op: translate, rotate (rotation vector), or affine.
ChainOp classify_mat4(const Mat4 &m, double tolerance = 1e-9);

}  // namespace cgaedit
