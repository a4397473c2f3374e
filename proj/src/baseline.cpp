#include "cgaedit/baseline.hpp"

#include <cmath>
#include <string>

namespace cgaedit {

namespace {

using ojson = nlohmann::ordered_json;

double number_field(const ojson &obj, const char *key, const std::string &where) {
  if (!obj.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  const auto &v = obj.at(key);
  if (!v.is_number()) throw SchemaError(where + ": field '" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(where + ": field '" + key + "' is not finite");
  return d;
}

Vec3 vec3_field(const ojson &obj, const char *key, const std::string &where) {
  if (!obj.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  const auto &v = obj.at(key);
  if (!v.is_array() || v.size() != 3) throw SchemaError(where + ": field '" + key + "' must be [x, y, z]");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw SchemaError(where + ": field '" + key + "' must hold numbers");
    out[i] = v[i].get<double>();
    if (!std::isfinite(out[i])) throw SchemaError(where + ": field '" + key + "' is not finite");
  }
  return out;
}

ojson parse_document(std::string_view text) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Compact SE3

Se3Request se3_from_json(const ojson &doc) {
  if (!doc.is_object() || doc.empty()) throw SchemaError("SE3 request must be a nonempty JSON object");
  Se3Request request;
  for (const auto &[name, list] : doc.items()) {
    if (!list.is_array() || list.empty()) throw SchemaError("'" + name + "' must be a nonempty operation list");
    std::vector<Se3Op> ops;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto &item = list[i];
      const std::string where = name + "[" + std::to_string(i) + "]";
      if (!item.is_object()) throw SchemaError(where + ": operation must be an object");
      if (!item.contains("type") || !item.at("type").is_string()) throw SchemaError(where + ": missing field 'type'");
      const std::string type = item.at("type").get<std::string>();
      if (type == "T") {
        ops.emplace_back(Se3Translate{vec3_field(item, "v", where)});
      } else if (type == "R") {
        const Vec3 axis = vec3_field(item, "axis", where);
        const double n = norm(axis);
        if (!(n > 0.0)) throw SchemaError(where + ": rotation axis has zero norm");
        ops.emplace_back(Se3Rotate{axis / n, number_field(item, "angle_rad", where)});
      } else if (type == "D") {
        const double factor = number_field(item, "factor", where);
        if (!(factor > 0.0)) throw SchemaError(where + ": scale factor must be positive");
        ops.emplace_back(Se3Scale{factor});
      } else {
        throw SchemaError(where + ": unknown operation type '" + type + "'");
      }
    }
    request.assignments.emplace_back(name, std::move(ops));
  }
  return request;
}

Se3Request parse_se3(std::string_view json_text) { return se3_from_json(parse_document(json_text)); }

ojson se3_to_json(const Se3Request &request) {
  ojson doc = ojson::object();
  for (const auto &[name, ops] : request.assignments) {
    ojson list = ojson::array();
    for (const auto &op : ops) {
      std::visit(
          [&](const auto &o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, Se3Translate>)
              list.push_back({{"type", "T"}, {"v", {o.v.x, o.v.y, o.v.z}}});
            else if constexpr (std::is_same_v<T, Se3Rotate>)
              list.push_back({{"type", "R"}, {"axis", {o.axis.x, o.axis.y, o.axis.z}}, {"angle_rad", o.angle_rad}});
            else
              list.push_back({{"type", "D"}, {"factor", o.factor}});
          },
          op);
    }
    doc[name] = std::move(list);
  }
  return doc;
}

Vec3 rotate_about_axis(const Vec3 &p, const Vec3 &k, double angle_rad) {
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  return p * c + cross(k, p) * s + k * (dot(k, p) * (1.0 - c));
}

ExecutionResult apply_se3(const Scene &scene, const Se3Request &request) {
  ExecutionResult result{scene, {}};
  for (const auto &[name, ops] : request.assignments) {
    AssignmentStatus status;
    status.name = name;
    try {
      SceneObject obj = result.scene.at(name);
      for (const auto &op : ops) {
        if (const auto *t = std::get_if<Se3Translate>(&op)) {
          obj.center += t->v;
        } else if (const auto *r = std::get_if<Se3Rotate>(&op)) {
          obj.center = rotate_about_axis(obj.center, r->axis, r->angle_rad);
        } else {
          obj.size *= std::get<Se3Scale>(op).factor;
          status.scaled = true;
        }
      }
      result.scene = result.scene.with_object(obj);
      status.ok = true;
    } catch (const Error &e) {
      status.error = e.what();
    }
    result.statuses.push_back(std::move(status));
  }
  return result;
}

OperationChain se3_chain(const std::vector<Se3Op> &ops) {
  OperationChain chain;
  for (const auto &op : ops) {
    if (const auto *t = std::get_if<Se3Translate>(&op)) {
      chain.ops.push_back({OpKind::translate, {t->v.x, t->v.y, t->v.z}});
    } else if (const auto *r = std::get_if<Se3Rotate>(&op)) {
      const Vec3 rv = r->axis * r->angle_rad;
      chain.ops.push_back({OpKind::rotate, {rv.x, rv.y, rv.z}});
    } else {
      chain.ops.push_back({OpKind::dilate, {std::get<Se3Scale>(op).factor}});
    }
  }
  return chain;
}

// ---------------------------------------------------------------------------
// 4x4 matrices

Mat4 mat4_identity() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

Mat4 operator*(const Mat4 &a, const Mat4 &b) {
  Mat4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

Mat4 mat4_translation(const Vec3 &t) {
  Mat4 m = mat4_identity();
  m[0][3] = t.x;
  m[1][3] = t.y;
  m[2][3] = t.z;
  return m;
}

Mat4 mat4_rotation(const Vec3 &k, double angle_rad) {
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  const double t = 1.0 - c;
  Mat4 m = mat4_identity();
  m[0] = {t * k.x * k.x + c, t * k.x * k.y - s * k.z, t * k.x * k.z + s * k.y, 0.0};
  m[1] = {t * k.x * k.y + s * k.z, t * k.y * k.y + c, t * k.y * k.z - s * k.x, 0.0};
  m[2] = {t * k.x * k.z - s * k.y, t * k.y * k.z + s * k.x, t * k.z * k.z + c, 0.0};
  return m;
}

namespace {

Mat4 matrix_from_json(const ojson &value, const std::string &name) {
  if (value.is_string()) {
    std::string text = value.get<std::string>();
    for (const char *prefix : {"np.array(", "numpy.array("}) {
      const std::string p = prefix;
      const auto start = text.find(p);
      if (start != std::string::npos) {
        const auto end = text.rfind(')');
        if (end == std::string::npos || end < start + p.size()) throw SchemaError("'" + name + "': unbalanced array call");
        text = text.substr(start + p.size(), end - start - p.size());
        break;
      }
    }
    ojson inner;
    try {
      inner = ojson::parse(text);
    } catch (const nlohmann::json::parse_error &) {
      throw SchemaError("'" + name + "': matrix string is not a nested numeric array");
    }
    if (inner.is_string()) throw SchemaError("'" + name + "': matrix must be a nested numeric array");
    return matrix_from_json(inner, name);
  }
  if (!value.is_array() || value.size() != 4) throw SchemaError("'" + name + "': matrix must have 4 rows");
  Mat4 m{};
  for (int i = 0; i < 4; ++i) {
    const auto &row = value[i];
    if (!row.is_array() || row.size() != 4) throw SchemaError("'" + name + "': matrix rows must have 4 entries");
    for (int j = 0; j < 4; ++j) {
      if (!row[j].is_number()) throw SchemaError("'" + name + "': matrix entries must be numbers");
      m[i][j] = row[j].get<double>();
      if (!std::isfinite(m[i][j])) throw SchemaError("'" + name + "': matrix entries must be finite");
    }
  }
  return m;
}

}  // namespace

Mat4Request mat4_from_json(const ojson &doc) {
  if (!doc.is_object() || doc.empty()) throw SchemaError("matrix request must be a nonempty JSON object");
  Mat4Request request;
  for (const auto &[name, value] : doc.items()) request.assignments.emplace_back(name, matrix_from_json(value, name));
  return request;
}

Mat4Request parse_mat4(std::string_view json_text) { return mat4_from_json(parse_document(json_text)); }

ojson mat4_to_json(const Mat4Request &request) {
  ojson doc = ojson::object();
  for (const auto &[name, m] : request.assignments) {
    ojson rows = ojson::array();
    for (const auto &row : m) rows.push_back(row);
    doc[name] = std::move(rows);
  }
  return doc;
}

ExecutionResult apply_mat4(const Scene &scene, const Mat4Request &request) {
  ExecutionResult result{scene, {}};
  for (const auto &[name, m] : request.assignments) {
    AssignmentStatus status;
    status.name = name;
    try {
      SceneObject obj = result.scene.at(name);
      if (m[3][0] != 0.0 || m[3][1] != 0.0 || m[3][2] != 0.0 || m[3][3] != 1.0)
        status.warnings.push_back("bottom row is not (0, 0, 0, 1); dehomogenizing");
      const std::array<double, 4> p{obj.center.x, obj.center.y, obj.center.z, 1.0};
      std::array<double, 4> q{};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) q[i] += m[i][j] * p[j];
      if (std::abs(q[3]) < 1e-12) throw SchemaError("'" + name + "': transformed point has w = 0");
      obj.center = {q[0] / q[3], q[1] / q[3], q[2] / q[3]};
      result.scene = result.scene.with_object(obj);
      status.ok = true;
    } catch (const Error &e) {
      status.error = e.what();
    }
    result.statuses.push_back(std::move(status));
  }
  return result;
}

RotationDiagnostic rotation_consistency_check(const Mat4 &m) {
  RotationDiagnostic d;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m[k][i] * m[k][j];
      d.orthonormality_residual = std::max(d.orthonormality_residual, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  d.det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
          m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return d;
}

namespace {

// Rotation vector of a proper rotation via its unit quaternion.
Vec3 rotation_vector(const Mat4 &m) {
  const double trace = m[0][0] + m[1][1] + m[2][2];
  double w, x, y, z;
  if (trace > 0) {
    const double s = 2.0 * std::sqrt(trace + 1.0);
    w = 0.25 * s;
    x = (m[2][1] - m[1][2]) / s;
    y = (m[0][2] - m[2][0]) / s;
    z = (m[1][0] - m[0][1]) / s;
  } else if (m[0][0] > m[1][1] && m[0][0] > m[2][2]) {
    const double s = 2.0 * std::sqrt(1.0 + m[0][0] - m[1][1] - m[2][2]);
    w = (m[2][1] - m[1][2]) / s;
    x = 0.25 * s;
    y = (m[0][1] + m[1][0]) / s;
    z = (m[0][2] + m[2][0]) / s;
  } else if (m[1][1] > m[2][2]) {
    const double s = 2.0 * std::sqrt(1.0 + m[1][1] - m[0][0] - m[2][2]);
    w = (m[0][2] - m[2][0]) / s;
    x = (m[0][1] + m[1][0]) / s;
    y = 0.25 * s;
    z = (m[1][2] + m[2][1]) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + m[2][2] - m[0][0] - m[1][1]);
    w = (m[1][0] - m[0][1]) / s;
    x = (m[0][2] + m[2][0]) / s;
    y = (m[1][2] + m[2][1]) / s;
    z = 0.25 * s;
  }
  if (w < 0) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
  const Vec3 v{x, y, z};
  const double n = norm(v);
  if (n == 0.0) return {};
  return v * (2.0 * std::atan2(n, w) / n);
}

}  // namespace

ChainOp classify_mat4(const Mat4 &m, double tolerance) {
  const bool affine_row = m[3][0] == 0.0 && m[3][1] == 0.0 && m[3][2] == 0.0 && m[3][3] == 1.0;
  bool linear_identity = true;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(m[i][j] - (i == j ? 1.0 : 0.0)) > tolerance) linear_identity = false;
  const bool no_translation =
      std::abs(m[0][3]) <= tolerance && std::abs(m[1][3]) <= tolerance && std::abs(m[2][3]) <= tolerance;
  if (affine_row && linear_identity) return {OpKind::translate, {m[0][3], m[1][3], m[2][3]}};
  if (affine_row && no_translation) {
    const auto diag = rotation_consistency_check(m);
    if (diag.orthonormality_residual <= tolerance && std::abs(diag.det - 1.0) <= tolerance) {
      const Vec3 rv = rotation_vector(m);
      return {OpKind::rotate, {rv.x, rv.y, rv.z}};
    }
  }
  ChainOp op{OpKind::affine, {}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) op.params.push_back(m[i][j]);
  return op;
}

}  // namespace cgaedit
