#include "cgaedit/conformal.hpp"

#include <cmath>

namespace cgaedit {

namespace {

constexpr double kDegenerateWeight = 1e-12;

const Multivector &e(int i) {
  static const std::array<Multivector, 5> basis{Multivector::basis(1), Multivector::basis(2), Multivector::basis(3),
                                                Multivector::basis(4), Multivector::basis(5)};
  return basis[i - 1];
}

}  // namespace

const NullBasis &null_basis() {
  static const NullBasis basis{0.5 * (e(5) - e(4)), e(4) + e(5)};
  return basis;
}

std::string_view to_string(MotorKind kind) {
  switch (kind) {
    case MotorKind::identity: return "identity";
    case MotorKind::translator: return "translator";
    case MotorKind::rotor: return "rotor";
    case MotorKind::dilator: return "dilator";
    case MotorKind::composite: return "composite";
  }
  return "unknown";
}

ConformalPoint up(double x, double y, double z) {
  const auto &nb = null_basis();
  Multivector p = nb.origin + x * e(1) + y * e(2) + z * e(3) + (0.5 * (x * x + y * y + z * z)) * nb.infinity;
  return {p};
}

Vec3 down(const ConformalPoint &point) {
  const Multivector p = grade_project(point.value, 1);
  const double weight = -vector_dot(p, null_basis().infinity);
  if (!(std::abs(weight) >= kDegenerateWeight))
    throw DegeneratePointError("conformal point has no finite Euclidean projection");
  return {vector_dot(p, e(1)) / weight, vector_dot(p, e(2)) / weight, vector_dot(p, e(3)) / weight};
}

Motor translator(double tx, double ty, double tz) {
  const Multivector t = tx * e(1) + ty * e(2) + tz * e(3);
  Motor m{Multivector::scalar(1.0) - 0.5 * (t * null_basis().infinity), MotorKind::translator};
  if (tx == 0.0 && ty == 0.0 && tz == 0.0) m.kind = MotorKind::identity;
  return m;
}

Motor rotor(double angle_rad, const Multivector &u, const Multivector &v) {
  if (!u.is_pure_grade(1) || !v.is_pure_grade(1)) throw AlgebraError("rotor plane arguments must be vectors");
  Multivector plane = u ^ v;
  const double magnitude = std::sqrt(std::abs((plane * reverse(plane)).scalar_part()));
  if (!(magnitude > kDegenerateWeight)) throw AlgebraError("rotor plane is degenerate (u ^ v = 0)");
  plane *= 1.0 / magnitude;
  Motor m{Multivector::scalar(std::cos(angle_rad / 2)) - std::sin(angle_rad / 2) * plane, MotorKind::rotor};
  if (angle_rad == 0.0) m.kind = MotorKind::identity;
  return m;
}

Motor dilator(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw AlgebraError("dilation factor must be positive and finite");
  const auto &nb = null_basis();
  const Multivector boost = nb.origin ^ nb.infinity;
  const double half_log = std::log(s) / 2;
  Motor m{Multivector::scalar(std::cosh(half_log)) + std::sinh(half_log) * boost, MotorKind::dilator};
  if (s == 1.0) m.kind = MotorKind::identity;
  return m;
}

ConformalPoint apply(const Motor &motor, const ConformalPoint &point) {
  return {motor.value * point.value * reverse(motor.value)};
}

Vec3 apply(const Motor &motor, const Vec3 &point) { return down(apply(motor, up(point))); }

Motor operator*(const Motor &a, const Motor &b) {
  MotorKind kind = MotorKind::composite;
  if (a.kind == MotorKind::identity) kind = b.kind;
  else if (b.kind == MotorKind::identity) kind = a.kind;
  return {a.value * b.value, kind};
}

Motor compose(std::span<const Motor> motors) {
  if (motors.empty()) throw AlgebraError("cannot compose an empty motor list");
  Motor out = motors.front();
  for (std::size_t i = 1; i < motors.size(); ++i) out = out * motors[i];
  return out;
}

bool is_versor(const Motor &motor, double tolerance) {
  Multivector norm = motor.value * reverse(motor.value);
  const double s = norm.scalar_part();
  norm[0] = 0.0;
  return max_abs_difference(norm, Multivector{}) <= tolerance * std::max(1.0, std::abs(s)) && s > 0.0;
}

}  // namespace cgaedit
