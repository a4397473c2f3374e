#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "cgaedit/multivector.hpp"
#include "cgaedit/vec3.hpp"

namespace cgaedit {

struct NullBasis {
  Multivector origin;    // no = (e5 - e4) / 2
  Multivector infinity;  // ni = e4 + e5
};

const NullBasis &null_basis();

// Conformal embedding of a Euclidean point (grade-1).
struct ConformalPoint {
  Multivector value;
};

enum class MotorKind { identity, translator, rotor, dilator, composite };

std::string_view to_string(MotorKind kind);

// Even versor applied by the sandwich M P ~M. `kind` is diagnostic only.
struct Motor {
  Multivector value = Multivector::scalar(1.0);
  MotorKind kind = MotorKind::identity;
};

ConformalPoint up(double x, double y, double z);
inline ConformalPoint up(const Vec3 &p) { return up(p.x, p.y, p.z); }

// Throws DegeneratePointError when |P . ni| < 1e-12.
Vec3 down(const ConformalPoint &point);

Motor translator(double tx, double ty, double tz);
inline Motor translator(const Vec3 &t) { return translator(t.x, t.y, t.z); }

// Rotation by `angle_rad` in the plane u^v, turning u toward v. The plane
// bivector is normalized to unit magnitude; throws AlgebraError for
// non-vector arguments or a degenerate plane.
Motor rotor(double angle_rad, const Multivector &u, const Multivector &v);

// Scaling about the world origin by s; throws AlgebraError unless s > 0.
Motor dilator(double s);

ConformalPoint apply(const Motor &motor, const ConformalPoint &point);
Vec3 apply(const Motor &motor, const Vec3 &point);

// Left fold of the geometric product; the rightmost motor acts first.
// Throws AlgebraError on an empty list.
Motor compose(std::span<const Motor> motors);
Motor operator*(const Motor &a, const Motor &b);

// Scalar part of M ~M when the product is a pure scalar.
bool is_versor(const Motor &motor, double tolerance = 1e-9);

}  // namespace cgaedit
