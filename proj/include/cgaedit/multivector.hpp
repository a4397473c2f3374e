#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <string>

#include "cgaedit/errors.hpp"

namespace cgaedit {

// Dense element of Cl(4,1). Coefficient i belongs to the basis blade whose
// bitmask is i: bit k set means e(k+1) is a factor. Blades are stored in
// ascending index order, so e12 is slot 0b00011 and e21 = -e12.
class Multivector {
public:
  static constexpr std::size_t kDimension = 32;
  static constexpr int kVectors = 5;
  // e1..e4 square to +1, e5 squares to -1.
  static constexpr std::array<double, kVectors> kMetric{1.0, 1.0, 1.0, 1.0, -1.0};

  constexpr Multivector() = default;

  static Multivector scalar(double s);
  // Basis vector e(index), index in 1..5.
  static Multivector basis(int index);
  // Basis blade by bitmask with the given coefficient.
  static Multivector blade(unsigned mask, double coefficient = 1.0);

  double &operator[](std::size_t mask) { return coeffs_[mask]; }
  double operator[](std::size_t mask) const { return coeffs_[mask]; }
  const std::array<double, kDimension> &coefficients() const { return coeffs_; }

  double scalar_part() const { return coeffs_[0]; }
  bool is_finite() const;
  // True when every coefficient outside `grade` is exactly zero.
  bool is_pure_grade(int grade) const;

  Multivector &operator+=(const Multivector &o);
  Multivector &operator-=(const Multivector &o);
  Multivector &operator*=(double s);

  friend Multivector operator+(Multivector a, const Multivector &b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector &b) { return a -= b; }
  friend Multivector operator-(Multivector a) { return a *= -1.0; }
  friend Multivector operator*(Multivector a, double s) { return a *= s; }
  friend Multivector operator*(double s, Multivector a) { return a *= s; }
  // Geometric product.
  friend Multivector operator*(const Multivector &a, const Multivector &b);
  // Outer product.
  friend Multivector operator^(const Multivector &a, const Multivector &b);

  bool operator==(const Multivector &) const = default;

  // Human-readable sum of nonzero blades, e.g. "1 - 1*e14 - 1*e15".
  std::string to_string() const;

private:
  std::array<double, kDimension> coeffs_{};
};

constexpr int blade_grade(unsigned mask) { return std::popcount(mask); }

// Sign from reordering e_a * e_b into canonical ascending order, including
// metric contraction of shared vectors.
double blade_product_sign(unsigned a, unsigned b);

Multivector geometric_product(const Multivector &a, const Multivector &b);
Multivector outer_product(const Multivector &a, const Multivector &b);
Multivector reverse(const Multivector &a);
// Throws AlgebraError when grade is outside 0..5.
Multivector grade_project(const Multivector &a, int grade);
// Symmetric inner product of two grade-1 elements. Throws AlgebraError when
// either argument carries any non-vector coefficient.
double vector_dot(const Multivector &a, const Multivector &b);

// Largest absolute coefficient difference.
double max_abs_difference(const Multivector &a, const Multivector &b);

std::string blade_name(unsigned mask);

}  // namespace cgaedit
