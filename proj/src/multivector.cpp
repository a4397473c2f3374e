#include "cgaedit/multivector.hpp"

#include <cmath>
#include <sstream>

namespace cgaedit {

namespace {

double compute_sign(unsigned a, unsigned b) {
  // Count transpositions needed to move every vector of b past the vectors of
  // a with a higher index.
  int swaps = 0;
  for (unsigned shifted = a >> 1; shifted != 0; shifted >>= 1) {
    swaps += std::popcount(shifted & b);
  }
  double sign = (swaps & 1) ? -1.0 : 1.0;
  const unsigned shared = a & b;
  for (int i = 0; i < Multivector::kVectors; ++i) {
    if (shared & (1u << i)) sign *= Multivector::kMetric[i];
  }
  return sign;
}

struct SignTable {
  std::array<std::array<double, 32>, 32> sign{};
  SignTable() {
    for (unsigned a = 0; a < 32; ++a)
      for (unsigned b = 0; b < 32; ++b) sign[a][b] = compute_sign(a, b);
  }
};

const SignTable &sign_table() {
  static const SignTable table;
  return table;
}

}  // namespace

double blade_product_sign(unsigned a, unsigned b) { return sign_table().sign[a & 31u][b & 31u]; }

Multivector Multivector::scalar(double s) {
  Multivector m;
  m.coeffs_[0] = s;
  return m;
}

Multivector Multivector::basis(int index) {
  if (index < 1 || index > kVectors) throw AlgebraError("basis index out of range: " + std::to_string(index));
  return blade(1u << (index - 1));
}

Multivector Multivector::blade(unsigned mask, double coefficient) {
  if (mask >= kDimension) throw AlgebraError("blade mask out of range");
  Multivector m;
  m.coeffs_[mask] = coefficient;
  return m;
}

bool Multivector::is_finite() const {
  for (double c : coeffs_)
    if (!std::isfinite(c)) return false;
  return true;
}

bool Multivector::is_pure_grade(int grade) const {
  for (unsigned mask = 0; mask < kDimension; ++mask)
    if (blade_grade(mask) != grade && coeffs_[mask] != 0.0) return false;
  return true;
}

Multivector &Multivector::operator+=(const Multivector &o) {
  for (std::size_t i = 0; i < kDimension; ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Multivector &Multivector::operator-=(const Multivector &o) {
  for (std::size_t i = 0; i < kDimension; ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Multivector &Multivector::operator*=(double s) {
  for (double &c : coeffs_) c *= s;
  return *this;
}

Multivector operator*(const Multivector &a, const Multivector &b) {
  const auto &table = sign_table().sign;
  Multivector out;
  for (unsigned i = 0; i < Multivector::kDimension; ++i) {
    const double ai = a.coeffs_[i];
    if (ai == 0.0) continue;
    for (unsigned j = 0; j < Multivector::kDimension; ++j) {
      out.coeffs_[i ^ j] += table[i][j] * ai * b.coeffs_[j];
    }
  }
  return out;
}

Multivector operator^(const Multivector &a, const Multivector &b) {
  const auto &table = sign_table().sign;
  Multivector out;
  for (unsigned i = 0; i < Multivector::kDimension; ++i) {
    const double ai = a.coeffs_[i];
    if (ai == 0.0) continue;
    for (unsigned j = 0; j < Multivector::kDimension; ++j) {
      if (i & j) continue;
      out.coeffs_[i | j] += table[i][j] * ai * b.coeffs_[j];
    }
  }
  return out;
}

Multivector geometric_product(const Multivector &a, const Multivector &b) { return a * b; }

Multivector outer_product(const Multivector &a, const Multivector &b) { return a ^ b; }

Multivector reverse(const Multivector &a) {
  Multivector out = a;
  for (unsigned mask = 0; mask < Multivector::kDimension; ++mask) {
    const int k = blade_grade(mask);
    if ((k * (k - 1) / 2) % 2 == 1) out[mask] = -out[mask];
  }
  return out;
}

Multivector grade_project(const Multivector &a, int grade) {
  if (grade < 0 || grade > Multivector::kVectors)
    throw AlgebraError("grade out of range 0..5: " + std::to_string(grade));
  Multivector out;
  for (unsigned mask = 0; mask < Multivector::kDimension; ++mask)
    if (blade_grade(mask) == grade) out[mask] = a[mask];
  return out;
}

double vector_dot(const Multivector &a, const Multivector &b) {
  if (!a.is_pure_grade(1) || !b.is_pure_grade(1)) throw AlgebraError("vector_dot requires grade-1 arguments");
  double sum = 0.0;
  for (int i = 0; i < Multivector::kVectors; ++i) {
    const unsigned mask = 1u << i;
    sum += Multivector::kMetric[i] * a[mask] * b[mask];
  }
  return sum;
}

double max_abs_difference(const Multivector &a, const Multivector &b) {
  double worst = 0.0;
  for (unsigned mask = 0; mask < Multivector::kDimension; ++mask)
    worst = std::max(worst, std::abs(a[mask] - b[mask]));
  return worst;
}

std::string blade_name(unsigned mask) {
  if (mask == 0) return "1";
  std::string name = "e";
  for (int i = 0; i < Multivector::kVectors; ++i)
    if (mask & (1u << i)) name += static_cast<char>('1' + i);
  return name;
}

std::string Multivector::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (unsigned mask = 0; mask < kDimension; ++mask) {
    const double c = coeffs_[mask];
    if (c == 0.0) continue;
    if (!first) out << (c < 0 ? " - " : " + ");
    else if (c < 0) out << "-";
    out << std::abs(c);
    if (mask != 0) out << "*" << blade_name(mask);
    first = false;
  }
  if (first) return "0";
  return out.str();
}

}  // namespace cgaedit
