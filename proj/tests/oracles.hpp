#pragma once

// Reference implementations used only by tests. None of these call into the
// library; they are deliberately naive.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using V3 = std::array<double, 3>;
using M4 = std::array<std::array<double, 4>, 4>;

// Rotation of p in coordinate plane (i, j), turning axis i toward axis j.
inline V3 plane_rotate(V3 p, int i, int j, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  const double a = p[i], b = p[j];
  p[i] = c * a - s * b;
  p[j] = s * a + c * b;
  return p;
}

// Rotation matrix from axis-angle, built entry by entry.
inline std::array<std::array<double, 3>, 3> axis_angle_matrix(V3 k, double angle) {
  const double n = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
  for (double &x : k) x /= n;
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  const double x = k[0], y = k[1], z = k[2];
  return {{{t * x * x + c, t * x * y - s * z, t * x * z + s * y},
           {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
           {t * x * z - s * y, t * y * z + s * x, t * z * z + c}}};
}

inline V3 mat_apply(const std::array<std::array<double, 3>, 3> &m, const V3 &p) {
  V3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] += m[i][j] * p[j];
  return r;
}

inline M4 m4_identity() {
  M4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

inline M4 m4_mul(const M4 &a, const M4 &b) {
  M4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline M4 m4_translate(const V3 &t) {
  M4 m = m4_identity();
  for (int i = 0; i < 3; ++i) m[i][3] = t[i];
  return m;
}

inline M4 m4_plane_rotate(int i, int j, double angle) {
  M4 m = m4_identity();
  m[i][i] = std::cos(angle);
  m[j][j] = std::cos(angle);
  m[i][j] = -std::sin(angle);
  m[j][i] = std::sin(angle);
  return m;
}

inline V3 m4_apply(const M4 &m, const V3 &p) {
  double h[4] = {p[0], p[1], p[2], 1.0};
  double r[4] = {};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) r[i] += m[i][k] * h[k];
  return {r[0] / r[3], r[1] / r[3], r[2] / r[3]};
}

inline double dist(const V3 &a, const V3 &b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

// Standard normal CDF by composite Simpson integration of the density.
inline double normal_cdf(double z) {
  const int n = 20000;
  const double a = 0.0, b = std::abs(z), h = (b - a) / n;
  auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };
  double s = phi(a) + phi(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * phi(a + i * h);
  const double half = s * h / 3.0;
  return z >= 0 ? 0.5 + half : 0.5 - half;
}

inline unsigned __int128 choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return r;
}

// Two-sided Fisher exact test by exact integer enumeration (n <= 60 total).
inline double fisher_bruteforce(int a, int n1, int c, int n2) {
  const int m = a + c;
  auto weight = [&](int x) { return choose(n1, x) * choose(n2, m - x); };
  const unsigned __int128 observed = weight(a);
  unsigned __int128 total = 0, tail = 0;
  for (int x = 0; x <= m; ++x) {
    const unsigned __int128 w = weight(x);
    total += w;
    if (w <= observed) tail += w;
  }
  return static_cast<double>(static_cast<long double>(tail) / static_cast<long double>(total));
}

// Is `expected` an ordered subsequence of `actual` under `eq`? Tries every
// index combination.
template <typename T>
bool subsequence_bruteforce(const std::vector<T> &expected, const std::vector<T> &actual,
                            const std::function<bool(const T &, const T &)> &eq) {
  const std::size_t k = expected.size(), n = actual.size();
  if (k == 0) return true;
  if (k > n) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) ok = eq(expected[i], actual[idx[i]]);
    if (ok) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace oracle
