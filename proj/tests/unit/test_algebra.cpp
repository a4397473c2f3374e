#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cgaedit/conformal.hpp"
#include "cgaedit/multivector.hpp"
#include "oracles.hpp"

using namespace cgaedit;
using std::numbers::pi;

namespace {

Multivector random_mv(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Multivector m;
  for (std::size_t i = 0; i < Multivector::kDimension; ++i) m[i] = u(rng);
  return m;
}

oracle::V3 arr(const Vec3 &v) { return {v.x, v.y, v.z}; }

}  // namespace

TEST_CASE("basis vectors square to the metric and anticommute") {
  for (int i = 1; i <= 5; ++i) {
    const Multivector ei = Multivector::basis(i);
    CHECK((ei * ei).scalar_part() == Multivector::kMetric[i - 1]);
    CHECK((ei * ei).is_pure_grade(0));
    for (int j = i + 1; j <= 5; ++j) {
      const Multivector ej = Multivector::basis(j);
      CHECK(max_abs_difference(ei * ej, -(ej * ei)) == 0.0);
    }
  }
}

TEST_CASE("geometric product is associative and distributive") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 50; ++n) {
    const auto a = random_mv(rng), b = random_mv(rng), c = random_mv(rng);
    CHECK(max_abs_difference((a * b) * c, a * (b * c)) < 1e-9);
    CHECK(max_abs_difference(a * (b + c), a * b + a * c) < 1e-12);
    CHECK(max_abs_difference(reverse(a * b), reverse(b) * reverse(a)) < 1e-12);
  }
}

TEST_CASE("outer product of vectors is antisymmetric") {
  const auto e1 = Multivector::basis(1), e3 = Multivector::basis(3);
  CHECK(max_abs_difference(e1 ^ e3, -(e3 ^ e1)) == 0.0);
  CHECK(max_abs_difference(e1 ^ e1, Multivector{}) == 0.0);
  CHECK_THROWS_AS(grade_project(e1, 6), AlgebraError);
  CHECK_THROWS_AS(vector_dot(e1 * e3, e1), AlgebraError);
}

TEST_CASE("null basis") {
  const auto &nb = null_basis();
  CHECK(vector_dot(nb.origin, nb.origin) == doctest::Approx(0.0));
  CHECK(vector_dot(nb.infinity, nb.infinity) == doctest::Approx(0.0));
  CHECK(vector_dot(nb.origin, nb.infinity) == doctest::Approx(-1.0));
}

TEST_CASE("embedding is null and its inner product is minus half the squared distance") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int n = 0; n < 200; ++n) {
    const Vec3 x{u(rng), u(rng), u(rng)}, y{u(rng), u(rng), u(rng)};
    const auto px = up(x), py = up(y);
    CHECK(std::abs(vector_dot(px.value, px.value)) < 1e-9);
    CHECK(vector_dot(px.value, py.value) == doctest::Approx(-0.5 * dot(x - y, x - y)).epsilon(1e-12));
    CHECK(max_abs_difference(down(px), x) < 1e-12);
  }
  CHECK_THROWS_AS(down(ConformalPoint{Multivector::basis(1)}), DegeneratePointError);
}

TEST_CASE("translator moves points") {
  const Vec3 p = apply(translator(2, 1, 0), Vec3{0, 0, 0});
  CHECK(max_abs_difference(p, Vec3{2, 1, 0}) < 1e-12);
  CHECK(translator(1, 2, 3).kind == MotorKind::translator);
}

TEST_CASE("rotor matches the plane rotation oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> ang(-2 * pi, 2 * pi);
  const int planes[3][2] = {{1, 2}, {2, 3}, {3, 1}};
  for (int n = 0; n < 300; ++n) {
    const auto &pl = planes[n % 3];
    const double a = ang(rng);
    const Vec3 p{u(rng), u(rng), u(rng)};
    const Vec3 got = apply(rotor(a, Multivector::basis(pl[0]), Multivector::basis(pl[1])), p);
    const auto want = oracle::plane_rotate(arr(p), pl[0] - 1, pl[1] - 1, a);
    CHECK(oracle::dist(arr(got), want) < 1e-9);
  }
}

TEST_CASE("rotor in e1^e2 turns x toward y") {
  const Vec3 p = apply(rotor(pi / 2, Multivector::basis(1), Multivector::basis(2)), Vec3{1, 0, 0});
  CHECK(max_abs_difference(p, Vec3{0, 1, 0}) < 1e-12);
  CHECK_THROWS_AS(rotor(1.0, Multivector::basis(1), Multivector::basis(1)), AlgebraError);
  CHECK_THROWS_AS(rotor(1.0, Multivector::basis(1) * Multivector::basis(2), Multivector::basis(1)), AlgebraError);
}

TEST_CASE("dilator scales about the origin") {
  CHECK(max_abs_difference(apply(dilator(3.0), Vec3{2, 0, 0}), Vec3{6, 0, 0}) < 1e-12);
  CHECK(max_abs_difference(apply(dilator(0.5), Vec3{-2, 4, 8}), Vec3{-1, 2, 4}) < 1e-12);
  CHECK_THROWS_AS(dilator(0.0), AlgebraError);
  CHECK_THROWS_AS(dilator(-2.0), AlgebraError);
}

TEST_CASE("composition applies the rightmost motor first") {
  const Motor r = rotor(pi / 2, Multivector::basis(1), Multivector::basis(2));
  const Motor t = translator(5, 0, 0);
  const std::vector<Motor> ms{t, r};
  const Vec3 p = apply(compose(ms), Vec3{1, 0, 0});
  CHECK(max_abs_difference(p, Vec3{5, 1, 0}) < 1e-12);
  CHECK(max_abs_difference(apply(t * r, Vec3{1, 0, 0}), p) < 1e-12);
  CHECK_THROWS_AS(compose(std::vector<Motor>{}), AlgebraError);
}

TEST_CASE("motors are versors and preserve distances") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int n = 0; n < 100; ++n) {
    const Motor m = translator(u(rng), u(rng), u(rng)) *
                    rotor(u(rng), Multivector::basis(1 + n % 3), Multivector::basis(1 + (n + 1) % 3));
    CHECK(is_versor(m));
    const Vec3 a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
    CHECK(distance(apply(m, a), apply(m, b)) == doctest::Approx(distance(a, b)).epsilon(1e-12));
  }
}
