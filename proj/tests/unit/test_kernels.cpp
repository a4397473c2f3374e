#include <doctest.h>

#include <numbers>
#include <random>

#include "cgaedit/kernels.hpp"
#include "oracles.hpp"

using namespace cgaedit;

TEST_CASE("batch apply: parallel equals serial") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<Vec3> in(5000);
  for (auto &p : in) p = {u(rng), u(rng), u(rng)};
  const Motor m = translator(1, 2, 3) * rotor(0.7, Multivector::basis(2), Multivector::basis(3));
  std::vector<Vec3> a(in.size()), b(in.size());
  apply_motor_batch(m, in, a);
  apply_motor_batch_serial(m, in, b);
  CHECK(a == b);
  std::vector<Vec3> small(3);
  CHECK_THROWS(apply_motor_batch(m, in, small));
}

TEST_CASE("random chains are deterministic and bounded") {
  for (std::size_t i = 0; i < 200; ++i) {
    const RandomChain c = random_chain(42, i);
    CHECK(c.steps.size() >= 1);
    CHECK(c.steps.size() <= 5);
    const RandomChain d = random_chain(42, i);
    CHECK(chain_cga_text(c) == chain_cga_text(d));
  }
}

TEST_CASE("random chains against the 4x4 oracle") {
  const int planes[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (std::size_t i = 0; i < 500; ++i) {
    const RandomChain c = random_chain(7, i);
    oracle::M4 m = oracle::m4_identity();
    for (const auto &s : c.steps) {
      const oracle::M4 step = s.rotate ? oracle::m4_plane_rotate(planes[s.plane][0], planes[s.plane][1], s.angle_rad)
                                       : oracle::m4_translate({s.translation.x, s.translation.y, s.translation.z});
      m = oracle::m4_mul(step, m);
    }
    const auto want = oracle::m4_apply(m, {c.start.x, c.start.y, c.start.z});
    const DifferentialOutcome o = differential_check(c);
    CHECK(oracle::dist({o.cga.x, o.cga.y, o.cga.z}, want) < 1e-9);
    CHECK(o.max_discrepancy < 1e-9);
  }
}

TEST_CASE("sweep: parallel equals serial") {
  const DifferentialReport a = differential_sweep(300, 99);
  const DifferentialReport b = differential_sweep_serial(300, 99);
  CHECK(a.chains == 300);
  CHECK(a.failures == 0);
  CHECK(a.max_discrepancy == b.max_discrepancy);
  CHECK(a.worst_index == b.worst_index);
}
