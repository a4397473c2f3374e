#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cgaedit/baseline.hpp"
#include "cgaedit/conformal.hpp"
#include "cgaedit/vec3.hpp"

namespace cgaedit {

// out[i] = down(M up(in[i]) M~). Spans must have equal length.
void apply_motor_batch(const Motor &motor, std::span<const Vec3> in, std::span<Vec3> out);
void apply_motor_batch_serial(const Motor &motor, std::span<const Vec3> in, std::span<Vec3> out);

struct ChainStep {
  bool rotate = false;
  Vec3 translation;
  double angle_rad = 0.0;
  int plane = 0;  // 0: (e1,e2), 1: (e2,e3), 2: (e3,e1)
};

// Execution-ordered translate/rotate chain applied to `start`.
struct RandomChain {
  Vec3 start;
  std::vector<ChainStep> steps;
};

// Deterministic in (seed, index) regardless of evaluation order.
RandomChain random_chain(std::uint64_t seed, std::size_t index, std::size_t max_length = 5);

// Same chain in each output representation.
std::string chain_cga_text(const RandomChain &chain);
Se3Request chain_se3(const RandomChain &chain, const std::string &object);
Mat4 chain_mat4(const RandomChain &chain);

struct DifferentialOutcome {
  Vec3 cga;
  Vec3 se3;
  Vec3 mat4;
  double max_discrepancy = 0.0;
};

// Runs the chain through the text-level CGA, SE3 and 4x4 executors.
DifferentialOutcome differential_check(const RandomChain &chain);

struct DifferentialReport {
  std::size_t chains = 0;
  double max_discrepancy = 0.0;
  std::size_t worst_index = 0;
  std::size_t failures = 0;  // chains above tolerance
};

DifferentialReport differential_sweep(std::size_t count, std::uint64_t seed, double tolerance = 1e-9,
                                      std::size_t max_length = 5);
DifferentialReport differential_sweep_serial(std::size_t count, std::uint64_t seed, double tolerance = 1e-9,
                                             std::size_t max_length = 5);

}  // namespace cgaedit
