#include "cgaedit/kernels.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "cgaedit/cga_expr.hpp"
#include "cgaedit/errors.hpp"
#include "cgaedit/format.hpp"

namespace cgaedit {

namespace {

void check_sizes(std::span<const Vec3> in, std::span<Vec3> out) {
  if (in.size() != out.size()) throw AlgebraError("batch input and output sizes differ");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr int kPlaneAxes[3][2] = {{1, 2}, {2, 3}, {3, 1}};
const Vec3 kPlaneNormals[3] = {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};

const std::string kObject = "Probe";

Scene probe_scene(const Vec3 &start) { return Scene({{kObject, Shape::sphere, "grey", start, 1.0}}); }

void fold(DifferentialReport &r, std::size_t i, double d, double tolerance) {
  if (!(d <= tolerance)) ++r.failures;
  if (d > r.max_discrepancy || std::isnan(d)) {
    r.max_discrepancy = std::isnan(d) ? INFINITY : d;
    r.worst_index = i;
  }
}

}  // namespace

void apply_motor_batch(const Motor &motor, std::span<const Vec3> in, std::span<Vec3> out) {
  check_sizes(in, out);
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = apply(motor, in[static_cast<std::size_t>(i)]);
}

void apply_motor_batch_serial(const Motor &motor, std::span<const Vec3> in, std::span<Vec3> out) {
  check_sizes(in, out);
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = apply(motor, in[i]);
}

RandomChain random_chain(std::uint64_t seed, std::size_t index, std::size_t max_length) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(index)));
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_int_distribution<std::size_t> length(1, std::max<std::size_t>(1, max_length));
  std::uniform_int_distribution<int> plane(0, 2);
  std::bernoulli_distribution coin(0.5);
  RandomChain c;
  c.start = {coord(rng), coord(rng), coord(rng)};
  const std::size_t n = length(rng);
  for (std::size_t i = 0; i < n; ++i) {
    ChainStep s;
    s.rotate = coin(rng);
    if (s.rotate) {
      s.angle_rad = angle(rng);
      s.plane = plane(rng);
    } else {
      s.translation = {coord(rng), coord(rng), coord(rng)};
    }
    c.steps.push_back(s);
  }
  return c;
}

std::string chain_cga_text(const RandomChain &chain) {
  std::string out;
  for (auto it = chain.steps.rbegin(); it != chain.steps.rend(); ++it) {
    if (!out.empty()) out += " * ";
    if (it->rotate) {
      out += "R(" + format_number(it->angle_rad) + ", e" + std::to_string(kPlaneAxes[it->plane][0]) + ", e" +
             std::to_string(kPlaneAxes[it->plane][1]) + ")";
    } else {
      const Vec3 &t = it->translation;
      out += "T(" + format_number(t.x) + "*e1 + " + format_number(t.y) + "*e2 + " + format_number(t.z) + "*e3)";
    }
  }
  return out;
}

Se3Request chain_se3(const RandomChain &chain, const std::string &object) {
  std::vector<Se3Op> ops;
  for (const auto &s : chain.steps) {
    if (s.rotate)
      ops.emplace_back(Se3Rotate{kPlaneNormals[s.plane], s.angle_rad});
    else
      ops.emplace_back(Se3Translate{s.translation});
  }
  return {{{object, std::move(ops)}}};
}

Mat4 chain_mat4(const RandomChain &chain) {
  Mat4 m = mat4_identity();
  for (const auto &s : chain.steps)
    m = (s.rotate ? mat4_rotation(kPlaneNormals[s.plane], s.angle_rad) : mat4_translation(s.translation)) * m;
  return m;
}

DifferentialOutcome differential_check(const RandomChain &chain) {
  const Scene scene = probe_scene(chain.start);
  DifferentialOutcome out;

  EditRequest cga{{{kObject, chain_cga_text(chain)}}};
  const auto cga_doc = edit_request_to_json(cga).dump();
  const ExecutionResult r1 = execute_request(scene, parse_edit_request(cga_doc));
  const auto se3_doc = se3_to_json(chain_se3(chain, kObject)).dump();
  const ExecutionResult r2 = apply_se3(scene, parse_se3(se3_doc));
  const auto mat_doc = mat4_to_json(Mat4Request{{{kObject, chain_mat4(chain)}}}).dump();
  const ExecutionResult r3 = apply_mat4(scene, parse_mat4(mat_doc));
  if (!r1.all_ok() || !r2.all_ok() || !r3.all_ok()) {
    out.max_discrepancy = INFINITY;
    return out;
  }
  out.cga = r1.scene.at(kObject).center;
  out.se3 = r2.scene.at(kObject).center;
  out.mat4 = r3.scene.at(kObject).center;
  out.max_discrepancy = std::fmax(max_abs_difference(out.cga, out.se3),
                                  std::fmax(max_abs_difference(out.cga, out.mat4), max_abs_difference(out.se3, out.mat4)));
  return out;
}

DifferentialReport differential_sweep(std::size_t count, std::uint64_t seed, double tolerance, std::size_t max_length) {
  std::vector<double> d(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    d[k] = differential_check(random_chain(seed, k, max_length)).max_discrepancy;
  }
  DifferentialReport r;
  r.chains = count;
  for (std::size_t i = 0; i < count; ++i) fold(r, i, d[i], tolerance);
  return r;
}

DifferentialReport differential_sweep_serial(std::size_t count, std::uint64_t seed, double tolerance,
                                             std::size_t max_length) {
  DifferentialReport r;
  r.chains = count;
  for (std::size_t i = 0; i < count; ++i)
    fold(r, i, differential_check(random_chain(seed, i, max_length)).max_discrepancy, tolerance);
  return r;
}

}  // namespace cgaedit
