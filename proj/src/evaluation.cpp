#include "cgaedit/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "cgaedit/errors.hpp"

namespace cgaedit {

namespace {

using ojson = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Vec3 vec3_from(const ojson &v, const std::string &what) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(what + " must be [x, y, z]");
  try {
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  } catch (const nlohmann::json::exception &) {
    throw ConfigError(what + " must hold numbers");
  }
}

ojson vec3_to(const Vec3 &v) { return ojson::array({v.x, v.y, v.z}); }

int axis_from(const ojson &v) {
  if (v.is_number_integer()) {
    const int a = v.get<int>();
    if (a >= 0 && a <= 2) return a;
  } else if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "x") return 0;
    if (s == "y") return 1;
    if (s == "z") return 2;
  }
  throw ConfigError("axis must be x, y, z or 0..2");
}

std::string field(const ojson &doc, const char *key) {
  if (!doc.contains(key) || !doc.at(key).is_string()) throw ConfigError(std::string("missing string field '") + key + "'");
  return doc.at(key).get<std::string>();
}

}  // namespace

std::string_view to_string(OutputKind kind) {
  switch (kind) {
    case OutputKind::cga_json: return "cga_json";
    case OutputKind::se3_json: return "se3_json";
    case OutputKind::mat4_json: return "mat4_json";
  }
  return "unknown";
}

OutputKind output_kind_from_string(std::string_view name) {
  if (name == "cga_json") return OutputKind::cga_json;
  if (name == "se3_json") return OutputKind::se3_json;
  if (name == "mat4_json") return OutputKind::mat4_json;
  throw ConfigError("unknown output kind: " + std::string(name));
}

std::string strip_code_fences(std::string_view raw) {
  std::string_view s = trim(raw);
  if (s.substr(0, 3) == "```") {
    const auto eol = s.find('\n');
    s = eol == std::string_view::npos ? std::string_view{} : s.substr(eol + 1);
    const auto close = s.rfind("```");
    if (close != std::string_view::npos) s = s.substr(0, close);
    s = trim(s);
  }
  return std::string(s);
}

ParseCheck check_parse(std::string_view raw, OutputKind kind) {
  ParseCheck out;
  const std::string text = strip_code_fences(raw);
  try {
    switch (kind) {
      case OutputKind::cga_json: {
        EditRequest request = parse_edit_request(text);
        for (const auto &[name, expr] : request.assignments) {
          try {
            (void)evaluate_cga(parse_cga(expr));
          } catch (const CgaError &e) {
            out.diagnostics.push_back(name + ": " + e.what());
          }
        }
        out.parse_ok = out.diagnostics.empty();
        out.parsed = std::move(request);
        break;
      }
      case OutputKind::se3_json:
        out.parsed = parse_se3(text);
        out.parse_ok = true;
        break;
      case OutputKind::mat4_json:
        out.parsed = parse_mat4(text);
        out.parse_ok = true;
        break;
    }
  } catch (const Error &e) {
    out.diagnostics.push_back(e.what());
  }
  if (!out.parse_ok) out.parsed.reset();
  return out;
}

ExecutionResult execute_parsed(const Scene &scene, const ParsedOutput &parsed) {
  if (const auto *cga = std::get_if<EditRequest>(&parsed)) return execute_request(scene, *cga);
  if (const auto *se3 = std::get_if<Se3Request>(&parsed)) return apply_se3(scene, *se3);
  return apply_mat4(scene, std::get<Mat4Request>(parsed));
}

SpatialResult spatial_error(const Scene &scene_after, const std::vector<std::pair<std::string, Vec3>> &expected) {
  SpatialResult r;
  for (const auto &[name, position] : expected) {
    const double e = distance(scene_after.at(name).center, position);
    r.per_object.emplace_back(name, e);
    r.max_error = std::max(r.max_error, e);
  }
  r.exact_success = r.max_error < kExactPlacementThreshold;
  return r;
}

SemanticRule semantic_rule_from_json(const ojson &doc) {
  if (!doc.is_object()) throw ConfigError("semantic rule must be an object");
  const std::string type = field(doc, "type");
  auto tolerance = [&](double fallback) {
    if (!doc.contains("tolerance")) return fallback;
    const double t = doc.at("tolerance").get<double>();
    if (!(t > 0.0)) throw ConfigError("rule tolerance must be positive");
    return t;
  };
  try {
    if (type == "surface_contact")
      return SurfaceContact{field(doc, "mover"), field(doc, "target"),
                            doc.contains("axis") ? axis_from(doc.at("axis")) : 1, tolerance(kPlacementTolerance)};
    if (type == "midpoint")
      return Midpoint{field(doc, "mover"), field(doc, "a"), field(doc, "b"), tolerance(kPlacementTolerance)};
    if (type == "target_displacement")
      return TargetDisplacement{field(doc, "mover"), vec3_from(doc.at("delta"), "delta"), tolerance(kPlacementTolerance)};
    if (type == "scale_factor") {
      const double s = doc.at("s").get<double>();
      if (!(s > 0.0)) throw ConfigError("scale rule needs s > 0");
      return ScaleFactor{field(doc, "mover"), s, tolerance(kScaleTolerance)};
    }
    if (type == "absolute_placement")
      return AbsolutePlacement{field(doc, "mover"), vec3_from(doc.at("position"), "position"),
                               tolerance(kPlacementTolerance)};
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("malformed semantic rule: ") + e.what());
  }
  throw ConfigError("unknown semantic rule type: " + type);
}

ojson semantic_rule_to_json(const SemanticRule &rule) {
  return std::visit(
      [](const auto &r) -> ojson {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, SurfaceContact>)
          return {{"type", "surface_contact"}, {"mover", r.mover}, {"target", r.target}, {"axis", r.axis}, {"tolerance", r.tolerance}};
        else if constexpr (std::is_same_v<R, Midpoint>)
          return {{"type", "midpoint"}, {"mover", r.mover}, {"a", r.a}, {"b", r.b}, {"tolerance", r.tolerance}};
        else if constexpr (std::is_same_v<R, TargetDisplacement>)
          return {{"type", "target_displacement"}, {"mover", r.mover}, {"delta", vec3_to(r.delta)}, {"tolerance", r.tolerance}};
        else if constexpr (std::is_same_v<R, ScaleFactor>)
          return {{"type", "scale_factor"}, {"mover", r.mover}, {"s", r.s}, {"tolerance", r.tolerance}};
        else
          return {{"type", "absolute_placement"}, {"mover", r.mover}, {"position", vec3_to(r.position)}, {"tolerance", r.tolerance}};
      },
      rule);
}

bool check_semantic(const SemanticRule &rule, const Scene &before, const Scene &after) {
  return std::visit(
      [&](const auto &r) -> bool {
        using R = std::decay_t<decltype(r)>;
        const SceneObject &m = after.at(r.mover);
        if constexpr (std::is_same_v<R, SurfaceContact>) {
          const SceneObject &t = after.at(r.target);
          const Aabb mb = aabb(m);
          const Aabb tb = aabb(t);
          const int k = r.axis;
          const double gap = m.center[k] >= t.center[k] ? mb.min[k] - tb.max[k] : tb.min[k] - mb.max[k];
          return std::abs(gap) <= r.tolerance;
        } else if constexpr (std::is_same_v<R, Midpoint>) {
          const Vec3 mid = (after.at(r.a).center + after.at(r.b).center) * 0.5;
          return distance(m.center, mid) <= r.tolerance;
        } else if constexpr (std::is_same_v<R, TargetDisplacement>) {
          return distance(m.center - before.at(r.mover).center, r.delta) <= r.tolerance;
        } else if constexpr (std::is_same_v<R, ScaleFactor>) {
          const double ratio = m.size / before.at(r.mover).size;
          return std::abs(ratio - r.s) <= r.tolerance * r.s;
        } else {
          return distance(m.center, r.position) <= r.tolerance;
        }
      },
      rule);
}

std::vector<std::pair<std::string, OperationChain>> extract_chains(const ParsedOutput &parsed) {
  std::vector<std::pair<std::string, OperationChain>> out;
  if (const auto *cga = std::get_if<EditRequest>(&parsed)) {
    for (const auto &[name, expr] : cga->assignments) {
      OperationChain chain;
      try {
        chain = evaluate_cga(parse_cga(expr)).op_chain;
      } catch (const CgaError &) {
      }
      out.emplace_back(name, std::move(chain));
    }
  } else if (const auto *se3 = std::get_if<Se3Request>(&parsed)) {
    for (const auto &[name, ops] : se3->assignments) out.emplace_back(name, se3_chain(ops));
  } else {
    for (const auto &[name, m] : std::get<Mat4Request>(parsed).assignments)
      out.emplace_back(name, OperationChain{{classify_mat4(m)}});
  }
  return out;
}

OperationChain extract_chain(const ParsedOutput &parsed, std::string_view object) {
  for (auto &[name, chain] : extract_chains(parsed))
    if (name == object) return chain;
  return {};
}

bool params_match(const std::vector<double> &a, const std::vector<double> &b, double tolerance) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
    if (!(std::abs(a[i] - b[i]) <= tolerance * scale)) return false;
  }
  return true;
}

bool check_sequence_fidelity(const OperationChain &expected, const OperationChain &actual, double tolerance) {
  std::size_t next = 0;
  for (const auto &op : actual.ops) {
    if (next == expected.ops.size()) break;
    const ChainOp &want = expected.ops[next];
    if (op.kind == want.kind && params_match(want.params, op.params, tolerance)) ++next;
  }
  return next == expected.ops.size();
}

TaskDefinition task_from_json(const ojson &doc, const std::filesystem::path &base_dir) {
  if (!doc.is_object()) throw ConfigError("task must be an object");
  TaskDefinition t;
  t.id = field(doc, "id");
  t.instruction = field(doc, "instruction");
  try {
    if (doc.contains("methods")) t.methods = doc.at("methods").get<std::vector<std::string>>();
    if (doc.contains("scene")) {
      const auto &s = doc.at("scene");
      if (s.is_string()) {
        const std::string name = s.get<std::string>();
        if (name != "default") {
          t.scene.source = TaskScene::Source::file;
          const std::filesystem::path p(name);
          t.scene.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
          t.scene.scene = load_scene(t.scene.path);
        }
      } else if (s.contains("generate")) {
        t.scene.source = TaskScene::Source::generated;
        t.scene.count = s.at("generate").at("count").get<std::size_t>();
        t.scene.seed = s.at("generate").at("seed").get<std::uint64_t>();
      } else {
        t.scene.source = TaskScene::Source::inline_scene;
        t.scene.scene = scene_from_json(s);
      }
    }
    if (doc.contains("context_limit")) t.context_limit = doc.at("context_limit").get<std::size_t>();
    if (doc.contains("expected_chain")) t.expected_chain = chain_from_json(doc.at("expected_chain"));
    if (doc.contains("chain_object")) t.chain_object = doc.at("chain_object").get<std::string>();
    if (doc.contains("semantic_rules"))
      for (const auto &r : doc.at("semantic_rules")) t.semantic_rules.push_back(semantic_rule_from_json(r));
    if (doc.contains("expected_positions"))
      for (const auto &[name, v] : doc.at("expected_positions").items())
        t.expected_positions.emplace_back(name, vec3_from(v, "expected position"));
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError("task " + t.id + ": " + e.what());
  }
  return t;
}

ojson task_to_json(const TaskDefinition &t) {
  ojson doc{{"id", t.id}, {"instruction", t.instruction}};
  if (!t.methods.empty()) doc["methods"] = t.methods;
  switch (t.scene.source) {
    case TaskScene::Source::default_scene: doc["scene"] = "default"; break;
    case TaskScene::Source::generated: doc["scene"] = {{"generate", {{"count", t.scene.count}, {"seed", t.scene.seed}}}}; break;
    case TaskScene::Source::inline_scene: doc["scene"] = scene_to_json(t.scene.scene); break;
    case TaskScene::Source::file: doc["scene"] = t.scene.path.string(); break;
  }
  if (t.context_limit) doc["context_limit"] = *t.context_limit;
  if (t.expected_chain) doc["expected_chain"] = chain_to_json(*t.expected_chain);
  if (t.chain_object) doc["chain_object"] = *t.chain_object;
  if (!t.semantic_rules.empty()) {
    doc["semantic_rules"] = ojson::array();
    for (const auto &r : t.semantic_rules) doc["semantic_rules"].push_back(semantic_rule_to_json(r));
  }
  if (!t.expected_positions.empty()) {
    doc["expected_positions"] = ojson::object();
    for (const auto &[name, v] : t.expected_positions) doc["expected_positions"][name] = vec3_to(v);
  }
  return doc;
}

Scene materialize_scene(const TaskScene &s) {
  switch (s.source) {
    case TaskScene::Source::default_scene: return default_scene();
    case TaskScene::Source::inline_scene:
    case TaskScene::Source::file: return s.scene;
    case TaskScene::Source::generated: return generate_scene(s.count, s.seed);
  }
  return default_scene();
}

ojson verdict_to_json(const Verdict &v) {
  ojson doc{{"parse_ok", v.parse_ok}};
  doc["semantic_ok"] = v.semantic_ok ? ojson(*v.semantic_ok) : ojson(nullptr);
  doc["fidelity_ok"] = v.fidelity_ok ? ojson(*v.fidelity_ok) : ojson(nullptr);
  doc["spatial_error"] = v.spatial_error ? ojson(*v.spatial_error) : ojson(nullptr);
  doc["exact_success"] = v.exact_success ? ojson(*v.exact_success) : ojson(nullptr);
  doc["diagnostics"] = v.diagnostics;
  return doc;
}

Verdict verdict_from_json(const ojson &doc) {
  Verdict v;
  v.parse_ok = doc.at("parse_ok").get<bool>();
  auto opt_bool = [&](const char *k) -> std::optional<bool> {
    if (!doc.contains(k) || doc.at(k).is_null()) return std::nullopt;
    return doc.at(k).get<bool>();
  };
  v.semantic_ok = opt_bool("semantic_ok");
  v.fidelity_ok = opt_bool("fidelity_ok");
  v.exact_success = opt_bool("exact_success");
  if (doc.contains("spatial_error") && !doc.at("spatial_error").is_null()) v.spatial_error = doc.at("spatial_error").get<double>();
  if (doc.contains("diagnostics")) v.diagnostics = doc.at("diagnostics").get<std::vector<std::string>>();
  return v;
}

Evaluation evaluate_output(const TaskDefinition &task, const Scene &scene, std::string_view raw, OutputKind kind) {
  Evaluation ev;
  ParseCheck pc = check_parse(raw, kind);
  ev.verdict.parse_ok = pc.parse_ok;
  ev.verdict.diagnostics = std::move(pc.diagnostics);
  if (!pc.parse_ok) return ev;
  ev.parsed = std::move(pc.parsed);
  ev.execution = execute_parsed(scene, *ev.parsed);
  const ExecutionResult &exec = *ev.execution;
  for (const auto &s : exec.statuses) {
    if (!s.ok) ev.verdict.diagnostics.push_back(s.name + ": " + s.error);
    for (const auto &w : s.warnings) ev.verdict.diagnostics.push_back(s.name + ": " + w);
  }

  if (!task.semantic_rules.empty()) {
    bool ok = exec.all_ok();
    for (const auto &rule : task.semantic_rules) {
      try {
        if (!check_semantic(rule, scene, exec.scene)) ok = false;
      } catch (const SceneError &e) {
        ev.verdict.diagnostics.push_back(e.what());
        ok = false;
      }
    }
    ev.verdict.semantic_ok = ok;
  }

  if (task.expected_chain) {
    const auto chains = extract_chains(*ev.parsed);
    std::string object = task.chain_object.value_or(chains.empty() ? std::string{} : chains.front().first);
    OperationChain actual;
    for (const auto &[name, chain] : chains)
      if (name == object) actual = chain;
    ev.verdict.fidelity_ok = !actual.ops.empty() && check_sequence_fidelity(*task.expected_chain, actual);
  }

  if (!task.expected_positions.empty()) {
    try {
      const SpatialResult sr = spatial_error(exec.scene, task.expected_positions);
      ev.verdict.spatial_error = sr.max_error;
      ev.verdict.exact_success = sr.exact_success;
    } catch (const SceneError &e) {
      ev.verdict.diagnostics.push_back(e.what());
      ev.verdict.exact_success = false;
    }
  }
  return ev;
}

}  // namespace cgaedit
