#include <doctest.h>

#include <fstream>
#include <functional>

#include "cgaedit/evaluation.hpp"
#include "oracles.hpp"

using namespace cgaedit;
using ojson = nlohmann::ordered_json;

namespace {

TaskDefinition on_top_task() {
  return task_from_json(ojson::parse(R"j({
    "id": "t1", "instruction": "Place the green sphere on top of the yellow cube", "scene": "default",
    "semantic_rules": [{"type": "surface_contact", "mover": "GreenSphere", "target": "YellowCube", "axis": "y"},
                       {"type": "absolute_placement", "mover": "GreenSphere", "position": [4, 1.7, -3]}],
    "expected_positions": {"GreenSphere": [4, 1.7, -3]}
  })j"));
}

std::vector<OperationChain> all_chains(const std::vector<ChainOp> &alphabet, std::size_t max_len) {
  std::vector<OperationChain> out{OperationChain{}};
  std::vector<OperationChain> frontier{OperationChain{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<OperationChain> next;
    for (const auto &c : frontier)
      for (const auto &op : alphabet) {
        OperationChain d = c;
        d.ops.push_back(op);
        next.push_back(d);
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("code fences are stripped") {
  CHECK(strip_code_fences("```json\n{\"a\": 1}\n```") == "{\"a\": 1}");
  CHECK(strip_code_fences("  {\"a\": 1}  ") == "{\"a\": 1}");
  CHECK(strip_code_fences("```\nT\n```") == "T");
}

TEST_CASE("parse check per output kind") {
  CHECK(check_parse(R"j({"RedSphere": "T(1*e1)"})j", OutputKind::cga_json).parse_ok);
  CHECK_FALSE(check_parse(R"j({"RedSphere": "R(pi/2, 1, 2)"})j", OutputKind::cga_json).parse_ok);
  CHECK_FALSE(check_parse(R"j({"RedSphere": "T(1*e1)")j", OutputKind::cga_json).parse_ok);
  CHECK(check_parse("```json\n{\"RedSphere\": \"T(1*e1)\"}\n```", OutputKind::cga_json).parse_ok);
  CHECK(check_parse(R"j({"A": [{"type":"T","v":[1,0,0]}]})j", OutputKind::se3_json).parse_ok);
  CHECK_FALSE(check_parse(R"j({"A": [{"type":"T","v":[1,0]}]})j", OutputKind::se3_json).parse_ok);
  CHECK(check_parse(R"j({"A": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]})j", OutputKind::mat4_json).parse_ok);
  const ParseCheck bad = check_parse("nope", OutputKind::mat4_json);
  CHECK_FALSE(bad.parse_ok);
  CHECK_FALSE(bad.parsed.has_value());
  CHECK_FALSE(bad.diagnostics.empty());
}

TEST_CASE("semantic rules") {
  const Scene before = default_scene();
  SceneObject g = before.at("GreenSphere");
  g.center = {4, 1.7, -3};
  const Scene after = before.with_object(g);
  CHECK(check_semantic(SurfaceContact{"GreenSphere", "YellowCube", 1, 0.5}, before, after));
  CHECK_FALSE(check_semantic(SurfaceContact{"GreenSphere", "BlueCube", 0, 0.5}, before, after));
  CHECK(check_semantic(TargetDisplacement{"GreenSphere", {7, 1.7, -5}, 0.5}, before, after));
  CHECK(check_semantic(AbsolutePlacement{"GreenSphere", {4, 1.7, -3}, 0.5}, before, after));
  CHECK_FALSE(check_semantic(AbsolutePlacement{"GreenSphere", {4, 2.5, -3}, 0.5}, before, after));
  CHECK(check_semantic(Midpoint{"RedSphere", "BlueCube", "PurpleSphere", 3.0}, before, after));
  CHECK_FALSE(check_semantic(Midpoint{"RedSphere", "BlueCube", "PurpleSphere", 2.5}, before, after));
  CHECK_FALSE(check_semantic(ScaleFactor{"GreenSphere", 2.0, 1e-3}, before, after));

  const ojson j = semantic_rule_to_json(SurfaceContact{"A", "B", 2, 0.25});
  CHECK(semantic_rule_to_json(semantic_rule_from_json(j)) == j);
  CHECK_THROWS_AS(semantic_rule_from_json(ojson::parse(R"j({"type": "levitate", "mover": "A"})j")), ConfigError);
  CHECK_THROWS_AS(semantic_rule_from_json(ojson::parse(R"j({"type": "scale_factor", "mover": "A", "s": 0})j")), ConfigError);
}

TEST_CASE("evaluation layers") {
  const TaskDefinition t = on_top_task();
  const Scene s = materialize_scene(t.scene);
  const Evaluation good = evaluate_output(t, s, R"j({"GreenSphere": "T(7.0*e1 + 1.7*e2 + -5.0*e3)"})j", OutputKind::cga_json);
  CHECK(good.verdict.parse_ok);
  CHECK(good.verdict.semantic_ok == true);
  CHECK(good.verdict.exact_success == true);
  CHECK(*good.verdict.spatial_error < 1e-9);

  const Evaluation wrong = evaluate_output(t, s, R"j({"GreenSphere": "T(4*e1 + 1.7*e2 - 3*e3)"})j", OutputKind::cga_json);
  CHECK(wrong.verdict.parse_ok);
  CHECK(wrong.verdict.semantic_ok == false);
  CHECK(wrong.verdict.exact_success == false);

  const Evaluation broken = evaluate_output(t, s, R"j({"GreenSphere": "T(7.0*e1 +)"})j", OutputKind::cga_json);
  CHECK_FALSE(broken.verdict.parse_ok);
  CHECK_FALSE(broken.verdict.semantic_ok.has_value());

  const Verdict back = verdict_from_json(verdict_to_json(good.verdict));
  CHECK(back.semantic_ok == good.verdict.semantic_ok);
  CHECK(back.spatial_error == good.verdict.spatial_error);
}

TEST_CASE("shipped layering fixture") {
  std::ifstream in(std::string(CGAEDIT_DATA_DIR) + "/fixtures/layering.json");
  REQUIRE(in);
  const ojson doc = ojson::parse(in);
  const OutputKind kind = output_kind_from_string(doc.at("output_kind").get<std::string>());
  int parse_ok = 0, semantic_ok = 0;
  for (const auto &c : doc.at("cases")) {
    const TaskDefinition t = task_from_json(c.at("task"));
    const Evaluation e = evaluate_output(t, materialize_scene(t.scene), c.at("output").get<std::string>(), kind);
    const std::string k = c.at("kind");
    CHECK(e.verdict.parse_ok == (k != "malformed"));
    CHECK(e.verdict.semantic_ok.value_or(false) == (k == "correct"));
    parse_ok += e.verdict.parse_ok;
    semantic_ok += e.verdict.semantic_ok.value_or(false);
  }
  CHECK(parse_ok == 8);
  CHECK(semantic_ok == 4);
}

TEST_CASE("fidelity matches brute force over three kinds") {
  const std::vector<ChainOp> alphabet{{OpKind::translate, {1, 0, 0}}, {OpKind::rotate, {0, 0, 1}}, {OpKind::dilate, {2}}};
  const auto chains = all_chains(alphabet, 3);
  const std::function<bool(const ChainOp &, const ChainOp &)> eq = [](const ChainOp &a, const ChainOp &b) {
    return a.kind == b.kind && params_match(a.params, b.params);
  };
  for (const auto &e : chains)
    for (const auto &a : chains) CHECK(check_sequence_fidelity(e, a) == oracle::subsequence_bruteforce(e.ops, a.ops, eq));
}

TEST_CASE("fidelity rejects reordering and tolerates noise") {
  OperationChain expected{{{OpKind::translate, {1, 2, 3}}, {OpKind::rotate, {0, 1.5707963267948966, 0}}}};
  OperationChain swapped{{expected.ops[1], expected.ops[0]}};
  CHECK_FALSE(check_sequence_fidelity(expected, swapped));
  OperationChain noisy = expected;
  noisy.ops[0].params[0] += 1e-8;
  CHECK(check_sequence_fidelity(expected, noisy));
  noisy.ops[0].params[0] += 1e-3;
  CHECK_FALSE(check_sequence_fidelity(expected, noisy));
  CHECK(params_match({1000.0}, {1000.0005}));
  CHECK_FALSE(params_match({1.0, 2.0}, {1.0}));
}

TEST_CASE("chains from every output kind") {
  const auto cga = check_parse(R"j({"A": "T(2*e2) * R(pi/2, e3, e1)"})j", OutputKind::cga_json);
  const auto se3 = check_parse(R"j({"A": [{"type":"R","axis":[0,1,0],"angle_rad":1.5707963267948966}, {"type":"T","v":[0,2,0]}]})j",
                               OutputKind::se3_json);
  const OperationChain a = extract_chain(*cga.parsed, "A");
  const OperationChain b = extract_chain(*se3.parsed, "A");
  CHECK(check_sequence_fidelity(a, b));
  CHECK(check_sequence_fidelity(b, a));
  CHECK(extract_chain(*cga.parsed, "B").ops.empty());
}

TEST_CASE("task documents") {
  const TaskDefinition t = on_top_task();
  const TaskDefinition back = task_from_json(task_to_json(t));
  CHECK(back.id == t.id);
  CHECK(back.semantic_rules.size() == 2);
  CHECK(back.expected_positions == t.expected_positions);
  const TaskDefinition gen = task_from_json(ojson::parse(R"j({"id":"g","instruction":"x","scene":{"generate":{"count":12,"seed":4}}})j"));
  CHECK(materialize_scene(gen.scene).size() == 12);
  CHECK(materialize_scene(gen.scene) == materialize_scene(gen.scene));
  CHECK_THROWS_AS(task_from_json(ojson::parse(R"j({"instruction":"x"})j")), ConfigError);
}
