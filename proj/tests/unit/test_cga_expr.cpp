#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "cgaedit/cga_expr.hpp"

using namespace cgaedit;
using std::numbers::pi;

namespace {

CgaErrorKind kind_of(const std::string &expr) {
  try {
    evaluate_cga(parse_cga(expr));
  } catch (const CgaError &e) {
    return e.kind();
  }
  FAIL("expected a CgaError for " << expr);
  return CgaErrorKind::request;
}

}  // namespace

TEST_CASE("parse and print round trip") {
  for (const char *src : {"T(2.0*e1 + 0.0*e2 + 0.0*e3)", "R(pi/2, e1, e2) * T(1*e1 - 3*e3)", "D(1.5)",
                          "R(np.pi/4, e3, e1) * D(2) * T(e2)", "T(sqrt(2)/2*e1)", "R(-pi, e2, e3)",
                          "T((1 + 2) * e1)"}) {
    const CgaAst ast = parse_cga(src);
    CHECK(parse_cga(print_cga(ast)) == ast);
  }
}

TEST_CASE("error kinds") {
  CHECK(kind_of("R(pi/2, 1, 2)") == CgaErrorKind::plane_argument);
  CHECK(kind_of("R(pi/2, e1, e1)") == CgaErrorKind::plane_argument);
  CHECK(kind_of("T(1*e1") == CgaErrorKind::syntax);
  CHECK(kind_of("") == CgaErrorKind::syntax);
  CHECK(kind_of("T(e1) T(e2)") == CgaErrorKind::syntax);
  CHECK(kind_of("Q(1)") == CgaErrorKind::unknown_identifier);
  CHECK(kind_of("T(e7)") == CgaErrorKind::unknown_identifier);
  CHECK(kind_of("T(1, 2)") == CgaErrorKind::arity);
  CHECK(kind_of("T(3)") == CgaErrorKind::type);
  CHECK(kind_of("D(e1)") == CgaErrorKind::type);
  CHECK(kind_of("T(e1*e2)") == CgaErrorKind::type);
  CHECK(kind_of("D(-1)") == CgaErrorKind::domain);
  CHECK(kind_of("D(0)") == CgaErrorKind::domain);
  CHECK(kind_of("T(sqrt(-1)*e1)") == CgaErrorKind::domain);
  CHECK(kind_of("T(1/0*e1)") == CgaErrorKind::non_finite);
  CHECK(kind_of("T(1e400*e1)") != CgaErrorKind::request);
  CHECK(kind_of("T(1*e1) $") == CgaErrorKind::lexical);
}

TEST_CASE("factors execute right to left") {
  const MotorProgram p = evaluate_cga(parse_cga("T(5*e1) * R(pi/2, e1, e2)"));
  CHECK(p.factor_motors.size() == 2);
  const Vec3 q = apply(p.composed, Vec3{1, 0, 0});
  CHECK(max_abs_difference(q, Vec3{5, 1, 0}) < 1e-12);
  REQUIRE(p.op_chain.ops.size() == 2);
  CHECK(p.op_chain.ops[0].kind == OpKind::rotate);
  CHECK(p.op_chain.ops[1].kind == OpKind::translate);
  CHECK(p.op_chain.ops[0].params[2] == doctest::Approx(pi / 2));
}

TEST_CASE("edit request documents") {
  const EditRequest r = parse_edit_request(R"j({"RedSphere": "T(2*e1)", "BlueCube": "D(2)"})j");
  REQUIRE(r.assignments.size() == 2);
  CHECK(r.assignments[0].first == "RedSphere");
  CHECK(edit_request_from_json(edit_request_to_json(r)) == r);
  CHECK_THROWS_AS(parse_edit_request("[1, 2]"), CgaError);
  CHECK_THROWS_AS(parse_edit_request("{}"), CgaError);
  CHECK_THROWS_AS(parse_edit_request(R"j({"RedSphere": 3})j"), CgaError);
  CHECK_THROWS_AS(parse_edit_request(R"j({"RedSphere": "T(e1)")j"), CgaError);
}

TEST_CASE("execution on the default scene") {
  const Scene s = default_scene();
  SUBCASE("translation") {
    const auto res = execute_request(s, parse_edit_request(R"j({"RedSphere": "T(2.0*e1 + 0.0*e2 + 0.0*e3)"})j"));
    CHECK(res.all_ok());
    CHECK(max_abs_difference(res.scene.at("RedSphere").center, Vec3{2, 0, 0}) < 1e-12);
    CHECK(res.scene.revision() == s.revision() + 1);
  }
  SUBCASE("lone D scales the object in place") {
    const auto res = execute_request(s, parse_edit_request(R"j({"BlueCube": "D(2)"})j"));
    CHECK(res.statuses[0].scaled);
    CHECK(res.scene.at("BlueCube").size == doctest::Approx(2.0));
    CHECK(res.scene.at("BlueCube").center == s.at("BlueCube").center);
  }
  SUBCASE("D inside a chain moves the center") {
    const auto res = execute_request(s, parse_edit_request(R"j({"BlueCube": "D(2) * T(1*e2)"})j"));
    CHECK_FALSE(res.statuses[0].scaled);
    CHECK(max_abs_difference(res.scene.at("BlueCube").center, Vec3{8, 2, 0}) < 1e-12);
  }
  SUBCASE("failures are per assignment") {
    const auto res = execute_request(s, parse_edit_request(R"j({"RedSphere": "T(1*e1)", "Nope": "T(e1)", "BlueCube": "R(pi, 1, 2)"})j"));
    CHECK_FALSE(res.all_ok());
    CHECK(res.statuses[0].ok);
    CHECK_FALSE(res.statuses[1].ok);
    CHECK_FALSE(res.statuses[2].ok);
    CHECK(res.scene.at("BlueCube") == s.at("BlueCube"));
    CHECK(max_abs_difference(res.scene.at("RedSphere").center, Vec3{1, 0, 0}) < 1e-12);
  }
}
