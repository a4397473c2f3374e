#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "cgaedit/templates.hpp"

using namespace cgaedit;
using std::numbers::pi;

TEST_CASE("routing") {
  CHECK(route("Put the red sphere on top of the cube", true).route == Route::template_engine);
  CHECK(route("Put the red sphere on top of the cube", true).matched_keyword == "on top");
  CHECK(route("Make it sparkle", true).route == Route::llm);
  CHECK(route("Make it sparkle", false).route == Route::fallback_template);
  CHECK(route("ROTATE the cube", false).route == Route::template_engine);
  // earliest keyword wins
  CHECK(route("Scale the cube then rotate it", true).matched_keyword == "scale");
  CHECK(route("Rotate the cube then scale it", true).matched_keyword == "rotate");
  CHECK(route("Move the red sphere next to the blue cube, to its left side.", true).matched_keyword == "next to");
  CHECK(to_string(Route::fallback_template) == "fallback_template");
}

TEST_CASE("color references") {
  const std::string text = "Move the red sphere next to the blue cube, to its left side.";
  const References r = parse_references(text, default_scene());
  CHECK(r.mover == "RedSphere");
  REQUIRE(r.targets.size() == 1);
  CHECK(r.targets[0] == "BlueCube");
  REQUIRE(r.mentions.size() == 2);
  CHECK(r.mentions[0].position == 9);
  CHECK(r.mentions[1].position == text.find("blue"));
  CHECK_THROWS_AS(parse_references("move the thing", default_scene()), TemplateError);
  // word boundaries: "redder" is not "red"
  CHECK_THROWS_AS(parse_references("make it redder", default_scene()), TemplateError);
}

TEST_CASE("worked example: next to, left side") {
  const Scene s = default_scene();
  const EditRequest r = template_edit("Move the red sphere next to the blue cube, to its left side.", s);
  REQUIRE(r.assignments.size() == 1);
  CHECK(r.assignments[0].first == "RedSphere");
  CHECK(r.assignments[0].second == "T(2.0*e1 + 0.0*e2 + 0.0*e3)");
  const auto res = execute_request(s, r);
  CHECK(max_abs_difference(res.scene.at("RedSphere").center, Vec3{2, 0, 0}) < 1e-12);
}

TEST_CASE("worked example: on top") {
  const Scene s = default_scene();
  const EditRequest r = template_edit("Place the green sphere on top of the blue cube.", s);
  CHECK(r.assignments[0].second == "T(7.0*e1 + 1.7*e2 + -2.0*e3)");
  const auto res = execute_request(s, r);
  const auto &g = res.scene.at("GreenSphere");
  CHECK(max_abs_difference(g.center, Vec3{4, 1.7, 0}) < 1e-12);
  CHECK(g.center.y - g.size == doctest::Approx(aabb(s.at("BlueCube")).max.y));
}

TEST_CASE("between puts the mover at the midpoint") {
  const Scene s = default_scene();
  const auto res = execute_request(s, template_edit("Move the green sphere between the red sphere and the blue cube", s));
  CHECK(max_abs_difference(res.scene.at("GreenSphere").center, Vec3{2, 0, 0}) < 1e-12);
  CHECK_THROWS_AS(template_edit("Move the green sphere between the red sphere", s), TemplateError);
}

TEST_CASE("rotation and scale templates") {
  const Scene s = default_scene();
  CHECK(template_edit("Rotate the blue cube 90 degrees around the y axis", s).assignments[0].second == "R(pi/2, e3, e1)");
  CHECK(template_edit("Scale the blue cube by 1.5", s).assignments[0].second == "D(1.5)");
  CHECK_THROWS_AS(rotate_template(s.at("BlueCube"), 1.0, {1, 1}), TemplateError);
  CHECK_THROWS_AS(scale_template(s.at("BlueCube"), 0.0), TemplateError);
  CHECK_THROWS_AS(template_edit("Make the blue cube sparkle", s), TemplateError);
}

TEST_CASE("instruction parsers") {
  CHECK(parse_angle("rotate by 45 degrees") == doctest::Approx(pi / 4));
  CHECK(parse_angle("rotate by pi/3") == doctest::Approx(pi / 3));
  CHECK(parse_angle("rotate by 0.5 rad") == doctest::Approx(0.5));
  CHECK(parse_angle("rotate the pink spinner") == doctest::Approx(pi / 2));
  CHECK(parse_angle("rotate clockwise 30 degrees") == doctest::Approx(-pi / 6));
  CHECK(parse_plane("around the x axis") == std::pair{2, 3});
  CHECK(parse_plane("about y") == std::pair{3, 1});
  CHECK(parse_plane("spin it") == std::pair{1, 2});
  CHECK(parse_factor("scale by 2") == doctest::Approx(2.0));
  CHECK(parse_factor("make it 3x bigger") == doctest::Approx(3.0));
  CHECK(parse_factor("double it") == doctest::Approx(2.0));
  CHECK(parse_factor("half size") == doctest::Approx(0.5));
  CHECK_THROWS_AS(parse_factor("scale it"), TemplateError);
}

TEST_CASE("angle expressions") {
  CHECK(angle_expression(pi / 2) == "pi/2");
  CHECK(angle_expression(3 * pi / 2) == "3*pi/2");
  CHECK(angle_expression(-pi) == "-pi");
  CHECK(angle_expression(0.0) == "0");
  CHECK(translation_expression({2, 0, 0}) == "T(2.0*e1 + 0.0*e2 + 0.0*e3)");
}

TEST_CASE("template outputs always execute") {
  const Scene s = default_scene();
  const char *instructions[] = {
      "Put the purple sphere on top of the yellow cube",
      "Move the yellow cube next to the green sphere",
      "Put the red sphere to the left of the purple sphere",
      "Place the blue cube between the green sphere and the purple sphere",
      "Rotate the yellow cube 30 degrees around the x axis",
      "Scale the green sphere by 2",
  };
  for (const char *text : instructions) {
    const auto res = execute_request(s, template_edit(text, s));
    CHECK_MESSAGE(res.all_ok(), text);
  }
}
