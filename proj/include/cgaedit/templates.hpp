#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cgaedit/cga_expr.hpp"
#include "cgaedit/scene.hpp"

namespace cgaedit {

enum class RelationKind { next_to_left, on_top_of, between, rotate, scale };

std::string_view to_string(RelationKind kind);

struct SpatialRelation {
  RelationKind kind = RelationKind::next_to_left;
  std::string mover;
  std::vector<std::string> targets;
  std::optional<double> angle_rad;
  std::optional<std::pair<int, int>> plane;
  std::optional<double> factor;
};

enum class Route { template_engine, llm, fallback_template };

std::string_view to_string(Route route);

struct RouteDecision {
  Route route = Route::fallback_template;
  std::optional<std::string> matched_keyword;

  bool operator==(const RouteDecision &) const = default;
};

// Case-insensitive scan for "on top", "next to", "between", "rotate", "scale"
// and "left". The earliest occurrence wins; equal positions fall back to
// on top > between > next to/left > rotate > scale.
RouteDecision route(std::string_view instruction, bool llm_available);

struct ColorMention {
  std::string color;
  std::size_t position = 0;
  std::string object;
};

struct References {
  std::string mover;
  std::vector<std::string> targets;
  std::vector<ColorMention> mentions;
};

// Colors come from the scene's own objects. The first mentioned object moves,
// later ones are targets. Throws TemplateError when no scene color occurs.
References parse_references(std::string_view instruction, const Scene &scene);

EditRequest next_to_left(const SceneObject &mover, const SceneObject &target);
EditRequest on_top_of(const SceneObject &mover, const SceneObject &target);
EditRequest between(const SceneObject &mover, const SceneObject &a, const SceneObject &b);
// Throws TemplateError unless i != j, both in 1..3.
EditRequest rotate_template(const SceneObject &mover, double angle_rad, std::pair<int, int> plane);
// Throws TemplateError unless s > 0.
EditRequest scale_template(const SceneObject &mover, double s);

// "T(a*e1 + b*e2 + c*e3)" with every component spelled out.
std::string translation_expression(const Vec3 &delta);
// Multiples of pi with small denominators print symbolically ("pi/2").
std::string angle_expression(double angle_rad);

// Angle in the instruction ("45 degrees", "pi/2", "0.5 rad"); 90 degrees when
// absent. A leading "clockwise" flips the sign.
double parse_angle(std::string_view instruction);
// "around the x axis" -> (e2,e3), y -> (e3,e1), z or unspecified -> (e1,e2).
std::pair<int, int> parse_plane(std::string_view instruction);
// "by 2", "2x", "double", "half". Throws TemplateError when absent.
double parse_factor(std::string_view instruction);

// Relation implied by a template-routed instruction. Throws TemplateError.
SpatialRelation build_relation(std::string_view instruction, const Scene &scene);
EditRequest render_relation(const SpatialRelation &relation, const Scene &scene);

// route + build_relation + render_relation. Throws TemplateError when the
// instruction carries no known keyword.
EditRequest template_edit(std::string_view instruction, const Scene &scene);

}  // namespace cgaedit
