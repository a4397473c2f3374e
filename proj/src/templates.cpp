#include "cgaedit/templates.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <regex>

#include "cgaedit/errors.hpp"
#include "cgaedit/format.hpp"

namespace cgaedit {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Offsets of `word` in `text` bounded by non-word characters on both sides.
std::vector<std::size_t> word_positions(const std::string &text, const std::string &word) {
  std::vector<std::size_t> out;
  if (word.empty()) return out;
  for (std::size_t pos = text.find(word); pos != std::string::npos; pos = text.find(word, pos + 1)) {
    const bool left_ok = pos == 0 || !is_word_char(text[pos - 1]);
    const std::size_t end = pos + word.size();
    const bool right_ok = end >= text.size() || !is_word_char(text[end]);
    if (left_ok && right_ok) out.push_back(pos);
  }
  return out;
}

struct Keyword {
  const char *text;
  RelationKind kind;
  int priority;
};

constexpr std::array<Keyword, 6> kKeywords{{
    {"on top", RelationKind::on_top_of, 0},
    {"between", RelationKind::between, 1},
    {"next to", RelationKind::next_to_left, 2},
    {"left", RelationKind::next_to_left, 2},
    {"rotate", RelationKind::rotate, 3},
    {"scale", RelationKind::scale, 4},
}};

std::optional<Keyword> find_keyword(std::string_view instruction) {
  const std::string text = lower(instruction);
  std::optional<Keyword> best;
  std::size_t best_pos = std::string::npos;
  for (const auto &kw : kKeywords) {
    const std::size_t pos = text.find(kw.text);
    if (pos == std::string::npos) continue;
    if (!best || pos < best_pos || (pos == best_pos && kw.priority < best->priority)) {
      best = kw;
      best_pos = pos;
    }
  }
  return best;
}

std::optional<Shape> shape_word_after(const std::string &text, std::size_t pos) {
  while (pos < text.size() && !std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
  std::size_t end = pos;
  while (end < text.size() && std::isalpha(static_cast<unsigned char>(text[end]))) ++end;
  const std::string word = text.substr(pos, end - pos);
  if (word == "sphere" || word == "ball" || word == "spheres") return Shape::sphere;
  if (word == "cube" || word == "box" || word == "block" || word == "cubes") return Shape::cube;
  return std::nullopt;
}

double parse_number(const std::string &s) { return std::stod(s); }

}  // namespace

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::next_to_left: return "next_to_left";
    case RelationKind::on_top_of: return "on_top_of";
    case RelationKind::between: return "between";
    case RelationKind::rotate: return "rotate";
    case RelationKind::scale: return "scale";
  }
  return "unknown";
}

std::string_view to_string(Route route) {
  switch (route) {
    case Route::template_engine: return "template";
    case Route::llm: return "llm";
    case Route::fallback_template: return "fallback_template";
  }
  return "unknown";
}

RouteDecision route(std::string_view instruction, bool llm_available) {
  if (const auto kw = find_keyword(instruction)) return {Route::template_engine, std::string(kw->text)};
  return {llm_available ? Route::llm : Route::fallback_template, std::nullopt};
}

References parse_references(std::string_view instruction, const Scene &scene) {
  const std::string text = lower(instruction);
  std::vector<std::string> colors;
  for (const auto &obj : scene.objects()) {
    const std::string c = lower(obj.color);
    if (!c.empty() && std::find(colors.begin(), colors.end(), c) == colors.end()) colors.push_back(c);
  }
  std::vector<ColorMention> mentions;
  for (const auto &c : colors)
    for (std::size_t pos : word_positions(text, c)) mentions.push_back({c, pos, {}});
  std::sort(mentions.begin(), mentions.end(), [](const auto &a, const auto &b) {
    return a.position != b.position ? a.position < b.position : a.color.size() > b.color.size();
  });
  if (mentions.empty()) throw TemplateError("instruction names no color present in the scene");

  References refs;
  std::vector<std::string> used;
  for (auto &m : mentions) {
    const auto shape = shape_word_after(text, m.position + m.color.size());
    const SceneObject *pick = nullptr;
    const SceneObject *fallback = nullptr;
    for (const auto &obj : scene.objects()) {
      if (lower(obj.color) != m.color) continue;
      if (std::find(used.begin(), used.end(), obj.name) != used.end()) continue;
      if (!fallback) fallback = &obj;
      if (!shape || obj.shape == *shape) {
        pick = &obj;
        break;
      }
    }
    if (!pick) pick = fallback;
    if (!pick) continue;
    m.object = pick->name;
    used.push_back(pick->name);
    if (refs.mover.empty())
      refs.mover = pick->name;
    else
      refs.targets.push_back(pick->name);
  }
  if (refs.mover.empty()) throw TemplateError("no scene object matches the mentioned colors");
  std::erase_if(mentions, [](const ColorMention &m) { return m.object.empty(); });
  refs.mentions = std::move(mentions);
  return refs;
}

std::string translation_expression(const Vec3 &d) {
  return "T(" + format_decimal(d.x) + "*e1 + " + format_decimal(d.y) + "*e2 + " + format_decimal(d.z) + "*e3)";
}

std::string angle_expression(double angle_rad) {
  if (angle_rad == 0.0) return "0";
  const double r = angle_rad / std::numbers::pi;
  for (int den = 1; den <= 12; ++den) {
    const double num = std::round(r * den);
    if (num == 0.0 || std::abs(r * den - num) > 1e-12) continue;
    const long n = static_cast<long>(num);
    const long g = std::gcd(std::labs(n), static_cast<long>(den));
    const long nn = n / g;
    const long dd = den / g;
    std::string s = nn == 1 ? "pi" : (nn == -1 ? "-pi" : std::to_string(nn) + "*pi");
    if (dd != 1) s += "/" + std::to_string(dd);
    return s;
  }
  return format_number(angle_rad);
}

EditRequest next_to_left(const SceneObject &mover, const SceneObject &target) {
  const double dx = aabb(target).min.x - mover.size - mover.center.x;
  return {{{mover.name, translation_expression({dx, 0.0, 0.0})}}};
}

EditRequest on_top_of(const SceneObject &mover, const SceneObject &target) {
  const double new_y = aabb(target).max.y + mover.size;
  const Vec3 d{target.center.x - mover.center.x, new_y - mover.center.y, target.center.z - mover.center.z};
  return {{{mover.name, translation_expression(d)}}};
}

EditRequest between(const SceneObject &mover, const SceneObject &a, const SceneObject &b) {
  const Vec3 mid = (a.center + b.center) * 0.5;
  return {{{mover.name, translation_expression(mid - mover.center)}}};
}

EditRequest rotate_template(const SceneObject &mover, double angle_rad, std::pair<int, int> plane) {
  const auto [i, j] = plane;
  if (i < 1 || i > 3 || j < 1 || j > 3 || i == j) throw TemplateError("rotation plane needs two distinct axes in 1..3");
  if (!std::isfinite(angle_rad)) throw TemplateError("rotation angle must be finite");
  return {{{mover.name, "R(" + angle_expression(angle_rad) + ", e" + std::to_string(i) + ", e" + std::to_string(j) + ")"}}};
}

EditRequest scale_template(const SceneObject &mover, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw TemplateError("scale factor must be positive");
  return {{{mover.name, "D(" + format_number(s) + ")"}}};
}

double parse_angle(std::string_view instruction) {
  const std::string text = lower(instruction);
  std::smatch m;
  double angle = std::numbers::pi / 2;
  static const std::regex deg(R"((-?\d*\.?\d+)\s*(?:degrees|degree|deg\b|°))");
  static const std::regex pi_frac(R"((-?\d*\.?\d*)\s*\*?\s*\b(?:np\.|math\.)?pi\b\s*(?:/\s*(\d*\.?\d+))?)");
  static const std::regex rad(R"((-?\d*\.?\d+)\s*(?:radians|radian|rad\b))");
  if (std::regex_search(text, m, deg)) {
    angle = parse_number(m[1]) * std::numbers::pi / 180.0;
  } else if (std::regex_search(text, m, rad)) {
    angle = parse_number(m[1]);
  } else if (std::regex_search(text, m, pi_frac)) {
    const std::string coef = m[1];
    double c = 1.0;
    if (coef == "-")
      c = -1.0;
    else if (!coef.empty())
      c = parse_number(coef);
    angle = c * std::numbers::pi;
    if (m[2].matched) angle /= parse_number(m[2]);
  }
  const bool counter = text.find("counterclockwise") != std::string::npos ||
                       text.find("counter-clockwise") != std::string::npos ||
                       text.find("anticlockwise") != std::string::npos;
  if (!counter && !word_positions(text, "clockwise").empty()) angle = -angle;
  return angle;
}

std::pair<int, int> parse_plane(std::string_view instruction) {
  const std::string text = lower(instruction);
  static const std::regex axis(R"((?:around|about|along)\s+(?:the\s+)?([xyz])(?:[\s-]*axis)?\b)");
  static const std::regex axis2(R"(\b([xyz])[\s-]*axis\b)");
  static const std::regex plane(R"(\b([xyz])([xyz])[\s-]*plane\b)");
  static const std::regex blades(R"(\be([123])\s*,?\s*e([123])\b)");
  std::smatch m;
  auto from_axis = [](char a) -> std::pair<int, int> {
    if (a == 'x') return {2, 3};
    if (a == 'y') return {3, 1};
    return {1, 2};
  };
  if (std::regex_search(text, m, blades) && m[1] != m[2]) return {std::stoi(m[1]), std::stoi(m[2])};
  if (std::regex_search(text, m, plane) && m[1] != m[2]) return {m[1].str()[0] - 'x' + 1, m[2].str()[0] - 'x' + 1};
  if (std::regex_search(text, m, axis) || std::regex_search(text, m, axis2)) return from_axis(m[1].str()[0]);
  return {1, 2};
}

double parse_factor(std::string_view instruction) {
  const std::string text = lower(instruction);
  static const std::regex by(R"(\b(?:by|of|to)\s+(?:a\s+factor\s+of\s+)?(\d*\.?\d+)\b)");
  static const std::regex times(R"((\d*\.?\d+)\s*(?:x|times)\b)");
  std::smatch m;
  if (std::regex_search(text, m, by)) return parse_number(m[1]);
  if (std::regex_search(text, m, times)) return parse_number(m[1]);
  if (!word_positions(text, "double").empty()) return 2.0;
  if (!word_positions(text, "triple").empty()) return 3.0;
  if (!word_positions(text, "half").empty() || !word_positions(text, "halve").empty()) return 0.5;
  throw TemplateError("scale instruction carries no factor");
}

SpatialRelation build_relation(std::string_view instruction, const Scene &scene) {
  const auto kw = find_keyword(instruction);
  if (!kw) throw TemplateError("no template keyword in instruction");
  const References refs = parse_references(instruction, scene);
  SpatialRelation rel;
  rel.kind = kw->kind;
  rel.mover = refs.mover;
  switch (rel.kind) {
    case RelationKind::next_to_left:
    case RelationKind::on_top_of:
      if (refs.targets.empty()) throw TemplateError("relation needs a target object");
      rel.targets = {refs.targets.front()};
      break;
    case RelationKind::between:
      if (refs.targets.size() < 2) throw TemplateError("\"between\" needs two reference objects");
      rel.targets = {refs.targets[0], refs.targets[1]};
      break;
    case RelationKind::rotate:
      rel.targets = {refs.mover};
      rel.angle_rad = parse_angle(instruction);
      rel.plane = parse_plane(instruction);
      break;
    case RelationKind::scale:
      rel.targets = {refs.mover};
      rel.factor = parse_factor(instruction);
      break;
  }
  return rel;
}

EditRequest render_relation(const SpatialRelation &rel, const Scene &scene) {
  const SceneObject &mover = scene.at(rel.mover);
  const std::size_t want = rel.kind == RelationKind::between ? 2 : 1;
  if (rel.targets.size() != want) throw TemplateError("wrong number of targets for " + std::string(to_string(rel.kind)));
  switch (rel.kind) {
    case RelationKind::next_to_left: return next_to_left(mover, scene.at(rel.targets[0]));
    case RelationKind::on_top_of: return on_top_of(mover, scene.at(rel.targets[0]));
    case RelationKind::between: return between(mover, scene.at(rel.targets[0]), scene.at(rel.targets[1]));
    case RelationKind::rotate:
      return rotate_template(mover, rel.angle_rad.value_or(std::numbers::pi / 2), rel.plane.value_or(std::pair{1, 2}));
    case RelationKind::scale:
      if (!rel.factor) throw TemplateError("scale relation without factor");
      return scale_template(mover, *rel.factor);
  }
  throw TemplateError("unknown relation");
}

EditRequest template_edit(std::string_view instruction, const Scene &scene) {
  return render_relation(build_relation(instruction, scene), scene);
}

}  // namespace cgaedit
