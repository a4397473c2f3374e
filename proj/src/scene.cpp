#include "cgaedit/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>

namespace cgaedit {

std::string_view to_string(Shape shape) { return shape == Shape::sphere ? "sphere" : "cube"; }

Shape shape_from_string(std::string_view name) {
  if (name == "sphere") return Shape::sphere;
  if (name == "cube") return Shape::cube;
  throw SceneError("unknown shape: " + std::string(name));
}

Aabb aabb(const SceneObject &obj) {
  const Vec3 half{obj.size, obj.size, obj.size};
  return {obj.center - half, obj.center + half};
}

Scene::Scene(std::vector<SceneObject> objects, std::uint64_t revision)
    : objects_(std::move(objects)), revision_(revision) {
  std::set<std::string_view> names;
  for (const auto &obj : objects_) {
    if (obj.name.empty()) throw SceneError("object name must be nonempty");
    if (!names.insert(obj.name).second) throw SceneError("duplicate object name: " + obj.name);
    if (!(obj.size > 0.0) || !std::isfinite(obj.size)) throw SceneError("object size must be positive: " + obj.name);
  }
}

const SceneObject *Scene::find(std::string_view name) const {
  auto it = std::find_if(objects_.begin(), objects_.end(), [&](const SceneObject &o) { return o.name == name; });
  return it == objects_.end() ? nullptr : &*it;
}

const SceneObject &Scene::at(std::string_view name) const {
  if (const auto *obj = find(name)) return *obj;
  throw UnknownObjectError(std::string(name));
}

Scene Scene::with_object(const SceneObject &obj) const {
  Scene next = *this;
  auto it = std::find_if(next.objects_.begin(), next.objects_.end(),
                         [&](const SceneObject &o) { return o.name == obj.name; });
  if (it == next.objects_.end()) throw UnknownObjectError(obj.name);
  *it = obj;
  ++next.revision_;
  return next;
}

Scene default_scene() {
  return Scene({
      {"RedSphere", Shape::sphere, "red", {0, 0, 0}, 1.0},
      {"BlueCube", Shape::cube, "blue", {4, 0, 0}, 1.0},
      {"GreenSphere", Shape::sphere, "green", {-3, 0, 2}, 0.7},
      {"YellowCube", Shape::cube, "yellow", {4, 0, -3}, 1.0},
      {"PurpleSphere", Shape::sphere, "purple", {0, 0, -4}, 0.8},
  });
}

Scene apply_motor_to_object(const Scene &scene, std::string_view name, const Motor &motor) {
  SceneObject obj = scene.at(name);
  obj.center = apply(motor, obj.center);
  return scene.with_object(obj);
}

Scene scale_object(const Scene &scene, std::string_view name, double s) {
  SceneObject obj = scene.at(name);
  if (!(s > 0.0) || !std::isfinite(s)) throw SceneError("scale factor must be positive");
  obj.size *= s;
  return scene.with_object(obj);
}

namespace {

Mesh unit_icosphere() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v{{-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                      {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  std::vector<std::array<int, 3>> f{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                    {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                    {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                    {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (auto &p : v) p = p / norm(p);

  std::map<std::pair<int, int>, int> midpoints;
  auto midpoint = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoints.find(key);
    if (it != midpoints.end()) return it->second;
    Vec3 m = (v[a] + v[b]) * 0.5;
    v.push_back(m / norm(m));
    const int index = static_cast<int>(v.size()) - 1;
    midpoints.emplace(key, index);
    return index;
  };

  std::vector<std::array<int, 3>> subdivided;
  subdivided.reserve(f.size() * 4);
  for (const auto &tri : f) {
    const int ab = midpoint(tri[0], tri[1]);
    const int bc = midpoint(tri[1], tri[2]);
    const int ca = midpoint(tri[2], tri[0]);
    subdivided.push_back({tri[0], ab, ca});
    subdivided.push_back({tri[1], bc, ab});
    subdivided.push_back({tri[2], ca, bc});
    subdivided.push_back({ab, bc, ca});
  }
  return {std::move(v), std::move(subdivided)};
}

Mesh unit_cube() {
  std::vector<Vec3> v;
  for (int i = 0; i < 8; ++i) v.push_back({(i & 1) ? 1.0 : -1.0, (i & 2) ? 1.0 : -1.0, (i & 4) ? 1.0 : -1.0});
  std::vector<std::array<int, 3>> f{{0, 2, 3}, {0, 3, 1}, {4, 5, 7}, {4, 7, 6}, {0, 1, 5}, {0, 5, 4},
                                    {2, 6, 7}, {2, 7, 3}, {0, 4, 6}, {0, 6, 2}, {1, 3, 7}, {1, 7, 5}};
  return {std::move(v), std::move(f)};
}

}  // namespace

Mesh make_mesh(const SceneObject &obj) {
  static const Mesh sphere = unit_icosphere();
  static const Mesh cube = unit_cube();
  Mesh mesh = obj.shape == Shape::sphere ? sphere : cube;
  for (auto &p : mesh.vertices) p = obj.center + p * obj.size;
  return mesh;
}

Scene generate_scene(std::size_t count, std::uint64_t seed) {
  static const std::array<const char *, 50> palette{
      "red",      "blue",     "green",   "yellow",   "purple",    "orange",   "pink",     "cyan",     "magenta",
      "brown",    "black",    "white",   "gray",     "teal",      "navy",     "maroon",   "olive",    "lime",
      "aqua",     "silver",   "gold",    "beige",    "coral",     "crimson",  "indigo",   "ivory",    "khaki",
      "lavender", "lilac",    "mint",    "mustard",  "ochre",     "peach",    "plum",     "rose",     "ruby",
      "salmon",   "sapphire", "scarlet", "sienna",   "tan",       "turquoise", "umber",   "violet",   "amber",
      "azure",    "bronze",   "copper",  "emerald",  "jade"};
  if (count > palette.size() * 2) throw SceneError("generate_scene supports at most 100 objects");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> position(-20.0, 20.0);
  std::uniform_real_distribution<double> size(0.5, 1.5);
  std::vector<SceneObject> objects;
  objects.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::string color = palette[i % palette.size()];
    const Shape shape = (i / palette.size()) % 2 == 0 ? Shape::sphere : Shape::cube;
    std::string name = color;
    name[0] = static_cast<char>(std::toupper(name[0]));
    name += shape == Shape::sphere ? "Sphere" : "Cube";
    const Vec3 center{position(rng), position(rng), position(rng)};
    objects.push_back({name, shape, color, center, size(rng)});
  }
  return Scene(std::move(objects));
}

nlohmann::ordered_json scene_to_json(const Scene &scene) {
  nlohmann::ordered_json doc;
  doc["version"] = Scene::kDocumentVersion;
  doc["revision"] = scene.revision();
  auto objects = nlohmann::ordered_json::array();
  for (const auto &obj : scene.objects()) {
    objects.push_back({{"name", obj.name},
                       {"shape", to_string(obj.shape)},
                       {"color", obj.color},
                       {"center", {obj.center.x, obj.center.y, obj.center.z}},
                       {"size", obj.size}});
  }
  doc["objects"] = std::move(objects);
  return doc;
}

Scene scene_from_json(const nlohmann::ordered_json &doc) {
  try {
    if (!doc.is_object()) throw SceneError("scene document must be an object");
    const int version = doc.value("version", Scene::kDocumentVersion);
    if (version != Scene::kDocumentVersion) throw SceneError("unsupported scene document version");
    std::vector<SceneObject> objects;
    for (const auto &o : doc.at("objects")) {
      const auto &c = o.at("center");
      if (!c.is_array() || c.size() != 3) throw SceneError("center must be [x, y, z]");
      objects.push_back({o.at("name").get<std::string>(), shape_from_string(o.at("shape").get<std::string>()),
                         o.at("color").get<std::string>(),
                         {c[0].get<double>(), c[1].get<double>(), c[2].get<double>()},
                         o.at("size").get<double>()});
    }
    return Scene(std::move(objects), doc.value("revision", std::uint64_t{0}));
  } catch (const nlohmann::json::exception &e) {
    throw SceneError(std::string("malformed scene document: ") + e.what());
  }
}

Scene load_scene(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw SceneError("cannot open scene file: " + path.string());
  try {
    return scene_from_json(nlohmann::ordered_json::parse(in));
  } catch (const nlohmann::json::parse_error &e) {
    throw SceneError("scene file is not valid JSON: " + std::string(e.what()));
  }
}

}  // namespace cgaedit
