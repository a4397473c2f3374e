#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cgaedit/conformal.hpp"
#include "cgaedit/vec3.hpp"

namespace cgaedit {

enum class Shape { sphere, cube };

std::string_view to_string(Shape shape);
Shape shape_from_string(std::string_view name);

struct SceneObject {
  std::string name;
  Shape shape = Shape::sphere;
  std::string color;
  Vec3 center;
  double size = 1.0;  // half-extent radius

  bool operator==(const SceneObject &) const = default;
};

struct Aabb {
  Vec3 min;
  Vec3 max;
};

Aabb aabb(const SceneObject &obj);

// Ordered, uniquely named collection of objects. Every mutation goes through
// the free functions below and yields a new snapshot with revision + 1.
class Scene {
public:
  static constexpr int kDocumentVersion = 1;

  Scene() = default;
  Scene(std::vector<SceneObject> objects, std::uint64_t revision = 0);

  const std::vector<SceneObject> &objects() const { return objects_; }
  std::uint64_t revision() const { return revision_; }
  std::size_t size() const { return objects_.size(); }
  bool empty() const { return objects_.empty(); }

  const SceneObject *find(std::string_view name) const;
  // Throws UnknownObjectError.
  const SceneObject &at(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  // Copy with `obj` replacing the object of the same name and revision + 1.
  Scene with_object(const SceneObject &obj) const;

  bool operator==(const Scene &) const = default;

private:
  std::vector<SceneObject> objects_;
  std::uint64_t revision_ = 0;
};

// Five-object scene. RedSphere, BlueCube and GreenSphere carry the documented
// coordinates; YellowCube and PurpleSphere are local defaults.
Scene default_scene();

Scene apply_motor_to_object(const Scene &scene, std::string_view name, const Motor &motor);
// Object-centric uniform scale: size *= s, center fixed. Throws SceneError
// unless s > 0.
Scene scale_object(const Scene &scene, std::string_view name, double s);

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
};

// Spheres: once-subdivided icosahedron (42 vertices, 80 faces). Cubes: 8
// vertices, 12 triangles. Scaled by size around the center.
Mesh make_mesh(const SceneObject &obj);

// Uniformly random scene of `count` objects with unique names, positions in
// [-20,20]^3 and sizes in [0.5,1.5].
Scene generate_scene(std::size_t count, std::uint64_t seed);

// Versioned scene document: {version, revision, objects:[{name, shape, color,
// center:[x,y,z], size}]}.
nlohmann::ordered_json scene_to_json(const Scene &scene);
Scene scene_from_json(const nlohmann::ordered_json &doc);
Scene load_scene(const std::filesystem::path &path);

}  // namespace cgaedit
