#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cgaedit/baseline.hpp"
#include "cgaedit/cga_expr.hpp"
#include "cgaedit/operation_chain.hpp"
#include "cgaedit/output_kind.hpp"
#include "cgaedit/scene.hpp"

namespace cgaedit {

using ParsedOutput = std::variant<EditRequest, Se3Request, Mat4Request>;

// Removes a surrounding ``` fence (with optional language tag) and whitespace.
std::string strip_code_fences(std::string_view raw);

struct ParseCheck {
  bool parse_ok = false;
  std::optional<ParsedOutput> parsed;
  std::vector<std::string> diagnostics;
};

// Well-formed document and, for CGA, every expression parses and evaluates.
ParseCheck check_parse(std::string_view raw, OutputKind kind);

ExecutionResult execute_parsed(const Scene &scene, const ParsedOutput &parsed);

struct SpatialResult {
  std::vector<std::pair<std::string, double>> per_object;
  double max_error = 0.0;
  bool exact_success = false;
};

inline constexpr double kExactPlacementThreshold = 0.5;

// Throws UnknownObjectError for names missing from the scene.
SpatialResult spatial_error(const Scene &scene_after, const std::vector<std::pair<std::string, Vec3>> &expected);

inline constexpr double kPlacementTolerance = 0.5;
inline constexpr double kScaleTolerance = 1e-3;

struct SurfaceContact {
  std::string mover;
  std::string target;
  int axis = 1;  // 0 = x, 1 = y, 2 = z
  double tolerance = kPlacementTolerance;
};

struct Midpoint {
  std::string mover;
  std::string a;
  std::string b;
  double tolerance = kPlacementTolerance;
};

struct TargetDisplacement {
  std::string mover;
  Vec3 delta;
  double tolerance = kPlacementTolerance;
};

struct ScaleFactor {
  std::string mover;
  double s = 1.0;
  double tolerance = kScaleTolerance;  // relative to s
};

struct AbsolutePlacement {
  std::string mover;
  Vec3 position;
  double tolerance = kPlacementTolerance;
};

using SemanticRule = std::variant<SurfaceContact, Midpoint, TargetDisplacement, ScaleFactor, AbsolutePlacement>;

// {"type": "surface_contact"|"midpoint"|"target_displacement"|"scale_factor"|
// "absolute_placement", ...fields, "tolerance"?}. Throws ConfigError.
SemanticRule semantic_rule_from_json(const nlohmann::ordered_json &doc);
nlohmann::ordered_json semantic_rule_to_json(const SemanticRule &rule);

// Throws UnknownObjectError.
bool check_semantic(const SemanticRule &rule, const Scene &before, const Scene &after);

// Execution-ordered chain per assignment, in document order.
std::vector<std::pair<std::string, OperationChain>> extract_chains(const ParsedOutput &parsed);
// Chain for one object; empty when the object is not assigned.
OperationChain extract_chain(const ParsedOutput &parsed, std::string_view object);

inline constexpr double kFidelityTolerance = 1e-6;

bool params_match(const std::vector<double> &a, const std::vector<double> &b, double tolerance = kFidelityTolerance);

// Expected ops must appear in order within `actual`, each with matching kind
// and parameters; extra ops in `actual` are allowed.
bool check_sequence_fidelity(const OperationChain &expected, const OperationChain &actual,
                             double tolerance = kFidelityTolerance);

// "default", a scene file path, an inline scene document, or
// {"generate": {"count", "seed"}}.
struct TaskScene {
  enum class Source { default_scene, inline_scene, generated, file } source = Source::default_scene;
  Scene scene;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::filesystem::path path;
};

struct TaskDefinition {
  std::string id;
  std::string instruction;
  std::vector<std::string> methods;  // empty: suite-level methods apply
  TaskScene scene;
  std::optional<std::size_t> context_limit;
  std::optional<OperationChain> expected_chain;
  std::optional<std::string> chain_object;  // defaults to the first assignment
  std::vector<SemanticRule> semantic_rules;
  std::vector<std::pair<std::string, Vec3>> expected_positions;
};

// Throws ConfigError. Relative scene paths resolve against `base_dir`.
TaskDefinition task_from_json(const nlohmann::ordered_json &doc, const std::filesystem::path &base_dir = {});
nlohmann::ordered_json task_to_json(const TaskDefinition &task);
Scene materialize_scene(const TaskScene &scene);

struct Verdict {
  bool parse_ok = false;
  std::optional<bool> semantic_ok;
  std::optional<bool> fidelity_ok;
  std::optional<double> spatial_error;
  std::optional<bool> exact_success;
  std::vector<std::string> diagnostics;
};

nlohmann::ordered_json verdict_to_json(const Verdict &v);
Verdict verdict_from_json(const nlohmann::ordered_json &doc);

struct Evaluation {
  Verdict verdict;
  std::optional<ParsedOutput> parsed;
  std::optional<ExecutionResult> execution;
};

// Parse, execute on `scene`, then apply whichever checks the task defines.
// Semantic and fidelity layers are only filled in for parse-valid outputs.
Evaluation evaluate_output(const TaskDefinition &task, const Scene &scene, std::string_view raw, OutputKind kind);

}  // namespace cgaedit
