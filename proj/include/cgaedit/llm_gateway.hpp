#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "cgaedit/output_kind.hpp"
#include "cgaedit/scene.hpp"

namespace cgaedit {

struct PromptStrategy {
  std::string name;
  std::string system_prompt;
  OutputKind output_kind = OutputKind::cga_json;
  int max_tokens = 600;
  bool verbatim = false;  // false for reconstructed prompt texts
};

class PromptRegistry {
public:
  // simple_cga, shenlong_cga, euclidean_mat4, compact_se3, simple_cga_verbose.
  static PromptRegistry builtin();
  // Builtin strategies with texts replaced by <dir>/<name>.txt where present.
  static PromptRegistry with_overrides(const std::filesystem::path &dir);

  // Throws ConfigError for unknown names.
  const PromptStrategy &at(std::string_view name) const;
  bool contains(std::string_view name) const;
  std::vector<std::string> names() const;
  void set_max_tokens(std::string_view name, int max_tokens);

private:
  std::vector<PromptStrategy> strategies_;
};

struct RetryPolicy {
  int max_attempts = 1;
  double base_temperature = 0.1;
  double temperature_step = 0.05;

  // attempt is 0-based.
  double temperature(int attempt) const { return base_temperature + temperature_step * attempt; }
  std::string schedule_text() const;
};

// Throws ConfigError unless k >= 1.
RetryPolicy pass_at(int k);

struct CompletionRequest {
  std::string strategy;
  std::string system_prompt;
  std::string user_message;
  std::string instruction;
  double temperature = 0.1;
  int max_tokens = 600;
  int attempt_index = 0;
  int trial = 0;
};

struct ProviderResponse {
  std::string text;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  std::optional<double> latency_s;  // reported by replaying providers
};

class Provider {
public:
  virtual ~Provider() = default;
  virtual std::string id() const = 0;
  // Throws ProviderError on transport or protocol failure.
  virtual ProviderResponse complete(const CompletionRequest &request) = 0;
};

struct CompletionRecord {
  int attempt_index = 0;
  double temperature = 0.0;
  std::string raw_text;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  double api_latency_s = 0.0;
  std::string provider_id;
  std::optional<std::string> error;
  bool accepted = false;
};

nlohmann::ordered_json completion_record_to_json(const CompletionRecord &r);
CompletionRecord completion_record_from_json(const nlohmann::ordered_json &doc);

struct CompletionOutcome {
  std::vector<CompletionRecord> records;
  std::optional<std::size_t> success_index;
};

using Validator = std::function<bool(std::string_view raw_text)>;

// One line per object: "name shape color [x, y, z] size", at most `limit`.
std::string scene_context_render(const Scene &scene, std::optional<std::size_t> limit = std::nullopt);

std::string user_message(std::string_view scene_context, std::string_view instruction);

// Issues attempts at the policy's temperatures until `validator` accepts one
// or max_attempts is reached. Provider failures become failed attempts.
CompletionOutcome complete(Provider &provider, const PromptStrategy &strategy, std::string_view scene_context,
                           std::string_view instruction, const RetryPolicy &policy, const Validator &validator,
                           int trial = 0);

// Replays canned responses keyed by (strategy, instruction, attempt, trial).
//
// {"version": 1, "provider_id": "...", "default": {"error": "..."} |
//  {"text": "..."}, "entries": [{"strategy", "instruction", "attempt"?,
//  "trial"?, "text"?, "error"?, "prompt_tokens", "completion_tokens",
//  "latency_s"?}]}
//
// Omitted attempt or trial acts as a wildcard. Lookup prefers the entry
// naming both, then attempt only, then trial only, then neither.
class MockProvider : public Provider {
public:
  static constexpr int kFixtureVersion = 1;

  explicit MockProvider(const nlohmann::ordered_json &fixture);
  // Throws ConfigError.
  static MockProvider from_file(const std::filesystem::path &path);

  std::string id() const override { return provider_id_; }
  ProviderResponse complete(const CompletionRequest &request) override;

private:
  struct Entry {
    std::optional<std::string> text;
    std::optional<std::string> error;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    std::optional<double> latency_s;
  };
  static Entry parse_entry(const nlohmann::ordered_json &doc);
  ProviderResponse play(const Entry &entry) const;

  std::string provider_id_ = "mock";
  Entry default_;
  std::unordered_map<std::string, Entry> entries_;
};

struct LiveProviderConfig {
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4o-mini";
  std::string api_key_env = "OPENAI_API_KEY";
  int timeout_s = 60;
};

// OpenAI-compatible chat-completion body.
nlohmann::ordered_json build_chat_request(const CompletionRequest &request, const std::string &model);
// Throws ProviderError on missing fields or an error payload.
ProviderResponse parse_chat_response(std::string_view body);

class LiveProvider : public Provider {
public:
  // Throws ConfigError when the API key variable is unset.
  explicit LiveProvider(LiveProviderConfig config);

  std::string id() const override { return "live:" + config_.model; }
  ProviderResponse complete(const CompletionRequest &request) override;

private:
  LiveProviderConfig config_;
  std::string api_key_;
};

struct GatewayConfig {
  std::string provider = "mock";  // mock | live
  std::filesystem::path fixtures;
  LiveProviderConfig live;
  std::map<std::string, int> max_tokens;  // per strategy override
  std::optional<std::filesystem::path> prompt_dir;
};

// Throws ConfigError.
GatewayConfig gateway_config_from_json(const nlohmann::ordered_json &doc);
std::unique_ptr<Provider> make_provider(const GatewayConfig &config);
PromptRegistry make_registry(const GatewayConfig &config);

}  // namespace cgaedit
