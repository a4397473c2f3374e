#include "cgaedit/llm_gateway.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "cgaedit/errors.hpp"
#include "cgaedit/format.hpp"
#include "prompt_texts.hpp"

namespace cgaedit {

namespace {

using ojson = nlohmann::ordered_json;

std::string fixture_key(std::string_view strategy, std::string_view instruction, std::optional<int> attempt,
                        std::optional<int> trial) {
  std::string key;
  key.append(strategy).push_back('\x1f');
  key.append(instruction);
  key.append("\x1f" + (attempt ? std::to_string(*attempt) : std::string("*")));
  key.append("\x1f" + (trial ? std::to_string(*trial) : std::string("*")));
  return key;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

PromptRegistry PromptRegistry::builtin() {
  PromptRegistry r;
  r.strategies_ = {
      {"simple_cga", std::string(prompts::simple_cga), OutputKind::cga_json, 600, true},
      {"shenlong_cga", std::string(prompts::shenlong_cga), OutputKind::cga_json, 600, false},
      {"euclidean_mat4", std::string(prompts::euclidean_mat4), OutputKind::mat4_json, 600, false},
      {"compact_se3", std::string(prompts::compact_se3), OutputKind::se3_json, 500, false},
      {"simple_cga_verbose", std::string(prompts::simple_cga_verbose), OutputKind::cga_json, 600, false},
  };
  return r;
}

PromptRegistry PromptRegistry::with_overrides(const std::filesystem::path &dir) {
  PromptRegistry r = builtin();
  for (auto &s : r.strategies_) {
    const auto file = dir / (s.name + ".txt");
    if (!std::filesystem::exists(file)) continue;
    std::string text = read_file(file);
    if (text.empty()) throw ConfigError("empty prompt file " + file.string());
    s.verbatim = s.verbatim && text == s.system_prompt;
    s.system_prompt = std::move(text);
  }
  return r;
}

const PromptStrategy &PromptRegistry::at(std::string_view name) const {
  for (const auto &s : strategies_)
    if (s.name == name) return s;
  throw ConfigError("unknown prompt strategy: " + std::string(name));
}

bool PromptRegistry::contains(std::string_view name) const {
  for (const auto &s : strategies_)
    if (s.name == name) return true;
  return false;
}

std::vector<std::string> PromptRegistry::names() const {
  std::vector<std::string> out;
  for (const auto &s : strategies_) out.push_back(s.name);
  return out;
}

void PromptRegistry::set_max_tokens(std::string_view name, int max_tokens) {
  if (max_tokens <= 0) throw ConfigError("max_tokens must be positive");
  for (auto &s : strategies_)
    if (s.name == name) {
      s.max_tokens = max_tokens;
      return;
    }
  throw ConfigError("unknown prompt strategy: " + std::string(name));
}

std::string RetryPolicy::schedule_text() const {
  return format_number(base_temperature) + " + " + format_number(temperature_step) + " * attempt";
}

RetryPolicy pass_at(int k) {
  if (k < 1) throw ConfigError("retry budget k must be at least 1");
  return RetryPolicy{k};
}

ojson completion_record_to_json(const CompletionRecord &r) {
  ojson doc{{"attempt_index", r.attempt_index},
            {"temperature", r.temperature},
            {"raw_text", r.raw_text},
            {"prompt_tokens", r.prompt_tokens},
            {"completion_tokens", r.completion_tokens},
            {"api_latency_s", r.api_latency_s},
            {"provider_id", r.provider_id},
            {"accepted", r.accepted}};
  doc["error"] = r.error ? ojson(*r.error) : ojson(nullptr);
  return doc;
}

CompletionRecord completion_record_from_json(const ojson &doc) {
  CompletionRecord r;
  r.attempt_index = doc.at("attempt_index").get<int>();
  r.temperature = doc.at("temperature").get<double>();
  r.raw_text = doc.at("raw_text").get<std::string>();
  r.prompt_tokens = doc.at("prompt_tokens").get<std::int64_t>();
  r.completion_tokens = doc.at("completion_tokens").get<std::int64_t>();
  r.api_latency_s = doc.at("api_latency_s").get<double>();
  r.provider_id = doc.at("provider_id").get<std::string>();
  r.accepted = doc.at("accepted").get<bool>();
  if (doc.contains("error") && !doc.at("error").is_null()) r.error = doc.at("error").get<std::string>();
  return r;
}

std::string scene_context_render(const Scene &scene, std::optional<std::size_t> limit) {
  std::string out;
  std::size_t n = 0;
  for (const auto &obj : scene.objects()) {
    if (limit && n >= *limit) break;
    out += obj.name + ' ' + std::string(to_string(obj.shape)) + ' ' + obj.color + " [" + format_number(obj.center.x) +
           ", " + format_number(obj.center.y) + ", " + format_number(obj.center.z) + "] " + format_number(obj.size) + '\n';
    ++n;
  }
  return out;
}

std::string user_message(std::string_view scene_context, std::string_view instruction) {
  std::string msg = "SCENE (name shape color center size):\n";
  msg.append(scene_context);
  msg += "INSTRUCTION: ";
  msg.append(instruction);
  return msg;
}

CompletionOutcome complete(Provider &provider, const PromptStrategy &strategy, std::string_view scene_context,
                           std::string_view instruction, const RetryPolicy &policy, const Validator &validator,
                           int trial) {
  if (policy.max_attempts < 1) throw ConfigError("retry budget k must be at least 1");
  CompletionOutcome outcome;
  CompletionRequest request;
  request.strategy = strategy.name;
  request.system_prompt = strategy.system_prompt;
  request.user_message = user_message(scene_context, instruction);
  request.instruction = std::string(instruction);
  request.max_tokens = strategy.max_tokens;
  request.trial = trial;
  for (int a = 0; a < policy.max_attempts; ++a) {
    request.attempt_index = a;
    request.temperature = policy.temperature(a);
    CompletionRecord rec;
    rec.attempt_index = a;
    rec.temperature = request.temperature;
    rec.provider_id = provider.id();
    const auto start = std::chrono::steady_clock::now();
    try {
      ProviderResponse resp = provider.complete(request);
      const double measured = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      rec.raw_text = std::move(resp.text);
      rec.prompt_tokens = std::max<std::int64_t>(0, resp.prompt_tokens);
      rec.completion_tokens = std::max<std::int64_t>(0, resp.completion_tokens);
      rec.api_latency_s = std::max(0.0, resp.latency_s.value_or(measured));
      rec.accepted = validator(rec.raw_text);
    } catch (const ProviderError &e) {
      rec.api_latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      rec.error = e.what();
    }
    outcome.records.push_back(std::move(rec));
    if (outcome.records.back().accepted) {
      outcome.success_index = static_cast<std::size_t>(a);
      break;
    }
  }
  return outcome;
}

MockProvider::Entry MockProvider::parse_entry(const ojson &doc) {
  Entry e;
  if (doc.contains("text")) e.text = doc.at("text").get<std::string>();
  if (doc.contains("error") && !doc.at("error").is_null()) e.error = doc.at("error").get<std::string>();
  if (!e.text && !e.error) throw ConfigError("fixture entry needs \"text\" or \"error\"");
  e.prompt_tokens = doc.value("prompt_tokens", std::int64_t{0});
  e.completion_tokens = doc.value("completion_tokens", std::int64_t{0});
  if (e.prompt_tokens < 0 || e.completion_tokens < 0) throw ConfigError("fixture token counts must be non-negative");
  if (doc.contains("latency_s")) {
    e.latency_s = doc.at("latency_s").get<double>();
    if (*e.latency_s < 0.0) throw ConfigError("fixture latency must be non-negative");
  }
  return e;
}

MockProvider::MockProvider(const ojson &fixture) {
  try {
    if (!fixture.is_object()) throw ConfigError("fixture must be an object");
    if (fixture.value("version", 0) != kFixtureVersion)
      throw ConfigError("unsupported fixture version (expected " + std::to_string(kFixtureVersion) + ")");
    provider_id_ = fixture.value("provider_id", std::string("mock"));
    default_ = fixture.contains("default") ? parse_entry(fixture.at("default")) : Entry{std::nullopt, "no fixture entry", 0, 0, std::nullopt};
    for (const auto &item : fixture.value("entries", ojson::array())) {
      const std::string strategy = item.at("strategy").get<std::string>();
      const std::string instruction = item.at("instruction").get<std::string>();
      std::optional<int> attempt, trial;
      if (item.contains("attempt")) attempt = item.at("attempt").get<int>();
      if (item.contains("trial")) trial = item.at("trial").get<int>();
      entries_[fixture_key(strategy, instruction, attempt, trial)] = parse_entry(item);
    }
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("malformed fixture: ") + e.what());
  }
}

MockProvider MockProvider::from_file(const std::filesystem::path &path) {
  try {
    return MockProvider(ojson::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError("malformed fixture " + path.string() + ": " + e.what());
  }
}

ProviderResponse MockProvider::play(const Entry &e) const {
  if (e.error) throw ProviderError(*e.error);
  return {*e.text, e.prompt_tokens, e.completion_tokens, e.latency_s};
}

ProviderResponse MockProvider::complete(const CompletionRequest &request) {
  const std::optional<int> a = request.attempt_index;
  const std::optional<int> t = request.trial;
  for (const auto &[attempt, trial] : {std::pair{a, t}, std::pair{a, std::optional<int>{}},
                                       std::pair{std::optional<int>{}, t}, std::pair{std::optional<int>{}, std::optional<int>{}}}) {
    if (auto it = entries_.find(fixture_key(request.strategy, request.instruction, attempt, trial)); it != entries_.end())
      return play(it->second);
  }
  return play(default_);
}

ojson build_chat_request(const CompletionRequest &request, const std::string &model) {
  return {{"model", model},
          {"messages",
           ojson::array({{{"role", "system"}, {"content", request.system_prompt}},
                         {{"role", "user"}, {"content", request.user_message}}})},
          {"temperature", request.temperature},
          {"max_tokens", request.max_tokens}};
}

ProviderResponse parse_chat_response(std::string_view body) {
  ojson doc;
  try {
    doc = ojson::parse(body);
  } catch (const nlohmann::json::parse_error &e) {
    throw ProviderError(std::string("unreadable provider response: ") + e.what());
  }
  if (doc.contains("error")) {
    const auto &err = doc.at("error");
    throw ProviderError("provider error: " + (err.is_object() ? err.value("message", err.dump()) : err.dump()));
  }
  try {
    ProviderResponse r;
    const auto &content = doc.at("choices").at(0).at("message").at("content");
    r.text = content.is_null() ? std::string{} : content.get<std::string>();
    if (doc.contains("usage")) {
      r.prompt_tokens = doc.at("usage").value("prompt_tokens", std::int64_t{0});
      r.completion_tokens = doc.at("usage").value("completion_tokens", std::int64_t{0});
    }
    return r;
  } catch (const nlohmann::json::exception &e) {
    throw ProviderError(std::string("unexpected provider response shape: ") + e.what());
  }
}

LiveProvider::LiveProvider(LiveProviderConfig config) : config_(std::move(config)) {
  const char *key = std::getenv(config_.api_key_env.c_str());
  if (!key || !*key) throw ConfigError("environment variable " + config_.api_key_env + " is not set");
  api_key_ = key;
}

ProviderResponse LiveProvider::complete(const CompletionRequest &request) {
  httplib::Client client(config_.base_url);
  client.set_connection_timeout(config_.timeout_s);
  client.set_read_timeout(config_.timeout_s);
  client.set_bearer_token_auth(api_key_);
  const std::string body = build_chat_request(request, config_.model).dump();
  auto res = client.Post(config_.path, body, "application/json");
  if (!res) throw ProviderError("transport failure: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    try {
      (void)parse_chat_response(res->body);
    } catch (const ProviderError &e) {
      throw ProviderError("HTTP " + std::to_string(res->status) + ": " + e.what());
    }
    throw ProviderError("HTTP " + std::to_string(res->status));
  }
  return parse_chat_response(res->body);
}

GatewayConfig gateway_config_from_json(const ojson &doc) {
  GatewayConfig c;
  try {
    c.provider = doc.value("provider", c.provider);
    if (c.provider != "mock" && c.provider != "live") throw ConfigError("provider must be mock or live");
    if (doc.contains("fixtures")) c.fixtures = doc.at("fixtures").get<std::string>();
    c.live.model = doc.value("model", c.live.model);
    c.live.base_url = doc.value("base_url", c.live.base_url);
    c.live.path = doc.value("path", c.live.path);
    c.live.api_key_env = doc.value("api_key_env", c.live.api_key_env);
    c.live.timeout_s = doc.value("timeout_s", c.live.timeout_s);
    if (doc.contains("max_tokens"))
      for (const auto &[name, v] : doc.at("max_tokens").items()) c.max_tokens[name] = v.get<int>();
    if (doc.contains("prompt_dir")) c.prompt_dir = doc.at("prompt_dir").get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("malformed gateway config: ") + e.what());
  }
  return c;
}

std::unique_ptr<Provider> make_provider(const GatewayConfig &config) {
  if (config.provider == "live") return std::make_unique<LiveProvider>(config.live);
  if (config.fixtures.empty()) throw ConfigError("mock provider needs a fixture file");
  return std::make_unique<MockProvider>(MockProvider::from_file(config.fixtures));
}

PromptRegistry make_registry(const GatewayConfig &config) {
  PromptRegistry r = config.prompt_dir ? PromptRegistry::with_overrides(*config.prompt_dir) : PromptRegistry::builtin();
  for (const auto &[name, n] : config.max_tokens) r.set_max_tokens(name, n);
  return r;
}

}  // namespace cgaedit
