#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cgaedit/bench.hpp"
#include "cgaedit/evaluation.hpp"
#include "cgaedit/llm_gateway.hpp"
#include "cgaedit/scene.hpp"
#include "cgaedit/templates.hpp"

namespace cgaedit {

class SessionNotFound : public Error {
public:
  explicit SessionNotFound(const std::string &id) : Error("unknown session: " + id) {}
};

class EmptyHistory : public Error {
public:
  EmptyHistory() : Error("nothing to undo") {}
};

struct StepRecord {
  std::size_t index = 0;
  std::string instruction;
  std::string route;  // template | llm | fallback_template
  std::optional<std::string> matched_keyword;
  std::string strategy;
  OutputKind output_kind = OutputKind::cga_json;
  std::string request_text;
  bool ok = false;
  std::optional<std::string> error;
  Verdict verdict;
  LatencyBreakdown latency;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  std::size_t attempts = 0;
  std::uint64_t revision_before = 0;
  std::uint64_t revision_after = 0;
};

nlohmann::ordered_json step_to_json(const StepRecord &step);

struct ApplyResult {
  Scene scene_after;
  StepRecord step;
};

struct SessionInfo {
  std::string id;
  std::string strategy;
  std::string created_at;
  std::size_t history_length = 0;
  std::uint64_t revision = 0;
};

struct SessionOptions {
  RetryPolicy policy = pass_at(2);
  std::optional<std::filesystem::path> journal;  // append-only instruction log
};

// Thread-safe. Each session serializes its own mutations; sessions are
// independent of each other.
class SessionManager {
public:
  // `provider` may be null, in which case novel instructions take the
  // template fallback.
  SessionManager(PromptRegistry registry, std::shared_ptr<Provider> provider, SessionOptions options = {});
  ~SessionManager();

  // Throws ConfigError for an unknown strategy.
  std::string create_session(const std::string &strategy, std::optional<Scene> scene = std::nullopt);
  // Throws SessionNotFound. Failed instructions come back with step.ok false
  // and leave the scene untouched.
  ApplyResult apply_instruction(const std::string &id, const std::string &instruction);
  Scene get_scene(const std::string &id) const;
  std::vector<StepRecord> get_history(const std::string &id) const;
  std::vector<StepRecord> get_rejected(const std::string &id) const;
  // Throws EmptyHistory.
  Scene undo(const std::string &id);
  SessionInfo info(const std::string &id) const;
  std::vector<SessionInfo> list() const;

  bool llm_available() const { return provider_ != nullptr; }

  // Rebuilds sessions from a journal by re-executing the recorded requests.
  void recover(const std::filesystem::path &journal);

private:
  struct Session;
  std::shared_ptr<Session> find(const std::string &id) const;
  void journal(const nlohmann::ordered_json &entry);
  StepRecord run_step(Session &s, const std::string &instruction, Scene &scene_out);

  PromptRegistry registry_;
  std::shared_ptr<Provider> provider_;
  SessionOptions options_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
  std::mutex journal_mu_;
  std::unique_ptr<std::ofstream> journal_out_;
};

// HTTP JSON front end:
//   POST /sessions                      {"strategy", "scene"?}
//   POST /sessions/{id}/instructions    {"instruction"}
//   GET  /sessions/{id}/scene
//   GET  /sessions/{id}/history
//   POST /sessions/{id}/undo
class SessionServer {
public:
  explicit SessionServer(SessionManager &manager);
  ~SessionServer();

  // Binds to an ephemeral port when port == 0; returns the bound port or -1.
  int bind(const std::string &host, int port);
  // Blocks until stop().
  void listen();
  void stop();
  void wait_until_ready() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cgaedit
