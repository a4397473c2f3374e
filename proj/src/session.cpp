#include "cgaedit/session.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>

#include <httplib.h>

#include "cgaedit/errors.hpp"

namespace cgaedit {

namespace {

using ojson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

std::string format_id(std::uint64_t n) {
  std::ostringstream ss;
  ss << "s-" << std::setw(6) << std::setfill('0') << n;
  return ss.str();
}

}  // namespace

ojson step_to_json(const StepRecord &s) {
  ojson doc{{"index", s.index},
            {"instruction", s.instruction},
            {"route", s.route},
            {"matched_keyword", s.matched_keyword ? ojson(*s.matched_keyword) : ojson(nullptr)},
            {"strategy", s.strategy},
            {"output_kind", to_string(s.output_kind)},
            {"request_text", s.request_text},
            {"ok", s.ok},
            {"error", s.error ? ojson(*s.error) : ojson(nullptr)},
            {"verdict", verdict_to_json(s.verdict)},
            {"latency",
             {{"api_s", s.latency.api_s},
              {"parse_execute_s", s.latency.parse_execute_s},
              {"render_ready_s", s.latency.render_ready_s},
              {"total_s", s.latency.total_s}}},
            {"tokens", {{"prompt", s.prompt_tokens}, {"completion", s.completion_tokens}}},
            {"attempts", s.attempts},
            {"revision_before", s.revision_before},
            {"revision_after", s.revision_after}};
  return doc;
}

struct SessionManager::Session {
  std::string id;
  std::string strategy;
  std::string created_at;
  mutable std::mutex mu;
  Scene scene;
  std::vector<Scene> before;  // scene prior to each history step
  std::vector<StepRecord> history;
  std::vector<StepRecord> rejected;
};

SessionManager::SessionManager(PromptRegistry registry, std::shared_ptr<Provider> provider, SessionOptions options)
    : registry_(std::move(registry)), provider_(std::move(provider)), options_(std::move(options)) {
  if (options_.journal) {
    journal_out_ = std::make_unique<std::ofstream>(*options_.journal, std::ios::app);
    if (!*journal_out_) throw ConfigError("cannot open journal " + options_.journal->string());
  }
}

SessionManager::~SessionManager() = default;

void SessionManager::journal(const ojson &entry) {
  if (!journal_out_) return;
  std::lock_guard lock(journal_mu_);
  *journal_out_ << entry.dump() << '\n';
  journal_out_->flush();
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string &id) const {
  std::shared_lock lock(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw SessionNotFound(id);
  return it->second;
}

std::string SessionManager::create_session(const std::string &strategy, std::optional<Scene> scene) {
  (void)registry_.at(strategy);
  auto s = std::make_shared<Session>();
  s->strategy = strategy;
  s->created_at = utc_now();
  s->scene = scene ? std::move(*scene) : default_scene();
  {
    std::unique_lock lock(mu_);
    s->id = format_id(next_id_++);
    sessions_[s->id] = s;
  }
  journal({{"op", "create"}, {"id", s->id}, {"strategy", strategy}, {"created_at", s->created_at},
           {"scene", scene_to_json(s->scene)}});
  return s->id;
}

StepRecord SessionManager::run_step(Session &s, const std::string &instruction, Scene &scene_out) {
  const PromptStrategy &strategy = registry_.at(s.strategy);
  StepRecord step;
  step.instruction = instruction;
  step.strategy = s.strategy;
  step.revision_before = s.scene.revision();

  const RouteDecision decision = route(instruction, llm_available());
  step.route = std::string(to_string(decision.route));
  step.matched_keyword = decision.matched_keyword;

  std::optional<std::string> text;
  OutputKind kind = OutputKind::cga_json;
  std::string failure;
  if (decision.route != Route::llm) {
    const auto t0 = Clock::now();
    try {
      text = edit_request_to_json(template_edit(instruction, s.scene)).dump();
    } catch (const Error &e) {
      failure = e.what();
      if (decision.route == Route::fallback_template && !llm_available())
        failure = "no template applies and no language model is configured (" + failure + ")";
    }
    step.latency.api_s = seconds_since(t0);
  }
  if (!text && llm_available()) {
    step.route = "llm";
    kind = strategy.output_kind;
    const std::string context = scene_context_render(s.scene);
    const Validator validator = [kind](std::string_view raw) { return check_parse(raw, kind).parse_ok; };
    const CompletionOutcome outcome = complete(*provider_, strategy, context, instruction, options_.policy, validator);
    step.attempts = outcome.records.size();
    for (const auto &r : outcome.records) {
      step.prompt_tokens += r.prompt_tokens;
      step.completion_tokens += r.completion_tokens;
      step.latency.api_s += r.api_latency_s;
    }
    if (outcome.success_index) {
      text = outcome.records[*outcome.success_index].raw_text;
    } else {
      const auto &last = outcome.records.back();
      text = last.raw_text;
      if (last.error) failure = "provider: " + *last.error;
    }
  }

  if (text) {
    step.request_text = *text;
    const auto t0 = Clock::now();
    const ParseCheck pc = check_parse(*text, kind);
    step.verdict.parse_ok = pc.parse_ok;
    step.verdict.diagnostics = pc.diagnostics;
    if (pc.parse_ok) {
      const ExecutionResult exec = execute_parsed(s.scene, *pc.parsed);
      for (const auto &st : exec.statuses) {
        if (!st.ok) step.verdict.diagnostics.push_back(st.name + ": " + st.error);
        for (const auto &w : st.warnings) step.verdict.diagnostics.push_back(st.name + ": " + w);
      }
      if (exec.statuses.empty())
        failure = "request assigns no objects";
      else if (!exec.all_ok())
        failure = "execution failed";
      else {
        scene_out = exec.scene;
        step.ok = true;
      }
    } else if (failure.empty()) {
      failure = "output did not parse";
    }
    step.latency.parse_execute_s = seconds_since(t0);
  }
  if (!step.ok) {
    step.error = failure.empty() ? "instruction could not be handled" : failure;
    scene_out = s.scene;
  }
  const auto t_render = Clock::now();
  (void)scene_to_json(scene_out).dump();
  step.latency.render_ready_s = seconds_since(t_render);
  step.latency.total_s = step.latency.api_s + step.latency.parse_execute_s + step.latency.render_ready_s;
  step.output_kind = kind;
  step.revision_after = scene_out.revision();
  return step;
}

ApplyResult SessionManager::apply_instruction(const std::string &id, const std::string &instruction) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  Scene after;
  StepRecord step = run_step(*s, instruction, after);
  if (step.ok) {
    step.index = s->history.size();
    s->before.push_back(s->scene);
    s->scene = after;
    s->history.push_back(step);
    journal({{"op", "apply"}, {"id", id}, {"instruction", instruction}, {"route", step.route},
             {"output_kind", to_string(step.output_kind)}, {"request_text", step.request_text}});
  } else {
    step.index = s->rejected.size();
    s->rejected.push_back(step);
  }
  return {s->scene, std::move(step)};
}

Scene SessionManager::get_scene(const std::string &id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return s->scene;
}

std::vector<StepRecord> SessionManager::get_history(const std::string &id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return s->history;
}

std::vector<StepRecord> SessionManager::get_rejected(const std::string &id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return s->rejected;
}

Scene SessionManager::undo(const std::string &id) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  if (s->history.empty()) throw EmptyHistory();
  s->scene = s->before.back();
  s->before.pop_back();
  s->history.pop_back();
  journal({{"op", "undo"}, {"id", id}});
  return s->scene;
}

SessionInfo SessionManager::info(const std::string &id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return {s->id, s->strategy, s->created_at, s->history.size(), s->scene.revision()};
}

std::vector<SessionInfo> SessionManager::list() const {
  std::vector<std::string> ids;
  {
    std::shared_lock lock(mu_);
    for (const auto &[id, _] : sessions_) ids.push_back(id);
  }
  std::vector<SessionInfo> out;
  for (const auto &id : ids) out.push_back(info(id));
  return out;
}

void SessionManager::recover(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read journal " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ojson e;
    try {
      e = ojson::parse(line);
    } catch (const nlohmann::json::parse_error &err) {
      throw ConfigError(std::string("malformed journal line: ") + err.what());
    }
    const std::string op = e.at("op").get<std::string>();
    const std::string id = e.at("id").get<std::string>();
    if (op == "create") {
      auto s = std::make_shared<Session>();
      s->id = id;
      s->strategy = e.at("strategy").get<std::string>();
      s->created_at = e.value("created_at", std::string{});
      s->scene = scene_from_json(e.at("scene"));
      std::unique_lock lock(mu_);
      sessions_[id] = s;
      if (id.rfind("s-", 0) == 0) next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(id.substr(2)) + 1);
      continue;
    }
    auto s = find(id);
    std::lock_guard lock(s->mu);
    if (op == "undo") {
      if (s->history.empty()) throw ConfigError("journal undoes an empty history");
      s->scene = s->before.back();
      s->before.pop_back();
      s->history.pop_back();
    } else if (op == "apply") {
      StepRecord step;
      step.index = s->history.size();
      step.instruction = e.at("instruction").get<std::string>();
      step.route = e.at("route").get<std::string>();
      step.strategy = s->strategy;
      step.output_kind = output_kind_from_string(e.at("output_kind").get<std::string>());
      step.request_text = e.at("request_text").get<std::string>();
      const ParseCheck pc = check_parse(step.request_text, step.output_kind);
      if (!pc.parse_ok) throw ConfigError("journal request no longer parses: " + step.request_text);
      const ExecutionResult exec = execute_parsed(s->scene, *pc.parsed);
      if (!exec.all_ok()) throw ConfigError("journal request no longer executes: " + step.request_text);
      step.ok = true;
      step.verdict.parse_ok = true;
      step.revision_before = s->scene.revision();
      step.revision_after = exec.scene.revision();
      s->before.push_back(s->scene);
      s->scene = exec.scene;
      s->history.push_back(std::move(step));
    } else {
      throw ConfigError("unknown journal op: " + op);
    }
  }
}

// ---------------------------------------------------------------------------
// HTTP

struct SessionServer::Impl {
  SessionManager &manager;
  httplib::Server server;

  explicit Impl(SessionManager &m) : manager(m) {}
};

namespace {

void reply(httplib::Response &res, int status, const ojson &body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response &res, int status, std::string_view code, std::string_view message) {
  reply(res, status, {{"error", {{"code", code}, {"message", message}}}});
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request &req, httplib::Response &res) {
    try {
      f(req, res);
    } catch (const SessionNotFound &e) {
      reply_error(res, 404, "session_not_found", e.what());
    } catch (const EmptyHistory &e) {
      reply_error(res, 409, "empty_history", e.what());
    } catch (const nlohmann::json::exception &e) {
      reply_error(res, 400, "bad_request", e.what());
    } catch (const Error &e) {
      reply_error(res, 400, "bad_request", e.what());
    }
  };
}

ojson info_to_json(const SessionInfo &i) {
  return {{"id", i.id}, {"strategy", i.strategy}, {"created_at", i.created_at}, {"history_length", i.history_length},
          {"revision", i.revision}};
}

}  // namespace

SessionServer::SessionServer(SessionManager &manager) : impl_(std::make_unique<Impl>(manager)) {
  auto &srv = impl_->server;
  auto &mgr = impl_->manager;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  srv.Options(R"(/.*)", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });

  srv.Get("/health", [&mgr](const httplib::Request &, httplib::Response &res) {
    reply(res, 200, {{"status", "ok"}, {"llm_available", mgr.llm_available()}});
  });

  srv.Get("/sessions", guarded([&mgr](const httplib::Request &, httplib::Response &res) {
            ojson out = ojson::array();
            for (const auto &i : mgr.list()) out.push_back(info_to_json(i));
            reply(res, 200, {{"sessions", out}});
          }));

  srv.Post("/sessions", guarded([&mgr](const httplib::Request &req, httplib::Response &res) {
             const ojson body = req.body.empty() ? ojson::object() : ojson::parse(req.body);
             const std::string strategy = body.value("strategy", std::string("simple_cga"));
             std::optional<Scene> scene;
             if (body.contains("scene")) {
               const auto &s = body.at("scene");
               if (s.is_string()) {
                 if (s.get<std::string>() != "default") throw ConfigError("unknown scene fixture: " + s.get<std::string>());
               } else {
                 scene = scene_from_json(s);
               }
             }
             const std::string id = mgr.create_session(strategy, scene);
             ojson out = info_to_json(mgr.info(id));
             out["scene"] = scene_to_json(mgr.get_scene(id));
             reply(res, 201, out);
           }));

  srv.Post(R"(/sessions/([^/]+)/instructions)", guarded([&mgr](const httplib::Request &req, httplib::Response &res) {
             const ojson body = ojson::parse(req.body);
             if (!body.contains("instruction") || !body.at("instruction").is_string())
               throw ConfigError("body needs a string field 'instruction'");
             const ApplyResult r = mgr.apply_instruction(req.matches[1], body.at("instruction").get<std::string>());
             reply(res, 200, {{"ok", r.step.ok}, {"scene", scene_to_json(r.scene_after)}, {"step", step_to_json(r.step)}});
           }));

  srv.Get(R"(/sessions/([^/]+)/scene)", guarded([&mgr](const httplib::Request &req, httplib::Response &res) {
            reply(res, 200, scene_to_json(mgr.get_scene(req.matches[1])));
          }));

  srv.Get(R"(/sessions/([^/]+)/history)", guarded([&mgr](const httplib::Request &req, httplib::Response &res) {
            const std::string id = req.matches[1];
            ojson steps = ojson::array();
            for (const auto &s : mgr.get_history(id)) steps.push_back(step_to_json(s));
            ojson rejected = ojson::array();
            for (const auto &s : mgr.get_rejected(id)) rejected.push_back(step_to_json(s));
            reply(res, 200, {{"id", id}, {"steps", steps}, {"rejected", rejected}});
          }));

  srv.Post(R"(/sessions/([^/]+)/undo)", guarded([&mgr](const httplib::Request &req, httplib::Response &res) {
             const std::string id = req.matches[1];
             const Scene scene = mgr.undo(id);
             reply(res, 200, {{"scene", scene_to_json(scene)}, {"history_length", mgr.info(id).history_length}});
           }));
}

SessionServer::~SessionServer() { stop(); }

int SessionServer::bind(const std::string &host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void SessionServer::listen() { impl_->server.listen_after_bind(); }

void SessionServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void SessionServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace cgaedit
