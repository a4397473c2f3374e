#include <doctest.h>

#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "cgaedit/llm_gateway.hpp"

using namespace cgaedit;
using ojson = nlohmann::ordered_json;

namespace {

ojson fixture() {
  return ojson::parse(R"j({
    "version": 1, "provider_id": "unit",
    "default": {"error": "missing"},
    "entries": [
      {"strategy": "simple_cga", "instruction": "go", "text": "any-any", "completion_tokens": 5},
      {"strategy": "simple_cga", "instruction": "go", "attempt": 1, "text": "a1-any"},
      {"strategy": "simple_cga", "instruction": "go", "trial": 2, "text": "any-t2"},
      {"strategy": "simple_cga", "instruction": "go", "attempt": 1, "trial": 2, "text": "a1-t2", "latency_s": 0.25},
      {"strategy": "simple_cga", "instruction": "boom", "error": "rate limited"}
    ]})j");
}

CompletionRequest req(std::string instruction, int attempt, int trial) {
  CompletionRequest r;
  r.strategy = "simple_cga";
  r.instruction = std::move(instruction);
  r.attempt_index = attempt;
  r.trial = trial;
  return r;
}

}  // namespace

TEST_CASE("builtin prompts") {
  const PromptRegistry reg = PromptRegistry::builtin();
  CHECK(reg.at("simple_cga").system_prompt.size() == 704);
  CHECK(reg.at("shenlong_cga").system_prompt.size() == 963);
  CHECK(reg.at("euclidean_mat4").system_prompt.size() == 435);
  CHECK(reg.at("compact_se3").system_prompt.size() == 588);
  CHECK(reg.at("simple_cga_verbose").system_prompt.size() > reg.at("simple_cga").system_prompt.size());
  CHECK(reg.at("simple_cga").verbatim);
  CHECK_FALSE(reg.at("shenlong_cga").verbatim);
  CHECK(reg.at("euclidean_mat4").output_kind == OutputKind::mat4_json);
  CHECK(reg.at("compact_se3").output_kind == OutputKind::se3_json);
  CHECK(reg.names().size() == 5);
  CHECK_THROWS_AS(reg.at("nope"), ConfigError);
}

TEST_CASE("retry temperatures") {
  const RetryPolicy p = pass_at(3);
  CHECK(p.temperature(0) == doctest::Approx(0.10));
  CHECK(p.temperature(1) == doctest::Approx(0.15));
  CHECK(p.temperature(2) == doctest::Approx(0.20));
  CHECK(p.schedule_text() == "0.1 + 0.05 * attempt");
  CHECK_THROWS_AS(pass_at(0), ConfigError);
}

TEST_CASE("mock lookup precedence") {
  MockProvider m(fixture());
  CHECK(m.complete(req("go", 0, 0)).text == "any-any");
  CHECK(m.complete(req("go", 1, 0)).text == "a1-any");
  CHECK(m.complete(req("go", 0, 2)).text == "any-t2");
  const auto both = m.complete(req("go", 1, 2));
  CHECK(both.text == "a1-t2");
  CHECK(both.latency_s == 0.25);
  CHECK_THROWS_AS(m.complete(req("boom", 0, 0)), ProviderError);
  CHECK_THROWS_AS(m.complete(req("unknown", 0, 0)), ProviderError);
  CHECK_THROWS_AS(MockProvider(ojson::parse(R"j({"version": 9})j")), ConfigError);
  CHECK_THROWS_AS(MockProvider(ojson::parse(R"j({"version": 1, "entries": [{"strategy":"a","instruction":"b"}]})j")),
                  ConfigError);
}

TEST_CASE("completion loop stops at first acceptance") {
  MockProvider m(fixture());
  const PromptRegistry reg = PromptRegistry::builtin();
  const PromptStrategy &s = reg.at("simple_cga");
  const auto accept_a1 = [](std::string_view t) { return t.starts_with("a1"); };
  const CompletionOutcome o = complete(m, s, "ctx", "go", pass_at(3), accept_a1);
  REQUIRE(o.records.size() == 2);
  CHECK(o.success_index == 1u);
  CHECK(o.records[0].temperature == doctest::Approx(0.10));
  CHECK(o.records[1].temperature == doctest::Approx(0.15));
  CHECK_FALSE(o.records[0].accepted);
  CHECK(o.records[1].accepted);
  CHECK(o.records[0].completion_tokens == 5);

  const CompletionOutcome never = complete(m, s, "ctx", "go", pass_at(3), [](std::string_view) { return false; });
  CHECK(never.records.size() == 3);
  CHECK_FALSE(never.success_index.has_value());

  const CompletionOutcome err = complete(m, s, "ctx", "boom", pass_at(2), [](std::string_view) { return true; });
  CHECK(err.records.size() == 2);
  CHECK(err.records[0].error.has_value());
  CHECK_FALSE(err.success_index.has_value());

  const ojson j = completion_record_to_json(o.records[1]);
  const CompletionRecord back = completion_record_from_json(j);
  CHECK(back.raw_text == "a1-any");
  CHECK(back.accepted);
}

TEST_CASE("pass@k success never decreases with k") {
  MockProvider m(fixture());
  const PromptRegistry reg = PromptRegistry::builtin();
  const PromptStrategy &s = reg.at("simple_cga");
  const auto accept_t2 = [](std::string_view t) { return t.ends_with("t2"); };
  bool prev = false;
  for (int k = 1; k <= 4; ++k) {
    const bool ok = complete(m, s, "ctx", "go", pass_at(k), accept_t2, 2).success_index.has_value();
    CHECK((ok || !prev));
    prev = ok;
  }
}

TEST_CASE("scene context and user message") {
  const std::string ctx = scene_context_render(default_scene());
  CHECK(ctx.find("RedSphere sphere red [0, 0, 0] 1") != std::string::npos);
  CHECK(scene_context_render(generate_scene(50, 1), 10).find('\n') != std::string::npos);
  std::size_t lines = 0;
  for (char c : scene_context_render(generate_scene(50, 1), 10)) lines += c == '\n';
  CHECK(lines <= 10);
  const std::string msg = user_message(ctx, "do it");
  CHECK(msg.find("INSTRUCTION: do it") != std::string::npos);
}

TEST_CASE("chat request and response shapes") {
  CompletionRequest r = req("go", 0, 0);
  r.system_prompt = "sys";
  r.user_message = "user";
  r.temperature = 0.15;
  r.max_tokens = 300;
  const ojson body = build_chat_request(r, "gpt-4o-mini");
  CHECK(body["model"] == "gpt-4o-mini");
  CHECK(body["messages"][0]["role"] == "system");
  CHECK(body["messages"][1]["content"] == "user");
  CHECK(body["temperature"] == 0.15);
  CHECK(body["max_tokens"] == 300);

  const auto resp = parse_chat_response(
      R"j({"choices":[{"message":{"content":"{\"A\":\"T(e1)\"}"}}],"usage":{"prompt_tokens":12,"completion_tokens":7}})j");
  CHECK(resp.text == R"j({"A":"T(e1)"})j");
  CHECK(resp.prompt_tokens == 12);
  CHECK(resp.completion_tokens == 7);
  CHECK_THROWS_AS(parse_chat_response(R"j({"error":{"message":"bad key"}})j"), ProviderError);
  CHECK_THROWS_AS(parse_chat_response("not json"), ProviderError);
  CHECK_THROWS_AS(parse_chat_response(R"j({"choices":[]})j"), ProviderError);
}

TEST_CASE("live provider against a local endpoint") {
  httplib::Server srv;
  ojson seen;
  srv.Post("/v1/chat/completions", [&](const httplib::Request &rq, httplib::Response &rs) {
    seen = ojson::parse(rq.body);
    seen["auth"] = rq.get_header_value("Authorization");
    rs.set_content(R"j({"choices":[{"message":{"content":"ok"}}],"usage":{"prompt_tokens":3,"completion_tokens":1}})j",
                   "application/json");
  });
  const int port = srv.bind_to_any_port("127.0.0.1");
  std::thread t([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();

  ::setenv("CGAEDIT_TEST_KEY", "sk-test", 1);
  LiveProviderConfig cfg;
  cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
  cfg.api_key_env = "CGAEDIT_TEST_KEY";
  LiveProvider live(cfg);
  CompletionRequest r = req("go", 0, 0);
  r.system_prompt = "s";
  r.user_message = "u";
  const auto resp = live.complete(r);
  CHECK(resp.text == "ok");
  CHECK(seen["auth"] == "Bearer sk-test");
  CHECK(seen["model"] == "gpt-4o-mini");
  srv.stop();
  t.join();

  LiveProviderConfig missing;
  missing.api_key_env = "CGAEDIT_TEST_KEY_UNSET";
  ::unsetenv("CGAEDIT_TEST_KEY_UNSET");
  CHECK_THROWS_AS(LiveProvider{missing}, ConfigError);
}

TEST_CASE("gateway config") {
  const GatewayConfig g = gateway_config_from_json(ojson::parse(R"j({"provider":"mock","fixtures":"x.json","max_tokens":{"simple_cga":123}})j"));
  CHECK(g.provider == "mock");
  CHECK(g.max_tokens.at("simple_cga") == 123);
  CHECK(make_registry(g).at("simple_cga").max_tokens == 123);
  CHECK_THROWS_AS(gateway_config_from_json(ojson::parse(R"j({"provider":"carrier-pigeon"})j")), ConfigError);
}
