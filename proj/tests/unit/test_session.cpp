#include <doctest.h>

#include <filesystem>
#include <thread>

#include <httplib.h>

#include "cgaedit/session.hpp"

using namespace cgaedit;
using ojson = nlohmann::ordered_json;

namespace {

std::shared_ptr<Provider> mock() {
  return std::make_shared<MockProvider>(ojson::parse(R"j({
    "version": 1,
    "default": {"error": "no fixture"},
    "entries": [
      {"strategy": "simple_cga", "instruction": "Nudge the red sphere up a bit", "text": "{\"RedSphere\": \"T(0.5*e2)\"}"},
      {"strategy": "simple_cga", "instruction": "Break things", "text": "{\"RedSphere\": \"T(1*e1)\", \"Ghost\": \"T(e1)\"}"},
      {"strategy": "simple_cga", "instruction": "Talk nonsense", "text": "I cannot do that"}
    ]})j"));
}

}  // namespace

TEST_CASE("template path without a provider") {
  SessionManager mgr(PromptRegistry::builtin(), nullptr);
  CHECK_FALSE(mgr.llm_available());
  const std::string id = mgr.create_session("simple_cga");
  CHECK(id == "s-000001");
  const ApplyResult r = mgr.apply_instruction(id, "Move the red sphere next to the blue cube, to its left side.");
  CHECK(r.step.ok);
  CHECK(r.step.route == "template");
  CHECK(r.step.request_text.find("T(2.0*e1") != std::string::npos);
  CHECK(max_abs_difference(mgr.get_scene(id).at("RedSphere").center, Vec3{2, 0, 0}) < 1e-12);
  CHECK(r.step.revision_after == r.step.revision_before + 1);

  const ApplyResult novel = mgr.apply_instruction(id, "Make everything sparkle");
  CHECK_FALSE(novel.step.ok);
  CHECK(novel.step.route == "fallback_template");
  CHECK(mgr.get_history(id).size() == 1);
  CHECK(mgr.get_rejected(id).size() == 1);
  CHECK(novel.scene_after == mgr.get_scene(id));
}

TEST_CASE("llm path, rejection and undo") {
  SessionManager mgr(PromptRegistry::builtin(), mock());
  const std::string id = mgr.create_session("simple_cga");
  const Scene start = mgr.get_scene(id);

  const ApplyResult up = mgr.apply_instruction(id, "Nudge the red sphere up a bit");
  CHECK(up.step.ok);
  CHECK(up.step.route == "llm");
  CHECK(max_abs_difference(mgr.get_scene(id).at("RedSphere").center, Vec3{0, 0.5, 0}) < 1e-12);

  const ApplyResult partial = mgr.apply_instruction(id, "Break things");
  CHECK_FALSE(partial.step.ok);
  CHECK(mgr.get_scene(id) == up.scene_after);

  const ApplyResult junk = mgr.apply_instruction(id, "Talk nonsense");
  CHECK_FALSE(junk.step.ok);
  CHECK(junk.step.attempts == 2);
  CHECK(mgr.get_rejected(id).size() == 2);

  CHECK(mgr.undo(id) == start);
  CHECK_THROWS_AS(mgr.undo(id), EmptyHistory);
  CHECK_THROWS_AS(mgr.get_scene("s-999999"), SessionNotFound);
  CHECK_THROWS_AS(mgr.create_session("nope"), ConfigError);
}

TEST_CASE("sessions are independent under concurrency") {
  SessionManager mgr(PromptRegistry::builtin(), nullptr);
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i) ids.push_back(mgr.create_session("simple_cga"));
  std::vector<std::thread> threads;
  for (const auto &id : ids)
    threads.emplace_back([&mgr, id] {
      for (int n = 0; n < 10; ++n) mgr.apply_instruction(id, "Rotate the blue cube 90 degrees around the z axis");
    });
  for (auto &t : threads) t.join();
  for (const auto &id : ids) {
    CHECK(mgr.get_history(id).size() == 10);
    CHECK(mgr.info(id).revision == 10);
    CHECK(max_abs_difference(mgr.get_scene(id).at("BlueCube").center, Vec3{-4, 0, 0}) < 1e-9);
  }
  CHECK(mgr.list().size() == 4);
}

TEST_CASE("journal recovery") {
  const auto path = std::filesystem::temp_directory_path() / "cgaedit_unit_journal.jsonl";
  std::filesystem::remove(path);
  Scene expected;
  std::string id;
  {
    SessionOptions opts;
    opts.journal = path;
    SessionManager mgr(PromptRegistry::builtin(), mock(), opts);
    id = mgr.create_session("simple_cga");
    mgr.apply_instruction(id, "Nudge the red sphere up a bit");
    mgr.apply_instruction(id, "Place the green sphere on top of the blue cube.");
    mgr.apply_instruction(id, "Scale the blue cube by 2");
    mgr.undo(id);
    expected = mgr.get_scene(id);
  }
  SessionManager again(PromptRegistry::builtin(), nullptr);
  again.recover(path);
  CHECK(again.get_scene(id).objects() == expected.objects());
  CHECK(again.get_history(id).size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("HTTP API") {
  SessionManager mgr(PromptRegistry::builtin(), mock());
  SessionServer server(mgr);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread t([&] { server.listen(); });
  server.wait_until_ready();

  httplib::Client cli("127.0.0.1", port);
  auto health = cli.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(ojson::parse(health->body)["llm_available"] == true);

  auto created = cli.Post("/sessions", R"j({"strategy": "simple_cga"})j", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
  const std::string id = ojson::parse(created->body)["id"];

  auto applied = cli.Post("/sessions/" + id + "/instructions",
                          R"j({"instruction": "Place the green sphere on top of the blue cube."})j", "application/json");
  REQUIRE(applied);
  CHECK(applied->status == 200);
  const ojson body = ojson::parse(applied->body);
  CHECK(body["ok"] == true);
  CHECK(body["step"]["route"] == "template");

  auto scene = cli.Get("/sessions/" + id + "/scene");
  REQUIRE(scene);
  const Scene s = scene_from_json(ojson::parse(scene->body));
  CHECK(max_abs_difference(s.at("GreenSphere").center, Vec3{4, 1.7, 0}) < 1e-12);

  auto history = cli.Get("/sessions/" + id + "/history");
  REQUIRE(history);
  CHECK(ojson::parse(history->body)["steps"].size() == 1);

  auto undo = cli.Post("/sessions/" + id + "/undo", "", "application/json");
  REQUIRE(undo);
  CHECK(undo->status == 200);
  auto undo2 = cli.Post("/sessions/" + id + "/undo", "", "application/json");
  REQUIRE(undo2);
  CHECK(undo2->status == 409);
  CHECK(ojson::parse(undo2->body)["error"]["code"] == "empty_history");

  auto missing = cli.Get("/sessions/s-424242/scene");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  auto bad = cli.Post("/sessions/" + id + "/instructions", "{not json", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);

  auto list = cli.Get("/sessions");
  REQUIRE(list);
  CHECK(ojson::parse(list->body)["sessions"].size() == 1);

  server.stop();
  t.join();
}
