#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "cgaedit/bench.hpp"

using namespace cgaedit;
using ojson = nlohmann::ordered_json;

namespace {

const std::string kData = CGAEDIT_DATA_DIR;

std::vector<RunRecord> run_shipped(const std::string &name, int parallelism = 1) {
  const BenchmarkSuite suite = load_suite(kData + "/suites/" + name + ".json");
  MockProvider mock = MockProvider::from_file(kData + "/fixtures/" + name + ".json");
  RunOptions opts;
  opts.parallelism = parallelism;
  return run_suite(suite, mock, PromptRegistry::builtin(), {}, opts);
}

const MethodAggregate &find(const std::vector<MethodAggregate> &rows, const std::string &m) {
  for (const auto &r : rows)
    if (r.method == m) return r;
  FAIL("missing method " << m);
  return rows.front();
}

}  // namespace

TEST_CASE("shipped suites load") {
  for (const char *name : {"core-33", "sequence-stress", "hard-pack", "powered", "ablation"}) {
    const BenchmarkSuite s = load_suite(kData + "/suites/" + std::string(name) + ".json");
    CHECK_MESSAGE(!s.tasks.empty(), name);
  }
  CHECK(load_suite(kData + "/suites/core-33.json").tasks.size() == 48);
  CHECK(load_suite(kData + "/suites/sequence-stress.json").tasks.size() == 120);
  CHECK_THROWS_AS(load_suite(kData + "/suites/missing.json"), ConfigError);
  CHECK_THROWS_AS(suite_from_json(ojson::parse(R"j({"name":"x","methods":["simple_cga"],"tasks":[]})j")), ConfigError);
}

TEST_CASE("suite JSON round trip") {
  const BenchmarkSuite s = load_suite(kData + "/suites/hard-pack.json");
  const BenchmarkSuite back = suite_from_json(suite_to_json(s));
  CHECK(back.name == s.name);
  CHECK(back.tasks.size() == s.tasks.size());
  CHECK(back.methods == s.methods);
  CHECK(back.validator == s.validator);
}

TEST_CASE("hard-pack replay") {
  const auto records = run_shipped("hard-pack");
  CHECK(records.size() == 80);
  const auto sem = aggregate(records, Endpoint::semantic, 1);
  CHECK(find(sem, "simple_cga").successes == 9);
  CHECK(find(sem, "euclidean_mat4").successes == 5);
  CHECK(find(aggregate(records, Endpoint::parse, 1), "shenlong_cga").successes == 19);
  for (const auto &r : records) {
    CHECK(r.route == "llm");
    CHECK(r.latency.total_s >= r.latency.api_s);
    CHECK(r.attempts.size() <= static_cast<std::size_t>(r.policy_k));
  }
  const auto rows = pairwise_report(sem, {{"simple_cga", "euclidean_mat4"}});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].effects.risk_diff_pp == doctest::Approx(20.0));
  CHECK(rows[0].effects.p_fisher == doctest::Approx(0.3203).epsilon(0.002));
}

TEST_CASE("parallel runs give the same rows") {
  auto a = run_shipped("sequence-stress", 1);
  auto b = run_shipped("sequence-stress", 4);
  REQUIRE(a.size() == b.size());
  auto key = [](const RunRecord &r) { return r.method + "/" + r.task_id + "/" + std::to_string(r.trial); };
  std::sort(a.begin(), a.end(), [&](auto &x, auto &y) { return key(x) < key(y); });
  std::sort(b.begin(), b.end(), [&](auto &x, auto &y) { return key(x) < key(y); });
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(key(a[i]) == key(b[i]));
    CHECK(a[i].verdict.fidelity_ok == b[i].verdict.fidelity_ok);
  }
  const auto fid = aggregate(a, Endpoint::fidelity, 1);
  CHECK(find(fid, "simple_cga").successes == 117);
  CHECK(find(fid, "compact_se3").successes == 108);
}

TEST_CASE("pass@k is monotone in k on the ablation replay") {
  const auto records = run_shipped("ablation");
  const auto k1 = aggregate(records, Endpoint::parse, 1);
  const auto k2 = aggregate(records, Endpoint::parse, 2);
  CHECK(find(k1, "shenlong_cga").successes == 40);
  CHECK(find(k2, "shenlong_cga").successes == 41);
  for (const auto &r : records)
    for (Endpoint e : {Endpoint::parse, Endpoint::semantic})
      CHECK((view_at(r, e, 2).success || !view_at(r, e, 1).success));
  for (const auto &r : records)
    for (std::size_t i = 0; i < r.attempts.size(); ++i)
      CHECK(r.attempts[i].completion.temperature == doctest::Approx(0.1 + 0.05 * static_cast<double>(i)));
}

TEST_CASE("template route is disclosed outside benchmark mode") {
  BenchmarkSuite suite = load_suite(kData + "/suites/hard-pack.json");
  suite.methods = {"simple_cga"};
  MockProvider mock = MockProvider::from_file(kData + "/fixtures/hard-pack.json");
  RunOptions opts;
  opts.benchmark_mode = false;
  const auto records = run_suite(suite, mock, PromptRegistry::builtin(), {}, opts);
  std::size_t templated = 0;
  for (const auto &r : records) templated += r.route == "template";
  CHECK(templated > 0);
  CHECK(find(aggregate(records, Endpoint::parse, 1), "simple_cga").template_routed == static_cast<std::int64_t>(templated));
}

TEST_CASE("records persist as JSONL") {
  const auto records = run_shipped("hard-pack");
  const auto path = std::filesystem::temp_directory_path() / "cgaedit_unit_records.jsonl";
  write_records_jsonl(path, records);
  const auto back = read_records_jsonl(path);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(record_to_json(back[i]) == record_to_json(records[i]));
  std::filesystem::remove(path);
}

TEST_CASE("summary statistics") {
  const SummaryStats s = summarize({1, 2, 3, 4, 5});
  CHECK(s.mean == doctest::Approx(3.0));
  CHECK(s.median == doctest::Approx(3.0));
  CHECK(s.q1 == doctest::Approx(2.0));
  CHECK(s.q3 == doctest::Approx(4.0));
  CHECK(s.sd == doctest::Approx(1.5811388).epsilon(1e-6));
  const SummaryStats t = summarize({4, 1, 3, 2});
  CHECK(t.median == doctest::Approx(2.5));
  CHECK(t.q1 == doctest::Approx(1.75));
  CHECK_THROWS_AS(summarize({}), StatsError);
}

TEST_CASE("report writers") {
  const auto records = run_shipped("hard-pack");
  const auto aggs = aggregate(records, Endpoint::semantic, 1);
  const auto rows = pairwise_report(aggs, all_contrasts(aggs));
  CHECK(rows.size() == 6);
  std::ostringstream a, p;
  write_aggregates_csv(a, aggs);
  write_pairwise_csv(p, rows);
  CHECK(a.str().find("simple_cga") != std::string::npos);
  const std::string header = p.str().substr(0, p.str().find('\n'));
  for (const char *col : {"risk_diff_pp", "relative_risk", "odds_ratio", "fisher_p"})
    CHECK_MESSAGE(header.find(col) != std::string::npos, col);
  CHECK_THROWS_AS(pairwise_report(aggs, {{"simple_cga", "nope"}}), ConfigError);
}

TEST_CASE("protocol snapshot") {
  ProtocolConfig cfg;
  cfg.timestamp = "2025-01-01T00:00:00Z";
  cfg.policy = pass_at(3);
  const ojson snap = protocol_snapshot(cfg, PromptRegistry::builtin());
  CHECK(snap["snapshot_timestamp"] == "2025-01-01T00:00:00Z");
  CHECK(snap["prompt_lengths_text"] == "704 / 963 / 435 / 588 characters");
  CHECK(snap["temperature_schedule"] == "0.1 + 0.05 * attempt");
  CHECK(snap == protocol_snapshot(cfg, PromptRegistry::builtin()));
}
