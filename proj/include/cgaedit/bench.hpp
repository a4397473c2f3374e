#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cgaedit/evaluation.hpp"
#include "cgaedit/llm_gateway.hpp"
#include "cgaedit/stats.hpp"

namespace cgaedit {

enum class Endpoint { parse, semantic, fidelity, exact_placement };

std::string_view to_string(Endpoint e);
// Throws ConfigError.
Endpoint endpoint_from_string(std::string_view name);

struct BenchmarkSuite {
  std::string name;
  std::string description;
  std::vector<TaskDefinition> tasks;
  std::vector<std::string> methods;
  RetryPolicy policy;
  int trials_per_task = 1;
  Endpoint validator = Endpoint::parse;  // gate for retrying
  std::uint64_t seed = 0;
};

// Throws ConfigError.
BenchmarkSuite suite_from_json(const nlohmann::ordered_json &doc, const std::filesystem::path &base_dir = {});
nlohmann::ordered_json suite_to_json(const BenchmarkSuite &suite);
BenchmarkSuite load_suite(const std::filesystem::path &path);

struct AttemptResult {
  CompletionRecord completion;
  Verdict verdict;
  double parse_execute_s = 0.0;
  double render_ready_s = 0.0;
};

struct LatencyBreakdown {
  double api_s = 0.0;
  double parse_execute_s = 0.0;
  double render_ready_s = 0.0;
  double total_s = 0.0;
};

struct TokenUsage {
  std::optional<std::int64_t> completion_success_row;  // tokens of the first parse-valid attempt
  std::int64_t total_all_attempts = 0;                  // prompt + completion over every attempt
};

struct RunRecord {
  std::string suite;
  std::string task_id;
  int trial = 0;
  std::string method;
  std::string route = "llm";  // llm | template
  int policy_k = 1;
  bool has_semantic = false;
  bool has_fidelity = false;
  bool has_exact = false;
  std::vector<AttemptResult> attempts;
  std::optional<std::size_t> success_index;
  Verdict verdict;  // of the accepted attempt, else the last one
  LatencyBreakdown latency;
  TokenUsage tokens;
};

nlohmann::ordered_json record_to_json(const RunRecord &r);
RunRecord record_from_json(const nlohmann::ordered_json &doc);

// Row restricted to its first k attempts.
struct RecordView {
  bool applicable = false;
  bool success = false;
  LatencyBreakdown latency;
  TokenUsage tokens;
};

bool attempt_passes(const Verdict &v, Endpoint endpoint);
RecordView view_at(const RunRecord &r, Endpoint endpoint, int k);

using RecordSink = std::function<void(const RunRecord &)>;

struct RunOptions {
  bool benchmark_mode = true;  // false lets keyword instructions take the template route
  int parallelism = 1;
};

// One row per task x method x trial, each against a fresh scene snapshot.
// Throws ConfigError on an invalid suite or unknown method.
std::vector<RunRecord> run_suite(const BenchmarkSuite &suite, Provider &provider, const PromptRegistry &registry,
                                 const RecordSink &sink = {}, const RunOptions &options = {});

struct SummaryStats {
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

// Throws StatsError on an empty sample.
SummaryStats summarize(std::vector<double> values);

struct MethodAggregate {
  std::string method;
  Endpoint endpoint = Endpoint::parse;
  int k = 1;
  std::int64_t successes = 0;
  std::int64_t n = 0;
  double rate = 0.0;
  stats::Interval wilson;
  std::optional<double> avg_completion_tokens_success_rows;
  double avg_total_tokens_all_attempts = 0.0;
  std::optional<SummaryStats> total_latency_s;
  double mean_api_s = 0.0;
  double mean_parse_execute_s = 0.0;
  double mean_render_ready_s = 0.0;
  std::int64_t template_routed = 0;
};

// Per method, in first-appearance order. Throws StatsError on no records.
std::vector<MethodAggregate> aggregate(const std::vector<RunRecord> &records, Endpoint endpoint, int k);

struct PairwiseRow {
  Endpoint endpoint = Endpoint::parse;
  int k = 1;
  std::string method_a;
  std::string method_b;
  std::int64_t successes_a = 0, n_a = 0, successes_b = 0, n_b = 0;
  double rate_a = 0.0;
  double rate_b = 0.0;
  stats::EffectSizes effects;
};

// One row per ordered contrast. Throws ConfigError on an unknown method.
std::vector<PairwiseRow> pairwise_report(const std::vector<MethodAggregate> &aggregates,
                                         const std::vector<std::pair<std::string, std::string>> &contrasts);
// Every unordered pair in aggregate order.
std::vector<std::pair<std::string, std::string>> all_contrasts(const std::vector<MethodAggregate> &aggregates);

nlohmann::ordered_json aggregate_to_json(const MethodAggregate &a);
nlohmann::ordered_json pairwise_to_json(const PairwiseRow &row);
void write_aggregates_csv(std::ostream &out, const std::vector<MethodAggregate> &rows);
void write_pairwise_csv(std::ostream &out, const std::vector<PairwiseRow> &rows);

struct ProtocolConfig {
  std::string timestamp;
  std::string model = "gpt-4o-mini";
  std::string provider = "mock";
  RetryPolicy policy{};
  int run_one_retries = 2;
  int stress_max_shots = 3;
  std::uint64_t seed = 0;
  // block -> (Shenlong, Simple, Euclidean) max_tokens.
  std::vector<std::pair<std::string, std::array<int, 3>>> block_max_tokens{
      {"5-object", {500, 300, 400}}, {"stress", {500, 500, 500}},   {"10-object", {500, 400, 500}},
      {"accuracy", {300, 300, 300}}, {"100-object", {600, 600, 600}},
  };
};

nlohmann::ordered_json protocol_snapshot(const ProtocolConfig &config, const PromptRegistry &registry);

// Line-delimited records, one JSON document per row.
class JsonlWriter {
public:
  // Throws ConfigError when the file cannot be opened.
  explicit JsonlWriter(const std::filesystem::path &path, bool append = false);
  ~JsonlWriter();
  void write(const RunRecord &record);

private:
  std::mutex mu_;
  std::unique_ptr<std::ofstream> out_;
};

std::vector<RunRecord> read_records_jsonl(const std::filesystem::path &path);
void write_records_jsonl(const std::filesystem::path &path, const std::vector<RunRecord> &records);

}  // namespace cgaedit
