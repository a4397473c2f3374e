#include "cgaedit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <thread>

#include "cgaedit/errors.hpp"
#include "cgaedit/format.hpp"
#include "cgaedit/templates.hpp"

namespace cgaedit {

namespace {

using ojson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

ojson optional_json(const std::optional<std::int64_t> &v) { return v ? ojson(*v) : ojson(nullptr); }

ojson latency_to_json(const LatencyBreakdown &l) {
  return {{"api_s", l.api_s}, {"parse_execute_s", l.parse_execute_s}, {"render_ready_s", l.render_ready_s}, {"total_s", l.total_s}};
}

LatencyBreakdown latency_from_json(const ojson &doc) {
  return {doc.at("api_s").get<double>(), doc.at("parse_execute_s").get<double>(), doc.at("render_ready_s").get<double>(),
          doc.at("total_s").get<double>()};
}

bool applicable(const RunRecord &r, Endpoint e) {
  switch (e) {
    case Endpoint::parse: return true;
    case Endpoint::semantic: return r.has_semantic;
    case Endpoint::fidelity: return r.has_fidelity;
    case Endpoint::exact_placement: return r.has_exact;
  }
  return false;
}

std::string csv_escape(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string opt_number(const std::optional<double> &v) { return v ? format_number(*v) : std::string{}; }

}  // namespace

std::string_view to_string(Endpoint e) {
  switch (e) {
    case Endpoint::parse: return "parse";
    case Endpoint::semantic: return "semantic";
    case Endpoint::fidelity: return "fidelity";
    case Endpoint::exact_placement: return "exact_placement";
  }
  return "unknown";
}

Endpoint endpoint_from_string(std::string_view name) {
  if (name == "parse") return Endpoint::parse;
  if (name == "semantic") return Endpoint::semantic;
  if (name == "fidelity") return Endpoint::fidelity;
  if (name == "exact_placement" || name == "exact") return Endpoint::exact_placement;
  throw ConfigError("unknown endpoint: " + std::string(name));
}

BenchmarkSuite suite_from_json(const ojson &doc, const std::filesystem::path &base_dir) {
  BenchmarkSuite s;
  try {
    s.name = doc.at("name").get<std::string>();
    s.description = doc.value("description", std::string{});
    if (doc.contains("methods")) s.methods = doc.at("methods").get<std::vector<std::string>>();
    s.policy = pass_at(doc.value("k", 1));
    s.trials_per_task = doc.value("trials_per_task", 1);
    s.validator = endpoint_from_string(doc.value("validator", std::string("parse")));
    s.seed = doc.value("seed", std::uint64_t{0});
    for (const auto &t : doc.at("tasks")) s.tasks.push_back(task_from_json(t, base_dir));
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("malformed suite: ") + e.what());
  }
  if (s.tasks.empty()) throw ConfigError("suite " + s.name + " has no tasks");
  if (s.trials_per_task < 1) throw ConfigError("trials_per_task must be at least 1");
  return s;
}

ojson suite_to_json(const BenchmarkSuite &s) {
  ojson doc{{"name", s.name},
            {"description", s.description},
            {"methods", s.methods},
            {"k", s.policy.max_attempts},
            {"trials_per_task", s.trials_per_task},
            {"validator", to_string(s.validator)},
            {"seed", s.seed},
            {"tasks", ojson::array()}};
  for (const auto &t : s.tasks) doc["tasks"].push_back(task_to_json(t));
  return doc;
}

BenchmarkSuite load_suite(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read suite " + path.string());
  try {
    return suite_from_json(ojson::parse(in), path.parent_path());
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError("malformed suite " + path.string() + ": " + e.what());
  }
}

ojson record_to_json(const RunRecord &r) {
  ojson attempts = ojson::array();
  for (const auto &a : r.attempts)
    attempts.push_back({{"completion", completion_record_to_json(a.completion)},
                        {"verdict", verdict_to_json(a.verdict)},
                        {"parse_execute_s", a.parse_execute_s},
                        {"render_ready_s", a.render_ready_s}});
  return {{"suite", r.suite},
          {"task_id", r.task_id},
          {"trial", r.trial},
          {"method", r.method},
          {"route", r.route},
          {"policy_k", r.policy_k},
          {"endpoints", {{"semantic", r.has_semantic}, {"fidelity", r.has_fidelity}, {"exact_placement", r.has_exact}}},
          {"success_index", r.success_index ? ojson(*r.success_index) : ojson(nullptr)},
          {"verdict", verdict_to_json(r.verdict)},
          {"latency", latency_to_json(r.latency)},
          {"tokens",
           {{"completion_success_rows", optional_json(r.tokens.completion_success_row)},
            {"total_all_attempts", r.tokens.total_all_attempts}}},
          {"attempts", std::move(attempts)}};
}

RunRecord record_from_json(const ojson &doc) {
  RunRecord r;
  try {
    r.suite = doc.at("suite").get<std::string>();
    r.task_id = doc.at("task_id").get<std::string>();
    r.trial = doc.at("trial").get<int>();
    r.method = doc.at("method").get<std::string>();
    r.route = doc.at("route").get<std::string>();
    r.policy_k = doc.at("policy_k").get<int>();
    r.has_semantic = doc.at("endpoints").at("semantic").get<bool>();
    r.has_fidelity = doc.at("endpoints").at("fidelity").get<bool>();
    r.has_exact = doc.at("endpoints").at("exact_placement").get<bool>();
    if (!doc.at("success_index").is_null()) r.success_index = doc.at("success_index").get<std::size_t>();
    r.verdict = verdict_from_json(doc.at("verdict"));
    r.latency = latency_from_json(doc.at("latency"));
    const auto &tok = doc.at("tokens");
    if (!tok.at("completion_success_rows").is_null())
      r.tokens.completion_success_row = tok.at("completion_success_rows").get<std::int64_t>();
    r.tokens.total_all_attempts = tok.at("total_all_attempts").get<std::int64_t>();
    for (const auto &a : doc.at("attempts"))
      r.attempts.push_back({completion_record_from_json(a.at("completion")), verdict_from_json(a.at("verdict")),
                            a.at("parse_execute_s").get<double>(), a.at("render_ready_s").get<double>()});
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("malformed record: ") + e.what());
  }
  return r;
}

bool attempt_passes(const Verdict &v, Endpoint endpoint) {
  switch (endpoint) {
    case Endpoint::parse: return v.parse_ok;
    case Endpoint::semantic: return v.parse_ok && v.semantic_ok.value_or(false);
    case Endpoint::fidelity: return v.parse_ok && v.fidelity_ok.value_or(false);
    case Endpoint::exact_placement: return v.parse_ok && v.exact_success.value_or(false);
  }
  return false;
}

RecordView view_at(const RunRecord &r, Endpoint endpoint, int k) {
  RecordView v;
  v.applicable = applicable(r, endpoint);
  const std::size_t m = std::min(r.attempts.size(), static_cast<std::size_t>(std::max(k, 0)));
  for (std::size_t i = 0; i < m; ++i) {
    const auto &a = r.attempts[i];
    if (attempt_passes(a.verdict, endpoint)) v.success = true;
    if (!v.tokens.completion_success_row && a.verdict.parse_ok) v.tokens.completion_success_row = a.completion.completion_tokens;
    v.tokens.total_all_attempts += a.completion.prompt_tokens + a.completion.completion_tokens;
    v.latency.api_s += a.completion.api_latency_s;
    v.latency.parse_execute_s += a.parse_execute_s;
    v.latency.render_ready_s += a.render_ready_s;
  }
  v.latency.total_s = v.latency.api_s + v.latency.parse_execute_s + v.latency.render_ready_s;
  return v;
}

namespace {

struct Job {
  const TaskDefinition *task;
  const PromptStrategy *strategy;
  int trial;
};

AttemptResult evaluate_attempt(const TaskDefinition &task, const Scene &scene, const CompletionRecord &completion,
                               OutputKind kind) {
  AttemptResult a;
  a.completion = completion;
  if (completion.error) {
    a.verdict.diagnostics.push_back("provider: " + *completion.error);
    return a;
  }
  const auto t0 = Clock::now();
  Evaluation ev = evaluate_output(task, scene, completion.raw_text, kind);
  a.parse_execute_s = seconds_since(t0);
  a.verdict = std::move(ev.verdict);
  if (ev.execution) {
    const auto t1 = Clock::now();
    const std::string doc = scene_to_json(ev.execution->scene).dump();
    std::vector<Mesh> meshes;
    for (const auto &obj : ev.execution->scene.objects()) meshes.push_back(make_mesh(obj));
    a.render_ready_s = seconds_since(t1);
  }
  return a;
}

RunRecord run_one(const BenchmarkSuite &suite, const Job &job, Provider &provider, const RunOptions &options) {
  const TaskDefinition &task = *job.task;
  const PromptStrategy &strategy = *job.strategy;
  RunRecord rec;
  rec.suite = suite.name;
  rec.task_id = task.id;
  rec.trial = job.trial;
  rec.method = strategy.name;
  rec.policy_k = suite.policy.max_attempts;
  rec.has_semantic = !task.semantic_rules.empty();
  rec.has_fidelity = task.expected_chain.has_value();
  rec.has_exact = !task.expected_positions.empty();

  const Scene scene = materialize_scene(task.scene);
  Endpoint gate = suite.validator;
  if (!applicable(rec, gate)) gate = Endpoint::parse;

  if (!options.benchmark_mode && strategy.output_kind == OutputKind::cga_json &&
      route(task.instruction, true).route == Route::template_engine) {
    try {
      CompletionRecord c;
      c.provider_id = "template";
      const auto t0 = Clock::now();
      c.raw_text = edit_request_to_json(template_edit(task.instruction, scene)).dump();
      c.api_latency_s = seconds_since(t0);
      AttemptResult a = evaluate_attempt(task, scene, c, strategy.output_kind);
      a.completion.accepted = attempt_passes(a.verdict, gate);
      rec.route = "template";
      rec.attempts.push_back(std::move(a));
      if (rec.attempts.back().completion.accepted) rec.success_index = 0;
    } catch (const TemplateError &) {
      rec.attempts.clear();
    }
  }

  if (rec.attempts.empty()) {
    const std::string context = scene_context_render(scene, task.context_limit);
    std::vector<AttemptResult> evaluated;
    const Validator validator = [&](std::string_view raw) {
      CompletionRecord c;
      c.raw_text = std::string(raw);
      evaluated.push_back(evaluate_attempt(task, scene, c, strategy.output_kind));
      return attempt_passes(evaluated.back().verdict, gate);
    };
    CompletionOutcome outcome = complete(provider, strategy, context, task.instruction, suite.policy, validator, job.trial);
    std::size_t next = 0;
    for (auto &c : outcome.records) {
      AttemptResult a;
      if (c.error) {
        a = evaluate_attempt(task, scene, c, strategy.output_kind);
      } else {
        a = std::move(evaluated.at(next++));
        a.completion = c;
      }
      rec.attempts.push_back(std::move(a));
    }
    rec.success_index = outcome.success_index;
  }

  rec.verdict = rec.success_index ? rec.attempts[*rec.success_index].verdict : rec.attempts.back().verdict;
  const RecordView v = view_at(rec, Endpoint::parse, static_cast<int>(rec.attempts.size()));
  rec.latency = v.latency;
  rec.tokens = v.tokens;
  return rec;
}

}  // namespace

std::vector<RunRecord> run_suite(const BenchmarkSuite &suite, Provider &provider, const PromptRegistry &registry,
                                 const RecordSink &sink, const RunOptions &options) {
  if (suite.methods.empty()) throw ConfigError("suite " + suite.name + " selects no methods");
  if (suite.tasks.empty()) throw ConfigError("suite " + suite.name + " has no tasks");
  if (suite.trials_per_task < 1) throw ConfigError("trials_per_task must be at least 1");
  std::vector<const PromptStrategy *> strategies;
  for (const auto &m : suite.methods) strategies.push_back(&registry.at(m));

  std::vector<Job> jobs;
  for (const auto &task : suite.tasks)
    for (const auto *s : strategies) {
      if (!task.methods.empty() && std::find(task.methods.begin(), task.methods.end(), s->name) == task.methods.end())
        continue;
      for (int t = 0; t < suite.trials_per_task; ++t) jobs.push_back({&task, s, t});
    }

  std::vector<RunRecord> records(jobs.size());
  std::mutex sink_mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      records[i] = run_one(suite, jobs[i], provider, options);
      if (sink) {
        std::lock_guard lock(sink_mu);
        sink(records[i]);
      }
    }
  };
  const int threads = std::max(1, std::min<int>(options.parallelism, static_cast<int>(jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return records;
}

SummaryStats summarize(std::vector<double> values) {
  if (values.empty()) throw StatsError("cannot summarize an empty sample");
  std::sort(values.begin(), values.end());
  SummaryStats s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  // Linear interpolation between closest ranks.
  auto quantile = [&](double q) {
    const double pos = q * (n - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  s.median = quantile(0.5);
  s.q1 = quantile(0.25);
  s.q3 = quantile(0.75);
  return s;
}

std::vector<MethodAggregate> aggregate(const std::vector<RunRecord> &records, Endpoint endpoint, int k) {
  if (records.empty()) throw StatsError("no records to aggregate");
  if (k < 1) throw ConfigError("k must be at least 1");
  std::vector<std::string> order;
  for (const auto &r : records)
    if (std::find(order.begin(), order.end(), r.method) == order.end()) order.push_back(r.method);

  std::vector<MethodAggregate> out;
  for (const auto &method : order) {
    MethodAggregate a;
    a.method = method;
    a.endpoint = endpoint;
    a.k = k;
    std::vector<double> totals;
    double api = 0.0, pe = 0.0, rr = 0.0, tokens_all = 0.0, tokens_success = 0.0;
    std::int64_t success_rows = 0;
    for (const auto &r : records) {
      if (r.method != method) continue;
      if (r.route == "template") ++a.template_routed;
      const RecordView v = view_at(r, endpoint, k);
      if (!v.applicable) continue;
      ++a.n;
      if (v.success) ++a.successes;
      totals.push_back(v.latency.total_s);
      api += v.latency.api_s;
      pe += v.latency.parse_execute_s;
      rr += v.latency.render_ready_s;
      tokens_all += static_cast<double>(v.tokens.total_all_attempts);
      if (v.tokens.completion_success_row) {
        tokens_success += static_cast<double>(*v.tokens.completion_success_row);
        ++success_rows;
      }
    }
    if (a.n > 0) {
      const double n = static_cast<double>(a.n);
      a.rate = static_cast<double>(a.successes) / n;
      a.wilson = stats::wilson_ci(a.successes, a.n);
      a.avg_total_tokens_all_attempts = tokens_all / n;
      if (success_rows > 0) a.avg_completion_tokens_success_rows = tokens_success / static_cast<double>(success_rows);
      a.total_latency_s = summarize(totals);
      a.mean_api_s = api / n;
      a.mean_parse_execute_s = pe / n;
      a.mean_render_ready_s = rr / n;
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<PairwiseRow> pairwise_report(const std::vector<MethodAggregate> &aggregates,
                                         const std::vector<std::pair<std::string, std::string>> &contrasts) {
  auto find = [&](const std::string &name) -> const MethodAggregate & {
    for (const auto &a : aggregates)
      if (a.method == name) return a;
    throw ConfigError("unknown method in contrast: " + name);
  };
  std::vector<PairwiseRow> rows;
  for (const auto &[ma, mb] : contrasts) {
    const MethodAggregate &a = find(ma);
    const MethodAggregate &b = find(mb);
    if (a.n == 0 || b.n == 0) throw StatsError("contrast " + ma + " vs " + mb + " has an empty arm");
    PairwiseRow row;
    row.endpoint = a.endpoint;
    row.k = a.k;
    row.method_a = ma;
    row.method_b = mb;
    row.successes_a = a.successes;
    row.n_a = a.n;
    row.successes_b = b.successes;
    row.n_b = b.n;
    row.rate_a = a.rate;
    row.rate_b = b.rate;
    row.effects = stats::effect_sizes({a.successes, a.n, b.successes, b.n});
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::pair<std::string, std::string>> all_contrasts(const std::vector<MethodAggregate> &aggregates) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < aggregates.size(); ++i)
    for (std::size_t j = i + 1; j < aggregates.size(); ++j) out.emplace_back(aggregates[i].method, aggregates[j].method);
  return out;
}

ojson aggregate_to_json(const MethodAggregate &a) {
  ojson doc{{"method", a.method},
            {"endpoint", to_string(a.endpoint)},
            {"k", a.k},
            {"successes", a.successes},
            {"n", a.n},
            {"rate", a.rate},
            {"wilson_lo", a.wilson.lo},
            {"wilson_hi", a.wilson.hi}};
  doc["avg_completion_tokens_success_rows"] =
      a.avg_completion_tokens_success_rows ? ojson(*a.avg_completion_tokens_success_rows) : ojson(nullptr);
  doc["avg_total_tokens_all_attempts"] = a.avg_total_tokens_all_attempts;
  if (a.total_latency_s) {
    const auto &s = *a.total_latency_s;
    doc["latency_total_s"] = {{"mean", s.mean}, {"sd", s.sd}, {"median", s.median}, {"q1", s.q1}, {"q3", s.q3}};
  } else {
    doc["latency_total_s"] = nullptr;
  }
  doc["mean_api_s"] = a.mean_api_s;
  doc["mean_parse_execute_s"] = a.mean_parse_execute_s;
  doc["mean_render_ready_s"] = a.mean_render_ready_s;
  doc["template_routed"] = a.template_routed;
  return doc;
}

ojson pairwise_to_json(const PairwiseRow &r) {
  return {{"endpoint", to_string(r.endpoint)},
          {"k", r.k},
          {"method_a", r.method_a},
          {"method_b", r.method_b},
          {"successes_a", r.successes_a},
          {"n_a", r.n_a},
          {"successes_b", r.successes_b},
          {"n_b", r.n_b},
          {"rate_a", r.rate_a},
          {"rate_b", r.rate_b},
          {"risk_diff_pp", r.effects.risk_diff_pp},
          {"risk_diff_ci_pp", {r.effects.risk_diff_ci_pp.lo, r.effects.risk_diff_ci_pp.hi}},
          {"relative_risk", r.effects.relative_risk},
          {"relative_risk_ci", {r.effects.relative_risk_ci.lo, r.effects.relative_risk_ci.hi}},
          {"odds_ratio", r.effects.odds_ratio},
          {"fisher_p", r.effects.p_fisher}};
}

void write_aggregates_csv(std::ostream &out, const std::vector<MethodAggregate> &rows) {
  out << "method,endpoint,k,successes,n,rate,wilson_lo,wilson_hi,avg_completion_tokens_success_rows,"
         "avg_total_tokens_all_attempts,latency_mean_s,latency_sd_s,latency_median_s,latency_q1_s,latency_q3_s,"
         "mean_api_s,mean_parse_execute_s,mean_render_ready_s,template_routed\n";
  for (const auto &a : rows) {
    const SummaryStats s = a.total_latency_s.value_or(SummaryStats{});
    out << csv_escape(a.method) << ',' << to_string(a.endpoint) << ',' << a.k << ',' << a.successes << ',' << a.n << ','
        << format_number(a.rate) << ',' << format_number(a.wilson.lo) << ',' << format_number(a.wilson.hi) << ','
        << opt_number(a.avg_completion_tokens_success_rows) << ',' << format_number(a.avg_total_tokens_all_attempts) << ','
        << format_number(s.mean) << ',' << format_number(s.sd) << ',' << format_number(s.median) << ','
        << format_number(s.q1) << ',' << format_number(s.q3) << ',' << format_number(a.mean_api_s) << ','
        << format_number(a.mean_parse_execute_s) << ',' << format_number(a.mean_render_ready_s) << ',' << a.template_routed
        << '\n';
  }
}

void write_pairwise_csv(std::ostream &out, const std::vector<PairwiseRow> &rows) {
  out << "endpoint,k,method_a,method_b,rate_a,rate_b,risk_diff_pp,risk_diff_lo_pp,risk_diff_hi_pp,relative_risk,"
         "relative_risk_lo,relative_risk_hi,odds_ratio,fisher_p\n";
  for (const auto &r : rows) {
    const auto &e = r.effects;
    out << to_string(r.endpoint) << ',' << r.k << ',' << csv_escape(r.method_a) << ',' << csv_escape(r.method_b) << ','
        << format_number(r.rate_a) << ',' << format_number(r.rate_b) << ',' << format_number(e.risk_diff_pp) << ','
        << format_number(e.risk_diff_ci_pp.lo) << ',' << format_number(e.risk_diff_ci_pp.hi) << ','
        << format_number(e.relative_risk) << ',' << format_number(e.relative_risk_ci.lo) << ','
        << format_number(e.relative_risk_ci.hi) << ',' << format_number(e.odds_ratio) << ',' << format_number(e.p_fisher)
        << '\n';
  }
}

ojson protocol_snapshot(const ProtocolConfig &c, const PromptRegistry &registry) {
  const std::array<const char *, 4> order{"simple_cga", "shenlong_cga", "euclidean_mat4", "compact_se3"};
  ojson lengths = ojson::object();
  std::string joined;
  for (const char *name : order) {
    const auto n = registry.at(name).system_prompt.size();
    lengths[name] = n;
    joined += (joined.empty() ? "" : " / ") + std::to_string(n);
  }
  ojson blocks = ojson::object();
  for (const auto &[block, v] : c.block_max_tokens)
    blocks[block] = {{"shenlong_cga", v[0]}, {"simple_cga", v[1]}, {"euclidean_mat4", v[2]}};
  ojson strategy_max = ojson::object();
  for (const auto &name : registry.names()) strategy_max[name] = registry.at(name).max_tokens;
  return {{"snapshot_timestamp", c.timestamp},
          {"model", c.model},
          {"provider", c.provider},
          {"prompt_lengths", lengths},
          {"prompt_lengths_text", joined + " characters"},
          {"temperature_schedule", c.policy.schedule_text()},
          {"retry_policy", {{"run_one_retries", c.run_one_retries}, {"stress_max_shots", c.stress_max_shots}}},
          {"max_tokens_per_block", blocks},
          {"max_tokens_per_strategy", strategy_max},
          {"seed", c.seed}};
}

JsonlWriter::JsonlWriter(const std::filesystem::path &path, bool append)
    : out_(std::make_unique<std::ofstream>(path, append ? std::ios::app : std::ios::trunc)) {
  if (!*out_) throw ConfigError("cannot open " + path.string() + " for writing");
}

JsonlWriter::~JsonlWriter() = default;

void JsonlWriter::write(const RunRecord &record) {
  std::lock_guard lock(mu_);
  *out_ << record_to_json(record).dump() << '\n';
  out_->flush();
}

std::vector<RunRecord> read_records_jsonl(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read records " + path.string());
  std::vector<RunRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(ojson::parse(line)));
    } catch (const nlohmann::json::parse_error &e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_records_jsonl(const std::filesystem::path &path, const std::vector<RunRecord> &records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  for (const auto &r : records) out << record_to_json(r).dump() << '\n';
}

}  // namespace cgaedit
