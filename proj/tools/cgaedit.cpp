#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cgaedit/bench.hpp"
#include "cgaedit/evaluation.hpp"
#include "cgaedit/format.hpp"
#include "cgaedit/llm_gateway.hpp"
#include "cgaedit/session.hpp"

using namespace cgaedit;
using ojson = nlohmann::ordered_json;

namespace {

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string pct(double x) { return format_fixed(100.0 * x, 1) + "%"; }

void print_aggregates(const std::vector<MethodAggregate> &rows) {
  std::printf("%-20s %-16s %9s %8s %17s %10s %10s\n", "method", "endpoint", "succ/n", "rate", "wilson95", "tok/succ",
              "lat_mean");
  for (const auto &a : rows) {
    const std::string frac = std::to_string(a.successes) + "/" + std::to_string(a.n);
    const std::string ci = "[" + pct(a.wilson.lo) + ", " + pct(a.wilson.hi) + "]";
    const std::string tok = a.avg_completion_tokens_success_rows ? format_fixed(*a.avg_completion_tokens_success_rows, 2) : "-";
    const std::string lat = a.total_latency_s ? format_fixed(a.total_latency_s->mean, 3) + "s" : "-";
    const std::string ep = std::string(to_string(a.endpoint)) + "@" + std::to_string(a.k);
    std::printf("%-20s %-16s %9s %8s %17s %10s %10s\n", a.method.c_str(), ep.c_str(), frac.c_str(), pct(a.rate).c_str(),
                ci.c_str(), tok.c_str(), lat.c_str());
  }
}

void print_pairwise(const std::vector<PairwiseRow> &rows) {
  std::printf("%-34s %8s %8s %24s %22s %9s %9s\n", "contrast", "rate_a", "rate_b", "risk_diff_pp [95%]", "RR [95%]", "OR",
              "p_fisher");
  for (const auto &r : rows) {
    const auto &e = r.effects;
    const std::string name = r.method_a + " vs " + r.method_b;
    const std::string rd = format_fixed(e.risk_diff_pp, 1) + " [" + format_fixed(e.risk_diff_ci_pp.lo, 1) + ", " +
                           format_fixed(e.risk_diff_ci_pp.hi, 1) + "]";
    const std::string rr = format_fixed(e.relative_risk, 3) + " [" + format_fixed(e.relative_risk_ci.lo, 3) + ", " +
                           format_fixed(e.relative_risk_ci.hi, 3) + "]";
    std::printf("%-34s %8s %8s %24s %22s %9s %9s\n", name.c_str(), pct(r.rate_a).c_str(), pct(r.rate_b).c_str(),
                rd.c_str(), rr.c_str(), format_fixed(e.odds_ratio, 3).c_str(), format_fixed(e.p_fisher, 4).c_str());
  }
}

std::vector<Endpoint> endpoints_for(const std::vector<RunRecord> &records) {
  std::vector<Endpoint> out{Endpoint::parse};
  bool sem = false, fid = false, ex = false;
  for (const auto &r : records) {
    sem = sem || r.has_semantic;
    fid = fid || r.has_fidelity;
    ex = ex || r.has_exact;
  }
  if (sem) out.push_back(Endpoint::semantic);
  if (fid) out.push_back(Endpoint::fidelity);
  if (ex) out.push_back(Endpoint::exact_placement);
  return out;
}

std::unique_ptr<Provider> provider_from(const std::string &kind, const std::string &fixtures, const std::string &model) {
  GatewayConfig g;
  g.provider = kind;
  g.fixtures = fixtures;
  if (!model.empty()) g.live.model = model;
  return make_provider(g);
}

PromptRegistry registry_from(const std::string &prompt_dir) {
  return prompt_dir.empty() ? PromptRegistry::builtin() : PromptRegistry::with_overrides(prompt_dir);
}

std::atomic<SessionServer *> g_server{nullptr};

void on_signal(int) {
  if (auto *s = g_server.load()) s->stop();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"cgaedit: conformal scene editing toolkit"};
  app.require_subcommand(1);

  // run
  auto *run = app.add_subcommand("run", "Run a benchmark suite");
  std::string suite_path, methods_arg, provider_kind = "mock", fixtures, out_path, model, prompt_dir;
  int k_override = 0, parallel = 1;
  long long seed = -1;
  bool template_route = false, append = false;
  run->add_option("--suite", suite_path, "Suite JSON")->required();
  run->add_option("--methods", methods_arg, "Comma separated strategies (default: suite methods)");
  run->add_option("--policy", k_override, "pass@k attempts (default: suite k)");
  run->add_option("--provider", provider_kind, "mock or live")->check(CLI::IsMember({"mock", "live"}));
  run->add_option("--fixtures", fixtures, "Mock fixture JSON");
  run->add_option("--model", model, "Live model name");
  run->add_option("--prompts", prompt_dir, "Directory of prompt overrides");
  run->add_option("--out", out_path, "Write records as JSONL");
  run->add_option("--seed", seed, "Override suite seed");
  run->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--append", append, "Append to --out instead of truncating");
  run->add_flag("--template-route", template_route, "Let keyword instructions take the template route");

  // report
  auto *report = app.add_subcommand("report", "Aggregate saved records");
  std::string records_path, endpoint_arg = "parse", contrasts_arg, block, format = "table";
  int report_k = 1;
  report->add_option("--records", records_path, "Records JSONL")->required();
  report->add_option("--endpoint", endpoint_arg, "parse | semantic | fidelity | exact_placement");
  report->add_option("--k", report_k, "Attempts counted")->check(CLI::PositiveNumber);
  report->add_option("--contrasts", contrasts_arg, "a:b,c:d or 'all'");
  report->add_option("--block", block, "Only task ids with this prefix");
  report->add_option("--format", format, "table | json | csv")->check(CLI::IsMember({"table", "json", "csv"}));

  // snapshot
  auto *snap = app.add_subcommand("snapshot", "Write the protocol snapshot");
  std::string snap_out, timestamp = "1970-01-01T00:00:00Z", snap_model = "gpt-4o-mini", snap_provider = "mock";
  int snap_k = 2;
  long long snap_seed = 0;
  snap->add_option("--out", snap_out, "Output file (default stdout)");
  snap->add_option("--timestamp", timestamp);
  snap->add_option("--model", snap_model);
  snap->add_option("--provider", snap_provider);
  snap->add_option("--k", snap_k)->check(CLI::PositiveNumber);
  snap->add_option("--seed", snap_seed);
  snap->add_option("--prompts", prompt_dir, "Directory of prompt overrides");

  // serve
  auto *serve = app.add_subcommand("serve", "Serve the session HTTP API");
  std::string host = "127.0.0.1", journal;
  int port = 8080, serve_k = 2;
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--provider", provider_kind, "none, mock or live")->check(CLI::IsMember({"none", "mock", "live"}));
  serve->add_option("--fixtures", fixtures);
  serve->add_option("--model", model);
  serve->add_option("--prompts", prompt_dir);
  serve->add_option("--journal", journal, "Append-only journal; replayed on start");
  serve->add_option("--k", serve_k)->check(CLI::PositiveNumber);

  // exec
  auto *exec = app.add_subcommand("exec", "Execute one model output against a scene");
  std::string scene_path, kind_arg = "cga_json", output_arg;
  exec->add_option("--scene", scene_path, "Scene JSON (default: built-in five-object scene)");
  exec->add_option("--kind", kind_arg, "cga_json | se3_json | mat4_json");
  exec->add_option("output", output_arg, "Output text, or @file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      BenchmarkSuite suite = load_suite(suite_path);
      if (!methods_arg.empty()) suite.methods = split(methods_arg, ',');
      if (k_override > 0) suite.policy = pass_at(k_override);
      if (seed >= 0) suite.seed = static_cast<std::uint64_t>(seed);
      auto provider = provider_from(provider_kind, fixtures, model);
      const PromptRegistry registry = registry_from(prompt_dir);
      std::unique_ptr<JsonlWriter> writer;
      if (!out_path.empty()) writer = std::make_unique<JsonlWriter>(out_path, append);
      RecordSink sink;
      if (writer) sink = [&](const RunRecord &r) { writer->write(r); };
      RunOptions opts;
      opts.benchmark_mode = !template_route;
      opts.parallelism = parallel;
      const auto records = run_suite(suite, *provider, registry, sink, opts);
      std::printf("suite %s: %zu rows, provider %s\n", suite.name.c_str(), records.size(), provider->id().c_str());
      for (Endpoint e : endpoints_for(records)) {
        for (int k = 1; k <= suite.policy.max_attempts; ++k) print_aggregates(aggregate(records, e, k));
      }
      return 0;
    }
    if (*report) {
      std::vector<RunRecord> records = read_records_jsonl(records_path);
      if (!block.empty())
        std::erase_if(records, [&](const RunRecord &r) { return r.task_id.rfind(block, 0) != 0; });
      const Endpoint endpoint = endpoint_from_string(endpoint_arg);
      const auto aggs = aggregate(records, endpoint, report_k);
      std::vector<PairwiseRow> rows;
      if (!contrasts_arg.empty()) {
        std::vector<std::pair<std::string, std::string>> contrasts;
        if (contrasts_arg == "all") {
          contrasts = all_contrasts(aggs);
        } else {
          for (const auto &c : split(contrasts_arg, ',')) {
            const auto ab = split(c, ':');
            if (ab.size() != 2) throw ConfigError("contrast must look like a:b, got " + c);
            contrasts.emplace_back(ab[0], ab[1]);
          }
        }
        rows = pairwise_report(aggs, contrasts);
      }
      if (format == "json") {
        ojson doc{{"aggregates", ojson::array()}, {"pairwise", ojson::array()}};
        for (const auto &a : aggs) doc["aggregates"].push_back(aggregate_to_json(a));
        for (const auto &r : rows) doc["pairwise"].push_back(pairwise_to_json(r));
        std::cout << doc.dump(2) << "\n";
      } else if (format == "csv") {
        write_aggregates_csv(std::cout, aggs);
        if (!rows.empty()) {
          std::cout << "\n";
          write_pairwise_csv(std::cout, rows);
        }
      } else {
        print_aggregates(aggs);
        if (!rows.empty()) {
          std::printf("\n");
          print_pairwise(rows);
        }
      }
      return 0;
    }
    if (*snap) {
      ProtocolConfig cfg;
      cfg.timestamp = timestamp;
      cfg.model = snap_model;
      cfg.provider = snap_provider;
      cfg.policy = pass_at(snap_k);
      cfg.seed = static_cast<std::uint64_t>(snap_seed);
      const std::string text = protocol_snapshot(cfg, registry_from(prompt_dir)).dump(2) + "\n";
      if (snap_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(snap_out);
        if (!out) throw ConfigError("cannot write " + snap_out);
        out << text;
      }
      return 0;
    }
    if (*serve) {
      std::shared_ptr<Provider> provider;
      if (provider_kind != "none") provider = provider_from(provider_kind, fixtures, model);
      SessionOptions opts;
      opts.policy = pass_at(serve_k);
      if (!journal.empty()) opts.journal = journal;
      SessionManager manager(registry_from(prompt_dir), provider, opts);
      if (!journal.empty() && std::ifstream(journal)) manager.recover(journal);
      SessionServer server(manager);
      const int bound = server.bind(host, port);
      if (bound < 0) throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::printf("listening on http://%s:%d\n", host.c_str(), bound);
      std::fflush(stdout);
      server.listen();
      g_server = nullptr;
      return 0;
    }
    if (*exec) {
      const Scene scene = scene_path.empty() ? default_scene() : load_scene(scene_path);
      std::string text = output_arg;
      if (!text.empty() && text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw ConfigError("cannot read " + text.substr(1));
        text.assign(std::istreambuf_iterator<char>(in), {});
      }
      const ParseCheck pc = check_parse(text, output_kind_from_string(kind_arg));
      if (!pc.parse_ok) {
        ojson doc{{"parse_ok", false}, {"diagnostics", pc.diagnostics}};
        std::cout << doc.dump(2) << "\n";
        return 0;
      }
      const ExecutionResult res = execute_parsed(scene, *pc.parsed);
      ojson statuses = ojson::array();
      for (const auto &s : res.statuses)
        statuses.push_back({{"name", s.name}, {"ok", s.ok}, {"error", s.error}, {"warnings", s.warnings}});
      ojson doc{{"parse_ok", true}, {"statuses", statuses}, {"scene", scene_to_json(res.scene)}};
      std::cout << doc.dump(2) << "\n";
      return 0;
    }
  } catch (const ConfigError &e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
