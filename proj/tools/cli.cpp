#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "flagtune/analysis.hpp"
#include "flagtune/cache.hpp"
#include "flagtune/checkpoint.hpp"
#include "flagtune/digest.hpp"
#include "flagtune/error.hpp"
#include "flagtune/evaluator.hpp"
#include "flagtune/external.hpp"
#include "flagtune/io.hpp"
#include "flagtune/oracle.hpp"
#include "flagtune/search.hpp"
#include "flagtune/synthetic.hpp"
#include "flagtune/trace.hpp"

namespace flagtune::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::atomic<bool>& stop_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

namespace {

enum class Mode { synthetic, external };

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string resume;
  std::optional<std::size_t> stop_after;
};

/// The campaign configuration file with every path resolved and every input parsed.
struct Campaign {
  fs::path config_path;
  fs::path flag_space_path, suite_path, model_path, cache_path, output_dir, work_dir;
  Mode mode = Mode::synthetic;
  std::uint64_t seed = 0;
  std::size_t n_configs = 1000;
  double threshold_t = 5.0;
  std::size_t k = 10;
  Aggregate aggregate = Aggregate::arithmetic_mean;
  std::string digest = std::string(kDefaultDigest);
  unsigned compile_jobs = 1;

  std::optional<FlagSpace> space;
  Suite suite;
  std::optional<SyntheticModel> model;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

Campaign load_campaign(const GlobalOptions& g) {
  if (g.config.empty()) throw ParseError("--config is required");
  Campaign c;
  c.config_path = g.config;
  json doc;
  try {
    doc = json::parse(read_text_file(c.config_path));
  } catch (const json::exception& e) {
    throw ParseError("campaign config: " + std::string(e.what()));
  }
  auto base = c.config_path.parent_path();
  if (base.empty()) base = ".";
  try {
    c.flag_space_path = resolve(base, doc.at("flag_space").get<std::string>());
    c.suite_path = resolve(base, doc.at("suite").get<std::string>());
    c.model_path = resolve(base, doc.value("model", std::string()));
    c.cache_path = resolve(base, doc.value("cache", std::string()));
    c.output_dir = resolve(base, doc.value("output_dir", std::string("out")));
    c.work_dir = resolve(base, doc.value("work_dir", std::string()));
    auto mode = doc.value("mode", std::string(c.model_path.empty() ? "external" : "synthetic"));
    if (mode == "synthetic")
      c.mode = Mode::synthetic;
    else if (mode == "external")
      c.mode = Mode::external;
    else
      throw ParseError("campaign config: unknown mode '" + mode + "'");
    c.seed = doc.value("seed", std::uint64_t{0});
    c.n_configs = doc.value("n_configs", std::size_t{1000});
    c.threshold_t = doc.value("threshold_t", 5.0);
    c.k = doc.value("k", std::size_t{10});
    c.aggregate = parse_aggregate(doc.value("aggregate", std::string("mean")));
    c.digest = doc.value("digest", std::string(kDefaultDigest));
    c.compile_jobs = doc.value("compile_jobs", 1u);
  } catch (const json::exception& e) {
    throw ParseError("campaign config: " + std::string(e.what()));
  }
  if (g.seed) c.seed = *g.seed;
  if (!g.out.empty()) c.output_dir = g.out;
  if (c.work_dir.empty()) c.work_dir = c.output_dir / "work";
  if (!(c.threshold_t >= 0)) throw ParseError("campaign config: threshold_t must be >= 0");
  digest_bytes(c.digest, "");  // rejects unknown algorithms up front

  c.space = load_flag_space(c.flag_space_path);
  c.suite = load_suite(c.suite_path, c.mode == Mode::external);
  if (c.mode == Mode::synthetic) {
    if (c.model_path.empty()) throw ParseError("campaign config: synthetic mode needs 'model'");
    c.model = load_synthetic_model(c.model_path, *c.space);
    for (const auto& b : c.suite.benchmarks)
      if (!c.model->models(b.name)) throw ParseError("model has no benchmark '" + b.name + "'");
  }
  return c;
}

/// Identifies the inputs a checkpoint belongs to.
json campaign_header(const std::string& command, const Campaign& c, const json& params) {
  std::string material = command;
  material += '\n' + read_text_file(c.flag_space_path);
  material += '\n' + read_text_file(c.suite_path);
  if (!c.model_path.empty()) material += '\n' + read_text_file(c.model_path);
  material += '\n' + params.dump();
  json h;
  h["kind"] = "header";
  h["command"] = command;
  h["params"] = params;
  h["fingerprint"] = digest_bytes("sha256", material).hex;
  return h;
}

class Log {
 public:
  explicit Log(const fs::path& path) : out_(path, std::ios::app) {}
  void line(const std::string& text) {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    out_ << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << ' ' << text << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

/// Evaluator stack for one command: backend, cache, checkpoint log.
struct Session {
  std::unique_ptr<EvalCache> file_cache;
  std::unique_ptr<CachingEvaluator> evaluator;
  std::unique_ptr<CheckpointingEvaluator> checkpoint;
  std::unique_ptr<Log> log;

  SearchHooks hooks() {
    return {[this](const CEState& s) { checkpoint->record_state(s); }};
  }
};

Session open_session(const std::string& command, const Campaign& c, const GlobalOptions& g, const json& params) {
  std::optional<CheckpointLog> resume;
  if (!g.resume.empty()) resume = load_checkpoint(g.resume);
  auto header = campaign_header(command, c, params);

  Session s;
  if (!c.cache_path.empty()) s.file_cache = EvalCache::open(c.cache_path);
  std::unique_ptr<Backend> backend;
  if (c.mode == Mode::synthetic)
    backend = std::make_unique<SyntheticBackend>(*c.model, c.digest);
  else
    backend = std::make_unique<ExternalBackend>(*c.space, c.work_dir, c.suite.timing, c.digest);

  fs::create_directories(c.output_dir);
  s.log = std::make_unique<Log>(c.output_dir / "campaign.log");
  s.evaluator = std::make_unique<CachingEvaluator>(*c.space, std::move(backend), s.file_cache.get(), c.compile_jobs);
  CheckpointingEvaluator::Options options{&stop_flag(), g.stop_after};
  s.checkpoint = std::make_unique<CheckpointingEvaluator>(*s.evaluator, c.output_dir / "checkpoint.jsonl", header,
                                                          std::move(resume), options);
  s.log->line("start " + command + (g.resume.empty() ? "" : " (resuming " + g.resume + ")"));
  return s;
}

std::string config_file(const FlagSpace& space, const Configuration& config, const std::string& label) {
  std::ostringstream out;
  out << "# " << label << '\n';
  out << "args: " << render_command_line(space, config) << '\n';
  out << "base_level: " << config.base_level() << '\n';
  out << "bitstring: " << config.bitstring() << '\n';
  return out.str();
}

std::string stats_text(const EvalStats& s) {
  std::ostringstream out;
  out << "evaluations=" << s.evaluations << " executions=" << s.executions << " cache_hits=" << s.cache_hits;
  return out.str();
}

void finish(Session& s, const fs::path& dir, const std::string& summary, std::ostream& out) {
  write_text_file(dir / "summary.txt", summary + "\n");
  s.log->line("done " + summary);
  out << summary << '\n';
}

std::string safe_name(const std::string& name) {
  std::string out = name;
  for (auto& ch : out)
    if (ch == '/' || ch == ' ' || ch == '\t') ch = '_';
  return out;
}

int cmd_ric(const GlobalOptions& g, std::optional<std::size_t> n_override, std::ostream& out) {
  auto c = load_campaign(g);
  if (n_override) c.n_configs = *n_override;
  if (c.n_configs < 1) throw ParseError("n_configs must be >= 1");
  auto s = open_session("ric", c, g, json{{"seed", c.seed}, {"n_configs", c.n_configs}});

  auto trace = run_ric(*c.space, c.suite, *s.checkpoint, c.n_configs, c.seed);
  write_text_file(c.output_dir / "trace.tsv", format_trace(trace));

  auto reference = reference_from_traces(std::span(&trace, 1));
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& bench : c.suite.benchmarks) {
    try {
      auto best = best_known(std::span(&trace, 1), bench.name);
      write_text_file(c.output_dir / ("final." + safe_name(bench.name) + ".cfg"),
                      config_file(*c.space, best.config, "ric best for " + bench.name + " at configuration " +
                                                             std::to_string(best.sequence)));
      if (reference.contains(bench.name)) {
        sum += *best.measurement.time / reference.at(bench.name);
        ++n;
      }
    } catch (const Error&) {
    }
  }
  std::string summary = "ric " + stats_text(s.checkpoint->stats());
  if (n > 0) summary += " best_ratio=" + format_double(sum / static_cast<double>(n));
  finish(s, c.output_dir, summary, out);
  return kSuccess;
}

int cmd_ce(const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  auto c = load_campaign(g);
  auto s = open_session("ce", c, g, json::object());
  int status = kSuccess;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& bench : c.suite.benchmarks) {
    try {
      auto result = run_ce(*c.space, bench, *s.checkpoint, s.hooks());
      auto name = safe_name(bench.name);
      write_text_file(c.output_dir / ("trace." + name + ".tsv"), format_trace(result.trace));
      write_text_file(c.output_dir / ("final." + name + ".cfg"),
                      config_file(*c.space, result.config, "ce final for " + bench.name));
      sum += result.time / result.accepted_times.front();
      ++n;
    } catch (const CampaignError& e) {
      err << "ce: " << e.what() << '\n';
      s.log->line(std::string("campaign error: ") + e.what());
      status = kCampaignFailure;
    }
  }
  std::string summary = "ce " + stats_text(s.checkpoint->stats());
  if (n > 0) summary += " final_ratio=" + format_double(sum / static_cast<double>(n));
  finish(s, c.output_dir, summary, out);
  return status;
}

SuiteCEParams suite_params(const Campaign& c) {
  SuiteCEParams p;
  p.threshold_percent = c.threshold_t;
  p.aggregate = c.aggregate;
  return p;
}

int cmd_suite_ce(const GlobalOptions& g, std::optional<double> t_override, std::optional<std::string> agg_override,
                 std::ostream& out) {
  auto c = load_campaign(g);
  if (t_override) c.threshold_t = *t_override;
  if (agg_override) c.aggregate = parse_aggregate(*agg_override);
  if (!(c.threshold_t >= 0)) throw ParseError("threshold must be >= 0");
  auto s = open_session("suite-ce", c, g,
                        json{{"threshold_t", c.threshold_t}, {"aggregate", std::string(to_string(c.aggregate))}});

  auto result = run_suite_ce(*c.space, c.suite, *s.checkpoint, suite_params(c), s.hooks());
  write_text_file(c.output_dir / "trace.tsv", format_trace(result.trace));
  write_text_file(c.output_dir / "final.cfg",
                  config_file(*c.space, result.config, "suite-ce t=" + format_double(c.threshold_t)));
  std::string summary = "suite-ce " + stats_text(s.checkpoint->stats()) +
                        " final_aggregate=" + format_double(result.accepted_objectives.back());
  finish(s, c.output_dir, summary, out);
  return kSuccess;
}

int cmd_oracle(const GlobalOptions& g, std::size_t max_flags, std::optional<double> t_override, std::ostream& out) {
  auto c = load_campaign(g);
  if (c.mode != Mode::synthetic) throw ParseError("oracle needs a synthetic model");
  if (t_override) c.threshold_t = *t_override;
  if (c.space->size() > max_flags)
    throw ParseError("oracle: " + std::to_string(c.space->size()) + " flags exceed the cap of " +
                     std::to_string(max_flags));

  std::ostringstream table;
  table << "# oracle threshold_t=" << format_double(c.threshold_t) << " aggregate=" << to_string(c.aggregate) << '\n';
  table << "scope\tbenchmark\tbase_level\tvalue\tbitstring\targs\n";
  auto row = [&](const std::string& scope, const std::string& bench, const Configuration& config, double value) {
    table << scope << '\t' << bench << '\t' << config.base_level() << '\t' << format_double(value) << '\t'
          << config.bitstring() << '\t' << render_command_line(*c.space, config) << '\n';
  };
  for (const auto& bench : c.suite.benchmarks) {
    auto opt = brute_force_optimum(*c.space, *c.model, bench.name, max_flags);
    for (const auto& e : opt.per_level) row("level", bench.name, e.config, e.time);
    row("best", bench.name, opt.best.config, opt.best.time);
  }
  auto names = c.suite.names();
  auto suite_opt = suite_constrained_optimum(*c.space, *c.model, names, stock_baseline(*c.space), c.threshold_t,
                                             c.aggregate, max_flags);
  row("suite", "*", suite_opt.config, suite_opt.objective);

  fs::create_directories(c.output_dir);
  write_text_file(c.output_dir / "oracle.tsv", table.str());
  out << "oracle suite_optimum=" << format_double(suite_opt.objective) << '\n';
  return kSuccess;
}

int cmd_report(const GlobalOptions& g, const std::vector<std::string>& trace_paths, const std::string& reference_path,
               std::ostream& out) {
  if (trace_paths.empty()) throw ParseError("report needs at least one --trace");
  std::vector<CampaignTrace> traces;
  for (const auto& p : trace_paths) traces.push_back(load_trace(p));
  auto reference = reference_path.empty() ? reference_from_traces(traces) : load_reference(reference_path);
  for (const auto& t : traces)
    for (const auto& name : t.benchmarks())
      if (!reference.contains(name)) throw ParseError("report: no reference time for '" + name + "'");
  if (reference.empty()) throw ParseError("report: no reference times");

  fs::path dir = g.out.empty() ? fs::path("report") : fs::path(g.out);
  auto table = compare_to_baseline(traces, reference);

  std::map<std::string, std::vector<CampaignTrace>> by_method;
  for (const auto& t : traces) by_method[t.method.empty() ? "trace" : t.method].push_back(t);

  std::ostringstream report;
  report << "# best known per benchmark; ratio = best time / reference time (unfloored)\n";
  report << "benchmark\tbest_ratio\tmethod\tsequence\tbase_level\tbitstring\n";
  double floored_sum = 0.0;
  for (const auto& r : table.rows) {
    if (r.best_ratio) {
      report << r.benchmark << '\t' << format_double(*r.best_ratio) << '\t' << r.method << '\t' << r.sequence << '\t'
             << r.best_config->base_level() << '\t' << r.best_config->bitstring() << '\n';
      floored_sum += std::min(1.0, *r.best_ratio);
    } else {
      report << r.benchmark << "\t-\t-\t-\t-\t-\n";
      floored_sum += 1.0;
    }
  }
  report << "mean_unfloored\t" << format_double(table.mean_ratio) << "\t-\t-\t-\t-\n";
  report << "mean_floored\t" << format_double(floored_sum / static_cast<double>(table.rows.size())) << "\t-\t-\t-\t-\n";

  fs::create_directories(dir);
  write_text_file(dir / "report.tsv", report.str());
  for (const auto& [method, group] : by_method) {
    auto series = floored_best_so_far(group, reference);
    std::ostringstream s;
    s << "# " << method << ": " << series.description << '\n';
    s << "configs_tested\tvalue\n";
    for (const auto& [x, v] : series.points) s << x << '\t' << format_double(v) << '\n';
    write_text_file(dir / ("series." + safe_name(method) + ".tsv"), s.str());
  }
  out << "report mean_unfloored=" << format_double(table.mean_ratio) << '\n';
  return kSuccess;
}

int cmd_xval(const GlobalOptions& g, std::optional<std::size_t> k_override, std::optional<double> t_override,
             std::ostream& out) {
  auto c = load_campaign(g);
  if (k_override) c.k = *k_override;
  if (t_override) c.threshold_t = *t_override;
  auto names = c.suite.names();
  FoldPlan plan;
  try {
    plan = make_folds(names, c.k, c.seed);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("xval: ") + e.what());
  }
  auto s = open_session("xval", c, g,
                        json{{"seed", c.seed}, {"k", c.k}, {"threshold_t", c.threshold_t},
                             {"aggregate", std::string(to_string(c.aggregate))}});
  auto result = run_xval(*c.space, c.suite, *s.checkpoint, suite_params(c), plan, s.hooks());

  std::ostringstream table;
  table << "# " << c.k << "-fold cross-validation, threshold_t=" << format_double(c.threshold_t) << '\n';
  table << "fold\tprogram\treference\ttime\tratio\n";
  int status = kSuccess;
  for (const auto& fr : result.folds) {
    auto tag = "fold-" + std::to_string(fr.fold);
    if (!fr.error.empty()) {
      table << "# " << tag << " error: " << fr.error << '\n';
      status = kCampaignFailure;
    }
    if (fr.trained) {
      write_text_file(c.output_dir / (tag + ".trace.tsv"), format_trace(fr.trace));
      write_text_file(c.output_dir / (tag + ".cfg"), config_file(*c.space, *fr.trained, tag));
    }
    for (const auto& t : fr.tests)
      table << fr.fold << '\t' << t.program << '\t' << format_double(t.reference) << '\t'
            << (t.time ? format_double(*t.time) : "-") << '\t' << (t.ratio ? format_double(*t.ratio) : "-") << '\n';
  }
  table << "mean\t*\t-\t-\t" << format_double(result.mean_ratio) << '\n';
  write_text_file(c.output_dir / "xval.tsv", table.str());
  finish(s, c.output_dir, "xval " + stats_text(s.checkpoint->stats()) + " mean_ratio=" + format_double(result.mean_ratio),
         out);
  return status;
}

int cmd_predict(const GlobalOptions& g, const std::string& features_path, const std::vector<std::string>& table_paths,
                const std::string& query, std::string flag_space_path, bool raw, std::ostream& out) {
  if (flag_space_path.empty()) {
    if (g.config.empty()) throw ParseError("predict-1nn needs --flag-space or --config");
    auto doc = json::parse(read_text_file(g.config), nullptr, false);
    if (doc.is_discarded() || !doc.contains("flag_space")) throw ParseError("campaign config has no flag_space");
    auto base = fs::path(g.config).parent_path();
    flag_space_path = resolve(base.empty() ? fs::path(".") : base, doc["flag_space"].get<std::string>()).string();
  }
  auto space = load_flag_space(flag_space_path);
  auto features = load_feature_table(features_path);
  std::vector<CampaignTrace> traces;
  for (const auto& p : table_paths) traces.push_back(load_trace(p));

  std::optional<FeatureVector> q;
  std::vector<TrainingProgram> training;
  for (const auto& fv : features) {
    if (fv.program == query) {
      q = fv;
      continue;
    }
    auto table = performance_table(traces, fv.program);
    if (!table.empty()) training.push_back({fv, std::move(table)});
  }
  if (!q) throw ParseError("no feature vector for '" + query + "'");
  if (training.empty()) throw ParseError("no training program has both features and measurements");

  Prediction p;
  try {
    p = predict_1nn(*q, training, !raw);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("predict-1nn: ") + e.what());
  }
  validate(space, p.config);
  fs::path dir = g.out.empty() ? fs::path(".") : fs::path(g.out);
  fs::create_directories(dir);
  write_text_file(dir / ("predict." + safe_name(query) + ".cfg"),
                  config_file(space, p.config, "1nn query=" + query + " neighbor=" + p.neighbor +
                                                   " distance=" + format_double(p.distance)));
  out << "predict-1nn query=" << query << " neighbor=" << p.neighbor << '\n';
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compiler flag autotuning campaigns"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::uint64_t seed = 0;
  std::size_t stop_after = 0;
  app.add_option("--config", g.config, "Campaign configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides the configuration)");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--resume", g.resume, "Checkpoint to resume from");
  auto* stop_opt = app.add_option("--stop-after", stop_after, "Stop after this many fresh evaluations")->group("");

  auto* ric = app.add_subcommand("ric", "Random iterative compilation");
  std::size_t n_configs = 0;
  auto* n_opt = ric->add_option("--n-configs", n_configs, "Number of sampled configurations");

  auto* ce = app.add_subcommand("ce", "Combined elimination per benchmark");

  auto* suite_ce = app.add_subcommand("suite-ce", "Suite-wide combined elimination");
  double threshold = 0;
  std::string agg;
  auto* t_opt = suite_ce->add_option("--threshold", threshold, "Per-benchmark slowdown threshold in percent");
  auto* agg_opt = suite_ce->add_option("--aggregate", agg, "mean or geomean");

  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum of a synthetic model");
  std::size_t max_flags = kDefaultOracleCap;
  double oracle_t = 0;
  oracle->add_option("--max-flags", max_flags, "Refuse spaces with more flags");
  auto* oracle_t_opt = oracle->add_option("--threshold", oracle_t, "Threshold for the suite-constrained optimum");

  auto* report = app.add_subcommand("report", "Summaries and floored series from traces");
  std::vector<std::string> traces;
  std::string reference;
  report->add_option("--trace", traces, "Trace file (repeatable)")->required();
  report->add_option("--reference", reference, "Reference times (benchmark<TAB>time)");

  auto* xval = app.add_subcommand("xval", "k-fold cross-validation of suite-wide CE");
  std::size_t k = 0;
  double xval_t = 0;
  auto* k_opt = xval->add_option("--k", k, "Number of folds");
  auto* xval_t_opt = xval->add_option("--threshold", xval_t, "Threshold in percent");

  auto* predict = app.add_subcommand("predict-1nn", "Nearest-neighbor configuration prediction");
  std::string features, query, flag_space;
  std::vector<std::string> tables;
  bool raw = false;
  predict->add_option("--features", features, "Feature table")->required();
  predict->add_option("--tables", tables, "Trace files holding training measurements")->required();
  predict->add_option("--query", query, "Program to predict for")->required();
  predict->add_option("--flag-space", flag_space, "Flag space file");
  predict->add_flag("--raw", raw, "Skip feature normalization");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsageError;
  }
  if (*seed_opt) g.seed = seed;
  if (*stop_opt) g.stop_after = stop_after;

  try {
    if (*ric) return cmd_ric(g, *n_opt ? std::optional(n_configs) : std::nullopt, out);
    if (*ce) return cmd_ce(g, out, err);
    if (*suite_ce)
      return cmd_suite_ce(g, *t_opt ? std::optional(threshold) : std::nullopt,
                          *agg_opt ? std::optional(agg) : std::nullopt, out);
    if (*oracle) return cmd_oracle(g, max_flags, *oracle_t_opt ? std::optional(oracle_t) : std::nullopt, out);
    if (*report) return cmd_report(g, traces, reference, out);
    if (*xval)
      return cmd_xval(g, *k_opt ? std::optional(k) : std::nullopt, *xval_t_opt ? std::optional(xval_t) : std::nullopt,
                      out);
    if (*predict) return cmd_predict(g, features, tables, query, flag_space, raw, out);
  } catch (const Interrupted& e) {
    err << "interrupted: " << e.what() << "; checkpoint kept\n";
    return kInterrupted;
  } catch (const CampaignError& e) {
    err << "campaign failed: " << e.what() << '\n';
    return kCampaignFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kCampaignFailure;
  }
  return kUsageError;
}

}  // namespace flagtune::cli
