#include "saddleflow/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>

#include "saddleflow/csv.hpp"
#include "saddleflow/diagnostics.hpp"
#include "saddleflow/flows.hpp"
#include "saddleflow/svg.hpp"

namespace saddleflow {

namespace fs = std::filesystem;
using nlohmann::json;

std::string output_root() {
  if (const char* env = std::getenv("SADDLEFLOW_OUT"); env != nullptr && *env != '\0')
    return env;
  return "runs";
}

std::string resolve_out_dir(const std::string& config_path, const std::string& cli_out,
                            const std::string& config_out) {
  std::string pick = !cli_out.empty() ? cli_out
                    : !config_out.empty() ? config_out
                                          : fs::path(config_path).stem().string();
  fs::path p(pick);
  if (p.is_absolute()) return p.string();
  return (fs::path(output_root()) / p).string();
}

namespace {

RunRecord execute(const ExperimentConfig& cfg, const SaddleProblem& problem,
                  const RngStream& rng) {
  switch (cfg.method) {
    case MethodId::sssgd:
      return run_sssgd(problem, *cfg.alpha, cfg.z0, cfg.max_iter, rng, cfg.log_policy);
    case MethodId::simgd_o:
      return run_simgd_o(problem, cfg.alpha->a0, cfg.beta->a0, cfg.z0, cfg.max_iter,
                         cfg.log_policy);
    case MethodId::simgd_os:
      return run_simgd_os(problem, *cfg.alpha, *cfg.beta, cfg.z0, cfg.max_iter, rng,
                          cfg.log_policy);
    case MethodId::simgd_a:
      return run_simgd_a(problem, cfg.anchor->p, cfg.anchor->gamma, cfg.z0, cfg.max_iter,
                         cfg.log_policy);
    case MethodId::sssgd_a:
      return run_sssgd_a(problem, cfg.anchor->p, cfg.anchor->gamma, cfg.anchor->epsilon, cfg.z0,
                         cfg.max_iter, rng, cfg.log_policy);
  }
  throw std::logic_error("unreachable method");
}

std::vector<RunRecord> run_seeds(const ExperimentConfig& cfg, const SaddleProblem& problem,
                                 int jobs) {
  const int count = cfg.seeds.count;
  std::vector<RunRecord> records(count);
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto worker = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        records[i] = execute(cfg, problem,
                             RngStream{cfg.seeds.base_seed, static_cast<std::uint64_t>(i)});
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int n_threads = std::clamp(jobs, 1, count);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

std::vector<std::string> coordinate_names(const SaddleProblem& problem) {
  std::vector<std::string> names;
  for (Index i = 0; i < problem.primal_dim(); ++i) names.push_back("x" + std::to_string(i));
  for (Index i = 0; i < problem.dual_dim(); ++i) names.push_back("u" + std::to_string(i));
  return names;
}

CsvTable record_table(const RunRecord& rec, const SaddleProblem& problem) {
  CsvTable t;
  t.header.push_back("k");
  const auto coords = coordinate_names(problem);
  t.header.insert(t.header.end(), coords.begin(), coords.end());
  t.header.insert(t.header.end(), {"dist2_ref", "dist2_zer", "gnorm2", "min_gnorm2"});

  const std::size_t rows = rec.rows();
  t.columns.assign(t.header.size(), std::vector<double>(rows));
  const bool have_zero_set = problem.zero_set().has_value();
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t c = 0;
    t.columns[c++][r] = static_cast<double>(rec.steps[r]);
    for (Index i = 0; i < problem.dim(); ++i) t.columns[c++][r] = rec.iterates[r][i];
    t.columns[c++][r] = rec.dist2_ref[r];
    t.columns[c++][r] = have_zero_set
                            ? (rec.iterates[r] - problem.zero_set()->project(rec.iterates[r]))
                                  .squaredNorm()
                            : std::numeric_limits<double>::quiet_NaN();
    t.columns[c++][r] = rec.grad_norm2[r];
    t.columns[c++][r] = rec.min_grad_norm2[r];
  }
  return t;
}

std::string seed_file_name(int seed) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "seed_%03d.csv", seed);
  return buf;
}

void emit_cell_svg(const fs::path& dir, const std::string& title,
                   const std::vector<RunRecord>& records, const SeedAggregate* agg) {
  std::vector<LogLogSeries> series;
  std::vector<LogLogBand> bands;
  if (agg != nullptr) {
    LogLogSeries mean{"mean", "#1f6fb2", {}, {}};
    LogLogBand band;
    for (std::size_t i = 0; i < agg->steps.size(); ++i) {
      if (agg->steps[i] < 1) continue;
      const double k = static_cast<double>(agg->steps[i]);
      mean.x.push_back(k);
      mean.y.push_back(agg->mean[i]);
      band.x.push_back(k);
      band.lo.push_back(agg->mean[i] - agg->stderr_[i]);
      band.hi.push_back(agg->mean[i] + agg->stderr_[i]);
    }
    series.push_back(std::move(mean));
    bands.push_back(std::move(band));
  } else {
    LogLogSeries line{"dist2", "#1f6fb2", {}, {}};
    const RunRecord& rec = records.front();
    for (std::size_t i = 0; i < rec.rows(); ++i) {
      if (rec.steps[i] < 1) continue;
      line.x.push_back(static_cast<double>(rec.steps[i]));
      line.y.push_back(rec.dist2_ref[i]);
    }
    series.push_back(std::move(line));
  }
  write_loglog_svg((dir / "plot.svg").string(), title, "k", "|z_k - z*|^2", series, bands);
}

void write_resolved_config(const json& resolved, const fs::path& dir) {
  std::ofstream out(dir / "config.json", std::ios::binary);
  if (!out.good()) throw std::runtime_error("cannot write " + (dir / "config.json").string());
  out << resolved.dump(2) << '\n';
}

} // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, int jobs) {
  RunOutcome outcome;
  outcome.out_dir = out_dir;
  fs::create_directories(out_dir);
  write_resolved_config(cfg.resolved(), out_dir);

  std::vector<SweepCell> cells = cfg.sweep;
  if (cells.empty()) cells.push_back(SweepCell{});

  for (const auto& cell : cells) {
    const ExperimentConfig cell_cfg = cfg.with_cell(cell);
    const SaddleProblem problem = cell_cfg.make_problem();
    detail::require(cfg.z0.size() == problem.dim(), "config: z0 dimension mismatch");
    const fs::path cell_dir = cell.label.empty() ? fs::path(out_dir)
                                                 : fs::path(out_dir) / cell.label;
    fs::create_directories(cell_dir);

    const std::vector<RunRecord> records = run_seeds(cell_cfg, problem, jobs);
    for (const auto& rec : records)
      if (rec.diverged()) ++outcome.diverged_seeds;

    if (cfg.emit != Emit::svg) {
      for (int s = 0; s < cell_cfg.seeds.count; ++s)
        write_csv(record_table(records[s], problem), (cell_dir / seed_file_name(s)).string());
    }

    std::optional<SeedAggregate> agg;
    const bool grids_match =
        std::all_of(records.begin(), records.end(),
                    [&](const RunRecord& r) { return r.steps == records.front().steps; });
    if (records.size() >= 2 && grids_match) {
      agg = aggregate_seeds(records, "dist2_ref");
      if (cfg.emit != Emit::svg) {
        CsvTable t;
        t.header = {"k", "mean", "stderr", "median"};
        t.columns.resize(4);
        for (std::size_t i = 0; i < agg->steps.size(); ++i) {
          t.columns[0].push_back(static_cast<double>(agg->steps[i]));
          t.columns[1].push_back(agg->mean[i]);
          t.columns[2].push_back(agg->stderr_[i]);
          t.columns[3].push_back(agg->median[i]);
        }
        write_csv(t, (cell_dir / "aggregate.csv").string());
      }
    }
    if (cfg.emit != Emit::csv) {
      const std::string title = method_name(cfg.method) +
                                (cell.label.empty() ? std::string() : " " + cell.label);
      emit_cell_svg(cell_dir, title, records, agg ? &*agg : nullptr);
    }
  }

  outcome.exit_code = outcome.diverged_seeds > 0 ? kExitDiverged : kExitOk;
  return outcome;
}

int run_phase(const PhaseConfig& cfg, const std::string& out_dir) {
  const SaddleProblem problem = cfg.make_problem();
  fs::create_directories(out_dir);
  write_resolved_config(cfg.resolved(), out_dir);

  for (const auto& f : cfg.flows) {
    FlowTrace trace;
    if (f.kind == "plain") {
      trace = integrate_plain(problem, f.z0, f.h, f.horizon);
    } else if (f.kind == "optimistic") {
      trace = integrate_optimistic(problem, f.alpha, f.beta, f.z0, f.h, f.horizon);
    } else {
      trace = integrate_anchored(problem, f.gamma, f.z0, f.h, f.horizon, f.t0);
    }

    if (cfg.emit != Emit::svg) {
      CsvTable t;
      t.header.push_back("t");
      const auto coords = coordinate_names(problem);
      t.header.insert(t.header.end(), coords.begin(), coords.end());
      t.header.insert(t.header.end(), {"gnorm2", "dist2_ref"});
      const bool anchored = !trace.lyapunov.empty();
      if (anchored) t.header.push_back("V");
      t.columns.assign(t.header.size(), std::vector<double>(trace.rows()));
      for (std::size_t r = 0; r < trace.rows(); ++r) {
        std::size_t c = 0;
        t.columns[c++][r] = trace.t[r];
        for (Index i = 0; i < problem.dim(); ++i) t.columns[c++][r] = trace.state[r][i];
        t.columns[c++][r] = trace.grad_norm2[r];
        t.columns[c++][r] = trace.dist2_ref[r];
        if (anchored) t.columns[c++][r] = trace.lyapunov[r];
      }
      write_csv(t, (fs::path(out_dir) / (f.label + ".csv")).string());
    }
    if (cfg.emit != Emit::csv) {
      std::vector<double> xs(trace.rows()), us(trace.rows());
      const Index u_index = problem.primal_dim();
      for (std::size_t r = 0; r < trace.rows(); ++r) {
        xs[r] = trace.state[r][0];
        us[r] = trace.state[r][u_index];
      }
      write_phase_svg((fs::path(out_dir) / (f.label + ".svg")).string(),
                      problem.id() + " " + f.label, xs, us);
    }
  }
  return kExitOk;
}

namespace {

struct CellFiles {
  std::string label;
  fs::path dir;
  std::vector<fs::path> seed_csvs;
};

std::vector<CellFiles> discover_cells(const fs::path& run_dir, const ExperimentConfig& cfg) {
  std::vector<CellFiles> cells;
  const auto collect = [](const fs::path& dir) {
    std::vector<fs::path> files;
    if (fs::exists(dir))
      for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("seed_", 0) == 0 && e.path().extension() == ".csv")
          files.push_back(e.path());
      }
    std::sort(files.begin(), files.end());
    return files;
  };
  if (cfg.sweep.empty()) {
    cells.push_back({"", run_dir, collect(run_dir)});
  } else {
    for (const auto& c : cfg.sweep)
      cells.push_back({c.label, run_dir / c.label, collect(run_dir / c.label)});
  }
  return cells;
}

// Rebuild the minimum of a RunRecord that the diagnostics consume.
RunRecord record_from_csv(const CsvTable& t, const SaddleProblem& problem) {
  RunRecord rec;
  const auto& ks = csv_column(t, "k");
  rec.steps.reserve(ks.size());
  for (double k : ks) rec.steps.push_back(static_cast<std::int64_t>(k));
  rec.dist2_ref = csv_column(t, "dist2_ref");
  rec.grad_norm2 = csv_column(t, "gnorm2");
  rec.min_grad_norm2 = csv_column(t, "min_gnorm2");
  if (!rec.steps.empty()) {
    Vec z0(problem.dim());
    const auto names = coordinate_names(problem);
    for (Index i = 0; i < problem.dim(); ++i) z0[i] = csv_column(t, names[i]).front();
    rec.iterates.push_back(std::move(z0));
  }
  return rec;
}

json fit_or_note(const std::vector<std::int64_t>& ks, const std::vector<double>& vals,
                 std::int64_t lo, std::int64_t hi) {
  std::vector<std::pair<std::int64_t, double>> series;
  for (std::size_t i = 0; i < ks.size(); ++i)
    if (vals[i] > 0.0 && std::isfinite(vals[i])) series.emplace_back(ks[i], vals[i]);
  try {
    return to_json(fit_rate(series, lo, hi));
  } catch (const std::exception& e) {
    return {{"skipped", e.what()}};
  }
}

} // namespace

int run_report(const std::string& run_dir, const std::string& checks) {
  const fs::path dir(run_dir);
  if (!fs::exists(dir / "config.json")) {
    std::cerr << "report: " << run_dir << " does not contain config.json\n";
    return kExitConfigError;
  }
  json report;
  ExperimentConfig cfg;
  try {
    const json raw = load_config_json((dir / "config.json").string());
    if (raw.value("command", "run") != "run") {
      std::cerr << "report: " << run_dir << " is not a run directory\n";
      return kExitConfigError;
    }
    cfg = parse_run_config(raw);
  } catch (const std::exception& e) {
    std::cerr << "report: " << e.what() << '\n';
    return kExitConfigError;
  }

  const bool want_rates = checks == "all" || checks == "rates";
  const bool want_bounds = checks == "all" || checks == "bounds";
  const bool want_lemmas = checks == "all" || checks == "lemmas";
  if (!want_rates && !want_bounds && !want_lemmas) {
    std::cerr << "report: unknown checks selector '" << checks << "'\n";
    return kExitConfigError;
  }

  std::vector<std::string> summary;
  try {
    if (want_rates || want_bounds) {
      const auto cells = discover_cells(dir, cfg);
      for (const auto& cell : cells)
        if (cell.seed_csvs.empty())
          throw std::runtime_error("no per-seed CSV files in " + cell.dir.string());

      for (const auto& cell : cells) {
        const ExperimentConfig cell_cfg =
            cell.label.empty()
                ? cfg
                : cfg.with_cell(*std::find_if(cfg.sweep.begin(), cfg.sweep.end(),
                                              [&](const SweepCell& c) {
                                                return c.label == cell.label;
                                              }));
        const SaddleProblem problem = cell_cfg.make_problem();
        std::vector<RunRecord> records;
        for (const auto& f : cell.seed_csvs)
          records.push_back(record_from_csv(read_csv(f.string()), problem));

        const std::string key = cell.label.empty() ? "run" : cell.label;
        if (want_rates) {
          // mean across seeds per checkpoint (grids match by construction)
          std::vector<double> mean_g(records.front().rows(), 0.0);
          std::vector<double> mean_d(records.front().rows(), 0.0);
          for (const auto& r : records)
            for (std::size_t i = 0; i < mean_g.size(); ++i) {
              mean_g[i] += r.grad_norm2[i] / static_cast<double>(records.size());
              mean_d[i] += r.dist2_ref[i] / static_cast<double>(records.size());
            }
          const std::int64_t hi = records.front().steps.back();
          // transients dominate the first 1e2 iterations; fit beyond them
          const std::int64_t lo = std::min<std::int64_t>(100, std::max<std::int64_t>(1, hi / 2));
          report["rates"][key]["grad_norm2"] =
              fit_or_note(records.front().steps, mean_g, lo, hi);
          report["rates"][key]["dist2_ref"] =
              fit_or_note(records.front().steps, mean_d, lo, hi);
          const auto& fit = report["rates"][key]["grad_norm2"];
          if (fit.contains("slope"))
            summary.push_back("rates " + key + ": gnorm2 slope " +
                              format_double(fit["slope"].get<double>()));
        }
        if (want_bounds) {
          if (cfg.method == MethodId::simgd_o) {
            std::optional<Theorem2Report> worst_rep;
            for (const auto& r : records) {
              const auto rep =
                  check_theorem2_bound(r, problem, cell_cfg.alpha->a0, cell_cfg.beta->a0);
              if (!worst_rep || rep.worst_ratio > worst_rep->worst_ratio) worst_rep = rep;
            }
            report["bounds"][key] = to_json(*worst_rep);
            summary.push_back("bounds " + key + ": worst_ratio " +
                              format_double(worst_rep->worst_ratio) +
                              (worst_rep->holds ? " (holds)" : " (VIOLATED)"));
          } else {
            report["bounds"][key] = {{"skipped", "bound comparator applies to simgd-o runs"}};
          }
        }
      }
    }
    if (want_lemmas) {
      const LemmaReport lemmas = check_appendix_lemmas();
      report["lemmas"] = to_json(lemmas);
      summary.push_back("lemmas: " + std::to_string(lemmas.checks) + " checks, " +
                        std::to_string(lemmas.violations.size()) + " violations");
    }
  } catch (const std::exception& e) {
    std::cerr << "report: " << e.what() << '\n';
    return kExitConfigError;
  }

  {
    std::ofstream out(dir / "report.json", std::ios::binary);
    out << report.dump(2) << '\n';
  }
  {
    std::ofstream out(dir / "summary.txt", std::ios::binary);
    for (const auto& line : summary) out << line << '\n';
  }
  for (const auto& line : summary) std::cout << line << '\n';
  return kExitOk;
}

int cmd_run(const std::string& config_path, int jobs, const std::string& cli_out) {
  try {
    const json j = load_config_json(config_path);
    const ExperimentConfig cfg = parse_run_config(j);
    const std::string out = resolve_out_dir(config_path, cli_out, cfg.out_dir);
    const RunOutcome outcome = run_experiment(cfg, out, jobs);
    std::cout << "wrote " << outcome.out_dir;
    if (outcome.diverged_seeds > 0)
      std::cout << " (" << outcome.diverged_seeds << " diverged seed(s))";
    std::cout << '\n';
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "run: " << e.what() << '\n';
    return kExitConfigError;
  }
}

int cmd_phase(const std::string& config_path, const std::string& cli_out) {
  try {
    const json j = load_config_json(config_path);
    const PhaseConfig cfg = parse_phase_config(j);
    const std::string out = resolve_out_dir(config_path, cli_out, cfg.out_dir);
    const int code = run_phase(cfg, out);
    std::cout << "wrote " << out << '\n';
    return code;
  } catch (const std::exception& e) {
    std::cerr << "phase: " << e.what() << '\n';
    return kExitConfigError;
  }
}

int cmd_report(const std::string& run_dir, const std::string& checks) {
  return run_report(run_dir, checks);
}

} // namespace saddleflow
