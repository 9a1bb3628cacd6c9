#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "noisy_eda/cli.hpp"

namespace cli = noisy_eda::cli;

namespace {

struct RunFlags {
  std::string config;
  std::optional<std::string> algorithm, problem, k, out;
  std::optional<int> n, w, r, trials;
  std::optional<std::int64_t> d, budget;
  std::optional<std::uint64_t> seed;
  std::optional<double> sigma2;
  bool plot = false;
};

cli::json flag_overrides(const RunFlags& f) {
  cli::json o = cli::json::object();
  if (f.algorithm) o["algorithm"] = *f.algorithm;
  if (f.problem) o["problem"] = *f.problem;
  if (f.k) o["k"] = *f.k;
  if (f.n) o["n"] = *f.n;
  if (f.w) o["w"] = *f.w;
  if (f.r) o["r"] = *f.r;
  if (f.d) o["d"] = *f.d;
  if (f.budget) o["budget"] = *f.budget;
  if (f.trials) o["trials"] = *f.trials;
  if (f.seed) o["seed"] = *f.seed;
  if (f.sigma2) o["sigma2"] = *f.sigma2;
  if (f.out) o["out_dir"] = *f.out;
  return o;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact genetic algorithm variants on noisy binary benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cli::kVersion));

  RunFlags rf;
  auto* run = app.add_subcommand("run", "Run repeated trials of one or more configured experiments");
  run->add_option("--config", rf.config, "JSON config file");
  run->add_option("--algorithm", rf.algorithm, "cga | mscga | swcga | rmhc");
  run->add_option("--problem", rf.problem, "onemax | pmax");
  run->add_option("--k", rf.k, "virtual population size, e.g. 500, 5d, d/2, theory");
  run->add_option("--n", rf.n, "MScGA samples per iteration");
  run->add_option("--w", rf.w, "SWcGA window width");
  run->add_option("--r", rf.r, "RMHC resampling number");
  run->add_option("--d", rf.d, "problem dimension");
  run->add_option("--budget", rf.budget, "fitness evaluations per trial");
  run->add_option("--trials", rf.trials, "number of trials");
  run->add_option("--seed", rf.seed, "master seed");
  run->add_option("--sigma2", rf.sigma2, "noise variance for onemax");
  run->add_option("--out", rf.out, "output directory");
  run->add_flag("--plot", rf.plot, "also render curve.svg");

  cli::ReproduceRequest rq;
  std::string table;
  auto* reproduce = app.add_subcommand("reproduce", "Run the full parameter grid of a result table");
  reproduce->add_option("table", table, "onemax | pmax")->required()->check(CLI::IsMember({"onemax", "pmax"}));
  reproduce->add_option("--trials", rq.trials, "trials per cell")->capture_default_str();
  reproduce->add_option("--seed", rq.seed, "master seed")->capture_default_str();
  reproduce->add_option("--d", rq.d, "problem dimension")->capture_default_str();
  reproduce->add_option("--budget", rq.budget, "fitness evaluations per trial")->capture_default_str();
  reproduce->add_option("--sigma2", rq.sigma2, "noise variance for onemax")->capture_default_str();
  reproduce->add_option("--out", rq.out_dir, "output directory")->capture_default_str();

  std::vector<std::filesystem::path> curve_files;
  std::filesystem::path plot_out = "chart.svg";
  std::string title;
  auto* plot = app.add_subcommand("plot", "Render curve CSV files as an SVG line chart");
  plot->add_option("curves", curve_files, "curve.csv files")->required();
  plot->add_option("--out", plot_out, "output SVG path")->capture_default_str();
  plot->add_option("--title", title, "chart title");

  CLI11_PARSE(app, argc, argv);

  try {
    const unsigned threads = cli::threads_from_env();
    if (*run) {
      const cli::json doc = rf.config.empty() ? cli::json::object() : cli::load_json_file(rf.config);
      const auto req = cli::parse_config(doc, flag_overrides(rf));
      const auto results = cli::cmd_run(req, threads, rf.plot);
      for (std::size_t i = 0; i < results.size(); ++i)
        std::cout << cli::summary_row(req.experiments[i], results[i]);
      std::cout << "wrote " << req.out_dir.string() << '\n';
    } else if (*reproduce) {
      rq.table = noisy_eda::parse_problem_kind(table);
      const auto rows = cli::cmd_reproduce(rq, threads);
      std::cout << cli::table_csv(rq.table, rows);
      std::cout << "wrote " << rq.out_dir.string() << '\n';
    } else if (*plot) {
      cli::cmd_plot(curve_files, plot_out, title);
      std::cout << "wrote " << plot_out.string() << '\n';
    }
  } catch (const cli::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
