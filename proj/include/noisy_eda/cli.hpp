#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "harness.hpp"
#include "k_notation.hpp"
#include "optimizers.hpp"
#include "problems.hpp"

namespace noisy_eda::cli {

inline constexpr std::string_view kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Number formatting

/// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("failed to format number");
  return std::string(buf, ptr);
}

inline std::string format_fixed(double v, int decimals) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Configuration

struct RunRequest {
  std::vector<ExperimentConfig> experiments;
  std::filesystem::path out_dir = "out";
};

namespace detail {

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {"algorithm", "problem", "d",     "k",    "n",      "w",
                                                "r",         "budget",  "trials", "seed", "out_dir", "sigma2"};
  return keys;
}

template <class T>
T get_integer(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (v.is_number_integer() || v.is_number_unsigned()) {
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (!std::in_range<T>(u))
        throw ConfigError(std::string("parameter '") + key + "' is out of range");
      return static_cast<T>(u);
    }
    const auto i = v.get<std::int64_t>();
    if (!std::in_range<T>(i)) throw ConfigError(std::string("parameter '") + key + "' is out of range");
    return static_cast<T>(i);
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    T out{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return out;
  }
  throw ConfigError(std::string("parameter '") + key + "' must be an integer");
}

inline double get_real(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return out;
  }
  throw ConfigError(std::string("parameter '") + key + "' must be a number");
}

inline ExperimentConfig experiment_from_json(const json& obj) {
  if (!obj.is_object()) throw ConfigError("experiment entry must be an object");
  for (const auto& [key, _] : obj.items())
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
      throw ConfigError("unknown parameter '" + key + "'");

  // Unset keys keep the defaults: d = 100, budget 1000, 100 trials, sigma^2 = 1.
  ExperimentConfig cfg;
  if (!obj.contains("algorithm")) throw ConfigError("missing required parameter 'algorithm'");
  if (!obj.at("algorithm").is_string()) throw ConfigError("parameter 'algorithm' must be a string");
  const auto alg_name = obj.at("algorithm").get<std::string>();
  const auto alg = parse_algorithm(alg_name);
  if (!alg) throw ConfigError("parameter 'algorithm': unknown algorithm '" + alg_name + "'");
  cfg.optimizer.algorithm = *alg;

  if (obj.contains("d")) {
    const auto d = get_integer<std::int64_t>(obj, "d");
    if (d < 1) throw ConfigError("parameter 'd' must be >= 1");
    cfg.problem.d = static_cast<std::size_t>(d);
  }
  if (obj.contains("problem")) {
    const json& p = obj.at("problem");
    try {
      if (p.is_string()) {
        cfg.problem.kind = parse_problem_kind(p.get<std::string>());
      } else if (p.is_object()) {
        for (const auto& [key, _] : p.items())
          if (key != "kind" && key != "sigma2") throw ConfigError("unknown parameter 'problem." + key + "'");
        if (!p.contains("kind")) throw ConfigError("missing required parameter 'problem.kind'");
        cfg.problem.kind = parse_problem_kind(p.at("kind").get<std::string>());
        if (p.contains("sigma2")) cfg.problem.sigma2 = get_real(p, "sigma2");
      } else {
        throw ConfigError("parameter 'problem' must be a name or an object");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("parameter 'problem': ") + e.what());
    }
  }
  if (obj.contains("sigma2")) cfg.problem.sigma2 = get_real(obj, "sigma2");
  cfg.optimizer.d = cfg.problem.d;

  if (obj.contains("k")) {
    const json& k = obj.at("k");
    if (k.is_number()) {
      cfg.optimizer.k = k.get<double>();
    } else if (k.is_string()) {
      std::optional<double> theory;
      if (cfg.problem.d >= 2 && cfg.problem.sigma2 > 0)
        theory = theoretical_k(static_cast<double>(cfg.problem.d), cfg.problem.sigma2);
      try {
        cfg.optimizer.k = parse_k(k.get<std::string>(), cfg.problem.d, theory);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else {
      throw ConfigError("parameter 'k' must be a number or d-relative string such as \"5d\"");
    }
  }
  if (obj.contains("n")) cfg.optimizer.n = get_integer<int>(obj, "n");
  if (obj.contains("w")) cfg.optimizer.w = get_integer<int>(obj, "w");
  if (obj.contains("r")) cfg.optimizer.r = get_integer<int>(obj, "r");
  if (obj.contains("budget")) cfg.optimizer.budget = get_integer<std::int64_t>(obj, "budget");
  if (obj.contains("trials")) cfg.trials = get_integer<int>(obj, "trials");
  if (obj.contains("seed")) cfg.master_seed = get_integer<std::uint64_t>(obj, "seed");

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

} // namespace detail

inline json to_json(const ExperimentConfig& cfg) {
  json j;
  j["algorithm"] = std::string(to_string(cfg.optimizer.algorithm));
  j["problem"] = {{"kind", std::string(to_string(cfg.problem.kind))}, {"sigma2", cfg.problem.sigma2}};
  j["d"] = cfg.problem.d;
  if (cfg.optimizer.k) j["k"] = *cfg.optimizer.k;
  if (cfg.optimizer.n) j["n"] = *cfg.optimizer.n;
  if (cfg.optimizer.w) j["w"] = *cfg.optimizer.w;
  if (cfg.optimizer.r) j["r"] = *cfg.optimizer.r;
  j["budget"] = cfg.optimizer.budget;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.master_seed;
  return j;
}

/// Parse a config document. Top-level keys are shared defaults; an optional
/// "experiments" array lists per-experiment overrides. Without the array the
/// document describes one experiment. `overrides` (typically from flags) is
/// applied on top of every experiment.
inline RunRequest parse_config(const json& doc, const json& overrides = json::object()) {
  if (!doc.is_object()) throw ConfigError("config document must be an object");
  json base = json::object();
  std::optional<json> list;
  for (const auto& [key, value] : doc.items()) {
    if (key == "experiments") {
      if (!value.is_array() || value.empty()) throw ConfigError("parameter 'experiments' must be a non-empty array");
      list = value;
    } else {
      base[key] = value;
    }
  }
  for (const auto& [key, value] : overrides.items()) base[key] = value;

  RunRequest req;
  if (base.contains("out_dir")) {
    if (!base["out_dir"].is_string()) throw ConfigError("parameter 'out_dir' must be a string");
    req.out_dir = base["out_dir"].get<std::string>();
  }
  auto build = [&](json entry) {
    for (const auto& [key, value] : overrides.items()) entry[key] = value;
    entry.erase("out_dir");
    req.experiments.push_back(detail::experiment_from_json(entry));
  };
  if (!list) {
    build(base);
  } else {
    for (const auto& item : *list) {
      if (!item.is_object()) throw ConfigError("each entry of 'experiments' must be an object");
      json merged = base;
      for (const auto& [key, value] : item.items()) merged[key] = value;
      build(std::move(merged));
    }
  }
  return req;
}

inline json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "': " + e.what());
  }
}

/// Harness parallelism from NOISY_EDA_THREADS; 0 or unset means automatic.
inline unsigned threads_from_env() {
  const char* v = std::getenv("NOISY_EDA_THREADS");
  if (!v || !*v) return 0;
  unsigned out = 0;
  auto [ptr, ec] = std::from_chars(v, v + std::char_traits<char>::length(v), out);
  if (ec != std::errc{} || *ptr != '\0') throw ConfigError("NOISY_EDA_THREADS must be a non-negative integer");
  return out;
}

// ---------------------------------------------------------------------------
// Output files

class OutputDir {
public:
  explicit OutputDir(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec || !std::filesystem::is_directory(root_))
      throw IoError("cannot create output directory '" + root_.string() + "'");
  }

  const std::filesystem::path& root() const noexcept { return root_; }
  const std::vector<std::string>& files() const noexcept { return files_; }

  void write(const std::filesystem::path& relative, const std::string& content) {
    const auto path = root_ / relative;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    out.close();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
    files_.push_back(relative.generic_string());
  }

  /// Manifest goes through a temporary file and a rename so that its
  /// presence marks a complete output directory.
  void write_manifest(const json& manifest) {
    const auto tmp = root_ / "manifest.json.tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write '" + tmp.string() + "'");
      out << manifest.dump(2) << '\n';
      if (!out) throw IoError("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, root_ / "manifest.json", ec);
    if (ec) throw IoError("cannot finalise manifest: " + ec.message());
  }

private:
  std::filesystem::path root_;
  std::vector<std::string> files_;
};

inline std::string curve_csv(const SummaryStats& s) {
  std::string out = "evals,mean_true_fitness,stderr\n";
  for (std::size_t i = 0; i < s.curve.size(); ++i)
    out += std::to_string(i + 1) + ',' + format_double(s.curve[i].mean) + ',' + format_double(s.curve[i].std_error) + '\n';
  return out;
}

inline std::string summary_header() { return "algorithm,k,param,NHO,RQ_mean,RQ_stderr\n"; }

inline std::string summary_row(const ExperimentConfig& cfg, const SummaryStats& s) {
  const std::string k = cfg.optimizer.k ? format_double(*cfg.optimizer.k) : std::string();
  return std::string(to_string(cfg.optimizer.algorithm)) + ',' + k + ',' + std::to_string(cfg.optimizer.param()) + ',' +
         std::to_string(s.nho) + ',' + format_double(s.rq_mean) + ',' + format_double(s.rq_stderr) + '\n';
}

inline std::string final_p_csv(const std::vector<double>& mean_p) {
  std::string out = "index,mean_p\n";
  for (std::size_t i = 0; i < mean_p.size(); ++i) out += std::to_string(i + 1) + ',' + format_double(mean_p[i]) + '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Plotting

struct Curve {
  std::string label;
  std::vector<double> evals, mean, stderr_band;
};

/// Read a curve.csv. Errors name the offending line.
inline Curve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  Curve c;
  c.label = path.filename() == "curve.csv" && path.has_parent_path() ? path.parent_path().filename().string()
                                                                     : path.stem().string();
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (line != "evals,mean_true_fitness,stderr") fail("expected header 'evals,mean_true_fitness,stderr'");
      continue;
    }
    if (line.empty()) continue;
    double fields[3];
    std::string_view rest = line;
    for (int f = 0; f < 3; ++f) {
      const auto comma = rest.find(',');
      if ((f < 2) != (comma != std::string_view::npos)) fail("expected 3 comma-separated fields");
      const std::string_view cell = rest.substr(0, comma);
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), fields[f]);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(fields[f]))
        fail("malformed number '" + std::string(cell) + "'");
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    c.evals.push_back(fields[0]);
    c.mean.push_back(fields[1]);
    c.stderr_band.push_back(fields[2]);
  }
  if (lineno == 0) fail("empty file");
  if (c.evals.empty()) fail("no data rows");
  return c;
}

/// Standalone SVG line chart: one mean line per curve with a shaded +-stderr band.
inline std::string render_svg(const std::vector<Curve>& curves, const std::string& title = "") {
  if (curves.empty()) throw ConfigError("plot: at least one curve is required");
  constexpr double width = 800, height = 500, left = 70, right = 180, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.evals.size(); ++i) {
      x_min = std::min(x_min, c.evals[i]);
      x_max = std::max(x_max, c.evals[i]);
      y_min = std::min(y_min, c.mean[i] - c.stderr_band[i]);
      y_max = std::max(y_max, c.mean[i] + c.stderr_band[i]);
    }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max == y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;

  auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (y - y_min) / (y_max - y_min)) * ph; };
  auto num = [](double v) { return format_fixed(v, 2); };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";

  // axes and ticks
  svg << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw
      << "\" height=\"" << ph << "\"/></g>\n";
  for (int t = 0; t <= 5; ++t) {
    const double xv = x_min + (x_max - x_min) * t / 5.0, yv = y_min + (y_max - y_min) * t / 5.0;
    svg << "<line x1=\"" << num(sx(xv)) << "\" y1=\"" << top + ph << "\" x2=\"" << num(sx(xv)) << "\" y2=\""
        << top + ph + 5 << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << num(sx(xv)) << "\" y=\"" << top + ph + 20 << "\" text-anchor=\"middle\">"
        << format_fixed(xv, 0) << "</text>\n";
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << num(sy(yv)) << "\" x2=\"" << left << "\" y2=\""
        << num(sy(yv)) << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << num(sy(yv) + 4) << "\" text-anchor=\"end\">"
        << format_fixed(yv, y_max - y_min < 1.0 ? 3 : 1) << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">fitness evaluations</text>\n";
  svg << "<text transform=\"translate(18," << top + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">true fitness of recommendation</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& cv = curves[c];
    const char* colour = palette[c % std::size(palette)];
    svg << "<polygon fill=\"" << colour << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < cv.evals.size(); ++i)
      svg << num(sx(cv.evals[i])) << ',' << num(sy(cv.mean[i] + cv.stderr_band[i])) << ' ';
    for (std::size_t i = cv.evals.size(); i-- > 0;)
      svg << num(sx(cv.evals[i])) << ',' << num(sy(cv.mean[i] - cv.stderr_band[i])) << ' ';
    svg << "\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < cv.evals.size(); ++i) svg << num(sx(cv.evals[i])) << ',' << num(sy(cv.mean[i])) << ' ';
    svg << "\"/>\n";
    const double ly = top + 15 + 20.0 * static_cast<double>(c);
    svg << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40 << "\" y2=\"" << ly
        << "\" stroke=\"" << colour << "\" stroke-width=\"3\"/>";
    svg << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4 << "\">" << cv.label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// ---------------------------------------------------------------------------
// Commands

inline std::string experiment_dir_name(std::size_t index, const ExperimentConfig& cfg) {
  std::string name = std::to_string(index + 1) + '_' + std::string(to_string(cfg.optimizer.algorithm));
  if (cfg.optimizer.k) name += "_k" + format_double(*cfg.optimizer.k);
  if (cfg.optimizer.algorithm != Algorithm::CGA) name += "_p" + std::to_string(cfg.optimizer.param());
  return name;
}

/// Run every experiment and write curve.csv, summary.csv, final_p.csv (model
/// based algorithms only), optionally curve.svg, and finally manifest.json.
/// With several experiments each gets its own subdirectory and summary.csv
/// at the top level holds one row per experiment.
inline std::vector<SummaryStats> cmd_run(const RunRequest& req, unsigned threads, bool plot) {
  if (req.experiments.empty()) throw ConfigError("no experiments to run");
  const auto start = std::chrono::steady_clock::now();
  OutputDir out(req.out_dir);
  std::vector<SummaryStats> results;
  std::string summary = summary_header();
  std::vector<Curve> curves;
  const bool nested = req.experiments.size() > 1;

  for (std::size_t i = 0; i < req.experiments.size(); ++i) {
    const auto& cfg = req.experiments[i];
    SummaryStats stats = run_experiment(cfg, threads);
    const std::filesystem::path sub = nested ? std::filesystem::path(experiment_dir_name(i, cfg)) : std::filesystem::path();
    out.write(sub / "curve.csv", curve_csv(stats));
    if (stats.mean_final_p) out.write(sub / "final_p.csv", final_p_csv(*stats.mean_final_p));
    summary += summary_row(cfg, stats);
    if (plot) {
      Curve c;
      c.label = nested ? experiment_dir_name(i, cfg) : std::string(to_string(cfg.optimizer.algorithm));
      for (std::size_t e = 0; e < stats.curve.size(); ++e) {
        c.evals.push_back(static_cast<double>(e + 1));
        c.mean.push_back(stats.curve[e].mean);
        c.stderr_band.push_back(stats.curve[e].std_error);
      }
      curves.push_back(std::move(c));
    }
    results.push_back(std::move(stats));
  }
  out.write("summary.csv", summary);
  if (plot) out.write("curve.svg", render_svg(curves));

  json manifest;
  manifest["tool"] = "noisy_eda";
  manifest["version"] = std::string(kVersion);
  manifest["command"] = "run";
  manifest["out_dir"] = out.root().generic_string();
  manifest["experiments"] = json::array();
  for (const auto& cfg : req.experiments) manifest["experiments"].push_back(to_json(cfg));
  manifest["files"] = out.files();
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.write_manifest(manifest);
  return results;
}

struct ReproduceRequest {
  ProblemKind table = ProblemKind::NoisyOneMax;
  std::size_t d = 100;
  std::int64_t budget = 1000;
  int trials = 100;
  std::uint64_t seed = 0;
  double sigma2 = 1.0;
  std::filesystem::path out_dir = "out";
};

struct TableRow {
  TableCell cell;
  SummaryStats mscga;  // cGA when cell.n == 2
  SummaryStats swcga;
};

inline std::string table_csv(ProblemKind kind, const std::vector<TableRow>& rows) {
  const int decimals = kind == ProblemKind::NoisyOneMax ? 2 : 4;
  std::string out = "k,n,mscga_NHO,mscga_RQ_mean,mscga_RQ_stderr,w,swcga_NHO,swcga_RQ_mean,swcga_RQ_stderr\n";
  for (const auto& r : rows)
    out += r.cell.k_label + ',' + std::to_string(r.cell.n) + ',' + std::to_string(r.mscga.nho) + ',' +
           format_fixed(r.mscga.rq_mean, decimals) + ',' + format_fixed(r.mscga.rq_stderr, decimals) + ',' +
           std::to_string(r.cell.w) + ',' + std::to_string(r.swcga.nho) + ',' +
           format_fixed(r.swcga.rq_mean, decimals) + ',' + format_fixed(r.swcga.rq_stderr, decimals) + '\n';
  return out;
}

/// Run the full (k x n) and (k x w) grid of a result table and write
/// table_<name>.csv (rounded like the published tables) plus summary.csv at
/// full precision.
inline std::vector<TableRow> cmd_reproduce(const ReproduceRequest& req, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  ProblemSpec problem{req.table, req.d, req.sigma2};
  try {
    problem.validate();
    if (req.trials < 1) throw InvalidParameter("parameter 'trials' must be >= 1");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  OutputDir out(req.out_dir);
  const auto cells = table_layout(req.table);
  const auto ms_grid = table_grid(cells, Algorithm::MSCGA, problem, req.budget, req.trials, req.seed);
  const auto sw_grid = table_grid(cells, Algorithm::SWCGA, problem, req.budget, req.trials, req.seed);
  try {
    for (const auto& g : {ms_grid, sw_grid})
      for (const auto& c : g) c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  std::vector<TableRow> rows;
  std::string summary = summary_header();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    TableRow row{cells[i], run_experiment(ms_grid[i], threads), run_experiment(sw_grid[i], threads)};
    rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) summary += summary_row(ms_grid[i], rows[i].mscga);
  for (std::size_t i = 0; i < cells.size(); ++i) summary += summary_row(sw_grid[i], rows[i].swcga);

  const std::string name = std::string(to_string(req.table));
  out.write("table_" + name + ".csv", table_csv(req.table, rows));
  out.write("summary.csv", summary);

  json manifest;
  manifest["tool"] = "noisy_eda";
  manifest["version"] = std::string(kVersion);
  manifest["command"] = "reproduce";
  manifest["table"] = name;
  manifest["out_dir"] = out.root().generic_string();
  manifest["d"] = req.d;
  manifest["budget"] = req.budget;
  manifest["trials"] = req.trials;
  manifest["seed"] = req.seed;
  manifest["sigma2"] = req.sigma2;
  manifest["experiments"] = ms_grid.size() + sw_grid.size();
  manifest["files"] = out.files();
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.write_manifest(manifest);
  return rows;
}

inline void cmd_plot(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& output,
                     const std::string& title = "") {
  if (inputs.empty()) throw ConfigError("plot: at least one curve CSV is required");
  std::vector<Curve> curves;
  for (const auto& p : inputs) curves.push_back(read_curve_csv(p));
  const std::string svg = render_svg(curves, title);
  std::error_code ec;
  if (output.has_parent_path()) std::filesystem::create_directories(output.parent_path(), ec);
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + output.string() + "'");
  out << svg;
  if (!out) throw IoError("failed writing '" + output.string() + "'");
}

} // namespace noisy_eda::cli
