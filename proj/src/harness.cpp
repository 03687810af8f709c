#include "mcdopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <thread>

#include "mcdopt/baselines.hpp"
#include "mcdopt/benchfns.hpp"
#include "mcdopt/format.hpp"
#include "mcdopt/mcd.hpp"
#include "mcdopt/svg.hpp"

namespace mcdopt::harness {

namespace fs = std::filesystem;

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Mcd: return "mcd";
    case Algorithm::De: return "de";
    case Algorithm::Cc: return "cc";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "mcd") return Algorithm::Mcd;
  if (s == "de") return Algorithm::De;
  if (s == "cc") return Algorithm::Cc;
  throw ConfigError("unknown algorithm '" + s + "' (expected mcd, de or cc)");
}

//------------------------------------------------------------------------------
// Config
//------------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || end != v.data() + v.size())
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + v + "'");
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  try {
    const double d = parse_double(v);
    if (!std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::invalid_argument&) {
    throw ConfigError("'" + key + "' expects a finite number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + v + "'");
}

std::vector<std::uint64_t> to_u64_list(const std::string& key, const std::string& v) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(v)) out.push_back(to_u64(key, item));
  return out;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_same_v<T, std::string>)
      s += xs[i];
    else
      s += std::to_string(xs[i]);
  }
  return s;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string val = trim(std::string_view(line).substr(eq + 1));
    if (key == "algorithm") key = "algorithms";
    if (key == "function") key = "functions";
    if (!seen.insert(key).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");

    if (key == "algorithms") {
      cfg.algorithms.clear();
      for (const auto& a : split_list(val)) cfg.algorithms.push_back(parse_algorithm(a));
    } else if (key == "functions") {
      cfg.functions = split_list(val);
      if (cfg.functions.size() == 1 && cfg.functions.front() == "all") cfg.functions.clear();
    } else if (key == "dim") {
      cfg.dim = to_u64(key, val);
    } else if (key == "max_nfe") {
      cfg.max_nfe = to_u64_list(key, val);
    } else if (key == "max_iter") {
      cfg.max_iter = to_u64_list(key, val);
    } else if (key == "repeats") {
      cfg.repeats = to_u64(key, val);
    } else if (key == "base_seed") {
      cfg.base_seed = to_u64(key, val);
    } else if (key == "suite_seed") {
      cfg.suite_seed = to_u64(key, val);
    } else if (key == "trace_grid") {
      cfg.trace_grid = to_u64_list(key, val);
    } else if (key == "output_dir") {
      cfg.output_dir = val;
    } else if (key == "threads") {
      cfg.threads = to_u64(key, val);
    } else if (key == "tie_epsilon") {
      cfg.tie_epsilon = to_real(key, val);
    } else if (key == "record_wall_time") {
      cfg.record_wall_time = to_bool(key, val);
    } else if (key == "de_pop_size") {
      cfg.de_pop_size = to_u64(key, val);
    } else if (key == "de_cr") {
      cfg.de_cr = to_real(key, val);
    } else if (key == "de_f_low") {
      cfg.de_f_low = to_real(key, val);
    } else if (key == "de_f_high") {
      cfg.de_f_high = to_real(key, val);
    } else if (key == "cc_pop_size") {
      cfg.cc_pop_size = to_u64(key, val);
    } else if (key == "cc_f") {
      cfg.cc_f = to_real(key, val);
    } else if (key == "cc_cr") {
      cfg.cc_cr = to_real(key, val);
    } else if (key == "cc_groups") {
      cfg.cc_groups = to_u64(key, val);
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

void apply_env_overrides(ExperimentConfig& cfg) {
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) cfg.output_dir = dir;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::vector<std::string> algs;
  for (auto a : cfg.algorithms) algs.push_back(to_string(a));
  std::ostringstream o;
  o << "algorithms = " << join(algs) << '\n';
  o << "functions = " << (cfg.functions.empty() ? std::string("all") : join(cfg.functions)) << '\n';
  o << "dim = " << cfg.dim << '\n';
  o << "max_nfe = " << join(cfg.max_nfe) << '\n';
  o << "max_iter = " << join(cfg.max_iter) << '\n';
  o << "repeats = " << cfg.repeats << '\n';
  o << "base_seed = " << cfg.base_seed << '\n';
  o << "suite_seed = " << cfg.suite_seed << '\n';
  if (!cfg.trace_grid.empty()) o << "trace_grid = " << join(cfg.trace_grid) << '\n';
  o << "output_dir = " << cfg.output_dir.string() << '\n';
  o << "threads = " << cfg.threads << '\n';
  o << "tie_epsilon = " << format_double(cfg.tie_epsilon) << '\n';
  o << "record_wall_time = " << (cfg.record_wall_time ? "true" : "false") << '\n';
  o << "de_pop_size = " << cfg.de_pop_size << '\n';
  o << "de_cr = " << format_double(cfg.de_cr) << '\n';
  o << "de_f_low = " << format_double(cfg.de_f_low) << '\n';
  o << "de_f_high = " << format_double(cfg.de_f_high) << '\n';
  o << "cc_pop_size = " << cfg.cc_pop_size << '\n';
  o << "cc_f = " << format_double(cfg.cc_f) << '\n';
  o << "cc_cr = " << format_double(cfg.cc_cr) << '\n';
  o << "cc_groups = " << cfg.cc_groups << '\n';
  return o.str();
}

std::uint64_t ExperimentConfig::max_iter_for(std::size_t budget_index) const {
  return max_iter.size() == 1 ? max_iter.front() : max_iter.at(budget_index);
}

std::vector<std::uint64_t> ExperimentConfig::grid_for(std::uint64_t nfe) const {
  std::vector<std::uint64_t> grid;
  if (trace_grid.empty()) {
    constexpr std::uint64_t kPoints = 20;
    for (std::uint64_t k = 1; k <= kPoints; ++k) {
      const std::uint64_t g = nfe * k / kPoints;
      if (g > 0 && (grid.empty() || g > grid.back())) grid.push_back(g);
    }
  } else {
    for (auto g : trace_grid)
      if (g <= nfe) grid.push_back(g);
  }
  return grid;
}

namespace {

baselines::DEConfig de_config(const ExperimentConfig& c) {
  return {c.de_pop_size, c.de_cr, c.de_f_low, c.de_f_high};
}

baselines::CCConfig cc_config(const ExperimentConfig& c) {
  return {c.cc_pop_size, c.cc_f, c.cc_cr, c.cc_groups};
}

}  // namespace

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw ConfigError("no algorithms configured");
  if (std::set<Algorithm>(algorithms.begin(), algorithms.end()).size() != algorithms.size())
    throw ConfigError("duplicate algorithm in 'algorithms'");
  if (dim < 2) throw ConfigError("dim must be at least 2");
  if (repeats < 1) throw ConfigError("repeats must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (tie_epsilon < 0) throw ConfigError("tie_epsilon must be non-negative");
  if (max_nfe.empty()) throw ConfigError("max_nfe is empty");
  if (max_iter.empty() || (max_iter.size() != 1 && max_iter.size() != max_nfe.size()))
    throw ConfigError("max_iter needs one value or one per max_nfe entry");
  for (auto it : max_iter)
    if (it == 0) throw ConfigError("max_iter must be positive");
  for (std::size_t k = 1; k < trace_grid.size(); ++k)
    if (trace_grid[k] <= trace_grid[k - 1]) throw ConfigError("trace_grid must be strictly increasing");
  if (!trace_grid.empty() && trace_grid.front() == 0) throw ConfigError("trace_grid entries must be positive");

  const auto known = bench::suite_names();
  for (const auto& f : functions)
    if (std::find(known.begin(), known.end(), f) == known.end())
      throw ConfigError("unknown function '" + f + "'");

  de_config(*this).validate();
  cc_config(*this).validate();

  for (std::size_t b = 0; b < max_nfe.size(); ++b) {
    const auto nfe = max_nfe[b];
    if (nfe < 2 * dim)
      throw InsufficientBudget("max_nfe " + std::to_string(nfe) + " is below 2 * dim = " +
                               std::to_string(2 * dim));
    for (auto a : algorithms) {
      switch (a) {
        case Algorithm::Mcd: mcd::restart_plan(dim, max_iter_for(b), nfe); break;
        case Algorithm::De:
          if (nfe < de_pop_size) throw InsufficientBudget("max_nfe below the DE population size");
          break;
        case Algorithm::Cc:
          if (nfe < cc_pop_size) throw InsufficientBudget("max_nfe below the CC population size");
          break;
      }
    }
  }
}

//------------------------------------------------------------------------------
// Metrics
//------------------------------------------------------------------------------

Iar compute_iar(double err_baseline, double err_mcd) {
  if (err_mcd == 0.0) {
    if (err_baseline == 0.0) return {1.0, true};
    return {std::numeric_limits<double>::infinity(), true};
  }
  return {err_baseline / err_mcd, false};
}

Wtl tally_wtl(const std::vector<double>& errors_mcd, const std::vector<double>& errors_baseline,
              double rel_epsilon) {
  if (errors_mcd.size() != errors_baseline.size())
    throw LengthMismatch("tally_wtl: " + std::to_string(errors_mcd.size()) + " MCD errors vs " +
                         std::to_string(errors_baseline.size()) + " baseline errors");
  Wtl w;
  for (std::size_t i = 0; i < errors_mcd.size(); ++i) {
    const double a = errors_mcd[i];
    const double b = errors_baseline[i];
    const bool tie = a == b || std::abs(a - b) <= rel_epsilon * std::max(std::abs(a), std::abs(b));
    if (tie)
      ++w.ties;
    else if (a < b)
      ++w.wins;
    else
      ++w.losses;
  }
  return w;
}

std::vector<std::optional<double>> densify(const std::vector<TracePoint>& trace,
                                           const std::vector<std::uint64_t>& grid) {
  std::vector<std::optional<double>> out;
  out.reserve(grid.size());
  std::size_t k = 0;
  std::optional<double> current;
  for (auto g : grid) {
    while (k < trace.size() && trace[k].nfe <= g) current = trace[k++].best_value;
    out.push_back(current);
  }
  return out;
}

//------------------------------------------------------------------------------
// Runs
//------------------------------------------------------------------------------

RunRecord run_single(const ExperimentConfig& cfg, Algorithm alg, const Objective& fn,
                     const std::string& fn_name, std::uint64_t max_nfe, std::uint64_t max_iter,
                     std::uint64_t seed) {
  RunRecord rec;
  rec.algorithm = alg;
  rec.function = fn_name;
  rec.dim = fn.dim();
  rec.seed = seed;
  rec.max_nfe = max_nfe;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Candidate best{{}, 0.0};
    switch (alg) {
      case Algorithm::Mcd: {
        mcd::Options opts;
        opts.max_iter = max_iter;
        opts.max_nfe = max_nfe;
        opts.seed = seed;
        auto r = mcd::run(fn, opts);
        // The returned solution is the best restart-final point, which can be
        // worse than the best probe the run evaluated.
        best = std::move(r.final_s);
        rec.used_nfe = r.used_nfe;
        rec.trace = std::move(r.trace);
        break;
      }
      case Algorithm::De: {
        auto r = baselines::run_de(fn, de_config(cfg), max_nfe, seed);
        best = std::move(r.best);
        rec.used_nfe = r.used_nfe;
        rec.trace = std::move(r.trace);
        break;
      }
      case Algorithm::Cc: {
        auto r = baselines::run_cc(fn, cc_config(cfg), max_nfe, seed);
        best = std::move(r.best);
        rec.used_nfe = r.used_nfe;
        rec.trace = std::move(r.trace);
        break;
      }
    }
    const auto opt = fn.optimum_value();
    if (!opt) throw MissingOptimum("objective has no known optimum value");
    rec.final_error = *best.value - *opt;
    for (auto& t : rec.trace) t.best_value -= *opt;
  } catch (const std::exception& e) {
    rec.failure = e.what();
    rec.final_error = std::numeric_limits<double>::quiet_NaN();
    rec.trace.clear();
  }
  if (cfg.record_wall_time) {
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  return rec;
}

const Aggregate* ExperimentReport::find(Algorithm a, const std::string& fn,
                                        std::uint64_t max_nfe) const {
  for (const auto& ag : aggregates)
    if (ag.algorithm == a && ag.function == fn && ag.max_nfe == max_nfe) return &ag;
  return nullptr;
}

ExperimentReport summarize(std::vector<RunRecord> runs, double tie_epsilon) {
  ExperimentReport rep;
  rep.runs = std::move(runs);

  std::vector<double> sums;
  for (const auto& r : rep.runs) {
    auto it = std::find_if(rep.aggregates.begin(), rep.aggregates.end(), [&](const Aggregate& a) {
      return a.algorithm == r.algorithm && a.function == r.function && a.max_nfe == r.max_nfe;
    });
    if (it == rep.aggregates.end()) {
      rep.aggregates.push_back({r.algorithm, r.function, r.max_nfe});
      sums.push_back(0.0);
      it = rep.aggregates.end() - 1;
    }
    const auto idx = static_cast<std::size_t>(it - rep.aggregates.begin());
    ++it->runs;
    if (r.ok())
      sums[idx] += r.final_error;
    else
      ++it->failed;
  }
  for (std::size_t i = 0; i < rep.aggregates.size(); ++i) {
    auto& a = rep.aggregates[i];
    const auto ok = a.runs - a.failed;
    a.mean_error = ok ? sums[i] / static_cast<double>(ok) : std::numeric_limits<double>::quiet_NaN();
  }

  std::vector<Algorithm> baselines_seen;
  std::vector<std::uint64_t> budgets;
  std::vector<std::string> functions;
  bool has_mcd = false;
  for (const auto& a : rep.aggregates) {
    if (a.algorithm == Algorithm::Mcd)
      has_mcd = true;
    else if (std::find(baselines_seen.begin(), baselines_seen.end(), a.algorithm) == baselines_seen.end())
      baselines_seen.push_back(a.algorithm);
    if (std::find(budgets.begin(), budgets.end(), a.max_nfe) == budgets.end()) budgets.push_back(a.max_nfe);
    if (std::find(functions.begin(), functions.end(), a.function) == functions.end())
      functions.push_back(a.function);
  }
  if (!has_mcd) return rep;

  for (auto base : baselines_seen) {
    for (auto nfe : budgets) {
      Comparison cmp{base, nfe, {}, {}};
      std::vector<double> em, eb;
      for (const auto& fn : functions) {
        const auto* m = rep.find(Algorithm::Mcd, fn, nfe);
        const auto* b = rep.find(base, fn, nfe);
        if (!m || !b || std::isnan(m->mean_error) || std::isnan(b->mean_error)) continue;
        cmp.functions.push_back({fn, m->mean_error, b->mean_error, compute_iar(b->mean_error, m->mean_error)});
        em.push_back(m->mean_error);
        eb.push_back(b->mean_error);
      }
      cmp.wtl = tally_wtl(em, eb, tie_epsilon);
      if (!cmp.functions.empty()) rep.comparisons.push_back(std::move(cmp));
    }
  }
  return rep;
}

//------------------------------------------------------------------------------
// Files
//------------------------------------------------------------------------------

namespace {

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  out << content;
  if (!out) throw Error("failed writing " + p.string());
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

constexpr const char* kResultsHeader = "algorithm,function,dim,seed,max_nfe,used_nfe,final_error,wall_ms";

}  // namespace

std::string results_csv(const std::vector<RunRecord>& runs) {
  std::ostringstream o;
  o << kResultsHeader << '\n';
  for (const auto& r : runs) {
    o << to_string(r.algorithm) << ',' << r.function << ',' << r.dim << ',' << r.seed << ','
      << r.max_nfe << ',' << r.used_nfe << ',' << format_double(r.final_error) << ','
      << (r.wall_ms ? format_double(*r.wall_ms) : std::string()) << '\n';
  }
  return o.str();
}

std::vector<RunRecord> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kResultsHeader)
    throw Error("results.csv: unexpected header");
  std::vector<RunRecord> runs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto c = split_csv_line(trim(line));
    if (c.size() != 8) throw Error("results.csv line " + std::to_string(lineno) + ": expected 8 columns");
    try {
      RunRecord r;
      r.algorithm = parse_algorithm(c[0]);
      r.function = c[1];
      r.dim = to_u64("dim", c[2]);
      r.seed = to_u64("seed", c[3]);
      r.max_nfe = to_u64("max_nfe", c[4]);
      r.used_nfe = to_u64("used_nfe", c[5]);
      r.final_error = parse_double(c[6]);
      if (!c[7].empty()) r.wall_ms = parse_double(c[7]);
      if (std::isnan(r.final_error)) r.failure = "failed";
      runs.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw Error("results.csv line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return runs;
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::ostringstream o;
  o << "nfe,best_value\n";
  for (const auto& t : trace) o << t.nfe << ',' << format_double(t.best_value) << '\n';
  return o.str();
}

std::vector<TracePoint> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "nfe,best_value") throw Error("trace csv: unexpected header");
  std::vector<TracePoint> trace;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto c = split_csv_line(trim(line));
    if (c.size() != 2) throw Error("trace csv: expected 2 columns");
    trace.push_back({to_u64("nfe", c[0]), parse_double(c[1])});
  }
  return trace;
}

std::string trace_file_name(const RunRecord& r) {
  return to_string(r.algorithm) + "__" + r.function + "__" + std::to_string(r.max_nfe) + "__" +
         std::to_string(r.seed) + ".csv";
}

std::string summary_json(const ExperimentReport& rep) {
  using json = nlohmann::ordered_json;
  auto real = [](double v) -> json { return std::isfinite(v) ? json(v) : json(nullptr); };

  json aggs = json::array();
  for (const auto& a : rep.aggregates) {
    json j;
    j["algorithm"] = to_string(a.algorithm);
    j["function"] = a.function;
    j["max_nfe"] = a.max_nfe;
    j["runs"] = a.runs;
    j["failed"] = a.failed;
    j["mean_error"] = real(a.mean_error);
    aggs.push_back(std::move(j));
  }

  json cmps = json::array();
  for (const auto& c : rep.comparisons) {
    json fns = json::array();
    for (const auto& f : c.functions) {
      json j;
      j["function"] = f.function;
      j["mcd_error"] = real(f.mcd_error);
      j["baseline_error"] = real(f.baseline_error);
      j["iar"] = real(f.iar.value);
      j["iar_zero_denominator"] = f.iar.zero_denominator;
      j["mcd_better"] = f.iar.mcd_better();
      fns.push_back(std::move(j));
    }
    json j;
    j["baseline"] = to_string(c.baseline);
    j["max_nfe"] = c.max_nfe;
    j["functions"] = std::move(fns);
    j["wtl"] = {{"wins", c.wtl.wins}, {"ties", c.wtl.ties}, {"losses", c.wtl.losses}};
    cmps.push_back(std::move(j));
  }

  json root;
  root["aggregates"] = std::move(aggs);
  root["comparisons"] = std::move(cmps);
  return root.dump(2) + "\n";
}

std::string convergence_svg(const ExperimentReport& rep, const std::string& function,
                            std::uint64_t max_nfe, const std::vector<std::uint64_t>& grid) {
  svg::LogLineChart chart(function + " (max_nfe = " + std::to_string(max_nfe) + ")",
                          "function evaluations", "mean error (log scale)");
  std::vector<Algorithm> order;
  for (const auto& r : rep.runs)
    if (r.function == function && r.max_nfe == max_nfe &&
        std::find(order.begin(), order.end(), r.algorithm) == order.end())
      order.push_back(r.algorithm);

  for (auto alg : order) {
    std::vector<std::vector<std::optional<double>>> curves;
    for (const auto& r : rep.runs) {
      if (r.algorithm != alg || r.function != function || r.max_nfe != max_nfe || !r.ok() || r.trace.empty())
        continue;
      curves.push_back(densify(r.trace, grid));
    }
    svg::Series s{to_string(alg), {}};
    for (std::size_t k = 0; k < grid.size() && !curves.empty(); ++k) {
      double sum = 0;
      bool complete = true;
      for (const auto& c : curves) {
        if (!c[k]) {
          complete = false;
          break;
        }
        sum += *c[k];
      }
      if (complete) s.points.emplace_back(static_cast<double>(grid[k]), sum / static_cast<double>(curves.size()));
    }
    chart.add_series(std::move(s));
  }
  return chart.render();
}

namespace {

std::string plot_file_name(const std::string& function, std::uint64_t max_nfe) {
  return function + "__" + std::to_string(max_nfe) + ".svg";
}

void write_derived(const fs::path& dir, const ExperimentReport& rep, const ExperimentConfig& cfg) {
  write_file(dir / "summary.json", summary_json(rep));
  std::vector<std::pair<std::string, std::uint64_t>> plots;
  for (const auto& a : rep.aggregates) {
    std::pair<std::string, std::uint64_t> key{a.function, a.max_nfe};
    if (std::find(plots.begin(), plots.end(), key) == plots.end()) plots.push_back(key);
  }
  for (const auto& [fn, nfe] : plots)
    write_file(dir / "plots" / plot_file_name(fn, nfe), convergence_svg(rep, fn, nfe, cfg.grid_for(nfe)));
}

}  // namespace

ExperimentReport report_dir(const fs::path& dir) {
  ExperimentConfig cfg;
  if (fs::exists(dir / "config.txt")) cfg = load_config(dir / "config.txt");
  auto runs = parse_results_csv(read_file(dir / "results.csv"));
  for (auto& r : runs) {
    const auto p = dir / "traces" / trace_file_name(r);
    if (fs::exists(p)) r.trace = parse_trace_csv(read_file(p));
  }
  auto rep = summarize(std::move(runs), cfg.tie_epsilon);
  write_derived(dir, rep, cfg);
  return rep;
}

ExperimentReport run_grid(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto suite = bench::make_suite(cfg.dim, cfg.suite_seed);
  std::vector<const bench::BenchFunction*> selected;
  if (cfg.functions.empty()) {
    for (const auto& f : suite) selected.push_back(&f);
  } else {
    for (const auto& name : cfg.functions)
      for (const auto& f : suite)
        if (f.name() == name) selected.push_back(&f);
  }

  struct Task {
    Algorithm alg;
    const bench::BenchFunction* fn;
    std::size_t budget;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t b = 0; b < cfg.max_nfe.size(); ++b)
    for (const auto* fn : selected)
      for (auto alg : cfg.algorithms)
        for (std::size_t k = 0; k < cfg.repeats; ++k) tasks.push_back({alg, fn, b, cfg.base_seed + k});

  std::vector<RunRecord> runs(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto& t = tasks[i];
      runs[i] = run_single(cfg, t.alg, *t.fn, t.fn->name(), cfg.max_nfe[t.budget],
                           cfg.max_iter_for(t.budget), t.seed);
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t n = std::min(cfg.threads, std::max<std::size_t>(1, tasks.size()));
    for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
  }

  for (const auto& r : runs)
    if (!r.ok())
      std::cerr << "run failed: " << to_string(r.algorithm) << ' ' << r.function << " seed " << r.seed
                << ": " << r.failure << '\n';

  const fs::path& dir = cfg.output_dir;
  fs::create_directories(dir);
  write_file(dir / "config.txt", serialize_config(cfg));
  write_file(dir / "results.csv", results_csv(runs));
  for (const auto& r : runs) write_file(dir / "traces" / trace_file_name(r), trace_csv(r.trace));
  return report_dir(dir);
}

}  // namespace mcdopt::harness
