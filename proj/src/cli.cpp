#include "dssa/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dssa/oracle.hpp"

namespace dssa {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Per-point reporting metrics: dc-gain error (dB) and max relative root
// error, shared by errors.csv, the summary table and cmd_eval.
struct PointMetrics {
  double dc_err_db = 0.0;
  double root_err = 0.0;
};

PointMetrics point_metrics(const SymbolicRational& sr, const DataPoint& pt,
                           const FrequencyGrid& grid, const FitnessConfig& cfg) {
  const ConstraintSlacks sl = constraints(sr, pt, grid, cfg);
  PointMetrics m;
  m.dc_err_db = sl.dc + cfg.t_dc;
  m.root_err = std::max(sl.pole, sl.zero) + cfg.t_root;
  return m;
}

ordered_json expression_to_json(const SymbolicRational& sr, const CircuitModel& model) {
  auto side = [&](const std::vector<SymbolicPolynomial>& polys) {
    ordered_json out = ordered_json::array();
    for (const auto& poly : polys) {
      ordered_json terms = ordered_json::array();
      for (const auto& t : poly.terms) {
        ordered_json names = ordered_json::array();
        for (std::size_t k = 0; k < t.present.size(); ++k)
          if (t.present[k]) names.push_back(model.parameters[k].name);
        terms.push_back(ordered_json::array({t.sign, names}));
      }
      out.push_back(terms);
    }
    return out;
  };
  ordered_json j;
  j["num"] = side(sr.num_polys);
  j["den"] = side(sr.den_polys);
  return j;
}

SymbolicRational expression_from_json(const json& j, const CircuitModel& model) {
  auto side = [&](const json& arr) {
    std::vector<SymbolicPolynomial> polys;
    for (const auto& jpoly : arr) {
      SymbolicPolynomial poly;
      for (const auto& jterm : jpoly) {
        SymbolicTerm term;
        term.sign = jterm.at(0).get<int>();
        term.present.assign(model.parameter_count(), false);
        for (const auto& jname : jterm.at(1)) {
          const int k = model.parameter_index(jname.get<std::string>());
          if (k < 0)
            throw std::runtime_error("expression names unknown parameter '" +
                                     jname.get<std::string>() + "'");
          term.present[k] = true;
        }
        poly.terms.push_back(std::move(term));
      }
      polys.push_back(std::move(poly));
    }
    return polys;
  };
  SymbolicRational sr;
  sr.num_polys = side(j.at("num"));
  sr.den_polys = side(j.at("den"));
  return sr;
}

ordered_json config_to_json(const RunConfig& cfg) {
  ordered_json j;
  j["netlist"] = cfg.netlist_path;
  j["seed"] = cfg.seed;
  j["population"] = cfg.ga.population;
  j["iterations"] = cfg.ga.iterations;
  j["p_r"] = cfg.ga.p_r;
  j["p_c"] = cfg.ga.p_c;
  j["p_m"] = cfg.ga.p_m;
  j["train"] = cfg.train;
  j["test"] = cfg.test;
  j["points_per_decade"] = cfg.points_per_decade;
  j["max_terms"] = cfg.max_terms;
  j["w1"] = cfg.fitness.w1;
  j["w2"] = cfg.fitness.w2;
  j["t_dc"] = cfg.fitness.t_dc;
  j["t_root"] = cfg.fitness.t_root;
  j["penalty_lambda"] = cfg.fitness.penalty_lambda;
  j["error_clamp_db"] = cfg.fitness.error_clamp_db;
  return j;
}

struct Prepared {
  CircuitModel model;
  double omega0 = 0.0;
  NumericRational nominal;
  FrequencyGrid grid;
  ChromosomeDims dims;
};

Prepared prepare(const std::string& netlist_path, int points_per_decade, int max_terms) {
  Prepared p;
  p.model = parse_netlist(read_file(netlist_path));
  p.omega0 = nominal_omega0(p.model);
  std::vector<double> nominal(p.model.parameter_count());
  for (int k = 0; k < p.model.parameter_count(); ++k)
    nominal[k] = p.model.parameters[k].nominal;
  p.nominal = extract_coeffs(build_pencil(p.model, nominal), p.omega0);
  p.grid = frequency_grid(p.nominal, points_per_decade);
  p.dims = {p.nominal.num_degree(), p.nominal.den_degree(),
            p.model.parameter_count(), max_terms};
  return p;
}

struct TestMetrics {
  double avg_dc = 0.0, max_dc = 0.0, avg_root = 0.0, max_root = 0.0;
  std::vector<PointMetrics> per_point;
};

TestMetrics test_metrics(const SymbolicRational& sr, const std::vector<DataPoint>& test,
                         const FrequencyGrid& grid, const FitnessConfig& cfg) {
  TestMetrics tm;
  for (const auto& pt : test) {
    PointMetrics m = point_metrics(sr, pt, grid, cfg);
    tm.per_point.push_back(m);
    tm.avg_dc += m.dc_err_db;
    tm.max_dc = std::max(tm.max_dc, m.dc_err_db);
    tm.avg_root += m.root_err;
    tm.max_root = std::max(tm.max_root, m.root_err);
  }
  if (!test.empty()) {
    tm.avg_dc /= static_cast<double>(test.size());
    tm.avg_root /= static_cast<double>(test.size());
  }
  return tm;
}

}  // namespace

void RunConfig::apply_config_file(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, eq, value;
    if (!(ls >> key)) continue;
    if (!(ls >> eq >> value) || eq != "=")
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    if (key == "seed") seed = std::stoull(value);
    else if (key == "population") ga.population = std::stoi(value);
    else if (key == "iterations") ga.iterations = std::stoi(value);
    else if (key == "p_r") ga.p_r = std::stod(value);
    else if (key == "p_c") ga.p_c = std::stod(value);
    else if (key == "p_m") ga.p_m = std::stod(value);
    else if (key == "train") train = std::stoi(value);
    else if (key == "test") test = std::stoi(value);
    else if (key == "points_per_decade") points_per_decade = std::stoi(value);
    else if (key == "max_terms") max_terms = std::stoi(value);
    else if (key == "w1") fitness.w1 = std::stod(value);
    else if (key == "w2") fitness.w2 = std::stod(value);
    else if (key == "t_dc") fitness.t_dc = std::stod(value);
    else if (key == "t_root") fitness.t_root = std::stod(value);
    else if (key == "penalty_lambda") fitness.penalty_lambda = std::stod(value);
    else if (key == "error_clamp_db") fitness.error_clamp_db = std::stod(value);
    else
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
  }
}

int cmd_run(const RunConfig& cfg, std::ostream& out, RunReport* report) {
  const auto t0 = std::chrono::steady_clock::now();
  Prepared p;
  try {
    p = prepare(cfg.netlist_path, cfg.points_per_decade, cfg.max_terms);
    cfg.ga.validate();
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return kExitError;
  }
  if (cfg.parallel)
    out << "note: --parallel evaluates candidates concurrently; the random "
           "stream itself stays sequential\n";

  // One seeded stream, consumed in order: dataset draws, split, GA.
  Rng rng(cfg.seed);
  auto points = sample_dataset(p.model, cfg.train + cfg.test, rng, p.omega0);
  Dataset ds = split(std::move(points), cfg.train, cfg.test, rng);

  EvalContext ctx(p.model, ds.train, p.grid, cfg.fitness, p.dims);
  GaConfig ga_cfg = cfg.ga;
  ga_cfg.parallel_eval = cfg.parallel;
  std::function<void(int, double, bool)> progress;
  if (cfg.verbose)
    progress = [&out](int iter, double best, bool feasible) {
      out << "iter " << iter << "  best_obj " << std::setprecision(10) << best
          << "  feasible " << (feasible ? "yes" : "no") << "\n";
    };
  GaResult ga = run(ga_cfg, ctx, rng, progress);

  const SymbolicRational best = canonicalize(decode(ga.best), p.model);
  const std::string rendered = render(best, p.model);
  TestMetrics tm = test_metrics(best, ds.test, p.grid, cfg.fitness);

  RunReport rep;
  rep.rendered = rendered;
  rep.best_eval = ga.best_eval;
  rep.train_feasible = ga.best_is_feasible;
  rep.avg_dc_error_db = tm.avg_dc;
  rep.max_dc_error_db = tm.max_dc;
  rep.avg_root_error_pct = tm.avg_root * 100.0;
  rep.max_root_error_pct = tm.max_root * 100.0;
  for (const auto& poly : best.num_polys) {
    rep.terms_per_polynomial.push_back(static_cast<int>(poly.terms.size()));
    rep.total_terms += static_cast<int>(poly.terms.size());
  }
  for (const auto& poly : best.den_polys) {
    rep.terms_per_polynomial.push_back(static_cast<int>(poly.terms.size()));
    rep.total_terms += static_cast<int>(poly.terms.size());
  }

  std::filesystem::create_directories(cfg.output_dir);

  // result.json -- deliberately excludes wall time so identical (config,
  // seed) runs are byte-identical.
  ordered_json j;
  j["config"] = config_to_json(cfg);
  j["expression"] = expression_to_json(best, p.model);
  j["rendered"] = rendered;
  {
    ordered_json o;
    o["complexity"] = ga.best_eval.complexity;
    o["error"] = ga.best_eval.error;
    o["objective"] = ga.best_eval.objective;
    o["train_feasible"] = ga.best_is_feasible;
    ordered_json v;
    v["dc"] = ga.best_eval.violations.dc;
    v["pole"] = ga.best_eval.violations.pole;
    v["zero"] = ga.best_eval.violations.zero;
    v["degree"] = ga.best_eval.violations.degree;
    o["violations"] = v;
    j["objective"] = o;
  }
  j["term_counts"] = {{"per_polynomial", rep.terms_per_polynomial},
                      {"total", rep.total_terms}};
  j["test_metrics"] = {{"avg_dc_error_db", tm.avg_dc},
                       {"max_dc_error_db", tm.max_dc},
                       {"avg_root_error_pct", tm.avg_root * 100.0},
                       {"max_root_error_pct", tm.max_root * 100.0}};
  std::ofstream(cfg.output_dir + "/result.json") << j.dump(2) << "\n";

  {
    std::ofstream csv(cfg.output_dir + "/errors.csv");
    csv << "point,dc_error_db,max_root_error_pct\n";
    csv << std::setprecision(12);
    for (std::size_t i = 0; i < tm.per_point.size(); ++i)
      csv << i << ',' << tm.per_point[i].dc_err_db << ','
          << tm.per_point[i].root_err * 100.0 << "\n";
  }
  {
    std::vector<double> nominal(p.model.parameter_count());
    for (int k = 0; k < p.model.parameter_count(); ++k)
      nominal[k] = p.model.parameters[k].nominal;
    std::ofstream csv(cfg.output_dir + "/response.csv");
    csv << "freq_hz,exact_mag_db,exact_phase_deg,simplified_mag_db,simplified_phase_deg\n";
    csv << std::setprecision(12);
    for (int c = 0; c < p.grid.count(); ++c) {
      const Complex s = p.grid.points[c];
      const Complex he = p.nominal.eval(s);
      bool sing = false;
      const Complex hs = evaluate_rational(best, nominal, s, &sing);
      const double deg = 180.0 / std::numbers::pi;
      csv << p.grid.freqs_hz[c] << ',' << 20.0 * std::log10(std::abs(he)) << ','
          << std::arg(he) * deg << ',';
      if (sing || !(std::abs(hs) > 0.0))
        csv << "nan,nan\n";
      else
        csv << 20.0 * std::log10(std::abs(hs)) << ',' << std::arg(hs) * deg << "\n";
    }
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.wall_seconds = wall;
  out << rendered << "\n\n";
  out << "objective    " << ga.best_eval.objective << "  (complexity "
      << ga.best_eval.complexity << ", error " << ga.best_eval.error << ")\n";
  out << "train        " << (ga.best_is_feasible ? "feasible" : "INFEASIBLE") << "\n";
  out << "test dc-gain error    avg " << tm.avg_dc << " dB, max " << tm.max_dc << " dB\n";
  out << "test pole/zero error  avg " << tm.avg_root * 100.0 << " %, max "
      << tm.max_root * 100.0 << " %\n";
  out << "simplified terms      " << rep.total_terms << "\n";
  out << "wall time             " << wall << " s\n";
  if (!ga.best_is_feasible)
    out << "warning: no feasible candidate was found; reporting best by objective\n";
  if (report) *report = rep;
  return ga.best_is_feasible ? kExitOk : kExitInfeasible;
}

int cmd_exact(const std::string& netlist_path, std::ostream& out) {
  try {
    CircuitModel model = parse_netlist(read_file(netlist_path));
    ExactSymbolic exact = exact_symbolic(model);
    const auto tc = exact.term_count();
    out << exact.render(model) << "\n\n";
    out << "non-ground nodes: " << model.node_count << "\n";
    out << "parameters: " << model.parameter_count() << "\n";
    out << "numerator terms: " << tc.num_terms << "\n";
    out << "denominator terms: " << tc.den_terms << "\n";
    out << "total terms: " << tc.total << "\n";
    if (exact.has_repeated_parameters())
      out << "warning: expansion contains repeated parameter symbols\n";
    return kExitOk;
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_sample(const std::string& netlist_path, int count, std::uint64_t seed,
               std::ostream& out) {
  try {
    CircuitModel model = parse_netlist(read_file(netlist_path));
    Rng rng(seed);
    auto points = sample_dataset(model, count, rng);
    out << "d";
    for (const auto& pr : model.parameters) out << ',' << pr.name;
    out << ",dc_db,poles,zeros\n";
    out << std::setprecision(12);
    auto roots_field = [](const std::vector<Complex>& roots) {
      std::ostringstream ss;
      ss << std::setprecision(12);
      for (std::size_t i = 0; i < roots.size(); ++i) {
        if (i) ss << ';';
        ss << roots[i].real() << (roots[i].imag() < 0 ? "-" : "+")
           << std::abs(roots[i].imag()) << "i";
      }
      return ss.str();
    };
    for (std::size_t d = 0; d < points.size(); ++d) {
      out << d;
      for (double v : points[d].values) out << ',' << v;
      out << ',' << (points[d].exact_dc.finite ? points[d].exact_dc.db : std::nan(""));
      out << ",\"" << roots_field(points[d].exact_poles) << "\"";
      out << ",\"" << roots_field(points[d].exact_zeros) << "\"\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_eval(const std::string& netlist_path, const std::string& result_path,
             std::uint64_t seed, std::ostream& out) {
  try {
    CircuitModel model = parse_netlist(read_file(netlist_path));
    json j = json::parse(read_file(result_path));
    SymbolicRational sr = expression_from_json(j.at("expression"), model);

    const json& cj = j.at("config");
    const int train = cj.at("train").get<int>();
    const int test = cj.at("test").get<int>();
    const int ppd = cj.at("points_per_decade").get<int>();
    FitnessConfig fit;
    fit.w1 = cj.at("w1").get<double>();
    fit.w2 = cj.at("w2").get<double>();
    fit.t_dc = cj.at("t_dc").get<double>();
    fit.t_root = cj.at("t_root").get<double>();
    fit.penalty_lambda = cj.at("penalty_lambda").get<double>();
    fit.error_clamp_db = cj.at("error_clamp_db").get<double>();

    // Same data pipeline as cmd_run, so evaluating with the run's own seed
    // reproduces its test set exactly.
    const double omega0 = nominal_omega0(model);
    std::vector<double> nominal(model.parameter_count());
    for (int k = 0; k < model.parameter_count(); ++k)
      nominal[k] = model.parameters[k].nominal;
    NumericRational nom = extract_coeffs(build_pencil(model, nominal), omega0);
    FrequencyGrid grid = frequency_grid(nom, ppd);
    Rng rng(seed);
    auto points = sample_dataset(model, train + test, rng, omega0);
    Dataset ds = split(std::move(points), train, test, rng);

    TestMetrics tm = test_metrics(sr, ds.test, grid, fit);
    ordered_json r;
    r["seed"] = seed;
    r["test_points"] = test;
    r["avg_dc_error_db"] = tm.avg_dc;
    r["max_dc_error_db"] = tm.max_dc;
    r["avg_root_error_pct"] = tm.avg_root * 100.0;
    r["max_root_error_pct"] = tm.max_root * 100.0;
    out << r.dump(2) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace dssa
