#include <CLI11.hpp>
#include <iostream>

#include "dssa/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dssa - direct simplified symbolic analysis of linear analog circuits"};
  app.require_subcommand(1);

  dssa::RunConfig cfg;
  std::string config_file;
  auto* run = app.add_subcommand("run", "full pipeline: parse, sample, optimize, report");
  run->add_option("netlist", cfg.netlist_path, "netlist file")->required();
  run->add_option("--config", config_file, "flat key = value config file");
  run->add_option("--seed", cfg.seed, "random seed");
  run->add_option("--pop", cfg.ga.population, "population size");
  run->add_option("--iters", cfg.ga.iterations, "GA iterations");
  run->add_option("--train", cfg.train, "train data points");
  run->add_option("--test", cfg.test, "test data points");
  run->add_option("--max-terms", cfg.max_terms, "max terms per polynomial (T)");
  run->add_option("-o,--output", cfg.output_dir, "output directory");
  run->add_flag("--parallel", cfg.parallel, "concurrent fitness evaluation");
  run->add_flag("--verbose", cfg.verbose, "per-iteration progress lines");

  std::string exact_netlist;
  auto* exact = app.add_subcommand("exact", "exact symbolic expansion (oracle)");
  exact->add_option("netlist", exact_netlist, "netlist file")->required();

  std::string sample_netlist;
  int sample_count = 10;
  std::uint64_t sample_seed = 1;
  auto* sample = app.add_subcommand("sample", "dump a Monte Carlo dataset as CSV");
  sample->add_option("netlist", sample_netlist, "netlist file")->required();
  sample->add_option("-n,--count", sample_count, "number of points");
  sample->add_option("--seed", sample_seed, "random seed");

  std::string eval_netlist, eval_result;
  std::uint64_t eval_seed = 1;
  auto* eval = app.add_subcommand("eval", "re-score a saved expression on a fresh test set");
  eval->add_option("netlist", eval_netlist, "netlist file")->required();
  eval->add_option("result", eval_result, "result.json from a previous run")->required();
  eval->add_option("--seed", eval_seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (!config_file.empty()) {
        // Config file supplies the base; explicit CLI flags override it.
        dssa::RunConfig file_cfg = cfg;
        file_cfg.apply_config_file(config_file);
        if (!run->count("--seed")) cfg.seed = file_cfg.seed;
        if (!run->count("--pop")) cfg.ga.population = file_cfg.ga.population;
        if (!run->count("--iters")) cfg.ga.iterations = file_cfg.ga.iterations;
        if (!run->count("--train")) cfg.train = file_cfg.train;
        if (!run->count("--test")) cfg.test = file_cfg.test;
        if (!run->count("--max-terms")) cfg.max_terms = file_cfg.max_terms;
        cfg.ga.p_r = file_cfg.ga.p_r;
        cfg.ga.p_c = file_cfg.ga.p_c;
        cfg.ga.p_m = file_cfg.ga.p_m;
        cfg.fitness = file_cfg.fitness;
        cfg.points_per_decade = file_cfg.points_per_decade;
      }
      return dssa::cmd_run(cfg, std::cout);
    }
    if (exact->parsed()) return dssa::cmd_exact(exact_netlist, std::cout);
    if (sample->parsed())
      return dssa::cmd_sample(sample_netlist, sample_count, sample_seed, std::cout);
    if (eval->parsed())
      return dssa::cmd_eval(eval_netlist, eval_result, eval_seed, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dssa::kExitError;
  }
  return dssa::kExitError;
}
