#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corot/driver.hpp"
#include "corot/errors.hpp"

using namespace corot;

int main(int argc, char** argv) {
  CLI::App app{"corot: constrained evolution and vector-field diagnostics for "
               "self-gravitating corotational wave maps"};
  app.require_subcommand(1);

  std::string config_path, out_dir, run_dir, target_name = "flat";
  std::vector<std::string> overrides, multipliers{"X1"};
  std::vector<double> coeffs;
  double apex = 1.0, lambda = 0.5;
  double a_low = 0.0, a_high = 1.0, tol = 1e-3;
  double u_max = 10.0;
  int levels = 3, samples = 4096;

  auto add_config_opts = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--set", overrides, "override config keys (section.key=value)");
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
  };

  CLI::App* evolve = app.add_subcommand("evolve", "run an evolution");
  add_config_opts(evolve);

  CLI::App* diagnose = app.add_subcommand("diagnose", "cone / flux diagnostics of a run");
  diagnose->add_option("--run", run_dir, "run output directory")->required();
  diagnose->add_option("--multipliers", multipliers, "multipliers (X1 X2 X3 X4 kappa)");
  diagnose->add_option("--apex", apex, "apex time of the past null cone");
  diagnose->add_option("--lambda", lambda, "interior/exterior split factor in (0,1)");

  CLI::App* conv = app.add_subcommand("convergence", "grid refinement study");
  add_config_opts(conv);
  conv->add_option("--levels", levels, "number of doublings (>= 3)");

  CLI::App* bisect = app.add_subcommand("bisect", "critical amplitude bisection");
  add_config_opts(bisect);
  bisect->add_option("--a-low", a_low, "dispersing amplitude")->required();
  bisect->add_option("--a-high", a_high, "blowing-up amplitude")->required();
  bisect->add_option("--tol", tol, "bracket width tolerance");

  CLI::App* check = app.add_subcommand("check-target", "target admissibility conditions");
  check->add_option("--target", target_name, "flat|sphere|hyperbolic|poly");
  check->add_option("--coeffs", coeffs, "odd polynomial coefficients (c0=1)");
  check->add_option("--u-max", u_max, "probe range");
  check->add_option("--samples", samples, "sample count (>= 16)");

  CLI11_PARSE(app, argc, argv);

  try {
    auto load_config = [&]() {
      RunConfig cfg = RunConfig::from_file(config_path);
      for (const auto& kv : overrides) cfg.apply_override(kv);
      if (!out_dir.empty()) cfg.apply_override("output.dir=" + out_dir);
      return cfg;
    };

    if (evolve->parsed()) return cmd_evolve(load_config());
    if (diagnose->parsed()) return cmd_diagnose(run_dir, multipliers, apex, lambda);
    if (conv->parsed()) return cmd_convergence(load_config(), levels);
    if (bisect->parsed()) return cmd_bisect(load_config(), a_low, a_high, tol);
    if (check->parsed()) return cmd_check_target(target_name, coeffs, u_max, samples);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
