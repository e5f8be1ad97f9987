// Command-line front end for the experiments.
//
//   lpcont census --set N_max=40
//   lpcont perturb --config sweep.cfg --set p=1.5,2,3 --out sweep.csv
//
// Exit codes: 0 success, 2 config error, 3 admissibility or splitting error,
// 4 numerical failure.

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "lpcont/errors.hpp"
#include "lpcont/experiments.hpp"

namespace {

using Runner = std::function<void(const lpcont::ExperimentConfig&, std::ostream&)>;

template <typename F>
Runner wrap(F f) {
  return [f](const lpcont::ExperimentConfig& c, std::ostream& os) { f(c, os); };
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::pair<std::string, Runner>> commands{
      {"census", {"splitting census of the square cutoffs F_N", wrap(lpcont::run_census)}},
      {"perturb", {"projection difference sweep over a map family", wrap(lpcont::run_perturb_sweep)}},
      {"kato", {"contour projections against direct projections", wrap(lpcont::run_kato_check)}},
      {"multiplier", {"Mihlin constant of the cut-off resolvent symbol", wrap(lpcont::run_multiplier_growth)}},
      {"lebesgue", {"p-norms of square and ball partial-sum projections", wrap(lpcont::run_lebesgue_trend)}},
      {"eigencont", {"eigenvalue ratios under the bump family", wrap(lpcont::run_eigen_continuity)}},
  };

  CLI::App app{"Spectral projections of the Dirichlet Laplacian under domain perturbation"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  std::vector<std::string> settings;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--set", settings, "override one key (repeatable)")->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--out", out_path, "CSV output path (default stdout)");
  auto* seed_option = app.add_option("--seed", seed, "random seed");
  for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    lpcont::ExperimentConfig config;
    config.experiment = app.get_subcommands().front()->get_name();
    if (!config_path.empty()) lpcont::load_config_file(config, config_path);
    for (const auto& s : settings) lpcont::apply_assignment(config, s);
    if (seed_option->count() > 0) config.seed = seed;
    if (!out_path.empty()) config.out = out_path;

    const auto& run = commands.at(config.experiment).second;
    if (config.out.empty()) {
      run(config, std::cout);
    } else {
      std::ofstream out(config.out);
      if (!out) throw lpcont::ConfigError("cannot write " + config.out);
      run(config, out);
    }
  } catch (const lpcont::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const lpcont::AdmissibilityError& e) {
    std::cerr << "inadmissible map: " << e.what() << '\n';
    return 3;
  } catch (const lpcont::SplittingError& e) {
    std::cerr << "splitting: " << e.what() << '\n';
    return 3;
  } catch (const lpcont::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
