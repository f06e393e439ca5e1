// Command-line driver.  Subcommands:
//
//   gen            write a generated problem file
//   sample         draw states (tree-cached, fresh-tree, or basic SCP)
//   diag           energy vs log_q scatter with the reference line
//   mcmc           Metropolis-Hastings by sequential constraining
//   suggest-params population/KL-budget scaling for a new system size
//
// Exit codes: 0 success, 2 configuration or usage error, 3 size-guard
// refusal (an operation that would enumerate or allocate beyond its cap).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sss/driver.hpp"

namespace {

struct Overrides {
  CLI::Option* seed = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* threads = nullptr;
  CLI::Option* mode = nullptr;
  CLI::Option* estimator = nullptr;
  CLI::Option* branch_rule = nullptr;
  std::uint64_t seed_v = 0;
  std::string out_v;
  int threads_v = 1;
  std::string mode_v;
  std::string estimator_v;
  std::string branch_rule_v;

  void attach(CLI::App* cmd, bool sampling) {
    seed = cmd->add_option("--seed", seed_v, "Override the config seed");
    out = cmd->add_option("--out", out_v, "Output path (default stdout)");
    threads =
        cmd->add_option("--threads", threads_v, "Population worker threads");
    if (sampling) {
      mode = cmd->add_option("--mode", mode_v, "sss or scp-basic")
                 ->check(CLI::IsMember({"sss", "scp-basic"}));
      estimator =
          cmd->add_option("--estimator", estimator_v, "count or rb")
              ->check(CLI::IsMember({"count", "rb"}));
      branch_rule =
          cmd->add_option("--branch-rule", branch_rule_v,
                          "fixed, random, neighbour or bisection")
              ->check(CLI::IsMember(
                  {"fixed", "random", "neighbour", "bisection"}));
    }
  }

  void apply(sss::RunConfig& cfg) const {
    if (seed && seed->count()) cfg.seed = seed_v;
    if (out && out->count()) cfg.out = out_v;
    if (threads && threads->count()) cfg.threads = threads_v;
    if (mode && mode->count()) cfg.mode = sss::run_mode_from_string(mode_v);
    if (estimator && estimator->count())
      cfg.sampler.estimator = sss::estimator_mode_from_string(estimator_v);
    if (branch_rule && branch_rule->count())
      cfg.sampler.branch_rule = sss::branch_rule_from_string(branch_rule_v);
    cfg.validate();
  }
};

// Runs `body(out_stream)` against cfg.out or stdout.
template <typename Body>
void with_output(const std::string& path, Body&& body) {
  if (path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw sss::ConfigError("cannot open output path '" + path + "'");
  body(out);
  if (!out) throw sss::ConfigError("error writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"State-space sampling for Ising models"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a problem file");
  std::string gen_family;
  std::vector<int> gen_size;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  bool gen_periodic = false, gen_open = false;
  gen->add_option("family", gen_family,
                  "independent, chain, sk or grid3d")
      ->required();
  gen->add_option("size", gen_size, "m, or three grid dimensions")
      ->required()
      ->expected(1, 3);
  gen->add_flag("--periodic", gen_periodic, "Wrap grid axes (default)");
  gen->add_flag("--open", gen_open, "Open grid boundaries");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output path (default stdout)");

  // sample
  auto* sample = app.add_subcommand("sample", "Draw states per a config");
  std::string sample_config;
  sample->add_option("--config", sample_config, "Run config file")->required();
  Overrides sample_ov;
  sample_ov.attach(sample, true);

  // diag
  auto* diag = app.add_subcommand("diag", "Boltzmann-line scatter data");
  std::string diag_samples, diag_config;
  double diag_logz = 0.0;
  diag->add_option("samples", diag_samples, "Samples file from `sample`")
      ->required();
  diag->add_option("--config", diag_config, "Config naming the problem")
      ->required();
  auto* diag_logz_opt =
      diag->add_option("--log-z", diag_logz, "Reference log Z override");
  std::string diag_source = "auto";
  diag->add_option("--log-z-source", diag_source,
                   "auto, oracle, enumerate or estimate")
      ->check(CLI::IsMember({"auto", "oracle", "enumerate", "estimate"}));
  Overrides diag_ov;
  diag_ov.attach(diag, false);

  // mcmc
  auto* mcmc = app.add_subcommand("mcmc", "Run the SCP MCMC kernel");
  std::string mcmc_config;
  mcmc->add_option("--config", mcmc_config, "Run config file")->required();
  Overrides mcmc_ov;
  mcmc_ov.attach(mcmc, true);

  // suggest-params
  auto* suggest =
      app.add_subcommand("suggest-params", "Scale N and theta to a new m");
  int sg_m = 0, sg_m0 = 100;
  long long sg_n0 = 2000;
  double sg_theta0 = 0.05;
  suggest->add_option("--m", sg_m, "Target system size")->required();
  suggest->add_option("--m0", sg_m0, "Reference size");
  suggest->add_option("--n0", sg_n0, "Reference population size");
  suggest->add_option("--theta0", sg_theta0, "Reference KL budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      if (gen_periodic && gen_open)
        throw sss::ConfigError("--periodic and --open are exclusive");
      sss::Family fam = sss::family_from_string(gen_family);
      if (fam == sss::Family::grid3d) {
        if (gen_size.size() == 2)
          throw sss::ConfigError("grid3d takes one size or three");
      } else if (gen_size.size() != 1) {
        throw sss::ConfigError(gen_family + " takes a single size");
      }
      int lx = gen_size[0];
      int ly = gen_size.size() == 3 ? gen_size[1] : 0;
      int lz = gen_size.size() == 3 ? gen_size[2] : 0;
      with_output(gen_out, [&](std::ostream& out) {
        sss::run_gen(fam, lx, ly, lz, !gen_open, gen_seed, out);
      });
    } else if (*sample) {
      sss::RunConfig cfg = sss::parse_config_file(sample_config);
      sample_ov.apply(cfg);
      with_output(cfg.out,
                  [&](std::ostream& out) { sss::run_sample(cfg, out); });
    } else if (*diag) {
      sss::RunConfig cfg = sss::parse_config_file(diag_config);
      diag_ov.apply(cfg);
      sss::IsingModel model = sss::load_problem(cfg);
      std::optional<double> logz;
      if (diag_logz_opt->count()) logz = diag_logz;
      sss::LogZSource src = sss::LogZSource::auto_pick;
      if (diag_source == "oracle") src = sss::LogZSource::oracle;
      else if (diag_source == "enumerate") src = sss::LogZSource::enumerate;
      else if (diag_source == "estimate") src = sss::LogZSource::estimate;
      with_output(cfg.out, [&](std::ostream& out) {
        sss::run_diag(diag_samples, model, logz, src, out);
      });
    } else if (*mcmc) {
      sss::RunConfig cfg = sss::parse_config_file(mcmc_config);
      mcmc_ov.apply(cfg);
      cfg.mode = sss::RunMode::mcmc;
      with_output(cfg.out,
                  [&](std::ostream& out) { sss::run_mcmc(cfg, out); });
    } else if (*suggest) {
      sss::SuggestedParams p =
          sss::suggest_params(sg_m, sg_m0, sg_n0, sg_theta0);
      std::cout << "population_size = " << p.population_size << '\n'
                << "theta = " << sss::format_real(p.theta) << '\n';
    }
  } catch (const sss::SizeError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 3;
  } catch (const sss::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
