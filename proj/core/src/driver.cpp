#include "sss/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "sss/montecarlo.hpp"
#include "sss/rng.hpp"
#include "sss/sampler.hpp"
#include "sss/sstree.hpp"

namespace sss {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void write_common_header(std::ostream& out, const char* kind,
                         const RunConfig& cfg, const IsingModel& model) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  out << "# sss " << kind << " v1\n"
      << "# config_hash: " << hash << '\n'
      << "# seed: " << cfg.seed << '\n'
      << "# m: " << model.num_spins() << '\n'
      << "# beta: " << format_real(cfg.beta) << '\n'
      << "# mode: " << to_string(cfg.mode) << '\n'
      << "# heuristic: " << cfg.heuristic << '\n'
      << "# estimator: " << to_string(cfg.sampler.estimator) << '\n'
      << "# branch_rule: " << to_string(cfg.sampler.branch_rule) << '\n'
      << "# population_size: " << cfg.sampler.population_size << '\n';
}

}  // namespace

void run_gen(Family family, int lx, int ly, int lz, bool periodic,
             std::uint64_t seed, std::ostream& out) {
  IsingModel model =
      family == Family::grid3d
          ? generate_grid3d(lx, ly > 0 ? ly : lx, lz > 0 ? lz : lx, periodic,
                            seed)
          : generate_problem(family, lx, seed);
  write_problem(out, model,
                {"family: " + to_string(family),
                 "generator seed: " + std::to_string(seed)});
}

void run_sample(const RunConfig& cfg, std::ostream& out) {
  if (cfg.mode == RunMode::mcmc)
    throw ConfigError("mode mcmc belongs to the mcmc command");
  auto t0 = std::chrono::steady_clock::now();

  IsingModel model = load_problem(cfg);
  auto heuristic = make_heuristic(cfg, model);

  SamplerParams params = cfg.sampler;
  params.beta = cfg.beta;

  write_common_header(out, "samples", cfg, model);
  out << "# tree: " << (cfg.fresh_tree ? "fresh" : "cached") << '\n'
      << "# columns: index,state,energy,log_q,refresh_calls,fallback\n";

  std::mt19937_64 eng(rng::mix(cfg.seed, 0x53414D50ull));
  std::vector<DrawResult> draws;
  draws.reserve(static_cast<std::size_t>(cfg.draws));
  long long heuristic_calls = 0;
  long long fallbacks = 0;

  auto emit = [&](long long i, const DrawResult& d) {
    out << i << ',' << state_to_string(d.state) << ','
        << format_real(model.energy(d.state)) << ',' << format_real(d.log_q)
        << ',' << d.refresh_calls << ',' << (d.used_fallback ? 1 : 0) << '\n';
  };

  if (cfg.mode == RunMode::scp_basic) {
    for (long long i = 0; i < cfg.draws; ++i) {
      DrawResult d = scp_basic(model, *heuristic, params, eng);
      heuristic_calls += d.refresh_calls;
      fallbacks += d.used_fallback;
      emit(i, d);
      draws.push_back(std::move(d));
    }
  } else if (cfg.fresh_tree) {
    for (long long i = 0; i < cfg.draws; ++i) {
      SamplerParams p = params;
      p.seed = rng::mix(cfg.seed, 0x54524545ull, static_cast<std::uint64_t>(i));
      SubcubeTree tree(model, p);
      DrawResult d = draw(tree, *heuristic, eng);
      heuristic_calls += tree.refresh_count() + (d.used_fallback ? 1 : 0);
      fallbacks += d.used_fallback;
      emit(i, d);
      draws.push_back(std::move(d));
    }
  } else {
    SamplerParams p = params;
    p.seed = rng::mix(cfg.seed, 0x54524545ull, 0);
    SubcubeTree tree(model, p);
    for (long long i = 0; i < cfg.draws; ++i) {
      DrawResult d = draw(tree, *heuristic, eng);
      fallbacks += d.used_fallback;
      emit(i, d);
      draws.push_back(std::move(d));
    }
    heuristic_calls = tree.refresh_count() + fallbacks;
  }

  out << "# summary: draws=" << cfg.draws << '\n'
      << "# summary: fallbacks=" << fallbacks << '\n'
      << "# summary: heuristic_calls=" << heuristic_calls << '\n';
  if (draws.empty()) {
    out << "# summary: note=no draws; estimates unavailable\n";
  } else {
    auto weighted = weigh(draws, model, cfg.beta);
    LogZEstimate z = estimate_logz(weighted);
    out << "# summary: log_z_hat=" << format_real(z.log_z_hat) << '\n';
    if (weighted.size() >= 2) {
      WeightDiagnostics d = weight_diagnostics(weighted);
      out << "# summary: log_se_z=" << format_real(z.log_se) << '\n'
          << "# summary: weight_variance=" << format_real(d.weight_variance)
          << '\n'
          << "# summary: ess=" << format_real(d.ess) << '\n';
    }
  }
  out << "# summary: wall_time_s=" << seconds_since(t0) << '\n';
}

void run_mcmc(const RunConfig& cfg, std::ostream& out) {
  auto t0 = std::chrono::steady_clock::now();

  IsingModel model = load_problem(cfg);
  auto heuristic = make_heuristic(cfg, model);

  SamplerParams params = cfg.sampler;
  params.beta = cfg.beta;
  params.seed = rng::mix(cfg.seed, 0x4D434D43ull);

  write_common_header(out, "mcmc", cfg, model);
  out << "# columns: step,state,energy,accepted\n";

  McmcState mc = mcmc_init(model, cfg.beta, rng::mix(cfg.seed, 0x49243ull));
  std::mt19937_64 eng(rng::mix(cfg.seed, 0x4D435453ull));

  auto emit = [&](long long step, bool accepted) {
    out << step << ',' << state_to_string(mc.x) << ','
        << format_real(model.energy(mc.x)) << ',' << (accepted ? 1 : 0)
        << '\n';
  };
  emit(0, false);
  for (long long s = 1; s <= cfg.mcmc_steps; ++s) {
    long long before = mc.accepts;
    mcmc_step(mc, model, *heuristic, params, eng);
    emit(s, mc.accepts > before);
  }

  out << "# summary: steps=" << mc.steps << '\n'
      << "# summary: accepts=" << mc.accepts << '\n'
      << "# summary: acceptance_rate="
      << format_real(mc.steps > 0 ? mc.acceptance_rate() : 0.0) << '\n'
      << "# summary: wall_time_s=" << seconds_since(t0) << '\n';
}

namespace {

// IS estimate of log Z from the rows of a samples file.
double logz_from_rows(const SamplesFile& samples, double beta) {
  if (samples.rows.empty())
    throw ConfigError("cannot estimate log Z from an empty samples table");
  std::vector<WeightedSample> w;
  w.reserve(samples.rows.size());
  for (const auto& r : samples.rows) {
    WeightedSample s;
    s.log_q = r.log_q;
    s.log_pi_tilde = -beta * r.energy;
    s.log_w = s.log_pi_tilde - s.log_q;
    w.push_back(std::move(s));
  }
  return estimate_logz(w).log_z_hat;
}

}  // namespace

void run_diag(const std::string& samples_path, const IsingModel& model,
              std::optional<double> log_z_override, LogZSource source,
              std::ostream& out) {
  SamplesFile samples = read_samples_file(samples_path);
  double beta = samples.header_real("beta");
  for (const auto& r : samples.rows)
    if (static_cast<int>(r.state.size()) != model.num_spins())
      throw ConfigError("samples file does not match the model (m mismatch)");

  bool has_closed_form = model.topology() == Topology::independent ||
                         model.topology() == Topology::chain;
  if (source == LogZSource::auto_pick)
    source = has_closed_form ? LogZSource::oracle
             : model.num_spins() <= 20 ? LogZSource::enumerate
                                       : LogZSource::estimate;

  double log_z = 0.0;
  std::string source_name;
  if (log_z_override) {
    log_z = *log_z_override;
    source_name = "given";
  } else if (source == LogZSource::oracle) {
    if (model.topology() == Topology::independent) {
      log_z = exact_logz_independent(model, beta);
      source_name = "oracle-independent";
    } else if (model.topology() == Topology::chain) {
      log_z = exact_logz_chain(model, beta);
      source_name = "oracle-chain";
    } else {
      throw ConfigError("no closed-form log Z for this topology");
    }
  } else if (source == LogZSource::enumerate) {
    log_z = enumerate_distribution(model, beta).log_z;  // may throw SizeError
    source_name = "enumeration";
  } else {
    log_z = logz_from_rows(samples, beta);
    source_name = "estimate";  // no oracle for this topology
  }

  std::vector<double> energies, log_qs;
  energies.reserve(samples.rows.size());
  log_qs.reserve(samples.rows.size());
  for (const auto& r : samples.rows) {
    energies.push_back(r.energy);
    log_qs.push_back(r.log_q);
  }

  out << "# sss diag v1\n"
      << "# samples: " << samples_path << '\n'
      << "# m: " << model.num_spins() << '\n'
      << "# beta: " << format_real(beta) << '\n'
      << "# log_z: " << format_real(log_z) << '\n'
      << "# log_z_source: " << source_name << '\n'
      << "# line_slope: " << format_real(-beta) << '\n'
      << "# line_intercept: " << format_real(-log_z) << '\n';
  if (energies.size() >= 2) {
    BoltzmannFit fit = fit_boltzmann_line(energies, log_qs, beta, log_z);
    out << "# fit_slope: " << format_real(fit.fit_slope) << '\n'
        << "# fit_intercept: " << format_real(fit.fit_intercept) << '\n'
        << "# residual_sd: " << format_real(fit.residual_sd) << '\n';
  }
  out << "# columns: energy,log_q\n";
  for (std::size_t i = 0; i < energies.size(); ++i)
    out << format_real(energies[i]) << ',' << format_real(log_qs[i]) << '\n';
}

SuggestedParams suggest_params(int m, int m0, long long n0, double theta0) {
  if (m < 1 || m0 < 1 || n0 < 1 || theta0 <= 0.0)
    throw std::invalid_argument("suggest_params: all inputs must be positive");
  SuggestedParams s;
  double c = static_cast<double>(m) / static_cast<double>(m0);
  s.population_size =
      static_cast<long long>(std::llround(static_cast<double>(n0) * c));
  if (s.population_size < 1) s.population_size = 1;
  s.theta = theta0 / c;
  return s;
}

}  // namespace sss
