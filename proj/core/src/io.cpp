#include "sss/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace sss {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& what) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& origin, int line, const std::string& key,
                  const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "': expected a real, got '" + v + "'");
  }
}

long long parse_int(const std::string& origin, int line, const std::string& key,
                    const std::string& v) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (const std::exception&) {
    fail(origin, line,
         "key '" + key + "': expected an integer, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& origin, int line,
                        const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    std::uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (const std::exception&) {
    fail(origin, line,
         "key '" + key + "': expected an unsigned integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& origin, int line, const std::string& key,
                const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(origin, line, "key '" + key + "': expected a boolean, got '" + v + "'");
}

}  // namespace

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::sss: return "sss";
    case RunMode::scp_basic: return "scp-basic";
    case RunMode::mcmc: return "mcmc";
  }
  return "?";
}

RunMode run_mode_from_string(std::string_view s) {
  if (s == "sss") return RunMode::sss;
  if (s == "scp-basic") return RunMode::scp_basic;
  if (s == "mcmc") return RunMode::mcmc;
  throw ConfigError("unknown mode '" + std::string(s) +
                    "' (expected sss, scp-basic or mcmc)");
}

void RunConfig::validate() const {
  if (problem_path.empty() == family.empty())
    throw ConfigError(
        "exactly one of 'problem' and 'family' must be configured");
  if (!family.empty()) {
    try {
      family_from_string(family);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    if (size_x < 1) throw ConfigError("'size' must be set and positive");
  }
  if (beta < 0.0) throw ConfigError("'beta' must be >= 0");
  if (heuristic != "sa" && heuristic != "exact")
    throw ConfigError("unknown heuristic '" + heuristic +
                      "' (expected sa or exact)");
  if (schedule.n_steps < 0) throw ConfigError("'heuristic.n_steps' must be >= 0");
  if (schedule.sweeps_per_step < 0)
    throw ConfigError("'heuristic.sweeps_per_step' must be >= 0");
  try {
    sampler.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("sampler: ") + e.what());
  }
  if (draws < 0) throw ConfigError("'draws' must be >= 0");
  if (mcmc_steps < 0) throw ConfigError("'mcmc.steps' must be >= 0");
  if (threads < 1) throw ConfigError("'threads' must be >= 1");
}

RunConfig parse_config(std::istream& in, const std::string& origin) {
  RunConfig cfg;
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      fail(origin, ln, "expected 'key = value', got '" + t + "'");
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string val = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) fail(origin, ln, "empty key");

    try {
      if (key == "problem") {
        cfg.problem_path = val;
      } else if (key == "family") {
        cfg.family = val;
      } else if (key == "size") {
        std::istringstream ss(val);
        std::vector<int> dims;
        std::string tok;
        while (ss >> tok)
          dims.push_back(static_cast<int>(parse_int(origin, ln, key, tok)));
        if (dims.size() != 1 && dims.size() != 3)
          fail(origin, ln, "'size' takes one value or three (grid dims)");
        cfg.size_x = dims[0];
        cfg.size_y = dims.size() == 3 ? dims[1] : 0;
        cfg.size_z = dims.size() == 3 ? dims[2] : 0;
      } else if (key == "periodic") {
        cfg.periodic = parse_bool(origin, ln, key, val);
      } else if (key == "problem.seed") {
        cfg.problem_seed = parse_u64(origin, ln, key, val);
        cfg.problem_seed_set = true;
      } else if (key == "beta") {
        cfg.beta = parse_real(origin, ln, key, val);
      } else if (key == "heuristic") {
        cfg.heuristic = val;
      } else if (key == "heuristic.beta_start") {
        cfg.schedule.beta_start = parse_real(origin, ln, key, val);
      } else if (key == "heuristic.n_steps") {
        cfg.schedule.n_steps =
            static_cast<int>(parse_int(origin, ln, key, val));
      } else if (key == "heuristic.sweeps_per_step") {
        cfg.schedule.sweeps_per_step =
            static_cast<int>(parse_int(origin, ln, key, val));
      } else if (key == "heuristic.order") {
        if (val == "sequential")
          cfg.schedule.order = SaSchedule::Order::sequential;
        else if (val == "random")
          cfg.schedule.order = SaSchedule::Order::random_permutation;
        else
          fail(origin, ln, "'heuristic.order' is sequential or random");
      } else if (key == "sampler.population_size") {
        cfg.sampler.population_size = parse_int(origin, ln, key, val);
      } else if (key == "sampler.theta") {
        cfg.sampler.theta = parse_real(origin, ln, key, val);
      } else if (key == "sampler.max_tree_size") {
        cfg.sampler.max_tree_size = parse_int(origin, ln, key, val);
      } else if (key == "sampler.count_threshold") {
        cfg.sampler.count_threshold = parse_int(origin, ln, key, val);
      } else if (key == "sampler.estimator") {
        cfg.sampler.estimator = estimator_mode_from_string(val);
      } else if (key == "sampler.branch_rule") {
        cfg.sampler.branch_rule = branch_rule_from_string(val);
      } else if (key == "mode") {
        cfg.mode = run_mode_from_string(val);
      } else if (key == "tree") {
        if (val == "cached")
          cfg.fresh_tree = false;
        else if (val == "fresh")
          cfg.fresh_tree = true;
        else
          fail(origin, ln, "'tree' is cached or fresh");
      } else if (key == "draws") {
        cfg.draws = parse_int(origin, ln, key, val);
      } else if (key == "mcmc.steps") {
        cfg.mcmc_steps = parse_int(origin, ln, key, val);
      } else if (key == "seed") {
        cfg.seed = parse_u64(origin, ln, key, val);
      } else if (key == "threads") {
        cfg.threads = static_cast<int>(parse_int(origin, ln, key, val));
      } else if (key == "out") {
        cfg.out = val;
      } else {
        fail(origin, ln, "unknown key '" + key + "'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(origin, ln, "key '" + key + "': " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

RunConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "<config>");
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string canonical_config_string(const RunConfig& cfg) {
  std::ostringstream os;
  os << "problem=" << cfg.problem_path << '\n'
     << "family=" << cfg.family << '\n'
     << "size=" << cfg.size_x << ' ' << cfg.size_y << ' ' << cfg.size_z << '\n'
     << "periodic=" << (cfg.periodic ? 1 : 0) << '\n'
     << "problem.seed="
     << (cfg.problem_seed_set ? cfg.problem_seed : cfg.seed) << '\n'
     << "beta=" << format_real(cfg.beta) << '\n'
     << "heuristic=" << cfg.heuristic << '\n'
     << "heuristic.beta_start=" << format_real(cfg.schedule.beta_start) << '\n'
     << "heuristic.n_steps=" << cfg.schedule.n_steps << '\n'
     << "heuristic.sweeps_per_step=" << cfg.schedule.sweeps_per_step << '\n'
     << "heuristic.order="
     << (cfg.schedule.order == SaSchedule::Order::sequential ? "sequential"
                                                             : "random")
     << '\n'
     << "sampler.population_size=" << cfg.sampler.population_size << '\n'
     << "sampler.theta=" << format_real(cfg.sampler.theta) << '\n'
     << "sampler.max_tree_size=" << cfg.sampler.max_tree_size << '\n'
     << "sampler.count_threshold=" << cfg.sampler.count_threshold << '\n'
     << "sampler.estimator=" << to_string(cfg.sampler.estimator) << '\n'
     << "sampler.branch_rule=" << to_string(cfg.sampler.branch_rule) << '\n'
     << "mode=" << to_string(cfg.mode) << '\n'
     << "tree=" << (cfg.fresh_tree ? "fresh" : "cached") << '\n'
     << "draws=" << cfg.draws << '\n'
     << "mcmc.steps=" << cfg.mcmc_steps << '\n'
     << "seed=" << cfg.seed << '\n'
     << "threads=" << cfg.threads << '\n';
  return os.str();
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  return fnv1a64(canonical_config_string(cfg));
}

IsingModel load_problem(const RunConfig& cfg) {
  if (!cfg.problem_path.empty()) return read_problem_file(cfg.problem_path);
  Family fam = family_from_string(cfg.family);
  std::uint64_t s = cfg.problem_seed_set ? cfg.problem_seed : cfg.seed;
  if (fam == Family::grid3d) {
    int lx = cfg.size_x;
    int ly = cfg.size_y > 0 ? cfg.size_y : cfg.size_x;
    int lz = cfg.size_z > 0 ? cfg.size_z : cfg.size_x;
    return generate_grid3d(lx, ly, lz, cfg.periodic, s);
  }
  return generate_problem(fam, cfg.size_x, s);
}

std::unique_ptr<Heuristic> make_heuristic(const RunConfig& cfg,
                                          const IsingModel& model) {
  std::unique_ptr<Heuristic> h;
  if (cfg.heuristic == "exact")
    h = make_exact_heuristic(model);
  else
    h = std::make_unique<AnnealHeuristic>(cfg.schedule);
  h->set_threads(cfg.threads);
  return h;
}

// --- table files -----------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

}  // namespace

TableFile read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  TableFile t;
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = trim(std::string_view(line).substr(1));
      if (body.rfind("summary:", 0) == 0) {
        std::string kv = trim(std::string_view(body).substr(8));
        auto eq = kv.find('=');
        if (eq == std::string::npos)
          fail(path, ln, "malformed summary line");
        t.summary[trim(std::string_view(kv).substr(0, eq))] =
            trim(std::string_view(kv).substr(eq + 1));
      } else if (auto colon = body.find(':'); colon != std::string::npos) {
        std::string key = trim(std::string_view(body).substr(0, colon));
        std::string val = trim(std::string_view(body).substr(colon + 1));
        if (key == "columns")
          t.columns = split_csv(val);
        else
          t.header[key] = val;
      }
      // bare comment lines are ignored
      continue;
    }
    auto fields = split_csv(line);
    if (!t.columns.empty() && fields.size() != t.columns.size())
      fail(path, ln,
           "expected " + std::to_string(t.columns.size()) + " fields, got " +
               std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
  }
  return t;
}

double SamplesFile::header_real(const std::string& key) const {
  auto it = header.find(key);
  if (it == header.end())
    throw ConfigError("samples file lacks header key '" + key + "'");
  return std::stod(it->second);
}

SamplesFile read_samples_file(const std::string& path) {
  TableFile t = read_table_file(path);
  std::vector<std::string> want = {"index",       "state",    "energy",
                                   "log_q",       "refresh_calls",
                                   "fallback"};
  if (t.columns != want)
    throw ConfigError("'" + path + "' is not a samples table");
  SamplesFile s;
  s.header = std::move(t.header);
  s.summary = std::move(t.summary);
  s.rows.reserve(t.rows.size());
  for (const auto& f : t.rows) {
    SampleRow r;
    r.index = std::stoll(f[0]);
    r.state = f[1];
    r.energy = std::stod(f[2]);
    r.log_q = std::stod(f[3]);
    r.refresh_calls = std::stoi(f[4]);
    r.fallback = f[5] == "1";
    s.rows.push_back(std::move(r));
  }
  return s;
}

}  // namespace sss
