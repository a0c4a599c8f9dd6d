// qmlab: command-line harness for the microstate-counting laboratory.
//
// Subcommands: expand, born, eprb dist, eprb chsh, conditions report,
// lambda-one run, sweep theta, verify. Exit codes: 0 success, 1 check
// failure (verify modes), 2 config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmlab/serialize.hpp"
#include "qmlab/verify.hpp"

namespace fs = std::filesystem;
using namespace qmlab;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw CliError(path + ": " + e.what());
  }
}

json parse_config_file(const std::string& path) {
  const fs::path p(path);
  const std::string ext = p.extension().string();
  if (ext == ".json") return parse_json_file(path);
  if (ext == ".toml") {
    try {
      return toml::to_json(read_file(path));
    } catch (const std::runtime_error& e) {
      throw CliError(path + ": " + e.what());
    }
  }
  throw CliError(path + ": unknown config extension (want .json or .toml)");
}

std::vector<double> parse_csv_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw CliError(std::string(what) + ": cannot parse number '" + tok + "'");
    }
  }
  return out;
}

Direction parse_direction(const std::string& text, const char* what) {
  const std::vector<double> v = parse_csv_doubles(text, what);
  if (v.size() != 3) throw CliError(std::string(what) + ": expected x,y,z");
  try {
    return Direction::unit(v[0], v[1], v[2]);
  } catch (const std::exception& e) {
    throw CliError(std::string(what) + ": " + e.what());
  }
}

std::array<cdouble, 2> parse_chi(const std::string& text, const char* what) {
  const std::vector<double> v = parse_csv_doubles(text, what);
  if (v.size() == 2) return {cdouble{v[0], 0.0}, cdouble{v[1], 0.0}};
  if (v.size() == 4) return {cdouble{v[0], v[1]}, cdouble{v[2], v[3]}};
  throw CliError(std::string(what) + ": expected re,re or re,im,re,im");
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QMLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CliError("QMLAB_SEED: not an unsigned integer");
    }
  }
  return 0;
}

// Options shared by every scenario-driven subcommand. Flags override the file.
struct ScenarioOpts {
  std::string file;
  std::string state;
  std::string chi_a, chi_b;
  std::string a, a_prime, b, b_prime;
  std::string angles;
  std::string backend;
  std::size_t d_a = 0, d_b = 0, n = 0;

  CLI::Option* file_opt = nullptr;
  CLI::Option* state_opt = nullptr;
  CLI::Option* chi_a_opt = nullptr;
  CLI::Option* chi_b_opt = nullptr;
  CLI::Option* a_opt = nullptr;
  CLI::Option* a_prime_opt = nullptr;
  CLI::Option* b_opt = nullptr;
  CLI::Option* b_prime_opt = nullptr;
  CLI::Option* angles_opt = nullptr;
  CLI::Option* backend_opt = nullptr;
  CLI::Option* d_a_opt = nullptr;
  CLI::Option* d_b_opt = nullptr;
  CLI::Option* n_opt = nullptr;

  void attach(CLI::App* cmd) {
    file_opt = cmd->add_option("--scenario", file, "scenario file (.json or .toml)");
    state_opt = cmd->add_option("--state", state, "singlet | product");
    chi_a_opt = cmd->add_option("--chi-a", chi_a, "Alice spin state re,im,re,im");
    chi_b_opt = cmd->add_option("--chi-b", chi_b, "Bob spin state re,im,re,im");
    a_opt = cmd->add_option("--a", a, "direction a as x,y,z");
    a_prime_opt = cmd->add_option("--a-prime", a_prime, "direction a' as x,y,z");
    b_opt = cmd->add_option("--b", b, "direction b as x,y,z");
    b_prime_opt = cmd->add_option("--b-prime", b_prime, "direction b' as x,y,z");
    angles_opt = cmd->add_option("--angles", angles,
                                 "tsirelson, or four coplanar angles in radians t_a,t_a',t_b,t_b'");
    backend_opt = cmd->add_option("--backend", backend, "born | counting");
    d_a_opt = cmd->add_option("--d-a", d_a, "Alice spatial dimension");
    d_b_opt = cmd->add_option("--d-b", d_b, "Bob spatial dimension");
    n_opt = cmd->add_option("--n", n, "expansion size for the counting backend");
  }

  Scenario resolve() const {
    Scenario s;
    if (file_opt->count() > 0) {
      try {
        s = scenario_from_json(parse_config_file(file));
      } catch (const std::runtime_error& e) {
        throw CliError(e.what());
      }
    }
    if (angles_opt->count() > 0) {
      if (angles == "tsirelson") {
        const Scenario t = Scenario::tsirelson();
        s.a = t.a;
        s.a_prime = t.a_prime;
        s.b = t.b;
        s.b_prime = t.b_prime;
      } else {
        const std::vector<double> v = parse_csv_doubles(angles, "--angles");
        if (v.size() != 4) throw CliError("--angles: expected tsirelson or four radians");
        s.a = Direction::polar_xz(v[0]);
        s.a_prime = Direction::polar_xz(v[1]);
        s.b = Direction::polar_xz(v[2]);
        s.b_prime = Direction::polar_xz(v[3]);
      }
    }
    if (a_opt->count() > 0) s.a = parse_direction(a, "--a");
    if (a_prime_opt->count() > 0) s.a_prime = parse_direction(a_prime, "--a-prime");
    if (b_opt->count() > 0) s.b = parse_direction(b, "--b");
    if (b_prime_opt->count() > 0) s.b_prime = parse_direction(b_prime, "--b-prime");
    if (state_opt->count() > 0) {
      if (state == "singlet")
        s.kind = StateKind::Singlet;
      else if (state == "product")
        s.kind = StateKind::Product;
      else
        throw CliError("--state: expected singlet or product");
    }
    if (chi_a_opt->count() > 0) s.chi_a = parse_chi(chi_a, "--chi-a");
    if (chi_b_opt->count() > 0) s.chi_b = parse_chi(chi_b, "--chi-b");
    if (d_a_opt->count() > 0) s.d_a = d_a;
    if (d_b_opt->count() > 0) s.d_b = d_b;
    if (n_opt->count() > 0) s.n = n;
    if (backend_opt->count() > 0) {
      if (backend == "born")
        s.backend = Backend::Born;
      else if (backend == "counting")
        s.backend = Backend::Counting;
      else
        throw CliError("--backend: expected born or counting");
    }
    if (s.d_a < 1 || s.d_b < 1) throw CliError("spatial dimensions must be >= 1");
    return s;
  }
};

struct Output {
  std::string dir;
  CLI::Option* opt = nullptr;

  void attach(CLI::App* cmd) { opt = cmd->add_option("--out", dir, "directory for artifacts"); }
  bool enabled() const { return opt && opt->count() > 0; }
  void write(const std::string& name, const std::string& content) const {
    if (!enabled()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw CliError("--out: cannot create " + dir);
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw CliError("--out: cannot write " + name);
    out << content;
  }
};

int run_cli(int argc, char** argv) {
  CLI::App app{"numerical laboratory for microstate-counting probability and EPRB locality"};
  app.require_subcommand(1);

  // ---- expand -------------------------------------------------------------
  auto* expand_cmd = app.add_subcommand("expand", "build a seeded equiamplitude expansion");
  std::size_t ex_dim = 16, ex_n = 8, ex_cells = 0;
  std::uint64_t ex_seed = default_seed();
  bool ex_verify = false;
  Output ex_out;
  expand_cmd->add_option("--dim", ex_dim, "Hilbert-space dimension");
  expand_cmd->add_option("--n", ex_n, "number of microstates (n <= dim)");
  expand_cmd->add_option("--seed", ex_seed, "seed for the state and the expansion");
  expand_cmd->add_option("--cells", ex_cells,
                         "adapt to a seeded random resolution with this many cells "
                         "(default 0: generic expansion)");
  expand_cmd->add_flag("--verify", ex_verify, "exit 1 unless all invariants hold");
  ex_out.attach(expand_cmd);
  int exit_code = 0;
  expand_cmd->callback([&] {
    rng::Stream st(rng::mix(ex_seed, 0x57a7eull));
    StateVector psi;
    try {
      psi = random_state({ex_dim}, st);
    } catch (const std::exception& e) {
      throw CliError(e.what());
    }
    std::optional<Resolution> res;
    if (ex_cells > 0) {
      if (ex_cells > ex_dim) throw CliError("expand: --cells exceeds the dimension");
      std::vector<std::size_t> ranks(ex_cells, ex_dim / ex_cells);
      ranks[0] += ex_dim - (ex_dim / ex_cells) * ex_cells;
      res = random_resolution({ex_dim}, ranks, st);
    }
    EquiampExpansion e = [&] {
      try {
        return res ? expand_adapted(psi, *res, ex_n) : expand_generic(psi, ex_n, ex_seed);
      } catch (const std::invalid_argument& err) {
        throw CliError(std::string("expand: ") + err.what());
      }
    }();
    const ExpansionValidation v = e.validate();
    std::cout << "n = " << e.n() << ", dim = " << ex_dim << ", seed = " << ex_seed << "\n"
              << "max cross overlap   = " << fmt9(v.max_cross_overlap) << "\n"
              << "max norm deviation  = " << fmt9(v.max_norm_dev) << "\n"
              << "sum residual        = " << fmt9(v.sum_residual) << "\n"
              << "valid               = " << (v.pass() ? "yes" : "NO") << "\n";
    if (res) {
      const std::string csv = expansion_summary_csv(e, *res);
      std::cout << csv;
      ex_out.write("summary.csv", csv);
    }
    ex_out.write("expansion.json", to_json(e).dump(2) + "\n");
    if (ex_verify && !v.pass()) exit_code = 1;
  });

  // ---- born ---------------------------------------------------------------
  auto* born_cmd = app.add_subcommand("born", "Born probability of a projector in a state");
  std::string born_state, born_project;
  born_cmd->add_option("--state", born_state, "state JSON file {dims,re,im}")->required();
  born_cmd->add_option("--project", born_project, "projector JSON file {basis:[states]}")
      ->required();
  born_cmd->callback([&] {
    try {
      const StateVector psi = statevector_from_json(parse_json_file(born_state));
      const Projector p = projector_from_json(parse_json_file(born_project));
      std::cout << fmt9(born(psi, p)) << "\n";
    } catch (const CliError&) {
      throw;
    } catch (const std::exception& e) {
      throw CliError(e.what());
    }
  });

  // ---- eprb ---------------------------------------------------------------
  auto* eprb_cmd = app.add_subcommand("eprb", "EPRB distributions and CHSH");
  eprb_cmd->require_subcommand(1);

  auto* dist_cmd = eprb_cmd->add_subcommand("dist", "joint distributions for all setting pairs");
  ScenarioOpts dist_opts;
  dist_opts.attach(dist_cmd);
  Output dist_out;
  dist_out.attach(dist_cmd);
  dist_cmd->callback([&] {
    const Scenario s = dist_opts.resolve();
    const StateVector psi = scenario_state(s);
    std::vector<std::pair<std::string, JointDistribution>> named;
    json all = json::array();
    const auto pairs = s.setting_pairs();
    for (std::size_t i = 0; i < 4; ++i) {
      try {
        const JointDistribution d =
            joint_distribution(psi, pairs[i].first, pairs[i].second, s.backend, s.n);
        named.emplace_back(Scenario::pair_name(i), d);
        all.push_back(to_json(d));
      } catch (const std::exception& e) {
        throw CliError(std::string("eprb dist: ") + e.what());
      }
    }
    const std::string csv = distribution_csv(named);
    std::cout << csv;
    dist_out.write("dist.csv", csv);
    dist_out.write("dist.json", all.dump(2) + "\n");
    dist_out.write("scenario.json", scenario_to_json(s).dump(2) + "\n");
  });

  auto* chsh_cmd = eprb_cmd->add_subcommand("chsh", "CHSH quantity for a scenario");
  ScenarioOpts chsh_opts;
  chsh_opts.attach(chsh_cmd);
  Output chsh_out;
  chsh_out.attach(chsh_cmd);
  chsh_cmd->callback([&] {
    const Scenario s = chsh_opts.resolve();
    try {
      const StateVector psi = scenario_state(s);
      const double sv = chsh(psi, s, s.backend);
      std::cout << "S = " << fmt9(sv) << "\n|S| = " << fmt9(std::abs(sv)) << "\n";
      json j;
      j["S"] = sv;
      j["abs_S"] = std::abs(sv);
      j["backend"] = s.backend == Backend::Born ? "born" : "counting";
      j["scenario"] = scenario_to_json(s);
      chsh_out.write("chsh.json", j.dump(2) + "\n");
    } catch (const CliError&) {
      throw;
    } catch (const std::exception& e) {
      throw CliError(std::string("eprb chsh: ") + e.what());
    }
  });

  // ---- conditions ---------------------------------------------------------
  auto* cond_cmd = app.add_subcommand("conditions", "locality-condition reports");
  cond_cmd->require_subcommand(1);
  auto* report_cmd = cond_cmd->add_subcommand("report", "per-model condition table");
  ScenarioOpts report_opts;
  report_opts.attach(report_cmd);
  Output report_out;
  report_out.attach(report_cmd);
  bool all_models = false;
  std::string one_model;
  report_cmd->add_flag("--all-models", all_models, "all four built-in models (default)");
  report_cmd->add_option("--model", one_model,
                         "born-qm | lambda-many-counting | lambda-one | deterministic-local");
  report_cmd->callback([&] {
    Scenario s = report_opts.resolve();
    std::vector<ConditionReport> rows;
    try {
      if (!one_model.empty() && !all_models) {
        Model m;
        if (one_model == "born-qm")
          m = Model::BornQM;
        else if (one_model == "lambda-many-counting")
          m = Model::LambdaManyCounting;
        else if (one_model == "lambda-one")
          m = Model::LambdaOne;
        else if (one_model == "deterministic-local")
          m = Model::DeterministicLocal;
        else
          throw CliError("--model: unknown model '" + one_model + "'");
        rows.push_back(condition_report(m, s));
      } else {
        rows = full_report(s);
      }
    } catch (const CliError&) {
      throw;
    } catch (const std::exception& e) {
      throw CliError(std::string("conditions report: ") + e.what());
    }
    const std::string md = report_markdown(rows);
    std::cout << md;
    json j = json::array();
    for (const ConditionReport& r : rows) j.push_back(to_json(r));
    report_out.write("report.md", md);
    report_out.write("report.json", j.dump(2) + "\n");
  });

  // ---- lambda-one ---------------------------------------------------------
  auto* lone_cmd = app.add_subcommand("lambda-one", "deterministic hidden-variable runs");
  lone_cmd->require_subcommand(1);
  auto* run_cmd = lone_cmd->add_subcommand("run", "Monte Carlo frequency estimation");
  ScenarioOpts run_opts;
  run_opts.attach(run_cmd);
  Output run_out;
  run_out.attach(run_cmd);
  std::string run_config;
  std::size_t run_trials = 100000;
  std::uint64_t run_seed = default_seed();
  std::string run_schedule = "round-robin";
  auto* run_config_opt = run_cmd->add_option("--config", run_config,
                                             "run config file {scenario,n,trials,seed,schedule}");
  auto* run_trials_opt = run_cmd->add_option("--trials", run_trials, "trials per setting pair");
  auto* run_seed_opt = run_cmd->add_option("--seed", run_seed, "master seed");
  auto* run_schedule_opt =
      run_cmd->add_option("--schedule", run_schedule, "round-robin | fixed:<pair index 0..3>");
  run_cmd->callback([&] {
    Scenario s;
    std::size_t trials = run_trials;
    std::uint64_t seed = run_seed;
    std::string schedule = run_schedule;
    if (run_config_opt->count() > 0) {
      const json cfg = parse_config_file(run_config);
      if (cfg.contains("scenario")) {
        try {
          s = scenario_from_json(cfg.at("scenario"));
        } catch (const std::runtime_error& e) {
          throw CliError(e.what());
        }
      }
      if (cfg.contains("n")) s.n = cfg.at("n").get<std::size_t>();
      if (cfg.contains("trials") && run_trials_opt->count() == 0)
        trials = cfg.at("trials").get<std::size_t>();
      if (cfg.contains("seed") && run_seed_opt->count() == 0)
        seed = cfg.at("seed").get<std::uint64_t>();
      if (cfg.contains("schedule") && run_schedule_opt->count() == 0)
        schedule = cfg.at("schedule").get<std::string>();
    }
    // Flag overrides for the embedded scenario.
    {
      Scenario flag_s = run_opts.resolve();
      const bool file_given = run_opts.file_opt->count() > 0;
      if (file_given || run_config_opt->count() == 0) s = flag_s;
      const auto apply = [&](CLI::Option* opt, auto member) {
        if (opt->count() > 0) member();
      };
      apply(run_opts.state_opt, [&] { s.kind = flag_s.kind; });
      apply(run_opts.chi_a_opt, [&] { s.chi_a = flag_s.chi_a; });
      apply(run_opts.chi_b_opt, [&] { s.chi_b = flag_s.chi_b; });
      apply(run_opts.a_opt, [&] { s.a = flag_s.a; });
      apply(run_opts.a_prime_opt, [&] { s.a_prime = flag_s.a_prime; });
      apply(run_opts.b_opt, [&] { s.b = flag_s.b; });
      apply(run_opts.b_prime_opt, [&] { s.b_prime = flag_s.b_prime; });
      apply(run_opts.angles_opt, [&] {
        s.a = flag_s.a;
        s.a_prime = flag_s.a_prime;
        s.b = flag_s.b;
        s.b_prime = flag_s.b_prime;
      });
      apply(run_opts.d_a_opt, [&] { s.d_a = flag_s.d_a; });
      apply(run_opts.d_b_opt, [&] { s.d_b = flag_s.d_b; });
      apply(run_opts.n_opt, [&] { s.n = flag_s.n; });
    }
    lambda_one::Schedule sched = lambda_one::Schedule::RoundRobin;
    std::size_t fixed_pair = 0;
    if (schedule.rfind("fixed", 0) == 0) {
      sched = lambda_one::Schedule::FixedPair;
      const std::size_t colon = schedule.find(':');
      if (colon == std::string::npos) throw CliError("--schedule: fixed:<pair index>");
      try {
        fixed_pair = std::stoul(schedule.substr(colon + 1));
      } catch (const std::exception&) {
        throw CliError("--schedule: bad pair index");
      }
      if (fixed_pair > 3) throw CliError("--schedule: pair index must be 0..3");
    } else if (schedule != "round-robin") {
      throw CliError("--schedule: expected round-robin or fixed:<index>");
    }
    try {
      const StateVector psi = scenario_state(s);
      const lambda_one::RunResult r =
          lambda_one::run_experiment(psi, s, s.n, trials, seed, sched, fixed_pair);
      std::cout << run_csv(r);
      if (sched == lambda_one::Schedule::RoundRobin)
        std::cout << "S_hat = " << fmt9(r.s_hat) << " +/- " << fmt9(r.s_std_err) << "\n";
      run_out.write("run.csv", run_csv(r));
      run_out.write("run.json", to_json(r).dump(2) + "\n");
    } catch (const CliError&) {
      throw;
    } catch (const std::exception& e) {
      throw CliError(std::string("lambda-one run: ") + e.what());
    }
  });

  // ---- sweep --------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweeps");
  sweep_cmd->require_subcommand(1);
  auto* theta_cmd = sweep_cmd->add_subcommand("theta", "singlet correlation over an angle grid");
  std::string grid_spec;
  double theta_min = 0.0, theta_max = 0.0;
  std::size_t theta_steps = 0;
  Output theta_out;
  auto* grid_opt = theta_cmd->add_option("--grid", grid_spec, "comma-separated radians");
  auto* min_opt = theta_cmd->add_option("--min", theta_min, "grid start (radians)");
  auto* max_opt = theta_cmd->add_option("--max", theta_max, "grid end (radians)");
  auto* steps_opt = theta_cmd->add_option("--steps", theta_steps, "number of grid points");
  theta_out.attach(theta_cmd);
  theta_cmd->callback([&] {
    std::vector<double> grid;
    if (grid_opt->count() > 0) grid = parse_csv_doubles(grid_spec, "--grid");
    if (min_opt->count() + max_opt->count() + steps_opt->count() > 0) {
      if (min_opt->count() == 0 || max_opt->count() == 0 || steps_opt->count() == 0 ||
          theta_steps < 1)
        throw CliError("sweep theta: --min, --max and --steps go together");
      for (std::size_t i = 0; i < theta_steps; ++i)
        grid.push_back(theta_steps == 1 ? theta_min
                                        : theta_min + (theta_max - theta_min) *
                                                          static_cast<double>(i) /
                                                          static_cast<double>(theta_steps - 1));
    }
    if (grid.empty()) throw CliError("sweep theta: empty grid");
    for (double t : grid)
      if (!(t > 0.0) || t > M_PI + 1e-12) throw CliError("sweep theta: angles must lie in (0, pi]");
    const StateVector psi = singlet_state(1, 1);
    std::ostringstream csv;
    csv << "theta,E,one_plus_E,quadratic_ratio\n";
    for (double t : grid) {
      const JointDistribution d =
          joint_distribution(psi, Direction(0, 0, 1), Direction::polar_xz(t), Backend::Born);
      const double e = correlation(d);
      csv << fmt9(t) << ',' << fmt9(e) << ',' << fmt9(1.0 + e) << ','
          << fmt9((1.0 + e) / (t * t)) << '\n';
    }
    std::cout << csv.str();
    theta_out.write("sweep_theta.csv", csv.str());
  });

  // ---- verify ---------------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria");
  std::vector<int> only;
  verify_cmd->add_option("--only", only, "criteria ids to run (default: all)")->delimiter(',');
  Output verify_out;
  verify_out.attach(verify_cmd);
  verify_cmd->callback([&] {
    std::vector<verify::CriterionResult> results;
    if (only.empty()) {
      results = verify::run_all();
    } else {
      for (int id : only) {
        if (id < 1 || id > 11) throw CliError("verify: criteria ids are 1..11");
        verify::CriterionResult r = verify::run_criterion(id);
        if (!verify::within_budget(r)) {
          r.pass = false;
          r.detail += " [over runtime budget]";
        }
        results.push_back(std::move(r));
      }
    }
    bool all_pass = true;
    std::ostringstream file_lines;  // timing-free, byte-stable across runs
    for (const auto& r : results) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", r.seconds);
      std::cout << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.name
                << " (" << buf << "s) -- " << r.detail << "\n";
      file_lines << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.name
                 << " -- " << r.detail << "\n";
      all_pass = all_pass && r.pass;
    }
    verify_out.write("verify.txt", file_lines.str());
    if (!all_pass) exit_code = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const CliError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
