// Command-line front end for the corridor-pushing testbed: single controller
// runs, return-map sweeps, design-dominance comparisons, and standing
// behavior checks. Every command writes its results to files; identical
// invocations (flags + config + seed) produce byte-identical files.
//
// Exit codes: 0 success (a "lost" verdict is still a completed run),
// 2 configuration or range error, 3 inconclusive results, 4 an expected
// comparison or behavior check failed.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bounce/bouncemap.hpp"
#include "bounce/config.hpp"
#include "bounce/dominance.hpp"
#include "bounce/errors.hpp"
#include "bounce/geometry.hpp"
#include "bounce/policies.hpp"
#include "bounce/primitives.hpp"
#include "bounce/world.hpp"

namespace {

using nlohmann::json;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bounce::ConfigError("cannot open output file '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw bounce::ConfigError("writing to '" + path + "' failed");
}

int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw != 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, n) on a pool of `jobs` workers pulling from a
// shared cursor. Each index writes only its own output slot, so assembly is
// order-deterministic for any worker count. Exceptions are rethrown.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  jobs = std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(n, 1));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  auto worker = [&] {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

double parse_angle_flag(const std::string& value, const char* flag) {
  const auto v = bounce::detail::parse_scalar(value, /*angle=*/true);
  if (!v) {
    throw bounce::ConfigError(std::string(flag) + " value '" + value + "' is not a number");
  }
  return *v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item(bounce::detail::trim(
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(bounce::RunConfig cfg, const std::string& policy_str,
                 const std::string& start_str) {
  const std::optional<bounce::PolicyId> policy = bounce::parse_policy(policy_str);
  if (!policy) {
    throw bounce::ConfigError("unknown policy '" + policy_str + "' (expected pi0..pi3)");
  }
  const bounce::Pose start = bounce::parse_pose_triple(start_str);
  bounce::validate_config(cfg);
  if (cfg.out.empty()) {
    throw bounce::ConfigError("no outcome path: pass --out or set [run] out");
  }
  const bounce::World w(cfg.world);
  cfg.policy.collect_trace = !cfg.trace.empty();
  if (*policy == bounce::PolicyId::Pi1 || *policy == bounce::PolicyId::Pi2) {
    cfg.policy.basin = bounce::estimate_basin(cfg.policy.theta, w);
  }
  const bounce::RobotSpec spec = bounce::default_robot(*policy);
  const bounce::Outcome oc = bounce::run_policy(*policy, spec, w, start, cfg.policy);

  json j;
  j["cart_x"] = oc.cart_x;
  j["count"] = oc.count;
  j["goal_count"] =
      cfg.policy.goal_count != 0 ? cfg.policy.goal_count : bounce::default_goal_count(w);
  j["policy"] = bounce::policy_name(oc.policy);
  j["seed"] = oc.seed;
  j["stages"] = oc.stages;
  j["start"] = {{"theta", oc.start.heading}, {"x", oc.start.p.x}, {"y", oc.start.p.y}};
  j["success"] = oc.success;
  j["terminal"] = bounce::terminal_name(oc.terminal);
  write_file(cfg.out, j.dump(2) + "\n");

  if (!cfg.trace.empty()) {
    std::string csv = "stage,fsm_state,x,y,theta,cart_x,count\n";
    for (const bounce::TraceRow& r : oc.trace) {
      csv += std::to_string(r.stage);
      csv += ',';
      csv += bounce::fsm_state_name(r.state);
      csv += ',';
      csv += bounce::format_number(r.pose.p.x);
      csv += ',';
      csv += bounce::format_number(r.pose.p.y);
      csv += ',';
      csv += bounce::format_number(r.pose.heading);
      csv += ',';
      csv += bounce::format_number(r.cart_x);
      csv += ',';
      csv += std::to_string(r.count);
      csv += '\n';
    }
    write_file(cfg.trace, csv);
  }
  return oc.terminal == bounce::Terminal::Inconclusive ? 3 : 0;
}

// ---------------------------------------------------------------------------
// sweep-fixed-points / jacobian-map
// ---------------------------------------------------------------------------

int cmd_sweep_fixed_points(double theta, const bounce::Range& ar, double ell,
                           const std::string& out, int jobs) {
  if (out.empty()) throw bounce::ConfigError("no output path: pass --out");
  if (!(ell > 0.0)) throw bounce::ConfigError("--ell must be positive");
  const std::vector<double> alphas = bounce::grid(ar.lo, ar.hi, ar.step);
  std::vector<bounce::CycleAnalysis> cells(alphas.size());
  parallel_for(alphas.size(), jobs,
               [&](std::size_t i) { cells[i] = bounce::validate_cycle(alphas[i], theta, ell); });
  std::string csv = "alpha,x_fp\n";
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    csv += bounce::format_number(alphas[i]);
    csv += ',';
    if (cells[i].feasible) csv += bounce::format_number(cells[i].x_fp);
    csv += '\n';
  }
  write_file(out, csv);
  return 0;
}

int cmd_jacobian_map(const bounce::Range& ar, const bounce::Range& tr, double ell,
                     const std::string& out, int jobs) {
  if (out.empty()) throw bounce::ConfigError("no output path: pass --out");
  if (!(ell > 0.0)) throw bounce::ConfigError("--ell must be positive");
  const std::vector<double> alphas = bounce::grid(ar.lo, ar.hi, ar.step);
  const std::vector<double> thetas = bounce::grid(tr.lo, tr.hi, tr.step);
  const std::size_t n = alphas.size() * thetas.size();
  std::vector<bounce::CycleAnalysis> cells(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    cells[i] = bounce::validate_cycle(alphas[i / thetas.size()], thetas[i % thetas.size()], ell);
  });
  std::string csv = "alpha,theta,x_fp,jacobian,feasible\n";
  for (std::size_t i = 0; i < n; ++i) {
    csv += bounce::format_number(alphas[i / thetas.size()]);
    csv += ',';
    csv += bounce::format_number(thetas[i % thetas.size()]);
    csv += ',';
    if (cells[i].feasible) {
      csv += bounce::format_number(cells[i].x_fp);
      csv += ',';
      csv += bounce::format_number(cells[i].jac);
      csv += ",1\n";
    } else {
      csv += ",,0\n";
    }
  }
  write_file(out, csv);
  return 0;
}

// ---------------------------------------------------------------------------
// dominance
// ---------------------------------------------------------------------------

struct SampleSpec {
  int nx = 10;
  int ny = 10;
  int ntheta = 8;
  std::size_t random_count = 200;
  std::uint64_t seed = 2024;
};

SampleSpec parse_sample_spec(const std::string& text) {
  const std::vector<std::string> parts = split_list(text);
  if (parts.size() != 4 && parts.size() != 5) {
    throw bounce::ConfigError("sample spec '" + text +
                              "' must be NX,NY,NTHETA,RANDOM[,SEED]");
  }
  std::uint64_t vals[5] = {0, 0, 0, 0, 2024};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto v = bounce::detail::parse_count(parts[i]);
    if (!v) {
      throw bounce::ConfigError("sample spec field '" + parts[i] +
                                "' is not a non-negative integer");
    }
    vals[i] = *v;
  }
  SampleSpec s;
  s.nx = static_cast<int>(vals[0]);
  s.ny = static_cast<int>(vals[1]);
  s.ntheta = static_cast<int>(vals[2]);
  s.random_count = static_cast<std::size_t>(vals[3]);
  s.seed = vals[4];
  if (static_cast<std::size_t>(s.nx) * s.ny * s.ntheta + s.random_count == 0) {
    throw bounce::ConfigError("sample spec '" + text + "' describes zero poses");
  }
  return s;
}

bounce::Design design_for(const std::string& name) {
  if (name == "r0") return {bounce::RobotSpec::r0(), bounce::PolicyId::Pi0};
  if (name == "r1") return {bounce::RobotSpec::r1(), bounce::PolicyId::Pi1};
  if (name == "r2") return {bounce::RobotSpec::r2(), bounce::PolicyId::Pi2};
  if (name == "r3") return {bounce::RobotSpec::r3(), bounce::PolicyId::Pi3};
  throw bounce::ConfigError("unknown robot '" + name + "' (expected r0..r3)");
}

// Capability rank: lower ranks succeed from every pose the higher ranks do.
int design_rank(const std::string& name) { return name == "r3" ? 2 : name == "r2" ? 1 : 0; }

int cmd_dominance(bounce::RunConfig cfg, const std::string& robots_str,
                  const std::string& samples_str, const std::string& csv_path, int jobs) {
  const std::vector<std::string> names = split_list(robots_str);
  if (names.empty()) throw bounce::ConfigError("robot list is empty (expected e.g. r0,r1)");
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t k = i + 1; k < names.size(); ++k) {
      if (names[i] == names[k]) {
        throw bounce::ConfigError("robot '" + names[i] + "' listed twice");
      }
    }
  }
  std::vector<bounce::Design> designs;
  for (const std::string& name : names) designs.push_back(design_for(name));

  const SampleSpec sp = parse_sample_spec(samples_str);
  bounce::validate_config(cfg);
  if (cfg.out.empty()) {
    throw bounce::ConfigError("no report path: pass --out or set [run] out");
  }
  const bounce::World w(cfg.world);
  const bounce::SampleSet samples =
      bounce::make_sample_set(w, sp.seed, sp.nx, sp.ny, sp.ntheta, sp.random_count);

  const bool needs_basin = std::any_of(designs.begin(), designs.end(), [](const bounce::Design& d) {
    return d.policy == bounce::PolicyId::Pi1 || d.policy == bounce::PolicyId::Pi2;
  });
  if (needs_basin) cfg.policy.basin = bounce::estimate_basin(cfg.policy.theta, w);

  const bounce::DominanceReport rep =
      bounce::run_dominance(designs, samples, w, cfg.policy, jobs);

  // Expected order: success sets shrink with rank and coincide across
  // equal ranks; the gate holds when every measured verdict matches and the
  // verdict table is transitive.
  bool order_ok = true;
  for (std::size_t i = 0; i < designs.size(); ++i) {
    for (std::size_t k = 0; k < designs.size(); ++k) {
      const int ri = design_rank(names[i]);
      const int rk = design_rank(names[k]);
      const bounce::DominanceRelation expected =
          ri == rk ? bounce::DominanceRelation::Equivalent
                   : (ri > rk ? bounce::DominanceRelation::RightDominates
                              : bounce::DominanceRelation::LeftDominates);
      if (rep.matrix[i][k].relation != expected) order_ok = false;
    }
  }
  const bool gate_ok = order_ok && rep.transitive;

  json j;
  json jdesigns = json::array();
  for (std::size_t i = 0; i < designs.size(); ++i) {
    jdesigns.push_back({{"inconclusive_count", rep.reports[i].inconclusive.size()},
                        {"policy", bounce::policy_name(designs[i].policy)},
                        {"robot", designs[i].spec.name},
                        {"success_count", rep.reports[i].success.size()}});
  }
  j["designs"] = jdesigns;
  j["gate"] = {{"expected_order_holds", order_ok}, {"pass", gate_ok}};
  j["inconclusive_total"] = rep.inconclusive_total;
  json matrix = json::array();
  for (std::size_t i = 0; i < designs.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < designs.size(); ++k) {
      row.push_back(bounce::relation_name(rep.matrix[i][k].relation));
    }
    matrix.push_back(row);
  }
  j["matrix"] = matrix;
  j["sample"] = {{"fingerprint", std::to_string(samples.fingerprint())},
                 {"grid_nx", samples.grid_nx},
                 {"grid_ny", samples.grid_ny},
                 {"grid_ntheta", samples.grid_ntheta},
                 {"random_count", samples.random_count},
                 {"seed", samples.seed},
                 {"total", samples.poses.size()}};
  j["transitive"] = rep.transitive;
  json witnesses = json::object();
  for (std::size_t i = 0; i < designs.size(); ++i) {
    for (std::size_t k = i + 1; k < designs.size(); ++k) {
      const bounce::DominanceVerdict& v = rep.matrix[i][k];
      if (v.witness_indices.empty()) continue;
      witnesses[designs[i].spec.name + "|" + designs[k].spec.name] = v.witness_indices;
    }
  }
  j["witnesses"] = witnesses;
  write_file(cfg.out, j.dump(2) + "\n");

  if (!csv_path.empty()) {
    std::string csv = "index,x,y,theta";
    for (const bounce::Design& d : designs) {
      csv += ",success_";
      csv += d.spec.name;
    }
    csv += '\n';
    for (std::size_t i = 0; i < samples.poses.size(); ++i) {
      csv += std::to_string(i);
      csv += ',';
      csv += bounce::format_number(samples.poses[i].p.x);
      csv += ',';
      csv += bounce::format_number(samples.poses[i].p.y);
      csv += ',';
      csv += bounce::format_number(samples.poses[i].heading);
      for (std::size_t d = 0; d < designs.size(); ++d) {
        csv += rep.reports[d].outcomes[i].success ? ",1" : ",0";
      }
      csv += '\n';
    }
    write_file(csv_path, csv);
  }

  if (!gate_ok) return 4;
  return rep.inconclusive_total != 0 ? 3 : 0;
}

// ---------------------------------------------------------------------------
// check-props
// ---------------------------------------------------------------------------

int cmd_check_props(const std::string& out, std::uint64_t seed) {
  if (out.empty()) throw bounce::ConfigError("no report path: pass --out");
  json j;
  bool all_pass = true;

  {
    // Memoryless exit rules touch the object at most once and then either
    // stand in a two-cycle between the walls (fixed exit angle) or march
    // away down the corridor (drift-preserving exit angle).
    const bounce::World w = bounce::oracle_world();
    bounce::SplitMix64 rng(seed ^ 0x517cc1b727220a95ull);
    const int rules = 24;
    int max_contacts = 0;
    int standing = 0;
    int escapes = 0;
    bool pass = true;
    for (int i = 0; i < rules; ++i) {
      const bool fixed = (i % 2) == 0;
      const double beta = rng.uniform(0.2, 1.3);
      // Half the starts aim straight at the object face so the first ray
      // lands there and the contact bound is actually exercised; the rest
      // start anywhere in the chamber with a random heading.
      bounce::Pose start{{rng.uniform(220.0, 295.0), rng.uniform(0.1, 0.9)},
                         rng.uniform(0.0, bounce::kTwoPi)};
      if (i < rules / 2) {
        start.p = {rng.uniform(292.0, 297.0), rng.uniform(0.2, 0.8)};
        start.heading = std::atan2(rng.uniform(0.1, 0.9) - start.p.y,
                                   w.blue_x() - start.p.x);
      }
      const bounce::Prop1Verdict v = bounce::check_prop1(
          fixed ? bounce::RuleKind::Fixed : bounce::RuleKind::FixedMonotonic, beta, w, start);
      max_contacts = std::max(max_contacts, v.object_contacts);
      if (v.period2_detected) ++standing;
      if (v.escape_detected) ++escapes;
      if (v.object_contacts > 1 || (!v.period2_detected && !v.escape_detected)) pass = false;
    }
    j["memoryless_single_contact"] = {{"escapes", escapes},
                                      {"max_object_contacts", max_contacts},
                                      {"pass", pass},
                                      {"rules", rules},
                                      {"standing_cycles", standing}};
    all_pass = all_pass && pass;
  }

  {
    // One bit of memory makes pushing possible: the alternating two-angle
    // strategy has a stable face fixed point and keeps displacing the cart
    // one unit per face contact.
    const double b1 = 50.0 * bounce::kPi / 180.0;
    const double b2 = 30.0 * bounce::kPi / 180.0;
    const bounce::TwoRuleAnalysis a = bounce::two_rule_analysis(b1, b2);
    const bounce::World w{bounce::WorldParams{}};
    const int periods = 300;
    const bounce::TwoRuleRun run = bounce::simulate_two_rule(b1, b2, w, 0.6, periods);
    const double advance = run.final_cart_x - w.cart_x();
    const bool pass = a.stable && run.completed && run.face_contacts == periods &&
                      run.max_late_error <= 0.05 &&
                      advance >= 0.9 * periods * w.params().epsilon;
    j["one_bit_pushing"] = {{"cart_advance", advance},
                            {"max_late_error", run.max_late_error},
                            {"multiplier", a.multiplier},
                            {"pass", pass},
                            {"periods", periods},
                            {"x_fp", a.x_fp}};
    all_pass = all_pass && pass;
  }

  {
    // Angle-of-approach control admits a contracting bounce cycle: the
    // reference cycle is geometrically feasible, |slope| < 1, and iterating
    // the period from a perturbed impact converges back to the fixed point.
    const double alpha = 72.0 * bounce::kPi / 180.0;
    const double theta = bounce::kPi / 3.0;
    const bounce::CycleAnalysis c = bounce::validate_cycle(alpha, theta);
    bool converged = false;
    double residual = std::numeric_limits<double>::infinity();
    if (c.feasible) {
      const bounce::World w = bounce::oracle_world();
      double x = c.x_fp + 0.05;
      for (int it = 0; it < 200; ++it) {
        const std::optional<double> next =
            bounce::simulate_period(x, alpha, theta, w, c.orientation);
        if (!next) break;
        x = *next;
        residual = std::abs(x - c.x_fp);
        if (residual <= 1e-9) {
          converged = true;
          break;
        }
      }
    }
    const bool pass = c.feasible && std::abs(c.jac) < 1.0 && converged;
    j["stable_cycle_found"] = {{"alpha", alpha},
                               {"feasible", c.feasible},
                               {"jacobian", c.jac},
                               {"pass", pass},
                               {"residual", residual},
                               {"theta", theta},
                               {"x_fp", c.x_fp}};
    all_pass = all_pass && pass;
  }

  j["all_pass"] = all_pass;
  write_file(out, j.dump(2) + "\n");
  return all_pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corridor-pushing testbed: runs, sweeps, and design comparisons"};
  app.require_subcommand(1);

  // -- simulate -------------------------------------------------------------
  CLI::App* sim = app.add_subcommand(
      "simulate", "run one controller from a start pose and write the outcome as JSON");
  std::string sim_policy, sim_start, sim_config, sim_out, sim_trace, sim_phi, sim_theta;
  double sim_delta = 0.0;
  std::uint64_t sim_goal = 0, sim_stages = 0, sim_seed = 0;
  sim->add_option("--policy", sim_policy, "controller: pi0, pi1, pi2, pi3")->required();
  sim->add_option("--start", sim_start, "start pose x,y,theta ('deg' suffix allowed on theta)")
      ->required();
  sim->add_option("--config", sim_config, "configuration file");
  sim->add_option("--out", sim_out, "outcome JSON path");
  sim->add_option("--trace", sim_trace, "per-stage trace CSV path");
  sim->add_option("--phi", sim_phi, "sweep rotation step (radians; 'deg' suffix allowed)");
  sim->add_option("--delta", sim_delta, "walking step length");
  sim->add_option("--theta", sim_theta, "bounce-cycle interior angle (radians; 'deg' suffix allowed)");
  sim->add_option("--goal-count", sim_goal, "pushes required for success (0: from geometry)");
  sim->add_option("--max-stages", sim_stages, "stage budget before the run is inconclusive");
  sim->add_option("--seed", sim_seed, "run seed (overrides the config file)");

  // -- sweep-fixed-points ---------------------------------------------------
  CLI::App* sweep = app.add_subcommand(
      "sweep-fixed-points", "tabulate the bounce-cycle fixed point over a range of approach angles");
  std::string sweep_theta, sweep_range, sweep_out;
  double sweep_ell = 1.0;
  int sweep_jobs = 0;
  sweep->add_option("--theta", sweep_theta, "interior angle (radians; 'deg' suffix allowed)")
      ->required();
  sweep->add_option("--alpha-range", sweep_range, "approach angles LO:HI:STEP")->required();
  sweep->add_option("--out", sweep_out, "CSV path (header alpha,x_fp)")->required();
  sweep->add_option("--ell", sweep_ell, "wall spacing (length unit)");
  sweep->add_option("--jobs", sweep_jobs, "worker count (0: machine parallelism)");

  // -- jacobian-map ---------------------------------------------------------
  CLI::App* jmap = app.add_subcommand(
      "jacobian-map", "tabulate fixed point and contraction over an angle grid");
  std::string jmap_arange, jmap_trange, jmap_out;
  double jmap_ell = 1.0;
  int jmap_jobs = 0;
  jmap->add_option("--alpha-range", jmap_arange, "approach angles LO:HI:STEP")->required();
  jmap->add_option("--theta-range", jmap_trange, "interior angles LO:HI:STEP")->required();
  jmap->add_option("--out", jmap_out, "CSV path (header alpha,theta,x_fp,jacobian,feasible)")
      ->required();
  jmap->add_option("--ell", jmap_ell, "wall spacing (length unit)");
  jmap->add_option("--jobs", jmap_jobs, "worker count (0: machine parallelism)");

  // -- dominance ------------------------------------------------------------
  CLI::App* dom = app.add_subcommand(
      "dominance", "compare designs by success-set inclusion over a shared pose roster");
  std::string dom_robots = "r0,r1,r2,r3";
  std::string dom_samples = "10,10,8,200";
  std::string dom_config, dom_out, dom_csv;
  std::uint64_t dom_seed = 0, dom_goal = 0, dom_stages = 0;
  int dom_jobs = 0;
  dom->add_option("--robots", dom_robots, "designs to compare, e.g. r0,r1,r2,r3");
  dom->add_option("--samples", dom_samples, "pose roster NX,NY,NTHETA,RANDOM[,SEED]");
  dom->add_option("--config", dom_config, "configuration file");
  dom->add_option("--out", dom_out, "report JSON path");
  dom->add_option("--csv", dom_csv, "optional per-pose outcome CSV path");
  dom->add_option("--goal-count", dom_goal, "pushes required for success (0: from geometry)");
  dom->add_option("--max-stages", dom_stages, "stage budget per run");
  dom->add_option("--seed", dom_seed, "run seed (overrides the config file)");
  dom->add_option("--jobs", dom_jobs, "worker count (0: machine parallelism)");

  // -- check-props ----------------------------------------------------------
  CLI::App* props = app.add_subcommand(
      "check-props", "verify the standing behavior guarantees and write a verdict bundle");
  std::string props_out;
  std::uint64_t props_seed = 7;
  props->add_option("--out", props_out, "verdict JSON path")->required();
  props->add_option("--seed", props_seed, "seed for the sampled rule set");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sim) {
      bounce::RunConfig cfg;
      if (!sim_config.empty()) bounce::load_config_file(sim_config, cfg);
      if (sim->count("--phi") != 0) cfg.policy.phi = parse_angle_flag(sim_phi, "--phi");
      if (sim->count("--delta") != 0) cfg.policy.delta = sim_delta;
      if (sim->count("--theta") != 0) cfg.policy.theta = parse_angle_flag(sim_theta, "--theta");
      if (sim->count("--goal-count") != 0) cfg.policy.goal_count = sim_goal;
      if (sim->count("--max-stages") != 0) cfg.policy.max_stages = sim_stages;
      if (sim->count("--out") != 0) cfg.out = sim_out;
      if (sim->count("--trace") != 0) cfg.trace = sim_trace;
      if (sim->count("--seed") != 0) cfg.policy.seed = sim_seed;
      return cmd_simulate(std::move(cfg), sim_policy, sim_start);
    }
    if (*sweep) {
      const double theta = parse_angle_flag(sweep_theta, "--theta");
      const bounce::Range r = bounce::parse_range(sweep_range, /*angle=*/true);
      return cmd_sweep_fixed_points(theta, r, sweep_ell, sweep_out, resolve_jobs(sweep_jobs));
    }
    if (*jmap) {
      const bounce::Range ar = bounce::parse_range(jmap_arange, /*angle=*/true);
      const bounce::Range tr = bounce::parse_range(jmap_trange, /*angle=*/true);
      return cmd_jacobian_map(ar, tr, jmap_ell, jmap_out, resolve_jobs(jmap_jobs));
    }
    if (*dom) {
      bounce::RunConfig cfg;
      if (!dom_config.empty()) bounce::load_config_file(dom_config, cfg);
      if (dom->count("--goal-count") != 0) cfg.policy.goal_count = dom_goal;
      if (dom->count("--max-stages") != 0) cfg.policy.max_stages = dom_stages;
      if (dom->count("--out") != 0) cfg.out = dom_out;
      if (dom->count("--seed") != 0) cfg.policy.seed = dom_seed;
      return cmd_dominance(std::move(cfg), dom_robots, dom_samples, dom_csv,
                           resolve_jobs(dom_jobs));
    }
    if (*props) {
      return cmd_check_props(props_out, props_seed);
    }
  } catch (const bounce::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
