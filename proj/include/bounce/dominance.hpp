#pragma once

// Empirical comparison of robot designs. Every design is run from the same
// roster of start poses; the set of poses it succeeds from is its success
// set, and design B empirically dominates design A on the roster when A's
// success set is contained in B's. Results are labeled "empirical dominance
// (sampled)": inclusion on a finite roster, not a proof over all of
// configuration space, and only the designs' given controllers are evaluated.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <exception>
#include <iterator>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bounce/errors.hpp"
#include "bounce/geometry.hpp"
#include "bounce/policies.hpp"
#include "bounce/primitives.hpp"
#include "bounce/world.hpp"

namespace bounce {

// A fixed roster of start poses. All designs under comparison must be
// evaluated on the same roster; the fingerprint ties verdicts to it.
struct SampleSet {
  std::vector<Pose> poses;
  std::uint64_t seed = 0;
  int grid_nx = 0;  // position columns (split evenly left/right of the cart)
  int grid_ny = 0;  // position rows
  int grid_ntheta = 0;
  std::size_t random_count = 0;

  // Order-sensitive hash of the roster contents. Two SampleSets with the
  // same fingerprint hold bit-identical pose lists.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t v) {
      for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
      }
    };
    mix(static_cast<std::uint64_t>(poses.size()));
    for (const Pose& p : poses) {
      mix(std::bit_cast<std::uint64_t>(p.p.x));
      mix(std::bit_cast<std::uint64_t>(p.p.y));
      mix(std::bit_cast<std::uint64_t>(p.heading));
    }
    return h;
  }
};

// Default roster: an nx-by-ny position grid over free space (columns split
// evenly between the left and right of the cart, rows spanning the corridor
// interior) crossed with ntheta evenly spaced headings, plus `random_count`
// seeded uniform poses rejected into free space.
inline SampleSet make_sample_set(const World& w, std::uint64_t seed = 2024,
                                 int nx = 10, int ny = 10, int ntheta = 8,
                                 std::size_t random_count = 200) {
  SampleSet s;
  s.seed = seed;
  s.grid_nx = nx;
  s.grid_ny = ny;
  s.grid_ntheta = ntheta;
  s.random_count = random_count;

  const double margin_x = 0.5;
  const double y_lo = 0.08, y_hi = w.params().width - 0.08;
  const int n_left = nx / 2, n_right = nx - nx / 2;
  std::vector<double> cols;
  auto linspace_into = [&cols](double lo, double hi, int n) {
    for (int i = 0; i < n; ++i) {
      cols.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    }
  };
  linspace_into(margin_x, w.blue_x() - margin_x, n_left);
  linspace_into(w.yellow_x() + margin_x, w.params().length - margin_x, n_right);

  for (double x : cols) {
    for (int iy = 0; iy < ny; ++iy) {
      const double y = ny == 1 ? y_lo : y_lo + (y_hi - y_lo) * iy / (ny - 1);
      for (int it = 0; it < ntheta; ++it) {
        const Pose pose{{x, y}, normalize_angle(kTwoPi * it / ntheta)};
        w.require_free(pose.p, "make_sample_set");
        s.poses.push_back(pose);
      }
    }
  }

  SplitMix64 rng(seed);
  while (s.poses.size() < cols.size() * ny * ntheta + random_count) {
    const Pose pose{{rng.uniform(0.02, w.params().length - 0.02),
                     rng.uniform(0.01, w.params().width - 0.01)},
                    rng.uniform(0.0, kTwoPi)};
    if (!w.in_free_space(pose.p)) continue;
    s.poses.push_back(pose);
  }
  return s;
}

// One design's outcomes over a roster. Success and inconclusive lists hold
// ascending pose indices; inconclusive poses belong to neither success set
// ("can't tell" is kept distinct from "failed").
struct SuccessReport {
  std::string robot_name;
  PolicyId policy = PolicyId::Pi0;
  std::uint64_t sample_fingerprint = 0;
  std::vector<std::size_t> success;
  std::vector<std::size_t> inconclusive;
  std::vector<Outcome> outcomes;  // per pose, trace-free
};

// Runs one (robot, policy) pair from every roster pose. Throws
// PrimitiveUnavailable if the design cannot execute the controller at all.
// Poses are distributed over `jobs` workers; results are assembled by pose
// index, so the report is identical for any worker count. Each pose's run is
// seeded from cfg.seed and the pose index, so reruns of a pose are
// reproducible in isolation.
inline SuccessReport success_set(const RobotSpec& spec, PolicyId policy,
                                 const SampleSet& samples, const World& w,
                                 PolicyConfig cfg = {}, int jobs = 1) {
  for (Primitive pr : required_primitives(policy)) {
    if (!spec.has(pr)) {
      throw PrimitiveUnavailable(spec.name + " cannot run " +
                                 std::string(policy_name(policy)) + ": missing " +
                                 primitive_name(pr));
    }
  }
  if ((policy == PolicyId::Pi1 || policy == PolicyId::Pi2) && !cfg.basin) {
    cfg.basin = estimate_basin(cfg.theta, w);  // once, not per pose
  }

  SuccessReport rep;
  rep.robot_name = spec.name;
  rep.policy = policy;
  rep.sample_fingerprint = samples.fingerprint();
  rep.outcomes.resize(samples.poses.size());

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= samples.poses.size() || failed.load()) return;
      try {
        PolicyConfig run_cfg = cfg;
        run_cfg.seed = cfg.seed ^ (0x9e3779b97f4a7c15ull * (i + 1));
        rep.outcomes[i] = run_policy(policy, spec, w, samples.poses[i], run_cfg);
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
        return;
      }
    }
  };

  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) std::rethrow_exception(first_error);

  for (std::size_t i = 0; i < rep.outcomes.size(); ++i) {
    if (rep.outcomes[i].terminal == Terminal::Inconclusive) {
      rep.inconclusive.push_back(i);
    } else if (rep.outcomes[i].success) {
      rep.success.push_back(i);
    }
  }
  return rep;
}

enum class DominanceRelation { LeftDominates, RightDominates, Equivalent, Incomparable };

inline const char* relation_name(DominanceRelation r) {
  switch (r) {
    case DominanceRelation::LeftDominates: return "left_dominates";
    case DominanceRelation::RightDominates: return "right_dominates";
    case DominanceRelation::Equivalent: return "equivalent";
    case DominanceRelation::Incomparable: return "incomparable";
  }
  return "?";
}

// Verdict of one pairwise comparison. Witness poses are counterexamples for
// the failing direction: poses where one side succeeded and the other did
// not (both differences when the designs are incomparable). The verdict is
// decisive only when neither side had inconclusive runs.
struct DominanceVerdict {
  DominanceRelation relation = DominanceRelation::Equivalent;
  std::vector<std::size_t> witness_indices;
  std::vector<Pose> witness_poses;
  std::size_t inconclusive = 0;
  std::uint64_t sample_fingerprint = 0;

  bool decisive() const { return inconclusive == 0; }
};

// Inclusion test between two reports computed on the same roster.
// Right dominates left iff every pose the left succeeds from, the right
// succeeds from too; equivalence is mutual inclusion.
inline DominanceVerdict compare(const SuccessReport& a, const SuccessReport& b,
                                const SampleSet& samples) {
  if (a.sample_fingerprint != b.sample_fingerprint ||
      a.sample_fingerprint != samples.fingerprint()) {
    throw InconsistentSamples("compare: success sets come from different rosters");
  }
  std::vector<std::size_t> a_minus_b, b_minus_a;
  std::set_difference(a.success.begin(), a.success.end(), b.success.begin(),
                      b.success.end(), std::back_inserter(a_minus_b));
  std::set_difference(b.success.begin(), b.success.end(), a.success.begin(),
                      a.success.end(), std::back_inserter(b_minus_a));

  DominanceVerdict v;
  v.sample_fingerprint = a.sample_fingerprint;
  v.inconclusive = a.inconclusive.size() + b.inconclusive.size();
  if (a_minus_b.empty() && b_minus_a.empty()) {
    v.relation = DominanceRelation::Equivalent;
  } else if (a_minus_b.empty()) {
    v.relation = DominanceRelation::RightDominates;
    v.witness_indices = std::move(b_minus_a);
  } else if (b_minus_a.empty()) {
    v.relation = DominanceRelation::LeftDominates;
    v.witness_indices = std::move(a_minus_b);
  } else {
    v.relation = DominanceRelation::Incomparable;
    std::merge(a_minus_b.begin(), a_minus_b.end(), b_minus_a.begin(), b_minus_a.end(),
               std::back_inserter(v.witness_indices));
  }
  for (std::size_t i : v.witness_indices) v.witness_poses.push_back(samples.poses[i]);
  return v;
}

// Full pairwise comparison: runs both designs over the roster first.
inline DominanceVerdict compare(const RobotSpec& spec_a, PolicyId policy_a,
                                const RobotSpec& spec_b, PolicyId policy_b,
                                const SampleSet& samples, const World& w,
                                const PolicyConfig& cfg = {}, int jobs = 1) {
  return compare(success_set(spec_a, policy_a, samples, w, cfg, jobs),
                 success_set(spec_b, policy_b, samples, w, cfg, jobs), samples);
}

// True iff "j's design dominates i's" holds for the verdict at table[i][j].
inline bool dominated_by(const std::vector<std::vector<DominanceVerdict>>& table,
                         std::size_t i, std::size_t j) {
  if (i == j) return true;
  const DominanceRelation r = table[i][j].relation;
  return r == DominanceRelation::RightDominates || r == DominanceRelation::Equivalent;
}

// Checks that the verdict table is transitively closed: whenever design j
// dominates i and k dominates j, k must dominate i. Throws
// InconsistentSamples when the verdicts were not all computed on one roster.
inline bool check_transitivity(const std::vector<std::vector<DominanceVerdict>>& table) {
  const std::size_t n = table.size();
  std::uint64_t fp = 0;
  bool have_fp = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) {
      throw InconsistentSamples("check_transitivity: verdict table is not square");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!have_fp) {
        fp = table[i][j].sample_fingerprint;
        have_fp = true;
      } else if (table[i][j].sample_fingerprint != fp) {
        throw InconsistentSamples("check_transitivity: verdicts span different rosters");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (dominated_by(table, i, j) && dominated_by(table, j, k) &&
            !dominated_by(table, i, k)) {
          return false;
        }
      }
    }
  }
  return true;
}

// One design under comparison: a capability set plus the controller it runs.
struct Design {
  RobotSpec spec;
  PolicyId policy = PolicyId::Pi0;
};

// The four standard designs, most capable first.
inline std::vector<Design> default_roster_designs() {
  return {{RobotSpec::r0(), PolicyId::Pi0},
          {RobotSpec::r1(), PolicyId::Pi1},
          {RobotSpec::r2(), PolicyId::Pi2},
          {RobotSpec::r3(), PolicyId::Pi3}};
}

// Everything the comparison run produced: per-design reports, the pairwise
// verdict matrix (matrix[i][j] compares design i against design j), and the
// transitivity check over it.
struct DominanceReport {
  std::vector<Design> designs;
  std::vector<SuccessReport> reports;
  std::vector<std::vector<DominanceVerdict>> matrix;
  std::size_t inconclusive_total = 0;
  bool transitive = false;
};

inline DominanceReport run_dominance(const std::vector<Design>& designs,
                                     const SampleSet& samples, const World& w,
                                     const PolicyConfig& cfg = {}, int jobs = 1) {
  DominanceReport rep;
  rep.designs = designs;
  for (const Design& d : designs) {
    rep.reports.push_back(success_set(d.spec, d.policy, samples, w, cfg, jobs));
    rep.inconclusive_total += rep.reports.back().inconclusive.size();
  }
  rep.matrix.assign(designs.size(), std::vector<DominanceVerdict>(designs.size()));
  for (std::size_t i = 0; i < designs.size(); ++i) {
    for (std::size_t j = 0; j < designs.size(); ++j) {
      rep.matrix[i][j] = compare(rep.reports[i], rep.reports[j], samples);
    }
  }
  rep.transitive = check_transitivity(rep.matrix);
  return rep;
}

}  // namespace bounce
