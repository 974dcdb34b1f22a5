// Command-line front end: solve single orbits, sweep families in the
// rotation frequency, integrate and probe stability, print the
// perturbation chart, and re-extract coefficient tables.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "choreo/dynamics.hpp"
#include "choreo/io.hpp"
#include "choreo/perturbation.hpp"
#include "choreo/solver.hpp"

namespace fs = std::filesystem;
using namespace choreo;

namespace {

// Exit codes are a stable contract.
enum ExitCode {
  kOk = 0,
  kUsage = 2,
  kDiverged = 3,
  kMaxIters = 4,
  kCollision = 5,
  kUnstable = 6,
};

int exit_code_for(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return kOk;
    case SolveStatus::Diverged: return kDiverged;
    case SolveStatus::MaxItersReached: return kMaxIters;
    default: return kCollision;
  }
}

fs::path output_dir() {
  if (const char* dir = std::getenv("CHOREO_OUT_DIR")) return fs::path(dir);
  return fs::current_path();
}

fs::path resolve_out(const std::string& name) {
  fs::path p(name);
  if (p.is_absolute()) return p;
  return output_dir() / p;
}

void print_summary(const SolveOutcome& outcome, double omega) {
  std::printf("status: %s\n", to_string(outcome.status));
  std::printf("omega: %.6g  iterations: %ld\n", omega, outcome.iterations);
  std::printf("final step norm: %.6g  gradient norm: %.6g\n", outcome.final_step_norm,
              outcome.final_gradient_norm);
  if (outcome.action) {
    std::printf("action: kinetic %.6g  potential %.6g  centrifugal %.6g  coriolis %.6g  total %.6g\n",
                outcome.action->kinetic, outcome.action->potential, outcome.action->centrifugal,
                outcome.action->coriolis, outcome.action->total);
  }
}

struct SolveFlags {
  std::string axis = "x";
  double omega = 0.0;
  int n = 3;
  int kmax = 0;  // 0 = default for n
  double tol = 1e-12;
  long max_iters = 200000;
  double delta_s = 0.2;
  std::string seed = "perturb";
  std::string out;
};

FourierOrbit resolve_seed(const SolveFlags& flags, RotationAxis axis, int kmax) {
  if (flags.seed == "perturb") {
    if (axis != RotationAxis::X) {
      throw CLI::ValidationError("--seed perturb is only available for --axis x");
    }
    const double beta = std::max(0.0, 1.0 - flags.omega);
    if (beta > 0.1) {
      throw CLI::ValidationError(
          "--seed perturb needs omega >= 0.9; use a family file for smaller omega");
    }
    return seed_orbit(beta, flags.n, kmax);
  }
  if (flags.seed == "cold") {
    // Two-term planar-eight guess; only sensible near omega = 0.
    FourierOrbit orbit(axis, flags.omega, flags.n, kmax);
    const double scale = polygon_circumradius(flags.n) / polygon_circumradius(3);
    orbit.x_sin[1] = 1.1 * scale;
    orbit.y_sin[2] = 0.34 * scale;
    return apply_momentum_mask(orbit);
  }
  FourierOrbit orbit;
  try {
    orbit = OrbitDocument::load(flags.seed).orbit;
  } catch (const std::exception&) {
    // A family document also works as a seed: take the converged member
    // nearest the requested omega.
    const FamilyDocument family = FamilyDocument::load(flags.seed);
    const FamilyPoint* nearest = nullptr;
    for (const FamilyPoint& p : family.record.points) {
      if (p.outcome.status != SolveStatus::Converged) continue;
      if (!nearest || std::abs(p.omega - flags.omega) < std::abs(nearest->omega - flags.omega)) {
        nearest = &p;
      }
    }
    if (!nearest) throw CLI::ValidationError("family file has no converged member");
    orbit = nearest->outcome.orbit;
  }
  if (orbit.n_bodies != flags.n) {
    throw CLI::ValidationError("seed file has n = " + std::to_string(orbit.n_bodies) +
                               ", flags ask for n = " + std::to_string(flags.n));
  }
  if (orbit.axis != axis) {
    // Reuse a planar orbit across axes only when the off-plane series is empty.
    for (double v : orbit.z_cos) {
      if (v != 0.0) throw CLI::ValidationError("seed file axis does not match --axis");
    }
    orbit.axis = axis;
  }
  if (orbit.k_max != kmax) {
    FourierOrbit resized(axis, orbit.omega_rot, orbit.n_bodies, kmax);
    for (Series s : {Series::XSin, Series::YSin, Series::ZCos, Series::XCos, Series::YCos}) {
      for (int k = 1; k <= std::min(orbit.k_max, kmax); ++k) {
        resized.series(s)[k] = orbit.series(s)[k];
      }
    }
    orbit = resized;
  }
  return apply_momentum_mask(orbit);
}

int run_solve(const SolveFlags& flags) {
  const RotationAxis axis = axis_from_name(flags.axis.at(0));
  const int kmax = flags.kmax > 0 ? flags.kmax : default_k_max(flags.n);
  if (axis == RotationAxis::X && flags.omega > 1.0 + 1e-12) {
    throw CLI::ValidationError("axis x families exist for omega in [0, 1]");
  }

  SolverConfig config;
  config.tol = flags.tol;
  config.max_iters = flags.max_iters;
  config.delta_s = flags.delta_s;
  config.signs = SignPolicy::defaults_for(axis);

  const FourierOrbit seed = resolve_seed(flags, axis, kmax);
  const SolveOutcome outcome = solve(seed, flags.omega, config);
  print_summary(outcome, flags.omega);

  if (!flags.out.empty()) {
    OrbitDocument doc;
    doc.orbit = outcome.orbit;
    doc.solve_metadata = outcome;
    doc.tol = config.tol;
    doc.delta_s = config.delta_s;
    doc.max_iters = config.max_iters;
    doc.save(resolve_out(flags.out));
    std::printf("wrote %s\n", resolve_out(flags.out).string().c_str());
  }
  return exit_code_for(outcome.status);
}

struct SweepFlags {
  std::string axis = "x";
  int n = 3;
  int kmax = 0;
  double omega_start = 1.0, omega_end = 0.0, step = 0.05;
  double tol = 1e-12;
  long max_iters = 200000;
  double delta_s = 0.2;
  std::string seed;
  std::string out = "family";
  int trajectory_samples = 512;
};

std::vector<double> omega_range(double start, double end, double step) {
  if (step <= 0.0) throw CLI::ValidationError("--step must be positive");
  std::vector<double> omegas;
  const double dir = end >= start ? 1.0 : -1.0;
  const long count = std::lround(std::abs(end - start) / step);
  for (long i = 0; i <= count; ++i) {
    omegas.push_back(start + dir * step * static_cast<double>(i));
  }
  return omegas;
}

int run_sweep(const SweepFlags& flags) {
  const RotationAxis axis = axis_from_name(flags.axis.at(0));
  const int kmax = flags.kmax > 0 ? flags.kmax : default_k_max(flags.n);

  SolverConfig config;
  config.tol = flags.tol;
  config.max_iters = flags.max_iters;
  config.delta_s = flags.delta_s;
  config.signs = SignPolicy::defaults_for(axis);

  std::optional<FourierOrbit> seed;
  if (!flags.seed.empty()) seed = OrbitDocument::load(flags.seed).orbit;

  const std::vector<double> omegas = omega_range(flags.omega_start, flags.omega_end, flags.step);
  const FamilyRecord record = continuation_sweep(axis, flags.n, omegas, config, seed, kmax);

  const fs::path base = resolve_out(flags.out);
  FamilyDocument doc;
  doc.record = record;
  doc.tol = config.tol;
  doc.delta_s = config.delta_s;
  doc.max_iters = config.max_iters;
  doc.save(base.string() + ".json");

  const CoefficientTable table = CoefficientTable::from_family(record);
  table.save(base.string() + ".csv");

  std::vector<std::pair<double, std::string>> trajectory_files;
  for (const FamilyPoint& p : record.points) {
    if (p.outcome.status != SolveStatus::Converged) continue;
    std::vector<TrajectorySample> samples;
    for (int i = 0; i <= flags.trajectory_samples; ++i) {
      const double t = 2.0 * std::numbers::pi * i / flags.trajectory_samples;
      TrajectorySample s;
      s.time = t;
      for (int j = 0; j < p.outcome.orbit.n_bodies; ++j) {
        s.positions.push_back(body_trajectory(p.outcome.orbit, j, t).position);
      }
      samples.push_back(std::move(s));
    }
    char suffix[32];
    std::snprintf(suffix, sizeof(suffix), "_omega%.4f.dat", p.omega);
    const fs::path traj = base.string() + std::string(suffix);
    save_trajectory(traj, samples);
    trajectory_files.emplace_back(p.omega, traj.filename().string());
  }

  const std::string script =
      sweep_plot_script(base.filename().string() + ".csv", trajectory_files);
  {
    std::ofstream gp(base.string() + ".gp");
    gp << script;
  }

  std::printf("sweep %s: %zu points, %s\n", flags.axis.c_str(), record.points.size(),
              record.all_converged() ? "all converged" : "stopped early");
  for (const FamilyPoint& p : record.points) {
    std::printf("  omega %.4f: %s (%ld iterations)\n", p.omega, to_string(p.outcome.status),
                p.outcome.iterations);
  }
  if (!record.all_converged()) {
    const int i = record.first_failure();
    std::printf("boundary: last converged omega %.4f, failed at %.4f\n",
                i > 0 ? record.points[i - 1].omega : std::nan(""), record.points[i].omega);
    return exit_code_for(record.points[i].outcome.status);
  }
  return kOk;
}

struct IntegrateFlags {
  std::string orbit_file;
  double periods = 100.0;
  int steps_per_period = 4096;
  double perturb = 0.0;
  unsigned long long rng_seed = 12345;
  std::string out_prefix = "run";
  int sample_stride = 256;
};

int run_integrate(const IntegrateFlags& flags) {
  const OrbitDocument doc = OrbitDocument::load(flags.orbit_file);
  const fs::path base = resolve_out(flags.out_prefix);

  if (flags.perturb > 0.0) {
    ProbeConfig config;
    config.perturbation_scale = flags.perturb;
    config.periods = flags.periods;
    config.steps_per_period = flags.steps_per_period;
    config.rng_seed = flags.rng_seed;
    config.sample_stride = flags.sample_stride;
    const StabilityReport report = stability_probe(doc.orbit, config);
    save_trajectory(base.string() + "_trajectory.dat", report.samples);
    std::ofstream(base.string() + "_report.json") << stability_report_json(report);
    std::printf("classification: %s after %.1f periods\n", to_string(report.classification),
                report.periods_run);
    std::printf("energy drift: %.3g  momentum drift: %.3g  max excursion: %.3g\n",
                report.energy_drift, report.momentum_drift, report.max_excursion);
    return report.classification == StabilityClass::Stable
               ? kOk
               : (report.classification == StabilityClass::CollisionTerminated ? kCollision
                                                                               : kUnstable);
  }

  const PhaseState initial = initial_state_from_orbit(doc.orbit, 0.0);
  const IntegrationResult result =
      integrate(initial, flags.periods, flags.steps_per_period, flags.sample_stride);
  save_trajectory(base.string() + "_trajectory.dat", result.samples);
  std::ofstream(base.string() + "_ledger.json") << conservation_report_json(
      result.ledger, flags.periods, flags.steps_per_period, result.collided);
  std::printf("energy drift: %.3g  momentum drift: %.3g  com distance: %.3g\n",
              result.ledger.max_energy_drift, result.ledger.max_momentum_drift,
              result.ledger.max_com_distance);
  if (result.collided) {
    std::printf("collision between bodies %d and %d\n", result.collision_body_i,
                result.collision_body_j);
    return kCollision;
  }
  return result.ledger.max_energy_drift <= 1e-5 ? kOk : kUnstable;
}

int run_perturb(double beta, int digits) {
  const LagrangeChart fp = fixed_point(beta);
  std::printf("beta: %.6g\n", beta);
  std::printf("fixed point: eps = %.6f  b2 = %.6f  b4 = %.6f\n", fp.eps, fp.b2, fp.b4);
  std::printf("contraction factors: eps %.6f  b2 %.6f  b4 %.6f\n", 1.0 - 4.0 * beta,
              0.4 * (1.0 - 8.4 * beta), (15.0 / 34.0) * (1.0 - 274.0 / 255.0 * beta));
  std::printf("iterations for %d digits: %ld\n", digits, iterations_estimate(digits, beta));
  return kOk;
}

int run_coeffs(const std::string& family_file, const std::string& out) {
  const FamilyDocument doc = FamilyDocument::load(family_file);
  const CoefficientTable table = CoefficientTable::from_family(doc.record);
  if (out.empty()) {
    std::fputs(table.to_csv().c_str(), stdout);
  } else {
    table.save(resolve_out(out));
    std::printf("wrote %s\n", resolve_out(out).string().c_str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic n-body choreography solver in rotating frames"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one orbit at fixed omega");
  solve_cmd->add_option("--axis", solve_flags.axis, "rotation axis: x, y or z")
      ->check(CLI::IsMember({"x", "y", "z"}));
  solve_cmd->add_option("--omega", solve_flags.omega, "frame angular frequency")->required();
  solve_cmd->add_option("--n", solve_flags.n, "number of bodies (odd, >= 3)");
  solve_cmd->add_option("--kmax", solve_flags.kmax, "truncation order (default: per n)")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--tol", solve_flags.tol, "convergence tolerance");
  solve_cmd->add_option("--max-iters", solve_flags.max_iters, "iteration cap");
  solve_cmd->add_option("--delta-s", solve_flags.delta_s, "step parameter");
  solve_cmd->add_option("--seed", solve_flags.seed, "perturb | cold | <orbit file>");
  solve_cmd->add_option("--out", solve_flags.out, "output orbit document");

  SweepFlags sweep_flags;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "continuation sweep over omega");
  sweep_cmd->add_option("--axis", sweep_flags.axis)->check(CLI::IsMember({"x", "y", "z"}));
  sweep_cmd->add_option("--n", sweep_flags.n);
  sweep_cmd->add_option("--kmax", sweep_flags.kmax)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--omega-start", sweep_flags.omega_start)->required();
  sweep_cmd->add_option("--omega-end", sweep_flags.omega_end)->required();
  sweep_cmd->add_option("--step", sweep_flags.step)->required();
  sweep_cmd->add_option("--tol", sweep_flags.tol);
  sweep_cmd->add_option("--max-iters", sweep_flags.max_iters);
  sweep_cmd->add_option("--delta-s", sweep_flags.delta_s);
  sweep_cmd->add_option("--seed", sweep_flags.seed, "orbit document seeding the first point");
  sweep_cmd->add_option("--out", sweep_flags.out, "output basename");

  IntegrateFlags integrate_flags;
  CLI::App* integrate_cmd = app.add_subcommand("integrate", "integrate an orbit dynamically");
  integrate_cmd->add_option("--orbit", integrate_flags.orbit_file, "orbit document")->required();
  integrate_cmd->add_option("--periods", integrate_flags.periods);
  integrate_cmd->add_option("--steps-per-period", integrate_flags.steps_per_period);
  integrate_cmd->add_option("--perturb", integrate_flags.perturb,
                            "multiplicative perturbation scale (0 = none)");
  integrate_cmd->add_option("--rng-seed", integrate_flags.rng_seed);
  integrate_cmd->add_option("--out-prefix", integrate_flags.out_prefix);
  integrate_cmd->add_option("--sample-stride", integrate_flags.sample_stride);

  double perturb_beta = 0.0;
  int perturb_digits = 4;
  CLI::App* perturb_cmd = app.add_subcommand("perturb", "print the Lagrange-end chart");
  perturb_cmd->add_option("--beta", perturb_beta, "1 - omega")->required();
  perturb_cmd->add_option("--digits", perturb_digits, "target accuracy digits");

  std::string coeffs_family, coeffs_out;
  CLI::App* coeffs_cmd = app.add_subcommand("coeffs", "coefficient table from a family document");
  coeffs_cmd->add_option("--family", coeffs_family, "family document")->required();
  coeffs_cmd->add_option("--out", coeffs_out, "output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
    if (solve_cmd->parsed()) return run_solve(solve_flags);
    if (sweep_cmd->parsed()) return run_sweep(sweep_flags);
    if (integrate_cmd->parsed()) return run_integrate(integrate_flags);
    if (perturb_cmd->parsed()) {
      if (perturb_beta <= 0.0) throw CLI::ValidationError("--beta must be positive");
      return run_perturb(perturb_beta, perturb_digits);
    }
    if (coeffs_cmd->parsed()) return run_coeffs(coeffs_family, coeffs_out);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
