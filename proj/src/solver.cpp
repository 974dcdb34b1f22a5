#include "choreo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "choreo/perturbation.hpp"

namespace choreo {

namespace {
constexpr double kPi = std::numbers::pi;
}

double SignPolicy::sign_for(Series s, int k) const {
  for (const auto& o : overrides) {
    if (o.series == s && o.harmonic == k) return o.sign;
  }
  switch (s) {
    case Series::XSin: return x_sin;
    case Series::YSin: return y_sin;
    case Series::ZCos: return z_cos;
    case Series::XCos: return x_cos;
    default: return y_cos;
  }
}

SignPolicy SignPolicy::defaults_for(RotationAxis axis) {
  SignPolicy p;
  if (axis == RotationAxis::Y) {
    p.overrides.push_back({Series::ZCos, 1, +1.0});
    p.overrides.push_back({Series::ZCos, 3, +1.0});
  }
  return p;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::MaxItersReached: return "max-iters";
    default: return "collision";
  }
}

FourierOrbit descent_step(const FourierOrbit& orbit, const GradientVector& gradient,
                          const SolverConfig& config) {
  if (gradient.layout.size() != CoefficientLayout::of(orbit).size()) {
    throw std::invalid_argument("gradient layout does not match orbit");
  }
  const double npi = orbit.n_bodies * kPi;
  FourierOrbit out = orbit;
  for (std::size_t e = 0; e < gradient.layout.size(); ++e) {
    const auto [s, k] = gradient.layout.entries[e];
    const double u = static_cast<double>(k) * k + orbit.omega_rot * orbit.omega_rot;
    const double sign = config.signs.sign_for(s, k);
    out.series(s)[k] += sign * (config.delta_s / u) * (gradient.values[e] / npi);
  }
  return apply_momentum_mask(out);
}

namespace {

struct IterationResult {
  SolveStatus status;
  long iterations;
  double step_norm;
  double gradient_norm;
};

// Core loop shared by solve() and the sign-calibration probes.
IterationResult iterate(FourierOrbit& orbit, const QuadratureGrid& grid,
                        const SolverConfig& config, long max_iters,
                        std::vector<double>* gradient_trace = nullptr) {
  const double npi = orbit.n_bodies * kPi;
  double prev_norm = std::numeric_limits<double>::infinity();
  double min_norm = std::numeric_limits<double>::infinity();
  int rises = 0;
  double step_norm = 0.0, grad_norm = 0.0;

  for (long it = 1; it <= max_iters; ++it) {
    GradientVector grad;
    try {
      grad = action_gradient(orbit, grid);
    } catch (const CollisionError&) {
      return {SolveStatus::Collision, it, step_norm, grad_norm};
    }
    grad_norm = grad.max_abs() / npi;
    if (gradient_trace) gradient_trace->push_back(grad_norm);
    min_norm = std::min(min_norm, grad_norm);

    step_norm = 0.0;
    for (std::size_t e = 0; e < grad.layout.size(); ++e) {
      const auto [s, k] = grad.layout.entries[e];
      const double u = static_cast<double>(k) * k + orbit.omega_rot * orbit.omega_rot;
      const double delta =
          config.signs.sign_for(s, k) * (config.delta_s / u) * (grad.values[e] / npi);
      orbit.series(s)[k] += delta;
      step_norm = std::max(step_norm, std::abs(delta));
    }
    if (step_norm <= config.tol) return {SolveStatus::Converged, it, step_norm, grad_norm};

    // A genuine wrong-sign iteration grows the gradient norm steadily;
    // transients of mixed-sign policies rise briefly but stay near the
    // running minimum.
    if (grad_norm > prev_norm) {
      ++rises;
      if (rises >= config.divergence_window && grad_norm > 10.0 * min_norm) {
        return {SolveStatus::Diverged, it, step_norm, grad_norm};
      }
    } else {
      rises = 0;
    }
    prev_norm = grad_norm;
  }
  return {SolveStatus::MaxItersReached, max_iters, step_norm, grad_norm};
}

}  // namespace

SolveOutcome solve(const FourierOrbit& initial, double omega, const SolverConfig& config) {
  if (config.delta_s <= 0.0 || config.delta_s > 1.0) {
    throw std::invalid_argument("delta_s must lie in (0, 1]");
  }
  if (config.tol <= 0.0) throw std::invalid_argument("tol must be positive");

  SolveOutcome out;
  out.orbit = apply_momentum_mask(initial);
  out.orbit.omega_rot = omega;
  const QuadratureGrid grid = make_grid(out.orbit, config.min_grid_points);

  const IterationResult r = iterate(out.orbit, grid, config, config.max_iters);
  out.status = r.status;
  out.iterations = r.iterations;
  out.final_step_norm = r.step_norm;
  out.final_gradient_norm = r.gradient_norm;
  if (r.status != SolveStatus::Collision) {
    try {
      out.action = action(out.orbit, grid);
    } catch (const CollisionError&) {
      out.action.reset();
    }
  }
  return out;
}

std::size_t choose_best_probe(const std::vector<SignProbe>& probes) {
  std::size_t best = probes.size();
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const SignProbe& p = probes[i];
    if (p.diverged || p.final_gradient_norm >= p.initial_gradient_norm) continue;
    if (best == probes.size() || p.drift < probes[best].drift * (1.0 - 1e-12)) {
      best = i;
    }
  }
  if (best == probes.size()) {
    std::string msg = "sign calibration failed; probes:";
    for (const SignProbe& p : probes) {
      msg += " [diverged=" + std::string(p.diverged ? "yes" : "no") +
             " g0=" + std::to_string(p.initial_gradient_norm) +
             " g1=" + std::to_string(p.final_gradient_norm) + "]";
    }
    throw std::runtime_error(msg);
  }
  return best;
}

SolverConfig auto_sign_calibration(const FourierOrbit& initial, double omega,
                                   const SolverConfig& config, int probe_iters) {
  std::vector<SignPolicy> candidates;
  candidates.push_back(SignPolicy{});                                   // all descent
  candidates.push_back(SignPolicy::defaults_for(RotationAxis::Y));      // z-series head flipped
  SignPolicy all_z_up;
  all_z_up.z_cos = +1.0;
  candidates.push_back(all_z_up);

  std::vector<SignProbe> probes;
  for (const SignPolicy& policy : candidates) {
    SolverConfig probe_cfg = config;
    probe_cfg.signs = policy;

    FourierOrbit orbit = apply_momentum_mask(initial);
    orbit.omega_rot = omega;
    const QuadratureGrid grid = make_grid(orbit, config.min_grid_points);

    SignProbe probe;
    probe.policy = policy;
    const std::vector<double> start = pack_coefficients(orbit, CoefficientLayout::of(orbit));
    std::vector<double> trace;
    const IterationResult r = iterate(orbit, grid, probe_cfg, probe_iters, &trace);
    probe.diverged = (r.status == SolveStatus::Diverged || r.status == SolveStatus::Collision);
    const std::vector<double> end = pack_coefficients(orbit, CoefficientLayout::of(orbit));
    for (std::size_t i = 0; i < start.size(); ++i) {
      probe.drift = std::max(probe.drift, std::abs(end[i] - start[i]));
    }
    if (!trace.empty()) {
      probe.initial_gradient_norm = trace.front();
      probe.final_gradient_norm = trace.back();
      int decreases = 0;
      for (std::size_t i = 1; i < trace.size(); ++i) {
        if (trace[i] < trace[i - 1]) ++decreases;
      }
      probe.decrease_fraction =
          trace.size() > 1 ? static_cast<double>(decreases) / (trace.size() - 1) : 0.0;
    }
    probes.push_back(probe);
  }

  SolverConfig out = config;
  out.signs = probes[choose_best_probe(probes)].policy;
  return out;
}

bool FamilyRecord::all_converged() const {
  for (const FamilyPoint& p : points) {
    if (p.outcome.status != SolveStatus::Converged) return false;
  }
  return !points.empty();
}

int FamilyRecord::first_failure() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].outcome.status != SolveStatus::Converged) return static_cast<int>(i);
  }
  return -1;
}

FamilyRecord continuation_sweep(RotationAxis axis, int n_bodies,
                                const std::vector<double>& omega_list,
                                const SolverConfig& config,
                                std::optional<FourierOrbit> seed, int k_max) {
  if (omega_list.size() < 1) throw std::invalid_argument("omega_list is empty");
  for (std::size_t i = 1; i < omega_list.size(); ++i) {
    if ((omega_list[i] - omega_list[i - 1]) * (omega_list[1] - omega_list[0]) <= 0.0) {
      throw std::invalid_argument("omega_list must be strictly monotone");
    }
  }
  if (k_max <= 0) k_max = default_k_max(n_bodies);

  FamilyRecord record;
  record.axis = axis;
  record.n_bodies = n_bodies;
  record.k_max = k_max;

  FourierOrbit current(axis, omega_list.front(), n_bodies, k_max);
  if (seed.has_value()) {
    current = *seed;
    current.axis = axis;
    if (current.n_bodies != n_bodies) {
      throw std::invalid_argument("seed orbit has wrong n_bodies");
    }
  } else if (axis == RotationAxis::X && 1.0 - omega_list.front() <= 0.1 &&
             1.0 - omega_list.front() >= 0.0) {
    current = seed_orbit(1.0 - omega_list.front(), n_bodies, k_max);
  } else {
    throw std::runtime_error("no seed available for the first omega of the sweep");
  }

  const double radius = polygon_circumradius(n_bodies);
  double previous_dominant_z = 0.0;

  for (double omega : omega_list) {
    // The circle branch (x_sin identically zero) is invariant under the
    // iteration; kick the bifurcating mode when stepping off it.
    if (axis == RotationAxis::X && 1.0 - omega > 1e-12) {
      double max_a = 0.0;
      for (double v : current.x_sin) max_a = std::max(max_a, std::abs(v));
      if (max_a < 1e-9) {
        const double beta = std::min(1.0 - omega, 0.1);
        current.x_sin[1] = radius * std::sqrt(19.0 * beta / 3.0);
      }
    }

    SolveOutcome outcome = solve(current, omega, config);

    if (outcome.status == SolveStatus::Converged && axis != RotationAxis::Z) {
      // Branch guard: the dominant z coefficient must not flip sign
      // between adjacent family members (c -> -c is the counter-rotating
      // partner family).
      double dominant = 0.0;
      for (double v : outcome.orbit.z_cos) {
        if (std::abs(v) > std::abs(dominant)) dominant = v;
      }
      if (std::abs(dominant) > 1e-6 && std::abs(previous_dominant_z) > 1e-6 &&
          dominant * previous_dominant_z < 0.0) {
        throw std::runtime_error("continuation flipped the dominant z-coefficient branch");
      }
      if (std::abs(dominant) > 1e-6) previous_dominant_z = dominant;
    }

    record.points.push_back({omega, outcome});
    if (outcome.status != SolveStatus::Converged) break;
    current = record.points.back().outcome.orbit;
  }
  return record;
}

}  // namespace choreo
