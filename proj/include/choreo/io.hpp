#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "choreo/dynamics.hpp"
#include "choreo/orbit.hpp"
#include "choreo/solver.hpp"

namespace choreo {

/// Schema version of every document this tool writes.
inline constexpr int kSchemaVersion = 1;

/// JSON document for one orbit, with optional solver metadata.
/// Serialization is key-ordered and numbers round-trip exactly, so
/// load(save(x)) followed by save is byte-identical.
struct OrbitDocument {
  FourierOrbit orbit;
  std::optional<SolveOutcome> solve_metadata;
  // Defaults echoed so a document describes the run that made it.
  std::optional<double> tol, delta_s;
  std::optional<long> max_iters;

  std::string to_json() const;
  static OrbitDocument from_json(const std::string& text);

  void save(const std::filesystem::path& path) const;
  static OrbitDocument load(const std::filesystem::path& path);
};

struct FamilyDocument {
  FamilyRecord record;
  std::optional<double> tol, delta_s;
  std::optional<long> max_iters;

  std::string to_json() const;
  static FamilyDocument from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static FamilyDocument load(const std::filesystem::path& path);
};

/// Rows of the nine leading coefficients per converged omega, ascending.
struct CoefficientTable {
  RotationAxis axis = RotationAxis::X;
  std::vector<std::string> columns;            // includes leading "omega"
  std::vector<std::vector<double>> rows;

  static CoefficientTable from_family(const FamilyRecord& record);
  std::string to_csv() const;
  void save(const std::filesystem::path& path) const;
};

/// Plain-text trajectory: "t x0 y0 z0 ... x_{n-1} y_{n-1} z_{n-1}".
void save_trajectory(const std::filesystem::path& path,
                     const std::vector<TrajectorySample>& samples);

std::string stability_report_json(const StabilityReport& report);
std::string conservation_report_json(const ConservationLedger& ledger, double periods,
                                     int steps_per_period, bool collided);

/// Gnuplot script plotting the x-y projections of the per-omega
/// trajectory files and the coefficient columns of the table.
std::string sweep_plot_script(const std::string& table_csv,
                              const std::vector<std::pair<double, std::string>>& trajectories);

}  // namespace choreo
