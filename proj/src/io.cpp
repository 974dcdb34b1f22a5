#include "choreo/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace choreo {

using ordered_json = nlohmann::ordered_json;

namespace {

const char* kSeriesKeys[5] = {"a", "b", "c", "x_cos", "y_cos"};
const Series kSeriesOrder[5] = {Series::XSin, Series::YSin, Series::ZCos, Series::XCos,
                                Series::YCos};

ordered_json orbit_to_json(const FourierOrbit& orbit) {
  ordered_json j;
  j["axis"] = std::string(1, axis_name(orbit.axis));
  j["omega"] = orbit.omega_rot;
  j["n"] = orbit.n_bodies;
  j["k_max"] = orbit.k_max;
  ordered_json coeffs;
  for (int s = 0; s < 5; ++s) {
    const auto& arr = orbit.series(kSeriesOrder[s]);
    bool any = false;
    for (double v : arr) any = any || v != 0.0;
    // a, b, c always written; the axis-Z extensions only when used.
    if (s < 3 || any) coeffs[kSeriesKeys[s]] = arr;
  }
  j["coefficients"] = std::move(coeffs);
  return j;
}

FourierOrbit orbit_from_json(const ordered_json& j) {
  const std::string axis = j.at("axis").get<std::string>();
  if (axis.size() != 1) throw std::runtime_error("bad axis field");
  FourierOrbit orbit(axis_from_name(axis[0]), j.at("omega").get<double>(),
                     j.at("n").get<int>(), j.at("k_max").get<int>());
  const auto& coeffs = j.at("coefficients");
  for (int s = 0; s < 5; ++s) {
    if (!coeffs.contains(kSeriesKeys[s])) continue;
    auto arr = coeffs.at(kSeriesKeys[s]).get<std::vector<double>>();
    if (static_cast<int>(arr.size()) != orbit.k_max + 1) {
      throw std::runtime_error("coefficient array length does not match k_max");
    }
    orbit.series(kSeriesOrder[s]) = std::move(arr);
  }
  return orbit;
}

ordered_json action_to_json(const ActionBreakdown& a) {
  ordered_json j;
  j["kinetic"] = a.kinetic;
  j["potential"] = a.potential;
  j["centrifugal"] = a.centrifugal;
  j["coriolis"] = a.coriolis;
  j["total"] = a.total;
  return j;
}

ActionBreakdown action_from_json(const ordered_json& j) {
  ActionBreakdown a;
  a.kinetic = j.at("kinetic").get<double>();
  a.potential = j.at("potential").get<double>();
  a.centrifugal = j.at("centrifugal").get<double>();
  a.coriolis = j.at("coriolis").get<double>();
  a.total = j.at("total").get<double>();
  return a;
}

SolveStatus status_from_string(const std::string& s) {
  if (s == "converged") return SolveStatus::Converged;
  if (s == "diverged") return SolveStatus::Diverged;
  if (s == "max-iters") return SolveStatus::MaxItersReached;
  if (s == "collision") return SolveStatus::Collision;
  throw std::runtime_error("unknown solve status: " + s);
}

ordered_json outcome_to_json(const SolveOutcome& o) {
  ordered_json j;
  j["status"] = to_string(o.status);
  j["iterations"] = o.iterations;
  j["final_step_norm"] = o.final_step_norm;
  j["final_gradient_norm"] = o.final_gradient_norm;
  if (o.action) j["action"] = action_to_json(*o.action);
  return j;
}

void outcome_from_json(const ordered_json& j, SolveOutcome& o) {
  o.status = status_from_string(j.at("status").get<std::string>());
  o.iterations = j.at("iterations").get<long>();
  o.final_step_norm = j.at("final_step_norm").get<double>();
  o.final_gradient_norm = j.at("final_gradient_norm").get<double>();
  if (j.contains("action")) o.action = action_from_json(j.at("action"));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string OrbitDocument::to_json() const {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "orbit";
  ordered_json orbit_json = orbit_to_json(orbit);
  for (auto& [key, value] : orbit_json.items()) j[key] = value;
  if (tol || delta_s || max_iters || solve_metadata) {
    ordered_json solver;
    if (tol) solver["tol"] = *tol;
    if (delta_s) solver["delta_s"] = *delta_s;
    if (max_iters) solver["max_iters"] = *max_iters;
    if (solve_metadata) {
      const ordered_json outcome_json = outcome_to_json(*solve_metadata);
      for (const auto& [key, value] : outcome_json.items()) solver[key] = value;
    }
    j["solver"] = std::move(solver);
  }
  return j.dump(2) + "\n";
}

OrbitDocument OrbitDocument::from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw std::runtime_error("unsupported schema_version");
  }
  OrbitDocument doc;
  doc.orbit = orbit_from_json(j);
  if (j.contains("solver")) {
    const auto& solver = j.at("solver");
    if (solver.contains("tol")) doc.tol = solver.at("tol").get<double>();
    if (solver.contains("delta_s")) doc.delta_s = solver.at("delta_s").get<double>();
    if (solver.contains("max_iters")) doc.max_iters = solver.at("max_iters").get<long>();
    if (solver.contains("status")) {
      SolveOutcome o;
      outcome_from_json(solver, o);
      o.orbit = doc.orbit;
      doc.solve_metadata = std::move(o);
    }
  }
  return doc;
}

void OrbitDocument::save(const std::filesystem::path& path) const { write_text(path, to_json()); }

OrbitDocument OrbitDocument::load(const std::filesystem::path& path) {
  return from_json(read_text(path));
}

std::string FamilyDocument::to_json() const {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "family";
  j["axis"] = std::string(1, axis_name(record.axis));
  j["n"] = record.n_bodies;
  j["k_max"] = record.k_max;
  if (tol) j["tol"] = *tol;
  if (delta_s) j["delta_s"] = *delta_s;
  if (max_iters) j["max_iters"] = *max_iters;
  ordered_json points = ordered_json::array();
  for (const FamilyPoint& p : record.points) {
    ordered_json pj = outcome_to_json(p.outcome);
    ordered_json entry;
    entry["omega"] = p.omega;
    for (auto& [key, value] : pj.items()) entry[key] = value;
    entry["orbit"] = orbit_to_json(p.outcome.orbit);
    points.push_back(std::move(entry));
  }
  j["points"] = std::move(points);
  return j.dump(2) + "\n";
}

FamilyDocument FamilyDocument::from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw std::runtime_error("unsupported schema_version");
  }
  if (j.at("kind").get<std::string>() != "family") {
    throw std::runtime_error("not a family document");
  }
  FamilyDocument doc;
  doc.record.axis = axis_from_name(j.at("axis").get<std::string>().at(0));
  doc.record.n_bodies = j.at("n").get<int>();
  doc.record.k_max = j.at("k_max").get<int>();
  if (j.contains("tol")) doc.tol = j.at("tol").get<double>();
  if (j.contains("delta_s")) doc.delta_s = j.at("delta_s").get<double>();
  if (j.contains("max_iters")) doc.max_iters = j.at("max_iters").get<long>();
  for (const auto& entry : j.at("points")) {
    FamilyPoint p;
    p.omega = entry.at("omega").get<double>();
    outcome_from_json(entry, p.outcome);
    p.outcome.orbit = orbit_from_json(entry.at("orbit"));
    doc.record.points.push_back(std::move(p));
  }
  return doc;
}

void FamilyDocument::save(const std::filesystem::path& path) const {
  write_text(path, to_json());
}

FamilyDocument FamilyDocument::load(const std::filesystem::path& path) {
  return from_json(read_text(path));
}

CoefficientTable CoefficientTable::from_family(const FamilyRecord& record) {
  CoefficientTable table;
  table.axis = record.axis;
  table.columns = {"omega", "a1", "a3", "a5", "b2", "b4", "b6"};
  std::vector<std::pair<Series, int>> zcols;
  switch (record.axis) {
    case RotationAxis::X:
      zcols = {{Series::ZCos, 2}, {Series::ZCos, 4}, {Series::ZCos, 6}};
      table.columns.insert(table.columns.end(), {"c2", "c4", "c6"});
      break;
    case RotationAxis::Y:
      zcols = {{Series::ZCos, 1}, {Series::ZCos, 3}, {Series::ZCos, 5}};
      table.columns.insert(table.columns.end(), {"c1", "c3", "c5"});
      break;
    default:
      zcols = {{Series::YCos, 1}, {Series::XCos, 2}, {Series::YCos, 3}};
      table.columns.insert(table.columns.end(), {"ycos1", "xcos2", "ycos3"});
      break;
  }

  std::vector<const FamilyPoint*> converged;
  for (const FamilyPoint& p : record.points) {
    if (p.outcome.status == SolveStatus::Converged) converged.push_back(&p);
  }
  std::sort(converged.begin(), converged.end(),
            [](const FamilyPoint* a, const FamilyPoint* b) { return a->omega < b->omega; });

  for (const FamilyPoint* p : converged) {
    const FourierOrbit& o = p->outcome.orbit;
    std::vector<double> row = {p->omega, o.x_sin[1], o.x_sin[3], o.x_sin[5],
                               o.y_sin[2], o.y_sin[4], o.y_sin[6]};
    for (auto [s, k] : zcols) row.push_back(o.series(s)[k]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {
std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string CoefficientTable::to_csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_full(row[i]);
    }
    out << "\n";
  }
  return out.str();
}

void CoefficientTable::save(const std::filesystem::path& path) const {
  write_text(path, to_csv());
}

void save_trajectory(const std::filesystem::path& path,
                     const std::vector<TrajectorySample>& samples) {
  std::ostringstream out;
  for (const TrajectorySample& s : samples) {
    out << format_full(s.time);
    for (const Vec3& p : s.positions) {
      out << " " << format_full(p.x) << " " << format_full(p.y) << " " << format_full(p.z);
    }
    out << "\n";
  }
  write_text(path, out.str());
}

std::string stability_report_json(const StabilityReport& report) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "stability_report";
  j["classification"] = to_string(report.classification);
  j["periods_run"] = report.periods_run;
  j["energy_drift"] = report.energy_drift;
  j["momentum_drift"] = report.momentum_drift;
  j["max_excursion"] = report.max_excursion;
  j["perturbation_scale"] = report.perturbation_scale;
  j["rng_seed"] = report.rng_seed;
  j["excursion_bound"] = report.excursion_bound;
  return j.dump(2) + "\n";
}

std::string conservation_report_json(const ConservationLedger& ledger, double periods,
                                     int steps_per_period, bool collided) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "conservation_report";
  j["periods"] = periods;
  j["steps_per_period"] = steps_per_period;
  j["collided"] = collided;
  j["initial_energy"] = ledger.initial_energy;
  j["initial_angular_momentum"] = {ledger.initial_angular_momentum.x,
                                   ledger.initial_angular_momentum.y,
                                   ledger.initial_angular_momentum.z};
  j["max_energy_drift"] = ledger.max_energy_drift;
  j["max_momentum_drift"] = ledger.max_momentum_drift;
  j["max_com_distance"] = ledger.max_com_distance;
  return j.dump(2) + "\n";
}

std::string sweep_plot_script(const std::string& table_csv,
                              const std::vector<std::pair<double, std::string>>& trajectories) {
  std::ostringstream out;
  out << "# gnuplot script generated by choreo sweep\n";
  out << "set datafile separator ','\n";
  out << "set key outside\n";
  out << "set term pngcairo size 900,700\n\n";
  out << "set output 'coefficients_a.png'\n";
  out << "set xlabel 'omega'\nset ylabel 'coefficient'\n";
  out << "plot '" << table_csv << "' using 1:2 with linespoints title columnheader(2), \\\n";
  out << "     '" << table_csv << "' using 1:3 with linespoints title columnheader(3), \\\n";
  out << "     '" << table_csv << "' using 1:4 with linespoints title columnheader(4)\n\n";
  out << "set output 'coefficients_b.png'\n";
  out << "plot '" << table_csv << "' using 1:5 with linespoints title columnheader(5), \\\n";
  out << "     '" << table_csv << "' using 1:6 with linespoints title columnheader(6), \\\n";
  out << "     '" << table_csv << "' using 1:7 with linespoints title columnheader(7)\n\n";
  out << "set output 'coefficients_z.png'\n";
  out << "plot '" << table_csv << "' using 1:8 with linespoints title columnheader(8), \\\n";
  out << "     '" << table_csv << "' using 1:9 with linespoints title columnheader(9), \\\n";
  out << "     '" << table_csv << "' using 1:10 with linespoints title columnheader(10)\n\n";
  out << "set datafile separator whitespace\n";
  out << "set output 'projections_xy.png'\n";
  out << "set xlabel 'x'\nset ylabel 'y'\n";
  out << "plot ";
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    if (i) out << ", \\\n     ";
    out << "'" << trajectories[i].second << "' using 2:3 with lines title 'omega="
        << trajectories[i].first << "'";
  }
  out << "\n";
  return out.str();
}

}  // namespace choreo
