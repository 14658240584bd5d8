#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "splashcert/config.hpp"
#include "splashcert/errors.hpp"
#include "splashcert/format.hpp"
#include "splashcert/simulation.hpp"
#include "splashcert/splash_monitor.hpp"
#include "splashcert/version.hpp"

namespace splashcert {

inline constexpr const char* kSeriesHeader =
    "t,S,alpha_min,sup_f2,sup_g2,curvature_max,chord_arc,C_mon,envelope";
inline constexpr const char* kCertificateHeader =
    "t,S,alpha_min,sup_f2,sup_g2,curvature_max,chord_arc,C_mon,envelope,ineq_margin,applicable";

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: identical bytes on every platform
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

inline void row_core(std::ostream& out, const DiagnosticsRecord& r) {
  out << csv_double(r.t) << ',' << csv_double(r.separation) << ',' << csv_double(r.alpha_min)
      << ',' << csv_double(r.sup_f2) << ',' << csv_double(r.sup_g2) << ','
      << csv_double(r.curvature_max) << ',' << csv_double(r.chord_arc) << ','
      << csv_double(r.monitor_C) << ',' << csv_double(r.envelope);
}

}  // namespace detail

inline void write_series_csv(const std::filesystem::path& path, const TimeSeries& series) {
  auto out = detail::open_out(path);
  out << kSeriesHeader << '\n';
  for (const auto& r : series.records) {
    detail::row_core(out, r);
    out << '\n';
  }
  out << "#status: " << series.status << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

inline void write_certificate_csv(const std::filesystem::path& path,
                                  const BoundCertificate& cert, const std::string& status) {
  auto out = detail::open_out(path);
  out << kCertificateHeader << '\n';
  for (const auto& row : cert.rows) {
    detail::row_core(out, row.record);
    out << ',' << csv_double(row.ineq_margin) << ',' << (row.applicable ? 1 : 0) << '\n';
  }
  out << "#status: " << status << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

inline void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& snap) {
  auto out = detail::open_out(path);
  if (std::holds_alternative<PhasePair>(snap.geometry)) {
    const auto& p = std::get<PhasePair>(snap.geometry);
    out << "alpha,f,g\n";
    for (std::size_t j = 0; j < p.f.size(); ++j)
      out << csv_double(p.f.node(j)) << ',' << csv_double(p.f.value(j)) << ','
          << csv_double(p.g.value(j)) << '\n';
  } else {
    const auto& x = std::get<ClosedContour>(snap.geometry);
    out << "alpha,x1,x2\n";
    for (std::size_t j = 0; j < x.size(); ++j)
      out << csv_double(x.node(j)) << ',' << csv_double(x.x1()[j]) << ','
          << csv_double(x.x2()[j]) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

/// Reads a time-series CSV written by write_series_csv (the certificate
/// variant with two extra columns is accepted as well).
inline TimeSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open series file: " + path.string());
  TimeSeries series;
  std::string line;
  if (!std::getline(in, line)) throw MalformedSeriesError("series file is empty: " + path.string());
  if (line != kSeriesHeader && line != kCertificateHeader)
    throw MalformedSeriesError("unexpected series header: " + line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.rfind("#status:", 0) == 0) {
      std::string s = line.substr(8);
      const std::size_t b = s.find_first_not_of(' ');
      series.status = b == std::string::npos ? "" : s.substr(b);
      continue;
    }
    std::istringstream row(line);
    std::vector<double> vals;
    std::string cell;
    while (std::getline(row, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw MalformedSeriesError("series line " + std::to_string(lineno) +
                                   ": bad number '" + cell + "'");
      }
    }
    if (vals.size() != 9 && vals.size() != 11)
      throw MalformedSeriesError("series line " + std::to_string(lineno) +
                                 ": expected 9 or 11 columns, got " + std::to_string(vals.size()));
    DiagnosticsRecord r;
    r.t = vals[0];
    r.separation = vals[1];
    r.alpha_min = vals[2];
    r.sup_f2 = vals[3];
    r.sup_g2 = vals[4];
    r.curvature_max = vals[5];
    r.chord_arc = vals[6];
    r.monitor_C = vals[7];
    r.envelope = vals[8];
    series.records.push_back(r);
  }
  return series;
}

inline nlohmann::ordered_json summary_json(const SimConfig& cfg, const RunResult& run,
                                           const BoundCertificate& cert) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["system"] = to_string(cfg.system);
  j["scenario"] = cfg.scenario;
  j["status"] = run.series.status;
  j["records"] = run.series.records.size();
  j["S_initial"] = run.series.records.empty() ? nullptr
                                              : nlohmann::ordered_json(run.series.records.front().separation);
  j["S_final"] = run.series.records.empty() ? nullptr
                                            : nlohmann::ordered_json(run.series.records.back().separation);
  j["verdict_inequality"] = cert.inequality_pass ? "pass" : "fail";
  j["verdict_envelope"] = cert.envelope_pass ? "pass" : "fail";
  j["envelope_checked"] = cert.envelope_checked;
  j["applicable_records"] = cert.applicable_count;
  j["min_inequality_margin"] =
      std::isfinite(cert.min_margin) ? nlohmann::ordered_json(cert.min_margin) : nullptr;
  j["tol_rate"] = cert.tol_rate;
  if (cert.first_violation_t)
    j["first_violation_t"] = *cert.first_violation_t;
  else
    j["first_violation_t"] = nullptr;
  j["quad_tail_scale"] = run.tail_error_scale;
  j["sep_scale"] = run.sep_scale;
  return j;
}

/// The documented output manifest of a run directory.
inline std::vector<std::string> expected_manifest(std::size_t n_snapshots) {
  std::vector<std::string> files{"certificate.csv", "series.csv", "summary.json"};
  for (std::size_t i = 0; i < n_snapshots; ++i) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "snapshots/snapshot_%06zu.csv", i);
    files.emplace_back(buf);
  }
  return files;
}

/// Writes the full output set for a run: series.csv, certificate.csv,
/// summary.json and one snapshot CSV per recorded state. Returns the
/// relative paths written (the manifest). Repeated identical runs produce
/// byte-identical files.
inline std::vector<std::string> write_outputs(const SimConfig& cfg, const RunResult& run,
                                              const BoundCertificate& cert,
                                              const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "snapshots", ec);
  if (ec) throw IoError("cannot create output directory: " + (dir / "snapshots").string());
  write_series_csv(dir / "series.csv", run.series);
  write_certificate_csv(dir / "certificate.csv", cert, run.series.status);
  {
    auto out = detail::open_out(dir / "summary.json");
    out << summary_json(cfg, run, cert).dump(2) << '\n';
    if (!out) throw IoError("write failed: " + (dir / "summary.json").string());
  }
  const auto manifest = expected_manifest(run.snapshots.size());
  for (std::size_t i = 0; i < run.snapshots.size(); ++i)
    write_snapshot_csv(dir / manifest[3 + i], run.snapshots[i]);
  return manifest;
}

}  // namespace splashcert
