#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "splashcert/errors.hpp"
#include "splashcert/geometry.hpp"

namespace splashcert {

/// Rate constant of the separation inequality S_t >= -C S |ln S| for graph
/// pairs:
///
///   C = c0 * (|z21| + |z32|) * (sup|f''| + sup|g''|) * (sup|f| + sup|g| + 1).
///
/// The density jumps enter through their magnitudes so the constant stays
/// nonnegative for unordered SQG densities. c0 = 16 aggregates the factors
/// of the three region estimates behind the inequality (4 from the inner
/// region, 2 from each half of the middle region, and a margin of 2).
inline double monitor_constant_graph(const SupNorms& f, const SupNorms& g, double zeta21,
                                     double zeta32, double c0 = 16.0) {
  return c0 * (std::abs(zeta21) + std::abs(zeta32)) * (f.deriv2 + g.deriv2) *
         (f.value + g.value + 1.0);
}

/// Contour-mode rate constant C(sup|x''|, c_CA, eps0), taken multiplicative:
/// c0 * sup|x''| * (1 + 1/c_CA) * (1 + 1/eps0).
inline double monitor_constant_contour(double sup_second_deriv, double chord_arc, double eps0,
                                       double c0 = 16.0) {
  if (!(chord_arc > 0.0)) throw NumericalError("monitor_constant: chord-arc constant must be positive");
  if (!(eps0 > 0.0)) throw NumericalError("monitor_constant: eps0 must be positive");
  return c0 * sup_second_deriv * (1.0 + 1.0 / chord_arc) * (1.0 + 1.0 / eps0);
}

/// Double-exponential lower envelope
///
///   env(t) = exp( ln(S0) * exp( int_0^t C ds ) ),
///
/// with the rate integral taken by the trapezoidal rule over the sampled
/// C(t). Requires 0 < S0 < 1 (so ln S0 < 0). env(t0) = S0 exactly and the
/// envelope stays strictly positive for every finite t: a separation obeying
/// the differential inequality cannot reach zero in finite time.
///
/// Returns the envelope at each sample time.
inline std::vector<double> envelope_series(double s0, const std::vector<double>& times,
                                           const std::vector<double>& rates) {
  if (!(s0 > 0.0 && s0 < 1.0))
    throw NumericalError("envelope: initial separation must lie in (0, 1), got " +
                         std::to_string(s0));
  if (times.size() != rates.size()) throw NumericalError("envelope: time/rate size mismatch");
  const double log_s0 = std::log(s0);
  std::vector<double> env(times.size());
  double integral = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0) {
      const double dt = times[i] - times[i - 1];
      if (!(dt > 0.0)) throw MalformedSeriesError("envelope: time samples must increase");
      integral += 0.5 * (rates[i] + rates[i - 1]) * dt;
    }
    env[i] = integral == 0.0 ? s0 : std::exp(log_s0 * std::exp(integral));
  }
  return env;
}

/// Envelope at a single time t inside (or beyond) the sampled rate series;
/// the rate is held constant beyond the last sample.
inline double envelope_lower_bound(double s0, const std::vector<double>& times,
                                   const std::vector<double>& rates, double t) {
  if (!(s0 > 0.0 && s0 < 1.0))
    throw NumericalError("envelope: initial separation must lie in (0, 1), got " +
                         std::to_string(s0));
  if (times.empty() || times.size() != rates.size())
    throw NumericalError("envelope: empty or mismatched rate series");
  const double t0 = times.front();
  if (t < t0) throw NumericalError("envelope: query before the series start");
  double integral = 0.0;
  for (std::size_t i = 1; i < times.size() && times[i] <= t; ++i)
    integral += 0.5 * (rates[i] + rates[i - 1]) * (times[i] - times[i - 1]);
  // partial trapezoid up to t
  std::size_t last = 0;
  while (last + 1 < times.size() && times[last + 1] <= t) ++last;
  if (t > times[last]) {
    if (last + 1 < times.size()) {
      const double dt = times[last + 1] - times[last];
      const double frac = (t - times[last]) / dt;
      const double rate_t = rates[last] + frac * (rates[last + 1] - rates[last]);
      integral += 0.5 * (rates[last] + rate_t) * (t - times[last]);
    } else {
      integral += rates[last] * (t - times[last]);
    }
  }
  return integral == 0.0 ? s0 : std::exp(std::log(s0) * std::exp(integral));
}

/// One diagnostics row of a recorded run; mirrors the time-series CSV.
struct DiagnosticsRecord {
  double t = 0.0;
  double separation = 0.0;
  double alpha_min = 0.0;
  double sup_f2 = 0.0;
  double sup_g2 = 0.0;
  double curvature_max = 0.0;
  double chord_arc = std::numeric_limits<double>::quiet_NaN();
  double monitor_C = 0.0;
  double envelope = std::numeric_limits<double>::quiet_NaN();
};

struct TimeSeries {
  std::vector<DiagnosticsRecord> records;
  std::string status = "ok";  // "ok" | "splash" | "error:<code>"
};

struct CertifyOptions {
  double small_sep_frac = 0.1;  // records with S < frac * sep_scale are applicable
  double sep_scale = 1.0;       // min{f_inf - g_inf, 1}; 1 for periodic data
  double tol_env = 1e-3;
  double tol_rate_frac = 1e-3;  // tol_rate = frac * max |dS/dt|
};

struct CertificateRow {
  DiagnosticsRecord record;
  double ds_dt = 0.0;
  double ineq_margin = 0.0;  // dS/dt + C * S * |ln S|
  bool applicable = false;
};

/// Verdicts for the differential inequality dS/dt >= -C S |ln S| and the
/// double-exponential envelope on a measured separation series.
struct BoundCertificate {
  std::vector<CertificateRow> rows;
  bool inequality_pass = false;
  bool envelope_pass = false;
  bool envelope_checked = false;  // false when S(0) >= 1 (outside the envelope regime)
  std::optional<double> first_violation_t;
  double min_margin = std::numeric_limits<double>::infinity();
  double tol_rate = 0.0;
  std::size_t applicable_count = 0;
};

/// Certifies a recorded series.
///
/// dS/dt is estimated by centered differences (one-sided at the ends),
/// legitimate because the running minimum is Lipschitz and differentiable
/// almost everywhere. The inequality verdict checks
///
///   dS/dt >= -C S |ln S| - tol_rate
///
/// at every applicable record (S below small_sep_frac * sep_scale); the
/// envelope verdict checks S(t) >= env(t) * (1 - tol_env) at every record.
/// With S(0) >= 1 the envelope formula does not apply and that verdict
/// passes vacuously with envelope_checked = false.
inline BoundCertificate certify(const TimeSeries& series, const CertifyOptions& opt = {}) {
  const auto& rec = series.records;
  BoundCertificate cert;
  if (rec.size() < 3)
    throw MalformedSeriesError("certify: need at least 3 records, got " +
                               std::to_string(rec.size()));
  for (std::size_t i = 1; i < rec.size(); ++i)
    if (!(rec[i].t > rec[i - 1].t))
      throw MalformedSeriesError("certify: time column must be strictly increasing");

  const std::size_t n = rec.size();
  std::vector<double> times(n), seps(n), rates(n);
  for (std::size_t i = 0; i < n; ++i) {
    times[i] = rec[i].t;
    seps[i] = rec[i].separation;
    rates[i] = rec[i].monitor_C;
  }

  std::vector<double> ds(n);
  ds[0] = (seps[1] - seps[0]) / (times[1] - times[0]);
  ds[n - 1] = (seps[n - 1] - seps[n - 2]) / (times[n - 1] - times[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    ds[i] = (seps[i + 1] - seps[i - 1]) / (times[i + 1] - times[i - 1]);

  double max_abs_ds = 0.0;
  for (double d : ds) max_abs_ds = std::max(max_abs_ds, std::abs(d));
  cert.tol_rate = opt.tol_rate_frac * max_abs_ds;

  const double s0 = seps.front();
  cert.envelope_checked = s0 > 0.0 && s0 < 1.0;
  std::vector<double> env;
  if (cert.envelope_checked) env = envelope_series(s0, times, rates);

  const double applicable_below = opt.small_sep_frac * opt.sep_scale;
  cert.inequality_pass = true;
  cert.envelope_pass = true;
  cert.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CertificateRow row;
    row.record = rec[i];
    if (cert.envelope_checked) row.record.envelope = env[i];
    row.ds_dt = ds[i];
    row.applicable = seps[i] < applicable_below;
    row.ineq_margin = ds[i] + rates[i] * seps[i] * std::abs(std::log(seps[i]));
    bool violated = false;
    if (row.applicable) {
      ++cert.applicable_count;
      cert.min_margin = std::min(cert.min_margin, row.ineq_margin);
      if (!(row.ineq_margin >= -cert.tol_rate)) {
        cert.inequality_pass = false;
        violated = true;
      }
    }
    if (cert.envelope_checked && !(seps[i] >= env[i] * (1.0 - opt.tol_env))) {
      cert.envelope_pass = false;
      violated = true;
    }
    if (violated && !cert.first_violation_t) cert.first_violation_t = times[i];
    cert.rows.push_back(row);
  }
  return cert;
}

}  // namespace splashcert
