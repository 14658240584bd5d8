// splashcert command line: runs contour-dynamics scenarios, certifies the
// separation bounds on recorded series and dumps scenario snapshots.
//
// Exit codes: 0 ok, 2 config error, 3 splash detected, 4 certification
// failure, 5 I/O error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "splashcert/splashcert.hpp"

namespace {

int exit_code_for(const splashcert::Error& e) { return static_cast<int>(e.code()); }

/// Certify when the series is long enough; a short series (flat runs
/// recorded once, early splashes) yields an empty passing certificate.
splashcert::BoundCertificate certify_series_or_empty(const splashcert::RunResult& run,
                                                     const splashcert::SimConfig& cfg) {
  if (run.series.records.size() < 3) {
    splashcert::BoundCertificate cert;
    cert.inequality_pass = true;
    cert.envelope_pass = true;
    cert.envelope_checked = false;
    return cert;
  }
  return splashcert::certify(run.series, splashcert::certify_options_for(cfg, run));
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
  using namespace splashcert;
  SimConfig cfg = load_config(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;

  const RunResult run = run_simulation(cfg);
  const BoundCertificate cert = certify_series_or_empty(run, cfg);
  write_outputs(cfg, run, cert, cfg.out_dir);
  std::cout << summary_json(cfg, run, cert).dump(2) << std::endl;

  if (run.series.status == "splash") return 3;
  if (run.series.status != "ok") return static_cast<int>(ErrorCode::numerical);
  if (!cert.inequality_pass || !cert.envelope_pass) return 4;
  return 0;
}

int cmd_certify(const std::string& series_path, double small_sep_frac, double sep_scale,
                double tol_env, double tol_rate_frac, const std::string& out_path) {
  using namespace splashcert;
  const TimeSeries series = read_series_csv(series_path);
  CertifyOptions opt;
  opt.small_sep_frac = small_sep_frac;
  opt.sep_scale = sep_scale;
  opt.tol_env = tol_env;
  opt.tol_rate_frac = tol_rate_frac;
  const BoundCertificate cert = certify(series, opt);

  nlohmann::ordered_json j;
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
  std::cout << j.dump(2) << std::endl;

  if (!out_path.empty()) write_certificate_csv(out_path, cert, series.status);
  return (cert.inequality_pass && cert.envelope_pass) ? 0 : 4;
}

int cmd_scenario(const std::string& name, const std::vector<std::string>& sets, bool dump) {
  using namespace splashcert;
  SimConfig cfg;
  cfg.scenario = name;
  cfg.system = (name == "circle" || name == "ellipse" || name == "pinch_contour")
                   ? SystemKind::sqg_contour
                   : SystemKind::muskat_multiphase;
  for (const std::string& s : sets) {
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects name=value, got '" + s + "'");
    cfg.scenario_params[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
  }
  const InitialState state = make_scenario(cfg);
  if (dump) {
    if (state.is_pair()) {
      const auto& p = state.pair();
      std::cout << "alpha,f,g\n";
      for (std::size_t j = 0; j < p.f.size(); ++j)
        std::cout << csv_double(p.f.node(j)) << ',' << csv_double(p.f.value(j)) << ','
                  << csv_double(p.g.value(j)) << '\n';
    } else {
      const auto& x = state.contour();
      std::cout << "alpha,x1,x2\n";
      for (std::size_t j = 0; j < x.size(); ++j)
        std::cout << csv_double(x.node(j)) << ',' << csv_double(x.x1()[j]) << ','
                  << csv_double(x.x2()[j]) << '\n';
    }
  } else {
    std::cout << "scenario '" << name << "' valid (" << cfg.grid_n << " nodes)" << std::endl;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contour dynamics for multi-phase Muskat and SQG sharp fronts with a "
               "minimum-separation splash monitor"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* run = app.add_subcommand("run", "run a configured scenario and write outputs");
  run->add_option("--config", config_path, "configuration file")->required();
  run->add_option("--out", out_dir, "output directory (overrides out_dir in the config)");

  std::string series_path, cert_out;
  double small_sep_frac = 0.1, sep_scale = 1.0, tol_env = 1e-3, tol_rate_frac = 1e-3;
  auto* cert = app.add_subcommand("certify", "certify a recorded time-series CSV");
  cert->add_option("--series", series_path, "time-series CSV")->required();
  cert->add_option("--small-sep-frac", small_sep_frac, "applicability fraction");
  cert->add_option("--sep-scale", sep_scale, "separation scale min{f_inf - g_inf, 1}");
  cert->add_option("--tol-env", tol_env, "envelope tolerance");
  cert->add_option("--tol-rate-frac", tol_rate_frac, "rate tolerance fraction");
  cert->add_option("--out", cert_out, "write the certificate CSV here");

  std::string scen_name;
  std::vector<std::string> scen_sets;
  bool scen_dump = false;
  auto* scen = app.add_subcommand("scenario", "validate or dump a named scenario");
  scen->add_option("--name", scen_name, "scenario name")->required();
  scen->add_option("--set", scen_sets, "override a parameter, name=value (repeatable)");
  scen->add_flag("--dump", scen_dump, "print the snapshot CSV to stdout");

  auto* ver = app.add_subcommand("version", "print the version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (cert->parsed()) return cmd_certify(series_path, small_sep_frac, sep_scale, tol_env,
                                           tol_rate_frac, cert_out);
    if (scen->parsed()) return cmd_scenario(scen_name, scen_sets, scen_dump);
    if (ver->parsed()) {
      std::cout << "splashcert " << splashcert::kVersion << std::endl;
      return 0;
    }
  } catch (const splashcert::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}
