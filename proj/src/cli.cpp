#include "spheroidal/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "spheroidal/evaluate.hpp"
#include "spheroidal/oracle.hpp"
#include "spheroidal/table_io.hpp"

namespace spheroidal {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_beta_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad beta value '" + item + "'");
    }
    if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument("bad beta value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("--beta needs at least one value");
  return out;
}

std::pair<std::string, double> parse_tolerance(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--tol expects KEY=VALUE, got '" + text + "'");
  std::string value = text.substr(eq + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad tolerance value in '" + text + "'");
  }
  if (used != value.size() || !std::isfinite(v) || v < 0) throw std::invalid_argument("bad tolerance value in '" + text + "'");
  return {text.substr(0, eq), v};
}

// Renders into a string first so a failed run never leaves a partial file.
int emit(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (config.output_path.empty()) {
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing output");
    return exit_ok;
  }
  std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + config.output_path + "' for writing");
  file << text;
  file.close();
  if (!file) throw IoError("failed writing '" + config.output_path + "'");
  return exit_ok;
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.command != "coeffs" && config.command != "eval" && config.command != "verify") {
    throw std::invalid_argument("unknown command '" + config.command + "'");
  }
  if (config.m < 1) {
    throw std::invalid_argument("m = " + std::to_string(config.m) +
                                " is not supported: the series is defined only for integer m >= 1");
  }
  if (config.order < 0) throw std::invalid_argument("order must be >= 0");
  if (config.format != "csv" && config.format != "structured-text") {
    throw std::invalid_argument("format must be csv or structured-text, got '" + config.format + "'");
  }
  if (config.command == "eval") {
    if (config.betas.size() != 1) throw std::invalid_argument("eval takes exactly one beta");
    if (config.theta_points < 1) throw std::invalid_argument("theta-points must be >= 1");
  }
  if (config.command == "verify" && config.betas.empty()) throw std::invalid_argument("verify needs at least one beta");
  if (!config.tolerances.empty()) apply_overrides(VerifyTolerances{}, config.tolerances);
}

int cmd_coeffs(const RunConfig& config, std::ostream& out, std::ostream&) {
  const SeriesState state = compute_series(ModeParams(config.m, config.order));
  const CoefficientDocument doc = make_document(state);
  std::ostringstream text;
  if (config.format == "csv") {
    write_document_csv(text, doc);
  } else {
    write_document(text, doc);
  }
  return emit(config, out, text.str());
}

int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const double beta = config.betas.front();
  if (std::abs(beta) > 1.0) {
    err << "caution: |beta| = " << format_double(std::abs(beta))
        << " exceeds 1; the series has no established convergence radius there\n";
  }
  const SeriesState state = compute_series(ModeParams(config.m, config.order));
  const SeriesEvaluator eval(state);
  const int points = config.theta_points;
  std::vector<double> thetas(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) thetas[static_cast<std::size_t>(i)] = (i + 1) * std::numbers::pi / (points + 1);
  const auto samples = eval.ground_wavefunction(beta, thetas);
  const double e0 = eval.energy(beta);

  std::ostringstream text;
  if (config.format == "csv") {
    text << "# m=" << config.m << " N=" << config.order << " beta=" << format_double(beta)
         << " E0=" << format_double(e0) << "\n";
    text << "theta,psi,theta_big,w,residual\n";
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const EvalPoint p{thetas[i], beta};
      text << format_double(thetas[i]) << ',' << format_double(samples[i].psi) << ','
           << format_double(samples[i].theta_big) << ',' << format_double(eval.w(p)) << ','
           << format_double(eval.riccati_residual(p)) << "\n";
    }
  } else {
    nlohmann::ordered_json j;
    j["m"] = config.m;
    j["N"] = config.order;
    j["beta"] = format_double(beta);
    j["E0"] = format_double(e0);
    j["rows"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const EvalPoint p{thetas[i], beta};
      nlohmann::ordered_json row;
      row["theta"] = format_double(thetas[i]);
      row["psi"] = format_double(samples[i].psi);
      row["theta_big"] = format_double(samples[i].theta_big);
      row["w"] = format_double(eval.w(p));
      row["residual"] = format_double(eval.riccati_residual(p));
      j["rows"].push_back(std::move(row));
    }
    text << j.dump(2) << "\n";
  }
  return emit(config, out, text.str());
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const ModeParams params(config.m, config.order);
  VerifyOptions options;
  options.tol = apply_overrides(VerifyTolerances{}, config.tolerances);
  if (config.corrupt_coefficient) {
    const int n = config.order >= 1 ? 1 : 0;
    const SeriesState clean = compute_series(params);
    options.energy_override = std::make_pair(n, clean.energy()[n] + Rational(1, 1000));
  }
  for (double beta : config.betas) {
    if (std::abs(beta) > 1.0) {
      err << "caution: |beta| = " << format_double(std::abs(beta)) << " exceeds 1; reported but not judged\n";
    }
  }
  const std::vector<OracleReport> reports = verify_all(params, config.betas, options);

  std::ostringstream text;
  bool all_passed = true;
  for (const auto& r : reports) all_passed = all_passed && r.passed;
  if (config.format == "csv") {
    text << "# m=" << config.m << " N=" << config.order << " passed=" << (all_passed ? "true" : "false") << "\n";
    text << "check,m,N,beta,series,numeric,abs_gap,rel_gap,tolerance,grids,judged,passed,message\n";
    for (const auto& r : reports) {
      std::string grids;
      for (std::size_t i = 0; i < r.grid_sizes.size(); ++i) grids += (i ? ";" : "") + std::to_string(r.grid_sizes[i]);
      std::string message = r.error.empty() ? r.note : r.error;
      for (char& c : message) {
        if (c == ',' || c == '\n') c = ' ';
      }
      text << r.check << ',' << r.m << ',' << r.order << ',' << format_double(r.beta) << ','
           << format_double(r.series_value) << ',' << format_double(r.numeric_value) << ','
           << format_double(r.abs_gap) << ',' << format_double(r.rel_gap) << ',' << format_double(r.tolerance)
           << ',' << grids << ',' << (r.judged ? "true" : "false") << ',' << (r.passed ? "true" : "false") << ','
           << message << "\n";
    }
  } else {
    nlohmann::ordered_json j;
    j["m"] = config.m;
    j["N"] = config.order;
    j["passed"] = all_passed;
    j["reports"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
      nlohmann::ordered_json o;
      o["check"] = r.check;
      o["beta"] = format_double(r.beta);
      o["series"] = format_double(r.series_value);
      o["numeric"] = format_double(r.numeric_value);
      o["abs_gap"] = format_double(r.abs_gap);
      o["rel_gap"] = format_double(r.rel_gap);
      o["tolerance"] = format_double(r.tolerance);
      o["grids"] = r.grid_sizes;
      if (r.richardson_estimate != 0.0) o["richardson"] = format_double(r.richardson_estimate);
      o["judged"] = r.judged;
      o["passed"] = r.passed;
      if (!r.error.empty()) o["error"] = r.error;
      if (!r.note.empty()) o["note"] = r.note;
      j["reports"].push_back(std::move(o));
    }
    text << j.dump(2) << "\n";
  }
  emit(config, out, text.str());

  if (all_passed) return exit_ok;
  for (const auto& r : reports) {
    if (r.passed) continue;
    if (r.check == "residual_slope") {
      err << "FAILED residual_slope slope=" << format_double(r.series_value) << " outside ["
          << format_double(r.order + options.tol.slope_lo) << ", " << format_double(r.order + options.tol.slope_hi) << "]";
    } else {
      err << "FAILED " << r.check << " beta=" << format_double(r.beta) << " gap=" << format_double(r.abs_gap)
          << " tolerance=" << format_double(r.tolerance);
    }
    if (!r.error.empty()) err << " error: " << r.error;
    err << "\n";
  }
  return exit_verify_failed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-weight 1 spheroidal ground state: perturbation series and checks", "spheroidal_cli"};
  app.require_subcommand(1);

  RunConfig config;
  std::string beta_text;
  std::vector<std::string> tol_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--m", config.m, "azimuthal index, integer >= 1");
    sub->add_option("--order", config.order, "truncation order N");
    sub->add_option("--format", config.format, "csv or structured-text");
    sub->add_option("--out", config.output_path, "output file (default stdout)");
  };
  CLI::App* coeffs = app.add_subcommand("coeffs", "export exact coefficient tables");
  add_common(coeffs);
  coeffs->callback([&] { config.command = "coeffs"; });

  CLI::App* eval = app.add_subcommand("eval", "evaluate the ground state on a theta grid");
  add_common(eval);
  eval->add_option("--beta", beta_text, "beta value");
  eval->add_option("--theta-points", config.theta_points, "interior grid points");
  eval->callback([&] { config.command = "eval"; });

  CLI::App* verify = app.add_subcommand("verify", "compare the series against numerical oracles");
  add_common(verify);
  verify->add_option("--beta", beta_text, "comma-separated beta list");
  verify->add_option("--tol", tol_text, "tolerance override KEY=VALUE (repeatable)");
  verify->add_flag("--corrupt-coefficient", config.corrupt_coefficient)->group("");
  verify->callback([&] { config.command = "verify"; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  }

  try {
    if (beta_text.empty()) beta_text = config.command == "verify" ? "0,0.05,0.1" : "0.1";
    config.betas = parse_beta_list(beta_text);
    for (const auto& t : tol_text) config.tolerances.insert(parse_tolerance(t));
    validate(config);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  }

  try {
    if (config.command == "coeffs") return cmd_coeffs(config, out, err);
    if (config.command == "eval") return cmd_eval(config, out, err);
    return cmd_verify(config, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  }
}

}  // namespace spheroidal
