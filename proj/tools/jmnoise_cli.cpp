// jmnoise command-line front end.
//
// Exit codes: 0 success (and "inside" for membership), 1 usage error,
// 2 I/O error, 3 membership query fell outside the region, 4 verification
// failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jmnoise/closed_form.hpp"
#include "jmnoise/measurement.hpp"
#include "jmnoise/mc_oracle.hpp"
#include "jmnoise/parallel.hpp"
#include "jmnoise/region.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitOutside = 3;
constexpr int kExitVerifyFailed = 4;

using namespace jmnoise;

EvalMode parse_mode(const std::string& name) {
  if (name == "float64") return EvalMode::float64;
  if (name == "extended") return EvalMode::extended;
  if (name == "exact") return EvalMode::exact_rational;
  throw CLI::ValidationError("--mode", "expected float64, extended or exact");
}

int write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return kExitIo;
  }
  out << text;
  if (!out.good()) {
    std::cerr << "error: short write to '" << path << "'\n";
    return kExitIo;
  }
  return kExitOk;
}

int cmd_boundary(int dim, int samples, const std::string& format,
                 const std::string& out_path, const std::string& mode_name) {
  const BoundaryCurve curve =
      export_curve(Dimension(dim), samples, parse_mode(mode_name));
  if (format == "csv") {
    std::ostringstream text;
    write_curve_csv(curve, text);
    return write_text(out_path, text.str());
  }
  return write_text(out_path, curve_to_json(curve) + "\n");
}

int cmd_membership(int dim, double eta, double p) {
  const MembershipVerdict verdict =
      is_jointly_measurable(Dimension(dim), NoiseParams(eta, p));
  std::printf("%s eta_max=%.17g margin=%.17g\n",
              verdict.inside ? "inside" : "outside", verdict.eta_max,
              verdict.margin);
  return verdict.inside ? kExitOk : kExitOutside;
}

int cmd_compare(int dim, const std::string& format, const std::string& out_path,
                int points) {
  const Dimension d(dim);
  std::ostringstream text;
  nlohmann::json rows = nlohmann::json::array();
  if (format == "csv") text << "p,eta_max,povm_bound,ratio\n";
  for (int i = 0; i <= points; ++i) {
    const double p = static_cast<double>(i) / points;
    const double pvm = eta_max(d, p);
    const double povm = povm_bound_eta(d, p);
    const double ratio = povm == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                     : pvm / povm;
    if (format == "csv") {
      char line[160];
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", p, pvm, povm,
                    ratio);
      text << line;
    } else {
      rows.push_back({{"p", p}, {"eta_max", pvm}, {"povm_bound", povm}, {"ratio", ratio}});
    }
  }
  if (format != "csv") text << nlohmann::json{{"d", dim}, {"rows", rows}}.dump() << "\n";
  return write_text(out_path, text.str());
}

int cmd_simulate(int dim, double t, std::uint64_t shots, std::uint64_t seed,
                 const std::string& state_kind, const std::string& basis_kind,
                 int threads) {
  const Dimension d(dim);
  std::unique_ptr<QuantumState> state;
  if (state_kind == "maximally-mixed") {
    state = std::make_unique<QuantumState>(QuantumState::maximally_mixed(d));
  } else if (state_kind == "basis0") {
    state = std::make_unique<QuantumState>(QuantumState::basis_state(d, 0));
  } else if (state_kind == "random") {
    state = std::make_unique<QuantumState>(QuantumState::random_full_rank(d, seed));
  } else {
    throw CLI::ValidationError("--state", "expected maximally-mixed, basis0 or random");
  }
  Matrix basis;
  if (basis_kind == "identity") {
    basis = Matrix::Identity(dim, dim);
  } else if (basis_kind == "random") {
    basis = haar_random_unitary(d, seed + 1);
  } else {
    throw CLI::ValidationError("--basis", "expected identity or random");
  }

  const SimulationResult result =
      simulate_measurement(*state, basis, Threshold(t), shots, seed, threads);

  std::cerr << "outcome   empirical   analytic\n";
  for (int a = 0; a <= dim; ++a) {
    const std::string label = a < dim ? std::to_string(a) : "ø";
    std::fprintf(stderr, "%-9s %-11.6f %-11.6f\n", label.c_str(),
                 static_cast<double>(result.counts[a]) / static_cast<double>(shots),
                 result.analytic[a]);
  }
  std::fprintf(stderr, "chi2 = %.6g  p-value = %.6g\n", result.chi_square,
               result.p_value);

  nlohmann::json counts;
  for (int a = 0; a < dim; ++a) counts[std::to_string(a)] = result.counts[a];
  counts["ø"] = result.counts[static_cast<std::size_t>(dim)];
  const nlohmann::json doc = {{"d", dim},           {"t", t},
                              {"shots", shots},     {"counts", counts},
                              {"chi2", result.chi_square}, {"pvalue", result.p_value}};
  std::cout << doc.dump() << "\n";
  return kExitOk;
}

struct VerifyReport {
  int failures = 0;

  void check(const std::string& name, bool ok, const std::string& details) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), details.c_str());
    if (!ok) ++failures;
  }
};

void verify_closedform(int dim, VerifyReport& report) {
  const Dimension d(dim);
  const Rational t_zero = eval_T_exact(d, Rational(0));
  report.check("closedform/T(0)=1", t_zero == Rational(1),
               "T_" + std::to_string(dim) + "(0) = " + t_zero.to_string());
  const Rational a_zero = eval_A_exact(d, Rational(0));
  const Rational expected = harmonic(dim) / Rational(dim);
  report.check("closedform/A(0)=H_d/d", a_zero == expected,
               "A_" + std::to_string(dim) + "(0) = " + a_zero.to_string());
  report.check("closedform/T(1)=0", eval_T(d, Threshold(1.0)) == 0.0, "exact zero");

  bool regime_ok = true;
  for (int i = 1; i < 20; ++i) {
    const double t = 0.5 + 0.5 * i / 20.0;
    const double direct = eval_T(d, Threshold(t));
    const double simple = simple_regime_eta(d, t);
    if (std::abs(direct - simple) > 1e-12 * std::max(1.0, std::abs(simple))) {
      regime_ok = false;
      break;
    }
  }
  report.check("closedform/simple-regime", regime_ok,
               "eval_T == d(1-t)^(d-1) on (1/2,1), 1e-12 relative");

  bool cross_ok = true;
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const Rational t(i, 40);
    const double exact = eval_T_exact(d, t).to_double();
    const double f64 = eval_T(d, Threshold(t.to_double()));
    worst = std::max(worst, std::abs(exact - f64));
  }
  cross_ok = worst < 1e-8;
  report.check("closedform/cross-mode", cross_ok,
               "max |float64 - exact| = " + std::to_string(worst));

  bool monotone = true;
  double prev = eval_T(d, Threshold(0.0));
  for (int i = 1; i <= 100; ++i) {
    const double cur = eval_T(d, Threshold(i / 100.0));
    if (cur > prev + 1e-12) monotone = false;
    prev = cur;
  }
  report.check("closedform/T-monotone", monotone, "non-increasing on [0,1]");
}

void verify_mc(int dim, std::uint64_t samples, std::uint64_t seed, int threads,
               VerifyReport& report) {
  const Dimension d(dim);
  bool all_ok = true;
  double worst_pull = 0.0;
  for (int i = 1; i <= 19; ++i) {
    const double t = 0.05 * i;
    const McEstimate mc_total = estimate_T(d, Threshold(t), samples, seed + i, threads);
    const McEstimate mc_aligned =
        estimate_A(d, Threshold(t), samples, seed + 1000 + i, threads);
    const double ref_total = eval_T(d, Threshold(t));
    const double ref_aligned = eval_A(d, Threshold(t));
    const double pull_total =
        mc_total.std_error == 0.0
            ? (mc_total.mean == ref_total ? 0.0 : 1e9)
            : std::abs(mc_total.mean - ref_total) / mc_total.std_error;
    const double pull_aligned =
        mc_aligned.std_error == 0.0
            ? (mc_aligned.mean == ref_aligned ? 0.0 : 1e9)
            : std::abs(mc_aligned.mean - ref_aligned) / mc_aligned.std_error;
    worst_pull = std::max({worst_pull, pull_total, pull_aligned});
    if (pull_total > 5.0 || pull_aligned > 5.0) all_ok = false;
  }
  report.check("mc/estimates-vs-closedform", all_ok,
               "worst |MC - closed| = " + std::to_string(worst_pull) +
                   " std errors over t-grid (gate 5)");
}

void verify_povm(int dim, std::uint64_t samples, std::uint64_t seed, int threads,
                 VerifyReport& report) {
  const Dimension d(dim);
  for (const double t : {0.2, 0.5, 0.75}) {
    const auto estimates =
        reconstruct_simulated_povm(d, Threshold(t), samples, seed, threads);
    const NoisyPvm analytic = analytic_simulated_povm(d, Threshold(t));
    double worst_pull = 0.0;
    for (int slot = 0; slot <= dim; ++slot) {
      const Matrix& expected = analytic.elements[static_cast<std::size_t>(slot)];
      const auto& est = estimates[static_cast<std::size_t>(slot)];
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          const double dev_re = std::abs(est.mean(i, j).real() - expected(i, j).real());
          const double dev_im = std::abs(est.mean(i, j).imag() - expected(i, j).imag());
          const double se_re = std::max(est.std_error_re(i, j), 1e-15);
          const double se_im = std::max(est.std_error_im(i, j), 1e-15);
          worst_pull = std::max({worst_pull, dev_re / se_re, dev_im / se_im});
        }
      }
    }
    report.check("povm/reconstruction t=" + std::to_string(t), worst_pull <= 5.0,
                 "worst entry deviation = " + std::to_string(worst_pull) +
                     " std errors (gate 5)");
  }

  bool identity_ok = true;
  for (int i = 1; i < 10; ++i) {
    const Threshold t(i / 10.0);
    const NoisyPvm simulated = analytic_simulated_povm(d, t);
    const BoundarySample b = boundary_point(d, t);
    const NoisyPvm reference =
        make_noisy_pvm(d, Matrix::Identity(dim, dim), NoiseParams(b.eta, b.p));
    for (std::size_t a = 0; a < simulated.elements.size(); ++a) {
      const double dev =
          (simulated.elements[a] - reference.elements[a]).cwiseAbs().maxCoeff();
      if (dev > 1e-10) identity_ok = false;
    }
    if (!validate_povm(simulated.elements)) identity_ok = false;
  }
  report.check("povm/analytic-identity", identity_ok,
               "analytic simulated POVM == noisy PVM at boundary params (1e-10)");
}

void verify_optimality(int dim, std::uint64_t samples, std::uint64_t seed,
                       int threads, VerifyReport& report) {
  const Dimension d(dim);
  const Threshold t(dim == 2 ? 0.6 : 0.4);
  const OptimalityProbeResult probe =
      optimality_probe(d, t, samples, 20, seed, threads);
  const double gate = 5.0 * probe.worst_gap_std_error;
  report.check("optimality/no-gain", probe.worst_gap <= gate,
               "worst visibility gap = " + std::to_string(probe.worst_gap) + " (5σ = " +
                   std::to_string(gate) + "), " +
                   std::to_string(probe.discarded_count) + " trials discarded");
}

int cmd_verify(int dim, std::uint64_t samples, std::uint64_t seed,
               const std::string& suite, int threads) {
  VerifyReport report;
  if (suite == "closedform" || suite == "all") verify_closedform(dim, report);
  if (suite == "mc" || suite == "all") verify_mc(dim, samples, seed, threads, report);
  if (suite == "povm" || suite == "all")
    verify_povm(dim, std::max<std::uint64_t>(samples, 10000), seed, threads, report);
  if (suite == "optimality" || suite == "all")
    verify_optimality(dim, samples, seed, threads, report);
  if (report.failures != 0) {
    std::printf("%d check(s) failed\n", report.failures);
    return kExitVerifyFailed;
  }
  std::printf("all checks passed\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint-measurability region of noisy projective measurements"};
  app.require_subcommand(1);

  int dim = 2;
  int samples_int = 100;
  int points = 100;
  int threads = 0;
  double eta = 1.0;
  double p = 0.0;
  double t = 0.5;
  std::uint64_t shots = 100000;
  std::uint64_t mc_samples = 1000000;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out_path;
  std::string mode_name = "float64";
  std::string suite = "all";
  std::string state_kind = "maximally-mixed";
  std::string basis_kind = "identity";

  auto* boundary = app.add_subcommand("boundary", "export the boundary curve");
  boundary->add_option("--dim", dim, "dimension (>= 2)")->required();
  boundary->add_option("--samples", samples_int, "number of grid samples")
      ->default_val(100);
  boundary->add_option("--format", format, "csv or json")->default_val("csv")
      ->check(CLI::IsMember({"csv", "json"}));
  boundary->add_option("--out", out_path, "output path ('-' for stdout)");
  boundary->add_option("--mode", mode_name, "float64, extended or exact")
      ->default_val("float64");

  auto* membership = app.add_subcommand("membership", "query a noise point");
  membership->add_option("--dim", dim)->required();
  membership->add_option("--eta", eta, "efficiency in [0,1]")->required();
  membership->add_option("--p", p, "visibility in [0,1]")->required();

  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--dim", dim)->default_val(2);
  verify->add_option("--samples", mc_samples, "Monte-Carlo samples per estimate")
      ->default_val(1000000);
  verify->add_option("--seed", seed)->default_val(1);
  verify->add_option("--suite", suite, "closedform|mc|povm|optimality|all")
      ->default_val("all")
      ->check(CLI::IsMember({"closedform", "mc", "povm", "optimality", "all"}));
  verify->add_option("--threads", threads, "worker threads (0 = auto)")->default_val(0);

  auto* compare = app.add_subcommand("compare", "boundary vs all-POVM bound");
  compare->add_option("--dim", dim)->required();
  compare->add_option("--format", format)->default_val("csv")
      ->check(CLI::IsMember({"csv", "json"}));
  compare->add_option("--out", out_path, "output path ('-' for stdout)");
  compare->add_option("--points", points, "grid points on [0,1]")->default_val(100);

  auto* simulate = app.add_subcommand("simulate", "classical simulation of a noisy PVM");
  simulate->add_option("--dim", dim)->required();
  simulate->add_option("--t", t, "response threshold in [0,1)")->required();
  simulate->add_option("--shots", shots)->default_val(100000);
  simulate->add_option("--seed", seed)->default_val(1);
  simulate->add_option("--state", state_kind, "maximally-mixed|basis0|random")
      ->default_val("maximally-mixed")
      ->check(CLI::IsMember({"maximally-mixed", "basis0", "random"}));
  simulate->add_option("--basis", basis_kind, "identity|random")
      ->default_val("identity")
      ->check(CLI::IsMember({"identity", "random"}));
  simulate->add_option("--threads", threads)->default_val(0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (boundary->parsed())
      return cmd_boundary(dim, samples_int, format, out_path, mode_name);
    if (membership->parsed()) return cmd_membership(dim, eta, p);
    if (verify->parsed()) return cmd_verify(dim, mc_samples, seed, suite, threads);
    if (compare->parsed()) return cmd_compare(dim, format, out_path, points);
    if (simulate->parsed())
      return cmd_simulate(dim, t, shots, seed, state_kind, basis_kind, threads);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
  return kExitUsage;
}
