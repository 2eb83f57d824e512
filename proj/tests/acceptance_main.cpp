// Acceptance gate: ten end-to-end checks, one verdict line each.  The
// process exit code is the number of failed checks, so the harness stays
// honest: a red line here means the library does not meet its contract.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <threshreg/bootstrap.hpp>
#include <threshreg/continuity.hpp>
#include <threshreg/estimators.hpp>
#include <threshreg/grid.hpp>
#include <threshreg/inference.hpp>
#include <threshreg/kernel.hpp>
#include <threshreg/montecarlo.hpp>
#include <threshreg/rng.hpp>
#include <threshreg/util.hpp>

#include "cli/commands.hpp"
#include "cli/csv.hpp"
#include "support/oracles.hpp"

using namespace threshreg;

namespace {

int failures = 0;

void verdict(int id, bool pass, const std::string& text) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, text.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void skipped(int id, const std::string& text) {
  std::printf("[SKIP] criterion %d: %s\n", id, text.c_str());
  std::fflush(stdout);
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

double relerr(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << std::fixed << v;
  return os.str();
}

double cell_estimate(const McReport& rep, const std::string& method,
                     double extra = 0.0) {
  for (const auto& c : rep.cells)
    if (c.method == method && c.extra == extra) return c.estimate;
  return std::nan("");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// --- 1: scan estimators vs exhaustive least squares -----------------------

void criterion_1() {
  Timer timer;
  std::string detail;
  bool ok = true;
  try {
    for (int i = 0; i < 50 && ok; ++i) {
      Rng rng({2764, static_cast<std::uint64_t>(i)});
      oracle::RandomSpec spec;
      spec.n = 16 + (i % 15);
      spec.k = 2 + (i % 2);
      spec.ties = (i % 3 == 0);
      spec.jump = 0.3 * (i % 4);
      const Dataset ds = oracle::random_dataset(rng, spec);
      const auto grid = threshold_grid(ds);

      const FitUnconstrained lse = fit_lse(ds, grid);
      const oracle::BruteJump bj = oracle::brute_lse(ds, grid);
      if (lse.theta.gamma != bj.gamma) {
        ok = false;
        detail = "jump threshold mismatch on dataset " + std::to_string(i);
        break;
      }
      for (int j = 0; j < ds.k(); ++j) {
        ok = ok && relerr(lse.theta.beta(j), bj.beta(j)) < 1e-10;
        ok = ok && relerr(lse.theta.delta(j), bj.delta(j)) < 1e-10;
      }
      ok = ok && relerr(lse.ssr_hat, bj.ssr) < 1e-10;

      const FitConstrained clse = fit_clse(ds, grid);
      const oracle::BruteKink bk = oracle::brute_clse(ds, grid);
      if (clse.theta.gamma != bk.gamma) {
        ok = false;
        detail = "kink threshold mismatch on dataset " + std::to_string(i);
        break;
      }
      for (int j = 0; j < ds.k(); ++j)
        ok = ok && relerr(clse.theta.beta(j), bk.beta(j)) < 1e-10;
      ok = ok && relerr(clse.theta.delta3, bk.delta3) < 1e-10;
      ok = ok && relerr(clse.ssr_tilde, bk.ssr) < 1e-10;
      if (!ok && detail.empty())
        detail = "coefficient drift beyond 1e-10 on dataset " + std::to_string(i);
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs = timer.seconds();
  if (ok && secs >= 10.0) {
    ok = false;
    detail = "took " + fmt(secs, 1) + "s, budget 10s";
  }
  if (detail.empty())
    detail = "both estimators match exhaustive least squares on 50 datasets (" +
             fmt(secs, 1) + "s)";
  verdict(1, ok, detail);
}

// --- 2: limit-law quantiles ------------------------------------------------

void criterion_2() {
  bool ok = true;
  std::string detail;
  try {
    const double q90 = limit_quantile(0.90);
    const double q95 = limit_quantile(0.95);
    const double q99 = limit_quantile(0.99);
    ok = ok && std::abs(q90 - 5.93947801145818) < 1e-6;
    ok = ok && std::abs(q95 - 7.3522766941557432) < 1e-6;
    ok = ok && std::abs(q99 - 10.5916158782409) < 1e-6;
    for (double s : {0.90, 0.95, 0.99})
      ok = ok && std::abs(limit_quantile(s) - oracle::invert_limit_cdf(s)) < 1e-6;
    detail = ok ? "0.90/0.95/0.99 quantiles = " + fmt(q90) + "/" + fmt(q95) + "/" +
                      fmt(q99) + ", all within 1e-6 of the inverted law"
                : "quantile deviates from the inverted law by more than 1e-6 (got " +
                      fmt(q90, 10) + "/" + fmt(q95, 10) + "/" + fmt(q99, 10) + ")";
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  verdict(2, ok, detail);
}

// --- 3: kernel second moments ----------------------------------------------

void criterion_3() {
  bool ok = true;
  std::string detail;
  try {
    const double ep = oracle::quadrature_kappa2(KernelKind::epanechnikov);
    const double ga = oracle::quadrature_kappa2(KernelKind::gaussian);
    ok = ok && std::abs(kernel_kappa2(KernelKind::epanechnikov) - ep) < 1e-8;
    ok = ok && std::abs(kernel_kappa2(KernelKind::epanechnikov) - 0.2) < 1e-15;
    ok = ok && std::abs(kernel_kappa2(KernelKind::gaussian) - ga) < 1e-8;
    ok = ok && kernel_kappa2(KernelKind::gaussian) == 1.0;
    detail = ok ? "kappa2 = 1/5 (epanechnikov) and 1 (gaussian), quadrature agrees "
                  "within 1e-8"
                : "kernel second moment disagrees with quadrature (" + fmt(ep, 10) +
                      ", " + fmt(ga, 10) + ")";
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  verdict(3, ok, detail);
}

// --- 4: invariant suite ------------------------------------------------------

void criterion_4() {
  Timer timer;
  bool ok = true;
  std::string detail;
  try {
    Rng aux({4042, 0});
    for (int i = 0; i < 100 && ok; ++i) {
      Rng rng({1234, static_cast<std::uint64_t>(i)});
      oracle::RandomSpec spec;
      spec.n = 30 + 10 * (i % 4);
      spec.k = 2 + (i % 2);
      spec.ties = (i % 7 == 0);
      spec.jump = 0.25 * (i % 5);
      const Dataset ds = oracle::random_dataset(rng, spec);

      const ContinuityStat st = continuity_statistics(ds);
      ok = ok && st.q_n >= 0.0;
      ok = ok && st.qlr_tilde >= 0.0;
      ok = ok && st.ssr_tilde >= st.ssr_hat - 1e-12 * st.ssr_tilde;
      ok = ok && st.xi_hat > 0.0;
      if (!ok) {
        detail = "statistic sign/nesting violated on dataset " + std::to_string(i);
        break;
      }

      // The profiled statistic is exactly zero at its minimiser.
      const QlrCurve curve = qlr_curve(ds, st.lse);
      bool zero_at_hat = false;
      for (std::size_t j = 0; j < curve.gammas.size(); ++j) {
        ok = ok && curve.values[j] >= 0.0;
        if (curve.gammas[j] == curve.gamma_hat && curve.values[j] == 0.0)
          zero_at_hat = true;
      }
      ok = ok && zero_at_hat;
      if (!ok) {
        detail = "profiled statistic not zero at the estimate on dataset " +
                 std::to_string(i);
        break;
      }

      // The constrained solution implies a response with no jump at the
      // threshold.
      const ThetaJump implied = st.clse.theta.as_jump(ds.k());
      for (int rep = 0; rep < 5; ++rep) {
        Eigen::VectorXd x(ds.k());
        x(0) = 1.0;
        for (int j = 1; j + 1 < ds.k(); ++j) x(j) = 3.0 * aux.normal();
        x(ds.k() - 1) = st.clse.theta.gamma;
        const double gap = implied.delta.dot(x);
        ok = ok && std::abs(gap) <
                       1e-10 * (1.0 + std::abs(st.clse.theta.delta3 *
                                               st.clse.theta.gamma));
      }
      if (!ok) {
        detail = "implied jump at the kink exceeds 1e-10 on dataset " +
                 std::to_string(i);
        break;
      }

      // Rescaled statistics ignore the response scale.
      const Dataset scaled(10.0 * ds.y(), ds.X());
      const ContinuityStat st10 = continuity_statistics(scaled);
      ok = ok && st10.gamma_hat == st.gamma_hat;
      ok = ok && st10.gamma_tilde == st.gamma_tilde;
      ok = ok && std::abs(st10.q_n - st.q_n) <= 1e-8 * (1.0 + st.q_n);
      ok = ok && std::abs(st10.qlr_tilde - st.qlr_tilde) <=
                     1e-8 * (1.0 + st.qlr_tilde);
      if (!ok) {
        detail = "response rescaling changed a statistic on dataset " +
                 std::to_string(i);
        break;
      }

      // Confidence sets grow with the level and always hold the estimate.
      const ScaleFactor sf = scale_factor(ds, st.lse);
      double prev_len = -1.0;
      for (double s : {0.5, 0.9, 0.95, 0.99}) {
        const ConfidenceSet cs = asymptotic_confidence_set(curve, sf, s);
        double len = 0.0;
        bool holds = false;
        for (const auto& iv : cs.intervals) {
          len += iv.hi - iv.lo;
          holds = holds || (curve.gamma_hat >= iv.lo && curve.gamma_hat <= iv.hi);
        }
        ok = ok && holds && len >= prev_len - 1e-12;
        prev_len = len;
      }
      if (!ok)
        detail = "confidence sets not nested or missing the estimate on dataset " +
                 std::to_string(i);
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs = timer.seconds();
  if (ok && secs >= 30.0) {
    ok = false;
    detail = "took " + fmt(secs, 1) + "s, budget 30s";
  }
  if (detail.empty())
    detail = "all invariants hold on 100 random datasets (" + fmt(secs, 1) + "s)";
  verdict(4, ok, detail);
}

// --- 5: continuity-test size -------------------------------------------------

void criterion_5() {
  Timer timer;
  bool ok = true;
  std::string detail;
  try {
    const McDesign d = McDesign::design_C(250);
    const McReport rep = run_power_experiment(d, {0.05}, 2000, {1.0}, {52024, 0});
    const double size_qn = cell_estimate(rep, "q_n", 1.0);
    const double size_qlr = cell_estimate(rep, "qlr_tilde", 1.0);
    ok = ok && std::abs(size_qn - 0.0477) < 0.02;
    ok = ok && std::abs(size_qlr - 0.0387) < 0.02;
    detail = "5% size, n=250: Q_n " + fmt(size_qn) + " (target 0.0477+-0.02), "
             "QLR " + fmt(size_qlr) + " (target 0.0387+-0.02)";
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs = timer.seconds();
  if (ok && secs >= 600.0) {
    ok = false;
    detail += "; took " + fmt(secs, 1) + "s, budget 600s";
  } else {
    detail += " (" + fmt(secs, 1) + "s)";
  }
  verdict(5, ok, detail);
}

// --- 6: continuity-test power ------------------------------------------------

void criterion_6() {
  Timer timer;
  bool ok = true;
  std::string detail;
  try {
    const McDesign d = McDesign::design_B(500);
    const McReport rep = run_power_experiment(d, {0.05}, 1000, {1.0}, {62024, 0});
    const double pow_qn = cell_estimate(rep, "q_n", 1.0);
    const double pow_qlr = cell_estimate(rep, "qlr_tilde", 1.0);
    ok = ok && std::abs(pow_qn - 0.4797) < 0.05;
    ok = ok && std::abs(pow_qlr - 0.4128) < 0.05;
    ok = ok && pow_qn >= pow_qlr;
    detail = "5% power, n=500: Q_n " + fmt(pow_qn) + " (target 0.4797+-0.05), "
             "QLR " + fmt(pow_qlr) + " (target 0.4128+-0.05), Q_n >= QLR";
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs = timer.seconds();
  if (ok && secs >= 900.0) {
    ok = false;
    detail += "; took " + fmt(secs, 1) + "s, budget 900s";
  } else {
    detail += " (" + fmt(secs, 1) + "s)";
  }
  verdict(6, ok, detail);
}

// --- 7: confidence-set coverage ---------------------------------------------

void criterion_7() {
  Timer timer;
  bool ok = true;
  std::string detail;
  try {
    const McReport boot = run_coverage_experiment(McDesign::design_D(250, 0.5),
                                                  {0.95}, 500, 399, 10, {72024, 0});
    const double cov_boot = cell_estimate(boot, "grid_bootstrap");
    ok = ok && std::abs(cov_boot - 0.898) < 0.05;

    const McReport asym = run_coverage_experiment(McDesign::design_B(500), {0.95},
                                                  500, 1, 2, {72025, 0});
    const double cov_asym = cell_estimate(asym, "asymptotic");
    ok = ok && cov_asym < 0.85;
    detail = "95% coverage: grid bootstrap " + fmt(cov_boot) +
             " (target 0.898+-0.05); asymptotic under a slowly-moving break " +
             fmt(cov_asym) + " (< 0.85 expected)";
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs = timer.seconds();
  if (ok && secs >= 1200.0) {
    ok = false;
    detail += "; took " + fmt(secs, 1) + "s, budget 1200s";
  } else {
    detail += " (" + fmt(secs, 1) + "s)";
  }
  verdict(7, ok, detail);
}

// --- 8: convergence-rate contrast ---------------------------------------------

void criterion_8() {
  Timer timer;
  bool ok = true;
  std::string detail;
  try {
    auto gamma_iqrs = [](int n, int R, std::uint64_t tag, bool constrained_too)
        -> std::pair<double, double> {
      std::vector<double> gh(R), gt(constrained_too ? R : 0);
      for (int r = 0; r < R; ++r) {
        const Dataset ds = simulate_design(McDesign::design_C(n),
                                           substream({82024, tag},
                                                     static_cast<std::uint64_t>(r)));
        const auto grid = threshold_grid(ds);
        gh[r] = fit_lse(ds, grid).theta.gamma;
        if (constrained_too) gt[r] = fit_clse(ds, grid).theta.gamma;
      }
      return {iqr(gh), constrained_too ? iqr(gt) : 0.0};
    };

    const auto at_500 = gamma_iqrs(500, 500, 1, true);
    const double iqr_hat_500 = at_500.first, iqr_tilde_500 = at_500.second;
    ok = ok && iqr_tilde_500 < iqr_hat_500;

    const double iqr_hat_1000 = gamma_iqrs(1000, 500, 2, false).first;
    const double iqr_hat_125 = gamma_iqrs(125, 500, 3, false).first;
    const double ratio = iqr_hat_1000 / iqr_hat_125;
    ok = ok && ratio > 0.4 && ratio < 0.6;

    detail = "n=500 threshold spread: constrained " + fmt(iqr_tilde_500) +
             " < unconstrained " + fmt(iqr_hat_500) + "; unconstrained spread "
             "ratio n=1000/n=125 = " + fmt(ratio) + " (expected in (0.4, 0.6))";
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  detail += " (" + fmt(timer.seconds(), 1) + "s)";
  verdict(8, ok, detail);
}

// --- 9: bit-reproducible reports -----------------------------------------------

void criterion_9() {
  bool ok = true;
  std::string detail;
  try {
    namespace fs = std::filesystem;
    const fs::path dir = "/tmp/threshreg_acceptance";
    fs::create_directories(dir);
    const std::string csv = (dir / "series.csv").string();
    cli::write_dataset_csv(csv, simulate_design(McDesign::design_B(200), {92024, 0}));

    auto run = [&](const std::string& out, int threads) {
      std::ostringstream cmd;
      cmd << '"' << THRESHREG_TOOL << '"'
          << " ci --input " << csv
          << " --response y --threshold-var q --boot-reps 199 --seed 4242"
          << " --threads " << threads << " --format tsv --out " << out;
      return std::system(cmd.str().c_str());
    };

    const std::string out1 = (dir / "run1.tsv").string();
    const std::string out2 = (dir / "run2.tsv").string();
    const std::string out3 = (dir / "run3.tsv").string();
    ok = ok && run(out1, 1) == 0;
    ok = ok && run(out2, 1) == 0;
    ok = ok && run(out3, 4) == 0;
    if (!ok) {
      detail = "tool invocation failed";
    } else {
      const std::string a = read_file(out1);
      ok = ok && !a.empty();
      ok = ok && a == read_file(out2);
      ok = ok && a == read_file(out3);
      const std::string c1 = read_file((dir / "run1_curve.tsv").string());
      ok = ok && !c1.empty();
      ok = ok && c1 == read_file((dir / "run3_curve.tsv").string());
      detail = ok ? "reports and plot tables byte-identical across reruns and "
                    "1 vs 4 workers"
                  : "outputs differ between runs or worker counts";
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  verdict(9, ok, detail);
}

// --- 10: reference series --------------------------------------------------------

void criterion_10() {
  const std::string path = std::string(THRESHREG_DATA_DIR) + "/usmacro.csv";
  if (!std::ifstream(path)) {
    skipped(10, "reference series not present (" + path + ")");
    return;
  }
  bool ok = true;
  std::string detail;
  try {
    cli::RunConfig cfg;
    cfg.input_path = path;
    cfg.response = "growth";
    cfg.threshold_var = "debt";
    cfg.lag = 1;
    const cli::ojson rep = cli::run_estimate(cfg);
    const double gamma_hat = rep.at("unconstrained").at("gamma_hat").get<double>();
    const double gamma_tilde = rep.at("constrained").at("gamma_tilde").get<double>();
    const int n_lower = rep.at("unconstrained").at("n_lower").get<int>();
    const int n_upper = rep.at("unconstrained").at("n_upper").get<int>();
    ok = ok && std::abs(gamma_hat - 17.2) <= 0.05;
    ok = ok && std::abs(gamma_tilde - 43.8) <= 0.05;
    ok = ok && n_lower == 99 && n_upper == 109;
    detail = "unconstrained threshold " + fmt(gamma_hat, 1) + " (expect 17.2), "
             "constrained " + fmt(gamma_tilde, 1) + " (expect 43.8), regimes " +
             std::to_string(n_lower) + "/" + std::to_string(n_upper) +
             " (expect 99/109)";
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  verdict(10, ok, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d criterion failure%s\n", failures, failures == 1 ? "" : "s");
  return failures;
}
