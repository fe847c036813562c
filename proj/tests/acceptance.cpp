// Acceptance suite: one line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "qbench/criterion.hpp"
#include "qbench/cv_benchmark.hpp"
#include "qbench/io.hpp"

using namespace qbench;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const char* name, bool ok, double elapsed, const char* detail) {
  std::printf("[%s] %-28s (%6.2fs) %s\n", ok ? "PASS" : "FAIL", name, elapsed,
              detail);
  if (!ok) ++failures;
}

Mat random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = Complex(nd(rng), nd(rng));
  return Eigen::HouseholderQR<Mat>(g).householderQ();
}

StateSpec random_state(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = Complex(nd(rng), nd(rng));
  v /= v.norm();
  return FiniteVector{{v.data(), v.data() + d}};
}

Ensemble random_ensemble(int d, int n, std::mt19937_64& rng) {
  Ensemble ens;
  std::uniform_real_distribution<double> ud(0.1, 1.0);
  double sum = 0.0;
  std::vector<double> priors(n);
  for (double& p : priors) sum += (p = ud(rng));
  for (int i = 0; i < n; ++i)
    ens.entries.push_back({random_state(d, rng), random_state(d, rng),
                           priors[i] / sum, std::nullopt});
  double total = 0.0;
  for (auto& e : ens.entries) total += e.prior;
  ens.entries.back().prior += 1.0 - total;
  return ens;
}

double min_pt_eigenvalue(const DensityOperator& rho) {
  HermitianOperator pt = partial_transpose(rho, 1);
  Eigen::SelfAdjointEigenSolver<Mat> es(pt.matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void criterion_1() {
  auto t0 = Clock::now();
  const double a = classical_limit_cv({1.0, 1.0, 1.0});
  const double b = classical_limit_cv({1.0, 1.0, 1e-18});
  const bool ok = std::abs(a - 2.0 / 3.0) < 1e-15 && std::abs(b - 0.5) < 1e-15;
  char buf[128];
  std::snprintf(buf, sizeof buf, "F_C(1,1,1)=%.16g, lambda->0: %.16g", a, b);
  report("closed-form benchmark", ok,
         std::chrono::duration<double>(Clock::now() - t0).count(), buf);
}

void criterion_2() {
  auto t0 = Clock::now();
  bool ok = true;
  double worst = 0.0;
  for (auto [s, k] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {0.5, 2.0}}) {
    BenchmarkOperatorCv bo = benchmark_operator_cv(s, k, {32, 32, s}, {40});
    const double err =
        std::abs(max_eigenvalue(bo.gamma_m) - s / (s + 1 + k * k));
    worst = std::max(worst, err);
    ok = ok && err < 1e-6;
  }
  const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  char buf[128];
  std::snprintf(buf, sizeof buf, "worst |ev - s/(s+1+k^2)| = %.3g", worst);
  report("eigenvalue identity", ok && dt < 30.0, dt, buf);
}

void criterion_3() {
  auto t0 = Clock::now();
  GaussianTask task{1.0, 1.0, 1.0};
  QuadratureSpec spec{32, 32, 1.0};
  Truncation tr{40};
  bool ok = true;
  double worst = 0.0;
  for (double xi : {tight_xi(task), 0.8}) {
    ProofParams pp = params_from_task(task, xi);
    const double scale = pp.s * (1 - xi * xi) / task.prior_width;
    for (double eta : {-1.0, 0.3, 0.7}) {
      Channel ch = eta < 0 ? identity_channel(tr.dim) : loss_channel(eta, tr);
      const double j = j_integral(ch, pp, spec, tr);
      const double f = average_fidelity_cv(ch, task, spec, tr);
      const double resid = std::abs(j - scale * f);
      worst = std::max(worst, resid);
      ok = ok && resid < 5e-6;
    }
  }
  const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  char buf[128];
  std::snprintf(buf, sizeof buf, "worst |J - s(1-xi^2)F/lambda| = %.3g", worst);
  report("J-identity", ok && dt < 60.0, dt, buf);
}

void criterion_4() {
  auto t0 = Clock::now();
  bool ok = true;
  double worst = 0.0;
  for (auto [n, lam] : {std::pair{1.0, 0.1}, {1.0, 1.0}, {2.0, 0.5}}) {
    GaussianTask task{n, 1.0, lam};
    QuadratureSpec spec{32, 32, lam};
    const double g = attaining_gain(task);
    Truncation tr = truncation_for_task(task, spec, g, 1e-6);
    Channel ch = heterodyne_mp_channel(g, tr);
    const double f = average_fidelity_cv(ch, task, spec, tr);
    const double err = std::abs(f - classical_limit_cv(task));
    worst = std::max(worst, err);
    ok = ok && err < 1e-3;
  }
  const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  char buf[128];
  std::snprintf(buf, sizeof buf, "worst |F - (N+l)/(N+l+1)| = %.3g", worst);
  report("attainability", ok && dt < 60.0, dt, buf);
}

void criterion_5() {
  auto t0 = Clock::now();
  bool ok = true;

  GaussianTask task{1.0, 1.0, 1.0};
  QuadratureSpec spec{32, 32, 1.0};
  const double fc = classical_limit_cv(task);
  double worst_cv = -1.0;
  for (double gain : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    Truncation tr = truncation_for_task(task, spec, gain, 1e-6);
    Channel ch = heterodyne_mp_channel(gain, tr);
    const double f = average_fidelity_cv(ch, task, spec, tr);
    worst_cv = std::max(worst_cv, f - fc);
    ok = ok && f <= fc + 2e-3;
  }

  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> dd(2, 6), nn(2, 8);
  double worst_fd = -1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = dd(rng);
    Ensemble ens = random_ensemble(d, nn(rng), rng);
    Channel mp = basis_mp_channel(random_unitary(d, rng), d);
    const double over = simulated_average_fidelity(mp, ens) -
                        classical_limit_ensemble(ens).limit;
    worst_fd = std::max(worst_fd, over);
    ok = ok && over <= 1e-9;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "max CV excess %.3g, max finite-d excess %.3g",
                worst_cv, worst_fd);
  report("no false positives", ok,
         std::chrono::duration<double>(Clock::now() - t0).count(), buf);
}

void criterion_6() {
  auto t0 = Clock::now();
  GaussianTask task{1.0, 1.0, 1.0};
  QuadratureSpec spec{32, 32, 1.0};
  Truncation tr = truncation_for_task(task, spec, 1.0, 1e-8);
  const double f =
      average_fidelity_cv(loss_channel(0.81, tr), task, spec, tr, 1e-6);
  const double fc = classical_limit_cv(task);
  const double margin = f - fc;
  const bool ok = std::abs(f - 1.0 / 1.01) < 1e-6 && margin > 0.32;
  const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  char buf[128];
  std::snprintf(buf, sizeof buf, "F = %.9g, margin %.4g", f, margin);
  report("quantum-domain detection", ok && dt < 10.0, dt, buf);
}

void criterion_7() {
  auto t0 = Clock::now();
  bool ok = true;
  for (int d = 1; d <= 16; ++d)
    ok = ok && std::abs(haar_classical_limit(d) - 2.0 / (d + 1)) < 1e-12;

  const double mc = haar_sampling_check(2, 100000, 20110901);
  ok = ok && mc < 1e-2;

  double worst = 0.0;
  for (int d = 2; d <= 8; ++d) {
    Channel mp = basis_mp_channel(Mat::Identity(d, d), d);
    const Mat twirl = haar_benchmark_operator(d).matrix;
    double fbar = 0.0;
    for (const KrausTerm& k : mp.kraus) {
      Mat kd = k.dense();
      Mat kk = Mat::Zero(d * d, d * d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          kk.block(i * d, j * d, d, d) = kd(i, j) * kd.adjoint();
      fbar += k.weight * (kk * twirl).trace().real();
    }
    worst = std::max(worst, std::abs(fbar - haar_classical_limit(d)));
  }
  ok = ok && worst < 1e-12;
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "MC residual %.3g, saturation residual %.3g", mc, worst);
  report("Haar example", ok,
         std::chrono::duration<double>(Clock::now() - t0).count(), buf);
}

void criterion_8() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(31337);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> dd(2, 4), nn(2, 6);
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = dd(rng);
    std::vector<Mat> raw(3, Mat(d, d));
    Mat s = Mat::Zero(d, d);
    for (Mat& k : raw) {
      for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) k(i, j) = Complex(nd(rng), nd(rng));
      s += k.adjoint() * k;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(s);
    Mat isqrt = es.operatorInverseSqrt();
    Channel ch{d, d, {}, 0.0};
    for (Mat& k : raw)
      ch.kraus.push_back({1.0, Mat(k * isqrt), false, {}, {}});
    ch.completeness_deficit = completeness_deficit_of(ch.kraus, d);
    const double resid =
        choi_fidelity_identity_check(ch, random_ensemble(d, nn(rng), rng), d);
    worst = std::max(worst, resid);
    ok = ok && resid < 1e-10;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "worst residual %.3g over 20 trials", worst);
  report("Choi identity", ok,
         std::chrono::duration<double>(Clock::now() - t0).count(), buf);
}

void criterion_9() {
  auto t0 = Clock::now();
  GaussianTask t{2.0, 4.0, 6.0};
  bool ok = classical_limit_cv(t) == classical_limit_cv(to_unit_gain(t)) &&
            classical_limit_cv(t) == classical_limit_cv(to_unit_input(t));

  GaussianTask a{1.0, 0.49, 1.0};
  GaussianTask b = to_unit_gain(a);
  QuadratureSpec spec{40, 40, 1.0};
  Truncation ta = truncation_for_task(a, spec, 1.0, 1e-9);
  Truncation tb = truncation_for_task(b, spec, 1.0, 1e-9);
  const double fa =
      average_fidelity_cv(loss_channel(0.25, ta), a, spec, ta, 1e-7);
  const double fb =
      average_fidelity_cv(loss_channel(0.25, tb), b, spec, tb, 1e-7);
  ok = ok && std::abs(fa - fb) < 2e-6;
  char buf[128];
  std::snprintf(buf, sizeof buf, "|F(N,eta,l) - F(N/eta,1,l/eta)| = %.3g",
                std::abs(fa - fb));
  report("scaling identity", ok,
         std::chrono::duration<double>(Clock::now() - t0).count(), buf);
}

void criterion_10() {
  auto t0 = Clock::now();

  Truncation tr{25};
  const double npt = min_pt_eigenvalue(
      choi_state(loss_channel(0.5, tr), two_mode_squeezed(0.6, tr)));
  bool ok = npt < -1e-3;

  Truncation th{12};
  Channel het = heterodyne_mp_channel(0.5, th, {16, 14, 1.0});
  const double het_min =
      min_pt_eigenvalue(choi_state(het, two_mode_squeezed(0.6, th)));
  ok = ok && het_min > -1e-6;

  std::mt19937_64 rng(99);
  Channel mp = basis_mp_channel(random_unitary(3, rng), 3);
  const double mp_min = min_pt_eigenvalue(choi_state(mp, maximally_entangled(3)));
  ok = ok && mp_min > -1e-6;

  char buf[128];
  std::snprintf(buf, sizeof buf,
                "loss NPT min %.4g; MP PT minima %.3g / %.3g", npt, het_min,
                mp_min);
  report("witness consistency", ok,
         std::chrono::duration<double>(Clock::now() - t0).count(), buf);
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
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all criteria passed\n");
  return failures;
}
