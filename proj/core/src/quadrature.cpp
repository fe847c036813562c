#include "qbench/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>

namespace qbench {

namespace {

// Laguerre recurrence with exponent rescaling; returns L_n(x), L_{n-1}(x)
// as (mantissa, common log-scale) so values beyond double range survive.
struct ScaledPair {
  double pn, pnm1, log_scale;
};

ScaledPair laguerre_scaled(int n, double x) {
  double p1 = 1.0, p2 = 0.0, log_scale = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double p3 = p2;
    p2 = p1;
    p1 = ((2.0 * j - 1.0 - x) * p2 - (j - 1.0) * p3) / j;
    const double mag = std::abs(p1);
    if (mag > 1e100) {
      p1 *= 1e-100;
      p2 *= 1e-100;
      log_scale += 100.0 * std::log(10.0);
    }
  }
  return {p1, p2, log_scale};
}

}  // namespace

void gauss_laguerre(int n, std::vector<double>& abscissae,
                    std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: n must be >= 1");
  // Nodes from the Jacobi matrix (Golub-Welsch): diag 2k+1, off-diag k.
  Eigen::VectorXd diag(n), subdiag(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) subdiag[k - 1] = k;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, subdiag, Eigen::EigenvaluesOnly);
  abscissae.resize(n);
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    double z = solver.eigenvalues()[k];
    // Newton polish plus recurrence-based weight; the eigenvector-squared
    // weight loses relative accuracy exactly where e^{+t} unfolding needs it.
    ScaledPair lp{0, 0, 0};
    for (int it = 0; it < 16; ++it) {
      lp = laguerre_scaled(n, z);
      const double pp = n * (lp.pn - lp.pnm1) / z;
      const double dz = lp.pn / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-15 * z) {
        lp = laguerre_scaled(n, z);
        break;
      }
    }
    const double pp = n * (lp.pn - lp.pnm1) / z;
    // w = -1 / (pp * n * L_{n-1}(z)) > 0; undo the recurrence scaling.
    const double log_w = -std::log(std::abs(pp) * n * std::abs(lp.pnm1)) -
                         2.0 * lp.log_scale;
    abscissae[k] = z;
    weights[k] = std::exp(log_w);
  }
}

PlaneQuadrature PlaneQuadrature::build(const QuadratureSpec& spec) {
  if (spec.radial_nodes < 1 || spec.angular_nodes < 1)
    throw std::invalid_argument("quadrature: node counts must be >= 1");
  if (!(spec.lambda_weight > 0.0))
    throw std::invalid_argument("quadrature: lambda_weight must be > 0");

  std::vector<double> t, w;
  gauss_laguerre(spec.radial_nodes, t, w);

  PlaneQuadrature q;
  q.nodes.reserve(static_cast<size_t>(spec.radial_nodes) * spec.angular_nodes);
  const double angular_weight = 1.0 / spec.angular_nodes;
  for (int i = 0; i < spec.radial_nodes; ++i) {
    const double r = std::sqrt(t[i] / spec.lambda_weight);
    q.max_radius = std::max(q.max_radius, r);
    for (int j = 0; j < spec.angular_nodes; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / spec.angular_nodes;
      q.nodes.push_back({std::polar(r, theta), w[i] * angular_weight});
    }
  }
  return q;
}

double pairwise_sum(std::span<const double> values) {
  const size_t n = values.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double gaussian_plane_integrate(const std::function<double(std::complex<double>)>& f,
                                const QuadratureSpec& spec) {
  const PlaneQuadrature q = PlaneQuadrature::build(spec);
  std::vector<double> terms(q.nodes.size());
  for (size_t i = 0; i < q.nodes.size(); ++i) {
    const double v = f(q.nodes[i].alpha);
    if (!std::isfinite(v))
      throw QuadratureError("non-finite integrand at node alpha = (" +
                            std::to_string(q.nodes[i].alpha.real()) + ", " +
                            std::to_string(q.nodes[i].alpha.imag()) + ")");
    terms[i] = q.nodes[i].weight * v;
  }
  return pairwise_sum(terms);
}

RefineResult refine_until(const std::function<double(std::complex<double>)>& f,
                          QuadratureSpec spec, double tol, int radial_ceiling) {
  if (!(tol > 0.0)) throw std::invalid_argument("refine_until: tol must be > 0");
  double prev = gaussian_plane_integrate(f, spec);
  double before_prev = prev;
  while (true) {
    QuadratureSpec next = spec;
    next.radial_nodes *= 2;
    next.angular_nodes *= 2;
    if (next.radial_nodes > radial_ceiling)
      throw QuadratureError("refine_until: node ceiling hit, last two estimates " +
                            std::to_string(before_prev) + " and " +
                            std::to_string(prev) + " at radial " +
                            std::to_string(spec.radial_nodes));
    const double value = gaussian_plane_integrate(f, next);
    if (std::abs(value - prev) < tol) return {value, next};
    before_prev = prev;
    prev = value;
    spec = next;
  }
}

}  // namespace qbench
