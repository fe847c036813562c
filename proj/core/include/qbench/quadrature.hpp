#pragma once

// Quadrature for integrals over the complex plane against the Gaussian
// weight p_lambda(alpha) = (lambda/pi) exp(-lambda |alpha|^2). The weight is
// folded into the node weights, so integrands are weight-free.

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace qbench {

struct QuadratureSpec {
  int radial_nodes = 32;
  int angular_nodes = 32;
  double lambda_weight = 1.0;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PlaneNode {
  std::complex<double> alpha;
  double weight;
};

/// Polar node set: Gauss-Laguerre radii under t = lambda r^2 crossed with a
/// uniform (trapezoid) angular grid. Weights are positive and sum to 1.
struct PlaneQuadrature {
  std::vector<PlaneNode> nodes;
  double max_radius = 0.0;

  static PlaneQuadrature build(const QuadratureSpec& spec);
};

/// Gauss-Laguerre abscissae/weights for weight e^{-t} on [0, inf)
/// (Golub-Welsch on the Jacobi matrix).
void gauss_laguerre(int n, std::vector<double>& abscissae,
                    std::vector<double>& weights);

/// Deterministic pairwise summation.
double pairwise_sum(std::span<const double> values);

/// integral of p_lambda(alpha) f(alpha) d^2 alpha over the plane.
double gaussian_plane_integrate(const std::function<double(std::complex<double>)>& f,
                                const QuadratureSpec& spec);

struct RefineResult {
  double value;
  QuadratureSpec achieved_spec;
};

/// Doubles radial and angular node counts until two successive estimates
/// agree within tol. Throws QuadratureError with the last two estimates in
/// the message if the radial ceiling (default 1024) is hit first.
RefineResult refine_until(const std::function<double(std::complex<double>)>& f,
                          QuadratureSpec spec, double tol,
                          int radial_ceiling = 1024);

}  // namespace qbench
