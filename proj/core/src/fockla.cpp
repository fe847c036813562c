#include "qbench/fockla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qbench {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_trunc(Truncation t) { require(t.dim >= 1, "truncation dim must be >= 1"); }

int product_dim(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) {
    require(d >= 1, "mode dimension must be >= 1");
    p *= d;
  }
  return p;
}

double sqrt_binomial(int n, int k) {
  return std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                         std::lgamma(n - k + 1.0)));
}

}  // namespace

double poisson_tail(double mu, int dim) {
  if (!(mu >= 0)) throw std::invalid_argument("poisson_tail: mu must be >= 0");
  if (mu == 0.0) return 0.0;
  // Forward sum starting at n = dim; the first term is computed in log space.
  double log_term = dim * std::log(mu) - mu - std::lgamma(dim + 1.0);
  double term = std::exp(log_term);
  double sum = 0.0;
  int n = dim;
  while (true) {
    sum += term;
    ++n;
    term *= mu / n;
    if (n > mu && term < sum * 1e-18 + 1e-300) break;
    if (n > dim + 100000) break;
  }
  return std::min(sum, 1.0);
}

int minimal_coherent_dim(double mu, double ceiling) {
  int dim = 1;
  while (poisson_tail(mu, dim) > ceiling) {
    ++dim;
    if (dim > 1 << 20) throw std::runtime_error("minimal_coherent_dim: no adequate dim");
  }
  return dim;
}

StateVector coherent_state(Complex alpha, Truncation trunc, double ceiling) {
  check_trunc(trunc);
  require(std::isfinite(alpha.real()) && std::isfinite(alpha.imag()),
          "coherent_state: non-finite amplitude");
  const double mu = std::norm(alpha);
  const double deficit = poisson_tail(mu, trunc.dim);
  if (deficit > ceiling) {
    throw TruncationError(
        "coherent_state: truncation too small (deficit " +
            std::to_string(deficit) + " > ceiling), minimal adequate dim " +
            std::to_string(minimal_coherent_dim(mu, ceiling)),
        minimal_coherent_dim(mu, ceiling));
  }
  Vec amps(trunc.dim);
  Complex c = std::exp(Complex(-mu / 2.0, 0.0));
  for (int n = 0; n < trunc.dim; ++n) {
    amps[n] = c;
    c *= alpha / std::sqrt(n + 1.0);
  }
  return {{trunc.dim}, std::move(amps), deficit};
}

StateVector two_mode_squeezed(double xi, Truncation trunc) {
  check_trunc(trunc);
  require(xi >= 0.0 && xi < 1.0, "two_mode_squeezed: xi must be in [0,1)");
  const int d = trunc.dim;
  Vec amps = Vec::Zero(static_cast<int64_t>(d) * d);
  const double head = std::sqrt(1.0 - xi * xi);
  double coeff = head;
  for (int n = 0; n < d; ++n) {
    amps[n * d + n] = coeff;
    coeff *= xi;
  }
  const double deficit = std::pow(xi, 2.0 * d);
  return {{d, d}, std::move(amps), deficit};
}

DensityOperator thermal_state(double nbar, Truncation trunc) {
  check_trunc(trunc);
  require(std::isfinite(nbar) && nbar >= 0.0, "thermal_state: nbar must be >= 0");
  const int d = trunc.dim;
  Mat m = Mat::Zero(d, d);
  const double q = nbar / (1.0 + nbar);
  double p = 1.0 / (1.0 + nbar);
  for (int n = 0; n < d; ++n) {
    m(n, n) = p;
    p *= q;
  }
  return {{d}, std::move(m), std::pow(q, d)};
}

StateVector maximally_entangled(int d) {
  require(d >= 1, "maximally_entangled: d must be >= 1");
  Vec amps = Vec::Zero(static_cast<int64_t>(d) * d);
  const double c = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k) amps[k * d + k] = c;
  return {{d, d}, std::move(amps), 0.0};
}

StateVector conjugate_state(const StateVector& psi) {
  return {psi.mode_dims, psi.amplitudes.conjugate(), psi.norm_deficit};
}

HermitianOperator flip_operator(int d) {
  require(d >= 1, "flip_operator: d must be >= 1");
  Mat m = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i * d + j, j * d + i) = 1.0;
  return {{d, d}, std::move(m)};
}

HermitianOperator identity_operator(const std::vector<int>& mode_dims) {
  const int n = product_dim(mode_dims);
  return {mode_dims, Mat::Identity(n, n)};
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const int na = a.total_dim(), nb = b.total_dim();
  Vec amps(static_cast<int64_t>(na) * nb);
  for (int i = 0; i < na; ++i)
    amps.segment(static_cast<int64_t>(i) * nb, nb) = a.amplitudes[i] * b.amplitudes;
  std::vector<int> dims = a.mode_dims;
  dims.insert(dims.end(), b.mode_dims.begin(), b.mode_dims.end());
  // First-order combination of the two truncation losses.
  return {std::move(dims), std::move(amps), a.norm_deficit + b.norm_deficit};
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  const int na = a.side(), nb = b.side();
  Mat m(static_cast<int64_t>(na) * nb, static_cast<int64_t>(na) * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      m.block(static_cast<int64_t>(i) * nb, static_cast<int64_t>(j) * nb, nb, nb) =
          a.matrix(i, j) * b.matrix;
  std::vector<int> dims = a.mode_dims;
  dims.insert(dims.end(), b.mode_dims.begin(), b.mode_dims.end());
  return {std::move(dims), std::move(m)};
}

Complex inner(const StateVector& a, const StateVector& b) {
  require(a.total_dim() == b.total_dim(), "inner: dimension mismatch");
  return a.amplitudes.dot(b.amplitudes);
}

DensityOperator projector(const StateVector& psi) {
  Mat m = psi.amplitudes * psi.amplitudes.adjoint();
  const double norm2 = psi.amplitudes.squaredNorm();
  return {psi.mode_dims, std::move(m), std::abs(1.0 - norm2)};
}

StateVector contract_mode(const StateVector& bra, const StateVector& ket,
                          int which_mode) {
  require(ket.mode_dims.size() == 2, "contract_mode: ket must be bipartite");
  require(which_mode == 0 || which_mode == 1, "contract_mode: bad mode index");
  require(bra.total_dim() == ket.mode_dims[which_mode],
          "contract_mode: bra dimension mismatch");
  const int dA = ket.mode_dims[0], dB = ket.mode_dims[1];
  if (which_mode == 0) {
    Vec out = Vec::Zero(dB);
    for (int a = 0; a < dA; ++a)
      out += std::conj(bra.amplitudes[a]) *
             ket.amplitudes.segment(static_cast<int64_t>(a) * dB, dB);
    return {{dB}, std::move(out), ket.norm_deficit + bra.norm_deficit};
  }
  Vec out = Vec::Zero(dA);
  for (int a = 0; a < dA; ++a)
    out[a] = bra.amplitudes.dot(ket.amplitudes.segment(static_cast<int64_t>(a) * dB, dB));
  return {{dA}, std::move(out), ket.norm_deficit + bra.norm_deficit};
}

namespace {

Mat partial_transpose_matrix(const Mat& m, const std::vector<int>& dims,
                             int which_mode) {
  if (dims.size() != 2) throw std::invalid_argument("partial_transpose: operator must be bipartite");
  if (which_mode != 0 && which_mode != 1)
    throw std::invalid_argument("partial_transpose: mode index out of range");
  const int dA = dims[0], dB = dims[1];
  Mat out(m.rows(), m.cols());
  for (int a = 0; a < dA; ++a)
    for (int b = 0; b < dB; ++b)
      for (int ap = 0; ap < dA; ++ap)
        for (int bp = 0; bp < dB; ++bp) {
          const int row = a * dB + b, col = ap * dB + bp;
          const int src_row = (which_mode == 0) ? ap * dB + b : a * dB + bp;
          const int src_col = (which_mode == 0) ? a * dB + bp : ap * dB + b;
          out(row, col) = m(src_row, src_col);
        }
  return out;
}

}  // namespace

HermitianOperator partial_transpose(const HermitianOperator& op, int which_mode) {
  return {op.mode_dims, partial_transpose_matrix(op.matrix, op.mode_dims, which_mode)};
}

HermitianOperator partial_transpose(const DensityOperator& op, int which_mode) {
  return {op.mode_dims, partial_transpose_matrix(op.matrix, op.mode_dims, which_mode)};
}

double hermiticity_residual(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace detail {

double max_eigenvalue_dense(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

std::vector<double> top_eigenvalues_iterative(const Mat& m, int howmany) {
  const int n = static_cast<int>(m.rows());
  howmany = std::min(howmany, n);
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return std::vector<double>(howmany, 0.0);

  const int max_steps = std::min(n, std::max(250, 2 * howmany + 50));
  Mat basis(n, max_steps);
  Eigen::VectorXd diag(max_steps), subdiag(max_steps);

  std::mt19937_64 rng(0x51a7c3d2e9b0f64bULL);
  std::normal_distribution<double> gauss;
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(gauss(rng), gauss(rng));
  v.normalize();

  std::vector<double> converged;
  int steps = 0;
  double beta = 0.0;
  Vec prev = Vec::Zero(n);
  while (steps < max_steps) {
    basis.col(steps) = v;
    Vec w = m * v;
    const double alpha = std::real(v.dot(w));
    w -= alpha * v;
    if (steps > 0) w -= beta * prev;
    // Full reorthogonalization, twice for stability.
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(steps + 1) * (basis.leftCols(steps + 1).adjoint() * w);
    diag[steps] = alpha;
    beta = w.norm();
    subdiag[steps] = beta;
    ++steps;

    const bool breakdown = beta < 1e-14 * scale;
    if (breakdown || steps == max_steps || steps % 10 == 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag.head(steps), subdiag.head(std::max(steps - 1, 0)));
      const auto& ev = tri.eigenvalues();
      const auto& evec = tri.eigenvectors();
      converged.clear();
      bool all_ok = true;
      for (int k = 0; k < howmany; ++k) {
        const int idx = steps - 1 - k;
        if (idx < 0) { all_ok = false; break; }
        const double ritz = ev[idx];
        const double resid = breakdown ? 0.0 : beta * std::abs(evec(steps - 1, idx));
        if (resid > 1e-11 * std::max(std::abs(ritz), 1e-3 * scale)) all_ok = false;
        converged.push_back(ritz);
      }
      if ((all_ok && static_cast<int>(converged.size()) == howmany) || breakdown ||
          steps == max_steps) {
        if (breakdown && static_cast<int>(converged.size()) < howmany)
          converged.resize(howmany, converged.empty() ? 0.0 : converged.back());
        return converged;
      }
    }
    prev = basis.col(steps - 1);
    v = w / beta;
  }
  return converged;
}

}  // namespace detail

namespace {

double extremal_eigenvalue(const HermitianOperator& op, bool largest) {
  const Mat& m = op.matrix;
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalue: matrix not square");
  const double scale = m.cwiseAbs().maxCoeff();
  if (hermiticity_residual(m) > 1e-12 * std::max(scale, 1e-300))
    throw std::invalid_argument("eigenvalue: matrix is not Hermitian within tolerance");
  if (scale == 0.0) return 0.0;
  if (m.rows() <= 512) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(m, Eigen::EigenvaluesOnly);
    return largest ? solver.eigenvalues().maxCoeff() : solver.eigenvalues().minCoeff();
  }
  if (largest) return detail::top_eigenvalues_iterative(m, 1).front();
  return -detail::top_eigenvalues_iterative(-m, 1).front();
}

}  // namespace

double max_eigenvalue(const HermitianOperator& op) { return extremal_eigenvalue(op, true); }

double min_eigenvalue(const HermitianOperator& op) { return extremal_eigenvalue(op, false); }

StateVector beam_splitter_on_vacuum(int n, double kappa, Truncation trunc) {
  check_trunc(trunc);
  require(kappa >= 0.0 && std::isfinite(kappa), "beam_splitter: kappa must be >= 0");
  if (n < 0 || n >= trunc.dim)
    throw std::invalid_argument("beam_splitter_on_vacuum: photon number outside truncation");
  const int d = trunc.dim;
  const double t = 1.0 / std::sqrt(1.0 + kappa * kappa);
  const double r = kappa * t;
  Vec amps = Vec::Zero(static_cast<int64_t>(d) * d);
  for (int k = 0; k <= n; ++k)
    amps[(n - k) * d + k] = sqrt_binomial(n, k) * std::pow(t, n - k) * std::pow(r, k);
  return {{d, d}, std::move(amps), 0.0};
}

StateVector beam_splitter_extend(const StateVector& psi, double kappa) {
  require(psi.mode_dims.size() == 1, "beam_splitter_extend: single-mode input expected");
  const int d = psi.total_dim();
  Vec amps = Vec::Zero(static_cast<int64_t>(d) * d);
  const double t = 1.0 / std::sqrt(1.0 + kappa * kappa);
  const double r = kappa * t;
  for (int n = 0; n < d; ++n) {
    const Complex c = psi.amplitudes[n];
    if (c == Complex(0.0, 0.0)) continue;
    for (int k = 0; k <= n; ++k)
      amps[(n - k) * d + k] +=
          c * sqrt_binomial(n, k) * std::pow(t, n - k) * std::pow(r, k);
  }
  return {{d, d}, std::move(amps), psi.norm_deficit};
}

}  // namespace qbench
