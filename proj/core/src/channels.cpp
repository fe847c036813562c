#include "qbench/channels.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace qbench {

namespace {

// Deterministic pairwise accumulation of matrix-valued terms.
Mat pairwise_mat_sum(size_t begin, size_t end,
                     const std::function<Mat(size_t)>& term) {
  if (end - begin == 1) return term(begin);
  const size_t mid = begin + (end - begin) / 2;
  return pairwise_mat_sum(begin, mid, term) + pairwise_mat_sum(mid, end, term);
}

}  // namespace

double completeness_deficit_of(const std::vector<KrausTerm>& kraus, int input_dim) {
  if (kraus.empty()) return 1.0;
  Mat sum = Mat::Zero(input_dim, input_dim);

  // Rank-one terms contribute w ||l||^2 r r^dag; accumulate them as one
  // product of scaled columns instead of a matrix allocation per term.
  std::vector<size_t> dense;
  Eigen::Index n_r1 = 0;
  for (size_t j = 0; j < kraus.size(); ++j) {
    if (kraus[j].rank_one)
      ++n_r1;
    else
      dense.push_back(j);
  }
  if (n_r1 > 0) {
    Mat cols(input_dim, n_r1);
    Eigen::Index c = 0;
    for (const KrausTerm& k : kraus)
      if (k.rank_one)
        cols.col(c++) = std::sqrt(k.weight * k.left.squaredNorm()) * k.right;
    sum.selfadjointView<Eigen::Lower>().rankUpdate(cols);
    sum.triangularView<Eigen::StrictlyUpper>() = sum.adjoint();
  }
  if (!dense.empty())
    sum += pairwise_mat_sum(0, dense.size(), [&](size_t j) -> Mat {
      const KrausTerm& k = kraus[dense[j]];
      return Mat(k.weight * (k.op.adjoint() * k.op));
    });
  return (sum - Mat::Identity(input_dim, input_dim)).cwiseAbs().maxCoeff();
}

Channel identity_channel(int d) {
  if (d < 1) throw std::invalid_argument("identity_channel: d must be >= 1");
  Channel ch{d, d, {}, 0.0};
  ch.kraus.push_back({1.0, Mat::Identity(d, d), false, {}, {}});
  return ch;
}

Channel loss_channel(double eta, Truncation trunc) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("loss_channel: eta must be in [0,1]");
  const int d = trunc.dim;
  Channel ch{d, d, {}, 0.0};
  for (int k = 0; k < d; ++k) {
    Mat a = Mat::Zero(d, d);
    bool nonzero = false;
    for (int n = k; n < d; ++n) {
      const double log_bin = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                             std::lgamma(n - k + 1.0);
      double amp2;
      if (eta == 0.0)
        amp2 = (n == k) ? 1.0 : 0.0;
      else if (eta == 1.0)
        amp2 = (k == 0) ? 1.0 : 0.0;
      else
        amp2 = std::exp(log_bin + (n - k) * std::log(eta) + k * std::log1p(-eta));
      if (amp2 > 0.0) {
        a(n - k, n) = std::sqrt(amp2);
        nonzero = true;
      }
    }
    if (nonzero) ch.kraus.push_back({1.0, std::move(a), false, {}, {}});
  }
  ch.completeness_deficit = completeness_deficit_of(ch.kraus, d);
  return ch;
}

QuadratureSpec heterodyne_default_spec(Truncation trunc) {
  QuadratureSpec spec;
  spec.lambda_weight = 1.0;
  spec.radial_nodes = std::max(32, trunc.dim / 2 + 1);
  spec.angular_nodes = std::max(32, trunc.dim + 1);
  return spec;
}

Channel heterodyne_mp_channel(double gain, Truncation trunc,
                              const QuadratureSpec& spec,
                              double deficit_threshold) {
  if (!(gain >= 0.0) || !std::isfinite(gain))
    throw std::invalid_argument("heterodyne_mp_channel: gain must be >= 0");
  const PlaneQuadrature q = PlaneQuadrature::build(spec);
  const double lam = spec.lambda_weight;
  // Prepared states live on a truncation sized for the largest node radius
  // scaled by the gain; otherwise completeness degrades near the cutoff.
  const double mu_max = gain * gain * q.max_radius * q.max_radius;
  const Truncation out{std::max(trunc.dim, minimal_coherent_dim(mu_max, 1e-9))};
  Channel ch{trunc.dim, out.dim, {}, 0.0};
  const double inf = std::numeric_limits<double>::infinity();
  for (const PlaneNode& node : q.nodes) {
    // POVM weight e^{-|alpha|^2} lives inside the normalized bra |alpha>;
    // undo the quadrature's own Gaussian so the flat 1/pi measure remains.
    const double w = node.weight / lam * std::exp(lam * std::norm(node.alpha));
    if (w < 1e-300) continue;
    StateVector prepared = coherent_state(gain * node.alpha, out, inf);
    StateVector measured = coherent_state(node.alpha, trunc, inf);
    ch.kraus.push_back({w, {}, true, std::move(prepared.amplitudes),
                        std::move(measured.amplitudes)});
  }
  ch.completeness_deficit = completeness_deficit_of(ch.kraus, trunc.dim);
  if (ch.completeness_deficit > deficit_threshold)
    throw QuadratureError("heterodyne_mp_channel: quadrature too coarse, "
                          "completeness deficit " +
                          std::to_string(ch.completeness_deficit));
  return ch;
}

Channel heterodyne_mp_channel(double gain, Truncation trunc) {
  return heterodyne_mp_channel(gain, trunc, heterodyne_default_spec(trunc));
}

Channel basis_mp_channel(const Mat& u, int d) {
  if (u.rows() != d || u.cols() != d)
    throw std::invalid_argument("basis_mp_channel: U must be d x d");
  if ((u.adjoint() * u - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("basis_mp_channel: U is not unitary");
  Channel ch{d, d, {}, 0.0};
  for (int j = 0; j < d; ++j) {
    Vec col = u.col(j);
    ch.kraus.push_back({1.0, {}, true, col, col});
  }
  ch.completeness_deficit = completeness_deficit_of(ch.kraus, d);
  return ch;
}

Channel unitary_channel(const Mat& u, int d) {
  if (u.rows() != d || u.cols() != d)
    throw std::invalid_argument("unitary_channel: U must be d x d");
  if ((u.adjoint() * u - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("unitary_channel: U is not unitary");
  Channel ch{d, d, {}, 0.0};
  ch.kraus.push_back({1.0, u, false, {}, {}});
  return ch;
}

DensityOperator apply(const Channel& ch, const DensityOperator& rho, int on_mode) {
  const int n_modes = static_cast<int>(rho.mode_dims.size());
  if (on_mode < 0 || on_mode >= n_modes)
    throw std::invalid_argument("apply: mode index out of range");
  if (rho.mode_dims[on_mode] != ch.input_dim)
    throw std::invalid_argument("apply: dimension mismatch on addressed mode");

  int pre = 1, post = 1;
  for (int m = 0; m < on_mode; ++m) pre *= rho.mode_dims[m];
  for (int m = on_mode + 1; m < n_modes; ++m) post *= rho.mode_dims[m];

  auto lift = [&](const Mat& k) {
    Mat idp = Mat::Identity(pre, pre);
    Mat ido = Mat::Identity(post, post);
    // pre (x) K (x) post
    const int rows = pre * static_cast<int>(k.rows()) * post;
    const int cols = pre * static_cast<int>(k.cols()) * post;
    Mat out = Mat::Zero(rows, cols);
    for (int p = 0; p < pre; ++p)
      for (int i = 0; i < k.rows(); ++i)
        for (int j = 0; j < k.cols(); ++j)
          if (k(i, j) != Complex(0.0, 0.0))
            out.block((p * static_cast<int>(k.rows()) + i) * post,
                      (p * static_cast<int>(k.cols()) + j) * post, post, post) =
                k(i, j) * ido;
    (void)idp;
    return out;
  };

  Mat out = pairwise_mat_sum(0, ch.kraus.size(), [&](size_t j) -> Mat {
    Mat kf = lift(ch.kraus[j].dense());
    return Mat(ch.kraus[j].weight * (kf * rho.matrix * kf.adjoint()));
  });

  std::vector<int> dims = rho.mode_dims;
  dims[on_mode] = ch.output_dim;
  return {std::move(dims), std::move(out),
          rho.trace_deficit + ch.completeness_deficit};
}

std::vector<std::pair<double, Vec>> choi_vectors(const Channel& ch,
                                                 const StateVector& entangler) {
  if (entangler.mode_dims.size() != 2)
    throw std::invalid_argument("choi: entangler must be bipartite");
  if (entangler.mode_dims[0] != ch.input_dim)
    throw std::invalid_argument("choi: entangler first mode must match channel input");
  const int dA = entangler.mode_dims[0], dB = entangler.mode_dims[1];
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      e(entangler.amplitudes.data(), dA, dB);
  std::vector<std::pair<double, Vec>> out;
  out.reserve(ch.kraus.size());
  for (const KrausTerm& k : ch.kraus) {
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> phi;
    if (k.rank_one)
      phi = k.left * (k.right.adjoint() * e);
    else
      phi = k.op * e;
    out.emplace_back(k.weight, Eigen::Map<const Vec>(phi.data(), phi.size()));
  }
  return out;
}

DensityOperator choi_state(const Channel& ch, const StateVector& entangler) {
  auto vecs = choi_vectors(ch, entangler);
  Mat rho = pairwise_mat_sum(0, vecs.size(), [&](size_t j) -> Mat {
    return Mat(vecs[j].first * (vecs[j].second * vecs[j].second.adjoint()));
  });
  const int dB = entangler.mode_dims[1];
  return {{ch.output_dim, dB}, std::move(rho),
          entangler.norm_deficit + ch.completeness_deficit};
}

double pure_fidelity_through(const Channel& ch, const StateVector& in,
                             const StateVector& target) {
  if (in.total_dim() != ch.input_dim || target.total_dim() != ch.output_dim)
    throw std::invalid_argument("pure_fidelity_through: dimension mismatch");
  std::vector<double> terms(ch.kraus.size());
  for (size_t j = 0; j < ch.kraus.size(); ++j) {
    const KrausTerm& k = ch.kraus[j];
    Complex amp;
    if (k.rank_one)
      amp = target.amplitudes.dot(k.left) * k.right.dot(in.amplitudes);
    else
      amp = target.amplitudes.dot(k.op * in.amplitudes);
    terms[j] = k.weight * std::norm(amp);
  }
  return pairwise_sum(terms);
}

}  // namespace qbench
