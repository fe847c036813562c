#include "qbench/cv_benchmark.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qbench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void validate(const GaussianTask& task) {
  if (!(task.amplitude_scale > 0.0) || !(task.gain > 0.0) ||
      !(task.prior_width > 0.0))
    throw std::invalid_argument("GaussianTask: N, eta, lambda must be > 0");
}

double classical_limit_cv(const GaussianTask& task) {
  validate(task);
  return (task.amplitude_scale + task.prior_width) /
         (task.amplitude_scale + task.prior_width + task.gain);
}

GaussianTask to_unit_gain(const GaussianTask& task) {
  validate(task);
  return {task.amplitude_scale / task.gain, 1.0, task.prior_width / task.gain};
}

GaussianTask to_unit_input(const GaussianTask& task) {
  validate(task);
  return {1.0, task.gain / task.amplitude_scale,
          task.prior_width / task.amplitude_scale};
}

double tight_xi(const GaussianTask& task) {
  validate(task);
  return std::sqrt(task.amplitude_scale /
                   (task.amplitude_scale + task.prior_width));
}

double attaining_gain(const GaussianTask& task) {
  validate(task);
  return std::sqrt(task.amplitude_scale) /
         (task.amplitude_scale + task.prior_width);
}

double ProofParams::prior_residual(const GaussianTask& task) const {
  return std::abs(task.prior_width - s - (1.0 - xi * xi) * kappa * kappa);
}

double ProofParams::amplitude_residual(const GaussianTask& task) const {
  return std::abs(std::sqrt(task.amplitude_scale) - kappa * xi);
}

ProofParams params_from_task(const GaussianTask& task, double xi) {
  validate(task);
  if (std::abs(task.gain - 1.0) > 1e-14)
    throw std::invalid_argument("params_from_task: task must be in unit-gain form");
  if (!(xi >= 0.0 && xi < 1.0))
    throw std::invalid_argument("params_from_task: xi must be in [0,1)");
  const double n = task.amplitude_scale, lambda = task.prior_width;
  const double xi2 = xi * xi;
  if (xi2 * (n + lambda) < n * (1.0 - 1e-13))
    throw std::invalid_argument("params_from_task: s would be negative at this xi");
  const double kappa = std::sqrt(n) / xi;
  double s = lambda - (1.0 - xi2) * n / xi2;
  if (s < 0.0) s = 0.0;  // tight point up to roundoff
  return {s, kappa, xi};
}

Truncation truncation_for_task(const GaussianTask& task,
                               const QuadratureSpec& spec, double extra_gain,
                               double ceiling) {
  validate(task);
  std::vector<double> t, w;
  gauss_laguerre(spec.radial_nodes, t, w);
  const double scale2 =
      std::max({task.amplitude_scale, task.gain, extra_gain * extra_gain});
  auto weighted_tail = [&](int dim) {
    double sum = 0.0;
    for (size_t i = 0; i < t.size(); ++i)
      sum += w[i] * poisson_tail(scale2 * t[i] / spec.lambda_weight, dim);
    return sum;
  };
  int dim = 4;
  while (weighted_tail(dim) > ceiling) {
    dim += std::max(4, dim / 4);
    if (dim > 4096)
      throw TruncationError("truncation_for_task: no adequate dim below 4096", dim);
  }
  return {dim};
}

double average_fidelity_cv(const Channel& ch, const GaussianTask& task,
                           const QuadratureSpec& spec, Truncation trunc,
                           double deficit_ceiling) {
  validate(task);
  if (ch.input_dim != trunc.dim || ch.output_dim < trunc.dim)
    throw std::invalid_argument("average_fidelity_cv: channel/truncation mismatch");
  const Truncation out_trunc{ch.output_dim};
  QuadratureSpec qs = spec;
  qs.lambda_weight = task.prior_width;
  const PlaneQuadrature q = PlaneQuadrature::build(qs);
  const double in_scale = std::sqrt(task.amplitude_scale);
  const double out_scale = std::sqrt(task.gain);

  std::vector<const PlaneNode*> live;
  for (const PlaneNode& node : q.nodes)
    if (node.weight >= 1e-25) live.push_back(&node);  // below every tolerance

  const bool all_rank_one =
      !ch.kraus.empty() &&
      std::all_of(ch.kraus.begin(), ch.kraus.end(),
                  [](const KrausTerm& k) { return k.rank_one; });

  std::vector<double> terms(live.size());
  double weighted_deficit = 0.0;
  if (all_rank_one) {
    // F_j = sum_k w_k |<t_j|l_k>|^2 |<r_k|i_j>|^2 batched as two matrix
    // products over node blocks; the per-term dot-product path is an order
    // of magnitude slower for the quadrature-discretized MP channels.
    const auto nk = static_cast<Eigen::Index>(ch.kraus.size());
    Mat lefts(ch.output_dim, nk), rights(ch.input_dim, nk);
    Eigen::VectorXd kw(nk);
    for (Eigen::Index k = 0; k < nk; ++k) {
      lefts.col(k) = ch.kraus[k].left;
      rights.col(k) = ch.kraus[k].right;
      kw[k] = ch.kraus[k].weight;
    }
    const size_t block = 128;
    for (size_t b0 = 0; b0 < live.size(); b0 += block) {
      const auto nb =
          static_cast<Eigen::Index>(std::min(block, live.size() - b0));
      Mat ins(trunc.dim, nb), targets(ch.output_dim, nb);
      for (Eigen::Index j = 0; j < nb; ++j) {
        const PlaneNode& node = *live[b0 + j];
        StateVector in = coherent_state(in_scale * node.alpha, trunc, kInf);
        StateVector target =
            coherent_state(out_scale * node.alpha, out_trunc, kInf);
        weighted_deficit +=
            node.weight * (in.norm_deficit + target.norm_deficit);
        ins.col(j) = in.amplitudes;
        targets.col(j) = target.amplitudes;
      }
      const Mat a = lefts.adjoint() * targets;   // <l_k|t_j>
      const Mat b = rights.adjoint() * ins;      // <r_k|i_j>
      for (Eigen::Index j = 0; j < nb; ++j)
        terms[b0 + j] =
            live[b0 + j]->weight *
            (kw.array() * a.col(j).cwiseAbs2().array() *
             b.col(j).cwiseAbs2().array()).sum();
    }
  } else {
    for (size_t j = 0; j < live.size(); ++j) {
      const PlaneNode& node = *live[j];
      StateVector in = coherent_state(in_scale * node.alpha, trunc, kInf);
      StateVector target =
          coherent_state(out_scale * node.alpha, out_trunc, kInf);
      weighted_deficit += node.weight * (in.norm_deficit + target.norm_deficit);
      terms[j] = node.weight * pure_fidelity_through(ch, in, target);
    }
  }
  if (weighted_deficit > deficit_ceiling) {
    const double mu = std::max(task.amplitude_scale, task.gain) *
                      q.max_radius * q.max_radius;
    throw TruncationError(
        "average_fidelity_cv: prior-weighted truncation deficit " +
            std::to_string(weighted_deficit) + " above ceiling",
        minimal_coherent_dim(mu, deficit_ceiling));
  }
  return pairwise_sum(terms);
}

double j_integral(const Channel& ch, const ProofParams& pp,
                  const QuadratureSpec& spec, Truncation trunc) {
  if (pp.s < 0.0 || pp.kappa < 0.0 || !(pp.xi >= 0.0 && pp.xi < 1.0))
    throw std::invalid_argument("j_integral: invalid proof parameters");
  if (pp.s == 0.0) return 0.0;  // p_0 vanishes identically

  const StateVector entangler = two_mode_squeezed(pp.xi, trunc);
  const auto choi = choi_vectors(ch, entangler);
  const int d_out = ch.output_dim, d_ref = trunc.dim;

  QuadratureSpec qs = spec;
  qs.lambda_weight = pp.s;
  const PlaneQuadrature q = PlaneQuadrature::build(qs);

  std::vector<double> terms;
  terms.reserve(q.nodes.size());
  for (const PlaneNode& node : q.nodes) {
    if (node.weight < 1e-25) continue;
    const StateVector a = coherent_state(node.alpha, {d_out}, kInf);
    const StateVector b =
        coherent_state(pp.kappa * std::conj(node.alpha), {d_ref}, kInf);
    const Vec b_conj = b.amplitudes.conjugate();
    double f = 0.0;
    for (const auto& [w, phi] : choi) {
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>>
          phi_mat(phi.data(), d_out, d_ref);
      const Complex amp = a.amplitudes.adjoint() * (phi_mat * b_conj);
      f += w * std::norm(amp);
    }
    terms.push_back(node.weight * f);
  }
  return pairwise_sum(terms);
}

BenchmarkOperatorCv benchmark_operator_cv(double s, double kappa,
                                          const QuadratureSpec& spec,
                                          Truncation trunc) {
  if (!(s >= 0.0) || !(kappa >= 0.0))
    throw std::invalid_argument("benchmark_operator_cv: s, kappa must be >= 0");
  const int d = trunc.dim;
  const int side = d * d;
  if (s == 0.0) {
    // p_0 vanishes; both operators are zero.
    HermitianOperator zero{{d, d}, Mat::Zero(side, side)};
    return {zero, zero, 0.0, 0.0};
  }

  // Nodes are placed for the integrand's natural Gaussian width
  // s + 1 + kappa^2 (the matrix elements decay like e^{-(1+k^2)|a|^2} on
  // top of p_s); the p_s / p_L density ratio is folded into the weights.
  // Placing nodes at width s instead loses ~5 digits in the top eigenvalue
  // once 1 + kappa^2 >> s.
  const double width = s + 1.0 + kappa * kappa;
  QuadratureSpec qs = spec;
  qs.lambda_weight = width;
  const PlaneQuadrature q = PlaneQuadrature::build(qs);

  std::vector<std::pair<Complex, double>> used;  // node, reweighted weight
  for (const PlaneNode& node : q.nodes) {
    const double w = node.weight * (s / width) *
                     std::exp((width - s) * std::norm(node.alpha));
    if (w >= 1e-30) used.emplace_back(node.alpha, w);
  }

  // Columns sqrt(w) |alpha> (x) |kappa alpha*> (M) and
  // sqrt(w) |alpha> (x) |kappa alpha> (direct Gamma[M]).
  Mat xm(side, used.size()), xg(side, used.size());
  double weighted_deficit = 0.0;
  for (size_t c = 0; c < used.size(); ++c) {
    const auto& [alpha, w] = used[c];
    const StateVector a = coherent_state(alpha, trunc, kInf);
    const StateVector b = coherent_state(kappa * alpha, trunc, kInf);
    weighted_deficit += w * (a.norm_deficit + b.norm_deficit);
    const double sw = std::sqrt(w);
    for (int i = 0; i < d; ++i) {
      xg.col(c).segment(static_cast<int64_t>(i) * d, d) =
          sw * a.amplitudes[i] * b.amplitudes;
      xm.col(c).segment(static_cast<int64_t>(i) * d, d) =
          sw * a.amplitudes[i] * b.amplitudes.conjugate();
    }
  }

  Mat m = Mat::Zero(side, side);
  m.selfadjointView<Eigen::Lower>().rankUpdate(xm);
  m.triangularView<Eigen::StrictlyUpper>() = m.adjoint();
  Mat gamma_direct = Mat::Zero(side, side);
  gamma_direct.selfadjointView<Eigen::Lower>().rankUpdate(xg);
  gamma_direct.triangularView<Eigen::StrictlyUpper>() = gamma_direct.adjoint();

  HermitianOperator m_op{{d, d}, std::move(m)};
  HermitianOperator gamma_pt = partial_transpose(m_op, 1);
  const double residual =
      (gamma_pt.matrix - gamma_direct).cwiseAbs().maxCoeff();
  if (residual > 1e-10)
    throw std::runtime_error(
        "benchmark_operator_cv: partial-transpose and phase-conjugation "
        "constructions disagree (residual " + std::to_string(residual) +
        "); quadrature or truncation fault");
  return {std::move(m_op), {{d, d}, std::move(gamma_direct)}, residual,
          weighted_deficit};
}

AuditRecord proof_audit(const GaussianTask& task, double xi,
                        const QuadratureSpec& spec, Truncation trunc) {
  AuditRecord rec;
  rec.params = params_from_task(task, xi);
  const double n = task.amplitude_scale, lambda = task.prior_width;
  const double s = rec.params.s, kappa = rec.params.kappa;
  const double xi2 = xi * xi;

  rec.j_value = j_integral(identity_channel(trunc.dim), rec.params, spec, trunc);
  rec.j_expected = s * (1.0 - xi2) / lambda;
  rec.j_residual = std::abs(rec.j_value - rec.j_expected);

  const BenchmarkOperatorCv op = benchmark_operator_cv(s, kappa, spec, trunc);
  rec.gamma_eigenvalue = (s == 0.0) ? 0.0 : max_eigenvalue(op.gamma_m);
  rec.gamma_expected = (s == 0.0) ? 0.0 : s / (s + 1.0 + kappa * kappa);
  rec.eigen_residual = std::abs(rec.gamma_eigenvalue - rec.gamma_expected);

  rec.intermediate_bound = lambda / ((1.0 - xi2) * (n + lambda + 1.0));
  rec.classical_limit = (n + lambda) / (n + lambda + 1.0);
  rec.lambda_over_one_minus_xi2 = lambda / (1.0 - xi2);
  rec.n_plus_lambda = n + lambda;

  const double gain = attaining_gain(task);
  const Truncation eb_trunc = truncation_for_task(task, spec, gain, 1e-6);
  const Channel eb = heterodyne_mp_channel(gain, eb_trunc);
  rec.attaining_fidelity = average_fidelity_cv(eb, task, spec, eb_trunc);
  rec.attaining_gap = std::abs(rec.attaining_fidelity - rec.classical_limit);
  return rec;
}

}  // namespace qbench
