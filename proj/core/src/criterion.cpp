#include "qbench/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace qbench {

namespace {

bool finite(const Complex& c) {
  return std::isfinite(c.real()) && std::isfinite(c.imag());
}

void check_spec(const StateSpec& spec, int entry_index) {
  const auto fail = [&](const std::string& what) {
    throw std::invalid_argument("ensemble entry " + std::to_string(entry_index) +
                                ": " + what);
  };
  if (const auto* c = std::get_if<CoherentSpec>(&spec)) {
    if (!finite(c->alpha)) fail("non-finite coherent amplitude");
    return;
  }
  const std::vector<Complex>& amps =
      std::holds_alternative<FockAmplitudes>(spec)
          ? std::get<FockAmplitudes>(spec).amplitudes
          : std::get<FiniteVector>(spec).amplitudes;
  if (amps.empty()) fail("empty state vector");
  double norm2 = 0.0;
  for (const Complex& a : amps) {
    if (!finite(a)) fail("non-finite amplitude");
    norm2 += std::norm(a);
  }
  if (std::abs(norm2 - 1.0) > 1e-10) fail("state vector not normalized");
}

Complex coherent_amp_dot(const std::vector<Complex>& fock, Complex alpha) {
  // <fock|alpha> truncated to the vector's length.
  Complex c = std::exp(Complex(-std::norm(alpha) / 2.0, 0.0));
  Complex sum = 0.0;
  for (size_t n = 0; n < fock.size(); ++n) {
    sum += std::conj(fock[n]) * c;
    c *= alpha / std::sqrt(n + 1.0);
  }
  return sum;
}

Complex vec_dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex sum = 0.0;
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

}  // namespace

void validate(const Ensemble& ens) {
  if (ens.entries.empty())
    throw std::invalid_argument("ensemble must have at least one entry");
  double prior_sum = 0.0;
  for (size_t i = 0; i < ens.entries.size(); ++i) {
    const EnsembleEntry& e = ens.entries[i];
    if (!(e.prior > 0.0))
      throw std::invalid_argument("ensemble entry " + std::to_string(i) +
                                  ": prior must be positive");
    if (e.fidelity && !(*e.fidelity >= 0.0 && *e.fidelity <= 1.0))
      throw std::invalid_argument("ensemble entry " + std::to_string(i) +
                                  ": fidelity must be in [0,1]");
    check_spec(e.input, static_cast<int>(i));
    check_spec(e.target, static_cast<int>(i));
    prior_sum += e.prior;
  }
  if (std::abs(prior_sum - 1.0) > 1e-12)
    throw std::invalid_argument("ensemble priors must sum to 1 (got " +
                                std::to_string(prior_sum) + ")");
}

Complex overlap(const StateSpec& a, const StateSpec& b) {
  if (std::holds_alternative<FiniteVector>(a) !=
      std::holds_alternative<FiniteVector>(b))
    throw std::invalid_argument(
        "overlap: finite_vector states cannot be mixed with Fock-space states");
  if (const auto* ca = std::get_if<CoherentSpec>(&a)) {
    if (const auto* cb = std::get_if<CoherentSpec>(&b)) {
      const Complex x = ca->alpha, y = cb->alpha;
      return std::exp(-std::norm(x) / 2.0 - std::norm(y) / 2.0 +
                      std::conj(x) * y);
    }
    const auto& fb = std::get<FockAmplitudes>(b).amplitudes;
    return std::conj(coherent_amp_dot(fb, ca->alpha));
  }
  if (const auto* cb = std::get_if<CoherentSpec>(&b)) {
    const auto& fa = std::get<FockAmplitudes>(a).amplitudes;
    return coherent_amp_dot(fa, cb->alpha);
  }
  if (std::holds_alternative<FiniteVector>(a))
    return vec_dot(std::get<FiniteVector>(a).amplitudes,
                   std::get<FiniteVector>(b).amplitudes);
  return vec_dot(std::get<FockAmplitudes>(a).amplitudes,
                 std::get<FockAmplitudes>(b).amplitudes);
}

StateVector to_state_vector(const StateSpec& spec, int dim) {
  if (const auto* c = std::get_if<CoherentSpec>(&spec))
    return coherent_state(c->alpha, {dim},
                          std::numeric_limits<double>::infinity());
  const std::vector<Complex>& amps =
      std::holds_alternative<FockAmplitudes>(spec)
          ? std::get<FockAmplitudes>(spec).amplitudes
          : std::get<FiniteVector>(spec).amplitudes;
  if (static_cast<int>(amps.size()) > dim)
    throw std::invalid_argument("to_state_vector: vector longer than dimension");
  Vec v = Vec::Zero(dim);
  for (size_t n = 0; n < amps.size(); ++n) v[n] = amps[n];
  return {{dim}, std::move(v), 0.0};
}

namespace {

struct SpanBasis {
  // coords.col(i) are the coordinates of state i in the orthonormalized span.
  Mat coords;
  std::vector<double> singular_values;  // descending
  int rank = 0;
};

SpanBasis orthonormalize(const std::vector<StateSpec>& states, double tol) {
  const int n = static_cast<int>(states.size());
  Mat gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram(i, j) = overlap(states[i], states[j]);
  gram = (gram + gram.adjoint()) / 2.0;

  Eigen::SelfAdjointEigenSolver<Mat> solver(gram);
  SpanBasis out;
  out.singular_values.assign(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + n);
  std::reverse(out.singular_values.begin(), out.singular_values.end());
  for (double& s : out.singular_values) s = std::max(s, 0.0);

  const double cutoff = tol * out.singular_values.front();
  for (double s : out.singular_values)
    if (s > cutoff) ++out.rank;
  if (out.rank == 0)
    throw std::runtime_error("orthonormalize: Gram matrix is numerically zero");

  // e_k = sum_j V_jk |psi_j> / sqrt(sigma_k)  =>  <e_k|psi_i> = (V^dag G)_ki / sqrt(sigma_k).
  Mat coords(out.rank, n);
  for (int k = 0; k < out.rank; ++k) {
    const int col = n - 1 - k;  // descending order
    const double sk = std::sqrt(out.singular_values[k]);
    coords.row(k) = (solver.eigenvectors().col(col).adjoint() * gram) / sk;
  }
  out.coords = std::move(coords);
  return out;
}

}  // namespace

EffectiveDimension effective_dimension(const std::vector<StateSpec>& inputs,
                                       double tol) {
  if (inputs.empty())
    throw std::invalid_argument("effective_dimension: empty input list");
  if (!(tol > 0.0))
    throw std::invalid_argument("effective_dimension: tol must be > 0");
  SpanBasis basis = orthonormalize(inputs, tol);
  return {basis.rank, std::move(basis.singular_values)};
}

HermitianOperator benchmark_operator_ensemble(const Ensemble& ens, double tol) {
  validate(ens);
  std::vector<StateSpec> inputs, targets;
  inputs.reserve(ens.entries.size());
  targets.reserve(ens.entries.size());
  for (const EnsembleEntry& e : ens.entries) {
    inputs.push_back(e.input);
    targets.push_back(e.target);
  }
  const SpanBasis in_basis = orthonormalize(inputs, tol);
  const SpanBasis t_basis = orthonormalize(targets, tol);
  const int d = in_basis.rank, dp = t_basis.rank;

  Mat op = Mat::Zero(dp * d, dp * d);
  for (size_t i = 0; i < ens.entries.size(); ++i) {
    Vec x = in_basis.coords.col(i);   // input coordinates, length d
    Vec y = t_basis.coords.col(i);    // target coordinates, length d'
    Vec prod(dp * d);
    for (int a = 0; a < dp; ++a) prod.segment(static_cast<int64_t>(a) * d, d) = y[a] * x;
    op.selfadjointView<Eigen::Lower>().rankUpdate(prod, ens.entries[i].prior);
  }
  op.triangularView<Eigen::StrictlyUpper>() = op.adjoint();
  return {{dp, d}, std::move(op)};
}

EnsembleLimit classical_limit_ensemble(const Ensemble& ens, double tol) {
  validate(ens);
  std::vector<StateSpec> inputs, targets;
  for (const EnsembleEntry& e : ens.entries) {
    inputs.push_back(e.input);
    targets.push_back(e.target);
  }
  const SpanBasis in_basis = orthonormalize(inputs, tol);
  const SpanBasis t_basis = orthonormalize(targets, tol);
  const HermitianOperator gamma_m = benchmark_operator_ensemble(ens, tol);

  EnsembleLimit out;
  out.d_effective = in_basis.rank;
  out.d_target = t_basis.rank;
  out.input_singular_values = in_basis.singular_values;
  out.target_singular_values = t_basis.singular_values;

  Eigen::SelfAdjointEigenSolver<Mat> solver(gamma_m.matrix);
  const int top = static_cast<int>(solver.eigenvalues().size()) - 1;
  out.operator_norm = solver.eigenvalues()[top];
  out.eigenvalue_residual =
      ((gamma_m.matrix - out.operator_norm *
                             Mat::Identity(gamma_m.side(), gamma_m.side())) *
       solver.eigenvectors().col(top))
          .cwiseAbs()
          .maxCoeff();
  out.limit = out.d_effective * out.operator_norm;
  out.vacuous = out.limit >= 1.0;
  return out;
}

double average_measured_fidelity(const Ensemble& ens) {
  validate(ens);
  std::string missing;
  double sum = 0.0;
  for (size_t i = 0; i < ens.entries.size(); ++i) {
    if (!ens.entries[i].fidelity) {
      missing += (missing.empty() ? "" : ", ") + std::to_string(i);
      continue;
    }
    sum += ens.entries[i].prior * *ens.entries[i].fidelity;
  }
  if (!missing.empty())
    throw std::invalid_argument(
        "average_measured_fidelity: entries without fidelity: " + missing);
  return sum;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::QuantumDomain: return "QuantumDomain";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::NotEvaluated: return "NotEvaluated";
  }
  return "?";
}

CertificationReport certification_verdict(const Ensemble& ens,
                                          std::optional<double> error_budget,
                                          double tol) {
  const EnsembleLimit lim = classical_limit_ensemble(ens, tol);
  CertificationReport rep;
  rep.classical_limit = lim.limit;
  rep.d_effective = lim.d_effective;
  rep.vacuous = lim.vacuous;
  rep.diagnostics.gram_singular_values = lim.input_singular_values;
  rep.diagnostics.eigenvalue_residual = lim.eigenvalue_residual;

  for (size_t i = 0; i < ens.entries.size(); ++i)
    if (!ens.entries[i].fidelity)
      rep.missing_fidelity_indices.push_back(static_cast<int>(i));
  if (!rep.missing_fidelity_indices.empty()) {
    rep.verdict = Verdict::NotEvaluated;
    return rep;
  }

  double fbar = 0.0;
  for (const EnsembleEntry& e : ens.entries) fbar += e.prior * *e.fidelity;
  rep.average_fidelity = fbar;
  rep.margin = fbar - lim.limit;
  const double budget = error_budget.value_or(
      rep.diagnostics.eigenvalue_residual + rep.diagnostics.truncation_deficits);
  rep.verdict = (*rep.margin > budget) ? Verdict::QuantumDomain
                                       : Verdict::Inconclusive;
  return rep;
}

double simulated_average_fidelity(const Channel& ch, const Ensemble& ens) {
  validate(ens);
  std::vector<double> terms;
  terms.reserve(ens.entries.size());
  for (const EnsembleEntry& e : ens.entries) {
    const StateVector in = to_state_vector(e.input, ch.input_dim);
    const StateVector target = to_state_vector(e.target, ch.output_dim);
    terms.push_back(e.prior * pure_fidelity_through(ch, in, target));
  }
  return pairwise_sum(terms);
}

double choi_fidelity_identity_check(const Channel& ch, const Ensemble& ens,
                                    int d) {
  validate(ens);
  if (ch.input_dim != d)
    throw std::invalid_argument("choi_fidelity_identity_check: dimension mismatch");
  const double direct = simulated_average_fidelity(ch, ens);

  const DensityOperator rho = choi_state(ch, maximally_entangled(d));
  Mat m = Mat::Zero(ch.output_dim * d, ch.output_dim * d);
  for (const EnsembleEntry& e : ens.entries) {
    const Vec t = to_state_vector(e.target, ch.output_dim).amplitudes;
    const Vec psi_conj = to_state_vector(e.input, d).amplitudes.conjugate();
    Vec prod(ch.output_dim * d);
    for (int a = 0; a < ch.output_dim; ++a)
      prod.segment(static_cast<int64_t>(a) * d, d) = t[a] * psi_conj;
    m.selfadjointView<Eigen::Lower>().rankUpdate(prod, e.prior);
  }
  m.triangularView<Eigen::StrictlyUpper>() = m.adjoint();
  const double via_choi = d * std::real((m * rho.matrix).trace());
  return std::abs(direct - via_choi);
}

HermitianOperator haar_benchmark_operator(int d) {
  if (d < 1) throw std::invalid_argument("haar_benchmark_operator: d must be >= 1");
  HermitianOperator f = flip_operator(d);
  Mat m = (Mat::Identity(d * d, d * d) + f.matrix) /
          (static_cast<double>(d) * (d + 1.0));
  return {{d, d}, std::move(m)};
}

double haar_classical_limit(int d) {
  return d * max_eigenvalue(haar_benchmark_operator(d));
}

double haar_sampling_check(int d, long samples, std::uint64_t seed) {
  if (d < 1 || samples < 1)
    throw std::invalid_argument("haar_sampling_check: d and samples must be >= 1");
  Mat mean = Mat::Zero(d * d, d * d);
  for (long i = 0; i < samples; ++i) {
    // Counter-based seeding: sample i is reproducible in isolation.
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (i + 1));
    std::normal_distribution<double> gauss;
    Vec psi(d);
    for (int k = 0; k < d; ++k) psi[k] = Complex(gauss(rng), gauss(rng));
    psi.normalize();
    Vec prod(d * d);
    const Vec psi_conj = psi.conjugate();
    for (int a = 0; a < d; ++a)
      prod.segment(static_cast<int64_t>(a) * d, d) = psi[a] * psi_conj;
    mean.selfadjointView<Eigen::Lower>().rankUpdate(prod, 1.0);
  }
  mean.triangularView<Eigen::StrictlyUpper>() = mean.adjoint();
  mean /= static_cast<double>(samples);

  const StateVector phi = maximally_entangled(d);
  const Mat analytic =
      (Mat::Identity(d * d, d * d) +
       d * (phi.amplitudes * phi.amplitudes.adjoint())) /
      (static_cast<double>(d) * (d + 1.0));
  return (mean - analytic).cwiseAbs().maxCoeff();
}

std::vector<double> prior_search(const Ensemble& ens, int sweeps) {
  validate(ens);
  const size_t n = ens.entries.size();
  Ensemble work = ens;
  auto margin = [&]() {
    const EnsembleLimit lim = classical_limit_ensemble(work);
    return average_measured_fidelity(work) - lim.limit;
  };
  double best = margin();
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    bool improved = false;
    const double step = 0.25 / (1 << std::min(sweep / 5, 10));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double move = std::min(step, work.entries[j].prior * 0.9);
        if (move <= 0.0) continue;
        work.entries[i].prior += move;
        work.entries[j].prior -= move;
        const double m = margin();
        if (m > best + 1e-15) {
          best = m;
          improved = true;
        } else {
          work.entries[i].prior -= move;
          work.entries[j].prior += move;
        }
      }
    if (!improved && step < 1e-6) break;
  }
  std::vector<double> priors(n);
  for (size_t i = 0; i < n; ++i) priors[i] = work.entries[i].prior;
  return priors;
}

}  // namespace qbench
