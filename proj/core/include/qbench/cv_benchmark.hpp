#pragma once

// Continuous-variable benchmark: the closed-form classical fidelity limit
// for Gaussian-distributed coherent-state tasks, quadrature-based average
// fidelity of simulated channels, and a numerical audit of each step of the
// derivation (J-integral identity, benchmark-operator eigenvalue, bound
// collapse at the tight point, attaining channel).

#include "qbench/channels.hpp"
#include "qbench/fockla.hpp"
#include "qbench/quadrature.hpp"

namespace qbench {

/// Transformation task |sqrt(N) alpha> -> |sqrt(eta) alpha> averaged over
/// the Gaussian prior p_lambda.
struct GaussianTask {
  double amplitude_scale = 1.0;  // N
  double gain = 1.0;             // eta
  double prior_width = 1.0;      // lambda (inverse width)
};

/// Parameters (s, kappa, xi) of the J-integral construction.
struct ProofParams {
  double s = 0.0;
  double kappa = 0.0;
  double xi = 0.0;

  /// |lambda - s - (1 - xi^2) kappa^2| for the bound task.
  double prior_residual(const GaussianTask& task) const;
  /// |sqrt(N) - kappa xi| for the bound task.
  double amplitude_residual(const GaussianTask& task) const;
};

void validate(const GaussianTask& task);

/// Classical (measure-and-prepare) limit F_C = (N + lambda)/(N + lambda + eta).
double classical_limit_cv(const GaussianTask& task);

/// Scaling reparameterizations leaving the average fidelity invariant.
GaussianTask to_unit_gain(const GaussianTask& task);    // eta -> 1
GaussianTask to_unit_input(const GaussianTask& task);   // N -> 1

/// xi at which s = 0 and the proof's chain of inequalities is tight.
double tight_xi(const GaussianTask& unit_gain_task);

/// Gain of the attaining measure-and-prepare channel, sqrt(N)/(N + lambda).
double attaining_gain(const GaussianTask& unit_gain_task);

/// Solve (s, kappa) from a unit-gain task and a chosen xi. Throws when
/// xi^2 < N/(N + lambda) (s would be negative).
ProofParams params_from_task(const GaussianTask& unit_gain_task, double xi);

/// Smallest truncation whose prior-weighted coherent-state tails (scaled by
/// sqrt(N), sqrt(eta) and `extra_gain`) stay within `ceiling`.
Truncation truncation_for_task(const GaussianTask& task,
                               const QuadratureSpec& spec,
                               double extra_gain = 1.0, double ceiling = 1e-6);

/// Average fidelity of the simulated channel over the task's prior,
/// evaluated on quadrature nodes in a truncated Fock space. Throws
/// TruncationError when the prior-weighted truncation deficit of the node
/// states exceeds `deficit_ceiling`.
double average_fidelity_cv(const Channel& ch, const GaussianTask& task,
                           const QuadratureSpec& spec, Truncation trunc,
                           double deficit_ceiling = 1e-5);

/// J-integral of the proof: the two-mode squeezed Choi overlap integrated
/// against p_s. Returns 0 exactly at s = 0 (the density vanishes).
double j_integral(const Channel& ch, const ProofParams& pp,
                  const QuadratureSpec& spec, Truncation trunc);

struct BenchmarkOperatorCv {
  HermitianOperator m;        // integral of p_s |a><a| (x) |k a*><k a*|
  HermitianOperator gamma_m;  // its partial transpose on the second mode
  double construction_residual;       // PT-vs-direct entrywise disagreement
  double weighted_truncation_deficit; // prior-weighted coherent tails
};

/// Builds M on quadrature nodes and Gamma[M] two independent ways (partial
/// transpose of M, and direct phase-conjugation replacement); throws when
/// the two constructions disagree beyond 1e-10.
BenchmarkOperatorCv benchmark_operator_cv(double s, double kappa,
                                          const QuadratureSpec& spec,
                                          Truncation trunc);

struct AuditRecord {
  ProofParams params;
  double j_value = 0.0;
  double j_expected = 0.0;      // s (1 - xi^2) / lambda for the identity channel
  double j_residual = 0.0;
  double gamma_eigenvalue = 0.0;
  double gamma_expected = 0.0;  // s / (s + 1 + kappa^2)
  double eigen_residual = 0.0;
  double intermediate_bound = 0.0;  // lambda / [(1 - xi^2)(N + lambda + 1)]
  double classical_limit = 0.0;     // (N + lambda)/(N + lambda + 1)
  // Both sides of the s >= 0 condition; the derived direction is
  // lambda/(1 - xi^2) >= N + lambda, with equality iff s = 0.
  double lambda_over_one_minus_xi2 = 0.0;
  double n_plus_lambda = 0.0;
  double attaining_fidelity = 0.0;
  double attaining_gap = 0.0;
};

/// Runs every numerically checkable step of the derivation for a unit-gain
/// task at the chosen xi.
AuditRecord proof_audit(const GaussianTask& unit_gain_task, double xi,
                        const QuadratureSpec& spec, Truncation trunc);

}  // namespace qbench
