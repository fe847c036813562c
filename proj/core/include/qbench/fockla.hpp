#pragma once

// Finite-dimensional complex linear algebra plus constructors for the
// truncated-Fock states and operators used throughout the toolkit.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbench {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// Number-basis cutoff: Fock levels 0 .. dim-1.
struct Truncation {
  int dim = 1;
};

/// Thrown when a construction cannot meet its norm/trace deficit ceiling.
/// Carries the smallest dimension that would have been adequate.
struct TruncationError : std::runtime_error {
  int minimal_dim;
  TruncationError(const std::string& msg, int minimal)
      : std::runtime_error(msg), minimal_dim(minimal) {}
};

// Pure state on a tensor product of truncated modes. States are kept
// unnormalized; the truncation loss is recorded in norm_deficit so callers
// can audit it instead of having it silently renormalized away.
struct StateVector {
  std::vector<int> mode_dims;
  Vec amplitudes;
  double norm_deficit = 0.0;

  int total_dim() const { return static_cast<int>(amplitudes.size()); }
};

struct DensityOperator {
  std::vector<int> mode_dims;
  Mat matrix;
  double trace_deficit = 0.0;

  int side() const { return static_cast<int>(matrix.rows()); }
};

struct HermitianOperator {
  std::vector<int> mode_dims;
  Mat matrix;

  int side() const { return static_cast<int>(matrix.rows()); }
};

// ---- tail formulas -------------------------------------------------------

/// Poisson tail sum_{n >= dim} e^{-mu} mu^n / n!  (the coherent-state
/// truncation deficit for mu = |alpha|^2).
double poisson_tail(double mu, int dim);

/// Smallest dim whose Poisson tail is at or below `ceiling`.
int minimal_coherent_dim(double mu, double ceiling);

// ---- state / operator constructors ---------------------------------------

/// |alpha> expanded in the number basis; deficit is the analytic Poisson
/// tail. Throws TruncationError if the deficit exceeds `ceiling`
/// (pass +infinity to accept any truncation and just record the deficit).
StateVector coherent_state(Complex alpha, Truncation trunc,
                           double ceiling = 1e-8);

/// Two-mode squeezed state sqrt(1-xi^2) sum_n xi^n |n,n>; deficit xi^(2 dim).
StateVector two_mode_squeezed(double xi, Truncation trunc);

/// Thermal state with mean photon number nbar; geometric diagonal,
/// trace deficit (nbar/(1+nbar))^dim.
DensityOperator thermal_state(double nbar, Truncation trunc);

/// |Phi_d> = sum_k |u_k>|u_k> / sqrt(d).
StateVector maximally_entangled(int d);

/// Entrywise complex conjugation in the computational basis.
StateVector conjugate_state(const StateVector& psi);

/// Flip (swap) operator f = sum_ij |u_i><u_j| (x) |u_j><u_i| on d (x) d.
HermitianOperator flip_operator(int d);

HermitianOperator identity_operator(const std::vector<int>& mode_dims);

// ---- composition ----------------------------------------------------------

StateVector tensor(const StateVector& a, const StateVector& b);
HermitianOperator tensor(const HermitianOperator& a,
                         const HermitianOperator& b);

Complex inner(const StateVector& a, const StateVector& b);

DensityOperator projector(const StateVector& psi);

/// <bra| (x) 1 applied to a bipartite |ket>, contracting the chosen mode.
/// `bra` is single-mode; the result lives on the remaining mode.
StateVector contract_mode(const StateVector& bra, const StateVector& ket,
                          int which_mode);

// ---- partial transpose ----------------------------------------------------

/// Transposition of one tensor factor of a bipartite operator in its
/// computational basis. Exact involution (pure index permutation).
HermitianOperator partial_transpose(const HermitianOperator& op,
                                    int which_mode);
/// PT of a density operator is Hermitian but in general not positive.
HermitianOperator partial_transpose(const DensityOperator& op, int which_mode);

// ---- eigenvalues -----------------------------------------------------------

double hermiticity_residual(const Mat& m);

/// Largest eigenvalue of a Hermitian matrix. Full decomposition up to side
/// 512, Krylov (Lanczos) iteration with full reorthogonalization above.
/// Deterministic for a fixed input.
double max_eigenvalue(const HermitianOperator& op);
double min_eigenvalue(const HermitianOperator& op);

namespace detail {
double max_eigenvalue_dense(const Mat& m);
/// Lanczos with full reorthogonalization and a fixed seed; returns the
/// `howmany` largest eigenvalues in descending order.
std::vector<double> top_eigenvalues_iterative(const Mat& m, int howmany = 1);
}  // namespace detail

// ---- beam splitter ---------------------------------------------------------

/// V |n>|0> = sum_k sqrt(C(n,k)) t^(n-k) r^k |n-k>|k>,
/// t = 1/sqrt(1+kappa^2), r = kappa/sqrt(1+kappa^2).
StateVector beam_splitter_on_vacuum(int n, double kappa, Truncation trunc);

/// Linear extension of the above: maps a single-mode vector sum c_n |n>
/// (paired with vacuum) to sum c_n V|n,0>.
StateVector beam_splitter_extend(const StateVector& psi, double kappa);

}  // namespace qbench
