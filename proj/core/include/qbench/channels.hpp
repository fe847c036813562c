#pragma once

// Quantum channels as weighted generalized Kraus families, plus the channel
// constructors used by the benchmark (identity, loss, finite-d unitary and
// measure-and-prepare families) and Choi-state construction.

#include "qbench/fockla.hpp"
#include "qbench/quadrature.hpp"

#include <utility>
#include <vector>

namespace qbench {

struct KrausTerm {
  double weight = 1.0;
  Mat op;  // dense form; empty when rank-one factors are set
  bool rank_one = false;
  Vec left, right;  // K = left * right^dagger when rank_one

  Mat dense() const { return rank_one ? Mat(left * right.adjoint()) : op; }
  Vec apply_vec(const Vec& v) const {
    return rank_one ? Vec(left * right.dot(v)) : Vec(op * v);
  }
  int rows() const { return rank_one ? static_cast<int>(left.size())
                                     : static_cast<int>(op.rows()); }
  int cols() const { return rank_one ? static_cast<int>(right.size())
                                     : static_cast<int>(op.cols()); }
};

struct Channel {
  int input_dim = 0;
  int output_dim = 0;
  std::vector<KrausTerm> kraus;
  double completeness_deficit = 0.0;
};

/// max |sum_j w_j K_j^dag K_j - 1|.
double completeness_deficit_of(const std::vector<KrausTerm>& kraus, int input_dim);

Channel identity_channel(int d);

/// Standard attenuation model with transmissivity eta; Kraus A_k with
/// <n-k| A_k |n> = sqrt(C(n,k) eta^(n-k) (1-eta)^k).
Channel loss_channel(double eta, Truncation trunc);

/// Node counts making the discretized heterodyne resolution of identity
/// exact on the truncated space (radial >= dim/2, angular >= dim).
QuadratureSpec heterodyne_default_spec(Truncation trunc);

/// Measure-and-prepare channel: heterodyne the input and prepare |g alpha>.
/// Discretized on plane-quadrature nodes with the e^{-|alpha|^2} POVM weight
/// absorbed into the term weights. Throws QuadratureError ("quadrature too
/// coarse") when the completeness deficit exceeds `deficit_threshold`.
Channel heterodyne_mp_channel(double gain, Truncation trunc,
                              const QuadratureSpec& spec,
                              double deficit_threshold = 1e-6);
Channel heterodyne_mp_channel(double gain, Truncation trunc);

/// Measure in the basis U|u_j> and re-prepare the outcome state.
Channel basis_mp_channel(const Mat& u, int d);
Channel unitary_channel(const Mat& u, int d);

/// rho -> sum_j w_j (K_j (x) 1) rho (K_j (x) 1)^dag acting on the addressed
/// mode of a (possibly multi-mode) density operator.
DensityOperator apply(const Channel& ch, const DensityOperator& rho, int on_mode = 0);

/// (E (x) I)(|e><e|) for a bipartite entangler whose first mode matches the
/// channel input.
DensityOperator choi_state(const Channel& ch, const StateVector& entangler);

/// Pure decomposition of the Choi state: weighted vectors (K_j (x) 1)|e>.
/// Avoids materializing the dense matrix for large truncations.
std::vector<std::pair<double, Vec>> choi_vectors(const Channel& ch,
                                                 const StateVector& entangler);

/// <target| E(|in><in|) |target> = sum_j w_j |<target|K_j|in>|^2.
double pure_fidelity_through(const Channel& ch, const StateVector& in,
                             const StateVector& target);

}  // namespace qbench
