#include <doctest.h>

#include <cmath>
#include <random>

#include "qbench/channels.hpp"
#include "qbench/cv_benchmark.hpp"

using namespace qbench;
using doctest::Approx;

namespace {

Mat random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = Complex(nd(rng), nd(rng));
  return Eigen::HouseholderQR<Mat>(g).householderQ();
}

}  // namespace

TEST_CASE("identity channel leaves states untouched") {
  DensityOperator rho = projector(coherent_state(Complex(0.4, -0.3), {12}));
  DensityOperator out = apply(identity_channel(12), rho);
  CHECK((out.matrix - rho.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("loss channel attenuates coherent states") {
  Channel loss = loss_channel(0.36, {30});
  DensityOperator out = apply(loss, projector(coherent_state(1.0, {30})));
  StateVector target = coherent_state(0.6, {30});
  const double fid =
      (target.amplitudes.adjoint() * out.matrix * target.amplitudes)(0).real();
  CHECK(fid > 1.0 - 1e-10);
  CHECK(std::abs(out.matrix.trace().real() - 1.0) < 1e-10);
}

TEST_CASE("loss channel: edge transmissivities and completeness") {
  Channel full = loss_channel(1.0, {10});
  CHECK(full.kraus.size() == 1);
  CHECK((full.kraus[0].dense() - Mat::Identity(10, 10)).norm() == 0.0);

  Channel dead = loss_channel(0.0, {10});
  DensityOperator out = apply(dead, thermal_state(1.0, {10}));
  CHECK(std::abs(out.matrix(0, 0).real() -
                 out.matrix.trace().real()) < 1e-12);

  CHECK(loss_channel(0.37, {30}).completeness_deficit < 1e-12);
  CHECK_THROWS_AS(loss_channel(1.2, {5}), std::invalid_argument);
}

TEST_CASE("loss channels compose multiplicatively") {
  DensityOperator rho = projector(coherent_state(1.2, {25}));
  DensityOperator two_step =
      apply(loss_channel(0.9, {25}), apply(loss_channel(0.8, {25}), rho));
  DensityOperator one_step = apply(loss_channel(0.72, {25}), rho);
  CHECK((two_step.matrix - one_step.matrix).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("channel application preserves trace and positivity budgets") {
  std::mt19937_64 rng(3);
  Channel loss = loss_channel(0.5, {15});
  DensityOperator rho = projector(coherent_state(Complex(0.9, 0.4), {15}));
  DensityOperator out = apply(loss, rho);
  CHECK(out.matrix.trace().real() <=
        1.0 + loss.completeness_deficit + 1e-12);
  HermitianOperator h{out.mode_dims, out.matrix};
  CHECK(min_eigenvalue(h) > -1e-10);
}

TEST_CASE("heterodyne channel with zero gain prepares vacuum") {
  Channel ch = heterodyne_mp_channel(0.0, {12}, {16, 14, 1.0});
  StateVector in = coherent_state(1.0, {12});
  StateVector vac = coherent_state(0.0, {ch.output_dim});
  CHECK(pure_fidelity_through(ch, in, vac) > 1.0 - 1e-6);
  CHECK(ch.completeness_deficit < 1e-6);
}

TEST_CASE("heterodyne channel attains the classical limit") {
  GaussianTask task{1.0, 1.0, 1.0};
  Truncation tr{20};
  Channel ch = heterodyne_mp_channel(0.5, tr);
  const double f = average_fidelity_cv(ch, task, {32, 32, 1.0}, tr);
  CHECK(std::abs(f - 2.0 / 3.0) < 1e-3);
}

TEST_CASE("heterodyne channel rejects too-coarse quadrature") {
  CHECK_THROWS_WITH_AS(heterodyne_mp_channel(0.5, {24}, {4, 4, 1.0}),
                       doctest::Contains("too coarse"), QuadratureError);
}

TEST_CASE("heterodyne Choi state is PPT") {
  Truncation tr{12};
  Channel ch = heterodyne_mp_channel(0.5, tr, {16, 14, 1.0});
  DensityOperator rho = choi_state(ch, two_mode_squeezed(0.6, tr));
  HermitianOperator pt = partial_transpose(rho, 1);
  CHECK(min_eigenvalue(pt) > -1e-6);
}

TEST_CASE("lossy Choi state over a squeezed entangler is NPT") {
  Truncation tr{25};
  DensityOperator rho =
      choi_state(loss_channel(0.5, tr), two_mode_squeezed(0.6, tr));
  HermitianOperator pt = partial_transpose(rho, 1);
  CHECK(min_eigenvalue(pt) < -1e-3);
}

TEST_CASE("basis measure-and-prepare dephases") {
  Mat plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  DensityOperator rho{{2}, plus};
  DensityOperator out = apply(basis_mp_channel(Mat::Identity(2, 2), 2), rho);
  CHECK((out.matrix - Mat::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff() <
        1e-15);
}

TEST_CASE("basis measure-and-prepare Choi state is exactly separable") {
  Channel ch = basis_mp_channel(Mat::Identity(2, 2), 2);
  DensityOperator rho = choi_state(ch, maximally_entangled(2));
  Mat expect = Mat::Zero(4, 4);
  expect(0, 0) = 0.5;  // |u_0 u_0>
  expect(3, 3) = 0.5;  // |u_1 u_1>
  CHECK((rho.matrix - expect).cwiseAbs().maxCoeff() < 1e-15);
  HermitianOperator pt = partial_transpose(rho, 1);
  CHECK(min_eigenvalue(pt) > -1e-12);
}

TEST_CASE("unitary channel conjugates") {
  std::mt19937_64 rng(17);
  Mat u = random_unitary(4, rng);
  Mat h = Mat::Random(4, 4);
  Mat rho_m = h * h.adjoint();
  rho_m /= rho_m.trace();
  DensityOperator rho{{4}, rho_m};
  DensityOperator out = apply(unitary_channel(u, 4), rho);
  CHECK((out.matrix - u * rho_m * u.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

  Mat not_unitary = Mat::Identity(3, 3) * 2.0;
  CHECK_THROWS_AS(unitary_channel(not_unitary, 3), std::invalid_argument);
  CHECK_THROWS_AS(basis_mp_channel(not_unitary, 3), std::invalid_argument);
}

TEST_CASE("choi state of the identity is the entangler projector") {
  DensityOperator rho =
      choi_state(identity_channel(3), maximally_entangled(3));
  DensityOperator expect = projector(maximally_entangled(3));
  CHECK((rho.matrix - expect.matrix).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(choi_state(identity_channel(4), maximally_entangled(3)),
                  std::invalid_argument);
}

TEST_CASE("choi vectors reconstruct the choi state") {
  Truncation tr{10};
  Channel loss = loss_channel(0.6, tr);
  StateVector ent = two_mode_squeezed(0.4, tr);
  DensityOperator direct = choi_state(loss, ent);
  Mat rebuilt = Mat::Zero(direct.side(), direct.side());
  for (const auto& [w, phi] : choi_vectors(loss, ent))
    rebuilt += w * (phi * phi.adjoint());
  CHECK((rebuilt - direct.matrix).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("channel application on one mode of a composite state") {
  Truncation tr{8};
  StateVector ent = two_mode_squeezed(0.3, tr);
  DensityOperator joint = projector(ent);
  DensityOperator out = apply(loss_channel(0.7, tr), joint, 0);
  CHECK(out.mode_dims == std::vector<int>{8, 8});
  // trace preserved within the entangler truncation deficit xi^(2 dim)
  CHECK(std::abs(out.matrix.trace().real() - 1.0) < 1e-8);
  // applying on the wrong mode dimension throws
  CHECK_THROWS_AS(apply(loss_channel(0.7, {5}), joint, 0),
                  std::invalid_argument);
}
