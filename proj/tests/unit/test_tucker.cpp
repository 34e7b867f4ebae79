#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "oracles.hpp"
#include "rotcb/correlation.hpp"
#include "rotcb/tucker.hpp"

using namespace rotcb;

namespace {

TuckerRotation random_rotation(RandomSource& rng, Index n1, Index n2) {
  TuckerRotation t;
  t.v = oracle::random_unitary(rng, n1);
  t.u = oracle::random_unitary(rng, n2);
  t.lambda.resize(n1 * n2);
  for (Index i = 0; i < t.lambda.size(); ++i) t.lambda(i) = rng.uniform(0.0, 3.0);
  return t;
}

}  // namespace

TEST_CASE("nkp_decompose: exactly separable inputs") {
  RandomSource rng(71);
  for (Index n1 : {2, 3, 4}) {
    for (Index n2 : {2, 3, 4}) {
      const ComplexMatrix b0 = oracle::random_psd(rng, n2);
      const ComplexMatrix c0 = oracle::random_psd(rng, n1);
      const ComplexMatrix r = kron(b0, c0);
      const KronFactors f = nkp_decompose(r, n1, n2);
      CHECK((kron(f.b, f.c) - r).norm() / r.norm() < 1e-10);
      CHECK(f.b.rows() == n2);
      CHECK(f.c.rows() == n1);
      CHECK(std::abs(f.c.trace() - Complex(static_cast<double>(n1), 0.0)) < 1e-12);
      CHECK(is_hermitian(f.b));
      CHECK(is_hermitian(f.c));
      CHECK(hermitian_eig(f.b).values.minCoeff() > -1e-10 * f.b.norm());
      CHECK(hermitian_eig(f.c).values.minCoeff() > -1e-10 * f.c.norm());
    }
  }
}

TEST_CASE("nkp_decompose: identity") {
  const KronFactors f = nkp_decompose(ComplexMatrix::Identity(6, 6), 2, 3);
  CHECK((kron(f.b, f.c) - ComplexMatrix::Identity(6, 6)).norm() < 1e-10);
  CHECK((f.c - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("nkp_decompose: matches the ALS oracle on general PSD inputs") {
  RandomSource rng(72);
  for (int rep = 0; rep < 10; ++rep) {
    const ComplexMatrix r = oracle::random_psd(rng, 4, 0);
    const KronFactors f = nkp_decompose(r, 2, 2);
    const double ours = (r - kron(f.b, f.c)).norm();
    const double als = oracle::als_nkp_residual(r, 2, 2, 20, rng);
    CHECK(std::abs(ours - als) < 1e-8);
  }
  for (int rep = 0; rep < 3; ++rep) {
    const ComplexMatrix r = oracle::random_psd(rng, 6, 2);
    const KronFactors f = nkp_decompose(r, 3, 2);
    CHECK(std::abs((r - kron(f.b, f.c)).norm() - oracle::als_nkp_residual(r, 3, 2, 20, rng)) < 1e-8);
  }
}

TEST_CASE("nkp_decompose: rho is the root of the leading singular value") {
  RandomSource rng(73);
  const ComplexMatrix r = oracle::random_psd(rng, 6);
  const KronFactors f = nkp_decompose(r, 3, 2);
  const double s1 = oracle::leading_singular_value(rearrange(r, 3, 2));
  CHECK(f.rho * f.rho == doctest::Approx(s1).epsilon(1e-10));
  CHECK_THROWS_AS(nkp_decompose(r, 2, 2), Error);
}

TEST_CASE("factors_to_unitaries") {
  KronFactors f;
  f.b = ComplexMatrix::Zero(3, 3);
  f.b.diagonal() << 1.0, 5.0, 3.0;
  f.c = ComplexMatrix::Identity(2, 2);
  const DirectionalBases d = factors_to_unitaries(f);
  ComplexMatrix perm = ComplexMatrix::Zero(3, 3);
  perm(1, 0) = 1.0;
  perm(2, 1) = 1.0;
  perm(0, 2) = 1.0;
  CHECK((d.u - perm).norm() < 1e-14);
  CHECK(d.lambda_b(0) == doctest::Approx(5.0));

  RandomSource rng(74);
  for (int rep = 0; rep < 10; ++rep) {
    const KronFactors g = nkp_decompose(oracle::random_psd(rng, 12), 4, 3);
    const DirectionalBases e = factors_to_unitaries(g);
    CHECK(unitarity_residual(e.u) < 1e-9);
    CHECK(unitarity_residual(e.v) < 1e-9);
    CHECK((e.u * e.lambda_b.cast<Complex>().asDiagonal() * e.u.adjoint() - g.b).norm() < 1e-9 * g.b.norm());
    CHECK((e.v * e.lambda_c.cast<Complex>().asDiagonal() * e.v.adjoint() - g.c).norm() < 1e-9 * g.c.norm());
  }
}

TEST_CASE("optimal_core: closed forms and trace conservation") {
  RandomSource rng(75);
  const ComplexMatrix u = oracle::random_unitary(rng, 3);
  const ComplexMatrix v = oracle::random_unitary(rng, 2);
  CHECK((optimal_core(ComplexMatrix::Identity(6, 6), u, v) - RealVector::Ones(6)).norm() < 1e-12);

  ComplexMatrix d = ComplexMatrix::Zero(6, 6);
  d.diagonal() << 4.0, 3.0, 2.0, 1.0, 0.5, 0.0;
  const RealVector core = optimal_core(d, ComplexMatrix::Identity(3, 3), ComplexMatrix::Identity(2, 2));
  CHECK((core - d.diagonal().real()).norm() == 0.0);

  const ComplexMatrix r = oracle::random_psd(rng, 6);
  CHECK(optimal_core(r, u, v).sum() == doctest::Approx(r.trace().real()).epsilon(1e-10));
  CHECK_THROWS_AS(optimal_core(r, u, u), Error);
}

TEST_CASE("optimal_core: no perturbation of the core lowers the objective") {
  RandomSource rng(76);
  for (int inst = 0; inst < 10; ++inst) {
    const ComplexMatrix r = oracle::random_psd(rng, 4);
    const TuckerRotation t = tucker_pipeline(r, 2, 2);
    const double base = oracle::tucker_objective(r, t.u, t.v, t.lambda);
    for (int p = 0; p < 100; ++p) {
      RealVector eps(4);
      for (Index i = 0; i < 4; ++i) eps(i) = rng.normal();
      eps *= 1e-3 / eps.norm();
      const RealVector perturbed = (t.lambda + eps).cwiseMax(0.0);
      CHECK(oracle::tucker_objective(r, t.u, t.v, perturbed) >= base - 1e-12);
    }
  }
}

TEST_CASE("build_rotation and rotation_sqrt") {
  TuckerRotation id{ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3), RealVector::Ones(6)};
  CHECK((build_rotation(id) - ComplexMatrix::Identity(6, 6)).norm() < 1e-15);

  RandomSource rng(77);
  const TuckerRotation t = random_rotation(rng, 3, 2);
  const ComplexMatrix r = build_rotation(t);
  RealVector sorted = t.lambda;
  std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<>());
  CHECK((hermitian_eig(r).values - sorted).norm() < 1e-12);
  const ComplexMatrix s = rotation_sqrt(t);
  CHECK((s * s - r).norm() < 1e-10 * r.norm());
  CHECK((s - psd_sqrt(r)).norm() < 1e-10 * s.norm());
  CHECK(is_hermitian(r));
}

TEST_CASE("mismatch") {
  RandomSource rng(78);
  const TuckerRotation t = random_rotation(rng, 2, 3);
  const ComplexMatrix r = build_rotation(t);
  CHECK(mismatch(r, t).absolute < 1e-10);
  TuckerRotation id{ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2), RealVector::Ones(4)};
  CHECK(mismatch(ComplexMatrix::Identity(4, 4), id).absolute == 0.0);
  const ComplexMatrix other = oracle::random_psd(rng, 6);
  const Mismatch m = mismatch(other, t);
  CHECK(m.relative == doctest::Approx(m.absolute / other.norm()));
  CHECK_THROWS_AS(mismatch(ComplexMatrix::Identity(4, 4), t), Error);
}

TEST_CASE("mismatch: URA correlations fit better than UCCA ones of the same size") {
  ChannelProfile profile;
  profile.n_clusters = 1;
  const auto ura = ArrayGeometry::ura(4, 4);
  const auto ucca = ArrayGeometry::ucca(4, 4);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RandomSource rng(seed);
    const UserGeometry user = draw_user(rng, profile);
    const ComplexMatrix r_ura = correlation_expected(ura, profile, user).r;
    const ComplexMatrix r_ucca = correlation_expected(ucca, profile, user).r;
    CHECK(mismatch(r_ura, tucker_pipeline(r_ura, 4, 4)).relative <
          mismatch(r_ucca, tucker_pipeline(r_ucca, 4, 4)).relative);
  }
}

TEST_CASE("tucker_pipeline: exact cases") {
  RandomSource rng(79);
  const ComplexMatrix sep = kron(oracle::random_psd(rng, 3), oracle::random_psd(rng, 2));
  CHECK(mismatch(sep, tucker_pipeline(sep, 2, 3)).relative < 1e-9);

  const TuckerRotation t0 = random_rotation(rng, 4, 4);
  const ComplexMatrix r = build_rotation(t0);
  const TuckerRotation t = tucker_pipeline(r, 4, 4);
  CHECK(mismatch(r, t).relative < 1e-9);
  CHECK_NOTHROW(t.validate());
}

TEST_CASE("tucker_pipeline: the core refinement never hurts") {
  RandomSource rng(80);
  for (int inst = 0; inst < 100; ++inst) {
    const Index n1 = 2 + inst % 3;
    const Index n2 = 2 + (inst / 3) % 3;
    const ComplexMatrix r = oracle::random_psd(rng, n1 * n2);
    const TuckerRotation refined = tucker_pipeline(r, n1, n2);
    const DirectionalBases bases = factors_to_unitaries(nkp_decompose(r, n1, n2));
    const TuckerRotation structured{bases.v, bases.u, structured_core(bases)};
    CHECK(mismatch(r, refined).absolute <= mismatch(r, structured).absolute + 1e-12);
  }
}

TEST_CASE("structured_core reproduces B kron C") {
  RandomSource rng(81);
  const ComplexMatrix r = oracle::random_psd(rng, 6);
  const KronFactors f = nkp_decompose(r, 2, 3);
  const DirectionalBases bases = factors_to_unitaries(f);
  const TuckerRotation t{bases.v, bases.u, structured_core(bases)};
  const ComplexMatrix bc = kron(f.b, f.c);
  // Equal up to eigenvalues of B or C clamped at zero.
  CHECK((build_rotation(t) - clamp_psd(bc)).norm() < 1e-9 * bc.norm() + 1e-9);
}

TEST_CASE("tucker_pipeline is deterministic") {
  RandomSource rng(82);
  const ComplexMatrix r = oracle::random_psd(rng, 9);
  const TuckerRotation a = tucker_pipeline(r, 3, 3);
  const TuckerRotation b = tucker_pipeline(r, 3, 3);
  CHECK(a.v == b.v);
  CHECK(a.u == b.u);
  CHECK(a.lambda == b.lambda);
}

TEST_CASE("parameter counts") {
  TuckerRotation t{ComplexMatrix::Identity(16, 16), ComplexMatrix::Identity(16, 16), RealVector::Ones(256)};
  CHECK(parameter_count(t) == 1280);
  CHECK(dense_parameter_count(256) == 131072);
}

TEST_CASE("TuckerRotation::validate") {
  TuckerRotation t{ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2), RealVector::Ones(4)};
  CHECK_NOTHROW(t.validate());
  t.lambda(0) = -1.0;
  CHECK_THROWS_AS(t.validate(), Error);
  t.lambda(0) = 1.0;
  t.v(0, 0) = 2.0;
  CHECK_THROWS_AS(t.validate(), Error);
  t.v = ComplexMatrix::Identity(2, 2);
  t.lambda = RealVector::Ones(3);
  CHECK_THROWS_AS(t.validate(), Error);
}
