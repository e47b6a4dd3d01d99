#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <array>
#include <random>

#include "nmrsp/channels.hpp"

using namespace nmrsp;

namespace {

ComplexMatrix random_density(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> n;
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = {n(rng), n(rng)};
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

ComplexMatrix bell_phi_plus() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

}  // namespace

TEST_CASE("hermitian_eigenvalues on simple inputs") {
  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d.diagonal() << 4.0, 1.0, 3.0, 2.0;
  const auto ev = hermitian_eigenvalues(d);
  CHECK(ev == std::vector<double>{1.0, 2.0, 3.0, 4.0});

  ComplexMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const auto evx = hermitian_eigenvalues(x);
  CHECK(evx[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(evx[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("hermitian_eigenvalues rejects non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(hermitian_eigenvalues(m), InvalidInput);
  ComplexMatrix tiny = ComplexMatrix::Identity(2, 2);
  tiny(0, 1) = 1e-11;  // within tolerance, symmetrized
  CHECK_NOTHROW(hermitian_eigenvalues(tiny));
}

TEST_CASE("hermitian_eigenvalues agrees with Jacobi oracle on random 16x16") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    const ComplexMatrix h = random_density(rng, 16) - ComplexMatrix::Identity(16, 16) / 16.0;
    const auto ev = hermitian_eigenvalues(h);
    const auto ref = oracle::hermitian_eigenvalues(to_oracle(h));
    for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(ev[k] - ref[k]) < 1e-12);
    // reconstruction through Eigen's own decomposition
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    const ComplexMatrix rebuilt = es.eigenvectors() * es.eigenvalues().asDiagonal() * es.eigenvectors().adjoint();
    CHECK(max_abs_diff(rebuilt, h) < 1e-9);
  }
}

TEST_CASE("16-dim dephasing Choi state at |kappa| = 0.5 has spectrum {0.25, 0.75, 0...}") {
  const ChoiState choi = choi_state(ChannelFamily{DephasingSpec{0.0, 0.0, 10.0, 1.0}}, 0.0, 4);
  // build the same state with the oracle: Kraus sum on the first factor of 16
  std::vector<oracle::cd> psi(16, 0.0);
  for (int j = 0; j < 4; ++j) psi[j * 4 + j] = 0.5;
  const oracle::Mat choi0 = oracle::outer(psi);
  CHECK(max_abs_diff(from_oracle(choi0), choi.state.matrix()) < 1e-15);

  const oracle::Mat dephased = oracle::apply_kraus_first(oracle::dephasing_kraus(0.5), choi0, 8);
  const auto ref = oracle::hermitian_eigenvalues(dephased);
  const ComplexMatrix lib = dephase_blocks(from_oracle(choi0), 0.5);
  const auto ev = hermitian_eigenvalues(lib);
  for (std::size_t k = 0; k < 14; ++k) {
    CHECK(std::abs(ev[k]) < 1e-10);
    CHECK(std::abs(ref[k]) < 1e-10);
  }
  CHECK(ev[14] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(ev[15] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(ref[14] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(ref[15] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("trace_distance basics") {
  std::mt19937_64 rng(11);
  const DensityMatrix rho(random_density(rng, 4));
  CHECK(trace_distance(rho, rho) == 0.0);

  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  CHECK(trace_distance(DensityMatrix(p0), DensityMatrix(p1)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(trace_distance(DensityMatrix(p0), rho), InvalidInput);
}

TEST_CASE("trace_distance is a metric on random triples") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 50; ++rep) {
    const DensityMatrix a(random_density(rng, 4)), b(random_density(rng, 4)), c(random_density(rng, 4));
    CHECK(trace_distance(a, b) == trace_distance(b, a));
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-10);
    const double ref = 0.5 * oracle::trace_norm(to_oracle(a.matrix() - b.matrix()));
    CHECK(std::abs(trace_distance(a, b) - ref) < 1e-12);
  }
}

TEST_CASE("trace norm equals singular value sum for Hermitian input") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexMatrix h = random_density(rng, 4) - random_density(rng, 4);
    Eigen::JacobiSVD<ComplexMatrix> svd(h);
    CHECK(std::abs(trace_norm(h) - svd.singularValues().sum()) < 1e-10);
  }
}

TEST_CASE("tensor_product layout") {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK(max_abs_diff(tensor_product(i2, i2), ComplexMatrix::Identity(4, 4)) == 0.0);
  ComplexMatrix z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  const ComplexMatrix zi = tensor_product(z, i2);
  CHECK(max_abs_diff(zi, ComplexMatrix(Eigen::Vector4cd(1.0, 1.0, -1.0, -1.0).asDiagonal())) == 0.0);

  // (I + sigma_x (x) sigma_x)/4 entry table written out by hand
  ComplexMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const ComplexMatrix rho = (ComplexMatrix::Identity(4, 4) + tensor_product(x, x)) / 4.0;
  ComplexMatrix hand = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) hand(i, i) = 0.25;
  hand(0, 3) = hand(3, 0) = hand(1, 2) = hand(2, 1) = 0.25;
  CHECK(max_abs_diff(rho, hand) == 0.0);

  std::mt19937_64 rng(3);
  const ComplexMatrix a = random_density(rng, 2), b = random_density(rng, 4);
  CHECK(max_abs_diff(tensor_product(a, b), from_oracle(oracle::kron(to_oracle(a), to_oracle(b)))) < 1e-15);
}

TEST_CASE("partial_trace") {
  const std::array<Eigen::Index, 2> dims{2, 2};
  const std::array<Eigen::Index, 1> first{0}, second{1};
  const DensityMatrix bell(bell_phi_plus());
  CHECK(max_abs_diff(partial_trace(bell, dims, first).matrix(), ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);

  std::mt19937_64 rng(5);
  const ComplexMatrix ra = random_density(rng, 2), rb = random_density(rng, 2);
  const DensityMatrix prod(tensor_product(ra, rb));
  CHECK(max_abs_diff(partial_trace(prod, dims, second).matrix(), rb) < 1e-14);
  CHECK(max_abs_diff(partial_trace(prod, dims, first).matrix(), ra) < 1e-14);

  // dephased 4 (x) 4 Choi state keeps a maximally mixed system marginal
  const std::array<Eigen::Index, 2> d44{4, 4};
  for (double tau : {0.0, 0.1, 0.3, 0.5}) {
    const ChoiState c = choi_state(ChannelFamily{DephasingSpec{0.6, 0.0, 10.0, 1.0}}, tau, 4);
    const DensityMatrix sys = partial_trace(c.state, d44, first);
    CHECK(max_abs_diff(sys.matrix(), ComplexMatrix::Identity(4, 4) / 4.0) < 1e-14);
  }

  const std::array<Eigen::Index, 2> bad{2, 3};
  CHECK_THROWS_AS(partial_trace(bell, bad, first), InvalidInput);
}

TEST_CASE("partial_transpose and negativity") {
  const std::array<Eigen::Index, 2> dims{2, 2};
  const std::array<Eigen::Index, 1> second{1};
  const ComplexMatrix pt = partial_transpose(bell_phi_plus(), dims, second);
  const auto ev = hermitian_eigenvalues(pt);
  CHECK(ev.front() == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(negativity(DensityMatrix(bell_phi_plus()), {2, 2}) == doctest::Approx(0.5).epsilon(1e-14));

  std::mt19937_64 rng(19);
  const ComplexMatrix prod = tensor_product(random_density(rng, 2), random_density(rng, 2));
  const auto ev_prod = hermitian_eigenvalues(prod);
  const auto ev_pt = hermitian_eigenvalues(partial_transpose(prod, dims, second));
  for (int k = 0; k < 4; ++k) CHECK(std::abs(ev_prod[k] - ev_pt[k]) < 1e-14);
  CHECK(negativity(DensityMatrix(prod), {2, 2}) < 1e-12);

  // maximally entangled 4 (x) 4
  ComplexVector psi = ComplexVector::Zero(16);
  for (int j = 0; j < 4; ++j) psi(5 * j) = 0.5;
  const ComplexMatrix me = psi * psi.adjoint();
  const std::array<Eigen::Index, 2> d44{4, 4};
  CHECK(trace_norm(partial_transpose(me, d44, second)) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(negativity(DensityMatrix(me), {4, 4}) == doctest::Approx(1.5).epsilon(1e-13));

  // PPT instance: Werner state below the threshold
  const ComplexMatrix werner = 0.3 * bell_phi_plus() + 0.7 * ComplexMatrix::Identity(4, 4) / 4.0;
  CHECK(negativity(DensityMatrix(werner), {2, 2}) < 1e-12);
}

TEST_CASE("dephased 4 (x) 4 Choi negativity is |kappa| + 1/2") {
  const DephasingSpec spec{0.5, 0.0, 10.0, 1.0};
  for (double tau : {0.0, 0.05, 0.2, 0.31, 0.55}) {
    const ChoiState c = choi_state(ChannelFamily{spec}, tau, 4);
    CHECK(std::abs(negativity(c.state, {4, 4}) - (kappa_abs(spec, tau) + 0.5)) < 1e-12);
  }
}

TEST_CASE("von_neumann_entropy") {
  CHECK(von_neumann_entropy(DensityMatrix(bell_phi_plus())) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(2)) == doctest::Approx(1.0).epsilon(1e-15));
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 0.8;
  m(1, 1) = 0.2;
  CHECK(std::abs(von_neumann_entropy(DensityMatrix(m)) - 0.721928094887362) < 1e-14);
  CHECK(std::abs(binary_entropy(0.2) - oracle::binary_entropy(0.2)) < 1e-15);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
}

TEST_CASE("state validation") {
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix{bad}, InvalidInput);  // trace 2
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, InvalidInput);
  ComplexMatrix nonh = ComplexMatrix::Identity(2, 2) / 2.0;
  nonh(0, 1) = 1e-6;
  CHECK_THROWS_AS(DensityMatrix{nonh}, InvalidInput);

  ComplexVector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(PureState{v}, InvalidInput);
  const PureState s = PureState::normalized(v);
  CHECK(s.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(PureState::normalized(ComplexVector::Zero(2)), InvalidInput);
}
