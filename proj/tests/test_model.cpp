#include <cmath>

#include <gtest/gtest.h>

#include "hierlyap/errors.hpp"
#include "hierlyap/example.hpp"
#include "hierlyap/model.hpp"
#include "support.hpp"

using namespace hierlyap;
using namespace hierlyap::model;
using hierlyap::test::constant_coupling;
using hierlyap::test::scalar_subsystem;

namespace {

TEST(Polynomial, EvaluatesVectorMap) {
  // f(x) = (2 x1 x2, -x1^3 + 0.5 x2^2)
  const Polynomial f(2, {{2.0, {1, 1}, 0}, {-1.0, {3, 0}, 1}, {0.5, {0, 2}, 1}});
  const Vector v = f.evaluate(Vector{2.0, -1.0});
  EXPECT_DOUBLE_EQ(v[0], -4.0);
  EXPECT_DOUBLE_EQ(v[1], -8.0 + 0.5);
  EXPECT_THROW(f.evaluate(Vector{1.0}), DimensionError);
}

TEST(Polynomial, RejectsInvalidTerms) {
  EXPECT_THROW(Polynomial(1, {{1.0, {1}, 0}}), ModelError);       // linear
  EXPECT_THROW(Polynomial(1, {{1.0, {0}, 0}}), ModelError);       // constant
  EXPECT_THROW(Polynomial(2, {{1.0, {2}, 0}}), ModelError);       // wrong arity
  EXPECT_THROW(Polynomial(1, {{1.0, {2}, 1}}), ModelError);       // output out of range
  EXPECT_THROW(Polynomial(1, {{NAN, {2}, 0}}), ModelError);
  EXPECT_NO_THROW(Polynomial(2, {{1.0, {1, 1}, 1}}));
}

TEST(Polynomial, ScalarMonomialDetection) {
  const auto m = Polynomial(1, {{-0.4, {3}, 0}}).as_scalar_monomial();
  ASSERT_TRUE(m);
  EXPECT_EQ(m->coeff, -0.4);
  EXPECT_EQ(m->degree, 3u);
  EXPECT_FALSE(Polynomial(1, {{1.0, {2}, 0}, {1.0, {3}, 0}}).as_scalar_monomial());
  EXPECT_FALSE(Polynomial(2, {{1.0, {2, 0}, 0}}).as_scalar_monomial());
}

TEST(Network, RingNeighborhoodsHaveTwoMembers) {
  const Network net = example::ring_config().network;
  ASSERT_EQ(net.size(), 20u);
  EXPECT_EQ(net.couplings().size(), 40u);
  for (std::size_t k = 0; k < 20; ++k) {
    const auto& nk = net.neighbors(k);
    ASSERT_EQ(nk.size(), 2u) << k;
    std::vector<std::size_t> expect{(k + 19) % 20, (k + 1) % 20};
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(nk, expect);
  }
  EXPECT_TRUE(net.coupling_index(0, 1));
  EXPECT_FALSE(net.coupling_index(0, 5));
}

TEST(Network, RingDynamicsMatchHandFormula) {
  const io::NetworkConfig cfg = example::ring_config();
  const Vector& x = *cfg.initial_state;
  const Vector dx = eval_dynamics(cfg.network, x, 0.3);
  for (std::size_t k = 0; k < 20; ++k) {
    const std::size_t next = (k + 1) % 20, prev = (k + 19) % 20;
    const double expect = -10.0 * x[k] + example::ring_a(k + 1) * x[k] * x[k] + 1.9 * std::sin(x[k]) * x[next] -
                          1.8 * std::cos(x[prev]) * x[prev];
    EXPECT_NEAR(dx[k], expect, 1e-13) << k;
  }
}

TEST(Network, RingEquilibriumResidualVanishes) {
  const Network net = example::ring_config().network;
  const EquilibriumResidual r = equilibrium_residual(net, net.equilibrium());
  EXPECT_TRUE(r.nominal_only);
  for (double v : r.residuals) EXPECT_EQ(v, 0.0);
}

TEST(Network, HeterogeneousBlocks) {
  Subsystem two;
  two.A = Matrix{{-1, 1}, {0, -2}};
  two.B = {0, 1};
  two.C = {1, 0};
  two.f = Polynomial(2, {{1.0, {0, 2}, 0}});
  two.x_star = {0, 0};
  two.d = 1.0;
  const Network net = build_network({scalar_subsystem(-3, 1), two}, {constant_coupling(1, 0, 0.5),
                                                                      constant_coupling(0, 1, -0.25)});
  EXPECT_EQ(net.state_dim(), 3u);
  EXPECT_EQ(net.offset(1), 1u);
  const Vector x{1.0, 2.0, 3.0};
  const Vector dx = eval_dynamics(net, x, 0.0);
  EXPECT_DOUBLE_EQ(dx[0], -3.0 + 0.5 * 2.0);
  EXPECT_DOUBLE_EQ(dx[1], -2.0 + 3.0 + 9.0);
  EXPECT_DOUBLE_EQ(dx[2], -6.0 - 0.25 * 1.0);
}

TEST(Network, ValidationErrors) {
  const auto s = scalar_subsystem(-1, 1);
  EXPECT_THROW(build_network({s}, {constant_coupling(0, 1, 0.1)}), ModelError);
  model::Coupling loop{0, 0, Constant{0.1}, 0.1, false};
  EXPECT_THROW(build_network({s}, {loop}), ModelError);
  loop.self_loop = true;
  EXPECT_NO_THROW(build_network({s}, {loop}));
  EXPECT_THROW(build_network({s, s}, {constant_coupling(0, 1, 0.1), constant_coupling(0, 1, 0.2)}), ModelError);
  model::Coupling too_big{0, 1, Constant{0.5}, 0.4, false};
  EXPECT_THROW(build_network({s, s}, {too_big}), ModelError);
  model::Coupling bad_state{0, 1, SinOfState{0.1, 3, 0, 0.0}, 0.1, false};
  EXPECT_THROW(build_network({s, s}, {bad_state}), ModelError);

  auto bad = s;
  bad.B = {1, 2};
  EXPECT_THROW(build_network({bad}, {}), ModelError);
  bad = s;
  bad.d = 0.0;
  EXPECT_THROW(build_network({bad}, {}), ModelError);
  bad = s;
  bad.P = Matrix{{-1.0}};
  EXPECT_THROW(build_network({bad}, {}), ModelError);
  bad = s;
  bad.A = Matrix(1, 2);
  EXPECT_THROW(build_network({bad}, {}), ModelError);
}

TEST(Network, WithoutCouplingsDropsOnlyTheListed) {
  const Network net = example::ring_config().network;
  const std::vector<std::size_t> drop{0, 5};
  const Network reduced = net.without_couplings(drop);
  EXPECT_EQ(reduced.couplings().size(), 38u);
  EXPECT_EQ(reduced.subsystems(), net.subsystems());
  EXPECT_EQ(reduced.couplings()[0], net.couplings()[1]);
}


TEST(Network, OneWayCouplingNeighborhoods) {
  const Network net = build_network({scalar_subsystem(-1, 1), scalar_subsystem(-1, 1)}, {constant_coupling(0, 1, 0.4)});
  EXPECT_TRUE(net.neighbors(0).empty());
  EXPECT_EQ(net.neighbors(1), (std::vector<std::size_t>{0}));
}

TEST(Network, RingCouplingOutOfRange) {
  io::NetworkConfig cfg = example::ring_config();
  std::vector<Coupling> cps = cfg.network.couplings();
  cps.push_back(constant_coupling(20, 0, 0.1));
  EXPECT_THROW(build_network(cfg.network.subsystems(), cps), ModelError);
}

TEST(Coupling, FormValues) {
  const Network net = build_network({scalar_subsystem(-1, 1), scalar_subsystem(-1, 1)}, {});
  const Coupling c{0, 1, Constant{0.7}, 0.7, false};
  EXPECT_EQ(eval_coupling(net, c, Vector{3.0, -2.0}, 5.0), 0.7);
  const Coupling s{1, 0, SinOfState{1.9, 0, 0, 0.0}, 1.9, false};
  EXPECT_DOUBLE_EQ(eval_coupling(net, s, Vector{M_PI / 2, 0.0}, 0.0), 1.9);
  const Coupling k{0, 1, CosOfState{-1.8, 0, 0, 0.0}, 1.8, false};
  EXPECT_DOUBLE_EQ(eval_coupling(net, k, Vector{0.0, 1.0}, 0.0), -1.8);
  const Coupling ph{0, 1, SinOfState{2.0, 1, 0, M_PI / 6}, 2.0, false};
  EXPECT_NEAR(eval_coupling(net, ph, Vector{0.0, 0.0}, 0.0), 1.0, 1e-15);
}

TEST(Network, ScalarDynamicsFixedCases) {
  const Network one = build_network({scalar_subsystem(-10, 6, {{0.9, {2}, 0}})}, {});
  EXPECT_DOUBLE_EQ(eval_dynamics(one, Vector{1.0}, 0.0)[0], -9.1);
  for (double v : eval_dynamics(example::ring_config().network, Vector(20, 0.0), 0.0)) EXPECT_EQ(v, 0.0);
}

// Residual at a shifted point equals |g(x)| for g(x) = -10 x + 0.9 x^2, whose
// nonzero root 100/9 a bisection search recovers.
TEST(Network, PerturbedEquilibriumResidual) {
  const Network one = build_network({scalar_subsystem(-10, 6, {{0.9, {2}, 0}})}, {});
  auto g = [](double x) { return -10.0 * x + 0.9 * x * x; };
  EXPECT_DOUBLE_EQ(equilibrium_residual(one, Vector{0.1}).residuals[0], std::fabs(g(0.1)));
  EXPECT_FALSE(equilibrium_residual(one, Vector{0.1}).nominal_only);
  double lo = 5.0, hi = 20.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(lo, 100.0 / 9.0, 1e-12);
  EXPECT_LT(equilibrium_residual(one, Vector{lo}).residuals[0], 1e-12);
}

}  // namespace
