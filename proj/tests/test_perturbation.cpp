// Copyright 2026 The vdpsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vdpsync/error.hpp"
#include "vdpsync/perturbation.hpp"
#include "vdpsync/steady_state.hpp"

using namespace vdpsync;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

SystemParams weak(double coupling, double drive) {
  SystemParams p;
  p.gamma2 = 10.0;
  p.coupling = coupling;
  p.drive = drive;
  return p;
}

double sup_error(const PhaseDistribution& a, const PhaseDistribution& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) {
    worst = std::max(worst, std::abs(a.values[j] - b.values[j]));
  }
  return worst;
}

PhaseDistribution full_relative(const SystemParams& p) {
  return relative_phase_distribution(solve_steady_state(build_liouvillian(p)).rho);
}

CoherenceBlock random_block(int order, int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CoherenceBlock b;
  b.order = order;
  b.entries.resize(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) b.entries(i, j) = Complex(g(rng), g(rng));
  }
  return b;
}

}  // namespace

TEST_CASE("decay rate equals the Lindblad diagonal") {
  // -Re of the diagonal of the undriven, uncoupled generator at the
  // coherence |n, m+p><n+p, m|.
  SystemParams p;
  p.gamma1 = 1.3;
  p.gamma2 = 4.0;
  p.delta1 = 0.4;
  p.delta2 = -0.9;
  p.trunc = Truncation::uniform(5);
  const DenseMatrix l = oracle::generator(p);
  const Index d = p.trunc.dim();
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pick(0, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const int order = 1 + pick(rng) % 3;
    std::uniform_int_distribution<int> idx(0, 4 - order);  // keep n+p, m+p below the top level
    const int n = idx(rng), m = idx(rng);
    const Index row = p.trunc.index(n, m + order), col = p.trunc.index(n + order, m);
    const Complex diag = l(col * d + row, col * d + row);
    CHECK(decay_rate(p, n, m, order) == doctest::Approx(-diag.real()).epsilon(1e-13));
    const Complex lambda = recursion_eigenvalue(p, n, m, order);
    CHECK(std::abs(lambda - diag) < 1e-12);
    CHECK(lambda.real() < 0.0);
  }
}

TEST_CASE("printed rate formula and lambda at the origin") {
  SystemParams p;
  p.gamma1 = 1.0;
  p.gamma2 = 10.0;
  p.delta1 = 0.5;
  p.delta2 = 2.0;
  CHECK(printed_decay_rate(p, 1, 2, 1) == doctest::Approx(6.0 + 10.0 * (0 + 2 + 2 + 6)));
  CHECK(decay_rate(p, 0, 0, 1) == doctest::Approx(3.0));
  CHECK(printed_decay_rate(p, 0, 0, 1) == doctest::Approx(3.0));
  const Complex lambda = recursion_eigenvalue(p, 0, 0, 1);
  CHECK(std::abs(lambda - Complex(-3.0, 0.5 - 2.0)) < 1e-15);
}

TEST_CASE("recursion sources reduce to the first- and second-order patterns") {
  std::mt19937_64 rng(23);
  SystemParams p = weak(0.3, 0.2);
  p.trunc = Truncation::uniform(4);
  const CoherenceBlock b0 = random_block(0, 5, 5, rng);
  const CoherenceBlock b1 = random_block(1, 4, 4, rng);
  auto at = [](const CoherenceBlock& b, int n, int m) { return b.at(n, m); };
  for (int n = 0; n < 4; ++n) {
    for (int m = 0; m < 4; ++m) {
      const double v = p.coupling, e = p.drive;
      const auto c1 = recursion_coefficients(p, b0, n, m);
      const Complex nu1 = kI * e * std::sqrt(n + 1.0) * (at(b0, n + 1, m) - at(b0, n, m));
      const Complex nu2 =
          kI * v * std::sqrt((n + 1.0) * (m + 1.0)) * (at(b0, n + 1, m) - at(b0, n, m + 1));
      CHECK(std::abs(c1.nu1 - nu1) < 1e-14);
      CHECK(std::abs(c1.nu2 - nu2) < 1e-14);
      if (n < 3 && m < 3) {
        const auto c2 = recursion_coefficients(p, b1, n, m);
        const Complex mu1 = kI * e * (std::sqrt(n + 1.0) * at(b1, n + 1, m) - std::sqrt(n + 2.0) * at(b1, n, m));
        const Complex mu2 = kI * v * (std::sqrt((n + 1.0) * (m + 2.0)) * at(b1, n + 1, m) -
                                      std::sqrt((n + 2.0) * (m + 1.0)) * at(b1, n, m + 1));
        CHECK(std::abs(c2.nu1 - mu1) < 1e-14);
        CHECK(std::abs(c2.nu2 - mu2) < 1e-14);
      }
    }
  }
}

TEST_CASE("closed-form correction") {
  SystemParams p = weak(0.05, 0.0);
  p.delta1 = 0.3;
  const CoherenceBlock b0 = zeroth_order(p);
  const CoherenceBlock b1 = closed_form_correction(p, b0);
  CHECK(b1.order == 1);
  for (int n = 0; n < b1.entries.rows(); ++n) {
    for (int m = 0; m < b1.entries.cols(); ++m) {
      const auto c = recursion_coefficients(p, b0, n, m);
      CHECK(std::abs(b1.entries(n, m) - (c.nu1 + c.nu2) / c.lambda) < 1e-16);
      CHECK(std::abs(b1.entries(n, m) + b1.entries(m, n)) < 1e-12);
    }
  }
  CHECK(closed_form_correction(p, b1).order == 2);
}

TEST_CASE("zeroth order is the uncoupled van der Pol state") {
  SystemParams p = weak(0.3, 0.2);
  const CoherenceBlock b0 = zeroth_order(p);
  const Eigen::VectorXd pop = oracle::birth_death(1.0, 10.0, 5);
  double worst = 0.0;
  for (int n = 0; n <= 5; ++n) {
    for (int m = 0; m <= 5; ++m) worst = std::max(worst, std::abs(b0.at(n, m) - pop(n) * pop(m)));
  }
  CHECK(worst < 1e-10);
  CHECK(std::abs(b0.sum() - 1.0) < 1e-12);
  CHECK(b0.entries.imag().cwiseAbs().maxCoeff() < 1e-14);
  CHECK(b0.entries.real().minCoeff() >= 0.0);

  p.gamma2 = 0.0;
  CHECK_THROWS_AS(zeroth_order(p), Error);
  CHECK_THROWS_AS(PerturbationSeries(p, 2), Error);
}

TEST_CASE("series terms satisfy their defining equations") {
  SystemParams p = weak(0.07, 0.04);
  p.delta2 = 0.6;
  p.trunc = Truncation::uniform(4);
  const PerturbationSeries series(p, 3);
  SystemParams bare = p;
  bare.coupling = bare.drive = 0.0;
  const Liouvillian l0 = build_liouvillian(bare);
  const SparseMatrix lv = hamiltonian_superoperator(coupling_operator(p.trunc));
  const SparseMatrix le = hamiltonian_superoperator(drive_operator(p.trunc));
  CHECK(apply(l0, series.term(0, 0)).norm() < 1e-12);
  CHECK(std::abs(series.term(0, 0).trace() - 1.0) < 1e-12);
  for (int order = 1; order <= 3; ++order) {
    for (int j = 0; j <= order; ++j) {
      const int k = order - j;
      StateVector lhs = build_liouvillian(bare).matrix() * vectorize(series.term(j, k));
      if (j > 0) lhs += lv * vectorize(series.term(j - 1, k));
      if (k > 0) lhs += le * vectorize(series.term(j, k - 1));
      CHECK(lhs.norm() < 1e-11);
      CHECK(std::abs(series.term(j, k).trace()) < 1e-12);
    }
  }
  CHECK_THROWS_AS(series.term(2, 2), Error);
  CHECK_THROWS_AS(PerturbationSeries(p, 4), Error);
}

TEST_CASE("first-order block is antisymmetric without drive") {
  const PerturbationSeries series(weak(0.05, 0.0), 1);
  const CoherenceBlock b = coherence_block(series.correction(1), series.params().trunc, 1);
  CHECK((b.entries + b.entries.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(b.entries.cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("p = 1 coherences against the full solver") {
  const SystemParams p = weak(0.05, 0.05);
  const DenseMatrix full = solve_steady_state(build_liouvillian(p)).rho.matrix();
  const PerturbationSeries series(p, 3);
  const CoherenceBlock exact = coherence_block(full, p.trunc, 1);
  const CoherenceBlock approx = coherence_block(series.partial_sum(3), p.trunc, 1);
  int compared = 0;
  for (Index n = 0; n < exact.entries.rows(); ++n) {
    for (Index m = 0; m < exact.entries.cols(); ++m) {
      const Complex ref = exact.entries(n, m);
      if (std::abs(ref) <= 1e-8) continue;
      ++compared;
      CHECK(std::abs(approx.entries(n, m) - ref) < 0.05 * std::abs(ref));
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("perturbative phase distribution") {
  const PerturbativePhase flat = perturbative_phase_distribution(weak(0.0, 0.0), 2);
  for (double v : flat.distribution.values) CHECK(std::abs(v - 1.0 / (2.0 * kPi)) < 1e-14);
  CHECK(flat.sin1 == 0.0);
  CHECK(flat.cos2 == 0.0);
  CHECK(!flat.warning);

  // No sin(varphi) at first order without drive.
  CHECK(std::abs(perturbative_phase_distribution(weak(0.05, 0.0), 1).sin1) < 1e-14);

  // cos(2 varphi) amplitude scales as V^2.
  const double a = perturbative_phase_distribution(weak(0.05, 0.0), 2).cos2;
  const double b = perturbative_phase_distribution(weak(0.10, 0.0), 2).cos2;
  CHECK(std::abs(a) > 0.0);
  CHECK(b / a == doctest::Approx(4.0).epsilon(1e-10));

  CHECK(perturbative_phase_distribution(weak(2.0, 0.5), 2).warning.has_value());
  CHECK_THROWS_AS(perturbative_phase_distribution(weak(0.1, 0.1), 0), Error);
}

TEST_CASE("perturbative distribution converges to the full solver") {
  const SystemParams small = weak(0.05, 0.05);
  const SystemParams large = weak(0.10, 0.10);
  const double e_small = sup_error(perturbative_phase_distribution(small, 2).distribution, full_relative(small));
  const double e_large = sup_error(perturbative_phase_distribution(large, 2).distribution, full_relative(large));
  INFO("sup errors " << e_small << " and " << e_large);
  CHECK(e_large >= 4.0 * e_small);
}

TEST_CASE("harmonic content of each order") {
  const SystemParams p = weak(0.05, 0.05);
  const PerturbationSeries series(p, 3);
  const FourierContent first = fourier_content(order_phase_distribution(series, 1), 4);
  const FourierContent second = fourier_content(order_phase_distribution(series, 2), 4);
  const double lead = std::abs(second.cos[2]);
  REQUIRE(lead > 0.0);
  for (int h = 0; h <= 4; ++h) {
    // First order leaves no relative-phase imprint at all.
    CHECK(std::abs(first.cos[h]) < 1e-10 * lead);
    CHECK(std::abs(first.sin[h]) < 1e-10 * lead);
    CHECK(std::abs(second.sin[h]) < 1e-10 * lead);
    if (h != 2) CHECK(std::abs(second.cos[h]) < 1e-10 * lead);
  }
  // The leading sin(varphi) term enters at third order.
  const FourierContent third = fourier_content(order_phase_distribution(series, 3), 4);
  CHECK(std::abs(third.sin[1]) > 0.0);
}

TEST_CASE("coefficient extraction: direct projection against regression") {
  const SystemParams p = weak(0.0, 0.0);
  const PhaseCoefficients direct = phase_coefficients(p);
  const std::vector<double> grid{0.02, 0.05, 0.08};
  const PhaseCoefficients fitted = fit_phase_coefficients(p, grid, grid);
  const double scale = std::abs(direct.c2);
  REQUIRE(scale > 0.0);
  CHECK(std::abs(direct.c0 - fitted.c0) < 1e-10 * scale);
  CHECK(std::abs(direct.c1 - fitted.c1) < 1e-10 * scale);
  CHECK(std::abs(direct.c2 - fitted.c2) < 1e-8 * scale);
  CHECK(std::abs(direct.c3 - fitted.c3) < 1e-8 * scale);
  CHECK(std::abs(direct.c4 - fitted.c4) < 1e-8 * scale);
  // The cos(2 varphi) projection of the second-order term is c2 V^2.
  const PerturbationSeries series(weak(0.05, 0.0), 2);
  const double cos2 = fourier_content(order_phase_distribution(series, 2), 2).cos[2];
  CHECK(cos2 == doctest::Approx(direct.c2 * 0.05 * 0.05).epsilon(1e-10));
}
