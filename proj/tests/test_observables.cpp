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
#include "vdpsync/observables.hpp"
#include "vdpsync/steady_state.hpp"

using namespace vdpsync;

namespace {

constexpr double kPi = std::numbers::pi;

double max_deviation(const PhaseDistribution& d, auto&& expected) {
  double worst = 0.0;
  for (std::size_t j = 0; j < d.values.size(); ++j) {
    worst = std::max(worst, std::abs(d.values[j] - expected(d.grid[j])));
  }
  return worst;
}

double cell() { return 2.0 * kPi / double(kDefaultPhaseGrid); }

double circular_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

DensityMatrix steady(double coupling, double drive = 0.5) {
  SystemParams p;
  p.gamma2 = 10.0;
  p.drive = drive;
  p.coupling = coupling;
  return solve_steady_state(build_liouvillian(p)).rho;
}

}  // namespace

TEST_CASE("Fock states carry no phase") {
  const DensityMatrix vac = DensityMatrix::basis(Truncation{3, 3}, 0, 0);
  auto flat = [](double) { return 1.0 / (2.0 * kPi); };
  CHECK(max_deviation(single_phase_distribution(vac, Mode::One), flat) < 1e-14);
  CHECK(max_deviation(single_phase_distribution(vac, Mode::Two), flat) < 1e-14);
  CHECK(max_deviation(relative_phase_distribution(vac), flat) < 1e-14);
}

TEST_CASE("single-mode superposition") {
  const Truncation dims{2, 2};
  StateVector psi = (basis_state(dims, 0, 0) + basis_state(dims, 1, 0)) / std::sqrt(2.0);
  const DensityMatrix rho = DensityMatrix::pure(dims, psi);
  const PhaseDistribution d = single_phase_distribution(rho, Mode::One);
  CHECK(max_deviation(d, [](double phi) { return (1.0 + std::cos(phi)) / (2.0 * kPi); }) < 1e-14);
  CHECK(d.kind == PhaseKind::Single1);

  const SyncReport r = sync_measures(rho);
  CHECK(r.s1.defined);
  CHECK(r.s1.magnitude() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(!r.s2.defined);
  CHECK(r.s2.magnitude() == 0.0);
  CHECK(r.n1 == doctest::Approx(0.5));
  CHECK(r.n2 == 0.0);
}

TEST_CASE("one-phonon normal mode") {
  const Truncation dims{2, 2};
  const StateVector psi = (basis_state(dims, 1, 0) + basis_state(dims, 0, 1)) / std::sqrt(2.0);
  const DensityMatrix rho = DensityMatrix::pure(dims, psi);
  const PhaseDistribution d = relative_phase_distribution(rho);
  CHECK(max_deviation(d, [](double phi) { return (1.0 + std::cos(phi)) / (2.0 * kPi); }) < 1e-14);
  const SyncReport r = sync_measures(rho);
  CHECK(r.s3.magnitude() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.n1 == doctest::Approx(0.5));
  CHECK(r.n2 == doctest::Approx(0.5));
}

TEST_CASE("relative phase follows phi_2 - phi_1") {
  // (|10> + e^{i theta}|01>)/sqrt2 projected on phase states peaks at
  // phi_2 - phi_1 = theta; s3 = <a1^dag a2> carries the same angle.
  const Truncation dims{2, 2};
  const double theta = kPi / 3.0;
  const StateVector psi = (basis_state(dims, 1, 0) +
                           std::polar(1.0, theta) * basis_state(dims, 0, 1)) /
                          std::sqrt(2.0);
  const DensityMatrix rho = DensityMatrix::pure(dims, psi);
  const PhaseDistribution d = relative_phase_distribution(rho);
  CHECK(max_deviation(d, [&](double phi) { return (1.0 + std::cos(phi - theta)) / (2.0 * kPi); }) <
        1e-14);
  CHECK(circular_distance(sync_measures(rho).s3.phase(), theta) < 1e-12);

  // Brute-force projection on the product phase states.
  auto projected = [&](double phi) {
    double total = 0.0;
    const int grid = 512;
    for (int k = 0; k < grid; ++k) {
      const double phi1 = 2.0 * kPi * k / grid;
      const double phi2 = phi1 + phi;
      StateVector bra = StateVector::Zero(dims.dim());
      for (int n = 0; n <= 2; ++n) {
        for (int m = 0; m <= 2; ++m) bra(dims.index(n, m)) = std::polar(1.0, n * phi1 + m * phi2);
      }
      total += std::norm(bra.dot(psi)) / grid;
    }
    return total / (2.0 * kPi);
  };
  CHECK(max_deviation(d, projected) < 1e-12);
}

TEST_CASE("single-mode phase follows the phase-state projection") {
  const Truncation dims{3, 1};
  const double theta = 2.0;
  const StateVector psi =
      (basis_state(dims, 0, 0) + std::polar(1.0, theta) * basis_state(dims, 1, 0)) / std::sqrt(2.0);
  const PhaseDistribution d = single_phase_distribution(DensityMatrix::pure(dims, psi), Mode::One);
  CHECK(circular_distance(d.grid[d.argmax()], theta) <= cell());
  // <a^dag> = |.| e^{-i theta}
  CHECK(circular_distance(sync_measures(DensityMatrix::pure(dims, psi)).s1.phase(), -theta) < 1e-12);
}

TEST_CASE("random states: normalization, bounds and the first Fourier coefficient") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> cutoff(1, 5);
  for (int trial = 0; trial < 30; ++trial) {
    const Truncation dims{cutoff(rng), cutoff(rng)};
    const DensityMatrix rho(dims, oracle::random_state(dims.dim(), rng));
    const PhaseDistribution rel = relative_phase_distribution(rho);
    CHECK(std::abs(rel.integral() - 1.0) < 1e-8);
    CHECK(std::abs(single_phase_distribution(rho, Mode::One).integral() - 1.0) < 1e-8);
    CHECK(std::abs(single_phase_distribution(rho, Mode::Two, 101).integral() - 1.0) < 1e-8);

    const SyncReport r = sync_measures(rho);
    CHECK(r.s1.magnitude() <= 1.0 + 1e-10);
    CHECK(r.s2.magnitude() <= 1.0 + 1e-10);
    CHECK(r.s3.magnitude() <= 1.0 + 1e-10);

    Complex c1 = 0.0;
    for (int n = 0; n < dims.n_max_1; ++n) {
      for (int m = 0; m < dims.n_max_2; ++m) c1 += rho.element(n, m + 1, n + 1, m);
    }
    double a1 = 0.0;
    for (std::size_t j = 0; j < rel.values.size(); ++j) {
      a1 += rel.values[j] * std::cos(rel.grid[j]) * rel.spacing();
    }
    CHECK(std::abs(a1 / kPi - c1.real() / kPi) < 1e-12);
  }
}

TEST_CASE("partial trace of a product state") {
  std::mt19937_64 rng(9);
  const DenseMatrix r1 = oracle::random_state(3, rng);
  const DenseMatrix r2 = oracle::random_state(4, rng);
  const DensityMatrix rho = DensityMatrix::product(r1, r2);
  CHECK((partial_trace(rho, Mode::One) - r1).norm() < 1e-14);
  CHECK((partial_trace(rho, Mode::Two) - r2).norm() < 1e-14);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(phase_grid(2), Error);
  const DensityMatrix vac = DensityMatrix::basis(Truncation{2, 2}, 0, 0);
  CHECK_THROWS_AS(expectation(vac, annihilation(Mode::One, Truncation{3, 3})), Error);
  CHECK_THROWS_AS(relative_phase_coefficients(DenseMatrix::Zero(4, 4), Truncation{2, 2}), Error);
}

TEST_CASE("peak detection rules") {
  const std::vector<double> periodic{3.0, 1.0, 2.0, 2.0, 1.0, 0.5, 3.0};
  // Index 6 and 0 form one wrapped run; the flat run 2,3 counts once at 2.
  CHECK(periodic_local_maxima(periodic) == std::vector<std::size_t>{0, 2});
  const std::vector<double> open{1.0, 2.0, 1.0, 0.5, 0.5, 1.0, 3.0};
  CHECK(interior_local_maxima(open) == std::vector<std::size_t>{1});
  CHECK(interior_local_minima(open) == std::vector<std::size_t>{3});
  const std::vector<double> constant(8, 1.0);
  CHECK(periodic_local_maxima(constant).empty());
}

TEST_CASE("steady-state phases") {
  const DensityMatrix rho = steady(1.0);
  const PhaseDistribution p1 = single_phase_distribution(rho, Mode::One);
  const PhaseDistribution p2 = single_phase_distribution(rho, Mode::Two);
  CHECK(circular_distance(p1.grid[p1.argmax()], 1.5 * kPi) <= cell());
  CHECK(circular_distance(p2.grid[p2.argmax()], kPi) <= cell());

  // Single-peaked regime: arg(s3) sits on the argmax of P(varphi).
  const DensityMatrix weak = steady(0.2);
  const PhaseDistribution rel = relative_phase_distribution(weak);
  REQUIRE(periodic_local_maxima(rel.values).size() == 1);
  CHECK(circular_distance(sync_measures(weak).s3.phase(), rel.grid[rel.argmax()]) <= cell());
  CHECK(circular_distance(rel.grid[rel.argmax()], 1.5 * kPi) <= cell());

  const PhaseDistribution strong = relative_phase_distribution(steady(3.0));
  CHECK(periodic_local_maxima(strong.values).size() == 2);
}

TEST_CASE("undriven steady state has vanishing s1 and s2") {
  const SyncReport r = sync_measures(steady(2.0, 0.0));
  CHECK(r.s1.magnitude() < 1e-10);
  CHECK(r.s2.magnitude() < 1e-10);
}
