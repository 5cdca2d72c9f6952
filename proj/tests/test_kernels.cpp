#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dlme/error.hpp"
#include "dlme/kernels.hpp"
#include "dlme/matrix.hpp"

using namespace dlme;

namespace {

// Frozen crossover values from a high-precision root find on
// kappa(d, nu_y) = kappa(d, nu_z).
constexpr double kCrossover100v10 = 1.59744602026471169;
constexpr double kCrossover10v1 = 1.94664446832528274;
constexpr double kCrossover2v1 = 2.31826613722564077;

}  // namespace

TEST_CASE("t_kernel peak values from the gamma-function oracle") {
  const KernelParams nu1 = KernelParams::make(1.0);
  CHECK(t_kernel(0.0, nu1) == doctest::Approx(0.31830988618379067).epsilon(1e-12));
  CHECK(t_kernel(1.0, nu1) == doctest::Approx(0.15915494309189534).epsilon(1e-12));

  // Student-t approaches the standard normal as nu grows.
  const KernelParams big = KernelParams::make(1e6);
  CHECK(t_kernel(0.0, big) == doctest::Approx(0.3989422804014327).epsilon(1e-6));

  // Peak bound C(nu) < 0.399 for every nu.
  for (double nu : {0.5, 1.0, 2.0, 10.0, 100.0, 1e4, 1e6}) {
    const KernelParams p = KernelParams::make(nu);
    CHECK(p.norm_const > 0.0);
    CHECK(p.norm_const < 0.399);
    CHECK(t_kernel(0.0, p) == doctest::Approx(p.norm_const));
  }
}

TEST_CASE("t_kernel rejects negative distance and non-positive nu") {
  const KernelParams p = KernelParams::make(1.0);
  CHECK_THROWS_AS(t_kernel(-0.1, p), ContractError);
  CHECK_THROWS_AS(KernelParams::make(0.0), ContractError);
  CHECK_THROWS_AS(KernelParams::make(-3.0), ContractError);
}

TEST_CASE("t_kernel is strictly decreasing") {
  Rng rng(1);
  std::uniform_real_distribution<double> nud(0.5, 1000.0);
  std::uniform_real_distribution<double> dd(0.0, 30.0);
  for (int trial = 0; trial < 200; ++trial) {
    const KernelParams p = KernelParams::make(nud(rng));
    double d1 = dd(rng), d2 = dd(rng);
    if (d1 == d2) continue;
    if (d1 > d2) std::swap(d1, d2);
    CHECK(t_kernel(d1, p) > t_kernel(d2, p));
  }
}

TEST_CASE("t_kernel_inverse") {
  const KernelParams nu1 = KernelParams::make(1.0);
  CHECK(t_kernel_inverse(nu1.norm_const, nu1) == 0.0);
  CHECK(t_kernel_inverse(0.15915494309189534, nu1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(t_kernel_inverse(0.0, nu1), DomainError);
  CHECK_THROWS_AS(t_kernel_inverse(0.5, nu1), DomainError);  // above the peak

  // Roundtrip identity over d in [0, 50] for several nu.
  for (double nu : {0.7, 1.0, 10.0, 100.0, 900.0}) {
    const KernelParams p = KernelParams::make(nu);
    for (int i = 0; i <= 100; ++i) {
      const double d = 50.0 * i / 100.0;
      CHECK(std::abs(t_kernel_inverse(t_kernel(d, p), p) - d) < 1e-9);
    }
  }
}

TEST_CASE("kernel_gap sign structure") {
  const KernelParams y = KernelParams::make(100.0);
  const KernelParams z = KernelParams::make(10.0);
  // At d = 0 the heavier-nu kernel peaks higher.
  CHECK(kernel_gap(0.0, y, z) > 0.0);
  // Far out, the lighter tail of nu = 100 has decayed much further.
  CHECK(kernel_gap(100.0, y, z) < 0.0);
  CHECK_THROWS_AS(kernel_gap(1.0, y, y), ContractError);
}

TEST_CASE("find_crossover locates the unique root") {
  const KernelParams y = KernelParams::make(100.0);
  const KernelParams z = KernelParams::make(10.0);
  const double dp = find_crossover(y, z);
  CHECK(dp == doctest::Approx(kCrossover100v10).epsilon(1e-9));
  CHECK(std::abs(kernel_gap(dp, y, z)) < 1e-12);
  CHECK(kernel_gap(dp / 2.0, y, z) > 0.0);
  CHECK(kernel_gap(2.0 * dp, y, z) < 0.0);

  CHECK(find_crossover(KernelParams::make(10.0), KernelParams::make(1.0)) ==
        doctest::Approx(kCrossover10v1).epsilon(1e-9));
  CHECK(find_crossover(KernelParams::make(2.0), KernelParams::make(1.0)) ==
        doctest::Approx(kCrossover2v1).epsilon(1e-9));

  CHECK_THROWS_AS(find_crossover(z, y), ContractError);  // swapped arguments
}

TEST_CASE("push-pull sign law on a dense grid") {
  // The grid starts at d = 1: below ~0.6 the heavy-nu similarity exceeds the
  // light-nu peak and the inverse mapping does not exist.
  for (const auto& [ny, nz] : {std::pair{100.0, 10.0}, {10.0, 1.0}, {2.0, 1.0}}) {
    const KernelParams y = KernelParams::make(ny);
    const KernelParams z = KernelParams::make(nz);
    const double dp = find_crossover(y, z);
    REQUIRE(dp > 1.0);
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
      const double d = std::exp(std::log(1e2) * i / 999.0);
      if (std::abs(d - dp) < 1e-9) continue;
      const double dplus = t_kernel_inverse(t_kernel(d, y), z);
      if (!((d - dp) * (dplus - d) > 0.0)) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("two_way_divergence") {
  CHECK(two_way_divergence(0.5, 0.5) == doctest::Approx(-0.6931471805599453).epsilon(1e-12));
  CHECK(two_way_divergence(0.3, 0.7) == doctest::Approx(-0.9497834462097749).epsilon(1e-12));
  CHECK_THROWS_AS(two_way_divergence(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(two_way_divergence(0.5, 1.0), DomainError);

  // Always negative; maximized over q at q = p.
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int trial = 0; trial < 50; ++trial) {
    const double p = u(rng);
    CHECK(two_way_divergence(p, u(rng)) < 0.0);
  }
  const double p = 0.3;
  double best_q = -1.0, best = -1e30;
  for (int i = 1; i < 1000; ++i) {
    const double q = i / 1000.0;
    const double v = two_way_divergence(p, q);
    if (v > best) {
      best = v;
      best_q = q;
    }
  }
  CHECK(best_q == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("route_weight") {
  CHECK(route_weight(1, 0.25) == doctest::Approx(0.25));
  CHECK(route_weight(0, 0.25) == doctest::Approx(1.0));
  CHECK(route_weight(1, 1.0) == doctest::Approx(1.0));
  CHECK(route_weight(0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(route_weight(1, 1.5), ContractError);
  CHECK_THROWS_AS(route_weight(2, 0.5), ContractError);
}

TEST_CASE("gaussian_kernel") {
  CHECK(gaussian_kernel(0.0, 1.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
  CHECK(gaussian_kernel(1.0, 1.0) == doctest::Approx(0.24197072451914337).epsilon(1e-12));
  CHECK(gaussian_kernel(0.0, 2.0) == doctest::Approx(0.3989422804014327 / 2.0).epsilon(1e-12));

  Rng rng(3);
  std::uniform_real_distribution<double> dd(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    double d1 = dd(rng), d2 = dd(rng);
    if (d1 == d2) continue;
    if (d1 > d2) std::swap(d1, d2);
    CHECK(gaussian_kernel(d1, 1.7) > gaussian_kernel(d2, 1.7));
  }
}
