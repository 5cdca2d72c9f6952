#pragma once

namespace dlme {

// Student-t similarity kernel parameters. The normalization constant
// C(nu) = Gamma((nu+1)/2) / (sqrt(nu*pi) * Gamma(nu/2)) is precomputed via
// log-gamma so it stays finite up to nu ~ 1e6.
struct KernelParams {
  double nu = 1.0;
  double norm_const = 0.0;

  static KernelParams make(double nu);
};

// kappa(d, nu) = C(nu) * (1 + d^2/nu)^(-(nu+1)/2), strictly decreasing in d.
double t_kernel(double d, const KernelParams& p);
// d(kappa)/dd, used by the reverse-mode similarity op.
double t_kernel_derivative(double d, const KernelParams& p);
// Exact inverse: d = sqrt(nu * ((s / C(nu))^(-2/(nu+1)) - 1)), s in (0, C(nu)].
double t_kernel_inverse(double s, const KernelParams& p);

// Phi(d) = kappa(d, nu_y) - kappa(d, nu_z). Positive below the crossover and
// negative above it when nu_y > nu_z.
double kernel_gap(double d, const KernelParams& py, const KernelParams& pz);

// Locates the unique zero d_p of Phi by bisection. Verifies on a log-spaced
// scan of [1e-6, 1e4] that Phi changes sign exactly once. Requires
// py.nu > pz.nu.
double find_crossover(const KernelParams& py, const KernelParams& pz);

// Two-way divergence D(p, q) = p*log(q) + (1-p)*log(1-q), p and q strictly
// inside (0, 1). Always negative; for fixed p it is maximized at q = p.
double two_way_divergence(double p, double q);

// R(a) = 1 + (alpha - 1) * a: alpha for homologous pairs (a = 1), 1 otherwise.
double route_weight(int a, double alpha);

// Normal-density kernel for the distribution-kernel ablation:
// (1 / (sigma * sqrt(2*pi))) * exp(-d^2 / (2 sigma^2)).
double gaussian_kernel(double d, double sigma);
double gaussian_kernel_derivative(double d, double sigma);

}  // namespace dlme
