#include "dlme/kernels.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "dlme/error.hpp"

namespace dlme {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Bracket scan for the crossover search. d_p for every degree-of-freedom pair
// of practical interest lands well inside [1e-6, 1e4].
constexpr double kScanLo = 1e-6;
constexpr double kScanHi = 1e4;
constexpr int kScanPoints = 200;

}  // namespace

KernelParams KernelParams::make(double nu) {
  if (!(nu > 0.0)) {
    throw ContractError("kernel degrees of freedom must be positive, got " + std::to_string(nu));
  }
  KernelParams p;
  p.nu = nu;
  p.norm_const =
      std::exp(std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) - 0.5 * std::log(nu * kPi));
  return p;
}

double t_kernel(double d, const KernelParams& p) {
  if (d < 0.0) {
    throw ContractError("t_kernel requires a nonnegative distance, got " + std::to_string(d));
  }
  return p.norm_const * std::pow(1.0 + d * d / p.nu, -(p.nu + 1.0) / 2.0);
}

double t_kernel_derivative(double d, const KernelParams& p) {
  return -p.norm_const * (p.nu + 1.0) / p.nu * d *
         std::pow(1.0 + d * d / p.nu, -(p.nu + 3.0) / 2.0);
}

double t_kernel_inverse(double s, const KernelParams& p) {
  if (!(s > 0.0) || s > p.norm_const * (1.0 + 1e-12)) {
    throw DomainError("t_kernel_inverse: similarity " + std::to_string(s) +
                      " outside (0, C(nu)] for nu=" + std::to_string(p.nu));
  }
  const double ratio = std::min(s / p.norm_const, 1.0);
  const double inner = std::pow(ratio, -2.0 / (p.nu + 1.0)) - 1.0;
  return std::sqrt(p.nu * std::max(inner, 0.0));
}

double kernel_gap(double d, const KernelParams& py, const KernelParams& pz) {
  if (py.nu == pz.nu) {
    throw ContractError("kernel_gap requires distinct degrees of freedom");
  }
  return t_kernel(d, py) - t_kernel(d, pz);
}

double find_crossover(const KernelParams& py, const KernelParams& pz) {
  if (!(py.nu > pz.nu)) {
    throw ContractError("find_crossover requires nu_y > nu_z, got nu_y=" +
                        std::to_string(py.nu) + " nu_z=" + std::to_string(pz.nu));
  }
  // Log-spaced scan: locate the sign change and verify it is unique.
  const double log_lo = std::log(kScanLo), log_hi = std::log(kScanHi);
  double prev_d = kScanLo;
  double prev_phi = kernel_gap(prev_d, py, pz);
  double lo = -1.0, hi = -1.0;
  int sign_changes = 0;
  for (int i = 1; i < kScanPoints; ++i) {
    const double d = std::exp(log_lo + (log_hi - log_lo) * i / (kScanPoints - 1));
    const double phi = kernel_gap(d, py, pz);
    if ((prev_phi > 0.0) != (phi > 0.0)) {
      ++sign_changes;
      lo = prev_d;
      hi = d;
    }
    prev_d = d;
    prev_phi = phi;
  }
  if (sign_changes == 0) {
    throw NumericError("find_crossover: no sign change of Phi on the scan range");
  }
  if (sign_changes > 1) {
    throw NumericError("find_crossover: Phi changes sign " + std::to_string(sign_changes) +
                       " times on the scan range; expected exactly one");
  }
  // Bisection inherits the sign-based uniqueness guarantee.
  double phi_lo = kernel_gap(lo, py, pz);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double phi_mid = kernel_gap(mid, py, pz);
    if (std::abs(phi_mid) < 1e-13 || hi - lo < 1e-15 * std::max(1.0, mid)) {
      return mid;
    }
    if ((phi_lo > 0.0) == (phi_mid > 0.0)) {
      lo = mid;
      phi_lo = phi_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double two_way_divergence(double p, double q) {
  if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0)) {
    throw DomainError("two_way_divergence requires p, q strictly inside (0, 1)");
  }
  return p * std::log(q) + (1.0 - p) * std::log(1.0 - q);
}

double route_weight(int a, double alpha) {
  if (a != 0 && a != 1) {
    throw ContractError("route_weight: homology flag must be 0 or 1");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ContractError("route_weight: alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  return 1.0 + (alpha - 1.0) * static_cast<double>(a);
}

double gaussian_kernel(double d, double sigma) {
  if (d < 0.0) throw ContractError("gaussian_kernel requires a nonnegative distance");
  if (!(sigma > 0.0)) throw ContractError("gaussian_kernel requires sigma > 0");
  return std::exp(-d * d / (2.0 * sigma * sigma)) / (sigma * std::sqrt(2.0 * kPi));
}

double gaussian_kernel_derivative(double d, double sigma) {
  return -d / (sigma * sigma) * gaussian_kernel(d, sigma);
}

}  // namespace dlme
