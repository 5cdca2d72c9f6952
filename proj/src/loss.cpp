#include "dlme/loss.hpp"

#include <cmath>
#include <string>

#include "dlme/error.hpp"
#include "dlme/kernels.hpp"

namespace dlme {

namespace {

void check_loss_inputs(const Matrix& dy, const Matrix& dz, const Matrix& homology) {
  if (!dy.same_shape(dz) || !dy.same_shape(homology) || dy.rows() != dy.cols()) {
    throw DimensionError("loss: dy, dz and homology must be square matrices of one shape");
  }
  if (!dy.all_finite() || !dz.all_finite() || !homology.all_finite()) {
    throw ContractError("loss: non-finite entries in inputs");
  }
}

// 1 everywhere except the diagonal; the losses average over ordered pairs
// with i != j.
Matrix offdiag_mask(int n) {
  Matrix m(n, n, 1.0);
  for (int i = 0; i < n; ++i) m(i, i) = 0.0;
  return m;
}

Matrix route_weights(const Matrix& homology, double alpha) {
  Matrix r = homology;
  double* p = r.data();
  for (std::size_t i = 0; i < r.size(); ++i) p[i] = 1.0 + (alpha - 1.0) * p[i];
  return r;
}

ad::NodeId similarity(ad::Tape& tape, ad::NodeId d, const LossConfig& cfg, double nu) {
  if (cfg.mode == LossMode::kAblationA2) {
    return ad::gaussian_kernel_elem(tape, d, cfg.gauss_sigma);
  }
  return ad::t_kernel_elem(tape, d, nu);
}

// -mean over off-diagonal pairs of p*log(q) + (1-p)*log(1-q).
ad::NodeId neg_mean_divergence(ad::Tape& tape, ad::NodeId p, ad::NodeId q, int n) {
  const ad::NodeId log_q = ad::log_elem(tape, q);
  const ad::NodeId log_1mq = ad::log_elem(tape, ad::affine(tape, q, -1.0, 1.0));
  const ad::NodeId one_minus_p = ad::affine(tape, p, -1.0, 1.0);
  const ad::NodeId terms =
      ad::add(tape, ad::mul(tape, p, log_q), ad::mul(tape, one_minus_p, log_1mq));
  const ad::NodeId masked = ad::mul(tape, terms, tape.leaf(offdiag_mask(n)));
  const double pairs = static_cast<double>(n) * (n - 1);
  return ad::affine(tape, ad::sum_all(tape, masked), -1.0 / pairs, 0.0);
}

}  // namespace

void LossConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  if (!(nu_y > 0.0) || !(nu_z > 0.0)) throw ConfigError("nu_y and nu_z must be positive");
  if (mode == LossMode::kDlme && !(nu_y > nu_z)) {
    throw ConfigError("nu_y must exceed nu_z, got nu_y=" + std::to_string(nu_y) +
                      " nu_z=" + std::to_string(nu_z));
  }
  if (!(clamp_eps > 0.0 && clamp_eps <= 1e-3)) {
    throw ConfigError("clamp_eps must lie in (0, 1e-3]");
  }
  if (mode == LossMode::kAblationA2 && !(gauss_sigma > 0.0)) {
    throw ConfigError("gauss_sigma must be positive");
  }
}

ad::NodeId dlme_loss(ad::Tape& tape, ad::NodeId dy, ad::NodeId dz, const Matrix& homology,
                     const LossConfig& cfg) {
  check_loss_inputs(tape.value(dy), tape.value(dz), homology);
  const int n = homology.rows();
  const ad::NodeId weighted_dy =
      ad::mul(tape, dy, tape.leaf(route_weights(homology, cfg.alpha)));
  const ad::NodeId p =
      ad::clamp(tape, similarity(tape, weighted_dy, cfg, cfg.nu_y), cfg.clamp_eps,
                1.0 - cfg.clamp_eps);
  const ad::NodeId q =
      ad::clamp(tape, similarity(tape, dz, cfg, cfg.nu_z), cfg.clamp_eps, 1.0 - cfg.clamp_eps);
  return neg_mean_divergence(tape, p, q, n);
}

ad::NodeId contrastive_loss(ad::Tape& tape, ad::NodeId d, const Matrix& homology,
                            const LossConfig& cfg, double nu) {
  check_loss_inputs(tape.value(d), tape.value(d), homology);
  const int n = homology.rows();
  const ad::NodeId q =
      ad::clamp(tape, similarity(tape, d, cfg, nu), cfg.clamp_eps, 1.0 - cfg.clamp_eps);
  const ad::NodeId a = tape.leaf(homology);
  return neg_mean_divergence(tape, a, q, n);
}

double loss_difference_pair_term(double dz_ij, int a_ij, double alpha, double kstar, double nu,
                                 double clamp_eps) {
  if (!(kstar > 0.0)) throw ContractError("loss_difference: kstar must be positive");
  const KernelParams params = KernelParams::make(nu);
  const double r = route_weight(a_ij, alpha);
  const double p =
      std::clamp(t_kernel(r * kstar * dz_ij, params), clamp_eps, 1.0 - clamp_eps);
  const double q = std::clamp(t_kernel(dz_ij, params), clamp_eps, 1.0 - clamp_eps);
  return -(static_cast<double>(a_ij) - p) * std::log(1.0 / q - 1.0);
}

double loss_difference_closed_form(const Matrix& dz, const Matrix& homology, double alpha,
                                   double kstar, double nu, double clamp_eps) {
  check_loss_inputs(dz, dz, homology);
  const int n = dz.rows();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int a = homology(i, j) > 0.5 ? 1 : 0;
      acc += loss_difference_pair_term(dz(i, j), a, alpha, kstar, nu, clamp_eps);
    }
  }
  return acc / (static_cast<double>(n) * (n - 1));
}

}  // namespace dlme
