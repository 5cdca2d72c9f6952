#pragma once

#include "dlme/autodiff.hpp"
#include "dlme/matrix.hpp"

namespace dlme {

enum class LossMode { kDlme, kContrastive, kAblationA1, kAblationA2 };

// Knobs of the pairwise similarity-matching objectives.
//
// Sign convention: the two-way divergence D(p, q) is maximized at q = p, so
// the minimized training objective is the cross-entropy -E[D(p, q)] taken
// over all off-diagonal ordered pairs of the batch. Both losses here follow
// that convention, and gradient descent drives q toward p.
struct LossConfig {
  double alpha = 0.1;
  double nu_y = 100.0;
  double nu_z = 10.0;
  double clamp_eps = 1e-7;
  LossMode mode = LossMode::kDlme;
  double gauss_sigma = 1.0;  // used by the distribution-kernel ablation only

  // Full validation for training runs; the diagnostic path deliberately
  // allows nu_y == nu_z.
  void validate() const;
};

// Similarity-matching loss between structure-space distances dy and
// embedding-space distances dz (both n x n, symmetric, zero diagonal):
//   p_ij = kappa(R(A_ij) * dy_ij, nu_y),  q_ij = kappa(dz_ij, nu_z)
//   loss = -mean_{i != j} [ p_ij log q_ij + (1 - p_ij) log(1 - q_ij) ]
// with p and q clamped into [clamp_eps, 1 - clamp_eps]. Differentiable in
// both distance matrices. The ablation-A2 mode swaps the Student-t kernels
// for Gaussian kernels of width gauss_sigma in both spaces.
ad::NodeId dlme_loss(ad::Tape& tape, ad::NodeId dy, ad::NodeId dz, const Matrix& homology,
                     const LossConfig& cfg);

// Instance-discrimination baseline on a single distance matrix:
//   loss = -mean_{i != j} [ A_ij log kappa(d_ij) + (1 - A_ij) log(1 - kappa(d_ij)) ]
// The kernel is Student-t with the supplied nu (Gaussian under ablation A2).
ad::NodeId contrastive_loss(ad::Tape& tape, ad::NodeId d, const Matrix& homology,
                            const LossConfig& cfg, double nu);

// Closed form of dlme_loss - contrastive_loss under a Lipschitz link
// dy = kstar * dz and one shared nu:
//   -mean_{i != j} [ (A_ij - kappa(R(A_ij) * kstar * dz_ij)) * log(1/kappa(dz_ij) - 1) ]
// evaluated with the same clamping and averaging as the loss operations.
double loss_difference_closed_form(const Matrix& dz, const Matrix& homology, double alpha,
                                   double kstar, double nu, double clamp_eps = 1e-7);

// One homologous pair's contribution to the closed form at distance dz_ij;
// exposed for the alpha -> 0 limit diagnostic.
double loss_difference_pair_term(double dz_ij, int a_ij, double alpha, double kstar, double nu,
                                 double clamp_eps = 1e-7);

}  // namespace dlme
