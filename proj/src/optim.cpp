#include "dlme/optim.hpp"

#include <cmath>

#include "dlme/error.hpp"

namespace dlme {

AdamW::AdamW(const Config& cfg, const std::vector<Matrix*>& params) : cfg_(cfg) {
  for (const Matrix* p : params) {
    m_.emplace_back(p->rows(), p->cols(), 0.0);
    v_.emplace_back(p->rows(), p->cols(), 0.0);
  }
}

void AdamW::step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ContractError("AdamW::step: parameter list does not match optimizer state");
  }
  ++step_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& w = *params[i];
    const Matrix& g = *grads[i];
    Matrix& m = m_[i];
    Matrix& v = v_[i];
    double* wp = w.data();
    const double* gp = g.data();
    double* mp = m.data();
    double* vp = v.data();
    const std::size_t n = w.size();
    for (std::size_t j = 0; j < n; ++j) {
      mp[j] = cfg_.beta1 * mp[j] + (1.0 - cfg_.beta1) * gp[j];
      vp[j] = cfg_.beta2 * vp[j] + (1.0 - cfg_.beta2) * gp[j] * gp[j];
      const double mhat = mp[j] / bc1;
      const double vhat = vp[j] / bc2;
      wp[j] -= cfg_.lr * (mhat / (std::sqrt(vhat) + cfg_.eps) + cfg_.weight_decay * wp[j]);
    }
  }
}

}  // namespace dlme
