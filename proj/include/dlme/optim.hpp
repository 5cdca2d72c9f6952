#pragma once

#include <vector>

#include "dlme/matrix.hpp"

namespace dlme {

// AdamW with decoupled weight decay. A step with zero gradient (from fresh
// state) changes a parameter only by the shrinkage lr * wd * w.
class AdamW {
 public:
  struct Config {
    double lr = 1e-3;
    double weight_decay = 1e-6;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
  };

  AdamW(const Config& cfg, const std::vector<Matrix*>& params);

  // `grads` must parallel the parameter list handed to the constructor.
  void step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads);

  long step_count() const { return step_; }

 private:
  Config cfg_;
  long step_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

}  // namespace dlme
