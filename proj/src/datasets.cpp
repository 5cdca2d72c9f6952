#include "dlme/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "dlme/error.hpp"

namespace dlme {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRollTMin = 1.5 * kPi;
constexpr double kRollTMax = 4.5 * kPi;
constexpr double kRollHeight = 20.0;

void add_noise(Matrix& x, double noise, Rng& rng) {
  if (noise <= 0.0) return;
  std::normal_distribution<double> dist(0.0, noise);
  double* p = x.data();
  for (std::size_t i = 0; i < x.size(); ++i) p[i] += dist(rng);
}

}  // namespace

int Dataset::num_classes() const {
  if (labels.empty()) return 0;
  return static_cast<int>(std::set<int>(labels.begin(), labels.end()).size());
}

Dataset gen_swiss_roll(int n, double noise, std::uint64_t seed) {
  if (n < 10) throw ContractError("gen_swiss_roll requires n >= 10");
  Dataset ds;
  ds.name = "swiss-roll";
  ds.params = {{"n", double(n)}, {"noise", noise}, {"seed", double(seed)}};
  ds.X = Matrix(n, 3);
  ds.labels.resize(n);
  Rng rng(seed);
  std::uniform_real_distribution<double> tdist(kRollTMin, kRollTMax);
  std::uniform_real_distribution<double> hdist(0.0, kRollHeight);
  for (int i = 0; i < n; ++i) {
    const double t = tdist(rng);
    const double h = hdist(rng);
    ds.X(i, 0) = t * std::cos(t);
    ds.X(i, 1) = h;
    ds.X(i, 2) = t * std::sin(t);
    const int bin = static_cast<int>((t - kRollTMin) / (kRollTMax - kRollTMin) *
                                     kSwissRollLabelBins);
    ds.labels[i] = std::min(bin, kSwissRollLabelBins - 1);
  }
  add_noise(ds.X, noise, rng);
  return ds;
}

Dataset gen_twain_swiss_roll(int n, double gap, double noise, std::uint64_t seed) {
  if (n < 20 || n % 2 != 0) throw ContractError("gen_twain_swiss_roll requires even n >= 20");
  if (!(gap > 0.0 && gap <= kPi)) {
    throw GenerationError("twain swiss roll gap must lie in (0, pi]");
  }
  // Sheets sit `gap` apart; a handful of noise sigmas must fit in between.
  if (gap < 8.0 * noise + 0.05) {
    throw GenerationError("gap " + std::to_string(gap) +
                          " too small to keep the rolls disjoint at noise " +
                          std::to_string(noise));
  }
  Dataset ds;
  ds.name = "twain-swiss-roll";
  ds.params = {{"n", double(n)}, {"gap", gap}, {"noise", noise}, {"seed", double(seed)}};
  ds.X = Matrix(n, 3);
  ds.labels.resize(n);
  Rng rng(seed);
  std::uniform_real_distribution<double> tdist(kRollTMin, kRollTMax);
  std::uniform_real_distribution<double> hdist(0.0, kRollHeight);
  const int half = n / 2;
  for (int i = 0; i < n; ++i) {
    const double t = tdist(rng);
    const double h = hdist(rng);
    if (i < half) {
      ds.X(i, 0) = t * std::cos(t);
      ds.X(i, 2) = t * std::sin(t);
      ds.labels[i] = 0;
    } else {
      // 180-degree rotation about the h axis, radius shifted by (gap - pi).
      const double r = t + gap - kPi;
      ds.X(i, 0) = r * std::cos(t + kPi);
      ds.X(i, 2) = r * std::sin(t + kPi);
      ds.labels[i] = 1;
    }
    ds.X(i, 1) = h;
  }
  add_noise(ds.X, noise, rng);

  double min_cross_sq = std::numeric_limits<double>::infinity();
  for (int i = 0; i < half; ++i) {
    for (int j = half; j < n; ++j) {
      double sq = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double diff = ds.X(i, c) - ds.X(j, c);
        sq += diff * diff;
      }
      min_cross_sq = std::min(min_cross_sq, sq);
    }
  }
  if (!(min_cross_sq > 0.0)) {
    throw GenerationError("twain swiss roll: rolls are not disjoint");
  }
  ds.params["min_cross_distance"] = std::sqrt(min_cross_sq);
  return ds;
}

Dataset gen_starfruit(int n, int lobes, double eps, std::uint64_t seed) {
  if (lobes < 3) throw ContractError("gen_starfruit requires lobes >= 3");
  if (n < 10) throw ContractError("gen_starfruit requires n >= 10");
  if (!(eps >= 0.0 && eps < 1.0)) throw ContractError("gen_starfruit requires eps in [0, 1)");
  const double radius = 3.0;
  const double height = 10.0;
  Dataset ds;
  ds.name = "starfruit";
  ds.params = {{"n", double(n)}, {"lobes", double(lobes)}, {"eps", eps},
               {"seed", double(seed)}, {"radius", radius}, {"height", height}};
  ds.X = Matrix(n, 3);
  ds.labels.resize(n);
  Rng rng(seed);
  std::uniform_real_distribution<double> phidist(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> zdist(0.0, height);
  for (int i = 0; i < n; ++i) {
    const double phi = phidist(rng);
    const double r = radius * (1.0 + eps * std::cos(lobes * phi));
    ds.X(i, 0) = r * std::cos(phi);
    ds.X(i, 1) = r * std::sin(phi);
    ds.X(i, 2) = zdist(rng);
    ds.labels[i] = std::min(static_cast<int>(phi / (2.0 * kPi) * lobes), lobes - 1);
  }
  return ds;
}

Matrix standardize(const Matrix& x) {
  if (x.rows() < 2) throw ContractError("standardize requires at least 2 rows");
  const int n = x.rows(), d = x.cols();
  Matrix out = x;
  for (int c = 0; c < d; ++c) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += x(i, c);
    mean /= n;
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
      const double diff = x(i, c) - mean;
      var += diff * diff;
    }
    var /= n;
    const double scale = 1.0 / std::sqrt(std::max(var, 1e-12));
    for (int i = 0; i < n; ++i) out(i, c) = (x(i, c) - mean) * scale;
  }
  return out;
}

Dataset standardize(const Dataset& ds) {
  Dataset out = ds;
  out.X = standardize(ds.X);
  return out;
}

Matrix isotropic_scale(const Matrix& x) {
  if (x.rows() < 2) throw ContractError("isotropic_scale requires at least 2 rows");
  const int n = x.rows(), d = x.cols();
  std::vector<double> mean(d, 0.0);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) mean[c] += x(i, c);
  for (double& m : mean) m /= n;
  double total_var = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) {
      const double diff = x(i, c) - mean[c];
      total_var += diff * diff;
    }
  }
  const double scale = 1.0 / std::sqrt(std::max(total_var / (n * d), 1e-12));
  Matrix out(n, d);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) out(i, c) = (x(i, c) - mean[c]) * scale;
  return out;
}

}  // namespace dlme
