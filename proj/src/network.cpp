#include "dlme/network.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

#include "dlme/error.hpp"

namespace dlme {

using nlohmann::json;

MlpSpec MlpSpec::resolved(int input_dim) const {
  if (layer_dims.size() < 2) {
    throw ContractError("MlpSpec needs at least an input and an output dimension");
  }
  MlpSpec out = *this;
  if (out.layer_dims.front() == -1) out.layer_dims.front() = input_dim;
  for (std::size_t i = 0; i < out.layer_dims.size(); ++i) {
    if (out.layer_dims[i] <= 0) {
      throw ContractError("MlpSpec: dimension " + std::to_string(i) + " must be positive");
    }
  }
  if (out.layer_dims.front() != input_dim) {
    throw DimensionError("MlpSpec input dim " + std::to_string(out.layer_dims.front()) +
                         " does not match data dim " + std::to_string(input_dim));
  }
  return out;
}

MlpParams init_mlp(const MlpSpec& spec, int input_dim, std::uint64_t seed) {
  MlpParams p;
  p.spec = spec.resolved(input_dim);
  Rng rng(seed);
  const auto& dims = p.spec.layer_dims;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l], fan_out = dims[l + 1];
    const double bound = std::sqrt(6.0 / fan_in);
    p.weights.push_back(uniform_matrix(fan_in, fan_out, -bound, bound, rng));
    p.biases.push_back(Matrix(1, fan_out, 0.0));
  }
  return p;
}

MlpNodes stage_params(ad::Tape& tape, const MlpParams& params) {
  MlpNodes nodes;
  for (int l = 0; l < params.num_layers(); ++l) {
    nodes.weights.push_back(tape.leaf(params.weights[l]));
    nodes.biases.push_back(tape.leaf(params.biases[l]));
  }
  return nodes;
}

ad::NodeId forward(ad::Tape& tape, const MlpNodes& nodes, const MlpParams& params, ad::NodeId x) {
  if (params.empty()) return x;  // identity network
  if (tape.value(x).cols() != params.input_dim()) {
    throw DimensionError("forward: input has " + std::to_string(tape.value(x).cols()) +
                         " columns, network expects " + std::to_string(params.input_dim()));
  }
  ad::NodeId h = x;
  const int layers = params.num_layers();
  for (int l = 0; l < layers; ++l) {
    h = ad::add_rowvec(tape, ad::matmul(tape, h, nodes.weights[l]), nodes.biases[l]);
    if (l + 1 < layers) h = ad::relu(tape, h);
  }
  return h;
}

Matrix forward_plain(const MlpParams& params, const Matrix& x) {
  if (params.empty()) return x;
  if (x.cols() != params.input_dim()) {
    throw DimensionError("forward_plain: input width mismatch");
  }
  Matrix h = x;
  const int layers = params.num_layers();
  for (int l = 0; l < layers; ++l) {
    Matrix z = matmul(h, params.weights[l]);
    const double* b = params.biases[l].data();
    for (int i = 0; i < z.rows(); ++i) {
      double* zi = z.row(i);
      for (int j = 0; j < z.cols(); ++j) zi[j] += b[j];
    }
    if (l + 1 < layers) {
      double* p = z.data();
      for (std::size_t i = 0; i < z.size(); ++i) p[i] = p[i] > 0.0 ? p[i] : 0.0;
    }
    h = std::move(z);
  }
  return h;
}

namespace {

json params_to_json(const MlpParams& p) {
  json j;
  j["dims"] = p.spec.layer_dims;
  json ws = json::array(), bs = json::array();
  for (int l = 0; l < p.num_layers(); ++l) {
    std::vector<double> w(p.weights[l].data(), p.weights[l].data() + p.weights[l].size());
    std::vector<double> b(p.biases[l].data(), p.biases[l].data() + p.biases[l].size());
    ws.push_back(std::move(w));
    bs.push_back(std::move(b));
  }
  j["weights"] = std::move(ws);
  j["biases"] = std::move(bs);
  return j;
}

MlpParams params_from_json(const json& j) {
  MlpParams p;
  p.spec.layer_dims = j.at("dims").get<std::vector<int>>();
  const auto& ws = j.at("weights");
  const auto& bs = j.at("biases");
  if (p.spec.layer_dims.size() < 1) throw ParseError("checkpoint: empty dims");
  if (ws.size() + 1 != p.spec.layer_dims.size() || bs.size() != ws.size()) {
    // An identity network serializes as dims=[0] with no layers.
    if (!(ws.empty() && bs.empty() && p.spec.layer_dims.size() == 1)) {
      throw ParseError("checkpoint: layer count does not match dims");
    }
    p.spec.layer_dims.clear();
    return p;
  }
  for (std::size_t l = 0; l < ws.size(); ++l) {
    const int rows = p.spec.layer_dims[l], cols = p.spec.layer_dims[l + 1];
    const auto w = ws[l].get<std::vector<double>>();
    const auto b = bs[l].get<std::vector<double>>();
    if (static_cast<int>(w.size()) != rows * cols || static_cast<int>(b.size()) != cols) {
      throw ParseError("checkpoint: layer " + std::to_string(l) + " size mismatch");
    }
    Matrix wm(rows, cols), bm(1, cols);
    std::copy(w.begin(), w.end(), wm.data());
    std::copy(b.begin(), b.end(), bm.data());
    p.weights.push_back(std::move(wm));
    p.biases.push_back(std::move(bm));
  }
  return p;
}

}  // namespace

void save_checkpoint(const std::string& path, const MlpParams& f, const MlpParams& g) {
  json j;
  j["format"] = "dlme-checkpoint";
  j["version"] = 1;
  j["f"] = params_to_json(f);
  json gj;
  if (g.empty()) {
    gj["dims"] = std::vector<int>{0};
    gj["weights"] = json::array();
    gj["biases"] = json::array();
  } else {
    gj = params_to_json(g);
  }
  j["g"] = std::move(gj);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open checkpoint file for writing: " + path);
  out << j.dump(1) << "\n";
}

void load_checkpoint(const std::string& path, MlpParams& f, MlpParams& g) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("checkpoint is not valid JSON: " + std::string(e.what()));
  }
  if (j.value("format", "") != "dlme-checkpoint" || j.value("version", 0) != 1) {
    throw ParseError("unrecognized checkpoint format/version");
  }
  f = params_from_json(j.at("f"));
  g = params_from_json(j.at("g"));
}

}  // namespace dlme
