// Command-line front end: dataset generation, training, evaluation,
// curvature reports, numeric verification and SVG plots.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dlme/csv.hpp"
#include "dlme/curvature.hpp"
#include "dlme/datasets.hpp"
#include "dlme/error.hpp"
#include "dlme/eval.hpp"
#include "dlme/graph.hpp"
#include "dlme/kernels.hpp"
#include "dlme/loss.hpp"
#include "dlme/manifest.hpp"
#include "dlme/svg.hpp"
#include "dlme/trainer.hpp"

#ifndef DLME_GIT_DESCRIBE
#define DLME_GIT_DESCRIBE "unknown"
#endif

namespace {

using dlme::ConfigError;
using dlme::Dataset;
using dlme::Matrix;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Values from an optional JSON config file fill in flags the user did not
// pass; explicit flags always win.
template <typename T>
void fallback(const CLI::Option* opt, const json& cfg, const std::string& key, T& value) {
  if (opt != nullptr && opt->count() > 0) return;
  if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

json load_config_file(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      std::ifstream in(args[i + 1]);
      if (!in) throw ConfigError("cannot open config file: " + args[i + 1]);
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw dlme::ParseError("config file is not valid JSON: " + std::string(e.what()));
      }
      return j;
    }
  }
  return json::object();
}

void finish_manifest(const std::string& path, const std::string& command, const json& config,
                     std::uint64_t seed, const std::vector<std::string>& outputs,
                     Clock::time_point t0) {
  dlme::RunManifest m;
  m.command = command;
  m.config = config;
  m.seed = seed;
  m.git_describe = DLME_GIT_DESCRIBE;
  m.wall_ms = ms_since(t0);
  m.outputs = outputs;
  dlme::write_manifest(path, m);
}

// Feature matrix for analysis commands: drops the synthetic "id" column the
// trainer writes, plus the label column when requested.
Dataset load_points(const std::string& path, const std::optional<std::string>& label_col) {
  Dataset ds = dlme::load_csv(path, label_col);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  if (header.rfind("id,", 0) == 0) {
    Matrix x(ds.X.rows(), ds.X.cols() - 1);
    for (int i = 0; i < x.rows(); ++i)
      for (int c = 0; c < x.cols(); ++c) x(i, c) = ds.X(i, c + 1);
    ds.X = std::move(x);
  }
  return ds;
}

// ---------------------------------------------------------------------------
// gen-data

struct GenDataOpts {
  std::string dataset = "swiss-roll";
  int n = 2000;
  double noise = 0.05;
  double gap = dlme::kTwainDefaultGap;
  int lobes = 5;
  double eps = 0.3;
  std::uint64_t seed = 0;
  std::string output = "data.csv";

  json to_json() const {
    return {{"dataset", dataset}, {"n", n},     {"noise", noise}, {"gap", gap},
            {"lobes", lobes},     {"eps", eps}, {"seed", seed},   {"output", output}};
  }
  static GenDataOpts from_json(const json& j) {
    GenDataOpts o;
    o.dataset = j.at("dataset");
    o.n = j.at("n");
    o.noise = j.at("noise");
    o.gap = j.at("gap");
    o.lobes = j.at("lobes");
    o.eps = j.at("eps");
    o.seed = j.at("seed");
    o.output = j.at("output");
    return o;
  }
};

int run_gen_data(const GenDataOpts& o) {
  const auto t0 = Clock::now();
  Dataset ds;
  if (o.dataset == "swiss-roll") {
    ds = dlme::gen_swiss_roll(o.n, o.noise, o.seed);
  } else if (o.dataset == "twain-swiss-roll") {
    ds = dlme::gen_twain_swiss_roll(o.n, o.gap, o.noise, o.seed);
  } else if (o.dataset == "starfruit") {
    ds = dlme::gen_starfruit(o.n, o.lobes, o.eps, o.seed);
  } else {
    throw ConfigError("unknown dataset '" + o.dataset +
                      "' (expected swiss-roll|twain-swiss-roll|starfruit)");
  }
  dlme::save_csv(o.output, ds.X, ds.labels);
  finish_manifest(o.output + ".manifest.json", "gen-data", o.to_json(), o.seed, {o.output}, t0);
  std::cout << "wrote " << ds.X.rows() << " rows to " << o.output << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainOpts {
  std::string input;
  std::string label_col;
  std::string out_dir = "run";
  std::string scale = "standard";
  dlme::TrainConfig cfg;
  std::vector<int> f_dims{-1, 500, 300, 80};
  std::vector<int> g_dims{80, 500, 80, 2};
  std::string mode = "dlme";

  json to_json() const {
    return {{"input", input},
            {"label_col", label_col},
            {"out_dir", out_dir},
            {"scale", scale},
            {"epochs", cfg.epochs},
            {"batch_size", cfg.batch_size},
            {"lr", cfg.lr},
            {"weight_decay", cfg.weight_decay},
            {"alpha", cfg.alpha},
            {"nu_y", cfg.nu_y},
            {"nu_z", cfg.nu_z},
            {"clamp_eps", cfg.clamp_eps},
            {"gauss_sigma", cfg.gauss_sigma},
            {"knn_k", cfg.knn_k},
            {"r_lo", cfg.r_lo},
            {"r_hi", cfg.r_hi},
            {"seed", cfg.seed},
            {"mode", mode},
            {"f_dims", f_dims},
            {"g_dims", g_dims}};
  }
  static TrainOpts from_json(const json& j) {
    TrainOpts o;
    o.input = j.at("input");
    o.label_col = j.value("label_col", "");
    o.out_dir = j.at("out_dir");
    o.scale = j.at("scale");
    o.cfg.epochs = j.at("epochs");
    o.cfg.batch_size = j.at("batch_size");
    o.cfg.lr = j.at("lr");
    o.cfg.weight_decay = j.at("weight_decay");
    o.cfg.alpha = j.at("alpha");
    o.cfg.nu_y = j.at("nu_y");
    o.cfg.nu_z = j.at("nu_z");
    o.cfg.clamp_eps = j.at("clamp_eps");
    o.cfg.gauss_sigma = j.at("gauss_sigma");
    o.cfg.knn_k = j.at("knn_k");
    o.cfg.r_lo = j.at("r_lo");
    o.cfg.r_hi = j.at("r_hi");
    o.cfg.seed = j.at("seed");
    o.mode = j.at("mode");
    o.f_dims = j.at("f_dims").get<std::vector<int>>();
    o.g_dims = j.at("g_dims").get<std::vector<int>>();
    return o;
  }
};

Matrix apply_scale(const Matrix& x, const std::string& scale) {
  if (scale == "standard") return dlme::standardize(x);
  if (scale == "isotropic") return dlme::isotropic_scale(x);
  if (scale == "none") return x;
  throw ConfigError("unknown --scale '" + scale + "' (expected standard|isotropic|none)");
}

int run_train(TrainOpts o) {
  const auto t0 = Clock::now();
  o.cfg.mode = dlme::train_mode_from_string(o.mode);
  o.cfg.f_spec.layer_dims = o.f_dims;
  o.cfg.g_spec.layer_dims = o.g_dims;

  const std::optional<std::string> label_col =
      o.label_col.empty() ? std::nullopt : std::optional(o.label_col);
  const Dataset ds = dlme::load_csv(o.input, label_col);
  const Matrix x = apply_scale(ds.X, o.scale);

  // Fail fast on configuration before any compute.
  o.cfg.validate(x.rows(), x.cols());

  std::filesystem::create_directories(o.out_dir);
  const std::string log_path = o.out_dir + "/train_log.jsonl";
  std::ofstream log(log_path);
  if (!log) throw ConfigError("cannot open " + log_path);

  const int report_every = std::max(1, o.cfg.epochs / 10);
  const dlme::TrainResult result = dlme::train(x, o.cfg, [&](const dlme::EpochStat& s) {
    json line = {{"epoch", s.epoch}, {"mean_loss", s.mean_loss}, {"wall_ms", s.wall_ms}};
    log << line.dump() << "\n";
    if ((s.epoch + 1) % report_every == 0 || s.epoch + 1 == o.cfg.epochs) {
      std::cerr << "epoch " << (s.epoch + 1) << "/" << o.cfg.epochs << " mean_loss "
                << s.mean_loss << "\n";
    }
  });

  const Matrix z = dlme::embed(result.f, result.g, x);
  const std::string emb_path = o.out_dir + "/embedding.csv";
  const std::string ckpt_path = o.out_dir + "/checkpoint.json";
  dlme::save_embedding_csv(emb_path, z, ds.labels);
  dlme::save_checkpoint(ckpt_path, result.f, result.g);

  // The log carries wall-clock timings and is deliberately not listed among
  // the reproducible outputs.
  finish_manifest(o.out_dir + "/manifest.json", "train", o.to_json(), o.cfg.seed,
                  {emb_path, ckpt_path}, t0);
  std::cout << "embedded " << z.rows() << " points into " << z.cols() << "-D; outputs in "
            << o.out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOpts {
  std::string embedding;
  std::string label_col = "label";
  int folds = 10;
  int kmeans_k = 0;  // 0: number of classes
  int restarts = 10;
  std::uint64_t seed = 0;
  std::string output = "eval_report.json";

  json to_json() const {
    return {{"embedding", embedding}, {"label_col", label_col}, {"folds", folds},
            {"kmeans_k", kmeans_k},   {"restarts", restarts},   {"seed", seed},
            {"output", output}};
  }
  static EvalOpts from_json(const json& j) {
    EvalOpts o;
    o.embedding = j.at("embedding");
    o.label_col = j.at("label_col");
    o.folds = j.at("folds");
    o.kmeans_k = j.at("kmeans_k");
    o.restarts = j.at("restarts");
    o.seed = j.at("seed");
    o.output = j.at("output");
    return o;
  }
};

int run_eval(const EvalOpts& o) {
  const auto t0 = Clock::now();
  const Dataset ds = load_points(o.embedding, o.label_col);
  if (!ds.has_labels()) throw ConfigError("eval requires a label column");

  const dlme::SvmResult svm = dlme::linear_svm_cv(ds.X, ds.labels, o.folds, o.seed);
  const int k = o.kmeans_k > 0 ? o.kmeans_k : ds.num_classes();
  const dlme::KMeansResult km = dlme::kmeans(ds.X, k, o.seed, o.restarts);
  const double acc = dlme::cluster_accuracy(km.assignments, ds.labels);

  json report = {{"linear_acc", svm.mean_acc},
                 {"per_fold", svm.fold_acc},
                 {"fold_count", o.folds},
                 {"cluster_acc", acc},
                 {"kmeans_k", k},
                 {"seed", o.seed}};
  std::ofstream out(o.output);
  if (!out) throw ConfigError("cannot open " + o.output);
  out << report.dump(1) << "\n";
  finish_manifest(o.output + ".manifest.json", "eval", o.to_json(), o.seed, {o.output}, t0);
  std::cout << report.dump(1) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// curvature

struct CurvatureOpts {
  std::string input;
  std::string label_col;
  int knn_k = 8;
  std::string output = "curvature_report.json";

  json to_json() const {
    return {{"input", input}, {"label_col", label_col}, {"knn_k", knn_k}, {"output", output}};
  }
  static CurvatureOpts from_json(const json& j) {
    CurvatureOpts o;
    o.input = j.at("input");
    o.label_col = j.value("label_col", "");
    o.knn_k = j.at("knn_k");
    o.output = j.at("output");
    return o;
  }
};

int run_curvature(const CurvatureOpts& o) {
  const auto t0 = Clock::now();
  const std::optional<std::string> label_col =
      o.label_col.empty() ? std::nullopt : std::optional(o.label_col);
  const Dataset ds = load_points(o.input, label_col);
  const dlme::NeighborGraph g = dlme::build_knn(ds.X, o.knn_k);
  const dlme::CurvatureReport rep = dlme::mean_curvature(ds.X, g);
  const dlme::Hop12Report hop = dlme::hop12_check(ds.X, g);

  json report = {{"mean_abs_k", rep.mean_abs_k},
                 {"signed_sum_k", rep.signed_sum_k},
                 {"used_vertices", rep.used},
                 {"skipped_vertices", rep.skipped_degenerate + rep.skipped_boundary},
                 {"skipped_degenerate", rep.skipped_degenerate},
                 {"skipped_boundary", rep.skipped_boundary},
                 {"hop12_fraction", hop.satisfied_fraction},
                 {"hop12_checked", hop.checked}};
  std::ofstream out(o.output);
  if (!out) throw ConfigError("cannot open " + o.output);
  out << report.dump(1) << "\n";
  finish_manifest(o.output + ".manifest.json", "curvature", o.to_json(), 0, {o.output}, t0);
  std::cout << report.dump(1) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
  double nu_y = 100.0;
  double nu_z = 10.0;
  double alpha = 0.1;
  int n = 2000;
  int epochs = 150;
  std::uint64_t seed = 0;
  std::string output;

  json to_json() const {
    return {{"nu_y", nu_y}, {"nu_z", nu_z},     {"alpha", alpha}, {"n", n},
            {"epochs", epochs}, {"seed", seed}, {"output", output}};
  }
  static VerifyOpts from_json(const json& j) {
    VerifyOpts o;
    o.nu_y = j.at("nu_y");
    o.nu_z = j.at("nu_z");
    o.alpha = j.at("alpha");
    o.n = j.at("n");
    o.epochs = j.at("epochs");
    o.seed = j.at("seed");
    o.output = j.value("output", "");
    return o;
  }
};

int run_verify(const VerifyOpts& o) {
  const auto t0 = Clock::now();
  json report;
  bool all_ok = true;
  const auto record = [&](const std::string& name, bool ok, json detail) {
    detail["pass"] = ok;
    report[name] = detail;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << " " << detail.dump() << "\n";
    all_ok = all_ok && ok;
  };

  // 1. Push-pull: unique kernel crossover and the contraction/expansion law
  //    on a 1000-point grid.
  {
    const dlme::KernelParams py = dlme::KernelParams::make(o.nu_y);
    const dlme::KernelParams pz = dlme::KernelParams::make(o.nu_z);
    const double dp = dlme::find_crossover(py, pz);
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
      const double d = std::exp(std::log(1e2) * i / 999.0);
      if (std::abs(d - dp) < 1e-9) continue;
      const double dplus = dlme::t_kernel_inverse(dlme::t_kernel(d, py), pz);
      if (!((d - dp) * (dplus - d) > 0.0)) ++violations;
    }
    const double phi_at_dp = dlme::kernel_gap(dp, py, pz);
    record("push_pull_crossover", violations == 0 && std::abs(phi_at_dp) < 1e-12,
           {{"d_p", dp}, {"phi_at_dp", phi_at_dp}, {"grid_violations", violations}});
  }

  // 2. Closed-form loss difference vs the direct evaluation, shared nu and
  //    unit Lipschitz constant, over 100 random batches.
  {
    dlme::Rng rng(o.seed + 1);
    double max_err = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Matrix pts = dlme::uniform_matrix(8, 2, -2.0, 2.0, rng);
      dlme::ad::Tape t;
      const Matrix dz = t.value(dlme::ad::pairwise_dist(t, t.leaf(pts)));
      Matrix a(8, 8, 0.0);
      for (int p = 0; p < 4; ++p) {
        a(2 * p, 2 * p + 1) = 1.0;
        a(2 * p + 1, 2 * p) = 1.0;
      }
      dlme::LossConfig lc;
      lc.alpha = o.alpha;
      lc.nu_y = o.nu_z;
      lc.nu_z = o.nu_z;
      const dlme::ad::NodeId dzn = t.leaf(dz);
      const double direct = t.value(dlme::dlme_loss(t, t.leaf(dz), dzn, a, lc))(0, 0) -
                            t.value(dlme::contrastive_loss(t, dzn, a, lc, o.nu_z))(0, 0);
      const double closed = dlme::loss_difference_closed_form(dz, a, o.alpha, 1.0, o.nu_z);
      max_err = std::max(max_err, std::abs(direct - closed));
    }
    record("loss_difference_identity", max_err < 1e-8, {{"max_abs_err", max_err}});
  }

  // 3. Homologous per-pair loss difference shrinks monotonically as
  //    alpha -> 0.
  {
    bool monotone = true;
    for (double d : {0.5, 1.0, 3.0, 10.0}) {
      double prev = std::abs(dlme::loss_difference_pair_term(d, 1, 1e-1, 1.0, o.nu_z));
      for (double alpha : {1e-2, 1e-3}) {
        const double cur = std::abs(dlme::loss_difference_pair_term(d, 1, alpha, 1.0, o.nu_z));
        monotone = monotone && cur < prev;
        prev = cur;
      }
    }
    record("alpha_limit_monotone", monotone, json::object());
  }

  // 4. Curvature decreases from input to embedding on the twain swiss roll,
  //    same neighbor topology on both sides.
  {
    const Dataset ds = dlme::gen_twain_swiss_roll(o.n, dlme::kTwainDefaultGap, 0.05, o.seed);
    const Matrix x = dlme::isotropic_scale(ds.X);
    dlme::TrainConfig cfg;
    cfg.epochs = o.epochs;
    cfg.nu_y = o.nu_y;
    cfg.nu_z = o.nu_z;
    cfg.alpha = o.alpha;
    cfg.seed = o.seed;
    const dlme::TrainResult result = dlme::train(x, cfg);
    const Matrix z = dlme::embed(result.f, result.g, x);
    const dlme::NeighborGraph g = dlme::build_knn(x, 8);
    const dlme::CurvatureReport kin = dlme::mean_curvature(x, g);
    const dlme::CurvatureReport kout = dlme::mean_curvature(z, g);
    const bool ok = kin.used > 0 && kout.used > 0 && kout.mean_abs_k < kin.mean_abs_k;
    record("curvature_decrease", ok,
           {{"input_mean_abs_k", kin.mean_abs_k},
            {"embedding_mean_abs_k", kout.mean_abs_k},
            {"input_used", kin.used},
            {"embedding_used", kout.used}});
  }

  if (!o.output.empty()) {
    std::ofstream out(o.output);
    if (!out) throw ConfigError("cannot open " + o.output);
    out << report.dump(1) << "\n";
    finish_manifest(o.output + ".manifest.json", "verify", o.to_json(), o.seed, {o.output}, t0);
  }
  if (!all_ok) throw dlme::NumericError("verification failed");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// plot

struct PlotOpts {
  std::string embedding;
  std::string label_col = "label";
  std::string output = "plot.svg";
  int width = 800;
  int height = 640;
  std::string title;

  json to_json() const {
    return {{"embedding", embedding}, {"label_col", label_col}, {"output", output},
            {"width", width},         {"height", height},       {"title", title}};
  }
  static PlotOpts from_json(const json& j) {
    PlotOpts o;
    o.embedding = j.at("embedding");
    o.label_col = j.at("label_col");
    o.output = j.at("output");
    o.width = j.at("width");
    o.height = j.at("height");
    o.title = j.value("title", "");
    return o;
  }
};

int run_plot(const PlotOpts& o) {
  const auto t0 = Clock::now();
  const std::optional<std::string> label_col =
      o.label_col.empty() ? std::nullopt : std::optional(o.label_col);
  const Dataset ds = load_points(o.embedding, label_col);
  if (ds.X.cols() != 2) {
    throw ConfigError("plot expects a 2-D embedding, got " + std::to_string(ds.X.cols()) +
                      " feature columns");
  }
  dlme::PlotOptions popts;
  popts.width = o.width;
  popts.height = o.height;
  popts.title = o.title;
  dlme::write_scatter_svg(o.output, ds.X, ds.labels, popts);
  finish_manifest(o.output + ".manifest.json", "plot", o.to_json(), 0, {o.output}, t0);
  std::cout << "wrote " << o.output << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// replay

int run_replay(const std::string& manifest_path, const std::string& out_dir_override) {
  const dlme::RunManifest m = dlme::read_manifest(manifest_path);
  if (m.command == "gen-data") return run_gen_data(GenDataOpts::from_json(m.config));
  if (m.command == "train") {
    TrainOpts o = TrainOpts::from_json(m.config);
    if (!out_dir_override.empty()) o.out_dir = out_dir_override;
    return run_train(o);
  }
  if (m.command == "eval") return run_eval(EvalOpts::from_json(m.config));
  if (m.command == "curvature") return run_curvature(CurvatureOpts::from_json(m.config));
  if (m.command == "verify") return run_verify(VerifyOpts::from_json(m.config));
  if (m.command == "plot") return run_plot(PlotOpts::from_json(m.config));
  throw ConfigError("manifest records unknown command '" + m.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local-flatness manifold embedding toolkit"};
  app.require_subcommand(1);

  std::vector<std::string> raw_args(argv + 1, argv + argc);

  GenDataOpts gen;
  TrainOpts tr;
  EvalOpts ev;
  CurvatureOpts cu;
  VerifyOpts ve;
  PlotOpts pl;
  std::string replay_manifest, replay_out_dir, config_path;

  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a toy manifold dataset as CSV");
  gen_cmd->add_option("--dataset", gen.dataset, "swiss-roll|twain-swiss-roll|starfruit");
  gen_cmd->add_option("--n", gen.n, "number of points");
  gen_cmd->add_option("--noise", gen.noise, "isotropic noise sigma");
  gen_cmd->add_option("--gap", gen.gap, "twain inter-sheet gap");
  gen_cmd->add_option("--lobes", gen.lobes, "starfruit lobe count");
  gen_cmd->add_option("--eps", gen.eps, "starfruit lobe depth");
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("--output", gen.output, "output CSV path");

  auto* train_cmd = app.add_subcommand("train", "Train the two-network embedding");
  train_cmd->add_option("--input", tr.input, "input CSV")->required();
  train_cmd->add_option("--label-col", tr.label_col, "label column name or index");
  train_cmd->add_option("--out-dir", tr.out_dir, "output directory");
  train_cmd->add_option("--scale", tr.scale, "standard|isotropic|none");
  train_cmd->add_option("--epochs", tr.cfg.epochs);
  train_cmd->add_option("--batch-size", tr.cfg.batch_size);
  train_cmd->add_option("--lr", tr.cfg.lr);
  train_cmd->add_option("--weight-decay", tr.cfg.weight_decay);
  train_cmd->add_option("--alpha", tr.cfg.alpha, "homologous distance shrink factor");
  train_cmd->add_option("--nu-y", tr.cfg.nu_y, "structure-space kernel dof");
  train_cmd->add_option("--nu-z", tr.cfg.nu_z, "embedding-space kernel dof");
  train_cmd->add_option("--clamp-eps", tr.cfg.clamp_eps);
  train_cmd->add_option("--gauss-sigma", tr.cfg.gauss_sigma);
  train_cmd->add_option("--knn-k", tr.cfg.knn_k, "augmentation neighbor count");
  train_cmd->add_option("--r-lo", tr.cfg.r_lo);
  train_cmd->add_option("--r-hi", tr.cfg.r_hi);
  train_cmd->add_option("--seed", tr.cfg.seed);
  train_cmd->add_option("--mode", tr.mode, "dlme|a1|a2|a3");
  train_cmd->add_option("--f-dims", tr.f_dims, "structure net widths")->delimiter(',');
  train_cmd->add_option("--g-dims", tr.g_dims, "embedding net widths")->delimiter(',');

  auto* eval_cmd = app.add_subcommand("eval", "Linear and clustering accuracy of an embedding");
  eval_cmd->add_option("--embedding", ev.embedding, "embedding CSV")->required();
  eval_cmd->add_option("--label-col", ev.label_col);
  eval_cmd->add_option("--folds", ev.folds);
  eval_cmd->add_option("--kmeans-k", ev.kmeans_k, "0 uses the class count");
  eval_cmd->add_option("--restarts", ev.restarts);
  eval_cmd->add_option("--seed", ev.seed);
  eval_cmd->add_option("--output", ev.output);

  auto* curv_cmd = app.add_subcommand("curvature", "Angle-deficit curvature report");
  curv_cmd->add_option("--input", cu.input, "point CSV")->required();
  curv_cmd->add_option("--label-col", cu.label_col, "column to exclude from coordinates");
  curv_cmd->add_option("--knn-k", cu.knn_k);
  curv_cmd->add_option("--output", cu.output);

  auto* verify_cmd = app.add_subcommand("verify", "Numeric verification of the core claims");
  verify_cmd->add_option("--nu-y", ve.nu_y);
  verify_cmd->add_option("--nu-z", ve.nu_z);
  verify_cmd->add_option("--alpha", ve.alpha);
  verify_cmd->add_option("--n", ve.n, "twain swiss roll size for the curvature check");
  verify_cmd->add_option("--epochs", ve.epochs);
  verify_cmd->add_option("--seed", ve.seed);
  verify_cmd->add_option("--output", ve.output, "optional JSON report path");

  auto* plot_cmd = app.add_subcommand("plot", "Scatter SVG of a 2-D embedding");
  plot_cmd->add_option("--embedding", pl.embedding, "embedding CSV")->required();
  plot_cmd->add_option("--label-col", pl.label_col);
  plot_cmd->add_option("--output", pl.output);
  plot_cmd->add_option("--width", pl.width);
  plot_cmd->add_option("--height", pl.height);
  plot_cmd->add_option("--title", pl.title);

  auto* replay_cmd = app.add_subcommand("replay", "Re-run a recorded manifest");
  replay_cmd->add_option("--manifest", replay_manifest, "manifest JSON path")->required();
  replay_cmd->add_option("--out-dir", replay_out_dir, "override output directory (train)");

  for (auto* cmd : {gen_cmd, train_cmd, eval_cmd, curv_cmd, verify_cmd, plot_cmd}) {
    cmd->add_option("--config", config_path, "JSON config file (flags win on conflict)");
  }

  try {
    app.parse(argc, argv);

    const json cfg = load_config_file(raw_args);
    if (!cfg.empty()) {
      CLI::App* sub = app.get_subcommands().front();
      // Config keys follow the manifest layout: underscores where the flag
      // uses dashes, so a manifest's config block is a valid config file.
      const auto fill = [&](const std::string& flag, auto& value) {
        std::string key = flag.substr(2);
        std::replace(key.begin(), key.end(), '-', '_');
        fallback(sub->get_option_no_throw(flag), cfg, key, value);
      };
      if (sub == gen_cmd) {
        fill("--dataset", gen.dataset);
        fill("--n", gen.n);
        fill("--noise", gen.noise);
        fill("--gap", gen.gap);
        fill("--lobes", gen.lobes);
        fill("--eps", gen.eps);
        fill("--seed", gen.seed);
        fill("--output", gen.output);
      } else if (sub == train_cmd) {
        fill("--input", tr.input);
        fill("--label-col", tr.label_col);
        fill("--out-dir", tr.out_dir);
        fill("--scale", tr.scale);
        fill("--epochs", tr.cfg.epochs);
        fill("--batch-size", tr.cfg.batch_size);
        fill("--lr", tr.cfg.lr);
        fill("--weight-decay", tr.cfg.weight_decay);
        fill("--alpha", tr.cfg.alpha);
        fill("--nu-y", tr.cfg.nu_y);
        fill("--nu-z", tr.cfg.nu_z);
        fill("--clamp-eps", tr.cfg.clamp_eps);
        fill("--gauss-sigma", tr.cfg.gauss_sigma);
        fill("--knn-k", tr.cfg.knn_k);
        fill("--r-lo", tr.cfg.r_lo);
        fill("--r-hi", tr.cfg.r_hi);
        fill("--seed", tr.cfg.seed);
        fill("--mode", tr.mode);
        fill("--f-dims", tr.f_dims);
        fill("--g-dims", tr.g_dims);
      } else if (sub == eval_cmd) {
        fill("--embedding", ev.embedding);
        fill("--label-col", ev.label_col);
        fill("--folds", ev.folds);
        fill("--kmeans-k", ev.kmeans_k);
        fill("--restarts", ev.restarts);
        fill("--seed", ev.seed);
        fill("--output", ev.output);
      } else if (sub == curv_cmd) {
        fill("--input", cu.input);
        fill("--label-col", cu.label_col);
        fill("--knn-k", cu.knn_k);
        fill("--output", cu.output);
      } else if (sub == verify_cmd) {
        fill("--nu-y", ve.nu_y);
        fill("--nu-z", ve.nu_z);
        fill("--alpha", ve.alpha);
        fill("--n", ve.n);
        fill("--epochs", ve.epochs);
        fill("--seed", ve.seed);
        fill("--output", ve.output);
      } else if (sub == plot_cmd) {
        fill("--embedding", pl.embedding);
        fill("--label-col", pl.label_col);
        fill("--output", pl.output);
        fill("--width", pl.width);
        fill("--height", pl.height);
        fill("--title", pl.title);
      }
    }

    if (gen_cmd->parsed()) return run_gen_data(gen);
    if (train_cmd->parsed()) return run_train(tr);
    if (eval_cmd->parsed()) return run_eval(ev);
    if (curv_cmd->parsed()) return run_curvature(cu);
    if (verify_cmd->parsed()) return run_verify(ve);
    if (plot_cmd->parsed()) return run_plot(pl);
    if (replay_cmd->parsed()) return run_replay(replay_manifest, replay_out_dir);
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  } catch (const dlme::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const dlme::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dlme::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dlme::GenerationError& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dlme::ContractError& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
