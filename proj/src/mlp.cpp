#include "specbench/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "specbench/common.hpp"
#include "specbench/io.hpp"

namespace specbench {
namespace {

void check_model(const MlpModel& m) {
  if (m.w.empty() || m.w.size() != m.b.size()) throw ValidationError("malformed MLP model");
  for (size_t l = 0; l < m.w.size(); ++l) {
    if (m.b[l].size() != m.w[l].rows()) throw ValidationError("MLP bias shape mismatch");
    if (l > 0 && m.w[l].cols() != m.w[l - 1].rows())
      throw ValidationError("MLP layer shapes do not chain");
  }
  if (!(m.dropout >= 0.0 && m.dropout < 1.0)) throw ValidationError("dropout must be in [0,1)");
}

Eigen::VectorXd run_tail(const MlpModel& m, Eigen::VectorXd a, size_t first_hidden) {
  // a holds the pre-activation of layer first_hidden.
  for (size_t l = first_hidden; l + 1 < m.w.size(); ++l) {
    a = a.cwiseMax(0.0);
    a = (m.w[l + 1] * a + m.b[l + 1]).eval();
  }
  return a;
}

}  // namespace

Eigen::MatrixXd pca_init(const Eigen::MatrixXd& x, int q) {
  const int n = int(x.rows()), b = int(x.cols());
  if (n < 2) throw ValidationError("PCA needs at least two samples");
  if (q < 1 || q > b) throw ValidationError("component count out of range");

  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / double(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw ValidationError("PCA eigendecomposition failed");
  const Eigen::VectorXd evals = solver.eigenvalues();  // ascending
  const double top = std::max(evals(b - 1), 0.0);
  int rank = 0;
  for (int i = 0; i < b; ++i)
    if (evals(i) > std::max(1e-12 * top, 1e-300)) ++rank;
  if (q > rank) throw ValidationError("requested components exceed data rank");

  Eigen::MatrixXd rows(q, b);
  for (int i = 0; i < q; ++i) {
    Eigen::VectorXd v = solver.eigenvectors().col(b - 1 - i);
    int arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    rows.row(i) = v.transpose();
  }
  return rows;
}

double mlp_loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& x,
                              const std::vector<int>& y, std::vector<Eigen::MatrixXd>& gw,
                              std::vector<Eigen::VectorXd>& gb,
                              const std::vector<Eigen::MatrixXd>* masks) {
  check_model(model);
  const int n = int(x.cols());
  if (n == 0 || int(y.size()) != n) throw ValidationError("batch shape mismatch");
  const size_t layers = model.w.size();
  if (masks && masks->size() != layers - 1) throw ValidationError("one mask per hidden layer");

  // Forward; activations[l] is the input to layer l.
  std::vector<Eigen::MatrixXd> activations(layers);
  std::vector<Eigen::MatrixXd> pre(layers);
  activations[0] = x;
  for (size_t l = 0; l < layers; ++l) {
    pre[l] = (model.w[l] * activations[l]).colwise() + model.b[l];
    if (l + 1 < layers) {
      Eigen::MatrixXd a = pre[l].cwiseMax(0.0);
      if (masks) a = a.cwiseProduct((*masks)[l]);
      activations[l + 1] = std::move(a);
    }
  }

  // Stable softmax cross-entropy.
  Eigen::MatrixXd z = pre[layers - 1];
  const int k = int(z.rows());
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    if (y[size_t(i)] < 0 || y[size_t(i)] >= k) throw ValidationError("label out of range");
    const double mx = z.col(i).maxCoeff();
    z.col(i) = (z.col(i).array() - mx).exp();
    const double sum = z.col(i).sum();
    loss -= std::log(z.col(i)(y[size_t(i)]) / sum);
    z.col(i) /= sum;
  }
  loss /= n;

  // Backward.
  gw.assign(layers, Eigen::MatrixXd());
  gb.assign(layers, Eigen::VectorXd());
  Eigen::MatrixXd delta = z;  // softmax - onehot, scaled by 1/n
  for (int i = 0; i < n; ++i) delta(y[size_t(i)], i) -= 1.0;
  delta /= double(n);

  for (size_t l = layers; l-- > 0;) {
    gw[l] = delta * activations[l].transpose();
    gb[l] = delta.rowwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd da = model.w[l].transpose() * delta;
    if (masks) da = da.cwiseProduct((*masks)[l - 1]);
    delta = da.cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
  }
  return loss;
}

MlpModel train_mlp(const LabeledSpectra& data, const MlpConfig& cfg) {
  validate_spectra(data);
  if (cfg.filters < 1 || cfg.lr <= 0.0 || cfg.epochs < 1 || cfg.batch < 1)
    throw ValidationError("bad MLP training configuration");
  if (!(cfg.dropout >= 0.0 && cfg.dropout < 1.0)) throw ValidationError("dropout must be in [0,1)");
  const auto train_rows = data.indices_of(Split::Train);
  auto val_rows = data.indices_of(Split::Val);
  if (train_rows.empty()) throw ValidationError("empty train split");
  if (val_rows.empty()) val_rows = train_rows;  // fall back: select on train

  const int b = data.bands, k = data.num_classes;
  Eigen::MatrixXd xt(b, int(train_rows.size()));
  std::vector<int> yt(train_rows.size());
  for (size_t i = 0; i < train_rows.size(); ++i) {
    xt.col(int(i)) = Eigen::Map<const Eigen::VectorXd>(data.row(train_rows[i]), b);
    yt[i] = data.y[train_rows[i]];
  }

  std::vector<int> widths = {cfg.filters};
  widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
  widths.push_back(k);

  MlpModel model;
  model.dropout = cfg.dropout;
  model.w.push_back(pca_init(xt.transpose(), cfg.filters));
  model.b.push_back(Eigen::VectorXd::Zero(cfg.filters));
  std::mt19937_64 init_rng(mix_seed(cfg.seed, 0x696e6974u));
  for (size_t l = 1; l < widths.size(); ++l) {
    const int in = widths[l - 1], out = widths[l];
    const double bound = std::sqrt(6.0 / double(in + out));
    std::uniform_real_distribution<double> uni(-bound, bound);
    Eigen::MatrixXd w(out, in);
    for (int r = 0; r < out; ++r)
      for (int c = 0; c < in; ++c) w(r, c) = uni(init_rng);
    model.w.push_back(std::move(w));
    model.b.push_back(Eigen::VectorXd::Zero(out));
  }

  auto accuracy_on = [&](const MlpModel& m, const std::vector<size_t>& rows) {
    size_t hits = 0;
    for (size_t i : rows) {
      const Eigen::VectorXd z =
          mlp_logits(m, Eigen::Map<const Eigen::VectorXd>(data.row(i), b));
      int arg = 0;
      z.maxCoeff(&arg);
      hits += arg == data.y[i];
    }
    return double(hits) / double(rows.size());
  };

  MlpModel best = model;
  double best_acc = accuracy_on(model, val_rows);

  std::mt19937_64 drop_rng(mix_seed(cfg.seed, 0x64726f70u));
  std::uniform_real_distribution<double> drop_uni(0.0, 1.0);
  const double keep = 1.0 - cfg.dropout;
  std::vector<size_t> order(train_rows.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<Eigen::MatrixXd> gw;
  std::vector<Eigen::VectorXd> gb;
  for (int e = 0; e < cfg.epochs; ++e) {
    std::mt19937_64 shuffle_rng(mix_seed(cfg.seed, 0x73687566u + uint64_t(e)));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    for (size_t start = 0; start < order.size(); start += size_t(cfg.batch)) {
      const int bs = int(std::min(order.size() - start, size_t(cfg.batch)));
      Eigen::MatrixXd xb(b, bs);
      std::vector<int> yb(static_cast<size_t>(bs));
      for (int i = 0; i < bs; ++i) {
        xb.col(i) = xt.col(int(order[start + size_t(i)]));
        yb[size_t(i)] = yt[order[start + size_t(i)]];
      }

      std::vector<Eigen::MatrixXd> masks;
      const std::vector<Eigen::MatrixXd>* mask_ptr = nullptr;
      if (cfg.dropout > 0.0) {
        for (size_t l = 0; l + 1 < model.w.size(); ++l) {
          Eigen::MatrixXd m(model.w[l].rows(), bs);
          for (int c = 0; c < bs; ++c)
            for (int r = 0; r < m.rows(); ++r)
              m(r, c) = drop_uni(drop_rng) < keep ? 1.0 / keep : 0.0;
          masks.push_back(std::move(m));
        }
        mask_ptr = &masks;
      }

      const double loss = mlp_loss_and_gradients(model, xb, yb, gw, gb, mask_ptr);
      if (!is_finite(loss)) throw TrainingError("MLP loss diverged", e);
      for (size_t l = 0; l < model.w.size(); ++l) {
        model.w[l] -= cfg.lr * gw[l];
        model.b[l] -= cfg.lr * gb[l];
      }
    }

    const double acc = accuracy_on(model, val_rows);
    if (acc > best_acc) {
      best_acc = acc;
      best = model;
    }
  }
  return best;
}

Eigen::VectorXd mlp_logits(const MlpModel& model, const Eigen::VectorXd& x) {
  check_model(model);
  if (x.size() != model.inputs()) throw ValidationError("input size mismatch");
  return run_tail(model, model.w[0] * x + model.b[0], 0);
}

Eigen::VectorXd mlp_tail_logits(const MlpModel& model, const Eigen::VectorXd& features) {
  check_model(model);
  if (features.size() != model.filter_count()) throw ValidationError("feature count mismatch");
  return run_tail(model, features + model.b[0], 0);
}

double mlp_accuracy(const MlpModel& model, const LabeledSpectra& data, Split split) {
  const auto rows = data.indices_of(split);
  if (rows.empty()) throw ValidationError("accuracy over empty split");
  size_t hits = 0;
  for (size_t i : rows) {
    const Eigen::VectorXd z =
        mlp_logits(model, Eigen::Map<const Eigen::VectorXd>(data.row(i), data.bands));
    int arg = 0;
    z.maxCoeff(&arg);
    hits += arg == data.y[i];
  }
  return double(hits) / double(rows.size());
}

SpectralFilterBank extract_filters(const MlpModel& model) {
  check_model(model);
  SpectralFilterBank bank;
  for (int r = 0; r < model.filter_count(); ++r) {
    std::vector<double> row(size_t(model.inputs()));
    for (int c = 0; c < model.inputs(); ++c) row[size_t(c)] = model.w[0](r, c);
    bank.filters.push_back(std::move(row));
    bank.offsets.push_back(model.b[0](r));
  }
  bank.source = "mlp";
  bank.id = "mlp-" + std::to_string(model.filter_count());
  validate_bank(bank);
  return bank;
}

void save_mlp(const MlpModel& model, const std::string& path) {
  check_model(model);
  KeyValues kv;
  kv.emplace_back("type", "mlp");
  kv.emplace_back("layers", std::to_string(model.layer_count()));
  for (int l = 0; l < model.layer_count(); ++l) {
    kv.emplace_back("shape_" + std::to_string(l), std::to_string(model.w[size_t(l)].rows()) +
                                                      "x" + std::to_string(model.w[size_t(l)].cols()));
  }
  kv.emplace_back("dropout", format_double(model.dropout));
  std::vector<float> blob;
  for (int l = 0; l < model.layer_count(); ++l) {
    const auto& w = model.w[size_t(l)];
    for (int r = 0; r < w.rows(); ++r)
      for (int c = 0; c < w.cols(); ++c) blob.push_back(float(w(r, c)));
    for (int r = 0; r < model.b[size_t(l)].size(); ++r)
      blob.push_back(float(model.b[size_t(l)](r)));
  }
  save_model_file(kv, blob, path);
}

MlpModel load_mlp(const std::string& path) {
  const auto [kv, blob] = load_model_file(path);
  if (kv_get(kv, "type") != "mlp")
    throw ParseError(ParseError::Kind::Malformed, path + ": not an MLP model file");
  const int layers = std::stoi(kv_get(kv, "layers"));
  if (layers < 1 || layers > 64)
    throw ParseError(ParseError::Kind::Malformed, path + ": bad layer count");

  MlpModel m;
  m.dropout = std::stod(kv_get(kv, "dropout"));
  size_t p = 0;
  auto take = [&](size_t n) {
    if (p + n > blob.size())
      throw ParseError(ParseError::Kind::Truncated, path + ": MLP blob too short");
    const size_t at = p;
    p += n;
    return at;
  };
  for (int l = 0; l < layers; ++l) {
    const std::string shape = kv_get(kv, "shape_" + std::to_string(l));
    const size_t x = shape.find('x');
    if (x == std::string::npos)
      throw ParseError(ParseError::Kind::Malformed, path + ": bad shape '" + shape + "'");
    const int rows = std::stoi(shape.substr(0, x));
    const int cols = std::stoi(shape.substr(x + 1));
    if (rows <= 0 || cols <= 0)
      throw ParseError(ParseError::Kind::Malformed, path + ": bad shape '" + shape + "'");
    Eigen::MatrixXd w(rows, cols);
    size_t at = take(size_t(rows) * cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) w(r, c) = blob[at++];
    Eigen::VectorXd b(rows);
    at = take(size_t(rows));
    for (int r = 0; r < rows; ++r) b(r) = blob[at++];
    m.w.push_back(std::move(w));
    m.b.push_back(std::move(b));
  }
  if (p != blob.size())
    throw ParseError(ParseError::Kind::Malformed, path + ": trailing bytes in blob");
  check_model(m);
  return m;
}

}  // namespace specbench
