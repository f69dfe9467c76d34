#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "specbench/dataset.hpp"
#include "specbench/filterbank.hpp"

namespace specbench {

// Fully connected net bands -> Q -> hidden... -> classes. Rectifier plus
// dropout after every hidden linear layer, including the first; the first
// layer's weight rows are the spectral filter bank.
struct MlpModel {
  std::vector<Eigen::MatrixXd> w;  // layer l maps w[l].cols() -> w[l].rows()
  std::vector<Eigen::VectorXd> b;
  double dropout = 0.1;

  int inputs() const { return w.empty() ? 0 : int(w.front().cols()); }
  int classes() const { return w.empty() ? 0 : int(w.back().rows()); }
  int filter_count() const { return w.empty() ? 0 : int(w.front().rows()); }
  int layer_count() const { return int(w.size()); }
};

struct MlpConfig {
  int filters = 5;  // Q
  std::vector<int> hidden = {64, 32, 16};
  double dropout = 0.1;
  double lr = 1e-3;
  int epochs = 60;
  int batch = 256;
  uint64_t seed = 0;
};

// Top-Q principal directions of the mean-centered rows, orthonormal, each
// row's largest-magnitude entry made positive. x is samples-by-bands.
Eigen::MatrixXd pca_init(const Eigen::MatrixXd& x, int q);

// Mean softmax cross-entropy over the batch (columns of x) and its gradients.
// masks, when given, are the per-layer inverted-dropout scale factors.
double mlp_loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& x,
                              const std::vector<int>& y, std::vector<Eigen::MatrixXd>& gw,
                              std::vector<Eigen::VectorXd>& gb,
                              const std::vector<Eigen::MatrixXd>* masks = nullptr);

// Mini-batch SGD on cross-entropy; PCA first layer, Glorot uniform elsewhere;
// returns the epoch checkpoint with the best validation accuracy.
MlpModel train_mlp(const LabeledSpectra& data, const MlpConfig& cfg);

Eigen::VectorXd mlp_logits(const MlpModel& model, const Eigen::VectorXd& x);

// Skips the first linear map: feed optically captured features, add the first
// bias, and run the rest of the net.
Eigen::VectorXd mlp_tail_logits(const MlpModel& model, const Eigen::VectorXd& features);

double mlp_accuracy(const MlpModel& model, const LabeledSpectra& data, Split split);

SpectralFilterBank extract_filters(const MlpModel& model);

// key=value header + little-endian f32 blobs in layer order (w then b).
void save_mlp(const MlpModel& model, const std::string& path);
MlpModel load_mlp(const std::string& path);

}  // namespace specbench
