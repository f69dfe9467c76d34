// Dataset handling, linear SVM training, PCA, and the small dense net.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "specbench/dataset.hpp"
#include "specbench/mlp.hpp"
#include "specbench/svm.hpp"
#include "specbench/threads.hpp"
#include "testutil.hpp"

using namespace specbench;

namespace {

LabeledSpectra single_class(int n) {
  LabeledSpectra d;
  d.bands = 2;
  d.num_classes = 1;
  for (int i = 0; i < n; ++i) {
    d.x.push_back(0.4 + 1e-3 * i);
    d.x.push_back(0.6 - 1e-3 * i);
    d.y.push_back(0);
    d.split.push_back(Split::Train);
  }
  return d;
}

// Two well separated 2D blobs, everything marked train.
LabeledSpectra two_blobs(int per_class, uint64_t seed, double jitter = 0.05) {
  LabeledSpectra d;
  d.bands = 2;
  d.num_classes = 2;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 2; ++k) {
    const double cx = k == 0 ? 0.25 : 0.75;
    for (int i = 0; i < per_class; ++i) {
      const double x0 = cx + oracles::uniform(rng, -jitter, jitter);
      d.x.push_back(x0);
      d.x.push_back(1.0 - x0);
      d.y.push_back(uint16_t(k));
      d.split.push_back(Split::Train);
    }
  }
  return d;
}

std::array<size_t, 3> split_counts(const LabeledSpectra& d, int klass = -1) {
  std::array<size_t, 3> n{0, 0, 0};
  for (size_t i = 0; i < d.count(); ++i) {
    if (klass >= 0 && d.y[i] != klass) continue;
    n[size_t(d.split[i])]++;
  }
  return n;
}

// Sum-normalized template spectra with multiplicative jitter, two classes.
LabeledSpectra template_spectra(int per_class, uint64_t seed) {
  const int bands = 8;
  std::vector<std::vector<double>> tmpl(2, std::vector<double>(bands, 0.05));
  for (int b = 0; b < bands; ++b) {
    tmpl[0][size_t(b)] += std::exp(-0.5 * (b - 2.0) * (b - 2.0));
    tmpl[1][size_t(b)] += std::exp(-0.5 * (b - 5.0) * (b - 5.0));
  }
  LabeledSpectra d;
  d.bands = bands;
  d.num_classes = 2;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < per_class; ++i) {
      std::vector<double> row(tmpl[size_t(k)]);
      for (auto& v : row) v *= oracles::uniform(rng, 0.9, 1.1);
      row = sum_normalize(row);
      d.x.insert(d.x.end(), row.begin(), row.end());
      d.y.push_back(uint16_t(k));
      d.split.push_back(Split::Train);
    }
  return d;
}

MlpModel random_model(const std::vector<int>& sizes, uint64_t seed) {
  MlpModel m;
  m.dropout = 0.0;
  std::mt19937_64 rng(seed);
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    Eigen::MatrixXd w(sizes[l + 1], sizes[l]);
    Eigen::VectorXd b(sizes[l + 1]);
    for (int r = 0; r < w.rows(); ++r) {
      for (int c = 0; c < w.cols(); ++c) w(r, c) = oracles::uniform(rng, -0.8, 0.8);
      b(r) = oracles::uniform(rng, -0.3, 0.3);
    }
    m.w.push_back(std::move(w));
    m.b.push_back(std::move(b));
  }
  return m;
}

double max_weight_gap(const SvmModel& a, const SvmModel& b) {
  double worst = 0.0;
  for (size_t k = 0; k < a.w.size(); ++k) {
    worst = std::max(worst, std::abs(a.c[k] - b.c[k]));
    for (size_t j = 0; j < a.w[k].size(); ++j)
      worst = std::max(worst, std::abs(a.w[k][j] - b.w[k][j]));
  }
  return worst;
}

}  // namespace

TEST_CASE("split honors per-class fractions") {
  auto d = single_class(100);
  split_dataset(d, 0.20, 0.05, 0.75, 11);
  const auto n = split_counts(d);
  CHECK(n[0] == 20);
  CHECK(n[1] == 5);
  CHECK(n[2] == 75);

  auto d2 = two_blobs(0, 0);
  d2 = two_blobs(50, 1);
  // unbalance: drop class 1 down to 40 rows
  LabeledSpectra d3;
  d3.bands = d2.bands;
  d3.num_classes = 2;
  int kept1 = 0;
  for (size_t i = 0; i < d2.count(); ++i) {
    if (d2.y[i] == 1 && kept1 >= 40) continue;
    if (d2.y[i] == 1) ++kept1;
    d3.x.insert(d3.x.end(), d2.x.begin() + long(i) * 2, d2.x.begin() + long(i) * 2 + 2);
    d3.y.push_back(d2.y[i]);
    d3.split.push_back(Split::Train);
  }
  split_dataset(d3, 0.5, 0.25, 0.25, 4);
  const auto c0 = split_counts(d3, 0);
  const auto c1 = split_counts(d3, 1);
  CHECK(c0 == std::array<size_t, 3>{25, 13, 12});
  CHECK(c1 == std::array<size_t, 3>{20, 10, 10});
}

TEST_CASE("split sends the rounding remainder to test") {
  auto d = single_class(7);
  split_dataset(d, 0.5, 0.25, 0.25, 0);
  CHECK(split_counts(d) == std::array<size_t, 3>{4, 2, 1});
}

TEST_CASE("split with train fraction one keeps everything in train") {
  auto d = single_class(9);
  split_dataset(d, 1.0, 0.0, 0.0, 5);
  CHECK(split_counts(d) == std::array<size_t, 3>{9, 0, 0});
}

TEST_CASE("split reshuffles between seeds without changing counts") {
  auto a = single_class(40), b = single_class(40);
  split_dataset(a, 0.5, 0.25, 0.25, 1);
  split_dataset(b, 0.5, 0.25, 0.25, 2);
  CHECK(split_counts(a) == split_counts(b));
  CHECK(a.split != b.split);

  auto c = single_class(40);
  split_dataset(c, 0.5, 0.25, 0.25, 1);
  CHECK(a.split == c.split);
}

TEST_CASE("split rejects classes smaller than the active split count") {
  auto d = two_blobs(30, 3);
  // shrink class 1 to two samples
  LabeledSpectra small;
  small.bands = 2;
  small.num_classes = 2;
  int kept = 0;
  for (size_t i = 0; i < d.count(); ++i) {
    if (d.y[i] == 1 && kept >= 2) continue;
    if (d.y[i] == 1) ++kept;
    small.x.insert(small.x.end(), d.x.begin() + long(i) * 2, d.x.begin() + long(i) * 2 + 2);
    small.y.push_back(d.y[i]);
    small.split.push_back(Split::Train);
  }
  CHECK_THROWS_AS(split_dataset(small, 0.5, 0.25, 0.25, 0), ValidationError);
}

TEST_CASE("split validates fractions") {
  auto d = single_class(10);
  CHECK_THROWS_AS(split_dataset(d, 0.8, 0.3, 0.1, 0), ValidationError);
  CHECK_THROWS_AS(split_dataset(d, -0.1, 0.5, 0.5, 0), ValidationError);
  CHECK_THROWS_AS(split_dataset(d, 0.0, 0.0, 0.0, 0), ValidationError);
}

TEST_CASE("sum normalization rescales to unit mass") {
  const auto out = sum_normalize({1.0, 3.0});
  CHECK(out[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(sum_normalize({0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(sum_normalize({1.0, -0.5}), ValidationError);
}

TEST_CASE("spectra from a cube keep labeled non-dark pixels") {
  WavelengthGrid g{600.0, 660.0, 3};
  HsiCube cube(2, 2, g);
  // band-major planes; pixel order: (0,0) (1,0) (0,1) (1,1)
  const double vals[3][4] = {{1.0, 2.0, 5.0, 0.0},
                             {2.0, 2.0, 5.0, 0.0},
                             {1.0, 4.0, 5.0, 0.0}};
  for (int b = 0; b < 3; ++b)
    for (int p = 0; p < 4; ++p) cube.data[size_t(b) * 4 + p] = vals[b][p];

  LabelMap labels;
  labels.width = 2;
  labels.height = 2;
  labels.num_classes = 2;
  labels.labels = {0, 1, kInvalidLabel, 0};  // last pixel is dark, drop it
  labels.class_names = {"a", "b"};

  const auto d = spectra_from_cube(cube, labels);
  CHECK(d.count() == 2);
  CHECK(d.bands == 3);
  CHECK(d.num_classes == 2);
  CHECK(d.y == std::vector<uint16_t>{0, 1});
  CHECK(d.x[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(d.x[3] == doctest::Approx(0.25).epsilon(1e-15));
  for (int r = 0; r < 2; ++r) {
    double s = 0.0;
    for (int b = 0; b < 3; ++b) s += d.x[size_t(r) * 3 + b];
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }

  LabelMap wrong = labels;
  wrong.width = 1;
  wrong.labels = {0, 1};
  CHECK_THROWS_AS(spectra_from_cube(cube, wrong), ValidationError);
}

TEST_CASE("binary objective at the origin is exactly one") {
  auto d = two_blobs(15, 9);
  std::vector<size_t> rows(d.count());
  for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  const std::vector<double> w0(2, 0.0);
  CHECK(svm_binary_objective(w0, 0.0, 0.37, d, rows, 0) == 1.0);
  CHECK(svm_binary_objective(w0, 0.0, 0.37, d, rows, 1) == 1.0);

  // one sample, margin 2: hinge 0, only the penalty remains
  LabeledSpectra one;
  one.bands = 1;
  one.num_classes = 1;
  one.x = {2.0};
  one.y = {0};
  one.split = {Split::Train};
  CHECK(svm_binary_objective({1.0}, 0.0, 0.1, one, {0}, 0) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("svm separates a one-dimensional two-class problem") {
  LabeledSpectra d;
  d.bands = 1;
  d.num_classes = 2;
  for (int i = 0; i < 40; ++i) {
    d.x.push_back(i < 20 ? -1.0 : 1.0);
    d.y.push_back(uint16_t(i < 20 ? 0 : 1));
    d.split.push_back(Split::Train);
  }
  const auto model = train_svm(d, 1e-4, 200, 7);
  CHECK(svm_accuracy(model, d, Split::Train) == 1.0);

  std::vector<size_t> rows(d.count());
  for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  for (int k = 0; k < 2; ++k)
    CHECK(svm_binary_objective(model.w[size_t(k)], model.c[size_t(k)], 0.0, d, rows, k) < 1e-3);
}

TEST_CASE("label flip permutes the hyperplane rows exactly") {
  auto d = two_blobs(30, 21, 0.2);
  auto flipped = d;
  for (auto& y : flipped.y) y = uint16_t(1 - y);

  const auto a = train_svm(d, 1e-3, 60, 123);
  const auto b = train_svm(flipped, 1e-3, 60, 123);
  SvmModel swapped;
  swapped.w = {b.w[1], b.w[0]};
  swapped.c = {b.c[1], b.c[0]};
  CHECK(max_weight_gap(a, swapped) <= 1e-6);
}

TEST_CASE("svm objective trace never increases") {
  auto d = two_blobs(25, 31, 0.3);
  std::vector<std::vector<double>> trace;
  train_svm(d, 1e-3, 50, 2, &trace);
  REQUIRE(trace.size() == 2);
  for (const auto& t : trace) {
    REQUIRE(t.size() == 50);
    for (size_t e = 1; e < t.size(); ++e) CHECK(t[e] <= t[e - 1] + 1e-15);
    CHECK(t.back() <= t.front());
  }
}

TEST_CASE("hyperparameter search returns the only grid point") {
  auto d = two_blobs(20, 5);
  const auto [reg, model] = svm_hyperparameter_search(d, {0.01}, 3, 40, 9);
  CHECK(reg == 0.01);
  CHECK(model.reg == 0.01);
  CHECK(svm_accuracy(model, d, Split::Train) == 1.0);
}

TEST_CASE("search ties break toward the stronger regularizer") {
  auto d = two_blobs(30, 6, 0.05);  // wide margin: every candidate separates
  const std::vector<double> grid{1e-6, 1e-4, 1e-2};
  const auto [reg, model] = svm_hyperparameter_search(d, grid, 3, 80, 13);
  CHECK(reg == 1e-2);
  CHECK(svm_accuracy(model, d, Split::Train) == 1.0);
}

TEST_CASE("search validates folds and grid") {
  auto d = two_blobs(20, 7);
  CHECK_THROWS_AS(svm_hyperparameter_search(d, {0.1}, 1, 20, 0), ValidationError);
  CHECK_THROWS_AS(svm_hyperparameter_search(d, {}, 3, 20, 0), ValidationError);
}

TEST_CASE("default regularizer grid spans five decades") {
  const auto grid = default_reg_grid();
  REQUIRE(grid.size() == 6);
  CHECK(grid.front() == doctest::Approx(1e-5).epsilon(1e-12));
  CHECK(grid.back() == doctest::Approx(1.0).epsilon(1e-12));
  for (size_t i = 1; i < grid.size(); ++i)
    CHECK(grid[i] / grid[i - 1] == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("pca recovers a line in three dimensions") {
  Eigen::Vector3d dir(2.0, -1.0, 0.5);
  dir.normalize();
  Eigen::MatrixXd x(5, 3);
  const double ts[5] = {-2.0, -1.0, 0.0, 1.0, 3.0};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) x(i, j) = 5.0 + ts[i] * dir(j);

  const auto w = pca_init(x, 1);
  REQUIRE(w.rows() == 1);
  REQUIRE(w.cols() == 3);
  // sign fix: largest-magnitude entry positive, which dir already satisfies
  for (int j = 0; j < 3; ++j) CHECK(w(0, j) == doctest::Approx(dir(j)).epsilon(1e-9));
}

TEST_CASE("full-rank pca basis is orthonormal") {
  std::mt19937_64 rng(17);
  Eigen::MatrixXd x(50, 6);
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) x(i, j) = oracles::uniform(rng, 0.0, 1.0);
  const auto w = pca_init(x, 6);
  const Eigen::MatrixXd gram = w * w.transpose();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(gram(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
}

TEST_CASE("pca matches an independent eigendecomposition") {
  const int n = 500, dims = 20, q = 5;
  std::mt19937_64 rng(99);
  std::vector<std::vector<double>> rows(n, std::vector<double>(dims));
  Eigen::MatrixXd x(n, dims);
  // anisotropic scales so the spectrum has clear gaps
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < dims; ++j) {
      rows[size_t(i)][size_t(j)] = oracles::uniform(rng, 0.0, 1.0 + 0.5 * j);
      x(i, j) = rows[size_t(i)][size_t(j)];
    }

  const auto pairs = oracles::jacobi_eigen(oracles::covariance(rows));
  const auto w = pca_init(x, q);
  REQUIRE(w.rows() == q);

  for (int k = 0; k < q; ++k) {
    std::vector<double> v = pairs.vectors[size_t(k)];
    // apply the same sign convention before comparing
    size_t arg = 0;
    for (size_t j = 1; j < v.size(); ++j)
      if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
    if (v[arg] < 0.0)
      for (auto& e : v) e = -e;
    for (int j = 0; j < dims; ++j) CHECK(w(k, j) == doctest::Approx(v[size_t(j)]).epsilon(1e-8));
  }

  // projected variance equals the sum of the top eigenvalues
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  const double projected = (centered * w.transpose()).squaredNorm() / double(n - 1);
  double lead = 0.0;
  for (int k = 0; k < q; ++k) lead += pairs.values[size_t(k)];
  CHECK(projected == doctest::Approx(lead).epsilon(1e-8));
}

TEST_CASE("pca rejects components past the data rank") {
  Eigen::MatrixXd x(10, 3);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = oracles::uniform(rng, 0.0, 1.0);
    x(i, 1) = oracles::uniform(rng, 0.0, 1.0);
    x(i, 2) = x(i, 0) + x(i, 1);  // rank two
  }
  CHECK_NOTHROW(pca_init(x, 2));
  CHECK_THROWS_AS(pca_init(x, 3), ValidationError);
  CHECK_THROWS_AS(pca_init(x, 0), ValidationError);
  CHECK_THROWS_AS(pca_init(x, 4), ValidationError);
}

TEST_CASE("mlp gradients agree with central differences") {
  auto m = random_model({6, 3, 4, 2}, 41);
  std::mt19937_64 rng(8);
  Eigen::MatrixXd x(6, 5);
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) x(i, j) = oracles::uniform(rng, -1.0, 1.0);
  const std::vector<int> y{0, 1, 1, 0, 1};

  std::vector<Eigen::MatrixXd> gw;
  std::vector<Eigen::VectorXd> gb;
  mlp_loss_and_gradients(m, x, y, gw, gb);

  const double step = 1e-5;
  double worst = 0.0;
  auto loss_of = [&](const MlpModel& probe) {
    std::vector<Eigen::MatrixXd> tw;
    std::vector<Eigen::VectorXd> tb;
    return mlp_loss_and_gradients(probe, x, y, tw, tb);
  };
  for (size_t l = 0; l < m.w.size(); ++l) {
    for (int r = 0; r < m.w[l].rows(); ++r) {
      for (int c = 0; c < m.w[l].cols(); ++c) {
        auto up = m, dn = m;
        up.w[l](r, c) += step;
        dn.w[l](r, c) -= step;
        const double fd = (loss_of(up) - loss_of(dn)) / (2.0 * step);
        const double g = gw[l](r, c);
        if (std::max(std::abs(g), std::abs(fd)) < 1e-10) continue;
        worst = std::max(worst, std::abs(g - fd) / std::max(std::abs(g), std::abs(fd)));
      }
      auto up = m, dn = m;
      up.b[l](r) += step;
      dn.b[l](r) -= step;
      const double fd = (loss_of(up) - loss_of(dn)) / (2.0 * step);
      const double g = gb[l](r);
      if (std::max(std::abs(g), std::abs(fd)) >= 1e-10)
        worst = std::max(worst, std::abs(g - fd) / std::max(std::abs(g), std::abs(fd)));
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("zero output layer scores log K") {
  auto m = random_model({4, 2, 3}, 15);
  m.w[1].setZero();
  m.b[1].setZero();
  Eigen::MatrixXd x(4, 3);
  std::mt19937_64 rng(2);
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) x(i, j) = oracles::uniform(rng, 0.0, 1.0);
  std::vector<Eigen::MatrixXd> gw;
  std::vector<Eigen::VectorXd> gb;
  const double loss = mlp_loss_and_gradients(m, x, {2, 0, 1}, gw, gb);
  CHECK(loss == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("mlp training separates template spectra") {
  auto d = template_spectra(100, 19);
  split_dataset(d, 0.75, 0.25, 0.0, 4);

  MlpConfig cfg;
  cfg.filters = 2;
  cfg.hidden = {8};
  cfg.dropout = 0.0;
  cfg.lr = 0.01;
  cfg.epochs = 80;
  cfg.batch = 16;
  cfg.seed = 3;
  const auto m = train_mlp(d, cfg);
  CHECK(mlp_accuracy(m, d, Split::Val) == 1.0);
  CHECK(mlp_accuracy(m, d, Split::Train) >= 0.99);
}

TEST_CASE("mlp training is reproducible") {
  auto d = template_spectra(60, 23);
  split_dataset(d, 0.8, 0.2, 0.0, 1);
  MlpConfig cfg;
  cfg.filters = 2;
  cfg.hidden = {6};
  cfg.dropout = 0.1;
  cfg.lr = 0.01;
  cfg.epochs = 30;
  cfg.batch = 16;
  cfg.seed = 77;

  set_thread_count(1);
  const auto a = train_mlp(d, cfg);
  const auto b = train_mlp(d, cfg);
  for (size_t l = 0; l < a.w.size(); ++l) {
    CHECK(a.w[l] == b.w[l]);
    CHECK(a.b[l] == b.b[l]);
  }
  const double acc1 = mlp_accuracy(a, d, Split::Val);

  set_thread_count(4);
  const auto c = train_mlp(d, cfg);
  const double acc4 = mlp_accuracy(c, d, Split::Val);
  set_thread_count(0);
  CHECK(std::abs(acc1 - acc4) <= 0.005);
}

TEST_CASE("tail logits skip the first map") {
  const auto m = random_model({7, 3, 4, 2}, 55);
  std::mt19937_64 rng(6);
  Eigen::VectorXd x(7);
  for (int i = 0; i < 7; ++i) x(i) = oracles::uniform(rng, 0.0, 1.0);
  const Eigen::VectorXd full = mlp_logits(m, x);
  const Eigen::VectorXd tail = mlp_tail_logits(m, m.w[0] * x);
  REQUIRE(full.size() == tail.size());
  for (int i = 0; i < full.size(); ++i) CHECK(std::abs(full(i) - tail(i)) <= 1e-12);
}

TEST_CASE("non-finite training loss aborts instead of returning garbage") {
  // finite but extreme features: the misclassified half of the first batch
  // underflows its softmax probability to zero and the loss overflows
  LabeledSpectra d;
  d.bands = 6;
  d.num_classes = 2;
  std::mt19937_64 rng(29);
  for (int i = 0; i < 80; ++i) {
    for (int b = 0; b < d.bands; ++b) d.x.push_back(oracles::uniform(rng, -1.0, 1.0) * 1e100);
    d.y.push_back(uint16_t(i % 2));
    d.split.push_back(Split::Train);
  }
  split_dataset(d, 0.8, 0.2, 0.0, 2);
  MlpConfig cfg;
  cfg.filters = 2;
  cfg.hidden = {6};
  cfg.dropout = 0.0;
  cfg.lr = 1e-3;
  cfg.epochs = 3;
  cfg.batch = 16;
  cfg.seed = 1;
  try {
    train_mlp(d, cfg);
    FAIL("training returned despite a non-finite loss");
  } catch (const TrainingError& e) {
    CHECK(e.epoch() == 0);
  }
}

TEST_CASE("filter extraction mirrors the model rows") {
  auto d = two_blobs(20, 43);
  const auto svm = train_svm(d, 1e-3, 40, 5);
  const auto sb = extract_filters(svm);
  CHECK(sb.source == "svm");
  CHECK(sb.id == "svm-2");
  CHECK(sb.filters == svm.w);
  CHECK(sb.offsets == svm.c);

  const auto m = random_model({5, 2, 3}, 61);
  const auto mb = extract_filters(m);
  CHECK(mb.source == "mlp");
  CHECK(mb.id == "mlp-2");
  REQUIRE(mb.count() == 2);
  for (int r = 0; r < 2; ++r) {
    CHECK(mb.offsets[size_t(r)] == m.b[0](r));
    for (int c = 0; c < 5; ++c) CHECK(mb.filters[size_t(r)][size_t(c)] == m.w[0](r, c));
  }
}

TEST_CASE("matched filter is the spectral difference") {
  WavelengthGrid g{600.0, 700.0, 2};
  Spectrum s1{g, {1.0, 0.0}}, s2{g, {0.0, 1.0}};
  const auto bank = matched_filter(s1, s2);
  REQUIRE(bank.count() == 1);
  CHECK(bank.filters[0] == std::vector<double>{1.0, -1.0});
  CHECK(bank.offsets[0] == 0.0);
  CHECK(bank.source == "matched");

  const auto zero = matched_filter(s1, s1);
  CHECK(zero.filters[0] == std::vector<double>{0.0, 0.0});

  WavelengthGrid g2{600.0, 700.0, 3};
  Spectrum s3{g2, {0.0, 1.0, 0.0}};
  CHECK_THROWS_AS(matched_filter(s1, s3), ValidationError);
}

TEST_CASE("svm model io round-trips through f32") {
  TempDir tmp("svmio");
  auto d = two_blobs(25, 47);
  auto model = train_svm(d, 1e-3, 50, 11);
  model.reg = 1e-3;
  const auto path = tmp.file("model.svm");
  save_svm(model, path);
  const auto back = load_svm(path);

  REQUIRE(back.classes() == model.classes());
  REQUIRE(back.bands() == model.bands());
  CHECK(back.reg == model.reg);
  for (int k = 0; k < 2; ++k) {
    CHECK(back.c[size_t(k)] == double(float(model.c[size_t(k)])));
    for (int j = 0; j < 2; ++j)
      CHECK(back.w[size_t(k)][size_t(j)] == double(float(model.w[size_t(k)][size_t(j)])));
  }
  CHECK(svm_accuracy(back, d, Split::Train) == svm_accuracy(model, d, Split::Train));
}

TEST_CASE("mlp model io round-trips through f32") {
  TempDir tmp("mlpio");
  auto m = random_model({6, 3, 2}, 71);
  m.dropout = 0.25;
  const auto path = tmp.file("model.mlp");
  save_mlp(m, path);
  const auto back = load_mlp(path);

  REQUIRE(back.layer_count() == m.layer_count());
  CHECK(back.dropout == m.dropout);
  for (size_t l = 0; l < m.w.size(); ++l) {
    for (int r = 0; r < m.w[l].rows(); ++r) {
      CHECK(back.b[l](r) == double(float(m.b[l](r))));
      for (int c = 0; c < m.w[l].cols(); ++c)
        CHECK(back.w[l](r, c) == double(float(m.w[l](r, c))));
    }
  }
}

TEST_CASE("filter bank csv io round-trips") {
  TempDir tmp("bankio");
  SpectralFilterBank bank;
  bank.filters = {{0.5, -0.25, 1.0 / 3.0}, {0.0, 2.0, -1e-7}};
  bank.offsets = {0.125, -3.5};
  bank.source = "svm";
  bank.id = "svm-2";
  const auto path = tmp.file("bank.csv");
  save_bank_csv(bank, path);
  const auto back = load_bank_csv(path);
  CHECK(back.filters == bank.filters);
  CHECK(back.offsets == bank.offsets);
  CHECK(back.source == "csv");
  CHECK(back.id == path);
}
