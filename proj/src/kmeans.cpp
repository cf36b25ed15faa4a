#include "acess/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

namespace acess {

int default_cluster_count(int64_t n_train, int64_t divisor) {
  if (n_train < 1 || divisor < 1)
    throw config_error("BadClusterDivisor", "counts must be >= 1");
  int64_t k = (2 * n_train + divisor) / (2 * divisor);  // round half up
  return static_cast<int>(std::max<int64_t>(1, k));
}

namespace {

int nearest_centroid(const SparseVector& x, const Eigen::MatrixXd& centroids,
                     const Eigen::VectorXd& centroid_sq_norms, double* dist_out) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < centroids.rows(); ++c) {
    double cross = 0;
    for (const auto& [i, w] : x.entries) cross += w * centroids(c, i);
    double d = x.squared_norm() - 2.0 * cross + centroid_sq_norms[c];
    if (d < best_d) {  // strict: ties stay at the lowest index
      best_d = d;
      best = c;
    }
  }
  if (dist_out) *dist_out = std::max(0.0, best_d);
  return best;
}

}  // namespace

ClusterModel fit_kmeans(const std::vector<SparseVector>& X, int k,
                        uint64_t seed, int max_iter, double tol) {
  if (X.empty()) throw data_error("EmptyInput", "no points");
  if (k < 1 || static_cast<size_t>(k) > X.size())
    throw data_error("KTooLarge", "need 1 <= k <= |X|");
  const int dim = X.front().dim;
  for (const auto& x : X)
    if (x.dim != dim) throw data_error("DimensionMismatch", "point dims differ");

  ClusterModel model;
  model.k = k;
  model.seed = seed;
  model.centroids = Eigen::MatrixXd::Zero(k, dim);

  // random init: k distinct points sampled with the seed
  std::vector<size_t> idx(X.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (int c = 0; c < k; ++c) {
    std::uniform_int_distribution<size_t> pick(c, X.size() - 1);
    std::swap(idx[c], idx[pick(rng)]);
    for (const auto& [i, w] : X[idx[c]].entries) model.centroids(c, i) = w;
  }

  std::vector<int> labels(X.size(), 0);
  std::vector<double> dists(X.size(), 0.0);
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::VectorXd sq = model.centroids.rowwise().squaredNorm();
    double inertia = 0;
    for (size_t i = 0; i < X.size(); ++i) {
      labels[i] = nearest_centroid(X[i], model.centroids, sq, &dists[i]);
      inertia += dists[i];
    }
    model.inertia_history.push_back(inertia);

    // empty clusters steal the point farthest from its assigned centroid
    std::vector<int64_t> sizes(k, 0);
    for (int lbl : labels) ++sizes[lbl];
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      size_t far = 0;
      double far_d = -1;
      for (size_t i = 0; i < X.size(); ++i) {
        if (sizes[labels[i]] <= 1) continue;  // do not empty another cluster
        if (dists[i] > far_d) {
          far_d = dists[i];
          far = i;
        }
      }
      --sizes[labels[far]];
      labels[far] = c;
      sizes[c] = 1;
      dists[far] = 0;
    }

    // recompute means
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, dim);
    for (size_t i = 0; i < X.size(); ++i)
      for (const auto& [j, w] : X[i].entries) next(labels[i], j) += w;
    for (int c = 0; c < k; ++c) next.row(c) /= static_cast<double>(sizes[c]);

    double shift = (next - model.centroids).rowwise().norm().maxCoeff();
    model.centroids = next;
    if (shift < tol) break;
  }

  // final assignment pass so inertia_history reflects the returned centroids
  Eigen::VectorXd sq = model.centroids.rowwise().squaredNorm();
  double inertia = 0;
  for (const auto& x : X) {
    double d;
    nearest_centroid(x, model.centroids, sq, &d);
    inertia += d;
  }
  model.inertia_history.push_back(inertia);
  return model;
}

int assign(const ClusterModel& model, const SparseVector& x) {
  if (x.dim != model.dim())
    throw data_error("DimensionMismatch", "point dim vs model dim");
  Eigen::VectorXd sq = model.centroids.rowwise().squaredNorm();
  return nearest_centroid(x, model.centroids, sq, nullptr);
}

std::vector<std::vector<size_t>> partition_by_cluster(
    const ClusterModel& model, const std::vector<SparseVector>& points) {
  std::vector<std::vector<size_t>> buckets(model.k);
  Eigen::VectorXd sq = model.centroids.rowwise().squaredNorm();
  for (size_t i = 0; i < points.size(); ++i)
    buckets[nearest_centroid(points[i], model.centroids, sq, nullptr)].push_back(i);
  return buckets;
}

std::string cluster_model_to_json(const ClusterModel& model,
                                  const std::string& vocab_ref) {
  nlohmann::ordered_json j;
  j["k"] = model.k;
  j["seed"] = model.seed;
  j["vocab_ref"] = vocab_ref;
  j["centroids"] = nlohmann::json::array();
  for (int c = 0; c < model.k; ++c) {
    std::vector<double> row(model.centroids.row(c).begin(),
                            model.centroids.row(c).end());
    j["centroids"].push_back(row);
  }
  j["inertia_history"] = model.inertia_history;
  return j.dump();
}

ClusterModel cluster_model_from_json(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  ClusterModel model;
  model.k = j.at("k").get<int>();
  model.seed = j.at("seed").get<uint64_t>();
  model.inertia_history = j.at("inertia_history").get<std::vector<double>>();
  const auto& rows = j.at("centroids");
  int dim = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  model.centroids = Eigen::MatrixXd::Zero(model.k, dim);
  for (int c = 0; c < model.k; ++c) {
    auto row = rows[c].get<std::vector<double>>();
    for (int i = 0; i < dim; ++i) model.centroids(c, i) = row[i];
  }
  return model;
}

}  // namespace acess
