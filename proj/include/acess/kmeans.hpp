// kmeans.hpp - Lloyd's K-means over sparse points with dense centroids
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Core>

#include "acess/errors.hpp"
#include "acess/text_pipeline.hpp"

namespace acess {

struct ClusterModel {
  int k = 1;
  Eigen::MatrixXd centroids;  // k rows, one per centroid
  uint64_t seed = 0;
  std::vector<double> inertia_history;  // non-increasing across Lloyd steps

  int dim() const { return static_cast<int>(centroids.cols()); }
};

/// max(1, round-half-up(n_train / divisor))
int default_cluster_count(int64_t n_train, int64_t divisor = 200);

/// Lloyd's algorithm with random init (k distinct seeded sample points) and
/// farthest-point re-seeding of empty clusters.
ClusterModel fit_kmeans(const std::vector<SparseVector>& X, int k,
                        uint64_t seed, int max_iter = 300, double tol = 1e-6);

/// Nearest centroid by squared Euclidean distance, ties to the lowest index.
int assign(const ClusterModel& model, const SparseVector& x);

/// One bucket per cluster index 0..k-1; empty buckets are kept.
std::vector<std::vector<size_t>> partition_by_cluster(
    const ClusterModel& model, const std::vector<SparseVector>& points);

std::string cluster_model_to_json(const ClusterModel& model,
                                  const std::string& vocab_ref = {});
ClusterModel cluster_model_from_json(const std::string& json_text);

}  // namespace acess
