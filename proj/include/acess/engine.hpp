// engine.hpp - partitioned ACESS: similarity clustering + per-cluster models
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acess/cable.hpp"
#include "acess/eval.hpp"
#include "acess/kmeans.hpp"
#include "acess/linear_models.hpp"
#include "acess/text_pipeline.hpp"

namespace acess {

struct AcessConfig {
  int64_t cluster_divisor = 200;
  std::optional<int> force_k;  // overrides the divisor heuristic when set

  // similarity space: tf-idf, unigrams, tie-inclusive top-1000, unnormalized
  VectorizerConfig similarity = {
      Weighting::TfIdf, true, false, 1000, Normalization::None, true, true, 2};

  // security space: doc-frequency, unigrams+bigrams, tie-inclusive top-1000
  VectorizerConfig security = {
      Weighting::DocFrequency, true, true, 1000, Normalization::None, true, true, 2};

  ModelKind classifier = ModelKind::LinearSvm;
  GridSpec grid;
  uint64_t kmeans_seed = 1;
  uint64_t train_seed = 2;
};

struct ClusterResult {
  int cluster = 0;
  int64_t n_train = 0, n_validation = 0, n_test = 0;
  std::vector<SecurityClass> classes_present;
  GridPoint chosen;
  std::array<double, 3> test_f1{};  // per class on this cluster's bucket
  bool constant_predictor = false;
  bool validation_skipped = false;  // empty bucket, default grid point used
};

struct AcessRun {
  std::vector<ClusterResult> clusters;
  EvalReport pooled;                       // paragraph-level, micro-pooled
  EvalReport document_level;
  ConfusionMatrix pooled_cm;
  int k = 0;
  int similarity_features = 0;
  std::map<std::string, SecurityClass> test_predictions;  // paragraph id -> class
};

struct RoutingReport {
  std::vector<std::array<int64_t, 3>> per_cluster;  // train/val/test counts
  std::vector<int> validation_unused;
  std::vector<int> test_unused;
};

AcessRun run_acess(const DataSplit& split, const AcessConfig& config);

RoutingReport explain_routing(const DataSplit& split, const AcessConfig& config);

/// The per-cluster training step on one bucket triple; with the whole split as
/// a single bucket this is exactly the global grid-searched baseline.
struct BucketModel {
  GridSearchResult search;
  bool constant = false;
  SecurityClass constant_class = SecurityClass::U;
  bool validation_skipped = false;
};

BucketModel train_bucket(const std::vector<Paragraph>& train,
                         const std::vector<Paragraph>& validation,
                         const AcessConfig& config);

SecurityClass predict_bucket(const BucketModel& model, const std::string& text);

std::string run_manifest_to_json(const AcessRun& run, const AcessConfig& config,
                                 const std::string& config_hash);

}  // namespace acess
