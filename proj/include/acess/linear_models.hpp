// linear_models.hpp - NB, one-vs-one logistic regression (CG), linear SVM,
// and validation-set grid search
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "acess/eval.hpp"
#include "acess/security_class.hpp"
#include "acess/text_pipeline.hpp"

namespace acess {

enum class ModelKind { NaiveBayes, LogRegOvo, LinearSvm };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

/// One linear scorer: either a per-class decision function (NB, SVM) or a
/// binary model for an unordered class pair (OvO logreg).
struct LinearComponent {
  Eigen::VectorXd weights;
  double bias = 0;
  SecurityClass positive = SecurityClass::U;  // class (NB/SVM) or pair positive
  SecurityClass negative = SecurityClass::U;  // pair negative (OvO only)
};

struct TrainedClassifier {
  ModelKind kind = ModelKind::LinearSvm;
  std::vector<SecurityClass> classes;  // classes present in training data
  std::vector<LinearComponent> components;
  std::vector<double> class_weights;   // per present class, training order
  VectorizerConfig vectorizer_config;
  uint64_t seed = 0;
  int dim = 0;
  std::optional<SecurityClass> constant;  // single-class degenerate predictor

  SecurityClass predict(const SparseVector& x) const;
};

TrainedClassifier train_naive_bayes(const std::vector<SparseVector>& X,
                                    const std::vector<SecurityClass>& y,
                                    double alpha);

/// Inverse-frequency weights: n_samples / (n_classes * n_c) per present class.
std::vector<double> balanced_class_weights(const std::vector<SecurityClass>& y);

TrainedClassifier train_logreg_cg(const std::vector<SparseVector>& X,
                                  const std::vector<SecurityClass>& y,
                                  double lambda,
                                  const std::vector<double>& class_weights = {});

TrainedClassifier train_linear_svm(const std::vector<SparseVector>& X,
                                   const std::vector<SecurityClass>& y,
                                   double cost,
                                   const std::vector<double>& class_weights = {},
                                   uint64_t seed = 0);

/// Weighted L2-regularized logistic loss and gradient for a binary problem
/// with labels in {-1,+1}; exposed for the finite-difference check.
double logistic_loss_grad(const std::vector<SparseVector>& X,
                          const std::vector<int>& y_pm,
                          const std::vector<double>& sample_weights,
                          double lambda, const Eigen::VectorXd& w, double b,
                          Eigen::VectorXd& grad_w, double& grad_b);

// ---------------------------------------------------------------------------
// Grid search

struct GridSpec {
  std::vector<double> svm_cost = {0.01, 0.1, 1, 10, 100};
  std::vector<double> logreg_lambda = {1e-4, 1e-2, 1};
  std::vector<double> nb_alpha = {0.1, 1};
  std::vector<int> max_features = {1000, 5000, 0};  // 0 = unlimited
  std::vector<Normalization> normalization = {Normalization::None,
                                              Normalization::L1,
                                              Normalization::L2};
};

struct GridPoint {
  double hyper = 1.0;  // C / lambda / alpha, by model kind
  int max_features = 0;
  Normalization normalization = Normalization::None;
};

struct GridSearchResult {
  GridPoint best;
  TrainedClassifier model;
  Vocabulary vocabulary;
  VectorizerConfig vectorizer_config;
  double best_validation_f1 = 0;
  bool validation_skipped = false;  // empty validation: default point used
  std::vector<std::pair<GridPoint, double>> scores;
};

/// Trains one model per grid point on the training texts, scores macro-F1 on
/// the validation texts, picks the best (first in lexicographic grid order on
/// ties), and retrains it. An empty validation set selects the first point.
GridSearchResult grid_search(const std::vector<std::string>& train_texts,
                             const std::vector<SecurityClass>& train_labels,
                             const std::vector<std::string>& val_texts,
                             const std::vector<SecurityClass>& val_labels,
                             const GridSpec& grid, ModelKind kind,
                             const VectorizerConfig& base_config,
                             uint64_t seed = 0);

std::string model_to_json(const TrainedClassifier& model);
TrainedClassifier model_from_json(const std::string& json_text);

}  // namespace acess
