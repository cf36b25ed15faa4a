// lda.hpp - collapsed-Gibbs LDA, topic purity analysis, two-pass pruning
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "acess/cable.hpp"
#include "acess/errors.hpp"
#include "acess/security_class.hpp"

namespace acess {

struct TopicModel {
  int n_topics = 0;
  double alpha = 0;
  double beta = 0;
  uint64_t seed = 0;
  int iterations = 0;

  std::vector<std::string> vocab;              // index -> term
  std::vector<std::vector<int>> doc_tokens;    // token term-indices per doc
  std::vector<std::vector<int>> assignments;   // topic per token
  Eigen::MatrixXi topic_word;                  // K x V
  Eigen::MatrixXi doc_topic;                   // D x K
  Eigen::VectorXi topic_total;                 // K

  int n_docs() const { return static_cast<int>(doc_tokens.size()); }
  int vocab_size() const { return static_cast<int>(vocab.size()); }
  int64_t total_tokens() const;

  Eigen::MatrixXd phi() const;    // K x V rows sum to 1
  Eigen::MatrixXd theta() const;  // D x K rows sum to 1
  std::vector<std::string> top_words(int topic, int n) const;
};

TopicModel fit_lda_gibbs(const std::vector<std::string>& texts, int n_topics,
                         double alpha, double beta, int iterations,
                         uint64_t seed);

/// argmax of theta row (equivalently the topic-count row), ties to the
/// lowest topic index.
int dominant_topic(const TopicModel& model, int doc);

enum class ConfusionPair { None, SecretConfidential, UnclassConfidential };
std::string to_string(ConfusionPair p);

struct PurityThresholds {
  // per class U, C, S: [lower, upper] fraction band
  std::array<std::pair<double, double>, 3> bands{};
};

struct TopicComposition {
  int topic = 0;
  std::vector<size_t> members;               // doc indices, dominant-topic rule
  std::array<double, 3> class_fractions{};   // U, C, S
  std::vector<ConfusionPair> flags;          // filled by flag_impure_topics
};

std::vector<TopicComposition> topic_class_composition(
    const TopicModel& model, const std::vector<SecurityClass>& labels);

/// Multiplicative bands around the training class fractions:
/// [lo_factor * p_c, min(1, hi_factor * p_c)] per class.
PurityThresholds derive_thresholds(const std::array<double, 3>& class_fractions,
                                   double lo_factor = 0.5,
                                   double hi_factor = 1.5);

/// A topic is impure for (S,C) when both the S and the C member fractions sit
/// inside their class bands, analogously for (U,C). (U,S) is never evaluated.
std::vector<std::pair<int, ConfusionPair>> flag_impure_topics(
    const std::vector<TopicComposition>& compositions,
    const PurityThresholds& thresholds);

struct PruneConfig {
  int k_main = 0;   // 0 = max(10, n/500)
  int k_sub = 0;    // 0 = max(5, n_extracted/200)
  double alpha = 0;  // 0 = 50/K
  double beta = 0.01;
  int iterations = 200;
  double lo_factor = 0.5;
  double hi_factor = 1.5;
  uint64_t seed = 0;
};

struct RemovalRecord {
  std::string paragraph_id;
  int pass = 0;
  int topic = 0;
  ConfusionPair pair = ConfusionPair::None;
};

struct PruneResult {
  std::vector<Paragraph> pruned_train;
  std::vector<RemovalRecord> removed;
  std::vector<std::pair<int, ConfusionPair>> main_flags;
  std::vector<std::pair<int, ConfusionPair>> sub_flags;
};

/// Pass 1 extracts the conditioned-pair members of impure main topics; pass 2
/// re-models the pooled extracted instances and permanently removes the
/// conditioned-pair members of impure subtopics. Everything else returns to
/// the training set.
PruneResult prune_training_set(const std::vector<Paragraph>& train,
                               const PruneConfig& config);

std::string topic_report_to_json(const TopicModel& model,
                                 const std::vector<TopicComposition>& comps,
                                 int top_words = 10);
std::string removal_report_to_csv(const std::vector<RemovalRecord>& removed);

}  // namespace acess
