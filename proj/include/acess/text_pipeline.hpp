// text_pipeline.hpp - tokenization, vocabulary building, sparse vectorization
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "acess/errors.hpp"

namespace acess {

enum class Weighting { TfIdf, DocFrequency, Count };
enum class Normalization { None, L1, L2 };

std::string to_string(Weighting w);
std::string to_string(Normalization n);
Weighting weighting_from_string(const std::string& s);
Normalization normalization_from_string(const std::string& s);

struct VectorizerConfig {
  Weighting weighting = Weighting::TfIdf;
  bool unigrams = true;
  bool bigrams = false;
  int max_features = 0;  // 0 = unlimited; otherwise tie-inclusive top-K
  Normalization normalization = Normalization::None;
  bool alphabetic_only = true;
  bool remove_stopwords = true;
  int min_token_length = 2;
};

/// Sorted sparse vector over a fixed-dimension feature space.
struct SparseVector {
  std::vector<std::pair<int, double>> entries;  // strictly increasing indices
  int dim = 0;

  double squared_norm() const;
  Eigen::VectorXd dense() const;
};

/// Squared Euclidean distance against a dense point, in O(nnz + dim) using
/// the precomputed centroid norm.
double squared_distance(const SparseVector& x, const Eigen::VectorXd& center,
                        double center_sq_norm);

struct VocabEntry {
  int index = 0;
  int64_t df = 0;
  double score = 0.0;
};

struct Vocabulary {
  std::map<std::string, VocabEntry> terms;  // term -> entry, indices dense
  int64_t n_documents = 0;

  int size() const { return static_cast<int>(terms.size()); }
  double idf(int64_t df) const;  // ln((1+N)/(1+df)) + 1
};

/// Lowercase, split on non-letter (non-alphanumeric when !alphabetic_only)
/// boundaries, drop short tokens and stopwords, then append adjacent-token
/// bigrams when enabled.
std::vector<std::string> tokenize(const std::string& text,
                                  const VectorizerConfig& config);

/// Scores every surviving term over the corpus per the configured weighting
/// and keeps the tie-inclusive top max_features of them.
Vocabulary build_vocabulary(const std::vector<std::string>& texts,
                            const VectorizerConfig& config);

/// All terms scoring strictly above the K-th highest score plus every term
/// tied with it. Result size >= min(K, |terms|).
std::vector<std::string> select_top_features(
    const std::map<std::string, double>& scored_terms, int k);

SparseVector vectorize(const std::string& text, const Vocabulary& vocab,
                       const VectorizerConfig& config);

const std::vector<std::string>& builtin_stopwords();
bool is_stopword(const std::string& token);

std::string vocabulary_to_json(const Vocabulary& vocab);
Vocabulary vocabulary_from_json(const std::string& json_text);

}  // namespace acess
