#include "acess/text_pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace acess {

namespace {

const std::unordered_set<std::string>& stopword_set() {
  static const std::unordered_set<std::string> set(builtin_stopwords().begin(),
                                                   builtin_stopwords().end());
  return set;
}

bool contains_digit(const std::string& t) {
  return std::any_of(t.begin(), t.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

}  // namespace

const std::vector<std::string>& builtin_stopwords() {
  static const std::vector<std::string> words = {
#include "stopwords_data.inc"
  };
  return words;
}

bool is_stopword(const std::string& token) {
  return stopword_set().count(token) > 0;
}

std::string to_string(Weighting w) {
  switch (w) {
    case Weighting::TfIdf: return "tfidf";
    case Weighting::DocFrequency: return "doc_frequency";
    case Weighting::Count: return "count";
  }
  return "?";
}

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::None: return "none";
    case Normalization::L1: return "l1";
    case Normalization::L2: return "l2";
  }
  return "?";
}

Weighting weighting_from_string(const std::string& s) {
  if (s == "tfidf") return Weighting::TfIdf;
  if (s == "doc_frequency") return Weighting::DocFrequency;
  if (s == "count") return Weighting::Count;
  throw config_error("BadWeighting", s);
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "none") return Normalization::None;
  if (s == "l1") return Normalization::L1;
  if (s == "l2") return Normalization::L2;
  throw config_error("BadNormalization", s);
}

double SparseVector::squared_norm() const {
  double s = 0;
  for (const auto& [i, w] : entries) s += w * w;
  return s;
}

Eigen::VectorXd SparseVector::dense() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  for (const auto& [i, w] : entries) v[i] = w;
  return v;
}

double squared_distance(const SparseVector& x, const Eigen::VectorXd& center,
                        double center_sq_norm) {
  double cross = 0;
  for (const auto& [i, w] : x.entries) cross += w * center[i];
  return x.squared_norm() - 2.0 * cross + center_sq_norm;
}

double Vocabulary::idf(int64_t df) const {
  return std::log((1.0 + static_cast<double>(n_documents)) /
                  (1.0 + static_cast<double>(df))) +
         1.0;
}

std::vector<std::string> tokenize(const std::string& text,
                                  const VectorizerConfig& config) {
  std::vector<std::string> unigrams;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    bool keep = static_cast<int>(cur.size()) >= config.min_token_length;
    if (keep && config.alphabetic_only && contains_digit(cur)) keep = false;
    if (keep && config.remove_stopwords && is_stopword(cur)) keep = false;
    if (keep) unigrams.push_back(cur);
    cur.clear();
  };
  for (unsigned char ch : text) {
    bool in_token = std::isalpha(ch) || (!config.alphabetic_only && std::isdigit(ch));
    if (in_token)
      cur.push_back(static_cast<char>(std::tolower(ch)));
    else
      flush();
  }
  flush();

  std::vector<std::string> out;
  if (config.unigrams) out = unigrams;
  if (config.bigrams) {
    for (size_t i = 0; i + 1 < unigrams.size(); ++i)
      out.push_back(unigrams[i] + " " + unigrams[i + 1]);
  }
  return out;
}

std::vector<std::string> select_top_features(
    const std::map<std::string, double>& scored_terms, int k) {
  if (k < 1) throw config_error("BadK", "top-K selection needs K >= 1");
  if (static_cast<int>(scored_terms.size()) <= k) {
    std::vector<std::string> all;
    for (const auto& [t, s] : scored_terms) all.push_back(t);
    return all;
  }
  std::vector<double> scores;
  scores.reserve(scored_terms.size());
  for (const auto& [t, s] : scored_terms) scores.push_back(s);
  std::nth_element(scores.begin(), scores.begin() + (k - 1), scores.end(),
                   std::greater<>());
  double cutoff = scores[k - 1];

  std::vector<std::string> selected;
  for (const auto& [t, s] : scored_terms)
    if (s >= cutoff) selected.push_back(t);
  return selected;
}

Vocabulary build_vocabulary(const std::vector<std::string>& texts,
                            const VectorizerConfig& config) {
  if (texts.empty()) throw data_error("EmptyCorpus", "no documents");

  std::unordered_map<std::string, int64_t> df;
  std::unordered_map<std::string, double> score;
  for (const std::string& text : texts) {
    auto tokens = tokenize(text, config);
    std::unordered_map<std::string, int64_t> tf;
    for (const auto& t : tokens) ++tf[t];
    for (const auto& [t, c] : tf) {
      ++df[t];
      if (config.weighting == Weighting::Count) score[t] += static_cast<double>(c);
    }
  }
  if (df.empty()) throw data_error("NoTermsSurvive", "all tokens filtered");

  const auto n_docs = static_cast<int64_t>(texts.size());
  Vocabulary vocab;
  vocab.n_documents = n_docs;

  if (config.weighting == Weighting::DocFrequency) {
    for (const auto& [t, d] : df) score[t] = static_cast<double>(d);
  } else if (config.weighting == Weighting::TfIdf) {
    // corpus-level tf-idf score = max over documents of the term's weight
    for (const std::string& text : texts) {
      auto tokens = tokenize(text, config);
      std::unordered_map<std::string, int64_t> tf;
      for (const auto& t : tokens) ++tf[t];
      for (const auto& [t, c] : tf) {
        double idf = std::log((1.0 + static_cast<double>(n_docs)) /
                              (1.0 + static_cast<double>(df[t]))) +
                     1.0;
        double w = static_cast<double>(c) * idf;
        auto it = score.find(t);
        if (it == score.end() || w > it->second) score[t] = w;
      }
    }
  }

  std::map<std::string, double> ordered_scores(score.begin(), score.end());
  std::vector<std::string> kept;
  if (config.max_features > 0)
    kept = select_top_features(ordered_scores, config.max_features);
  else
    for (const auto& [t, s] : ordered_scores) kept.push_back(t);

  std::sort(kept.begin(), kept.end());
  int index = 0;
  for (const auto& t : kept)
    vocab.terms[t] = VocabEntry{index++, df[t], ordered_scores[t]};
  return vocab;
}

SparseVector vectorize(const std::string& text, const Vocabulary& vocab,
                       const VectorizerConfig& config) {
  auto tokens = tokenize(text, config);
  std::map<int, double> weights;
  std::map<int, int64_t> tf;
  std::map<int, int64_t> dfs;
  for (const auto& t : tokens) {
    auto it = vocab.terms.find(t);
    if (it == vocab.terms.end()) continue;
    ++tf[it->second.index];
    dfs[it->second.index] = it->second.df;
  }
  for (const auto& [idx, count] : tf) {
    switch (config.weighting) {
      case Weighting::TfIdf:
        weights[idx] = static_cast<double>(count) * vocab.idf(dfs[idx]);
        break;
      case Weighting::DocFrequency:
        weights[idx] = static_cast<double>(dfs[idx]);
        break;
      case Weighting::Count:
        weights[idx] = static_cast<double>(count);
        break;
    }
  }

  SparseVector v;
  v.dim = vocab.size();
  v.entries.assign(weights.begin(), weights.end());

  if (config.normalization != Normalization::None && !v.entries.empty()) {
    double norm = 0;
    if (config.normalization == Normalization::L2) {
      for (const auto& [i, w] : v.entries) norm += w * w;
      norm = std::sqrt(norm);
    } else {
      for (const auto& [i, w] : v.entries) norm += std::abs(w);
    }
    if (norm > 0)
      for (auto& [i, w] : v.entries) w /= norm;
  }
  return v;
}

std::string vocabulary_to_json(const Vocabulary& vocab) {
  nlohmann::ordered_json j;
  j["n_documents"] = vocab.n_documents;
  auto& arr = j["terms"] = nlohmann::ordered_json::array();
  for (const auto& [term, e] : vocab.terms) {
    arr.push_back({{"term", term}, {"index", e.index}, {"df", e.df},
                   {"score", e.score}});
  }
  return j.dump();
}

Vocabulary vocabulary_from_json(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  Vocabulary vocab;
  vocab.n_documents = j.at("n_documents").get<int64_t>();
  for (const auto& e : j.at("terms")) {
    vocab.terms[e.at("term").get<std::string>()] =
        VocabEntry{e.at("index").get<int>(), e.at("df").get<int64_t>(),
                   e.at("score").get<double>()};
  }
  return vocab;
}

}  // namespace acess
