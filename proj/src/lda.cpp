#include "acess/lda.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "acess/text_pipeline.hpp"

namespace acess {

int64_t TopicModel::total_tokens() const {
  int64_t n = 0;
  for (const auto& d : doc_tokens) n += static_cast<int64_t>(d.size());
  return n;
}

Eigen::MatrixXd TopicModel::phi() const {
  Eigen::MatrixXd out(n_topics, vocab_size());
  for (int k = 0; k < n_topics; ++k) {
    double denom = topic_total[k] + beta * vocab_size();
    for (int v = 0; v < vocab_size(); ++v)
      out(k, v) = (topic_word(k, v) + beta) / denom;
  }
  return out;
}

Eigen::MatrixXd TopicModel::theta() const {
  Eigen::MatrixXd out(n_docs(), n_topics);
  for (int d = 0; d < n_docs(); ++d) {
    double denom = static_cast<double>(doc_tokens[d].size()) + alpha * n_topics;
    for (int k = 0; k < n_topics; ++k)
      out(d, k) = (doc_topic(d, k) + alpha) / denom;
  }
  return out;
}

std::vector<std::string> TopicModel::top_words(int topic, int n) const {
  std::vector<int> order(vocab_size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return topic_word(topic, a) > topic_word(topic, b);
  });
  std::vector<std::string> out;
  for (int i = 0; i < std::min(n, vocab_size()); ++i)
    out.push_back(vocab[order[i]]);
  return out;
}

TopicModel fit_lda_gibbs(const std::vector<std::string>& texts, int n_topics,
                         double alpha, double beta, int iterations,
                         uint64_t seed) {
  if (texts.empty()) throw data_error("EmptyCorpus", "no documents");
  if (n_topics < 2) throw config_error("BadK", "need K >= 2 topics");
  if (iterations < 1) throw config_error("BadIterations", "need >= 1 iteration");

  VectorizerConfig tok_cfg;  // unigrams, stopwords removed, alphabetic
  std::unordered_map<std::string, int> term_index;
  TopicModel model;
  model.n_topics = n_topics;
  model.alpha = alpha;
  model.beta = beta;
  model.seed = seed;
  model.iterations = iterations;

  for (const auto& text : texts) {
    std::vector<int> tokens;
    for (const auto& t : tokenize(text, tok_cfg)) {
      auto [it, inserted] = term_index.emplace(t, static_cast<int>(model.vocab.size()));
      if (inserted) model.vocab.push_back(t);
      tokens.push_back(it->second);
    }
    model.doc_tokens.push_back(std::move(tokens));
  }
  const int V = model.vocab_size();
  if (V == 0) throw data_error("EmptyCorpus", "all tokens filtered");
  if (n_topics > V) throw config_error("KTooLarge", "K exceeds vocabulary size");

  const int D = model.n_docs();
  model.topic_word = Eigen::MatrixXi::Zero(n_topics, V);
  model.doc_topic = Eigen::MatrixXi::Zero(D, n_topics);
  model.topic_total = Eigen::VectorXi::Zero(n_topics);
  model.assignments.resize(D);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> init_topic(0, n_topics - 1);
  for (int d = 0; d < D; ++d) {
    model.assignments[d].resize(model.doc_tokens[d].size());
    for (size_t i = 0; i < model.doc_tokens[d].size(); ++i) {
      int z = init_topic(rng);
      model.assignments[d][i] = z;
      ++model.topic_word(z, model.doc_tokens[d][i]);
      ++model.doc_topic(d, z);
      ++model.topic_total[z];
    }
  }

  std::vector<double> probs(n_topics);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double v_beta = V * beta;
  for (int iter = 0; iter < iterations; ++iter) {
    for (int d = 0; d < D; ++d) {
      for (size_t i = 0; i < model.doc_tokens[d].size(); ++i) {
        int w = model.doc_tokens[d][i];
        int z = model.assignments[d][i];
        --model.topic_word(z, w);
        --model.doc_topic(d, z);
        --model.topic_total[z];

        double total = 0;
        for (int k = 0; k < n_topics; ++k) {
          total += (model.doc_topic(d, k) + alpha) *
                   (model.topic_word(k, w) + beta) /
                   (model.topic_total[k] + v_beta);
          probs[k] = total;
        }
        double u = unit(rng) * total;
        int z_new = static_cast<int>(
            std::lower_bound(probs.begin(), probs.end(), u) - probs.begin());
        if (z_new >= n_topics) z_new = n_topics - 1;

        model.assignments[d][i] = z_new;
        ++model.topic_word(z_new, w);
        ++model.doc_topic(d, z_new);
        ++model.topic_total[z_new];
      }
    }
  }
  return model;
}

int dominant_topic(const TopicModel& model, int doc) {
  if (doc < 0 || doc >= model.n_docs())
    throw data_error("OutOfRange", "document index " + std::to_string(doc));
  int best = 0;
  for (int k = 1; k < model.n_topics; ++k)
    if (model.doc_topic(doc, k) > model.doc_topic(doc, best)) best = k;
  return best;
}

std::string to_string(ConfusionPair p) {
  switch (p) {
    case ConfusionPair::None: return "none";
    case ConfusionPair::SecretConfidential: return "S&C";
    case ConfusionPair::UnclassConfidential: return "U&C";
  }
  return "?";
}

std::vector<TopicComposition> topic_class_composition(
    const TopicModel& model, const std::vector<SecurityClass>& labels) {
  if (static_cast<int>(labels.size()) != model.n_docs())
    throw data_error("LabelCountMismatch", "one label per document required");

  std::vector<TopicComposition> out;
  std::vector<std::vector<size_t>> members(model.n_topics);
  for (int d = 0; d < model.n_docs(); ++d)
    members[dominant_topic(model, d)].push_back(d);

  for (int k = 0; k < model.n_topics; ++k) {
    if (members[k].empty()) continue;  // empty topics are excluded
    TopicComposition comp;
    comp.topic = k;
    comp.members = members[k];
    std::array<int64_t, 3> counts{};
    for (size_t d : comp.members) ++counts[class_index(labels[d])];
    for (int c = 0; c < 3; ++c)
      comp.class_fractions[c] =
          static_cast<double>(counts[c]) / static_cast<double>(comp.members.size());
    out.push_back(std::move(comp));
  }
  return out;
}

PurityThresholds derive_thresholds(const std::array<double, 3>& class_fractions,
                                   double lo_factor, double hi_factor) {
  double sum = class_fractions[0] + class_fractions[1] + class_fractions[2];
  if (std::abs(sum - 1.0) > 1e-9)
    throw config_error("BadFractions", "class fractions must sum to 1");
  if (!(lo_factor > 0) || !(lo_factor < hi_factor))
    throw config_error("BadFractions", "need 0 < lo_factor < hi_factor");

  PurityThresholds t;
  for (int c = 0; c < 3; ++c) {
    double lo = lo_factor * class_fractions[c];
    double hi = std::min(1.0, hi_factor * class_fractions[c]);
    // a class absent from the corpus gets the trivial [0, 0] band
    if (class_fractions[c] > 0 && !(lo < hi))
      throw config_error("BadFractions", "degenerate band for a class");
    t.bands[c] = {lo, hi};
  }
  return t;
}

namespace {

bool in_band(const PurityThresholds& t, SecurityClass c, double fraction) {
  auto [lo, hi] = t.bands[class_index(c)];
  if (hi == 0) return false;  // class absent from the reference fractions
  return fraction >= lo && fraction <= hi;
}

}  // namespace

std::vector<std::pair<int, ConfusionPair>> flag_impure_topics(
    const std::vector<TopicComposition>& compositions,
    const PurityThresholds& thresholds) {
  std::vector<std::pair<int, ConfusionPair>> flagged;
  for (const auto& comp : compositions) {
    double fu = comp.class_fractions[class_index(SecurityClass::U)];
    double fc = comp.class_fractions[class_index(SecurityClass::C)];
    double fs = comp.class_fractions[class_index(SecurityClass::S)];
    if (in_band(thresholds, SecurityClass::S, fs) &&
        in_band(thresholds, SecurityClass::C, fc))
      flagged.emplace_back(comp.topic, ConfusionPair::SecretConfidential);
    if (in_band(thresholds, SecurityClass::U, fu) &&
        in_band(thresholds, SecurityClass::C, fc))
      flagged.emplace_back(comp.topic, ConfusionPair::UnclassConfidential);
  }
  return flagged;
}

namespace {

bool in_pair(SecurityClass c, ConfusionPair p) {
  if (p == ConfusionPair::SecretConfidential)
    return c == SecurityClass::S || c == SecurityClass::C;
  if (p == ConfusionPair::UnclassConfidential)
    return c == SecurityClass::U || c == SecurityClass::C;
  return false;
}

std::array<double, 3> class_fractions_of(const std::vector<Paragraph>& ps) {
  std::array<double, 3> f{};
  for (const auto& p : ps) f[class_index(p.label)] += 1.0;
  for (double& v : f) v /= static_cast<double>(ps.size());
  return f;
}

}  // namespace

PruneResult prune_training_set(const std::vector<Paragraph>& train,
                               const PruneConfig& config) {
  if (train.empty()) throw data_error("EmptyCorpus", "empty training set");

  const auto n = static_cast<int64_t>(train.size());
  int k_main = config.k_main > 0 ? config.k_main
                                 : static_cast<int>(std::max<int64_t>(10, n / 500));
  PurityThresholds thresholds =
      derive_thresholds(class_fractions_of(train), config.lo_factor,
                        config.hi_factor);

  std::vector<std::string> texts;
  std::vector<SecurityClass> labels;
  for (const auto& p : train) {
    texts.push_back(p.text);
    labels.push_back(p.label);
  }

  double alpha_main = config.alpha > 0 ? config.alpha : 50.0 / k_main;
  TopicModel main_model =
      fit_lda_gibbs(texts, k_main, alpha_main, config.beta, config.iterations,
                    config.seed);
  auto main_comps = topic_class_composition(main_model, labels);
  auto main_flags = flag_impure_topics(main_comps, thresholds);

  PruneResult result;
  result.main_flags = main_flags;

  // pass 1: extract conditioned-pair members of flagged main topics
  std::vector<size_t> extracted;  // indices into train
  std::vector<std::pair<int, ConfusionPair>> extracted_origin;
  std::vector<bool> is_extracted(train.size(), false);
  for (const auto& comp : main_comps) {
    for (const auto& [topic, pair] : main_flags) {
      if (comp.topic != topic) continue;
      for (size_t d : comp.members) {
        if (is_extracted[d] || !in_pair(labels[d], pair)) continue;
        is_extracted[d] = true;
        extracted.push_back(d);
        extracted_origin.emplace_back(topic, pair);
      }
    }
  }

  std::vector<bool> removed(train.size(), false);
  if (!extracted.empty()) {
    // pass 2: subtopics over the pooled extracted instances
    int k_sub = config.k_sub > 0
                    ? config.k_sub
                    : static_cast<int>(std::max<size_t>(5, extracted.size() / 200));
    std::vector<std::string> sub_texts;
    std::vector<SecurityClass> sub_labels;
    for (size_t d : extracted) {
      sub_texts.push_back(train[d].text);
      sub_labels.push_back(labels[d]);
    }
    double alpha_sub = config.alpha > 0 ? config.alpha : 50.0 / k_sub;
    if (k_sub >= 2) {
      TopicModel sub_model =
          fit_lda_gibbs(sub_texts, k_sub, alpha_sub, config.beta,
                        config.iterations, config.seed + 1);
      auto sub_comps = topic_class_composition(sub_model, sub_labels);
      // purity is judged relative to the pooled extract, not the full
      // training set: a subtopic that still mirrors the pool's class mix is
      // the part that never separated
      std::vector<Paragraph> pool;
      for (size_t d : extracted) pool.push_back(train[d]);
      PurityThresholds sub_thresholds = derive_thresholds(
          class_fractions_of(pool), config.lo_factor, config.hi_factor);
      auto sub_flags = flag_impure_topics(sub_comps, sub_thresholds);
      result.sub_flags = sub_flags;
      for (const auto& comp : sub_comps) {
        for (const auto& [topic, pair] : sub_flags) {
          if (comp.topic != topic) continue;
          for (size_t local : comp.members) {
            size_t d = extracted[local];
            if (removed[d] || !in_pair(labels[d], pair)) continue;
            removed[d] = true;
            result.removed.push_back(
                RemovalRecord{train[d].id.serialize(), 2, topic, pair});
          }
        }
      }
    }
  }

  for (size_t d = 0; d < train.size(); ++d)
    if (!removed[d]) result.pruned_train.push_back(train[d]);

  if (result.pruned_train.empty())
    throw method_error("EverythingPruned", "pruned training set is empty");
  std::array<bool, 3> had{}, left{};
  for (const auto& p : train) had[class_index(p.label)] = true;
  for (const auto& p : result.pruned_train) left[class_index(p.label)] = true;
  for (int c = 0; c < 3; ++c)
    if (had[c] && !left[c])
      throw method_error("EverythingPruned",
                         "pruning removed every instance of a class");
  return result;
}

std::string topic_report_to_json(const TopicModel& model,
                                 const std::vector<TopicComposition>& comps,
                                 int top_words) {
  nlohmann::ordered_json j;
  j["K"] = model.n_topics;
  j["seed"] = model.seed;
  j["topics"] = nlohmann::json::array();
  for (const auto& comp : comps) {
    nlohmann::ordered_json t;
    t["index"] = comp.topic;
    t["top_words"] = model.top_words(comp.topic, top_words);
    t["class_fractions"] = {
        {"U", comp.class_fractions[0]},
        {"C", comp.class_fractions[1]},
        {"S", comp.class_fractions[2]}};
    t["members"] = comp.members.size();
    nlohmann::ordered_json flags = nlohmann::json::array();
    for (ConfusionPair p : comp.flags) flags.push_back(to_string(p));
    t["flagged_pair"] = flags;
    j["topics"].push_back(std::move(t));
  }
  return j.dump(2);
}

std::string removal_report_to_csv(const std::vector<RemovalRecord>& removed) {
  std::string out = "paragraph_id,pass,topic,pair\n";
  for (const auto& r : removed) {
    out += r.paragraph_id + "," + std::to_string(r.pass) + "," +
           std::to_string(r.topic) + "," + to_string(r.pair) + "\n";
  }
  return out;
}

}  // namespace acess
