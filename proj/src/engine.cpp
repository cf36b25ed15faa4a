#include "acess/engine.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace acess {

namespace {

std::vector<SecurityClass> labels_of(const std::vector<Paragraph>& ps) {
  std::vector<SecurityClass> out;
  out.reserve(ps.size());
  for (const auto& p : ps) out.push_back(p.label);
  return out;
}

std::vector<std::string> texts_of(const std::vector<Paragraph>& ps) {
  std::vector<std::string> out;
  out.reserve(ps.size());
  for (const auto& p : ps) out.push_back(p.text);
  return out;
}

struct Routed {
  ClusterModel clusters;
  Vocabulary similarity_vocab;
  std::vector<std::vector<size_t>> train_buckets, val_buckets, test_buckets;
};

Routed route(const DataSplit& split, const AcessConfig& config,
             const std::vector<Paragraph>& train,
             const std::vector<Paragraph>& val,
             const std::vector<Paragraph>& test) {
  Routed r;
  r.similarity_vocab = build_vocabulary(texts_of(train), config.similarity);

  auto vec_all = [&](const std::vector<Paragraph>& ps) {
    std::vector<SparseVector> X;
    X.reserve(ps.size());
    for (const auto& p : ps)
      X.push_back(vectorize(p.text, r.similarity_vocab, config.similarity));
    return X;
  };
  auto Xtr = vec_all(train);

  int k = config.force_k
              ? *config.force_k
              : default_cluster_count(static_cast<int64_t>(train.size()),
                                      config.cluster_divisor);
  k = std::min<int>(k, static_cast<int>(train.size()));
  r.clusters = fit_kmeans(Xtr, k, config.kmeans_seed);

  r.train_buckets = partition_by_cluster(r.clusters, Xtr);
  r.val_buckets = partition_by_cluster(r.clusters, vec_all(val));
  r.test_buckets = partition_by_cluster(r.clusters, vec_all(test));
  return r;
}

}  // namespace

BucketModel train_bucket(const std::vector<Paragraph>& train,
                         const std::vector<Paragraph>& validation,
                         const AcessConfig& config) {
  BucketModel bm;
  if (train.empty()) throw data_error("EmptyTrainingSet", "bucket has no training data");

  auto train_labels = labels_of(train);
  bool single_class = std::all_of(train_labels.begin(), train_labels.end(),
                                  [&](SecurityClass c) { return c == train_labels[0]; });
  if (single_class) {
    bm.constant = true;
    bm.constant_class = train_labels[0];
    return bm;
  }

  auto train_texts = texts_of(train);
  if (validation.empty()) {
    // no validation points routed here: fall back to the first grid point
    bm.validation_skipped = true;
    const auto& hypers = config.classifier == ModelKind::NaiveBayes
                             ? config.grid.nb_alpha
                             : (config.classifier == ModelKind::LogRegOvo
                                    ? config.grid.logreg_lambda
                                    : config.grid.svm_cost);
    GridSpec single;
    single.svm_cost = {hypers.front()};
    single.logreg_lambda = {hypers.front()};
    single.nb_alpha = {hypers.front()};
    single.max_features = {config.grid.max_features.front()};
    single.normalization = {config.grid.normalization.front()};
    // score the default point against the training set itself
    bm.search = grid_search(train_texts, train_labels, train_texts, train_labels,
                            single, config.classifier, config.security,
                            config.train_seed);
    bm.search.validation_skipped = true;
    return bm;
  }

  bm.search = grid_search(train_texts, train_labels, texts_of(validation),
                          labels_of(validation), config.grid, config.classifier,
                          config.security, config.train_seed);
  return bm;
}

SecurityClass predict_bucket(const BucketModel& model, const std::string& text) {
  if (model.constant) return model.constant_class;
  SparseVector x =
      vectorize(text, model.search.vocabulary, model.search.vectorizer_config);
  return model.search.model.predict(x);
}

AcessRun run_acess(const DataSplit& split, const AcessConfig& config) {
  auto train = split.train_paragraphs();
  auto val = split.validation_paragraphs();
  auto test = split.test_paragraphs();
  if (train.empty()) throw data_error("EmptyTrainingSet", "no training paragraphs");
  auto train_labels = labels_of(train);
  bool single = std::all_of(train_labels.begin(), train_labels.end(),
                            [&](SecurityClass c) { return c == train_labels[0]; });
  if (single)
    throw data_error("SingleClassCorpus", "training set has a single class");

  Routed r = route(split, config, train, val, test);

  AcessRun run;
  run.k = r.clusters.k;
  run.similarity_features = r.similarity_vocab.size();

  std::map<std::string, std::vector<SecurityClass>> doc_preds;
  std::map<std::string, SecurityClass> doc_truth;
  for (const auto& d : split.test) doc_truth[d.origin + "/" + d.cable_number] =
      d.derived_label();

  for (int c = 0; c < r.clusters.k; ++c) {
    std::vector<Paragraph> btr, bval, btest;
    for (size_t i : r.train_buckets[c]) btr.push_back(train[i]);
    for (size_t i : r.val_buckets[c]) bval.push_back(val[i]);
    for (size_t i : r.test_buckets[c]) btest.push_back(test[i]);

    ClusterResult res;
    res.cluster = c;
    res.n_train = static_cast<int64_t>(btr.size());
    res.n_validation = static_cast<int64_t>(bval.size());
    res.n_test = static_cast<int64_t>(btest.size());
    {
      std::array<bool, 3> seen{};
      for (const auto& p : btr) seen[class_index(p.label)] = true;
      for (SecurityClass cls : kAllClasses)
        if (seen[class_index(cls)]) res.classes_present.push_back(cls);
    }

    BucketModel bm = train_bucket(btr, bval, config);
    res.constant_predictor = bm.constant;
    res.validation_skipped = bm.validation_skipped;
    if (!bm.constant) res.chosen = bm.search.best;

    ConfusionMatrix local;
    for (const auto& p : btest) {
      SecurityClass pred = predict_bucket(bm, p.text);
      local.add(p.label, pred);
      run.pooled_cm.add(p.label, pred);
      run.test_predictions[p.id.serialize()] = pred;
      doc_preds[p.id.origin + "/" + p.id.cable_number].push_back(pred);
    }
    res.test_f1 = f1_per_class(local);
    run.clusters.push_back(std::move(res));
  }

  run.pooled = evaluate(run.pooled_cm, "acess_pooled");
  if (!doc_preds.empty())
    run.document_level = document_level_eval(doc_preds, doc_truth);
  return run;
}

RoutingReport explain_routing(const DataSplit& split, const AcessConfig& config) {
  auto train = split.train_paragraphs();
  auto val = split.validation_paragraphs();
  auto test = split.test_paragraphs();
  if (train.empty()) throw data_error("EmptyTrainingSet", "no training paragraphs");

  Routed r = route(split, config, train, val, test);
  RoutingReport report;
  for (int c = 0; c < r.clusters.k; ++c) {
    report.per_cluster.push_back(
        {static_cast<int64_t>(r.train_buckets[c].size()),
         static_cast<int64_t>(r.val_buckets[c].size()),
         static_cast<int64_t>(r.test_buckets[c].size())});
    if (r.val_buckets[c].empty()) report.validation_unused.push_back(c);
    if (r.test_buckets[c].empty()) report.test_unused.push_back(c);
  }
  return report;
}

std::string run_manifest_to_json(const AcessRun& run, const AcessConfig& config,
                                 const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["schema"] = "acess-run-v1";
  j["config_hash"] = config_hash;
  j["seeds"] = {{"kmeans", config.kmeans_seed}, {"train", config.train_seed}};
  // Table-I-style statistics
  j["statistics"] = {{"clusters", run.k},
                     {"similarity_features", run.similarity_features}};
  j["clusters"] = nlohmann::json::array();
  for (const auto& c : run.clusters) {
    nlohmann::ordered_json jc;
    jc["index"] = c.cluster;
    jc["n_train"] = c.n_train;
    jc["n_validation"] = c.n_validation;
    jc["n_test"] = c.n_test;
    std::string classes;
    for (SecurityClass cls : c.classes_present) classes += to_letter(cls);
    jc["classes"] = classes;
    jc["constant_predictor"] = c.constant_predictor;
    jc["validation_skipped"] = c.validation_skipped;
    if (!c.constant_predictor) {
      jc["chosen"] = {{"hyper", c.chosen.hyper},
                      {"max_features", c.chosen.max_features},
                      {"normalization", to_string(c.chosen.normalization)}};
    }
    jc["test_f1"] = {{"U", c.test_f1[0]}, {"C", c.test_f1[1]}, {"S", c.test_f1[2]}};
    j["clusters"].push_back(std::move(jc));
  }
  j["pooled"] = nlohmann::json::parse(report_to_json(run.pooled));
  j["document_level"] = nlohmann::json::parse(report_to_json(run.document_level));
  return j.dump(2);
}

}  // namespace acess
