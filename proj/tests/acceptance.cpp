// acceptance.cpp - end-to-end property checks, one pass/fail line each.
//
// Each criterion is self-contained and checked against an independent oracle
// (pair counting, exhaustive enumeration, sorting, brute-force scans, finite
// differences, or byte comparison).  Exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "acess/cable.hpp"
#include "acess/engine.hpp"
#include "acess/errors.hpp"
#include "acess/eval.hpp"
#include "acess/experiment.hpp"
#include "acess/kmeans.hpp"
#include "acess/lda.hpp"
#include "acess/linear_models.hpp"
#include "acess/synthetic.hpp"
#include "acess/text_pipeline.hpp"

using namespace acess;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

SecurityClass random_class(std::mt19937_64& rng) {
  return class_from_index(static_cast<int>(rng() % 3));
}

// ---------------------------------------------------------------------------
// 1. per-class F1 equals an integer pair-counting oracle

Check criterion_f1_oracle() {
  Check c;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    std::mt19937_64 rng(seed);
    constexpr int n = 500;
    std::vector<SecurityClass> truth(n), pred(n);
    ConfusionMatrix cm;
    for (int i = 0; i < n; ++i) {
      truth[i] = random_class(rng);
      pred[i] = random_class(rng);
      cm.add(truth[i], pred[i]);
    }
    auto f1 = f1_per_class(cm);
    for (int k = 0; k < 3; ++k) {
      // oracle: raw integer tallies straight from the label pairs
      int64_t tp = 0, fp = 0, fn = 0;
      for (int i = 0; i < n; ++i) {
        bool t = class_index(truth[i]) == k, p = class_index(pred[i]) == k;
        tp += t && p;
        fp += !t && p;
        fn += t && !p;
      }
      int64_t denom = 2 * tp + fp + fn;
      double oracle = denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
      c.require(f1[k] == oracle, "f1 mismatch at seed " + std::to_string(seed));
      // rational form: f1 * denom must round back to the integer 2*tp
      c.require(denom == 0 ||
                    (std::llround(f1[k] * static_cast<double>(denom)) == 2 * tp &&
                     std::abs(f1[k] * static_cast<double>(denom) -
                              static_cast<double>(2 * tp)) < 1e-6),
                "rational identity failed at seed " + std::to_string(seed));
    }
    if (!c.ok) break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// 2. document priors vs exhaustive max-rule enumeration

Check criterion_priors() {
  Check c;
  double prev_s = 0.0, prev_u = 2.0;
  for (int n = 1; n <= 8; ++n) {
    int64_t pow3 = 1;
    for (int i = 0; i < n; ++i) pow3 *= 3;
    std::array<int64_t, 3> count{};
    for (int64_t code = 0; code < pow3; ++code) {
      int64_t x = code;
      int mx = 0;
      for (int i = 0; i < n; ++i) {
        mx = std::max<int>(mx, x % 3);
        x /= 3;
      }
      ++count[mx];
    }
    for (int k = 0; k < 3; ++k) {
      double prior = document_class_prior(n, class_from_index(k));
      double scaled = prior * static_cast<double>(pow3);
      c.require(std::llround(scaled) == count[k] &&
                    std::abs(scaled - static_cast<double>(count[k])) < 1e-6,
                "prior != enumeration at n=" + std::to_string(n));
    }
    double ps = document_class_prior(n, SecurityClass::S);
    double pu = document_class_prior(n, SecurityClass::U);
    c.require(ps > prev_s, "Pr(S) not increasing at n=" + std::to_string(n));
    c.require(pu < prev_u, "Pr(U) not decreasing at n=" + std::to_string(n));
    prev_s = ps;
    prev_u = pu;
  }
  for (int k = 0; k < 3; ++k)
    c.require(std::abs(document_class_prior(1, class_from_index(k)) -
                       1.0 / 3.0) < 1e-12,
              "Pr(1) != 1/3");
  return c;
}

// ---------------------------------------------------------------------------
// 3. parse -> label round trip obeys the max rule

Check criterion_parsing() {
  Check c;
  SyntheticSpec spec;
  spec.n_documents = 200;
  spec.seed = 11;
  auto corpus = generate_synthetic_corpus(spec);
  c.require(corpus.documents.size() == 200, "generator short of 200 cables");
  for (const auto& doc : corpus.documents) {
    auto parsed = parse_cable(render_cable(doc));
    SecurityClass mx = SecurityClass::U;
    for (const auto& p : parsed.document.paragraphs) mx = max_class(mx, p.label);
    c.require(parsed.document.derived_label() == mx, "derived label != max");
    c.require(parsed.document.paragraphs.size() == doc.paragraphs.size(),
              "paragraph count changed in round trip");
    if (!c.ok) break;
  }
  bool threw = false;
  try {
    parse_cable(
        "ORIGIN: BERLIN\nCABLE: 000001\nDATE: 2009-05\n"
        "CLASSIFICATION: SECRET\n\n(X) bogus marking here\n");
  } catch (const DataError&) {
    threw = true;
  }
  c.require(threw, "unknown marking accepted");
  return c;
}

// ---------------------------------------------------------------------------
// 4. tie-inclusive top-K selection vs a sort-based oracle

Check criterion_tie_selection() {
  Check c;
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    int v = 1 + static_cast<int>(rng() % 60);
    int k = 1 + static_cast<int>(rng() % 20);
    std::map<std::string, double> scores;
    for (int i = 0; i < v; ++i)
      scores["t" + std::to_string(i)] =
          static_cast<double>(rng() % 8);  // few levels => frequent ties
    auto selected = select_top_features(scores, k);
    std::set<std::string> sel(selected.begin(), selected.end());

    std::vector<double> sorted;
    for (const auto& [t, s] : scores) sorted.push_back(s);
    std::sort(sorted.rbegin(), sorted.rend());
    int limit = std::min<int>(k, v);
    double cutoff = sorted[limit - 1];
    int64_t ties_at_cutoff = std::count(sorted.begin(), sorted.end(), cutoff);
    int64_t above = std::count_if(sorted.begin(), sorted.end(),
                                  [&](double s) { return s > cutoff; });

    c.require(static_cast<int>(sel.size()) >= limit, "fewer than K selected");
    double min_sel = 1e300, max_excl = -1e300;
    for (const auto& [t, s] : scores)
      (sel.count(t) ? min_sel = std::min(min_sel, s)
                    : max_excl = std::max(max_excl, s));
    c.require(static_cast<int64_t>(sel.size()) == above + ties_at_cutoff,
              "selected size != above + cutoff ties");
    c.require(sel.size() == scores.size() || min_sel > max_excl,
              "excluded score >= selected score");
    int64_t surplus = static_cast<int64_t>(sel.size()) - limit;
    c.require(surplus == ties_at_cutoff - (limit - above), "surplus wrong");
    if (!c.ok) break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// 5. k-means: monotone inertia, fixed point, brute-force assign

Check criterion_kmeans() {
  Check c;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed * 101 + 7);
    int n = 120, dim = 8, k = 4;
    std::normal_distribution<double> noise(0.0, 0.6);
    std::vector<SparseVector> X;
    for (int i = 0; i < n; ++i) {
      SparseVector sv;
      sv.dim = dim;
      int g = i % k;
      for (int j = 0; j < dim; ++j)
        sv.entries.push_back({j, (j % k == g ? 3.0 : 0.0) + noise(rng)});
      X.push_back(std::move(sv));
    }
    auto model = fit_kmeans(X, k, seed);
    for (size_t i = 1; i < model.inertia_history.size(); ++i)
      c.require(model.inertia_history[i] <= model.inertia_history[i - 1] + 1e-9,
                "inertia increased at seed " + std::to_string(seed));

    // fixed point: reassigning and re-averaging reproduces the centroids
    auto buckets = partition_by_cluster(model, X);
    for (int cl = 0; cl < k; ++cl) {
      if (buckets[cl].empty()) continue;
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
      for (size_t idx : buckets[cl]) mean += X[idx].dense();
      mean /= static_cast<double>(buckets[cl].size());
      c.require((mean - model.centroids.row(cl).transpose()).norm() < 1e-7,
                "not a Lloyd fixed point at seed " + std::to_string(seed));
    }

    for (int probe = 0; probe < 100; ++probe) {
      SparseVector sv;
      sv.dim = dim;
      for (int j = 0; j < dim; ++j) sv.entries.push_back({j, noise(rng) * 4});
      int got = assign(model, sv);
      int best = 0;
      double best_d = 1e300;
      Eigen::VectorXd x = sv.dense();
      for (int cl = 0; cl < k; ++cl) {
        double d = (x - model.centroids.row(cl).transpose()).squaredNorm();
        if (d < best_d - 1e-12) {
          best_d = d;
          best = cl;
        }
      }
      c.require(got == best, "assign mismatch at seed " + std::to_string(seed));
    }
    if (!c.ok) break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// 6. LDA: count conservation, normalization, bimodal topic separation

Check criterion_lda() {
  Check c;
  // two disjoint 20-word vocabularies, 100 docs
  auto bimodal = [](uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> texts;
    for (int d = 0; d < 100; ++d) {
      std::string prefix = d % 2 == 0 ? "alpha" : "beta";
      std::string text;
      for (int t = 0; t < 30; ++t)
        text += prefix + static_cast<char>('a' + rng() % 20) + " ";
      texts.push_back(text);
    }
    return texts;
  };

  auto conserved = [&](const TopicModel& m) {
    int64_t total = 0;
    Eigen::MatrixXi tw = Eigen::MatrixXi::Zero(m.n_topics, m.vocab_size());
    Eigen::MatrixXi dt = Eigen::MatrixXi::Zero(m.n_docs(), m.n_topics);
    for (int d = 0; d < m.n_docs(); ++d)
      for (size_t t = 0; t < m.doc_tokens[d].size(); ++t) {
        int z = m.assignments[d][t];
        ++tw(z, m.doc_tokens[d][t]);
        ++dt(d, z);
        ++total;
      }
    if (tw != m.topic_word || dt != m.doc_topic) return false;
    if (total != m.total_tokens()) return false;
    for (int k = 0; k < m.n_topics; ++k)
      if (m.topic_total(k) != m.topic_word.row(k).sum()) return false;
    return true;
  };

  // conservation must hold at every iteration count, hence after every sweep
  auto texts = bimodal(0);
  for (int iters = 1; iters <= 8; ++iters) {
    auto m = fit_lda_gibbs(texts, 3, 0.5, 0.01, iters, 5);
    c.require(conserved(m),
              "counts not conserved after " + std::to_string(iters) + " sweeps");
  }

  auto m = fit_lda_gibbs(texts, 3, 0.5, 0.01, 60, 5);
  auto phi = m.phi();
  auto theta = m.theta();
  for (int k = 0; k < m.n_topics; ++k)
    c.require(std::abs(phi.row(k).sum() - 1.0) < 1e-9, "phi row not normalized");
  for (int d = 0; d < m.n_docs(); ++d)
    c.require(std::abs(theta.row(d).sum() - 1.0) < 1e-9,
              "theta row not normalized");

  int clean_seeds = 0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    auto mm = fit_lda_gibbs(bimodal(seed), 2, 0.5, 0.01, 150, seed);
    bool all_pure = true;
    for (int k = 0; k < 2; ++k) {
      auto top = mm.top_words(k, 5);
      int alpha = 0;
      for (const auto& w : top) alpha += w.rfind("alpha", 0) == 0;
      all_pure = all_pure && (alpha == 0 || alpha == 5);
    }
    clean_seeds += all_pure;
  }
  c.require(clean_seeds >= 4, "topics separated in only " +
                                  std::to_string(clean_seeds) + "/5 seeds");
  return c;
}

// ---------------------------------------------------------------------------
// 7. pruning recovers an injected confusable topic and does not hurt logreg

Check criterion_pruning() {
  Check c;
  double recall_sum = 0, collateral_sum = 0;
  double f1_pruned_sum = 0, f1_unpruned_sum = 0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    SyntheticSpec spec;
    spec.n_documents = 500;  // ~2000 paragraphs at 2..6 per cable
    spec.n_similarity_groups = 1;
    // the 50/50 injected topic must sit well inside the default 1.5x purity
    // band even when its label draw runs a couple of sigma off balance
    spec.class_mixture = {0.2, 0.4, 0.4};
    // with one group the local markers duplicate the global signal; drop them
    // so the injected instances actually poison what the classifier relies on
    spec.local_marker_tokens = 0;
    spec.confusable_rate = 0.15;
    spec.seed = seed * 31;
    auto corpus = generate_synthetic_corpus(spec);
    auto split = split_corpus(corpus.documents, std::array<double,3>{0.65, 0.05, 0.3}.data(), seed);
    auto train = split.train_paragraphs();
    auto test = split.test_paragraphs();

    PruneConfig pc;
    pc.seed = seed;
    pc.k_sub = 3;  // the extracted pool is small; oversplitting it starves
                   // the subtopic compositions of statistical weight
    auto result = prune_training_set(train, pc);

    std::set<std::string> train_injected, removed;
    for (const auto& p : train)
      if (corpus.injected_ids.count(p.id.serialize()))
        train_injected.insert(p.id.serialize());
    for (const auto& r : result.removed) removed.insert(r.paragraph_id);
    int64_t hit = 0, collateral = 0;
    for (const auto& id : removed)
      (train_injected.count(id) ? hit : collateral) += 1;
    int64_t clean = static_cast<int64_t>(train.size() - train_injected.size());
    recall_sum += static_cast<double>(hit) /
                  std::max<int64_t>(1, static_cast<int64_t>(train_injected.size()));
    collateral_sum += static_cast<double>(collateral) / std::max<int64_t>(1, clean);

    VectorizerConfig space = {Weighting::TfIdf, true, true, 1000,
                              Normalization::None, true, true, 2};
    auto eval_logreg = [&](const std::vector<Paragraph>& tr) {
      std::vector<std::string> texts;
      std::vector<SecurityClass> labels;
      for (const auto& p : tr) {
        texts.push_back(p.text);
        labels.push_back(p.label);
      }
      auto vocab = build_vocabulary(texts, space);
      std::vector<SparseVector> X;
      for (const auto& t : texts) X.push_back(vectorize(t, vocab, space));
      auto model = train_logreg_cg(X, labels, 1e-2, balanced_class_weights(labels));
      ConfusionMatrix cm;
      for (const auto& p : test)
        cm.add(p.label, model.predict(vectorize(p.text, vocab, space)));
      return evaluate(cm).macro_f1;
    };
    f1_unpruned_sum += eval_logreg(train);
    f1_pruned_sum += eval_logreg(result.pruned_train);
  }
  double recall = recall_sum / 5, collateral = collateral_sum / 5;
  std::ostringstream why;
  why << "recall=" << recall << " collateral=" << collateral
      << " f1 pruned=" << f1_pruned_sum / 5
      << " unpruned=" << f1_unpruned_sum / 5;
  c.require(recall >= 0.80, "mean recovery below 80%: " + why.str());
  c.require(collateral <= 0.05, "mean collateral above 5%: " + why.str());
  c.require(f1_pruned_sum >= f1_unpruned_sum - 1e-12,
            "pruning hurt logreg: " + why.str());
  if (c.ok) c.detail = why.str();
  return c;
}

// ---------------------------------------------------------------------------
// shared harness for criteria 8 and 9: global baselines on a split

double baseline_macro_f1(const DataSplit& split, ModelKind kind,
                         std::array<double, 3>* per_class = nullptr,
                         const std::vector<Paragraph>* train_override = nullptr) {
  auto train = train_override ? *train_override : split.train_paragraphs();
  auto val = split.validation_paragraphs();
  auto test = split.test_paragraphs();
  std::vector<std::string> tr_texts, val_texts;
  std::vector<SecurityClass> tr_y, val_y;
  for (const auto& p : train) {
    tr_texts.push_back(p.text);
    tr_y.push_back(p.label);
  }
  for (const auto& p : val) {
    val_texts.push_back(p.text);
    val_y.push_back(p.label);
  }
  GridSpec grid;
  grid.svm_cost = {1.0, 10.0};
  grid.logreg_lambda = {1e-4, 1e-2};
  grid.nb_alpha = {0.1, 1.0};
  grid.max_features = {0};
  grid.normalization = {Normalization::None};
  VectorizerConfig space = {Weighting::TfIdf, true, true, 1000,
                            Normalization::None, true, true, 2};
  auto result = grid_search(tr_texts, tr_y, val_texts, val_y, grid, kind, space, 2);
  ConfusionMatrix cm;
  for (const auto& p : test)
    cm.add(p.label,
           result.model.predict(vectorize(p.text, result.vocabulary,
                                          result.vectorizer_config)));
  auto report = evaluate(cm);
  if (per_class)
    for (int k = 0; k < 3; ++k) (*per_class)[k] = report.per_class[k].f1;
  return report.macro_f1;
}

// ---------------------------------------------------------------------------
// 8. ACESS beats every global method on the planted-cluster corpus

Check criterion_acess_superiority() {
  Check c;
  double acess_sum = 0;
  std::array<double, 4> rival_sum{};  // nb, svm, logreg, prune+logreg
  double worst_class_f1 = 1.0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    SyntheticSpec spec;
    spec.n_documents = 750;  // ~3000 paragraphs
    spec.n_similarity_groups = 3;
    // per-group class skew keeps group-shaped topics outside the purity
    // bands; the corpus-wide mixture stays uniform
    spec.class_mixture = {0.6, 0.1, 0.3};
    spec.rotate_mixture_by_group = true;
    spec.global_marker_tokens = 4;
    spec.global_marker_noise = 0.45;
    spec.seed = seed * 977;
    auto corpus = generate_synthetic_corpus(spec);
    auto split = split_corpus(corpus.documents, std::array<double,3>{0.6, 0.2, 0.2}.data(), seed);

    AcessConfig cfg;
    cfg.force_k = 3;
    cfg.grid.svm_cost = {1.0, 10.0};
    cfg.grid.max_features = {0};
    cfg.grid.normalization = {Normalization::None};
    auto run = run_acess(split, cfg);
    acess_sum += run.pooled.macro_f1;
    for (const auto& m : run.pooled.per_class)
      worst_class_f1 = std::min(worst_class_f1, m.f1);

    ModelKind kinds[3] = {ModelKind::NaiveBayes, ModelKind::LinearSvm,
                          ModelKind::LogRegOvo};
    for (int i = 0; i < 3; ++i) {
      std::array<double, 3> per{};
      rival_sum[i] += baseline_macro_f1(split, kinds[i], &per);
      for (double f : per) worst_class_f1 = std::min(worst_class_f1, f);
    }
    PruneConfig pc;
    pc.seed = seed;
    auto pruned = prune_training_set(split.train_paragraphs(), pc);
    std::array<double, 3> per{};
    rival_sum[3] += baseline_macro_f1(split, ModelKind::LogRegOvo,
                                      &per, &pruned.pruned_train);
    for (double f : per) worst_class_f1 = std::min(worst_class_f1, f);
  }
  double acess = acess_sum / 5;
  std::ostringstream why;
  why << "acess=" << acess << " nb=" << rival_sum[0] / 5
      << " svm=" << rival_sum[1] / 5 << " logreg=" << rival_sum[2] / 5
      << " prune+logreg=" << rival_sum[3] / 5
      << " worst per-class f1=" << worst_class_f1;
  for (double r : rival_sum)
    c.require(acess >= r / 5 + 0.05, "margin below 0.05: " + why.str());
  c.require(worst_class_f1 > 0.5, "a per-class F1 at or below 0.5: " + why.str());
  if (c.ok) c.detail = why.str();
  return c;
}

// ---------------------------------------------------------------------------
// 9. k=1 ACESS degenerates to the global grid-searched classifier

Check criterion_degeneracy() {
  Check c;
  SyntheticSpec spec;
  spec.n_documents = 250;
  spec.n_similarity_groups = 3;
  spec.global_marker_noise = 0.2;
  spec.seed = 5;
  auto corpus = generate_synthetic_corpus(spec);
  auto split = split_corpus(corpus.documents, std::array<double,3>{0.6, 0.2, 0.2}.data(), 3);

  AcessConfig cfg;
  cfg.force_k = 1;
  cfg.grid.svm_cost = {1.0, 10.0};
  cfg.grid.max_features = {0, 500};
  cfg.grid.normalization = {Normalization::None, Normalization::L2};
  auto run = run_acess(split, cfg);

  auto global = train_bucket(split.train_paragraphs(),
                             split.validation_paragraphs(), cfg);
  ConfusionMatrix cm;
  std::map<std::string, std::vector<SecurityClass>> by_doc;
  std::map<std::string, SecurityClass> doc_truth;
  for (const auto& doc : split.test) doc_truth[doc.cable_number] = doc.derived_label();
  for (const auto& doc : split.test)
    for (const auto& p : doc.paragraphs) {
      SecurityClass pred = predict_bucket(global, p.text);
      cm.add(p.label, pred);
      by_doc[doc.cable_number].push_back(pred);
      auto it = run.test_predictions.find(p.id.serialize());
      c.require(it != run.test_predictions.end() && it->second == pred,
                "paragraph prediction differs at " + p.id.serialize());
    }
  auto report = evaluate(cm);
  c.require(report.macro_f1 == run.pooled.macro_f1, "macro F1 differs");
  for (int k = 0; k < 3; ++k)
    c.require(report.per_class[k].f1 == run.pooled.per_class[k].f1,
              "per-class F1 differs");
  auto doc_report = document_level_eval(by_doc, doc_truth);
  c.require(doc_report.macro_f1 == run.document_level.macro_f1,
            "document-level F1 differs");
  return c;
}

// ---------------------------------------------------------------------------
// 10. logistic gradient vs central finite differences

Check criterion_gradient() {
  Check c;
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    int n = 8 + static_cast<int>(rng() % 20), dim = 2 + static_cast<int>(rng() % 5);
    std::vector<SparseVector> X;
    std::vector<int> y;
    std::vector<double> sw;
    for (int i = 0; i < n; ++i) {
      SparseVector sv;
      sv.dim = dim;
      for (int j = 0; j < dim; ++j) sv.entries.push_back({j, gauss(rng)});
      X.push_back(std::move(sv));
      y.push_back(rng() % 2 ? 1 : -1);
      sw.push_back(0.5 + (rng() % 100) / 100.0);
    }
    double lambda = std::pow(10.0, -static_cast<double>(rng() % 4));
    Eigen::VectorXd w(dim);
    for (int j = 0; j < dim; ++j) w(j) = gauss(rng);
    double b = gauss(rng);

    Eigen::VectorXd grad(dim);
    double grad_b = 0;
    logistic_loss_grad(X, y, sw, lambda, w, b, grad, grad_b);

    const double h = 1e-6;
    Eigen::VectorXd dummy(dim);
    double db = 0;
    auto loss_at = [&](const Eigen::VectorXd& ww, double bb) {
      return logistic_loss_grad(X, y, sw, lambda, ww, bb, dummy, db);
    };
    for (int j = 0; j <= dim; ++j) {
      Eigen::VectorXd wp = w, wm = w;
      double bp = b, bm = b;
      if (j < dim) {
        wp(j) += h;
        wm(j) -= h;
      } else {
        bp += h;
        bm -= h;
      }
      double fd = (loss_at(wp, bp) - loss_at(wm, bm)) / (2 * h);
      double analytic = j < dim ? grad(j) : grad_b;
      double rel = std::abs(fd - analytic) / std::max(1.0, std::abs(analytic));
      c.require(rel < 1e-5, "gradient off by " + std::to_string(rel) +
                                " at trial " + std::to_string(trial));
    }
    if (!c.ok) break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// 11. byte-identical reruns across the whole pipeline

Check criterion_determinism() {
  Check c;
  fs::path base = fs::temp_directory_path() / "acess-acceptance-determinism";
  fs::remove_all(base);
  fs::create_directories(base);

  // route the corpus through the text renderer + parser so parsing is covered
  SyntheticSpec spec;
  spec.n_documents = 120;
  spec.n_similarity_groups = 2;
  spec.confusable_rate = 0.10;
  spec.seed = 9;
  auto corpus = generate_synthetic_corpus(spec);
  std::vector<Document> parsed;
  for (const auto& doc : corpus.documents)
    parsed.push_back(parse_cable(render_cable(doc)).document);
  fs::path corpus_path = base / "corpus.jsonl";
  save_corpus(parsed, corpus_path);

  auto run_pair = [&](const std::string& method, const std::string& tag) {
    ExperimentConfig cfg = parse_experiment_config(
        "method = " + method + "\ncorpus = " + corpus_path.string() +
        "\nsplit_seed = 4\n"
        "[grid]\nsvm_cost = 1.0\nlogreg_lambda = 0.01\nnb_alpha = 1.0\n"
        "max_features = 0\nnormalization = none\n"
        "[prune]\niterations = 60\nseed = 2\n");
    run_experiment(cfg, base / (tag + "-a"));
    run_experiment(cfg, base / (tag + "-b"));
    for (const auto& entry : fs::directory_iterator(base / (tag + "-a"))) {
      fs::path twin = base / (tag + "-b") / entry.path().filename();
      c.require(fs::exists(twin), "missing rerun file " + twin.string());
      if (!fs::exists(twin)) continue;
      std::ifstream fa(entry.path(), std::ios::binary);
      std::ifstream fb(twin, std::ios::binary);
      std::ostringstream sa, sb;
      sa << fa.rdbuf();
      sb << fb.rdbuf();
      c.require(sa.str() == sb.str(),
                "rerun differs: " + entry.path().filename().string() +
                    " (" + method + ")");
    }
  };
  run_pair("acess", "acess");          // splitting, clustering, training
  run_pair("prune_logreg", "prune");   // LDA pruning path
  fs::remove_all(base);
  return c;
}

// ---------------------------------------------------------------------------
// 12. Table-I manifest: k heuristic and tie-inclusive feature count

Check criterion_manifest() {
  Check c;
  // every word unique corpus-wide => all tf-idf scores tie at the cutoff,
  // so the similarity space must keep more than its nominal 1000 features
  std::mt19937_64 rng(41);
  std::vector<Document> docs;
  int word = 0;
  auto next_word = [&] {
    std::string w;
    int x = word++;
    for (int i = 0; i < 4; ++i) {
      w += static_cast<char>('a' + x % 26);
      x /= 26;
    }
    return "uq" + w;
  };
  for (int d = 0; d < 300; ++d) {
    Document doc;
    doc.cable_number = std::to_string(100000 + d);
    doc.origin = "TESTPOST";
    doc.year_month = {2009, 1 + d % 12};
    int n_par = 2 + static_cast<int>(rng() % 2);
    for (int p = 0; p < n_par; ++p) {
      Paragraph par;
      par.position = p + 1;
      par.label = random_class(rng);
      for (int t = 0; t < 12; ++t) par.text += next_word() + " ";
      par.text += std::string(to_word(par.label)) + "marker";
      par.id = ParagraphId{doc.origin, doc.year_month, doc.cable_number,
                           par.position, par.label};
      doc.paragraphs.push_back(std::move(par));
    }
    doc.header_label = doc.derived_label();
    docs.push_back(std::move(doc));
  }
  auto split = split_corpus(docs, std::array<double,3>{0.6, 0.2, 0.2}.data(), 1);

  AcessConfig cfg;
  cfg.grid.svm_cost = {1.0};
  cfg.grid.max_features = {0};
  cfg.grid.normalization = {Normalization::None};
  auto run = run_acess(split, cfg);
  auto manifest = nlohmann::json::parse(run_manifest_to_json(run, cfg, "deadbeef"));

  int64_t n_train = static_cast<int64_t>(split.train_paragraphs().size());
  c.require(manifest.at("statistics").at("clusters").get<int>() ==
                default_cluster_count(n_train, cfg.cluster_divisor),
            "manifest k != default_cluster_count");
  int features = manifest.at("statistics").at("similarity_features").get<int>();
  c.require(features >= 1000, "similarity feature count below 1000");
  c.require(features > 1000, "tie at the cutoff not retained");
  c.detail = "k=" + std::to_string(run.k) +
             " similarity_features=" + std::to_string(features);
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Check()> fn;
  };
  std::vector<Criterion> criteria = {
      {"f1 pair-counting oracle", criterion_f1_oracle},
      {"document prior enumeration", criterion_priors},
      {"cable parse and max-rule round trip", criterion_parsing},
      {"tie-inclusive feature selection", criterion_tie_selection},
      {"k-means contracts", criterion_kmeans},
      {"lda contracts and bimodal separation", criterion_lda},
      {"pruning recovery of injected confusables", criterion_pruning},
      {"partitioned classifier superiority", criterion_acess_superiority},
      {"k=1 degeneracy to the global baseline", criterion_degeneracy},
      {"logistic gradient finite differences", criterion_gradient},
      {"byte-identical reruns", criterion_determinism},
      {"table-style manifest statistics", criterion_manifest},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = criteria[i].fn();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    std::cout << (result.ok ? "[PASS] " : "[FAIL] ") << "criterion " << i + 1
              << ": " << criteria[i].name << " (" << secs << "s)";
    if (!result.detail.empty()) std::cout << " -- " << result.detail;
    std::cout << "\n" << std::flush;
    failures += !result.ok;
  }
  if (failures) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all 12 criteria passed\n";
  return 0;
}
