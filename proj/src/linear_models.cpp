#include "acess/linear_models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

namespace acess {

namespace {

std::vector<SecurityClass> present_classes(const std::vector<SecurityClass>& y) {
  std::array<bool, 3> seen{};
  for (SecurityClass c : y) seen[class_index(c)] = true;
  std::vector<SecurityClass> out;
  for (SecurityClass c : kAllClasses)
    if (seen[class_index(c)]) out.push_back(c);
  return out;
}

void check_dims(const std::vector<SparseVector>& X) {
  for (const auto& x : X)
    if (x.dim != X.front().dim)
      throw data_error("DimensionMismatch", "inconsistent vector dimensionality");
}

double dot(const SparseVector& x, const Eigen::VectorXd& w) {
  double s = 0;
  for (const auto& [i, v] : x.entries) s += v * w[i];
  return s;
}

/// argmax over per-class scores, ties broken toward the higher class
SecurityClass argmax_class(const std::vector<SecurityClass>& classes,
                           const std::vector<double>& scores) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(scores.size()); ++i)
    if (scores[i] >= scores[best]) best = i;  // classes are in ascending order
  return classes[best];
}

}  // namespace

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::NaiveBayes: return "naive_bayes";
    case ModelKind::LogRegOvo: return "logreg_ovo";
    case ModelKind::LinearSvm: return "linear_svm";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "naive_bayes") return ModelKind::NaiveBayes;
  if (s == "logreg_ovo") return ModelKind::LogRegOvo;
  if (s == "linear_svm") return ModelKind::LinearSvm;
  throw config_error("BadModelKind", s);
}

SecurityClass TrainedClassifier::predict(const SparseVector& x) const {
  if (constant) return *constant;
  if (x.dim != dim) throw data_error("DimensionMismatch", "predict input dim");

  if (kind == ModelKind::LogRegOvo) {
    std::array<int, 3> votes{};
    for (const auto& comp : components) {
      double score = dot(x, comp.weights) + comp.bias;
      SecurityClass winner = score >= 0 ? comp.positive : comp.negative;
      ++votes[class_index(winner)];
    }
    SecurityClass best = classes.front();
    for (SecurityClass c : classes)
      if (votes[class_index(c)] >= votes[class_index(best)]) best = c;
    return best;
  }

  std::vector<double> scores;
  scores.reserve(components.size());
  for (const auto& comp : components)
    scores.push_back(dot(x, comp.weights) + comp.bias);
  return argmax_class(classes, scores);
}

std::vector<double> balanced_class_weights(const std::vector<SecurityClass>& y) {
  auto classes = present_classes(y);
  std::array<int64_t, 3> counts{};
  for (SecurityClass c : y) ++counts[class_index(c)];
  std::vector<double> w;
  for (SecurityClass c : classes)
    w.push_back(static_cast<double>(y.size()) /
                (static_cast<double>(classes.size()) *
                 static_cast<double>(counts[class_index(c)])));
  return w;
}

TrainedClassifier train_naive_bayes(const std::vector<SparseVector>& X,
                                    const std::vector<SecurityClass>& y,
                                    double alpha) {
  if (X.size() != y.size() || X.empty())
    throw data_error("DimensionMismatch", "|X| must equal |y| and be >= 1");
  if (alpha <= 0) throw config_error("BadAlpha", "smoothing must be > 0");
  check_dims(X);

  TrainedClassifier model;
  model.kind = ModelKind::NaiveBayes;
  model.dim = X.front().dim;
  model.classes = present_classes(y);
  if (model.classes.size() == 1) {
    model.constant = model.classes.front();
    return model;
  }

  int dim = model.dim;
  for (SecurityClass c : model.classes) {
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(dim);
    int64_t n_c = 0;
    for (size_t i = 0; i < X.size(); ++i) {
      if (y[i] != c) continue;
      ++n_c;
      for (const auto& [idx, v] : X[i].entries) counts[idx] += v;
    }
    double total = counts.sum() + alpha * dim;
    LinearComponent comp;
    comp.positive = c;
    comp.weights = ((counts.array() + alpha) / total).log().matrix();
    comp.bias = std::log(static_cast<double>(n_c) / static_cast<double>(y.size()));
    model.components.push_back(std::move(comp));
  }
  return model;
}

double logistic_loss_grad(const std::vector<SparseVector>& X,
                          const std::vector<int>& y_pm,
                          const std::vector<double>& sample_weights,
                          double lambda, const Eigen::VectorXd& w, double b,
                          Eigen::VectorXd& grad_w, double& grad_b) {
  grad_w = lambda * w;
  grad_b = 0;
  double loss = 0.5 * lambda * w.squaredNorm();
  for (size_t i = 0; i < X.size(); ++i) {
    double margin = y_pm[i] * (dot(X[i], w) + b);
    double s = sample_weights[i];
    // log(1+exp(-m)) computed stably
    loss += s * (margin > 0 ? std::log1p(std::exp(-margin))
                            : -margin + std::log1p(std::exp(margin)));
    double sigma = 1.0 / (1.0 + std::exp(margin));  // d loss / d margin = -sigma
    double coef = -s * sigma * y_pm[i];
    for (const auto& [idx, v] : X[i].entries) grad_w[idx] += coef * v;
    grad_b += coef;
  }
  if (!std::isfinite(loss)) throw method_error("NonFiniteLoss", "logistic loss");
  return loss;
}

namespace {

/// Polak-Ribiere CG with restarts and Armijo backtracking on the weighted
/// logistic loss. Optimizes (w, b) jointly; returns the fitted pair.
std::pair<Eigen::VectorXd, double> fit_binary_logreg(
    const std::vector<SparseVector>& X, const std::vector<int>& y_pm,
    const std::vector<double>& sample_weights, double lambda, int dim) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  double b = 0;
  Eigen::VectorXd g(dim), g_next(dim);
  double gb = 0, gb_next = 0;
  double loss = logistic_loss_grad(X, y_pm, sample_weights, lambda, w, b, g, gb);
  Eigen::VectorXd d = -g;
  double db = -gb;

  constexpr double kGradTol = 1e-6;
  constexpr double kArmijoC = 1e-4;
  constexpr int kMaxIter = 500;

  for (int iter = 0; iter < kMaxIter; ++iter) {
    double gnorm = std::sqrt(g.squaredNorm() + gb * gb);
    if (gnorm < kGradTol) break;

    double slope = g.dot(d) + gb * db;
    if (slope >= 0) {  // restart on a non-descent direction
      d = -g;
      db = -gb;
      slope = -(g.squaredNorm() + gb * gb);
    }

    double step = 1.0;
    double new_loss = loss;
    Eigen::VectorXd w_try;
    double b_try = b;
    for (int ls = 0; ls < 50; ++ls) {
      w_try = w + step * d;
      b_try = b + step * db;
      new_loss = logistic_loss_grad(X, y_pm, sample_weights, lambda, w_try,
                                    b_try, g_next, gb_next);
      if (new_loss <= loss + kArmijoC * step * slope) break;
      step *= 0.5;
    }
    if (new_loss > loss) break;  // line search failed to improve

    double beta_num = g_next.dot(g_next - g) + gb_next * (gb_next - gb);
    double beta_den = g.squaredNorm() + gb * gb;
    double beta = std::max(0.0, beta_num / beta_den);
    w = std::move(w_try);
    b = b_try;
    d = -g_next + beta * d;
    db = -gb_next + beta * db;
    g = g_next;
    gb = gb_next;
    loss = new_loss;
  }
  return {w, b};
}

}  // namespace

TrainedClassifier train_logreg_cg(const std::vector<SparseVector>& X,
                                  const std::vector<SecurityClass>& y,
                                  double lambda,
                                  const std::vector<double>& class_weights) {
  if (X.size() != y.size() || X.empty())
    throw data_error("DimensionMismatch", "|X| must equal |y| and be >= 1");
  if (lambda < 0) throw config_error("BadLambda", "regularization must be >= 0");
  check_dims(X);

  TrainedClassifier model;
  model.kind = ModelKind::LogRegOvo;
  model.dim = X.front().dim;
  model.classes = present_classes(y);
  if (model.classes.size() < 2)
    throw data_error("SingleClass", "one-vs-one needs >= 2 classes");

  std::vector<double> cw = class_weights;
  if (cw.empty()) cw.assign(model.classes.size(), 1.0);
  model.class_weights = cw;

  auto weight_of = [&](SecurityClass c) {
    for (size_t i = 0; i < model.classes.size(); ++i)
      if (model.classes[i] == c) return cw[i];
    return 1.0;
  };

  for (size_t a = 0; a < model.classes.size(); ++a) {
    for (size_t bclass = a + 1; bclass < model.classes.size(); ++bclass) {
      SecurityClass lo = model.classes[a], hi = model.classes[bclass];
      std::vector<SparseVector> Xp;
      std::vector<int> yp;
      std::vector<double> sw;
      for (size_t i = 0; i < X.size(); ++i) {
        if (y[i] != lo && y[i] != hi) continue;
        Xp.push_back(X[i]);
        yp.push_back(y[i] == hi ? +1 : -1);
        sw.push_back(weight_of(y[i]));
      }
      auto [w, bias] = fit_binary_logreg(Xp, yp, sw, lambda, model.dim);
      LinearComponent comp;
      comp.weights = std::move(w);
      comp.bias = bias;
      comp.positive = hi;
      comp.negative = lo;
      model.components.push_back(std::move(comp));
    }
  }
  return model;
}

TrainedClassifier train_linear_svm(const std::vector<SparseVector>& X,
                                   const std::vector<SecurityClass>& y,
                                   double cost,
                                   const std::vector<double>& class_weights,
                                   uint64_t seed) {
  if (X.size() != y.size() || X.empty())
    throw data_error("DimensionMismatch", "|X| must equal |y| and be >= 1");
  if (cost <= 0) throw config_error("BadCost", "cost must be > 0");
  check_dims(X);

  TrainedClassifier model;
  model.kind = ModelKind::LinearSvm;
  model.dim = X.front().dim;
  model.seed = seed;
  model.classes = present_classes(y);
  if (model.classes.size() == 1) {
    model.constant = model.classes.front();
    return model;
  }

  std::vector<double> cw = class_weights;
  if (cw.empty()) cw.assign(model.classes.size(), 1.0);
  model.class_weights = cw;
  auto weight_of = [&](SecurityClass c) {
    for (size_t i = 0; i < model.classes.size(); ++i)
      if (model.classes[i] == c) return cw[i];
    return 1.0;
  };

  const size_t n = X.size();
  const double lambda = 1.0 / (cost * static_cast<double>(n));
  constexpr int kEpochs = 100;

  for (SecurityClass target : model.classes) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(model.dim);
    double b = 0;
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (class_index(target) + 1)));
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    int64_t t = 0;
    for (int epoch = 0; epoch < kEpochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      for (size_t i : order) {
        ++t;
        double eta = 1.0 / (lambda * static_cast<double>(t));
        double yv = y[i] == target ? +1.0 : -1.0;
        double margin = yv * (dot(X[i], w) + b);
        w *= (1.0 - eta * lambda);
        if (margin < 1.0) {
          double s = weight_of(y[i]);
          double coef = eta * s * yv;
          for (const auto& [idx, v] : X[i].entries) w[idx] += coef * v;
          b += coef;
        }
      }
    }
    if (!w.allFinite() || !std::isfinite(b))
      throw method_error("NonFiniteLoss", "svm weights diverged");
    LinearComponent comp;
    comp.weights = std::move(w);
    comp.bias = b;
    comp.positive = target;
    model.components.push_back(std::move(comp));
  }
  return model;
}

// ---------------------------------------------------------------------------
// Grid search

namespace {

TrainedClassifier train_at(const std::vector<SparseVector>& X,
                           const std::vector<SecurityClass>& y, ModelKind kind,
                           double hyper, uint64_t seed) {
  switch (kind) {
    case ModelKind::NaiveBayes:
      return train_naive_bayes(X, y, hyper);
    case ModelKind::LogRegOvo:
      return train_logreg_cg(X, y, hyper, balanced_class_weights(y));
    case ModelKind::LinearSvm:
      return train_linear_svm(X, y, hyper, balanced_class_weights(y), seed);
  }
  throw config_error("BadModelKind", "unreachable");
}

double macro_f1_score(const TrainedClassifier& model,
                      const std::vector<SparseVector>& X,
                      const std::vector<SecurityClass>& y) {
  ConfusionMatrix cm;
  for (size_t i = 0; i < X.size(); ++i) cm.add(y[i], model.predict(X[i]));
  // average only over classes present in the validation truth, so an absent
  // class does not drag every candidate's score down by a constant 1/3
  auto report = evaluate(cm);
  double sum = 0;
  int present = 0;
  for (const auto& m : report.per_class)
    if (m.support > 0) {
      sum += m.f1;
      ++present;
    }
  return present ? sum / present : 0.0;
}

}  // namespace

GridSearchResult grid_search(const std::vector<std::string>& train_texts,
                             const std::vector<SecurityClass>& train_labels,
                             const std::vector<std::string>& val_texts,
                             const std::vector<SecurityClass>& val_labels,
                             const GridSpec& grid, ModelKind kind,
                             const VectorizerConfig& base_config,
                             uint64_t seed) {
  const std::vector<double>& hypers =
      kind == ModelKind::NaiveBayes
          ? grid.nb_alpha
          : (kind == ModelKind::LogRegOvo ? grid.logreg_lambda : grid.svm_cost);
  if (hypers.empty() || grid.max_features.empty() || grid.normalization.empty())
    throw config_error("EmptyGrid", "every grid axis needs >= 1 candidate");
  if (val_texts.empty())
    throw data_error("EmptyValidation", "validation set is empty");

  GridSearchResult result;
  bool have_best = false;
  int failures = 0;
  std::string last_error;

  // lexicographic enumeration: hyper, then max_features, then normalization
  for (double hyper : hypers) {
    for (int max_features : grid.max_features) {
      for (Normalization norm : grid.normalization) {
        GridPoint point{hyper, max_features, norm};
        VectorizerConfig cfg = base_config;
        cfg.max_features = max_features;
        cfg.normalization = norm;
        try {
          Vocabulary vocab = build_vocabulary(train_texts, cfg);
          std::vector<SparseVector> Xtr, Xval;
          for (const auto& t : train_texts) Xtr.push_back(vectorize(t, vocab, cfg));
          for (const auto& t : val_texts) Xval.push_back(vectorize(t, vocab, cfg));
          TrainedClassifier model = train_at(Xtr, train_labels, kind, hyper, seed);
          double f1 = macro_f1_score(model, Xval, val_labels);
          result.scores.emplace_back(point, f1);
          if (!have_best || f1 > result.best_validation_f1) {
            have_best = true;
            result.best = point;
            result.best_validation_f1 = f1;
          }
        } catch (const Error& e) {
          ++failures;
          last_error = e.what();
        }
      }
    }
  }
  if (!have_best)
    throw method_error("AllTrainingsFailed",
                       std::to_string(failures) + " grid points failed; last: " +
                           last_error);

  // retrain the winning configuration
  VectorizerConfig cfg = base_config;
  cfg.max_features = result.best.max_features;
  cfg.normalization = result.best.normalization;
  result.vocabulary = build_vocabulary(train_texts, cfg);
  std::vector<SparseVector> Xtr;
  for (const auto& t : train_texts)
    Xtr.push_back(vectorize(t, result.vocabulary, cfg));
  result.model = train_at(Xtr, train_labels, kind, result.best.hyper, seed);
  result.model.vectorizer_config = cfg;
  result.vectorizer_config = cfg;
  return result;
}

// ---------------------------------------------------------------------------
// Serialization

std::string model_to_json(const TrainedClassifier& model) {
  nlohmann::ordered_json j;
  j["schema"] = "acess-model-v1";
  j["kind"] = to_string(model.kind);
  j["dim"] = model.dim;
  j["seed"] = model.seed;
  j["classes"] = nlohmann::json::array();
  for (SecurityClass c : model.classes)
    j["classes"].push_back(std::string(1, to_letter(c)));
  j["class_weights"] = model.class_weights;
  if (model.constant) j["constant"] = std::string(1, to_letter(*model.constant));
  const auto& vc = model.vectorizer_config;
  j["vectorizer_config"] = {
      {"weighting", to_string(vc.weighting)},  {"unigrams", vc.unigrams},
      {"bigrams", vc.bigrams},                 {"max_features", vc.max_features},
      {"normalization", to_string(vc.normalization)},
      {"alphabetic_only", vc.alphabetic_only},
      {"remove_stopwords", vc.remove_stopwords}};
  j["components"] = nlohmann::json::array();
  for (const auto& comp : model.components) {
    std::vector<double> w(comp.weights.data(), comp.weights.data() + comp.weights.size());
    j["components"].push_back(
        {{"weights", w},
         {"bias", comp.bias},
         {"positive", std::string(1, to_letter(comp.positive))},
         {"negative", std::string(1, to_letter(comp.negative))}});
  }
  return j.dump();
}

TrainedClassifier model_from_json(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  if (j.at("schema") != "acess-model-v1")
    throw data_error("BadSchema", "unsupported model schema");
  TrainedClassifier model;
  model.kind = model_kind_from_string(j.at("kind"));
  model.dim = j.at("dim").get<int>();
  model.seed = j.at("seed").get<uint64_t>();
  for (const auto& c : j.at("classes"))
    model.classes.push_back(*parse_security_class(c.get<std::string>()));
  model.class_weights = j.at("class_weights").get<std::vector<double>>();
  if (j.contains("constant"))
    model.constant = *parse_security_class(j.at("constant").get<std::string>());
  const auto& vc = j.at("vectorizer_config");
  model.vectorizer_config.weighting = weighting_from_string(vc.at("weighting"));
  model.vectorizer_config.unigrams = vc.at("unigrams").get<bool>();
  model.vectorizer_config.bigrams = vc.at("bigrams").get<bool>();
  model.vectorizer_config.max_features = vc.at("max_features").get<int>();
  model.vectorizer_config.normalization =
      normalization_from_string(vc.at("normalization"));
  model.vectorizer_config.alphabetic_only = vc.at("alphabetic_only").get<bool>();
  model.vectorizer_config.remove_stopwords = vc.at("remove_stopwords").get<bool>();
  for (const auto& comp : j.at("components")) {
    LinearComponent c;
    auto w = comp.at("weights").get<std::vector<double>>();
    c.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<long>(w.size()));
    c.bias = comp.at("bias").get<double>();
    c.positive = *parse_security_class(comp.at("positive").get<std::string>());
    c.negative = *parse_security_class(comp.at("negative").get<std::string>());
    model.components.push_back(std::move(c));
  }
  return model;
}

}  // namespace acess
