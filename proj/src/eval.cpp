#include "acess/eval.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace acess {

int64_t ConfusionMatrix::total() const {
  int64_t t = 0;
  for (const auto& row : counts)
    for (int64_t c : row) t += c;
  return t;
}

int64_t ConfusionMatrix::support(SecurityClass c) const {
  int64_t t = 0;
  for (int64_t n : counts[class_index(c)]) t += n;
  return t;
}

std::array<double, 3> f1_per_class(const ConfusionMatrix& cm) {
  std::array<double, 3> out{};
  for (int c = 0; c < 3; ++c) {
    int64_t tp = cm.counts[c][c];
    int64_t fp = 0, fn = 0;
    for (int o = 0; o < 3; ++o) {
      if (o == c) continue;
      fp += cm.counts[o][c];
      fn += cm.counts[c][o];
    }
    int64_t denom = 2 * tp + fp + fn;
    out[c] = denom == 0 ? 0.0
                        : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  }
  return out;
}

EvalReport evaluate(const ConfusionMatrix& cm, std::string provenance) {
  EvalReport report;
  report.provenance = std::move(provenance);
  report.total = cm.total();
  auto f1 = f1_per_class(cm);
  double macro = 0;
  for (int c = 0; c < 3; ++c) {
    int64_t tp = cm.counts[c][c];
    int64_t fp = 0, fn = 0;
    for (int o = 0; o < 3; ++o) {
      if (o == c) continue;
      fp += cm.counts[o][c];
      fn += cm.counts[c][o];
    }
    ClassMetrics m;
    m.support = cm.support(class_from_index(c));
    m.precision = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / double(tp + fp);
    m.recall = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / double(tp + fn);
    m.f1 = f1[c];
    m.degenerate = (2 * tp + fp + fn) == 0;
    report.per_class[c] = m;
    macro += m.f1;
  }
  report.macro_f1 = macro / 3.0;
  return report;
}

EvalReport document_level_eval(
    const std::map<std::string, std::vector<SecurityClass>>& predictions_by_doc,
    const std::map<std::string, SecurityClass>& true_doc_labels) {
  ConfusionMatrix cm;
  for (const auto& [doc, preds] : predictions_by_doc) {
    if (preds.empty())
      throw data_error("EmptyDocumentGroup", "document " + doc + " has no predictions");
    auto it = true_doc_labels.find(doc);
    if (it == true_doc_labels.end())
      throw data_error("EmptyDocumentGroup", "document " + doc + " has no true label");
    SecurityClass predicted = preds.front();
    for (SecurityClass p : preds) predicted = max_class(predicted, p);
    cm.add(it->second, predicted);
  }
  return evaluate(cm, "document_level");
}

double document_class_prior(int n_paragraphs, SecurityClass c) {
  if (n_paragraphs < 1) throw data_error("BadN", "paragraph count must be >= 1");
  double n = n_paragraphs;
  double p_u = std::pow(1.0 / 3.0, n);
  double p_not_s = std::pow(2.0 / 3.0, n);
  switch (c) {
    case SecurityClass::U: return p_u;
    case SecurityClass::C: return p_not_s - p_u;
    case SecurityClass::S: return 1.0 - p_not_s;
  }
  return 0;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["provenance"] = report.provenance;
  j["total"] = report.total;
  for (SecurityClass c : kAllClasses) {
    const auto& m = report.metrics(c);
    j["classes"][std::string(1, to_letter(c))] = {
        {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
        {"support", m.support},     {"degenerate", m.degenerate}};
  }
  j["macro_f1"] = report.macro_f1;
  return j.dump(2);
}

EvalReport report_from_json(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  EvalReport report;
  report.provenance = j.at("provenance").get<std::string>();
  report.total = j.at("total").get<int64_t>();
  report.macro_f1 = j.at("macro_f1").get<double>();
  for (SecurityClass c : kAllClasses) {
    const auto& m = j.at("classes").at(std::string(1, to_letter(c)));
    auto& out = report.per_class[class_index(c)];
    out.precision = m.at("precision").get<double>();
    out.recall = m.at("recall").get<double>();
    out.f1 = m.at("f1").get<double>();
    out.support = m.at("support").get<int64_t>();
    out.degenerate = m.at("degenerate").get<bool>();
  }
  return report;
}

std::string report_to_csv(const EvalReport& report) {
  std::string out = "class,precision,recall,f1,support\n";
  for (SecurityClass c : kAllClasses) {
    const auto& m = report.metrics(c);
    out += std::string(1, to_letter(c)) + "," + std::to_string(m.precision) +
           "," + std::to_string(m.recall) + "," + std::to_string(m.f1) + "," +
           std::to_string(m.support) + "\n";
  }
  out += "macro,,," + std::to_string(report.macro_f1) + "," +
         std::to_string(report.total) + "\n";
  return out;
}

}  // namespace acess
