// eval.hpp - confusion matrices, per-class F1, document-level max-rule eval,
// and the uniform-prior document-class probabilities
#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "acess/errors.hpp"
#include "acess/security_class.hpp"

namespace acess {

struct ConfusionMatrix {
  // counts[true][predicted] over the fixed class order U, C, S
  std::array<std::array<int64_t, 3>, 3> counts{};

  void add(SecurityClass truth, SecurityClass predicted, int64_t n = 1) {
    counts[class_index(truth)][class_index(predicted)] += n;
  }
  int64_t total() const;
  int64_t support(SecurityClass c) const;  // row sum
};

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  int64_t support = 0;
  bool degenerate = false;  // F1 forced to 0 by an empty denominator
};

struct EvalReport {
  std::array<ClassMetrics, 3> per_class;  // U, C, S
  double macro_f1 = 0;
  int64_t total = 0;
  std::string provenance;

  const ClassMetrics& metrics(SecurityClass c) const {
    return per_class[class_index(c)];
  }
};

/// Per-class F1 = 2TP / (2TP + FP + FN); 0 when the denominator is 0.
std::array<double, 3> f1_per_class(const ConfusionMatrix& cm);

EvalReport evaluate(const ConfusionMatrix& cm, std::string provenance = {});

/// Paragraph predictions rolled up per document by the max rule, then
/// evaluated at document granularity.
EvalReport document_level_eval(
    const std::map<std::string, std::vector<SecurityClass>>& predictions_by_doc,
    const std::map<std::string, SecurityClass>& true_doc_labels);

/// Under iid uniform paragraph classes and max-rule labeling:
///   Pr(U) = (1/3)^n, Pr(S) = 1 - (2/3)^n, Pr(C) = (2/3)^n - (1/3)^n.
double document_class_prior(int n_paragraphs, SecurityClass c);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& json_text);
std::string report_to_csv(const EvalReport& report);

}  // namespace acess
