// experiment.hpp - corpus files, experiment configs, runners, comparisons
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "acess/cable.hpp"
#include "acess/engine.hpp"
#include "acess/eval.hpp"
#include "acess/lda.hpp"
#include "acess/synthetic.hpp"

namespace acess {

// one JSON object per paragraph: {id, doc, origin, year_month, position,
// label, text}
std::string corpus_to_jsonl(const std::vector<Document>& docs);
std::vector<Document> corpus_from_jsonl(const std::string& jsonl);
void save_corpus(const std::vector<Document>& docs,
                 const std::filesystem::path& path);
std::vector<Document> load_corpus(const std::filesystem::path& path);

void save_split(const DataSplit& split, const std::filesystem::path& dir);
DataSplit load_split(const std::filesystem::path& dir);

enum class Method {
  BaselineNb,
  BaselineSvm,
  BaselineLogreg,
  PruneLogreg,
  Acess,
};
std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct ExperimentConfig {
  Method method = Method::BaselineSvm;
  std::string corpus_path;  // empty: generate from the synthetic spec
  SyntheticSpec synth;
  double ratios[3] = {0.6, 0.2, 0.2};
  uint64_t split_seed = 7;
  AcessConfig acess;
  PruneConfig prune;
  // baseline feature space: tf-idf over unigrams+bigrams
  VectorizerConfig baseline_space = {
      Weighting::TfIdf, true, true, 1000, Normalization::None, true, true, 2};
  std::string raw_text;  // config snapshot for reproducibility
};

/// TOML-style key = value lines; [section] headers prefix the keys.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ExperimentOutcome {
  EvalReport paragraph_report;
  EvalReport document_report;
  std::filesystem::path out_dir;
};

/// Runs one method end to end and writes reports, the run manifest, and the
/// method-specific artifacts into out_dir.
ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir);

struct ComparisonRow {
  std::string method;
  std::array<double, 3> f1{};  // U, C, S
  double macro = 0;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  std::array<size_t, 4> best{};  // winning row per column S, C, U, macro
};

/// Reads serialized reports only; throws SplitMismatch when the runs did not
/// evaluate the same test set.
Comparison compare_runs(const std::vector<std::filesystem::path>& run_dirs);
std::string comparison_to_csv(const Comparison& cmp);
std::string comparison_to_text(const Comparison& cmp);

}  // namespace acess
