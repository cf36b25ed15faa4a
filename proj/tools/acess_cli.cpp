// acess_cli.cpp - command-line front end for the security-classification
// pipelines: ingest, split, synth, run, compare, priors, topics
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "acess/experiment.hpp"

namespace fs = std::filesystem;
using namespace acess;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw data_error("MissingFile", p.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int cmd_ingest(const std::string& in_dir, const std::string& out_path,
               bool inherit_header) {
  std::vector<Document> docs;
  std::vector<fs::path> files;
  if (fs::is_regular_file(in_dir)) {
    files.push_back(in_dir);
  } else if (fs::is_directory(in_dir)) {
    for (const auto& entry : fs::directory_iterator(in_dir))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
  } else {
    throw data_error("MissingFile", in_dir);
  }
  CableParseOptions opts;
  opts.inherit_header_label = inherit_header;
  int skipped = 0;
  for (const auto& f : files) {
    auto result = parse_cable(slurp(f), opts);
    skipped += result.skipped_unmarked;
    docs.push_back(std::move(result.document));
  }
  save_corpus(docs, out_path);
  std::cerr << "ingested " << docs.size() << " cables";
  if (skipped) std::cerr << " (skipped " << skipped << " unmarked paragraphs)";
  std::cerr << "\n";
  return 0;
}

int cmd_split(const std::string& corpus, const std::string& ratios_str,
              uint64_t seed, const std::string& out_dir) {
  double ratios[3];
  std::istringstream in(ratios_str);
  std::string item;
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(in, item, ','))
      throw config_error("BadRatios", "expected three comma-separated ratios");
    ratios[i] = std::stod(item);
  }
  DataSplit split = split_corpus(load_corpus(corpus), ratios, seed);
  save_split(split, out_dir);
  std::cerr << "split " << split.train.size() << "/" << split.validation.size()
            << "/" << split.test.size() << " documents\n";
  return 0;
}

int cmd_synth(const std::string& config_path, const std::string& out_path) {
  ExperimentConfig cfg = config_path.empty()
                             ? ExperimentConfig{}
                             : load_experiment_config(config_path);
  auto corpus = generate_synthetic_corpus(cfg.synth);
  save_corpus(corpus.documents, out_path);
  std::cerr << "generated " << corpus.documents.size() << " documents\n";
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  ExperimentOutcome outcome = run_experiment(cfg, out_dir);
  std::cout << "method " << to_string(cfg.method) << " macro-F1 "
            << outcome.paragraph_report.macro_f1 << "\n";
  return 0;
}

int cmd_compare(const std::vector<std::string>& dirs, const std::string& out_csv) {
  std::vector<fs::path> paths(dirs.begin(), dirs.end());
  Comparison cmp = compare_runs(paths);
  std::cout << comparison_to_text(cmp);
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    out << comparison_to_csv(cmp);
  }
  return 0;
}

int cmd_priors(int max_n) {
  std::cout << "n,Pr(U),Pr(C),Pr(S)\n";
  for (int n = 1; n <= max_n; ++n) {
    std::cout << n;
    for (SecurityClass c : kAllClasses)
      std::cout << "," << document_class_prior(n, c);
    std::cout << "\n";
  }
  return 0;
}

int cmd_topics(const std::string& corpus_path, int k, int iterations,
               uint64_t seed, const std::string& out_path) {
  auto paragraphs = collect_paragraphs(load_corpus(corpus_path));
  std::vector<std::string> texts;
  std::vector<SecurityClass> labels;
  for (const auto& p : paragraphs) {
    texts.push_back(p.text);
    labels.push_back(p.label);
  }
  TopicModel model = fit_lda_gibbs(texts, k, 50.0 / k, 0.01, iterations, seed);
  auto comps = topic_class_composition(model, labels);
  std::string json = topic_report_to_json(model, comps);
  if (out_path.empty()) {
    std::cout << json << "\n";
  } else {
    std::ofstream out(out_path);
    out << json << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"security-classification experiment pipeline"};
  app.require_subcommand(1);

  std::string in_dir, out_path, corpus, ratios = "0.6,0.2,0.2", config_path,
              out_dir = "run", out_csv;
  std::vector<std::string> run_dirs;
  uint64_t seed = 7;
  bool inherit_header = false;
  int max_n = 12, k = 10, iterations = 200;

  auto* ingest = app.add_subcommand("ingest", "parse raw cables into a corpus manifest");
  ingest->add_option("--in", in_dir, "directory of cable text files")->required();
  ingest->add_option("--out", out_path, "corpus JSONL path")->required();
  ingest->add_flag("--inherit-header-label", inherit_header,
                   "unmarked paragraphs inherit the header class");

  auto* split = app.add_subcommand("split", "make train/validation/test splits");
  split->add_option("--corpus", corpus)->required();
  split->add_option("--ratios", ratios, "three fractions, e.g. 0.6,0.2,0.2");
  split->add_option("--seed", seed);
  split->add_option("--out-dir", out_dir)->required();

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  synth->add_option("--config", config_path, "experiment config with a [synth] section");
  synth->add_option("--out", out_path)->required();

  auto* run = app.add_subcommand("run", "run one experiment end to end");
  run->add_option("--config", config_path)->required();
  run->add_option("--out", out_dir)->required();

  auto* compare = app.add_subcommand("compare", "compare completed runs");
  compare->add_option("dirs", run_dirs, "run directories")->expected(-2);
  compare->add_option("--csv", out_csv, "also write the table as CSV");

  auto* priors = app.add_subcommand("priors", "print uniform-prior document-class tables");
  priors->add_option("--max-n", max_n, "largest paragraph count");

  auto* topics = app.add_subcommand("topics", "emit topic/class composition data");
  topics->add_option("--corpus", corpus)->required();
  topics->add_option("--k", k, "topic count");
  topics->add_option("--iterations", iterations);
  topics->add_option("--seed", seed);
  topics->add_option("--out", out_path, "report path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cmd_ingest(in_dir, out_path, inherit_header);
    if (*split) return cmd_split(corpus, ratios, seed, out_dir);
    if (*synth) return cmd_synth(config_path, out_path);
    if (*run) return cmd_run(config_path, out_dir);
    if (*compare) return cmd_compare(run_dirs, out_csv);
    if (*priors) return cmd_priors(max_n);
    if (*topics) return cmd_topics(corpus, k, iterations, seed, out_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const MethodError& e) {
    std::cerr << "method error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
