#include "acess/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace acess {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("MissingFile", path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw data_error("WriteFailed", path.string());
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// order-independent fingerprint of a test set: hash of sorted paragraph ids
std::string split_fingerprint(const DataSplit& split) {
  std::vector<std::string> ids;
  for (const auto& p : collect_paragraphs(split.test)) ids.push_back(p.id.serialize());
  std::sort(ids.begin(), ids.end());
  std::string joined;
  for (const auto& id : ids) joined += id + "\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(joined)));
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Corpus files

std::string corpus_to_jsonl(const std::vector<Document>& docs) {
  std::string out;
  char ym[16];
  for (const auto& d : docs) {
    std::snprintf(ym, sizeof(ym), "%04d%02d", d.year_month.year, d.year_month.month);
    for (const auto& p : d.paragraphs) {
      nlohmann::ordered_json j;
      j["id"] = p.id.serialize();
      j["doc"] = d.origin + "/" + d.cable_number;
      j["origin"] = d.origin;
      j["year_month"] = ym;
      j["position"] = p.position;
      j["label"] = std::string(1, to_letter(p.label));
      j["text"] = p.text;
      out += j.dump() + "\n";
    }
  }
  return out;
}

std::vector<Document> corpus_from_jsonl(const std::string& jsonl) {
  std::map<std::string, Document> docs;
  std::vector<std::string> order;
  std::istringstream in(jsonl);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    std::string key = j.at("doc").get<std::string>();
    auto [it, inserted] = docs.try_emplace(key);
    if (inserted) {
      order.push_back(key);
      it->second.origin = j.at("origin").get<std::string>();
      it->second.cable_number = key.substr(key.find('/') + 1);
      std::string ym = j.at("year_month").get<std::string>();
      it->second.year_month.year = std::stoi(ym.substr(0, 4));
      it->second.year_month.month = std::stoi(ym.substr(4, 2));
    }
    Paragraph p;
    p.id = ParagraphId::parse(j.at("id").get<std::string>());
    p.position = j.at("position").get<int>();
    p.label = *parse_security_class(j.at("label").get<std::string>());
    p.text = j.at("text").get<std::string>();
    it->second.paragraphs.push_back(std::move(p));
  }
  std::vector<Document> out;
  for (const auto& key : order) {
    Document& d = docs[key];
    std::sort(d.paragraphs.begin(), d.paragraphs.end(),
              [](const Paragraph& a, const Paragraph& b) {
                return a.position < b.position;
              });
    d.header_label = d.derived_label();
    out.push_back(std::move(d));
  }
  return out;
}

void save_corpus(const std::vector<Document>& docs, const fs::path& path) {
  write_file(path, corpus_to_jsonl(docs));
}

std::vector<Document> load_corpus(const fs::path& path) {
  return corpus_from_jsonl(read_file(path));
}

void save_split(const DataSplit& split, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / "train.jsonl", corpus_to_jsonl(split.train));
  write_file(dir / "validation.jsonl", corpus_to_jsonl(split.validation));
  write_file(dir / "test.jsonl", corpus_to_jsonl(split.test));
  nlohmann::ordered_json meta;
  meta["schema"] = "acess-split-v1";
  meta["seed"] = split.seed;
  meta["ratios"] = {split.ratios[0], split.ratios[1], split.ratios[2]};
  write_file(dir / "split.json", meta.dump(2) + "\n");
}

DataSplit load_split(const fs::path& dir) {
  DataSplit split;
  split.train = load_corpus(dir / "train.jsonl");
  split.validation = load_corpus(dir / "validation.jsonl");
  split.test = load_corpus(dir / "test.jsonl");
  auto meta = nlohmann::json::parse(read_file(dir / "split.json"));
  split.seed = meta.at("seed").get<uint64_t>();
  for (int i = 0; i < 3; ++i) split.ratios[i] = meta.at("ratios")[i].get<double>();
  return split;
}

// ---------------------------------------------------------------------------
// Config

std::string to_string(Method m) {
  switch (m) {
    case Method::BaselineNb: return "baseline_nb";
    case Method::BaselineSvm: return "baseline_svm";
    case Method::BaselineLogreg: return "baseline_logreg";
    case Method::PruneLogreg: return "prune_logreg";
    case Method::Acess: return "acess";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "baseline_nb") return Method::BaselineNb;
  if (s == "baseline_svm") return Method::BaselineSvm;
  if (s == "baseline_logreg") return Method::BaselineLogreg;
  if (s == "prune_logreg") return Method::PruneLogreg;
  if (s == "acess") return Method::Acess;
  throw config_error("BadMethod", s);
}

namespace {

std::vector<double> parse_list(const std::string& v) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::string trim_copy(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig cfg;
  cfg.raw_text = text;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim_copy(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("BadConfig",
                         "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim_copy(line.substr(0, eq));
    std::string value = trim_copy(line.substr(eq + 1));
    if (!section.empty()) key = section + "." + key;

    try {
      if (key == "method") cfg.method = method_from_string(value);
      else if (key == "corpus") cfg.corpus_path = value;
      else if (key == "ratios") {
        auto r = parse_list(value);
        if (r.size() != 3) throw config_error("BadConfig", "ratios needs 3 values");
        for (int i = 0; i < 3; ++i) cfg.ratios[i] = r[i];
      } else if (key == "split_seed") cfg.split_seed = std::stoull(value);
      else if (key == "synth.n_documents") cfg.synth.n_documents = std::stoi(value);
      else if (key == "synth.min_paragraphs") cfg.synth.min_paragraphs = std::stoi(value);
      else if (key == "synth.max_paragraphs") cfg.synth.max_paragraphs = std::stoi(value);
      else if (key == "synth.groups") cfg.synth.n_similarity_groups = std::stoi(value);
      else if (key == "synth.mixture") {
        auto m = parse_list(value);
        if (m.size() != 3) throw config_error("BadConfig", "mixture needs 3 values");
        for (int i = 0; i < 3; ++i) cfg.synth.class_mixture[i] = m[i];
      } else if (key == "synth.confusable_rate")
        cfg.synth.confusable_rate = std::stod(value);
      else if (key == "synth.global_marker_noise")
        cfg.synth.global_marker_noise = std::stod(value);
      else if (key == "synth.seed") cfg.synth.seed = std::stoull(value);
      else if (key == "acess.cluster_divisor")
        cfg.acess.cluster_divisor = std::stoll(value);
      else if (key == "acess.force_k") {
        int k = std::stoi(value);
        if (k > 0) cfg.acess.force_k = k;
      } else if (key == "acess.classifier")
        cfg.acess.classifier = model_kind_from_string(value);
      else if (key == "acess.kmeans_seed") cfg.acess.kmeans_seed = std::stoull(value);
      else if (key == "acess.train_seed") cfg.acess.train_seed = std::stoull(value);
      else if (key == "acess.similarity_top_k")
        cfg.acess.similarity.max_features = std::stoi(value);
      else if (key == "acess.security_top_k")
        cfg.acess.security.max_features = std::stoi(value);
      else if (key == "grid.svm_cost") cfg.acess.grid.svm_cost = parse_list(value);
      else if (key == "grid.logreg_lambda")
        cfg.acess.grid.logreg_lambda = parse_list(value);
      else if (key == "grid.nb_alpha") cfg.acess.grid.nb_alpha = parse_list(value);
      else if (key == "grid.max_features") {
        cfg.acess.grid.max_features.clear();
        for (double v : parse_list(value))
          cfg.acess.grid.max_features.push_back(static_cast<int>(v));
      } else if (key == "grid.normalization") {
        cfg.acess.grid.normalization.clear();
        std::istringstream items(value);
        std::string item;
        while (std::getline(items, item, ','))
          cfg.acess.grid.normalization.push_back(
              normalization_from_string(trim_copy(item)));
      } else if (key == "prune.k_main") cfg.prune.k_main = std::stoi(value);
      else if (key == "prune.k_sub") cfg.prune.k_sub = std::stoi(value);
      else if (key == "prune.alpha") cfg.prune.alpha = std::stod(value);
      else if (key == "prune.beta") cfg.prune.beta = std::stod(value);
      else if (key == "prune.iterations") cfg.prune.iterations = std::stoi(value);
      else if (key == "prune.lo_factor") cfg.prune.lo_factor = std::stod(value);
      else if (key == "prune.hi_factor") cfg.prune.hi_factor = std::stod(value);
      else if (key == "prune.seed") cfg.prune.seed = std::stoull(value);
      else throw config_error("BadConfig", "unknown key: " + key);
    } catch (const std::invalid_argument&) {
      throw config_error("BadConfig", "bad value for " + key + ": " + value);
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  return parse_experiment_config(read_file(path));
}

// ---------------------------------------------------------------------------
// Runner

namespace {

struct TestEval {
  EvalReport paragraph;
  EvalReport document;
};

TestEval evaluate_bucket_on_test(const BucketModel& bm, const DataSplit& split,
                                 const std::string& provenance) {
  ConfusionMatrix cm;
  std::map<std::string, std::vector<SecurityClass>> doc_preds;
  std::map<std::string, SecurityClass> doc_truth;
  for (const auto& d : split.test)
    doc_truth[d.origin + "/" + d.cable_number] = d.derived_label();
  for (const auto& p : collect_paragraphs(split.test)) {
    SecurityClass pred = predict_bucket(bm, p.text);
    cm.add(p.label, pred);
    doc_preds[p.id.origin + "/" + p.id.cable_number].push_back(pred);
  }
  TestEval out;
  out.paragraph = evaluate(cm, provenance);
  out.document = doc_preds.empty() ? EvalReport{}
                                   : document_level_eval(doc_preds, doc_truth);
  return out;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const fs::path& out_dir) {
  std::vector<Document> docs =
      config.corpus_path.empty()
          ? generate_synthetic_corpus(config.synth).documents
          : load_corpus(config.corpus_path);
  DataSplit split = split_corpus(docs, config.ratios, config.split_seed);

  ExperimentOutcome outcome;
  outcome.out_dir = out_dir;
  fs::create_directories(out_dir);

  nlohmann::ordered_json manifest;
  manifest["schema"] = "acess-experiment-v1";
  manifest["method"] = to_string(config.method);
  manifest["split_fingerprint"] = split_fingerprint(split);
  manifest["seeds"] = {{"split", config.split_seed},
                       {"kmeans", config.acess.kmeans_seed},
                       {"train", config.acess.train_seed},
                       {"prune", config.prune.seed},
                       {"synth", config.synth.seed}};
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(config.raw_text)));
  manifest["config_hash"] = hash;

  if (config.method == Method::Acess) {
    AcessRun run = run_acess(split, config.acess);
    outcome.paragraph_report = run.pooled;
    outcome.document_report = run.document_level;
    write_file(out_dir / "acess_manifest.json",
               run_manifest_to_json(run, config.acess, hash) + "\n");
    manifest["statistics"] = {{"clusters", run.k},
                              {"similarity_features", run.similarity_features}};
  } else if (config.method == Method::PruneLogreg) {
    auto train = split.train_paragraphs();
    PruneResult pruned = prune_training_set(train, config.prune);
    write_file(out_dir / "removals.csv", removal_report_to_csv(pruned.removed));

    AcessConfig cfg = config.acess;
    cfg.classifier = ModelKind::LogRegOvo;
    cfg.security = config.baseline_space;
    BucketModel bm = train_bucket(pruned.pruned_train,
                                  split.validation_paragraphs(), cfg);
    auto eval = evaluate_bucket_on_test(bm, split, "prune_logreg");
    outcome.paragraph_report = eval.paragraph;
    outcome.document_report = eval.document;
    manifest["statistics"] = {
        {"removed", pruned.removed.size()},
        {"pruned_train_size", pruned.pruned_train.size()}};
  } else {
    AcessConfig cfg = config.acess;
    cfg.security = config.baseline_space;
    switch (config.method) {
      case Method::BaselineNb: cfg.classifier = ModelKind::NaiveBayes; break;
      case Method::BaselineSvm: cfg.classifier = ModelKind::LinearSvm; break;
      case Method::BaselineLogreg: cfg.classifier = ModelKind::LogRegOvo; break;
      default: break;
    }
    BucketModel bm = train_bucket(split.train_paragraphs(),
                                  split.validation_paragraphs(), cfg);
    auto eval = evaluate_bucket_on_test(bm, split, to_string(config.method));
    outcome.paragraph_report = eval.paragraph;
    outcome.document_report = eval.document;
  }

  write_file(out_dir / "config.toml", config.raw_text);
  write_file(out_dir / "report.json",
             report_to_json(outcome.paragraph_report) + "\n");
  write_file(out_dir / "report.csv", report_to_csv(outcome.paragraph_report));
  write_file(out_dir / "document_report.json",
             report_to_json(outcome.document_report) + "\n");
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return outcome;
}

// ---------------------------------------------------------------------------
// Comparison

Comparison compare_runs(const std::vector<fs::path>& run_dirs) {
  if (run_dirs.size() < 2)
    throw config_error("BadConfig", "compare needs >= 2 run directories");

  Comparison cmp;
  std::string fingerprint;
  for (const auto& dir : run_dirs) {
    auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
    std::string fp = manifest.at("split_fingerprint").get<std::string>();
    if (fingerprint.empty())
      fingerprint = fp;
    else if (fp != fingerprint)
      throw data_error("SplitMismatch",
                       dir.string() + " evaluated a different test set");
    EvalReport report = report_from_json(read_file(dir / "report.json"));
    ComparisonRow row;
    row.method = manifest.at("method").get<std::string>();
    for (SecurityClass c : kAllClasses)
      row.f1[class_index(c)] = report.metrics(c).f1;
    row.macro = report.macro_f1;
    cmp.rows.push_back(std::move(row));
  }

  // columns: S, C, U, macro; first row wins ties
  auto col_value = [](const ComparisonRow& r, int col) {
    switch (col) {
      case 0: return r.f1[class_index(SecurityClass::S)];
      case 1: return r.f1[class_index(SecurityClass::C)];
      case 2: return r.f1[class_index(SecurityClass::U)];
      default: return r.macro;
    }
  };
  for (int col = 0; col < 4; ++col) {
    size_t best = 0;
    for (size_t i = 1; i < cmp.rows.size(); ++i)
      if (col_value(cmp.rows[i], col) > col_value(cmp.rows[best], col)) best = i;
    cmp.best[col] = best;
  }
  return cmp;
}

std::string comparison_to_csv(const Comparison& cmp) {
  std::string out = "method,S,C,U,macro\n";
  for (const auto& r : cmp.rows) {
    out += r.method + "," + std::to_string(r.f1[class_index(SecurityClass::S)]) +
           "," + std::to_string(r.f1[class_index(SecurityClass::C)]) + "," +
           std::to_string(r.f1[class_index(SecurityClass::U)]) + "," +
           std::to_string(r.macro) + "\n";
  }
  return out;
}

std::string comparison_to_text(const Comparison& cmp) {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-18s %8s %8s %8s %8s\n", "method", "S", "C",
                "U", "macro");
  out += buf;
  for (size_t i = 0; i < cmp.rows.size(); ++i) {
    const auto& r = cmp.rows[i];
    auto mark = [&](int col) { return cmp.best[col] == i ? '*' : ' '; };
    std::snprintf(buf, sizeof(buf), "%-18s %7.3f%c %7.3f%c %7.3f%c %7.3f%c\n",
                  r.method.c_str(), r.f1[class_index(SecurityClass::S)], mark(0),
                  r.f1[class_index(SecurityClass::C)], mark(1),
                  r.f1[class_index(SecurityClass::U)], mark(2), r.macro, mark(3));
    out += buf;
  }
  return out;
}

}  // namespace acess
