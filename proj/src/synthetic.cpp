#include "acess/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace acess {

namespace {

// pronounceable deterministic word: prefix + syllables from an index
std::string make_word(const std::string& prefix, int i) {
  static const char* syl[] = {"ba", "ce", "di", "fo", "gu", "ka", "le",
                              "mi", "no", "pu", "ra", "se", "ti", "vo"};
  std::string w = prefix;
  int x = i;
  for (int s = 0; s < 3; ++s) {
    w += syl[x % 14];
    x /= 14;
  }
  return w;
}

SecurityClass sample_class(std::mt19937_64& rng,
                           const std::array<double, 3>& mixture) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = unit(rng);
  if (u < mixture[0]) return SecurityClass::U;
  if (u < mixture[0] + mixture[1]) return SecurityClass::C;
  return SecurityClass::S;
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec) {
  double mix_sum =
      spec.class_mixture[0] + spec.class_mixture[1] + spec.class_mixture[2];
  if (spec.n_documents < 1 || spec.n_similarity_groups < 1 ||
      spec.min_paragraphs < 1 || spec.max_paragraphs < spec.min_paragraphs ||
      std::abs(mix_sum - 1.0) > 1e-9 || spec.confusable_rate < 0 ||
      spec.confusable_rate > 1)
    throw config_error("BadSpec", "invalid synthetic corpus spec");

  // vocabularies
  std::vector<std::vector<std::string>> group_vocab(spec.n_similarity_groups);
  for (int g = 0; g < spec.n_similarity_groups; ++g)
    for (int i = 0; i < spec.vocab_per_group; ++i)
      group_vocab[g].push_back(make_word("grp" + std::string(1, 'a' + g % 26), i));

  std::array<std::vector<std::string>, 3> global_markers;
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < spec.markers_per_class; ++i)
      global_markers[c].push_back(
          make_word(std::string("glb") + static_cast<char>('u' + c), i));

  // shared local marker pool; group g maps class c to slot (c + g) mod 3
  std::array<std::vector<std::string>, 3> local_markers;
  for (int s = 0; s < 3; ++s)
    for (int i = 0; i < spec.markers_per_class; ++i)
      local_markers[s].push_back(make_word("loc" + std::string(1, 'p' + s), i));

  std::vector<std::string> confusable_vocab;
  for (int i = 0; i < 20; ++i) confusable_vocab.push_back(make_word("cnf", i));

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SyntheticCorpus corpus;
  for (int d = 0; d < spec.n_documents; ++d) {
    Document doc;
    int g = d % spec.n_similarity_groups;
    doc.origin = "GROUP" + std::string(1, 'A' + g % 26);
    char num[16];
    std::snprintf(num, sizeof(num), "%06d", d + 1);
    doc.cable_number = num;
    doc.year_month = {2009, 1 + d % 12};
    doc.subject = "synthetic cable " + std::string(num);

    std::uniform_int_distribution<int> npar(spec.min_paragraphs,
                                            spec.max_paragraphs);
    int n = npar(rng);
    for (int p = 1; p <= n; ++p) {
      Paragraph para;
      para.position = p;
      bool injected = unit(rng) < spec.confusable_rate;
      std::vector<std::string> words;

      if (injected) {
        para.label = unit(rng) < 0.5 ? SecurityClass::S : SecurityClass::C;
        // confusable topic text: dedicated vocabulary plus S and C markers
        // drawn independently of the assigned label, so the text carries no
        // usable signal for the pair and the instances poison training
        int total = spec.background_tokens + spec.global_marker_tokens +
                    spec.local_marker_tokens;
        int n_conf = (total * 7) / 10;
        std::uniform_int_distribution<size_t> pick_c(0, confusable_vocab.size() - 1);
        for (int t = 0; t < n_conf; ++t)
          words.push_back(confusable_vocab[pick_c(rng)]);
        for (int t = 0; t < total - n_conf; ++t) {
          const auto& pool = global_markers[class_index(
              unit(rng) < 0.5 ? SecurityClass::S : SecurityClass::C)];
          std::uniform_int_distribution<size_t> pick_m(0, pool.size() - 1);
          words.push_back(pool[pick_m(rng)]);
        }
      } else {
        auto mixture = spec.class_mixture;
        if (spec.rotate_mixture_by_group)
          for (int c = 0; c < 3; ++c)
            mixture[c] = spec.class_mixture[(c + g) % 3];
        para.label = sample_class(rng, mixture);
        std::uniform_int_distribution<size_t> pick_bg(0, group_vocab[g].size() - 1);
        for (int t = 0; t < spec.background_tokens; ++t)
          words.push_back(group_vocab[g][pick_bg(rng)]);

        int c = class_index(para.label);
        for (int t = 0; t < spec.global_marker_tokens; ++t) {
          int src = c;
          if (spec.global_marker_noise > 0 && unit(rng) < spec.global_marker_noise) {
            std::uniform_int_distribution<int> any(0, 2);
            src = any(rng);
          }
          const auto& pool = global_markers[src];
          std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
          words.push_back(pool[pick(rng)]);
        }

        const auto& pool = local_markers[(c + g) % 3];
        std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
        for (int t = 0; t < spec.local_marker_tokens; ++t)
          words.push_back(pool[pick(rng)]);
      }

      std::string text;
      for (const auto& w : words) {
        if (!text.empty()) text += ' ';
        text += w;
      }
      para.text = text;
      para.id = ParagraphId{doc.origin, doc.year_month, doc.cable_number, p,
                            para.label};
      if (injected) corpus.injected_ids.insert(para.id.serialize());
      doc.paragraphs.push_back(std::move(para));
    }
    doc.header_label = doc.derived_label();
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

std::string render_cable(const Document& doc) {
  std::string out;
  out += std::string(to_word(doc.header_label)) + "\n";
  out += "ORIGIN: " + doc.origin + "\n";
  out += "CABLE: " + doc.cable_number + "\n";
  char date[16];
  std::snprintf(date, sizeof(date), "%04d-%02d", doc.year_month.year,
                doc.year_month.month);
  out += "DATE: " + std::string(date) + "\n";
  out += "SUBJECT: " + doc.subject + "\n\n";
  for (const auto& p : doc.paragraphs) {
    out += "(" + std::string(1, to_letter(p.label)) + ") " + p.text + "\n\n";
  }
  return out;
}

}  // namespace acess
