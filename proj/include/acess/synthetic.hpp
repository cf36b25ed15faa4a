// synthetic.hpp - deterministic synthetic cable corpus generator
#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "acess/cable.hpp"

namespace acess {

struct SyntheticSpec {
  int n_documents = 100;
  int min_paragraphs = 2;
  int max_paragraphs = 6;
  std::array<double, 3> class_mixture = {0.4, 0.3, 0.3};  // U, C, S
  int n_similarity_groups = 3;
  // group g samples classes from class_mixture rotated by g, so per-group
  // class balances differ while the corpus-wide mixture stays put
  bool rotate_mixture_by_group = false;

  // per-paragraph token budget
  int background_tokens = 12;       // group-specific vocabulary
  int global_marker_tokens = 6;     // class markers consistent across groups
  int local_marker_tokens = 12;     // shared marker words, class mapping
                                    // rotated per group (uninformative globally)
  double global_marker_noise = 0.0; // chance global markers come from a
                                    // random class instead of the true one
  int vocab_per_group = 40;
  int markers_per_class = 4;

  double confusable_rate = 0.0;     // fraction of paragraphs replaced by the
                                    // injected confusable S/C topic
  uint64_t seed = 0;
};

struct SyntheticCorpus {
  std::vector<Document> documents;
  std::set<std::string> injected_ids;  // paragraph ids of confusable instances
};

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec);

/// Renders a document back into raw cable text (the parse_cable format).
std::string render_cable(const Document& doc);

}  // namespace acess
