// cable.hpp - diplomatic-cable corpus model: paragraphs, documents, parsing
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acess/errors.hpp"
#include "acess/security_class.hpp"

namespace acess {

struct YearMonth {
  int year = 1900;
  int month = 1;
  bool operator==(const YearMonth&) const = default;
};

/// Stable paragraph identity, serialized as ORIGIN-YYYYMM-CABLE-POS-L.
struct ParagraphId {
  std::string origin;       // upper-cased, internal spaces removed
  YearMonth year_month;
  std::string cable_number;
  int position = 1;         // 1-based within the cable
  SecurityClass label = SecurityClass::U;

  bool operator==(const ParagraphId&) const = default;

  std::string serialize() const;
  static ParagraphId parse(const std::string& s);
};

struct Paragraph {
  ParagraphId id;
  std::string text;
  SecurityClass label = SecurityClass::U;
  int position = 1;
};

struct Document {
  std::string cable_number;
  std::string origin;
  YearMonth year_month;
  SecurityClass header_label = SecurityClass::U;
  std::string subject;
  std::vector<Paragraph> paragraphs;

  SecurityClass derived_label() const;
};

struct CableParseOptions {
  /// Unmarked body paragraphs are skipped by default; with this flag they
  /// inherit the header classification instead.
  bool inherit_header_label = false;
};

struct CableParseResult {
  Document document;
  int skipped_unmarked = 0;
};

/// Parses one raw cable. Layout: optional metadata lines (ORIGIN:, CABLE:,
/// DATE: YYYY-MM), a header line holding the full-word classification, a
/// SUBJECT: line, then blank-line-separated body paragraphs each opening
/// with a bracketed marking such as (U) / (C) / (S) / (S/NF).
CableParseResult parse_cable(const std::string& raw,
                             const CableParseOptions& opts = {});

/// Max rule over a non-empty label list. Throws EmptyInput.
SecurityClass derive_document_label(const std::vector<SecurityClass>& labels);

std::string normalize_origin(std::string origin);

// ---------------------------------------------------------------------------
// Splits

struct DataSplit {
  std::vector<Document> train;
  std::vector<Document> validation;
  std::vector<Document> test;
  uint64_t seed = 0;
  double ratios[3] = {0.6, 0.2, 0.2};

  std::vector<Paragraph> train_paragraphs() const;
  std::vector<Paragraph> validation_paragraphs() const;
  std::vector<Paragraph> test_paragraphs() const;
};

/// Document-level seeded shuffle followed by contiguous assignment by ratio.
/// All paragraphs of a document land in one partition.
DataSplit split_corpus(const std::vector<Document>& documents,
                       const double ratios[3], uint64_t seed);

std::vector<Paragraph> collect_paragraphs(const std::vector<Document>& docs);

}  // namespace acess
