#include "acess/cable.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

namespace acess {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_lines(const std::string& raw) {
  std::vector<std::string> lines;
  std::string cur;
  std::istringstream in(raw);
  while (std::getline(in, cur)) {
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    lines.push_back(cur);
  }
  return lines;
}

}  // namespace

std::string normalize_origin(std::string origin) {
  std::string out;
  for (char ch : origin) {
    if (ch == ' ') continue;
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  }
  return out;
}

std::string ParagraphId::serialize() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d%02d", year_month.year, year_month.month);
  std::string out = origin;
  out += '-';
  out += buf;
  out += '-';
  out += cable_number;
  std::snprintf(buf, sizeof(buf), "-%02d-", position);
  out += buf;
  out += to_letter(label);
  return out;
}

ParagraphId ParagraphId::parse(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == '-') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  if (parts.size() < 5) throw data_error("BadParagraphId", s);

  ParagraphId id;
  // origin may legitimately contain '-'; take the trailing four fields.
  size_t n = parts.size();
  auto cls = parse_security_class(parts[n - 1]);
  if (!cls) throw data_error("BadParagraphId", "label field in " + s);
  id.label = *cls;
  id.position = std::stoi(parts[n - 2]);
  id.cable_number = parts[n - 3];
  const std::string& ym = parts[n - 4];
  if (ym.size() != 6) throw data_error("BadParagraphId", "year-month field in " + s);
  id.year_month.year = std::stoi(ym.substr(0, 4));
  id.year_month.month = std::stoi(ym.substr(4, 2));
  for (size_t i = 0; i + 4 < n; ++i) {
    if (i) id.origin += '-';
    id.origin += parts[i];
  }
  return id;
}

SecurityClass Document::derived_label() const {
  std::vector<SecurityClass> labels;
  labels.reserve(paragraphs.size());
  for (const auto& p : paragraphs) labels.push_back(p.label);
  return derive_document_label(labels);
}

SecurityClass derive_document_label(const std::vector<SecurityClass>& labels) {
  if (labels.empty()) throw data_error("EmptyInput", "no paragraph labels");
  SecurityClass m = labels.front();
  for (SecurityClass c : labels) m = max_class(m, c);
  return m;
}

CableParseResult parse_cable(const std::string& raw, const CableParseOptions& opts) {
  CableParseResult result;
  Document& doc = result.document;
  doc.origin = "UNKNOWN";
  doc.cable_number = "000000";

  auto lines = split_lines(raw);

  // Header scan: metadata lines, the full-word classification, the subject.
  bool have_header = false;
  size_t body_start = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.rfind("ORIGIN:", 0) == 0) {
      doc.origin = normalize_origin(trim(line.substr(7)));
    } else if (line.rfind("CABLE:", 0) == 0) {
      doc.cable_number = trim(line.substr(6));
    } else if (line.rfind("DATE:", 0) == 0) {
      std::string d = trim(line.substr(5));
      if (d.size() >= 7 && d[4] == '-') {
        doc.year_month.year = std::stoi(d.substr(0, 4));
        doc.year_month.month = std::stoi(d.substr(5, 2));
      }
    } else if (line.rfind("SUBJECT:", 0) == 0) {
      doc.subject = trim(line.substr(8));
      body_start = i + 1;
      break;
    } else if (!have_header) {
      if (auto cls = parse_security_class(line)) {
        doc.header_label = *cls;
        have_header = true;
        body_start = i + 1;
      }
    }
  }
  if (!have_header)
    throw data_error("MissingHeaderLabel", "no full-word classification line");

  // Body: blank-line-separated paragraphs.
  std::vector<std::string> blocks;
  std::string block;
  for (size_t i = body_start; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.empty()) {
      if (!block.empty()) blocks.push_back(block);
      block.clear();
    } else {
      if (!block.empty()) block += ' ';
      block += line;
    }
  }
  if (!block.empty()) blocks.push_back(block);

  int position = 1;
  for (const std::string& b : blocks) {
    if (b.size() >= 3 && b[0] == '(') {
      size_t close = b.find(')');
      if (close == std::string::npos || close < 2)
        throw data_error("UnknownMarking", "unterminated marking in: " + b.substr(0, 20));
      std::string marking = b.substr(1, close - 1);
      // compound markings like S/NF reduce to the leading letter
      std::string head = marking.substr(0, marking.find('/'));
      auto cls = parse_security_class(head);
      if (!cls)
        throw data_error("UnknownMarking",
                         "marking (" + marking + ") at paragraph offset " +
                             std::to_string(position));
      std::string text = trim(b.substr(close + 1));
      if (text.empty()) {
        ++result.skipped_unmarked;
        continue;
      }
      Paragraph p;
      p.text = text;
      p.label = *cls;
      p.position = position;
      p.id = ParagraphId{doc.origin, doc.year_month, doc.cable_number, position, *cls};
      doc.paragraphs.push_back(std::move(p));
      ++position;
    } else if (opts.inherit_header_label) {
      Paragraph p;
      p.text = b;
      p.label = doc.header_label;
      p.position = position;
      p.id = ParagraphId{doc.origin, doc.year_month, doc.cable_number, position,
                         doc.header_label};
      doc.paragraphs.push_back(std::move(p));
      ++position;
    } else {
      ++result.skipped_unmarked;
    }
  }

  if (doc.paragraphs.empty())
    throw data_error("EmptyBody", "no parseable paragraphs");
  return result;
}

std::vector<Paragraph> collect_paragraphs(const std::vector<Document>& docs) {
  std::vector<Paragraph> out;
  for (const auto& d : docs)
    for (const auto& p : d.paragraphs) out.push_back(p);
  return out;
}

std::vector<Paragraph> DataSplit::train_paragraphs() const {
  return collect_paragraphs(train);
}
std::vector<Paragraph> DataSplit::validation_paragraphs() const {
  return collect_paragraphs(validation);
}
std::vector<Paragraph> DataSplit::test_paragraphs() const {
  return collect_paragraphs(test);
}

DataSplit split_corpus(const std::vector<Document>& documents,
                       const double ratios[3], uint64_t seed) {
  double sum = ratios[0] + ratios[1] + ratios[2];
  if (ratios[0] <= 0 || ratios[1] <= 0 || ratios[2] <= 0 ||
      std::abs(sum - 1.0) > 1e-9)
    throw config_error("BadRatios", "ratios must be positive and sum to 1");
  if (documents.size() < 3)
    throw data_error("TooFewDocuments", "need at least 3 documents");

  std::vector<size_t> order(documents.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  size_t n = documents.size();
  auto n_train = static_cast<size_t>(std::llround(ratios[0] * n));
  auto n_trainval = static_cast<size_t>(std::llround((ratios[0] + ratios[1]) * n));
  n_train = std::min(n_train, n);
  n_trainval = std::clamp(n_trainval, n_train, n);

  DataSplit split;
  split.seed = seed;
  for (int i = 0; i < 3; ++i) split.ratios[i] = ratios[i];
  for (size_t i = 0; i < n; ++i) {
    const Document& d = documents[order[i]];
    if (i < n_train)
      split.train.push_back(d);
    else if (i < n_trainval)
      split.validation.push_back(d);
    else
      split.test.push_back(d);
  }
  return split;
}

}  // namespace acess
