// security_class.hpp - ordinal security labels U < C < S
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace acess {

/// The three security classes, ordered by sensitivity.
enum class SecurityClass : int { U = 0, C = 1, S = 2 };

inline constexpr std::array<SecurityClass, 3> kAllClasses = {
    SecurityClass::U, SecurityClass::C, SecurityClass::S};

constexpr char to_letter(SecurityClass c) {
  switch (c) {
    case SecurityClass::U: return 'U';
    case SecurityClass::C: return 'C';
    case SecurityClass::S: return 'S';
  }
  return '?';
}

constexpr std::string_view to_word(SecurityClass c) {
  switch (c) {
    case SecurityClass::U: return "UNCLASSIFIED";
    case SecurityClass::C: return "CONFIDENTIAL";
    case SecurityClass::S: return "SECRET";
  }
  return "?";
}

/// Accepts the full word or the single letter, case-sensitive upper case.
std::optional<SecurityClass> parse_security_class(std::string_view s);

inline int class_index(SecurityClass c) { return static_cast<int>(c); }

inline SecurityClass class_from_index(int i) {
  if (i < 0 || i > 2) throw std::out_of_range("security class index");
  return static_cast<SecurityClass>(i);
}

inline SecurityClass max_class(SecurityClass a, SecurityClass b) {
  return class_index(a) >= class_index(b) ? a : b;
}

}  // namespace acess
