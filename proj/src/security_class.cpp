#include "acess/security_class.hpp"

namespace acess {

std::optional<SecurityClass> parse_security_class(std::string_view s) {
  if (s == "U" || s == "UNCLASSIFIED") return SecurityClass::U;
  if (s == "C" || s == "CONFIDENTIAL") return SecurityClass::C;
  if (s == "S" || s == "SECRET") return SecurityClass::S;
  return std::nullopt;
}

}  // namespace acess
