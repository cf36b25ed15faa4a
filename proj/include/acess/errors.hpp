// errors.hpp - typed error hierarchy shared by all modules
#pragma once

#include <stdexcept>
#include <string>

namespace acess {

/// Base for every library error; carries a stable machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct ConfigError : Error {
  using Error::Error;
};

struct DataError : Error {
  using Error::Error;
};

struct MethodError : Error {
  using Error::Error;
};

inline ConfigError config_error(const std::string& code, const std::string& what) {
  return ConfigError(code, code + ": " + what);
}
inline DataError data_error(const std::string& code, const std::string& what) {
  return DataError(code, code + ": " + what);
}
inline MethodError method_error(const std::string& code, const std::string& what) {
  return MethodError(code, code + ": " + what);
}

}  // namespace acess
