#pragma once

#include <stdexcept>
#include <string>

namespace creutz {

// Base for every failure raised by the library. The C API maps each subclass
// onto its own status code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
  using Error::Error;
};

// Carries a dotted path into the JSON config (e.g. "probe.gamma_a_mhz").
class ConfigError : public Error {
public:
  ConfigError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace creutz
