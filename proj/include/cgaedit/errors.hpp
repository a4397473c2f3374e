#pragma once

#include <stdexcept>
#include <string>

namespace cgaedit {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class AlgebraError : public Error {
public:
  using Error::Error;
};

// Null-component of a conformal point too small to dehomogenize.
class DegeneratePointError : public Error {
public:
  using Error::Error;
};

class SceneError : public Error {
public:
  using Error::Error;
};

class UnknownObjectError : public SceneError {
public:
  explicit UnknownObjectError(const std::string &name)
      : SceneError("unknown object: " + name), name_(name) {}
  const std::string &name() const { return name_; }

private:
  std::string name_;
};

class TemplateError : public Error {
public:
  using Error::Error;
};

class StatsError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class ProviderError : public Error {
public:
  using Error::Error;
};

}  // namespace cgaedit
