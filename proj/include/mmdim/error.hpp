#pragma once

#include <stdexcept>
#include <string>

namespace mmdim {

enum class ErrorKind { Parameter, Budget, Config, Unsupported, NotFound, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::Parameter, what);
}

}  // namespace mmdim
