#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace randop {

// Bad parameters or inputs supplied by the caller.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation produced a result that contradicts a structural guarantee
// (e.g. a non-positive Im g_Delta) or an internal solver failed.
class NumericalFault : public std::runtime_error {
 public:
  explicit NumericalFault(const std::string& what,
                          std::optional<std::size_t> realization = std::nullopt)
      : std::runtime_error(realization ? what + " (realization " + std::to_string(*realization) + ")"
                                       : what),
        realization_(realization) {}

  std::optional<std::size_t> realization() const { return realization_; }

 private:
  std::optional<std::size_t> realization_;
};

}  // namespace randop
