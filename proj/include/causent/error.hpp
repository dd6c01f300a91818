#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace causent {

// Bad input: malformed structure, out-of-domain argument, unknown name.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A directed cycle was found where a DAG was required. The witness is the
// lexicographically smallest simple cycle, 0-indexed, starting at its
// smallest vertex.
class CycleError : public ValidationError {
 public:
  CycleError(const std::string& what, std::vector<int> cycle)
      : ValidationError(what), cycle_(std::move(cycle)) {}
  const std::vector<int>& cycle() const { return cycle_; }

 private:
  std::vector<int> cycle_;
};

// A computation that is well defined but refused at this scale (state space
// too large, exhaustive enumeration out of range).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Statistical refusal: not enough samples for the requested guarantee.
class InsufficientSamples : public std::runtime_error {
 public:
  InsufficientSamples(const std::string& what, std::size_t required,
                      std::size_t available)
      : std::runtime_error(what), required_(required), available_(available) {}
  std::size_t required() const { return required_; }
  std::size_t available() const { return available_; }

 private:
  std::size_t required_;
  std::size_t available_;
};

// Optimizer found no feasible design.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace causent
