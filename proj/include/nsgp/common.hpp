#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace nsgp {

struct NsgpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failures (CLI exit code 2).
struct FactorizationFailed : NsgpError { using NsgpError::NsgpError; };
struct NonFiniteIntegrand : NsgpError { using NsgpError::NsgpError; };
struct NonPositiveLengthscale : NsgpError { using NsgpError::NsgpError; };

// Validation failures (CLI exit code 1).
struct ValidationError : NsgpError { using NsgpError::NsgpError; };
struct DimensionMismatch : ValidationError { using ValidationError::ValidationError; };
struct EmptyWindow : ValidationError { using ValidationError::ValidationError; };
struct ParseError : ValidationError { using ValidationError::ValidationError; };
struct MissingTarget : ValidationError { using ValidationError::ValidationError; };
struct DegenerateColumn : ValidationError { using ValidationError::ValidationError; };
struct UntrainedModel : ValidationError { using ValidationError::ValidationError; };
struct FieldUnavailable : ValidationError { using ValidationError::ValidationError; };
struct IoError : ValidationError { using ValidationError::ValidationError; };

// Seeded random source. Owned by the caller and passed by reference into
// anything that samples; never shared across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return normal_(gen_); }
  double uniform() { return uniform_(gen_); }  // [0, 1)
  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_);
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace nsgp
