#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace radial {

// Error taxonomy shared by the library and the CLI exit-code mapping.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public IoError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : IoError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " at step " + std::to_string(step)),
        step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// N x d row-major array of points. Row i is sample i, column j is feature j.
struct SampleSet {
  std::size_t count{0};
  std::size_t dim{0};
  std::vector<double> points;

  SampleSet() = default;
  SampleSet(std::size_t n, std::size_t d)
      : count(n), dim(d), points(n * d, 0.0) {}

  double operator()(std::size_t i, std::size_t j) const {
    return points[i * dim + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return points[i * dim + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {points.data() + i * dim, dim};
  }
  std::span<double> row(std::size_t i) {
    return {points.data() + i * dim, dim};
  }

  bool same_shape(const SampleSet& other) const {
    return count == other.count && dim == other.dim;
  }

  /// Euclidean norm of row i.
  double radius(std::size_t i) const;

  /// Norms of all rows.
  std::vector<double> radii() const;

  /// True if every entry is finite.
  bool all_finite() const;
};

}  // namespace radial
