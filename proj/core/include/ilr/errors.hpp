#pragma once

#include <stdexcept>
#include <string>

namespace ilr {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

/// Invalid arguments handed to a numerical kernel (e.g. a non-SPD QP matrix).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Neighbor centroids do not span the plane, so the least-squares matrix is singular.
class DegenerateStencil : public Error {
 public:
  explicit DegenerateStencil(int cell)
      : Error("degenerate reconstruction stencil at cell " + std::to_string(cell)), cell_(cell) {}
  int cell() const { return cell_; }

 private:
  int cell_;
};

/// A density or pressure left the admissible set.
class PositivityLoss : public Error {
 public:
  PositivityLoss(int cell, double time, const std::string& what)
      : Error("positivity lost at cell " + std::to_string(cell) + ", t=" + std::to_string(time) +
              ": " + what),
        cell_(cell),
        time_(time) {}
  int cell() const { return cell_; }
  double time() const { return time_; }

 private:
  int cell_;
  double time_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ilr
