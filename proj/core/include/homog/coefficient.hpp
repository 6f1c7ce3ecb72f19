#pragma once

#include <functional>
#include <string>

#include "homog/grid.hpp"

namespace homog {

/// Y-periodic symmetric coefficient y -> A(y) with uniform ellipticity bounds
/// c|xi|^2 <= A(y)xi.xi <= C|xi|^2. Sampling wraps y modulo 1 per axis, so the
/// coefficient may be evaluated at {x/eps} directly.
class MatrixField {
 public:
  using SampleFn = std::function<Matrix2(const Point&)>;

  MatrixField();  // identity in 2-D
  MatrixField(int dim, std::string name, SampleFn fn, double ellip_lo, double ellip_hi);

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  double ellipticity_lower() const { return lo_; }
  double ellipticity_upper() const { return hi_; }

  Matrix2 sample(Point y) const;

  static MatrixField identity(int dim);
  static MatrixField laminate(int dim, double a, double b);
  static MatrixField checkerboard(double a, double b);
  static MatrixField smooth();

  /// Parses builtin specs: "identity", "laminate(a,b)", "checkerboard(a,b)",
  /// "smooth".
  static MatrixField parse(const std::string& spec, int dim);

 private:
  int dim_;
  std::string name_;
  SampleFn fn_;
  double lo_, hi_;
};

inline Matrix2 sample_coefficient(const MatrixField& field, const Point& y) { return field.sample(y); }

}  // namespace homog
