#include "homog/coefficient.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace homog {

namespace {

Matrix2 scaled_identity(double a) {
  return Matrix2{{{a, 0.0}, {0.0, a}}};
}

double wrap01(double t) {
  const double f = t - std::floor(t);
  return f;  // in [0,1)
}

std::vector<double> parse_args(const std::string& spec, std::string* name) {
  const auto open = spec.find('(');
  std::vector<double> args;
  if (open == std::string::npos) {
    *name = spec;
    return args;
  }
  *name = spec.substr(0, open);
  const auto close = spec.rfind(')');
  if (close == std::string::npos || close < open)
    throw std::invalid_argument("malformed coefficient spec: " + spec);
  std::stringstream ss(spec.substr(open + 1, close - open - 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    const double val = std::stod(tok, &pos);
    args.push_back(val);
  }
  return args;
}

}  // namespace

MatrixField::MatrixField() : MatrixField(identity(2)) {}

MatrixField::MatrixField(int dim, std::string name, SampleFn fn, double lo, double hi)
    : dim_(dim), name_(std::move(name)), fn_(std::move(fn)), lo_(lo), hi_(hi) {
  if (lo_ <= 0.0 || hi_ < lo_) throw std::invalid_argument("ellipticity bounds need 0 < c <= C");
}

Matrix2 MatrixField::sample(Point y) const {
  y[0] = wrap01(y[0]);
  y[1] = dim_ == 2 ? wrap01(y[1]) : 0.0;
  return fn_(y);
}

MatrixField MatrixField::identity(int dim) {
  return MatrixField(dim, "identity", [](const Point&) { return scaled_identity(1.0); }, 1.0, 1.0);
}

MatrixField MatrixField::laminate(int dim, double a, double b) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("laminate values must be positive");
  std::ostringstream name;
  name << "laminate(" << a << "," << b << ")";
  return MatrixField(
      dim, name.str(),
      [a, b](const Point& y) { return scaled_identity(y[0] < 0.5 ? a : b); },
      std::min(a, b), std::max(a, b));
}

MatrixField MatrixField::checkerboard(double a, double b) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("checkerboard values must be positive");
  std::ostringstream name;
  name << "checkerboard(" << a << "," << b << ")";
  return MatrixField(
      2, name.str(),
      [a, b](const Point& y) {
        const int qx = y[0] < 0.5 ? 0 : 1;
        const int qy = y[1] < 0.5 ? 0 : 1;
        return scaled_identity(qx == qy ? a : b);
      },
      std::min(a, b), std::max(a, b));
}

MatrixField MatrixField::smooth() {
  return MatrixField(
      2, "smooth",
      [](const Point& y) {
        const double t = 2.0 + std::cos(2.0 * std::numbers::pi * y[0]) * std::cos(2.0 * std::numbers::pi * y[1]);
        return scaled_identity(t);
      },
      1.0, 3.0);
}

MatrixField MatrixField::parse(const std::string& spec, int dim) {
  std::string name;
  const std::vector<double> args = parse_args(spec, &name);
  if (name == "identity" && args.empty()) return identity(dim);
  if (name == "laminate" && args.size() == 2) return laminate(dim, args[0], args[1]);
  if (name == "checkerboard" && args.size() == 2) {
    if (dim != 2) throw std::invalid_argument("checkerboard coefficient needs dim = 2");
    return checkerboard(args[0], args[1]);
  }
  if (name == "smooth" && args.empty()) {
    if (dim != 2) throw std::invalid_argument("smooth coefficient needs dim = 2");
    return smooth();
  }
  throw std::invalid_argument("unknown coefficient spec: " + spec);
}

}  // namespace homog
