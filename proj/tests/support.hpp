#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "homog/field.hpp"
#include "homog/grid.hpp"

namespace testsupport {

// dense symmetric solve with partial pivoting, used as an independent oracle
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int r = k + 1; r < n; ++r)
      if (std::abs(a[r][k]) > std::abs(a[piv][k])) piv = r;
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (int r = k + 1; r < n; ++r) {
      const double f = a[r][k] / a[k][k];
      for (int c = k; c < n; ++c) a[r][c] -= f * a[k][c];
      b[r] -= f * b[k];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

inline homog::ScalarField random_nodal_field(std::shared_ptr<const homog::Grid> grid,
                                             std::uint64_t seed, double amplitude = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  homog::ScalarField f(std::move(grid));
  for (double& v : f.v) v = dist(rng);
  return f;
}

// random trigonometric polynomial: a fixed continuous function that can be
// sampled consistently on grids of different resolution
struct TrigField {
  struct Mode {
    double c;
    int kx, ky;
    double px, py;
  };
  std::vector<Mode> modes;

  static TrigField make(std::uint64_t seed, int max_k = 3) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> coef(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    TrigField f;
    for (int kx = 0; kx <= max_k; ++kx)
      for (int ky = 0; ky <= max_k; ++ky)
        f.modes.push_back({coef(rng) / (1.0 + kx + ky), kx, ky, phase(rng), phase(rng)});
    return f;
  }

  double operator()(const homog::Point& x) const {
    double s = 0.0;
    for (const Mode& m : modes)
      s += m.c * std::cos(m.kx * std::numbers::pi * x[0] + m.px) *
           std::cos(m.ky * std::numbers::pi * x[1] + m.py);
    return s;
  }
};

}  // namespace testsupport
