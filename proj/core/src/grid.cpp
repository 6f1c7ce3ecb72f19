#include "homog/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace homog {

namespace {

int checked_dim(int dim) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  return dim;
}

}  // namespace

Grid::Grid(int dim, Lattice cells, double spacing, std::vector<std::uint8_t> active)
    : dim_(checked_dim(dim)), cells_(cells), h_(spacing), active_(std::move(active)) {
  const int cx = cells_[0];
  const int cy = dim_ == 2 ? cells_[1] : 1;
  if (cx < 1 || cy < 1) throw std::invalid_argument("grid needs at least one cell per axis");
  if (static_cast<int>(active_.size()) != cx * cy)
    throw std::invalid_argument("active mask size mismatch");

  lat_nx_ = cx + 1;
  lat_ny_ = dim_ == 2 ? cells_[1] + 1 : 1;

  lattice_to_node_.assign(lat_nx_ * lat_ny_, -1);
  auto cell_at = [&](int i, int j) -> bool {
    if (i < 0 || i >= cx) return false;
    if (dim_ == 2 && (j < 0 || j >= cells_[1])) return false;
    return active_[(dim_ == 2 ? j : 0) * cx + i] != 0;
  };

  // nodes: lattice points touching an active cell; boundary flag: not all
  // surrounding cells are active
  for (int j = 0; j < lat_ny_; ++j) {
    for (int i = 0; i < lat_nx_; ++i) {
      bool any = false, all = true;
      for (int c = 0; c < (1 << dim_); ++c) {
        const int ci = i - 1 + (c & 1);
        const int cj = dim_ == 2 ? j - 1 + ((c >> 1) & 1) : 0;
        const bool a = cell_at(ci, cj);
        any = any || a;
        all = all && a;
      }
      if (any) {
        lattice_to_node_[j * lat_nx_ + i] = static_cast<int>(node_lattice_.size());
        node_lattice_.push_back({i, j});
        boundary_node_.push_back(all ? 0 : 1);
      }
    }
  }

  cell_to_element_.assign(active_.size(), -1);
  const int cyy = dim_ == 2 ? cells_[1] : 1;
  for (int j = 0; j < cyy; ++j) {
    for (int i = 0; i < cx; ++i) {
      if (!cell_at(i, j)) continue;
      Element e;
      e.cell = {i, j};
      for (int c = 0; c < (1 << dim_); ++c) {
        const int ni = i + (c & 1);
        const int nj = dim_ == 2 ? j + ((c >> 1) & 1) : 0;
        e.nodes[c] = lattice_to_node_[nj * lat_nx_ + ni];
      }
      cell_to_element_[j * cx + i] = static_cast<int>(elements_.size());
      elements_.push_back(e);
    }
  }
}

Point Grid::node_coord(int node) const {
  const Lattice& c = node_lattice_[node];
  return {c[0] * h_, dim_ == 2 ? c[1] * h_ : 0.0};
}

int Grid::node_id(const Lattice& c) const {
  if (c[0] < 0 || c[0] >= lat_nx_) return -1;
  const int j = dim_ == 2 ? c[1] : 0;
  if (j < 0 || j >= lat_ny_) return -1;
  return lattice_to_node_[j * lat_nx_ + c[0]];
}

bool Grid::cell_in_range(const Lattice& c) const {
  if (c[0] < 0 || c[0] >= cells_[0]) return false;
  if (dim_ == 2 && (c[1] < 0 || c[1] >= cells_[1])) return false;
  return true;
}

bool Grid::cell_active(const Lattice& c) const {
  if (!cell_in_range(c)) return false;
  return active_[(dim_ == 2 ? c[1] : 0) * cells_[0] + c[0]] != 0;
}

int Grid::element_at(const Lattice& c) const {
  if (!cell_in_range(c)) return -1;
  return cell_to_element_[(dim_ == 2 ? c[1] : 0) * cells_[0] + c[0]];
}

namespace {

// per-axis candidate cells for a coordinate: the floor cell, plus the cell
// below when the coordinate sits on a lattice plane
void axis_candidates(double t, int ncells, int out[2], int* count) {
  const double tol = 1e-12 * std::max(1, ncells);
  int i = static_cast<int>(std::floor(t));
  i = std::clamp(i, 0, ncells - 1);
  *count = 0;
  out[(*count)++] = i;
  if (t - i <= tol && i - 1 >= 0) out[(*count)++] = i - 1;
  if (i + 1 <= ncells - 1 && (i + 1) - t <= tol) out[(*count)++] = i + 1;
}

}  // namespace

int Grid::locate(const Point& x, Point* local) const {
  int cx[3], cy[3];
  int nx = 0, ny = 0;
  axis_candidates(x[0] / h_, cells_[0], cx, &nx);
  if (dim_ == 2) {
    axis_candidates(x[1] / h_, cells_[1], cy, &ny);
  } else {
    cy[0] = 0;
    ny = 1;
  }
  const double tol = 1e-10;
  for (int b = 0; b < ny; ++b) {
    for (int a = 0; a < nx; ++a) {
      Lattice c{cx[a], dim_ == 2 ? cy[b] : 0};
      const int e = element_at(c);
      if (e < 0) continue;
      Point u{x[0] / h_ - c[0], dim_ == 2 ? x[1] / h_ - c[1] : 0.0};
      if (u[0] < -tol || u[0] > 1.0 + tol) continue;
      if (dim_ == 2 && (u[1] < -tol || u[1] > 1.0 + tol)) continue;
      u[0] = std::clamp(u[0], 0.0, 1.0);
      u[1] = std::clamp(u[1], 0.0, 1.0);
      if (local) *local = u;
      return e;
    }
  }
  throw std::domain_error("point outside the grid domain");
}

CellGrid::CellGrid(int dim, int m)
    : Grid(dim, {m, dim == 2 ? m : 1}, 1.0 / m,
           std::vector<std::uint8_t>(dim == 2 ? static_cast<size_t>(m) * m : m, 1)),
      m_(m) {
  if (m < 2) throw std::invalid_argument("cell grid needs m >= 2 divisions");
}

int CellGrid::periodic_dof_count() const {
  return dim_ == 2 ? m_ * m_ : m_;
}

int CellGrid::periodic_dof(int node) const {
  const Lattice& c = node_lattice_[node];
  const int i = c[0] % m_;
  const int j = dim_ == 2 ? c[1] % m_ : 0;
  return j * m_ + i;
}

int CellGrid::periodic_rep_node(int dof) const {
  const int i = dof % m_;
  const int j = dof / m_;
  return node_id({i, j});
}

DomainGrid::DomainGrid(int dim, int N, int s, std::vector<std::uint8_t> macro_mask)
    : Grid(dim, {N * s, dim == 2 ? N * s : 1}, 1.0 / (static_cast<double>(N) * s),
           [&] {
             // expand the macro mask to the fine lattice
             if (N < 2) throw std::invalid_argument("domain grid needs N >= 2 macro cells");
             if (s < 2) throw std::invalid_argument("domain grid needs s >= 2 fine cells per macro cell");
             const size_t want = dim == 2 ? static_cast<size_t>(N) * N : N;
             if (macro_mask.size() != want) throw std::invalid_argument("macro mask size mismatch");
             const int fx = N * s;
             const int fy = dim == 2 ? N * s : 1;
             std::vector<std::uint8_t> fine(static_cast<size_t>(fx) * fy, 0);
             for (int j = 0; j < fy; ++j)
               for (int i = 0; i < fx; ++i) {
                 const int mi = i / s;
                 const int mj = dim == 2 ? j / s : 0;
                 fine[static_cast<size_t>(j) * fx + i] = macro_mask[mj * N + mi];
               }
             return fine;
           }()),
      N_(N), s_(s), eps_(1.0 / N), macro_mask_(std::move(macro_mask)) {
  // active macro cells, row-major, plus connectivity check
  const int my = dim_ == 2 ? N_ : 1;
  macro_index_.assign(static_cast<size_t>(N_) * my, -1);
  for (int j = 0; j < my; ++j)
    for (int i = 0; i < N_; ++i)
      if (macro_mask_[j * N_ + i]) {
        macro_index_[j * N_ + i] = static_cast<int>(macro_cells_.size());
        macro_cells_.push_back({i, j});
      }
  if (macro_cells_.empty()) throw std::invalid_argument("macro mask selects no cells");

  std::vector<std::uint8_t> seen(macro_cells_.size(), 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const Lattice c = macro_cells_[frontier.front()];
    frontier.pop();
    const Lattice nb[4] = {{c[0] - 1, c[1]}, {c[0] + 1, c[1]}, {c[0], c[1] - 1}, {c[0], c[1] + 1}};
    for (int k = 0; k < 2 * dim_; ++k) {
      const int idx = macro_index(nb[k]);
      if (idx >= 0 && !seen[idx]) {
        seen[idx] = 1;
        ++reached;
        frontier.push(idx);
      }
    }
  }
  if (reached != macro_cell_count()) throw std::invalid_argument("macro mask is not face-connected");

  // boundary segments: macro cell faces against inactive/outside cells
  for (const Lattice& c : macro_cells_) {
    const double x0 = c[0] * eps_, x1 = (c[0] + 1) * eps_;
    const double y0 = dim_ == 2 ? c[1] * eps_ : 0.0;
    const double y1 = dim_ == 2 ? (c[1] + 1) * eps_ : 0.0;
    if (dim_ == 1) {
      if (!macro_active({c[0] - 1, 0})) segments_.push_back({{x0, 0.0}, {x0, 0.0}});
      if (!macro_active({c[0] + 1, 0})) segments_.push_back({{x1, 0.0}, {x1, 0.0}});
      continue;
    }
    if (!macro_active({c[0] - 1, c[1]})) segments_.push_back({{x0, y0}, {x0, y1}});
    if (!macro_active({c[0] + 1, c[1]})) segments_.push_back({{x1, y0}, {x1, y1}});
    if (!macro_active({c[0], c[1] - 1})) segments_.push_back({{x0, y0}, {x1, y0}});
    if (!macro_active({c[0], c[1] + 1})) segments_.push_back({{x0, y1}, {x1, y1}});
  }
}

int DomainGrid::macro_index(const Lattice& c) const {
  if (c[0] < 0 || c[0] >= N_) return -1;
  const int j = dim_ == 2 ? c[1] : 0;
  if (j < 0 || (dim_ == 2 && j >= N_)) return -1;
  return macro_index_[j * N_ + c[0]];
}

bool DomainGrid::macro_active(const Lattice& c) const { return macro_index(c) >= 0; }

Lattice DomainGrid::macro_of_element(int elem) const {
  const Lattice& c = elements()[elem].cell;
  return {c[0] / s_, dim_ == 2 ? c[1] / s_ : 0};
}

int DomainGrid::macro_locate(const Point& x) const {
  int cx[3], cy[3];
  int nx = 0, ny = 0;
  axis_candidates(x[0] / eps_, N_, cx, &nx);
  if (dim_ == 2) {
    axis_candidates(x[1] / eps_, N_, cy, &ny);
  } else {
    cy[0] = 0;
    ny = 1;
  }
  const double tol = 1e-10;
  for (int b = 0; b < ny; ++b)
    for (int a = 0; a < nx; ++a) {
      Lattice c{cx[a], dim_ == 2 ? cy[b] : 0};
      const int idx = macro_index(c);
      if (idx < 0) continue;
      const double u = x[0] / eps_ - c[0];
      if (u < -tol || u > 1.0 + tol) continue;
      if (dim_ == 2) {
        const double v = x[1] / eps_ - c[1];
        if (v < -tol || v > 1.0 + tol) continue;
      }
      return idx;
    }
  throw std::domain_error("point outside the domain closure");
}

double DomainGrid::domain_measure() const {
  return macro_cell_count() * std::pow(eps_, dim_);
}

std::shared_ptr<const CellGrid> build_cell_grid(int dim, int m) {
  return std::make_shared<const CellGrid>(dim, m);
}

std::shared_ptr<const DomainGrid> build_domain_grid(int dim, int N, int s,
                                                    const std::vector<std::uint8_t>& mask) {
  return std::make_shared<const DomainGrid>(dim, N, s, mask);
}

std::vector<std::uint8_t> make_mask(const std::string& shape, int dim, int N) {
  const size_t cells = dim == 2 ? static_cast<size_t>(N) * N : N;
  if (shape == "unit_square") return std::vector<std::uint8_t>(cells, 1);
  if (shape == "l_shape") {
    if (dim != 2) throw std::invalid_argument("l_shape mask needs dim = 2");
    if (N % 2 != 0) throw std::invalid_argument("l_shape mask needs even N");
    std::vector<std::uint8_t> mask(cells, 1);
    for (int j = N / 2; j < N; ++j)
      for (int i = N / 2; i < N; ++i) mask[static_cast<size_t>(j) * N + i] = 0;
    return mask;
  }
  throw std::invalid_argument("unknown mask shape: " + shape);
}

double distance_to_boundary(const DomainGrid& grid, const Point& x) {
  grid.macro_locate(x);  // containment check
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seg : grid.boundary_segments()) {
    const double dx = seg.b[0] - seg.a[0];
    const double dy = seg.b[1] - seg.a[1];
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) {
      t = ((x[0] - seg.a[0]) * dx + (x[1] - seg.a[1]) * dy) / len2;
      t = std::clamp(t, 0.0, 1.0);
    }
    const double px = seg.a[0] + t * dx - x[0];
    const double py = seg.a[1] + t * dy - x[1];
    best = std::min(best, std::sqrt(px * px + py * py));
  }
  return best;
}

QuadratureRule quadrature(int dim) {
  QuadratureRule q;
  const double g0 = 0.5 - 0.5 / std::sqrt(3.0);
  const double g1 = 0.5 + 0.5 / std::sqrt(3.0);
  if (dim == 1) {
    q.points = 2;
    q.local = {Point{g0, 0.0}, Point{g1, 0.0}, Point{0, 0}, Point{0, 0}};
    q.weight = 0.5;
  } else {
    q.points = 4;
    q.local = {Point{g0, g0}, Point{g1, g0}, Point{g0, g1}, Point{g1, g1}};
    q.weight = 0.25;
  }
  return q;
}

}  // namespace homog
