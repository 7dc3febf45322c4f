#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library code it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ctilde(i-1, j-1) = -(c11 - ci1 - c1j + cij), written out cell by cell.
inline Matrix ctilde(const Matrix& c) {
  Matrix out(c.rows() - 1, c.cols() - 1);
  for (int i = 1; i < c.rows(); ++i) {
    for (int j = 1; j < c.cols(); ++j) out(i - 1, j - 1) = c(0, j) + c(i, 0) - c(0, 0) - c(i, j);
  }
  return out;
}

// The 2x3 region in (x22, x23), written from the transport equations.
struct HalfPlane {
  double a, b, rhs;  // a*x + b*y <= rhs
};

inline std::array<HalfPlane, 6> region_2x3(const std::array<double, 2>& s,
                                           const std::array<double, 3>& d) {
  return {{{-1, -1, s[0] - d[1] - d[2]},  // x11 >= 0
           {1, 1, s[1]},                  // x21 >= 0
           {1, 0, d[1]},                  // x12 >= 0
           {0, 1, d[2]},                  // x13 >= 0
           {-1, 0, 0},
           {0, -1, 0}}};
}

struct Corner {
  double x, y;
  std::vector<int> tight;  // 1-based
};

// Vertices by intersecting every pair of boundary lines (Cramer's rule).
inline std::vector<Corner> corners(const std::array<HalfPlane, 6>& h, double tol = 1e-9) {
  std::vector<Corner> out;
  for (int p = 0; p < 6; ++p) {
    for (int q = p + 1; q < 6; ++q) {
      const double det = h[p].a * h[q].b - h[p].b * h[q].a;
      if (std::abs(det) < 1e-12) continue;
      const double x = (h[p].rhs * h[q].b - h[p].b * h[q].rhs) / det;
      const double y = (h[p].a * h[q].rhs - h[p].rhs * h[q].a) / det;
      bool inside = true;
      for (const auto& c : h) inside = inside && c.a * x + c.b * y <= c.rhs + tol;
      if (!inside) continue;
      const bool dup = std::any_of(out.begin(), out.end(), [&](const Corner& v) {
        return std::abs(v.x - x) < 1e-9 && std::abs(v.y - y) < 1e-9;
      });
      if (dup) continue;
      Corner v{x, y, {}};
      for (int k = 0; k < 6; ++k) {
        if (std::abs(h[k].a * x + h[k].b * y - h[k].rhs) <= tol) v.tight.push_back(k + 1);
      }
      out.push_back(v);
    }
  }
  return out;
}

// Constraints forming an edge of positive length: tight at two distinct corners.
inline std::vector<int> edges(const std::vector<Corner>& cs) {
  std::vector<int> out;
  for (int label = 1; label <= 6; ++label) {
    int hits = 0;
    for (const auto& c : cs) hits += std::count(c.tight.begin(), c.tight.end(), label) > 0;
    if (hits >= 2) out.push_back(label);
  }
  return out;
}

inline double angle_between(double ax, double ay, double bx, double by) {
  return std::atan2(std::abs(ax * by - ay * bx), ax * bx + ay * by);
}

// Minimum cost over every integer plan with the given margins.
inline double brute_force_min_cost(const Matrix& c, const std::vector<int>& supply,
                                   const std::vector<int>& demand) {
  const int m = static_cast<int>(supply.size());
  const int n = static_cast<int>(demand.size());
  std::vector<int> row_left = supply;
  std::vector<int> col_left = demand;
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, double)> fill = [&](int cell, double cost) {
    if (cell == m * n) {
      for (int v : row_left) if (v != 0) return;
      for (int v : col_left) if (v != 0) return;
      best = std::min(best, cost);
      return;
    }
    const int i = cell / n;
    const int j = cell % n;
    const int cap = std::min(row_left[i], col_left[j]);
    // Last cell of a row must empty it; last row must empty each column.
    for (int x = 0; x <= cap; ++x) {
      if (j == n - 1 && x != row_left[i]) continue;
      if (i == m - 1 && x != col_left[j]) continue;
      row_left[i] -= x;
      col_left[j] -= x;
      fill(cell + 1, cost + x * c(i, j));
      row_left[i] += x;
      col_left[j] += x;
    }
  };
  fill(0, 0.0);
  return best;
}

// Normalized weighted sum of directions.
inline Vector weighted_direction(const std::vector<Vector>& dirs, const std::vector<double>& w) {
  Vector s = Vector::Zero(dirs.front().size());
  for (size_t k = 0; k < dirs.size(); ++k) s += w[k] * dirs[k];
  return s / s.norm();
}

inline std::array<std::vector<int>, 2> random_balanced(std::mt19937_64& rng, int m, int n,
                                                       int hi) {
  std::uniform_int_distribution<int> draw(1, hi);
  for (;;) {
    std::vector<int> a(m), b(n);
    for (auto& v : a) v = draw(rng);
    for (auto& v : b) v = draw(rng);
    int sa = 0, sb = 0;
    for (int v : a) sa += v;
    for (int v : b) sb += v;
    if (sa == sb) return {a, b};
  }
}

}  // namespace oracle
