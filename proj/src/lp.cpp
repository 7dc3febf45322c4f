#include "revtp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "revtp/error.hpp"

namespace revtp {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kDedupTolerance = 1e-9;
constexpr long long kMaxSubsets = 2'000'000;

double scaled(double tol, double rhs) { return tol * std::max(1.0, std::abs(rhs)); }

bool same_point(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff() <= kDedupTolerance * std::max(1.0, a.cwiseAbs().maxCoeff());
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kMaxSubsets) return r;
  }
  return r;
}

// Picks up to `want` linearly independent rows (by 1-based label) from
// `labels`, in label order.
std::vector<int> independent_subset(const ReducedLpp& lpp, const std::vector<int>& labels,
                                    int want) {
  std::vector<int> chosen;
  Matrix basis(0, lpp.dim());
  for (int label : labels) {
    Matrix trial(basis.rows() + 1, lpp.dim());
    trial << basis, lpp.lhs.row(label - 1);
    Eigen::FullPivLU<Matrix> lu(trial);
    lu.setThreshold(1e-10);
    if (lu.rank() == trial.rows()) {
      basis = std::move(trial);
      chosen.push_back(label);
      if (static_cast<int>(chosen.size()) == want) break;
    }
  }
  return chosen;
}

std::optional<Vector> intersect(const ReducedLpp& lpp, const std::vector<int>& rows0) {
  const int d = lpp.dim();
  Matrix a(d, d);
  Vector b(d);
  for (int k = 0; k < d; ++k) {
    a.row(k) = lpp.lhs.row(rows0[k]);
    b[k] = lpp.rhs[rows0[k]];
  }
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(1e-10);
  if (lu.rank() < d) return std::nullopt;
  return Vector(lu.solve(b));
}

void validate_objective(const ReducedLpp& lpp, const Vector& objective) {
  if (objective.size() != lpp.dim()) {
    std::ostringstream os;
    os << "objective has " << objective.size() << " components, region has " << lpp.dim();
    throw Error(ErrorKind::kDimensionMismatch, os.str());
  }
  if (!objective.allFinite() || objective.norm() == 0.0) {
    throw Error(ErrorKind::kDegenerateObjective, "objective must be a finite nonzero vector");
  }
}

// For two variables the recession cone {r : lhs r <= 0} is spanned by
// directions along constraint lines, so checking those is enough.
void check_bounded_2d(const ReducedLpp& lpp, const Vector& objective) {
  for (int k = 0; k < lpp.rows(); ++k) {
    const Vector normal = lpp.lhs.row(k).transpose();
    if (normal.norm() == 0.0) continue;
    for (double sign : {1.0, -1.0}) {
      Vector ray(2);
      ray << -normal[1] * sign, normal[0] * sign;
      ray /= ray.norm();
      if ((lpp.lhs * ray).maxCoeff() <= 1e-12 && objective.dot(ray) > 1e-12) {
        throw Error(ErrorKind::kUnbounded, "objective increases without bound on the region");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Dense tableau for  max c.y  s.t.  A y <= b,  y >= 0.

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct StandardResult {
  LpStatus status = LpStatus::kOptimal;
  Vector y;
  bool unique = true;  // no zero reduced cost among nonbasic columns
};

class Tableau {
 public:
  Tableau(const Matrix& a, const Vector& b) : nv_(static_cast<int>(a.cols())),
                                              nr_(static_cast<int>(a.rows())) {
    std::vector<int> negative;
    for (int i = 0; i < nr_; ++i) {
      if (b[i] < 0) negative.push_back(i);
    }
    na_ = static_cast<int>(negative.size());
    cols_ = nv_ + nr_ + na_;
    t_ = Matrix::Zero(nr_, cols_ + 1);
    basis_.assign(nr_, -1);
    int art = 0;
    for (int i = 0; i < nr_; ++i) {
      const double sign = b[i] < 0 ? -1.0 : 1.0;
      t_.row(i).head(nv_) = sign * a.row(i);
      t_(i, nv_ + i) = sign;
      t_(i, cols_) = sign * b[i];
      if (b[i] < 0) {
        t_(i, nv_ + nr_ + art) = 1.0;
        basis_[i] = nv_ + nr_ + art;
        ++art;
      } else {
        basis_[i] = nv_ + i;
      }
    }
  }

  StandardResult solve(const Vector& c) {
    StandardResult out;
    if (na_ > 0) {
      Vector phase1 = Vector::Zero(cols_);
      phase1.tail(na_).setConstant(-1.0);
      run(phase1, cols_);
      if (objective(phase1) < -1e-9 * std::max(1.0, t_.col(cols_).cwiseAbs().maxCoeff())) {
        out.status = LpStatus::kInfeasible;
        return out;
      }
      drive_out_artificials();
    }
    Vector full = Vector::Zero(cols_);
    full.head(nv_) = c;
    if (!run(full, nv_ + nr_)) {
      out.status = LpStatus::kUnbounded;
      return out;
    }
    out.y = Vector::Zero(nv_);
    for (int i = 0; i < nr_; ++i) {
      if (basis_[i] >= 0 && basis_[i] < nv_) out.y[basis_[i]] = t_(i, cols_);
    }
    const Vector reduced = reduced_costs(full);
    std::vector<bool> in_basis(cols_, false);
    for (int bi : basis_) {
      if (bi >= 0) in_basis[bi] = true;
    }
    for (int j = 0; j < nv_ + nr_; ++j) {
      if (!in_basis[j] && std::abs(reduced[j]) <= 1e-10) out.unique = false;
    }
    return out;
  }

 private:
  Vector reduced_costs(const Vector& c) const {
    Vector r = c;
    for (int i = 0; i < nr_; ++i) {
      if (basis_[i] >= 0) r -= c[basis_[i]] * t_.row(i).head(cols_).transpose();
    }
    return r;
  }

  double objective(const Vector& c) const {
    double v = 0.0;
    for (int i = 0; i < nr_; ++i) {
      if (basis_[i] >= 0) v += c[basis_[i]] * t_(i, cols_);
    }
    return v;
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i < nr_; ++i) {
      if (i != row && t_(i, col) != 0.0) t_.row(i) -= t_(i, col) * t_.row(row);
    }
    basis_[row] = col;
  }

  // Bland's rule. Only columns below `allowed` may enter. Returns false when
  // unbounded.
  bool run(const Vector& c, int allowed) {
    for (int iter = 0; iter < 100000; ++iter) {
      const Vector r = reduced_costs(c);
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        if (r[j] > kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < nr_; ++i) {
        if (t_(i, enter) <= kPivotEps) continue;
        const double ratio = t_(i, cols_) / t_(i, enter);
        if (leave < 0 || ratio < best - 1e-12) {
          leave = i;
          best = ratio;
        } else if (ratio <= best + 1e-12 && basis_[i] < basis_[leave]) {
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration limit exceeded");
  }

  void drive_out_artificials() {
    for (int i = 0; i < nr_; ++i) {
      if (basis_[i] < nv_ + nr_) continue;
      int col = -1;
      for (int j = 0; j < nv_ + nr_; ++j) {
        if (std::abs(t_(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        // Redundant row: zero it so it never constrains phase two.
        t_.row(i).setZero();
        basis_[i] = -1;
      }
    }
  }

  int nv_;
  int nr_;
  int na_ = 0;
  int cols_ = 0;
  Matrix t_;
  std::vector<int> basis_;
};

struct GeneralResult {
  Vector x;
  bool unique = true;
};

// max c.x s.t. A x <= b with x free except where a row -s*e_k <= 0 (s > 0)
// pins x_k >= 0; those rows become variable bounds, the rest are split.
GeneralResult optimize(const Matrix& a, const Vector& b, const Vector& c) {
  const int d = static_cast<int>(a.cols());
  std::vector<bool> nonneg(d, false);
  std::vector<bool> bound_row(a.rows(), false);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    int nz = -1;
    int count = 0;
    for (int k = 0; k < d; ++k) {
      if (a(i, k) != 0.0) {
        nz = k;
        ++count;
      }
    }
    if (count == 1 && a(i, nz) < 0.0 && b[i] == 0.0) {
      nonneg[nz] = true;
      bound_row[i] = true;
    }
  }
  std::vector<int> column_of(d);
  std::vector<int> negative_column(d, -1);
  int nv = 0;
  for (int k = 0; k < d; ++k) column_of[k] = nv++;
  for (int k = 0; k < d; ++k) {
    if (!nonneg[k]) negative_column[k] = nv++;
  }
  const auto kept = std::count(bound_row.begin(), bound_row.end(), false);
  Matrix as = Matrix::Zero(kept, nv);
  Vector bs(kept);
  Vector cs = Vector::Zero(nv);
  int row = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (bound_row[i]) continue;
    for (int k = 0; k < d; ++k) {
      as(row, column_of[k]) = a(i, k);
      if (negative_column[k] >= 0) as(row, negative_column[k]) = -a(i, k);
    }
    bs[row++] = b[i];
  }
  for (int k = 0; k < d; ++k) {
    cs[column_of[k]] = c[k];
    if (negative_column[k] >= 0) cs[negative_column[k]] = -c[k];
  }

  Tableau tableau(as, bs);
  const StandardResult res = tableau.solve(cs);
  if (res.status == LpStatus::kInfeasible) {
    throw Error(ErrorKind::kEmptyRegion, "constraint system has no feasible point");
  }
  if (res.status == LpStatus::kUnbounded) {
    throw Error(ErrorKind::kUnbounded, "objective increases without bound on the region");
  }
  GeneralResult out;
  out.x = Vector::Zero(d);
  for (int k = 0; k < d; ++k) {
    out.x[k] = res.y[column_of[k]];
    if (negative_column[k] >= 0) out.x[k] -= res.y[negative_column[k]];
  }
  out.unique = res.unique;
  return out;
}

// Snaps a near-vertex point onto the exact intersection of its tight rows.
Vector polish(const ReducedLpp& lpp, const Vector& point) {
  const std::vector<int> tight = tight_constraints(lpp, point, 1e-7);
  const std::vector<int> rows = independent_subset(lpp, tight, lpp.dim());
  if (static_cast<int>(rows.size()) < lpp.dim()) return point;
  std::vector<int> zero_based(rows.size());
  std::transform(rows.begin(), rows.end(), zero_based.begin(), [](int l) { return l - 1; });
  const auto exact = intersect(lpp, zero_based);
  if (exact && is_feasible(lpp, *exact)) return *exact;
  return point;
}

Solution finish(const ReducedLpp& lpp, const Vector& objective, Vector point) {
  Solution sol;
  point = point.unaryExpr([](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; });
  sol.vertex.point = std::move(point);
  sol.vertex.active_set = tight_constraints(lpp, sol.vertex.point);
  sol.active_pair = active_pair_at(sol.vertex, lpp);
  sol.value = objective.dot(sol.vertex.point);
  return sol;
}

}  // namespace

std::vector<int> tight_constraints(const ReducedLpp& lpp, const Vector& point, double tol) {
  const Vector slack = lpp.rhs - lpp.lhs * point;
  std::vector<int> tight;
  for (int k = 0; k < lpp.rows(); ++k) {
    if (std::abs(slack[k]) <= scaled(tol, lpp.rhs[k])) tight.push_back(k + 1);
  }
  return tight;
}

bool is_feasible(const ReducedLpp& lpp, const Vector& point, double tol) {
  if (point.size() != lpp.dim()) return false;
  const Vector slack = lpp.rhs - lpp.lhs * point;
  for (int k = 0; k < lpp.rows(); ++k) {
    if (slack[k] < -scaled(tol, lpp.rhs[k])) return false;
  }
  return true;
}

bool parallel_rows(const ReducedLpp& lpp, int label_a, int label_b) {
  const Vector a = lpp.lhs.row(label_a - 1).transpose();
  const Vector b = lpp.lhs.row(label_b - 1).transpose();
  const double cos = a.dot(b) / (a.norm() * b.norm());
  return std::abs(std::abs(cos) - 1.0) <= 1e-12;
}

std::vector<Vertex> enumerate_vertices(const ReducedLpp& lpp, double tol) {
  const int d = lpp.dim();
  const int rows = lpp.rows();
  if (d < 1) throw Error(ErrorKind::kShape, "region has no free variables");
  if (binomial(rows, d) > kMaxSubsets) {
    throw Error(ErrorKind::kUnsupportedDimension, "too many constraint subsets to enumerate");
  }

  std::vector<Vertex> vertices;
  std::vector<int> subset(d);
  std::iota(subset.begin(), subset.end(), 0);
  while (true) {
    if (const auto p = intersect(lpp, subset); p && is_feasible(lpp, *p, tol)) {
      const bool seen = std::any_of(vertices.begin(), vertices.end(),
                                    [&](const Vertex& v) { return same_point(v.point, *p); });
      if (!seen) vertices.push_back({*p, tight_constraints(lpp, *p, tol)});
    }
    int k = d - 1;
    while (k >= 0 && subset[k] == rows - d + k) --k;
    if (k < 0) break;
    ++subset[k];
    for (int j = k + 1; j < d; ++j) subset[j] = subset[j - 1] + 1;
  }
  if (vertices.empty()) throw Error(ErrorKind::kEmptyRegion, "constraint system has no vertex");

  if (d == 1) {
    std::sort(vertices.begin(), vertices.end(),
              [](const Vertex& a, const Vertex& b) { return a.point[0] < b.point[0]; });
  } else if (d == 2) {
    Vector centroid = Vector::Zero(2);
    for (const auto& v : vertices) centroid += v.point;
    centroid /= static_cast<double>(vertices.size());
    std::sort(vertices.begin(), vertices.end(), [&](const Vertex& a, const Vertex& b) {
      return std::atan2(a.point[1] - centroid[1], a.point[0] - centroid[0]) <
             std::atan2(b.point[1] - centroid[1], b.point[0] - centroid[0]);
    });
  }
  return vertices;
}

std::vector<int> active_pair_at(const Vertex& vertex, const ReducedLpp& lpp, double tol) {
  const int d = lpp.dim();
  const std::vector<int> tight = tight_constraints(lpp, vertex.point, tol);
  if (static_cast<int>(tight.size()) < d) {
    std::ostringstream os;
    os << "only " << tight.size() << " constraints are tight at the point";
    throw Error(ErrorKind::kDegenerateVertex, os.str());
  }
  if (d != 2) {
    std::vector<int> chosen = independent_subset(lpp, tight, d);
    if (static_cast<int>(chosen.size()) < d) {
      throw Error(ErrorKind::kDegenerateVertex, "tight constraints do not determine a vertex");
    }
    return chosen;
  }

  if (tight.size() == 2 && !parallel_rows(lpp, tight[0], tight[1])) return tight;

  // Keep only constraints along which the region has an edge leaving this
  // vertex, i.e. the constraint is tight at some other vertex too.
  const std::vector<Vertex> all = enumerate_vertices(lpp, tol);
  std::vector<int> adjacent;
  for (int label : tight) {
    for (const auto& other : all) {
      if (same_point(other.point, vertex.point)) continue;
      if (std::binary_search(other.active_set.begin(), other.active_set.end(), label)) {
        adjacent.push_back(label);
        break;
      }
    }
  }
  if (adjacent.size() != 2 || parallel_rows(lpp, adjacent[0], adjacent[1])) {
    throw Error(ErrorKind::kDegenerateRegion,
                "region is a segment or point; no adjacent constraint pair exists");
  }
  return adjacent;
}

Solution solve_max(const ReducedLpp& lpp, const Vector& objective) {
  validate_objective(lpp, objective);
  if (lpp.dim() != 2) return solve_simplex(lpp, objective);

  check_bounded_2d(lpp, objective);
  const std::vector<Vertex> vertices = enumerate_vertices(lpp);
  const Vertex* best = nullptr;
  double best_value = 0.0;
  for (const auto& v : vertices) {
    const double value = objective.dot(v.point);
    if (best == nullptr || value > best_value + scaled(1e-9, best_value)) {
      best = &v;
      best_value = value;
    } else if (value >= best_value - scaled(1e-9, best_value) && lex_less(v.point, best->point)) {
      best = &v;
      best_value = std::max(best_value, value);
    }
  }
  return finish(lpp, objective, best->point);
}

Solution solve_simplex(const ReducedLpp& lpp, const Vector& objective) {
  validate_objective(lpp, objective);
  const int d = lpp.dim();
  GeneralResult res = optimize(lpp.lhs, lpp.rhs, objective);
  Vector point = polish(lpp, res.x);

  if (!res.unique) {
    // Optimal face is not a single vertex: walk it lexicographically.
    const double best = objective.dot(point);
    Matrix a = lpp.lhs;
    Vector b = lpp.rhs;
    auto append = [&](const Vector& row, double rhs) {
      a.conservativeResize(a.rows() + 1, Eigen::NoChange);
      b.conservativeResize(b.size() + 1);
      a.row(a.rows() - 1) = row.transpose();
      b[b.size() - 1] = rhs;
    };
    append(-objective, -best + scaled(1e-9, best));
    for (int k = 0; k < d; ++k) {
      Vector c = Vector::Zero(d);
      c[k] = -1.0;
      const GeneralResult step = optimize(a, b, c);
      const double fixed = step.x[k];
      Vector unit = Vector::Zero(d);
      unit[k] = 1.0;
      append(unit, fixed + scaled(1e-10, fixed));
      append(-unit, -fixed + scaled(1e-10, fixed));
      point = step.x;
    }
    point = polish(lpp, point);
  }
  return finish(lpp, objective, point);
}

}  // namespace revtp
