#include "revtp/reduction.hpp"

#include <cmath>
#include <sstream>

#include "revtp/error.hpp"

namespace revtp {

Vector ReducedObjective::coefficients() const { return free_matrix_to_vector(ctilde); }

double ReducedObjective::constant(const Dms& dms) const {
  const int m = static_cast<int>(first_column.size());
  const int n = static_cast<int>(first_row.size());
  if (dms.m() != m || dms.n() != n) {
    throw Error(ErrorKind::kShape, "situation does not match the objective's dimensions");
  }
  const Vector& a = dms.supply();
  const Vector& b = dms.demand();
  // Minus the cost of the basic cells evaluated at zero free variables.
  double basic = first_column[0] * (a[0] - b.tail(n - 1).sum());
  basic += first_row.tail(n - 1).dot(b.tail(n - 1));
  basic += first_column.tail(m - 1).dot(a.tail(m - 1));
  return -basic;
}

ReducedObjective reduce_objective(const Matrix& costs) {
  const Eigen::Index m = costs.rows();
  const Eigen::Index n = costs.cols();
  if (m < 2 || n < 2) throw Error(ErrorKind::kShape, "cost matrix must be at least 2x2");
  ReducedObjective out;
  out.ctilde.resize(m - 1, n - 1);
  for (Eigen::Index i = 1; i < m; ++i) {
    for (Eigen::Index j = 1; j < n; ++j) {
      out.ctilde(i - 1, j - 1) = -(costs(0, 0) - costs(i, 0) - costs(0, j) + costs(i, j));
    }
  }
  out.first_column = costs.col(0);
  out.first_row = costs.row(0).transpose();
  return out;
}

ReducedObjective reduce_objective(const TransportInstance& instance) {
  return reduce_objective(instance.costs());
}

Unlv unlv(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorKind::kZeroVector, "cannot normalize a zero or non-finite vector");
  }
  Unlv u;
  u.e_ = v / norm;
  return u;
}

Matrix constraint_matrix(int m, int n) {
  if (m < 2 || n < 2) throw Error(ErrorKind::kShape, "dimensions must be at least 2x2");
  const int d = free_dim(m, n);
  Matrix lhs = Matrix::Zero(1 + (m - 1) + (n - 1) + d, d);
  int row = 0;
  lhs.row(row++).setConstant(-1.0);
  for (int i = 1; i < m; ++i, ++row) {
    for (int j = 1; j < n; ++j) lhs(row, free_index(n, i, j)) = 1.0;
  }
  for (int j = 1; j < n; ++j, ++row) {
    for (int i = 1; i < m; ++i) lhs(row, free_index(n, i, j)) = 1.0;
  }
  for (int k = 0; k < d; ++k, ++row) lhs(row, k) = -1.0;
  return lhs;
}

ReducedLpp build_constraints(const Dms& dms) {
  const int m = dms.m();
  const int n = dms.n();
  ReducedLpp lpp;
  lpp.m = m;
  lpp.n = n;
  lpp.lhs = constraint_matrix(m, n);
  lpp.rhs = Vector::Zero(lpp.lhs.rows());
  const Vector& a = dms.supply();
  const Vector& b = dms.demand();
  int row = 0;
  lpp.rhs[row++] = a[0] - b.tail(n - 1).sum();
  for (int i = 1; i < m; ++i) lpp.rhs[row++] = a[i];
  for (int j = 1; j < n; ++j) lpp.rhs[row++] = b[j];
  return lpp;
}

TransportPlan reconstruct_plan(const Dms& dms, const Vector& free_vars, double tol) {
  const int m = dms.m();
  const int n = dms.n();
  if (free_vars.size() != free_dim(m, n)) {
    std::ostringstream os;
    os << "expected " << free_dim(m, n) << " free variables, got " << free_vars.size();
    throw Error(ErrorKind::kShape, os.str());
  }
  const Vector& a = dms.supply();
  const Vector& b = dms.demand();
  TransportPlan plan;
  plan.x = Matrix::Zero(m, n);
  Matrix& x = plan.x;
  x.bottomRightCorner(m - 1, n - 1) = free_vector_to_matrix(free_vars, m, n);
  x(0, 0) = a[0] - b.tail(n - 1).sum() + free_vars.sum();
  for (int i = 1; i < m; ++i) x(i, 0) = a[i] - x.row(i).tail(n - 1).sum();
  for (int j = 1; j < n; ++j) x(0, j) = b[j] - x.col(j).tail(m - 1).sum();

  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (x(i, j) < -tol) {
        std::ostringstream os;
        os << "x" << i + 1 << j + 1 << " = " << x(i, j) << " is negative";
        throw Error(ErrorKind::kInfeasibleFreeVars, os.str());
      }
    }
  }
  return plan;
}

Vector free_vars_of(const TransportPlan& plan) {
  const Eigen::Index m = plan.x.rows();
  const Eigen::Index n = plan.x.cols();
  return free_matrix_to_vector(plan.x.bottomRightCorner(m - 1, n - 1));
}

double reduced_value(const ReducedObjective& objective, const Dms& dms, const Vector& free_vars) {
  const Vector c = objective.coefficients();
  if (c.size() != free_vars.size()) {
    throw Error(ErrorKind::kShape, "free-variable vector does not match the objective");
  }
  return objective.constant(dms) + c.dot(free_vars);
}

Matrix representative_costs(const Matrix& ctilde) {
  Matrix costs = Matrix::Zero(ctilde.rows() + 1, ctilde.cols() + 1);
  costs.bottomRightCorner(ctilde.rows(), ctilde.cols()) = -ctilde;
  return costs;
}

Matrix free_vector_to_matrix(const Vector& v, int m, int n) {
  Matrix out(m - 1, n - 1);
  for (int i = 0; i < m - 1; ++i) {
    for (int j = 0; j < n - 1; ++j) out(i, j) = v[i * (n - 1) + j];
  }
  return out;
}

Vector free_matrix_to_vector(const Matrix& x) {
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out[i * x.cols() + j] = x(i, j);
  }
  return out;
}

}  // namespace revtp
