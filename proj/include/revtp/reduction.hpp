#pragma once

#include "revtp/transport.hpp"

namespace revtp {

// Free variables are the interior cells x_ij, i = 2..m, j = 2..n, flattened
// row-major into a vector of length (m-1)(n-1). First-row and first-column
// cells are basic and are recovered from the balance equations.

inline int free_dim(int m, int n) { return (m - 1) * (n - 1); }

// 0-based position of the interior cell (i, j) (both 0-based, >= 1).
inline int free_index(int n, int i, int j) { return (i - 1) * (n - 1) + (j - 1); }

/// Coefficients of the maximized objective over the free variables, plus the
/// first-row/first-column costs needed to recover the situation-dependent
/// constant term.
struct ReducedObjective {
  Matrix ctilde;       // (m-1) x (n-1); ctilde(i-1, j-1) pairs with cell (i, j)
  Vector first_column; // c_i1, i = 1..m
  Vector first_row;    // c_1j, j = 1..n

  /// ctilde flattened row-major, i.e. the objective vector in free-variable space.
  Vector coefficients() const;

  /// Additive constant of the full reduced objective for the given situation.
  double constant(const Dms& dms) const;
};

/// Unit-length direction.
class Unlv {
 public:
  Unlv() = default;
  const Vector& e() const { return e_; }
  int dim() const { return static_cast<int>(e_.size()); }
  double operator[](int i) const { return e_[i]; }

 private:
  friend Unlv unlv(const Vector& v);
  Vector e_;
};

/// Inequality-form LP  lhs * x <= rhs  over the free variables.
///
/// Row order is fixed: the aggregate row (x_11 >= 0), supply rows i = 2..m
/// (x_i1 >= 0), demand rows j = 2..n (x_1j >= 0), then one nonnegativity row
/// per free variable. For 2x3 this is exactly
///   1: -x22 - x23 <= a1 - b2 - b3
///   2:  x22 + x23 <= a2
///   3:  x22       <= b2
///   4:        x23 <= b3
///   5: -x22       <= 0
///   6:       -x23 <= 0
/// Constraint labels elsewhere in the library are 1-based in this order.
struct ReducedLpp {
  int m = 0;
  int n = 0;
  Matrix lhs;
  Vector rhs;

  int dim() const { return static_cast<int>(lhs.cols()); }
  int rows() const { return static_cast<int>(lhs.rows()); }
};

ReducedObjective reduce_objective(const TransportInstance& instance);
ReducedObjective reduce_objective(const Matrix& costs);

// Throws ZeroVector.
Unlv unlv(const Vector& v);

// Depends only on (m, n).
Matrix constraint_matrix(int m, int n);

ReducedLpp build_constraints(const Dms& dms);

// Throws ShapeError, InfeasibleFreeVars.
TransportPlan reconstruct_plan(const Dms& dms, const Vector& free_vars, double tol = 1e-9);

// Free variables of a full plan (no feasibility check).
Vector free_vars_of(const TransportPlan& plan);

/// constant(dms) + ctilde . free_vars; equals minus the raw cost of the
/// reconstructed plan.
double reduced_value(const ReducedObjective& objective, const Dms& dms, const Vector& free_vars);

/// One member of the gauge class of cost matrices with the given ctilde: zero
/// first row and column, interior c_ij = -ctilde_ij. Costs are identifiable
/// only up to row and column potentials.
Matrix representative_costs(const Matrix& ctilde);

// Reshape a flattened free-variable vector to (m-1) x (n-1) and back.
Matrix free_vector_to_matrix(const Vector& v, int m, int n);
Vector free_matrix_to_vector(const Matrix& x);

}  // namespace revtp
