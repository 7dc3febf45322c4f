#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace revtp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kBalanceTolerance = 1e-9;

/// A decision-making situation: stocks at the departure points and inquiries
/// at the destinations. No costs are attached; this is what the decision
/// taker sees. Construct through make_dms(), which enforces positivity and
/// balance.
class Dms {
 public:
  Dms() = default;

  int m() const { return static_cast<int>(supply_.size()); }
  int n() const { return static_cast<int>(demand_.size()); }
  const Vector& supply() const { return supply_; }
  const Vector& demand() const { return demand_; }
  double total() const { return supply_.sum(); }

  bool operator==(const Dms& other) const {
    return supply_ == other.supply_ && demand_ == other.demand_;
  }

 private:
  friend Dms make_dms(Vector supply, Vector demand);
  Vector supply_;
  Vector demand_;
};

/// Balanced transportation problem: per-unit costs plus the situation.
class TransportInstance {
 public:
  TransportInstance() = default;

  int m() const { return situation_.m(); }
  int n() const { return situation_.n(); }
  const Matrix& costs() const { return costs_; }
  const Vector& supply() const { return situation_.supply(); }
  const Vector& demand() const { return situation_.demand(); }
  const Dms& situation() const { return situation_; }

 private:
  friend TransportInstance validate_instance(Matrix costs, Vector supply, Vector demand);
  Matrix costs_;
  Dms situation_;
};

struct TransportPlan {
  Matrix x;  // shipped quantities, m x n
};

struct PlanCost {
  double raw = 0.0;         // sum of c_ij * x_ij
  double normalized = 0.0;  // raw / Frobenius norm of the cost matrix
};

enum class ViolationKind { kSupplyRow, kDemandColumn, kNonnegativity };

struct Violation {
  ViolationKind kind;
  int row = -1;     // 0-based; -1 when not applicable
  int column = -1;  // 0-based; -1 when not applicable
  double residual = 0.0;  // signed: actual - required (for sums) or the negative entry
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool feasible() const { return violations.empty(); }
};

// Throws DomainError / BalanceError / ShapeError.
Dms make_dms(Vector supply, Vector demand);
TransportInstance validate_instance(Matrix costs, Vector supply, Vector demand);

// Throws ShapeError on mismatched shapes, DegenerateCosts for an all-zero
// cost matrix.
PlanCost plan_cost(const TransportInstance& instance, const TransportPlan& plan);
PlanCost plan_cost(const Matrix& costs, const TransportPlan& plan);

FeasibilityReport check_feasible(const TransportPlan& plan, const Dms& dms, double tol = 1e-9);

std::string to_string(ViolationKind kind);

}  // namespace revtp
