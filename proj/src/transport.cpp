#include "revtp/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "revtp/error.hpp"

namespace revtp {

namespace {

bool all_integral(const Vector& v) {
  for (double x : v) {
    if (x != std::floor(x)) return false;
  }
  return true;
}

void require_positive(const Vector& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] <= 0.0) {
      std::ostringstream os;
      os << what << "[" << i + 1 << "] = " << v[i] << " must be finite and strictly positive";
      throw Error(ErrorKind::kDomain, os.str());
    }
  }
}

}  // namespace

Dms make_dms(Vector supply, Vector demand) {
  if (supply.size() < 2 || demand.size() < 2) {
    std::ostringstream os;
    os << "need at least 2 departure and 2 destination points, got " << supply.size() << "x"
       << demand.size();
    throw Error(ErrorKind::kShape, os.str());
  }
  require_positive(supply, "supply");
  require_positive(demand, "demand");

  const double total_supply = supply.sum();
  const double total_demand = demand.sum();
  const bool exact = all_integral(supply) && all_integral(demand);
  const double gap = std::abs(total_supply - total_demand);
  if ((exact && gap != 0.0) ||
      (!exact && gap > kBalanceTolerance * std::max(1.0, total_supply))) {
    std::ostringstream os;
    os << "supply total " << total_supply << " != demand total " << total_demand;
    throw Error(ErrorKind::kBalance, os.str());
  }

  Dms dms;
  dms.supply_ = std::move(supply);
  dms.demand_ = std::move(demand);
  return dms;
}

TransportInstance validate_instance(Matrix costs, Vector supply, Vector demand) {
  if (costs.rows() != supply.size() || costs.cols() != demand.size()) {
    std::ostringstream os;
    os << "cost matrix is " << costs.rows() << "x" << costs.cols() << " but supply/demand are "
       << supply.size() << "/" << demand.size();
    throw Error(ErrorKind::kShape, os.str());
  }
  if (!costs.allFinite()) throw Error(ErrorKind::kDomain, "cost matrix has non-finite entries");

  TransportInstance instance;
  instance.situation_ = make_dms(std::move(supply), std::move(demand));
  instance.costs_ = std::move(costs);
  return instance;
}

PlanCost plan_cost(const Matrix& costs, const TransportPlan& plan) {
  if (costs.rows() != plan.x.rows() || costs.cols() != plan.x.cols()) {
    throw Error(ErrorKind::kShape, "plan shape does not match the cost matrix");
  }
  const double norm = costs.norm();
  if (norm == 0.0) throw Error(ErrorKind::kDegenerateCosts, "all costs are zero");
  PlanCost cost;
  cost.raw = costs.cwiseProduct(plan.x).sum();
  cost.normalized = cost.raw / norm;
  return cost;
}

PlanCost plan_cost(const TransportInstance& instance, const TransportPlan& plan) {
  return plan_cost(instance.costs(), plan);
}

FeasibilityReport check_feasible(const TransportPlan& plan, const Dms& dms, double tol) {
  FeasibilityReport report;
  const Matrix& x = plan.x;
  if (x.rows() != dms.m() || x.cols() != dms.n()) {
    throw Error(ErrorKind::kShape, "plan shape does not match the situation");
  }
  for (int i = 0; i < dms.m(); ++i) {
    const double residual = x.row(i).sum() - dms.supply()[i];
    if (std::abs(residual) > tol) {
      report.violations.push_back({ViolationKind::kSupplyRow, i, -1, residual});
    }
  }
  for (int j = 0; j < dms.n(); ++j) {
    const double residual = x.col(j).sum() - dms.demand()[j];
    if (std::abs(residual) > tol) {
      report.violations.push_back({ViolationKind::kDemandColumn, -1, j, residual});
    }
  }
  for (int i = 0; i < dms.m(); ++i) {
    for (int j = 0; j < dms.n(); ++j) {
      if (x(i, j) < -tol) {
        report.violations.push_back({ViolationKind::kNonnegativity, i, j, x(i, j)});
      }
    }
  }
  return report;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kSupplyRow: return "supply-row";
    case ViolationKind::kDemandColumn: return "demand-column";
    case ViolationKind::kNonnegativity: return "nonnegativity";
  }
  return "unknown";
}

}  // namespace revtp
