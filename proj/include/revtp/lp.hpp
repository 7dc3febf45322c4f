#pragma once

#include <vector>

#include "revtp/reduction.hpp"

namespace revtp {

// Absolute residual (scaled by max(1, |rhs|)) under which a constraint counts
// as tight.
inline constexpr double kTightTolerance = 1e-9;

struct Vertex {
  Vector point;
  std::vector<int> active_set;  // 1-based constraint labels tight at point, ascending
};

struct Solution {
  Vertex vertex;
  // The constraints that define the reported optimum. For two free variables
  // this is the adjacent pair (two constraints with an incident edge of
  // positive length); in general it is a set of dim() linearly independent
  // tight constraints.
  std::vector<int> active_pair;
  double value = 0.0;
};

std::vector<int> tight_constraints(const ReducedLpp& lpp, const Vector& point,
                                   double tol = kTightTolerance);
bool is_feasible(const ReducedLpp& lpp, const Vector& point, double tol = kTightTolerance);

/// All vertices of the tolerance region, deduplicated. With two free
/// variables they are ordered counterclockwise around the region's centroid;
/// with one, ascending. Higher dimensions are enumerated by brute force over
/// constraint subsets (desk-scale only).
/// Throws EmptyRegion.
std::vector<Vertex> enumerate_vertices(const ReducedLpp& lpp, double tol = kTightTolerance);

/// Maximizes objective . x. Ties go to the lexicographically smallest point.
/// Uses vertex enumeration for two free variables and solve_simplex otherwise.
/// Throws DegenerateObjective, DimensionMismatch, EmptyRegion, Unbounded.
Solution solve_max(const ReducedLpp& lpp, const Vector& objective);

/// Throws DegenerateVertex (fewer tight constraints than dimensions) and
/// DegenerateRegion (the region collapses so no adjacent pair exists).
std::vector<int> active_pair_at(const Vertex& vertex, const ReducedLpp& lpp,
                                double tol = kTightTolerance);

/// Two-phase tableau simplex with Bland's rule; same contract as solve_max.
Solution solve_simplex(const ReducedLpp& lpp, const Vector& objective);

bool parallel_rows(const ReducedLpp& lpp, int label_a, int label_b);

}  // namespace revtp
