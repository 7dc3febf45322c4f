#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "revtp/reduction.hpp"

namespace revtp {

using ConstraintPair = std::array<int, 2>;  // 1-based labels, ascending

/// Geometry of two constraint normals meeting at a vertex.
struct SpectrumPair {
  ConstraintPair pair{};
  double angle = 0.0;  // between the two unit normals, radians
  Vector sum_unlv;     // observation direction: normalized sum of the two normals
  double sum_length = 0.0;  // = 2 cos(angle / 2)
  int rank = 0;             // 1 = least informative
  double weight = 0.0;      // = 1 - sin(angle / 2)
};

struct TrClassification {
  std::vector<int> active_constraints;  // labels contributing an edge of positive length
  std::vector<int> vertex_ranks;        // ascending
  int general_rank = 0;
  double average_rank = 0.0;
  double average_weight = 0.0;
  std::optional<int> type_id;   // 2x3 catalogue row, 1..18
  std::optional<int> group_id;  // 2x3 catalogue group, 1..9
};

/// One row of the 2x3 informativeness catalogue.
struct CatalogueRow {
  int type_id = 0;
  int picture = 0;  // drawing number in the reference catalogue
  std::vector<int> active_constraints;
  std::vector<int> vertex_ranks;
  int general_rank = 0;
  double average_rank = 0.0;
  double average_weight = 0.0;
  int group_id = 0;
};

// Unit normals of the reduced constraint rows, same order as constraint_matrix.
std::vector<Unlv> constraint_unlvs(int m, int n);

std::vector<ConstraintPair> parallel_pairs(int m, int n);
std::vector<ConstraintPair> nonparallel_pairs(int m, int n);

// Throws ParallelPair, ShapeError (label out of range).
SpectrumPair pair_info(ConstraintPair pair, int m, int n);

/// Rank-to-weight map: weight for each rank 1..R, where ranks number the
/// distinct pair angles from widest (rank 1) to narrowest.
std::vector<double> rank_weights(int m, int n);

/// Observation direction and weight for a vertex defined by k >= 2 active
/// constraints: direction = normalized sum of their normals (length L), weight
/// = 1 - sqrt(1 - (L/k)^2). For k = 2 this equals pair_info. The k > 2 case
/// is experimental.
struct ObservationDirection {
  Vector direction;
  double weight = 0.0;
};
ObservationDirection observation_direction(const std::vector<int>& active, int m, int n);

// Throws DegenerateRegion when the region is a segment or a point.
TrClassification classify_tr(const Dms& dms);

/// Situation whose region is tangent to the circle of radius rho centred at
/// (rho, rho): every constraint contributes an edge. 2x3 only.
/// Throws UnsupportedDimension, DomainError.
Dms polygon_dms(int m, int n, double rho);

/// Observation directions at the vertices of the polygon region, in
/// counterclockwise order.
std::vector<Vector> polygon_observation_vectors(int m, int n);

/// The 18 region configurations of the 2x3 problem with their
/// informativeness indices computed from the spectrum. Throws
/// UnsupportedDimension for other shapes.
std::vector<CatalogueRow> informativeness_report(int m, int n);

std::string catalogue_csv(const std::vector<CatalogueRow>& rows);

}  // namespace revtp
