#include "revtp/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "revtp/error.hpp"
#include "revtp/lp.hpp"

namespace revtp {

namespace {

constexpr double kAngleTolerance = 1e-9;

struct CatalogueEntry {
  int type_id;
  int picture;
  std::vector<int> active;
  int group_id;
};

// Region configurations of the 2x3 problem (figure numbers and group
// assignment as catalogued). The indices themselves are computed, not stored.
const std::vector<CatalogueEntry>& catalogue_2x3() {
  static const std::vector<CatalogueEntry> entries = {
      {1, 3, {1, 2, 5, 6}, 5},     {2, 4, {1, 2, 4, 5, 6}, 7},  {3, 5, {1, 2, 4, 6}, 4},
      {4, 6, {1, 2, 3, 5, 6}, 7},  {5, 7, {1, 2, 3, 4, 5, 6}, 9}, {6, 8, {1, 3, 4, 5, 6}, 8},
      {7, 9, {1, 3, 4, 6}, 3},     {8, 10, {1, 2, 3, 4, 6}, 6}, {9, 11, {1, 2, 3, 5}, 4},
      {10, 12, {1, 3, 4, 5}, 3},   {11, 13, {1, 2, 3, 4, 5}, 6}, {12, 14, {1, 3, 4}, 1},
      {13, 15, {1, 2, 3, 4}, 5},   {14, 16, {2, 5, 6}, 1},      {15, 17, {2, 4, 5, 6}, 3},
      {16, 18, {2, 3, 4, 5, 6}, 8}, {17, 19, {2, 3, 5, 6}, 3},  {18, 20, {3, 4, 5, 6}, 2},
  };
  return entries;
}

// Angle between unit vectors; stays accurate near 0 and pi, where acos of the
// dot product loses half its digits.
double pair_angle(const Vector& a, const Vector& b) {
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

bool is_parallel_angle(double angle) {
  return angle <= kAngleTolerance || angle >= M_PI - kAngleTolerance;
}

// Distinct non-parallel pair angles, widest first.
std::vector<double> distinct_angles(int m, int n) {
  const auto normals = constraint_unlvs(m, n);
  std::vector<double> angles;
  for (size_t p = 0; p < normals.size(); ++p) {
    for (size_t q = p + 1; q < normals.size(); ++q) {
      const double angle = pair_angle(normals[p].e(), normals[q].e());
      if (is_parallel_angle(angle)) continue;
      const bool seen = std::any_of(angles.begin(), angles.end(), [&](double a) {
        return std::abs(a - angle) <= kAngleTolerance;
      });
      if (!seen) angles.push_back(angle);
    }
  }
  std::sort(angles.begin(), angles.end(), std::greater<>());
  return angles;
}

void check_label(int label, int rows) {
  if (label < 1 || label > rows) {
    std::ostringstream os;
    os << "constraint label " << label << " outside 1.." << rows;
    throw Error(ErrorKind::kShape, os.str());
  }
}

int affine_rank(const std::vector<Vector>& points) {
  if (points.size() < 2) return 0;
  Matrix diffs(points.size() - 1, points.front().size());
  for (size_t k = 1; k < points.size(); ++k) {
    diffs.row(k - 1) = (points[k] - points.front()).transpose();
  }
  Eigen::FullPivLU<Matrix> lu(diffs);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

template <typename T>
double mean_of(const std::vector<T>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::vector<Unlv> constraint_unlvs(int m, int n) {
  const Matrix lhs = constraint_matrix(m, n);
  std::vector<Unlv> out;
  out.reserve(lhs.rows());
  for (Eigen::Index k = 0; k < lhs.rows(); ++k) out.push_back(unlv(lhs.row(k).transpose()));
  return out;
}

std::vector<ConstraintPair> parallel_pairs(int m, int n) {
  const auto normals = constraint_unlvs(m, n);
  std::vector<ConstraintPair> out;
  for (size_t p = 0; p < normals.size(); ++p) {
    for (size_t q = p + 1; q < normals.size(); ++q) {
      if (is_parallel_angle(pair_angle(normals[p].e(), normals[q].e()))) {
        out.push_back({static_cast<int>(p + 1), static_cast<int>(q + 1)});
      }
    }
  }
  return out;
}

std::vector<ConstraintPair> nonparallel_pairs(int m, int n) {
  const auto normals = constraint_unlvs(m, n);
  std::vector<ConstraintPair> out;
  for (size_t p = 0; p < normals.size(); ++p) {
    for (size_t q = p + 1; q < normals.size(); ++q) {
      if (!is_parallel_angle(pair_angle(normals[p].e(), normals[q].e()))) {
        out.push_back({static_cast<int>(p + 1), static_cast<int>(q + 1)});
      }
    }
  }
  return out;
}

SpectrumPair pair_info(ConstraintPair pair, int m, int n) {
  const auto normals = constraint_unlvs(m, n);
  const int rows = static_cast<int>(normals.size());
  check_label(pair[0], rows);
  check_label(pair[1], rows);
  if (pair[0] > pair[1]) std::swap(pair[0], pair[1]);

  const Vector& a = normals[pair[0] - 1].e();
  const Vector& b = normals[pair[1] - 1].e();
  SpectrumPair info;
  info.pair = pair;
  info.angle = pair_angle(a, b);
  if (pair[0] == pair[1] || is_parallel_angle(info.angle)) {
    std::ostringstream os;
    os << "constraints " << pair[0] << " and " << pair[1] << " are parallel";
    throw Error(ErrorKind::kParallelPair, os.str());
  }
  const Vector sum = a + b;
  info.sum_length = sum.norm();
  info.sum_unlv = sum / info.sum_length;
  info.weight = 1.0 - std::sin(info.angle / 2.0);

  const auto angles = distinct_angles(m, n);
  for (size_t r = 0; r < angles.size(); ++r) {
    if (std::abs(angles[r] - info.angle) <= kAngleTolerance) {
      info.rank = static_cast<int>(r + 1);
      break;
    }
  }
  return info;
}

std::vector<double> rank_weights(int m, int n) {
  std::vector<double> out;
  for (double angle : distinct_angles(m, n)) out.push_back(1.0 - std::sin(angle / 2.0));
  return out;
}

ObservationDirection observation_direction(const std::vector<int>& active, int m, int n) {
  if (active.size() == 2) {
    const SpectrumPair info = pair_info({active[0], active[1]}, m, n);
    return {info.sum_unlv, info.weight};
  }
  if (active.size() < 2) {
    throw Error(ErrorKind::kDegenerateVertex, "need at least two active constraints");
  }
  const auto normals = constraint_unlvs(m, n);
  Vector sum = Vector::Zero(normals.front().dim());
  for (int label : active) {
    check_label(label, static_cast<int>(normals.size()));
    sum += normals[label - 1].e();
  }
  const double length = sum.norm();
  if (length == 0.0) throw Error(ErrorKind::kZeroVector, "active normals cancel out");
  const double ratio = length / static_cast<double>(active.size());
  return {sum / length, 1.0 - std::sqrt(std::max(0.0, 1.0 - ratio * ratio))};
}

TrClassification classify_tr(const Dms& dms) {
  const ReducedLpp lpp = build_constraints(dms);
  const int d = lpp.dim();
  const std::vector<Vertex> vertices = enumerate_vertices(lpp);

  std::vector<Vector> points;
  for (const auto& v : vertices) points.push_back(v.point);
  if (affine_rank(points) < d) {
    throw Error(ErrorKind::kDegenerateRegion, "region has empty interior");
  }

  TrClassification out;
  for (int label = 1; label <= lpp.rows(); ++label) {
    std::vector<Vector> on_face;
    for (const auto& v : vertices) {
      if (std::binary_search(v.active_set.begin(), v.active_set.end(), label)) {
        on_face.push_back(v.point);
      }
    }
    if (static_cast<int>(on_face.size()) >= d && affine_rank(on_face) >= d - 1) {
      out.active_constraints.push_back(label);
    }
  }
  if (d != 2) return out;

  std::vector<double> weights;
  for (const auto& v : vertices) {
    const std::vector<int> pair = active_pair_at(v, lpp);
    const SpectrumPair info = pair_info({pair[0], pair[1]}, dms.m(), dms.n());
    out.vertex_ranks.push_back(info.rank);
    weights.push_back(info.weight);
  }
  std::sort(out.vertex_ranks.begin(), out.vertex_ranks.end());
  out.general_rank = std::accumulate(out.vertex_ranks.begin(), out.vertex_ranks.end(), 0);
  out.average_rank = mean_of(out.vertex_ranks);
  out.average_weight = mean_of(weights);

  if (dms.m() == 2 && dms.n() == 3) {
    for (const auto& entry : catalogue_2x3()) {
      if (entry.active == out.active_constraints) {
        out.type_id = entry.type_id;
        out.group_id = entry.group_id;
        break;
      }
    }
  }
  return out;
}

Dms polygon_dms(int m, int n, double rho) {
  if (m != 2 || n != 3) {
    throw Error(ErrorKind::kUnsupportedDimension, "polygon construction is defined for 2x3 only");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorKind::kDomain, "polygon radius must be positive");
  }
  // Lines x22 = 0, x23 = 0, x22 = b2, x23 = b3 and the two diagonals all sit
  // at distance rho from (rho, rho).
  const double diagonal = (2.0 + std::sqrt(2.0)) * rho;
  Vector a(2);
  a << diagonal, diagonal;
  Vector b(3);
  b << a.sum() - 4.0 * rho, 2.0 * rho, 2.0 * rho;
  return make_dms(a, b);
}

std::vector<Vector> polygon_observation_vectors(int m, int n) {
  const Dms dms = polygon_dms(m, n, 1.0);
  const ReducedLpp lpp = build_constraints(dms);
  std::vector<Vector> out;
  for (const auto& v : enumerate_vertices(lpp)) {
    const std::vector<int> pair = active_pair_at(v, lpp);
    out.push_back(pair_info({pair[0], pair[1]}, m, n).sum_unlv);
  }
  return out;
}

std::vector<CatalogueRow> informativeness_report(int m, int n) {
  if (m != 2 || n != 3) {
    throw Error(ErrorKind::kUnsupportedDimension, "the configuration catalogue is 2x3 only");
  }
  const auto normals = constraint_unlvs(m, n);
  std::vector<CatalogueRow> rows;
  for (const auto& entry : catalogue_2x3()) {
    // Edges of a convex polygon appear in the angular order of their outward
    // normals; consecutive edges meet at a vertex.
    std::vector<int> cyclic = entry.active;
    std::sort(cyclic.begin(), cyclic.end(), [&](int p, int q) {
      const Vector& a = normals[p - 1].e();
      const Vector& b = normals[q - 1].e();
      return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
    });
    CatalogueRow row;
    row.type_id = entry.type_id;
    row.picture = entry.picture;
    row.active_constraints = entry.active;
    row.group_id = entry.group_id;
    std::vector<double> weights;
    for (size_t k = 0; k < cyclic.size(); ++k) {
      const SpectrumPair info = pair_info({cyclic[k], cyclic[(k + 1) % cyclic.size()]}, m, n);
      row.vertex_ranks.push_back(info.rank);
      weights.push_back(info.weight);
    }
    std::sort(row.vertex_ranks.begin(), row.vertex_ranks.end());
    row.general_rank = std::accumulate(row.vertex_ranks.begin(), row.vertex_ranks.end(), 0);
    row.average_rank = mean_of(row.vertex_ranks);
    row.average_weight = mean_of(weights);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string catalogue_csv(const std::vector<CatalogueRow>& rows) {
  auto join = [](const std::vector<int>& v) {
    std::ostringstream os;
    for (size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
    return os.str();
  };
  std::ostringstream os;
  os << "type_id,picture,quantity,active_constraints,vertex_ranks,general_rank,average_rank,"
        "average_weight,group_id\n";
  os.precision(17);
  for (const auto& r : rows) {
    os << r.type_id << ',' << r.picture << ',' << r.active_constraints.size() << ",\""
       << join(r.active_constraints) << "\",\"" << join(r.vertex_ranks) << "\","
       << r.general_rank << ',' << r.average_rank << ',' << r.average_weight << ','
       << r.group_id << '\n';
  }
  return os.str();
}

}  // namespace revtp
