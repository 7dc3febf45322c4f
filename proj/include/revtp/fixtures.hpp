#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "revtp/spectrum.hpp"

namespace revtp {

/// A recorded decision: the chosen plan, its normalized cost and the two
/// constraints the record names as active.
struct DecisionRow {
  std::string step;
  Matrix plan;
  std::optional<double> normalized_cost;
  ConstraintPair pair{};
};

/// A recorded estimator step (3-decimal values).
struct TraceRow {
  std::string step;
  ConstraintPair pair{};
  Vector obs_unlv;
  std::optional<double> weight;
  std::optional<Vector> sums;
  Vector estimate;
};

/// Bundled 2x3 study data: modelling costs, 25 situations plus the polygon
/// control situation, the recorded decisions and the recorded estimator trace.
struct StudyFixture {
  TransportInstance modelling;
  std::vector<Dms> situations;
  Dms polygon;
  std::vector<DecisionRow> decisions;  // 25 rows, then the polygon row
  std::vector<TraceRow> trace;         // 25 rows, then the polygon row
};

/// $REVTP_FIXTURE_DIR if set, otherwise the data/fixtures directory of the
/// source tree.
std::filesystem::path default_fixture_dir();

/// Reads table3.json, table5.csv, table6.csv and table9.csv.
StudyFixture load_fixture(const std::filesystem::path& dir = default_fixture_dir());

// "1-4" -> {1, 4}
ConstraintPair parse_pair(const std::string& text);

}  // namespace revtp
