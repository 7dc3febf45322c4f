#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "revtp/estimator.hpp"
#include "revtp/lp.hpp"
#include "revtp/spectrum.hpp"

namespace revtp {

using Json = nlohmann::json;

// Split one CSV record; double quotes group fields containing commas.
std::vector<std::string> split_csv_line(std::string_view line);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);  // array of rows
Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);

// {"costs": [[...]], "supply": [...], "demand": [...]}
TransportInstance instance_from_json(const Json& j);
Json to_json(const TransportInstance& instance);
TransportInstance load_instance(const std::filesystem::path& path);

// {"supply": [...], "demand": [...]}
Dms dms_from_json(const Json& j);
Json to_json(const Dms& dms);

Json to_json(const ReducedLpp& lpp);
Json to_json(const Vertex& vertex);
Json to_json(const Solution& solution);
Json to_json(const TrClassification& tr);
Json to_json(const Observation& observation);

/// [{"step": k, "e": [...], "sums": [...]}, ...]; "e" is null where the sums
/// cancelled.
Json estimate_json(const EstimateState& state);

struct DmsLogRow {
  std::string step;
  Dms dms;
};

// Header: step,a1,...,am,b1,...,bn
std::vector<DmsLogRow> read_dms_csv(std::istream& in);
void write_dms_csv(std::ostream& out, const std::vector<DmsLogRow>& rows);

struct ObservationLogRow {
  std::string step;
  Dms dms;
  Vector free_vars;
};

// Header: step,a1..am,b1..bn followed by either the free cells (x22,x23 or
// x_2_2 style, i,j >= 2) or the full plan (x_1_1 ... x_m_n or x11...).
std::vector<ObservationLogRow> read_observation_csv(std::istream& in);

std::string format_number(double v);

}  // namespace revtp
