#include "revtp/io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "revtp/error.hpp"

namespace revtp {

namespace {

double parse_double(const std::string& field, const std::string& column) {
  try {
    size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::kParse, "column '" + column + "': cannot parse '" + field + "'");
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

struct Header {
  std::vector<std::string> names;
  std::map<std::string, size_t> index;
  int m = 0;
  int n = 0;
};

Header read_header(std::istream& in) {
  std::string line;
  while (std::getline(in, line) && trim(line).empty()) {
  }
  if (trim(line).empty()) throw Error(ErrorKind::kParse, "missing CSV header");
  Header h;
  for (auto& f : split_csv_line(line)) {
    const std::string name = trim(f);
    h.index[name] = h.names.size();
    h.names.push_back(name);
  }
  if (!h.index.count("step")) throw Error(ErrorKind::kParse, "header lacks a 'step' column");
  while (h.index.count("a" + std::to_string(h.m + 1))) ++h.m;
  while (h.index.count("b" + std::to_string(h.n + 1))) ++h.n;
  if (h.m < 2 || h.n < 2) {
    throw Error(ErrorKind::kParse, "header needs columns a1..am and b1..bn with m, n >= 2");
  }
  return h;
}

// Column holding plan cell (i, j) (1-based), if any.
std::optional<size_t> cell_column(const Header& h, int i, int j) {
  if (auto it = h.index.find("x_" + std::to_string(i) + "_" + std::to_string(j));
      it != h.index.end()) {
    return it->second;
  }
  if (i < 10 && j < 10) {
    if (auto it = h.index.find("x" + std::to_string(i) + std::to_string(j));
        it != h.index.end()) {
      return it->second;
    }
  }
  return std::nullopt;
}

Dms row_dms(const Header& h, const std::vector<std::string>& fields) {
  Vector a(h.m);
  Vector b(h.n);
  for (int i = 0; i < h.m; ++i) {
    const std::string col = "a" + std::to_string(i + 1);
    a[i] = parse_double(trim(fields.at(h.index.at(col))), col);
  }
  for (int j = 0; j < h.n; ++j) {
    const std::string col = "b" + std::to_string(j + 1);
    b[j] = parse_double(trim(fields.at(h.index.at(col))), col);
  }
  return make_dms(a, b);
}

template <typename RowFn>
void for_each_record(std::istream& in, const Header& h, RowFn fn) {
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() < h.names.size()) {
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + " has too few fields");
    }
    fn(fields);
  }
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r' && ch != '\n') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

Json to_json(const Vector& v) {
  Json j = Json::array();
  for (double x : v) j.push_back(x);
  return j;
}

Json to_json(const Matrix& m) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    j.push_back(std::move(row));
  }
  return j;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::kParse, "expected a numeric array");
  Vector v(j.size());
  for (size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw Error(ErrorKind::kParse, "expected a numeric array");
    v[k] = j[k].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw Error(ErrorKind::kParse, "expected a non-empty array of rows");
  }
  Matrix m(j.size(), j[0].size());
  for (size_t i = 0; i < j.size(); ++i) {
    const Vector row = vector_from_json(j[i]);
    if (row.size() != m.cols()) throw Error(ErrorKind::kShape, "matrix rows differ in length");
    m.row(i) = row.transpose();
  }
  return m;
}

TransportInstance instance_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("costs") || !j.contains("supply") || !j.contains("demand")) {
    throw Error(ErrorKind::kParse, "instance needs 'costs', 'supply' and 'demand'");
  }
  return validate_instance(matrix_from_json(j["costs"]), vector_from_json(j["supply"]),
                           vector_from_json(j["demand"]));
}

Json to_json(const TransportInstance& instance) {
  return {{"costs", to_json(instance.costs())},
          {"supply", to_json(instance.supply())},
          {"demand", to_json(instance.demand())}};
}

TransportInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

Dms dms_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("supply") || !j.contains("demand")) {
    throw Error(ErrorKind::kParse, "situation needs 'supply' and 'demand'");
  }
  return make_dms(vector_from_json(j["supply"]), vector_from_json(j["demand"]));
}

Json to_json(const Dms& dms) {
  return {{"supply", to_json(dms.supply())}, {"demand", to_json(dms.demand())}};
}

Json to_json(const ReducedLpp& lpp) {
  return {{"m", lpp.m}, {"n", lpp.n}, {"dim", lpp.dim()},
          {"lhs", to_json(lpp.lhs)}, {"rhs", to_json(lpp.rhs)}};
}

Json to_json(const Vertex& vertex) {
  return {{"point", to_json(vertex.point)}, {"active_set", vertex.active_set}};
}

Json to_json(const Solution& solution) {
  return {{"vertex", to_json(solution.vertex)},
          {"active_pair", solution.active_pair},
          {"value", solution.value}};
}

Json to_json(const TrClassification& tr) {
  Json j = {{"active_constraints", tr.active_constraints},
            {"vertex_ranks", tr.vertex_ranks},
            {"general_rank", tr.general_rank},
            {"average_rank", tr.average_rank},
            {"average_weight", tr.average_weight}};
  j["type_id"] = tr.type_id ? Json(*tr.type_id) : Json(nullptr);
  j["group_id"] = tr.group_id ? Json(*tr.group_id) : Json(nullptr);
  return j;
}

Json to_json(const Observation& o) {
  Json j = {{"step", o.step},
            {"active_pair", o.active_pair},
            {"obs_unlv", to_json(o.obs_unlv)},
            {"weight", o.weight}};
  if (o.dms.m() > 0) j["dms"] = to_json(o.dms);
  if (o.chosen_free_vars.size() > 0) j["chosen_free_vars"] = to_json(o.chosen_free_vars);
  return j;
}

Json estimate_json(const EstimateState& state) {
  Json out = Json::array();
  for (const auto& h : state.history()) {
    out.push_back({{"step", h.step},
                   {"e", h.estimate ? to_json(*h.estimate) : Json(nullptr)},
                   {"sums", to_json(h.sums)}});
  }
  return out;
}

std::vector<DmsLogRow> read_dms_csv(std::istream& in) {
  const Header h = read_header(in);
  std::vector<DmsLogRow> rows;
  for_each_record(in, h, [&](const std::vector<std::string>& f) {
    rows.push_back({trim(f[h.index.at("step")]), row_dms(h, f)});
  });
  return rows;
}

void write_dms_csv(std::ostream& out, const std::vector<DmsLogRow>& rows) {
  if (rows.empty()) return;
  const int m = rows.front().dms.m();
  const int n = rows.front().dms.n();
  out << "step";
  for (int i = 1; i <= m; ++i) out << ",a" << i;
  for (int j = 1; j <= n; ++j) out << ",b" << j;
  out << '\n';
  for (const auto& r : rows) {
    out << r.step;
    for (double v : r.dms.supply()) out << ',' << format_number(v);
    for (double v : r.dms.demand()) out << ',' << format_number(v);
    out << '\n';
  }
}

std::vector<ObservationLogRow> read_observation_csv(std::istream& in) {
  const Header h = read_header(in);
  bool full_plan = false;
  for (int i = 1; i <= h.m && !full_plan; ++i) {
    for (int j = 1; j <= h.n; ++j) {
      if ((i == 1 || j == 1) && cell_column(h, i, j)) {
        full_plan = true;
        break;
      }
    }
  }
  const int first = full_plan ? 1 : 2;
  std::vector<std::vector<size_t>> columns(h.m + 1, std::vector<size_t>(h.n + 1));
  for (int i = first; i <= h.m; ++i) {
    for (int j = first; j <= h.n; ++j) {
      const auto col = cell_column(h, i, j);
      if (!col) {
        throw Error(ErrorKind::kParse, "missing plan column for cell (" + std::to_string(i) +
                                           "," + std::to_string(j) + ")");
      }
      columns[i][j] = *col;
    }
  }

  std::vector<ObservationLogRow> rows;
  for_each_record(in, h, [&](const std::vector<std::string>& f) {
    ObservationLogRow row{trim(f[h.index.at("step")]), row_dms(h, f), {}};
    if (full_plan) {
      TransportPlan plan{Matrix(h.m, h.n)};
      for (int i = 1; i <= h.m; ++i) {
        for (int j = 1; j <= h.n; ++j) {
          plan.x(i - 1, j - 1) = parse_double(trim(f[columns[i][j]]), h.names[columns[i][j]]);
        }
      }
      const FeasibilityReport report = check_feasible(plan, row.dms);
      if (!report.feasible()) {
        throw Error(ErrorKind::kInfeasibleFreeVars,
                    "step " + row.step + ": plan does not match the situation");
      }
      row.free_vars = free_vars_of(plan);
    } else {
      row.free_vars.resize(free_dim(h.m, h.n));
      for (int i = 2; i <= h.m; ++i) {
        for (int j = 2; j <= h.n; ++j) {
          row.free_vars[free_index(h.n, i - 1, j - 1)] =
              parse_double(trim(f[columns[i][j]]), h.names[columns[i][j]]);
        }
      }
    }
    rows.push_back(std::move(row));
  });
  return rows;
}

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::round(v) && std::abs(v) < 1e15) {
    std::ostringstream os;
    os << static_cast<long long>(v);
    return os.str();
  }
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace revtp
