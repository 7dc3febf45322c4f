#include "revtp/fixtures.hpp"

#include <cstdlib>
#include <fstream>

#include "revtp/error.hpp"
#include "revtp/io.hpp"

#ifndef REVTP_FIXTURE_DIR
#define REVTP_FIXTURE_DIR "data/fixtures"
#endif

namespace revtp {

namespace {

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open fixture " + path.string());
  return in;
}

std::optional<double> optional_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

// Data rows of a fixture CSV; the header line is skipped.
std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path,
                                                size_t expected_columns) {
  std::ifstream in = open(path);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != expected_columns) {
      throw Error(ErrorKind::kParse, path.string() + ": malformed row '" + line + "'");
    }
    rows.push_back(std::move(f));
  }
  return rows;
}

}  // namespace

std::filesystem::path default_fixture_dir() {
  if (const char* env = std::getenv("REVTP_FIXTURE_DIR"); env && *env) return env;
  return REVTP_FIXTURE_DIR;
}

ConstraintPair parse_pair(const std::string& text) {
  const auto dash = text.find('-');
  if (dash == std::string::npos) throw Error(ErrorKind::kParse, "bad pair '" + text + "'");
  try {
    ConstraintPair p{std::stoi(text.substr(0, dash)), std::stoi(text.substr(dash + 1))};
    if (p[0] > p[1]) std::swap(p[0], p[1]);
    return p;
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::kParse, "bad pair '" + text + "'");
  }
}

StudyFixture load_fixture(const std::filesystem::path& dir) {
  StudyFixture fx;
  fx.modelling = load_instance(dir / "table3.json");

  {
    std::ifstream in = open(dir / "table5.csv");
    for (auto& row : read_dms_csv(in)) {
      if (row.step == "polygon") {
        fx.polygon = row.dms;
      } else {
        fx.situations.push_back(row.dms);
      }
    }
  }

  for (const auto& f : read_rows(dir / "table6.csv", 10)) {
    DecisionRow row;
    row.step = f[0];
    row.plan.resize(2, 3);
    for (int k = 0; k < 6; ++k) row.plan(k / 3, k % 3) = std::stod(f[1 + k]);
    row.normalized_cost = optional_number(f[7]);
    row.pair = {std::stoi(f[8]), std::stoi(f[9])};
    fx.decisions.push_back(std::move(row));
  }

  for (const auto& f : read_rows(dir / "table9.csv", 13)) {
    TraceRow row;
    row.step = f[0];
    row.pair = parse_pair(f[1]);
    row.obs_unlv = Vector(2);
    row.obs_unlv << std::stod(f[6]), std::stod(f[7]);
    row.weight = optional_number(f[8]);
    if (!f[9].empty()) {
      Vector sums(2);
      sums << std::stod(f[9]), std::stod(f[10]);
      row.sums = sums;
    }
    row.estimate = Vector(2);
    row.estimate << std::stod(f[11]), std::stod(f[12]);
    fx.trace.push_back(std::move(row));
  }
  return fx;
}

}  // namespace revtp
