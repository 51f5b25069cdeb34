#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "stamp/cli/run.hpp"
#include "stamp/domains/builtin.hpp"

namespace stamp::cli {

refine::AtmOptions RunConfig::atm_options() const {
  refine::AtmOptions o;
  o.deadline_s = deadline_s;
  o.explore_prob = explore_prob;
  o.horizon_cap = horizon_cap;
  o.seed = seed;
  o.virtual_clock = virtual_clock;
  o.seconds_per_unit = seconds_per_unit;
  return o;
}

domains::StamppProblem load_problem(const RunConfig& config) {
  if (config.domain_path.has_value() == config.builtin.has_value()) {
    throw CliError("exactly one of --domain and --builtin is required");
  }
  if (config.domain_path) return domains::load_problem_file(*config.domain_path);
  return domains::build_problem(domains::builtin_spec(*config.builtin, config.builtin_params));
}

std::vector<CsvRow> csv_rows(const refine::AtmResult& result) {
  std::vector<CsvRow> rows;
  for (const auto& s : result.snapshots) rows.push_back({s.elapsed_s, s.work_units, s.paths_refined, s.mass});
  return rows;
}

std::string write_csv(const std::vector<CsvRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%lld,%d,%.6f\n", r.elapsed_s, r.work_units, r.paths_refined, r.mass);
    out += buf;
  }
  return out;
}

namespace {

double to_real(const std::string& field, int line) {
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(field.c_str(), &end);
  if (field.empty() || errno != 0 || *end != '\0') {
    throw CliError("line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

} // namespace

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (n == 1) {
      if (line != kCsvHeader) throw CliError("line 1: expected header '" + std::string(kCsvHeader) + "'");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 4) throw CliError("line " + std::to_string(n) + ": expected 4 fields");
    CsvRow r;
    r.elapsed_s = to_real(fields[0], n);
    r.work_units = static_cast<long long>(to_real(fields[1], n));
    r.paths_refined = static_cast<int>(to_real(fields[2], n));
    r.mass = to_real(fields[3], n);
    if (r.mass < 0.0 || r.mass > 1.0 + 1e-9) throw CliError("line " + std::to_string(n) + ": mass outside [0, 1]");
    rows.push_back(r);
  }
  if (n == 0) throw CliError("empty CSV");
  return rows;
}

} // namespace stamp::cli
