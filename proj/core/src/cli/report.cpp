#include <algorithm>
#include <cstdio>

#include "stamp/cli/run.hpp"

namespace stamp::cli {

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

RunSummary summarize(const std::string& name, const std::vector<CsvRow>& rows) {
  RunSummary s;
  s.name = name;
  if (rows.empty()) return s;
  s.total_s = rows.back().elapsed_s;
  s.final_mass = rows.back().mass;
  for (const auto& r : rows) {
    if (r.mass >= 0.8 - 1e-12) {
      s.t80_s = r.elapsed_s;
      break;
    }
  }
  if (s.t80_s && s.total_s > 0.0) s.fraction = *s.t80_s / s.total_s;
  return s;
}

Report aggregate(std::vector<RunSummary> runs) {
  Report r;
  r.runs = std::move(runs);
  std::vector<double> totals, t80s, fractions;
  for (const auto& s : r.runs) {
    totals.push_back(s.total_s);
    if (s.t80_s) {
      t80s.push_back(*s.t80_s);
      fractions.push_back(s.fraction);
    }
  }
  r.median_total_s = median(totals);
  if (!t80s.empty()) {
    r.median_t80_s = median(t80s);
    r.median_fraction = median(fractions);
  }
  return r;
}

std::string format_report(const Report& report) {
  std::string out = "run,total_s,t80_s,fraction,final_mass\n";
  char buf[512];
  auto opt = [](const std::optional<double>& v) {
    if (!v) return std::string("NA");
    char b[64];
    std::snprintf(b, sizeof b, "%.6f", *v);
    return std::string(b);
  };
  for (const auto& s : report.runs) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%s,%s,%.6f\n", s.name.c_str(), s.total_s, opt(s.t80_s).c_str(),
                  s.t80_s ? opt(s.fraction).c_str() : "NA", s.final_mass);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "median,%.6f,%s,%s,\n", report.median_total_s, opt(report.median_t80_s).c_str(),
                opt(report.median_fraction).c_str());
  out += buf;
  return out;
}

} // namespace stamp::cli
