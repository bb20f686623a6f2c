#include "pvthresh/csv_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "pvthresh/error.hpp"

namespace pvthresh {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

double parse_number(const std::string& field, const std::string& source, std::size_t line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw Error(ErrorCode::non_numeric, where(source, line) + ": non-numeric cell '" + field + "'");
  }
  return v;
}

}  // namespace

CsvData parse_csv(std::istream& in, const std::string& source) {
  CsvData csv;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (!have_header) {
      std::vector<std::string> names;
      for (const auto& f : fields) names.push_back(lower(f));
      const bool ok = (names.size() == 2 || names.size() == 3) && names[0] == "x" &&
                      (names[1] == "y" || names[1] == "z") &&
                      (names.size() == 2 || names[2] == "count");
      if (!ok) {
        throw Error(ErrorCode::parse_error,
                    where(source, line_no) + ": expected header x,y or x,y,count");
      }
      csv.value_column = names[1];
      csv.has_count = names.size() == 3;
      have_header = true;
      continue;
    }
    const std::size_t width = csv.has_count ? 3 : 2;
    if (fields.size() != width) {
      throw Error(ErrorCode::parse_error, where(source, line_no) + ": expected " +
                                              std::to_string(width) + " fields, found " +
                                              std::to_string(fields.size()));
    }
    CsvRow row;
    row.line = line_no;
    row.x = parse_number(fields[0], source, line_no);
    row.y = parse_number(fields[1], source, line_no);
    if (csv.has_count) row.count = parse_number(fields[2], source, line_no);
    csv.rows.push_back(row);
  }
  if (in.bad()) throw Error(ErrorCode::io_error, source + ": read failure");
  if (csv.rows.empty()) throw Error(ErrorCode::empty_file, source + ": no data rows");

  const auto [mn, mx] = std::minmax_element(csv.rows.begin(), csv.rows.end(),
                                            [](const CsvRow& a, const CsvRow& b) { return a.x < b.x; });
  if (mn->x < 0.0 || mx->x > 1.0) {
    if (!(mx->x > mn->x)) {
      throw Error(ErrorCode::domain_error, source + ": a single covariate outside [0,1] cannot be rescaled");
    }
    csv.map = RescaleMap{mn->x, mx->x, false};
  }

  // Exact-match grouping on the parsed original value, in first-seen order
  // of responses within each group.
  std::map<double, std::vector<double>> groups;
  for (const auto& row : csv.rows) groups[row.x].push_back(row.y);
  std::vector<Dose> doses;
  doses.reserve(groups.size());
  for (auto& [x, ys] : groups) {
    // Rounding can push the rescaled end points a hair outside [0,1].
    const double u = std::clamp(csv.map.to_unit(x), 0.0, 1.0);
    doses.push_back(Dose{u, std::move(ys)});
  }
  csv.data = DoseResponseData(std::move(doses));
  return csv;
}

CsvData ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "'");
  return parse_csv(in, path.string());
}

std::vector<BinomialCount> binomial_counts(const CsvData& csv, std::optional<long> trials) {
  if (!csv.has_count && !trials) {
    throw Error(ErrorCode::invalid_argument, "binomial data need a count column or a trial count");
  }
  auto as_count = [&](double v, const CsvRow& row, const char* what) {
    if (v < 0.0 || v != std::floor(v)) {
      throw Error(ErrorCode::non_integer_count,
                  "line " + std::to_string(row.line) + ": " + what + " must be a non-negative integer");
    }
    return static_cast<long>(v);
  };
  std::vector<BinomialCount> out;
  out.reserve(csv.rows.size());
  for (const auto& row : csv.rows) {
    BinomialCount c;
    c.x = std::clamp(csv.map.to_unit(row.x), 0.0, 1.0);
    c.successes = as_count(row.y, row, "successes");
    c.trials = row.count ? as_count(*row.count, row, "count") : *trials;
    if (c.successes > c.trials) {
      throw Error(ErrorCode::invalid_argument,
                  "line " + std::to_string(row.line) + ": successes exceed trials");
    }
    out.push_back(c);
  }
  return out;
}

void write_pvalue_csv(std::ostream& out, const PValueSeries& series) {
  out << "x,z\n";
  char buf[64];
  for (const auto& p : series.points()) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.z);
    out << buf;
  }
}

void write_pvalue_csv(const std::filesystem::path& path, const PValueSeries& series) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path.string() + "'");
  write_pvalue_csv(out, series);
}

PValueSeries read_pvalue_series(const std::filesystem::path& path) {
  const auto csv = ingest_csv(path);
  if (!csv.map.identity) {
    throw Error(ErrorCode::domain_error, path.string() + ": p-value covariates must lie in [0,1]");
  }
  std::vector<PValuePoint> points;
  points.reserve(csv.data.size());
  for (const auto& dose : csv.data.doses()) {
    if (dose.count() != 1) {
      throw Error(ErrorCode::parse_error, path.string() + ": repeated covariate in p-value file");
    }
    points.push_back({dose.x, dose.responses.front()});
  }
  return PValueSeries(std::move(points));
}

}  // namespace pvthresh
