#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pvthresh/dose_data.hpp"
#include "pvthresh/pvalues.hpp"

namespace pvthresh {

// Affine map from the original covariate scale onto [0,1].
struct RescaleMap {
  double lo = 0.0;
  double hi = 1.0;
  bool identity = true;

  double to_unit(double x) const { return identity ? x : (x - lo) / (hi - lo); }
  double to_original(double u) const { return identity ? u : lo + u * (hi - lo); }
};

struct CsvRow {
  double x = 0.0;  // original scale
  double y = 0.0;
  std::optional<double> count;
  std::size_t line = 0;
};

struct CsvData {
  DoseResponseData data;  // covariates on the unit scale
  RescaleMap map;
  std::vector<CsvRow> rows;
  bool has_count = false;
  std::string value_column;  // "y" or "z"
};

// Long format with header "x,y" (or "x,z"), optionally followed by "count".
// Rows are grouped by exact x; covariates outside [0,1] are min-max
// rescaled. Errors: empty_file, parse_error and non_numeric (with line
// numbers), io_error.
CsvData ingest_csv(const std::filesystem::path& path);
CsvData parse_csv(std::istream& in, const std::string& source = "<input>");

// Binomial counts from rows carrying successes in y and trials in count
// (or the fallback trial count). Non-integer values raise non_integer_count.
std::vector<BinomialCount> binomial_counts(const CsvData& csv, std::optional<long> trials);

// "x,z" with 17 significant digits, which round-trips through ingest_csv.
void write_pvalue_csv(std::ostream& out, const PValueSeries& series);
void write_pvalue_csv(const std::filesystem::path& path, const PValueSeries& series);

// Reads a p-value CSV back; every dose must carry exactly one value.
PValueSeries read_pvalue_series(const std::filesystem::path& path);

}  // namespace pvthresh
