#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace mmdim {

/// One scale of a dimension estimate. `values` holds the per-n (or per-N)
/// sequence when the scale came from a time ladder; `value` is the quantity
/// regressed against log(1/eps).
struct ScaleRecord {
  double eps = 0.0;
  std::vector<std::size_t> ladder;
  std::vector<double> values;
  double upper = 0.0;   // tail-max over the trailing half of the ladder
  double lower = 0.0;   // tail-min over the trailing half of the ladder
  double value = 0.0;
  double ratio = 0.0;   // value / log(1/eps)
  bool resolution_limited = false;
  std::vector<double> count_mean;    // per ladder entry, when counts were averaged
  std::vector<double> count_stderr;
  double baseline = 0.0;             // averaged count at n = 0
};

struct DimensionReport {
  std::vector<ScaleRecord> scales;
  double slope = 0.0;
  std::vector<std::string> flags;

  void flag(const std::string& f) {
    if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
  }
  bool has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
  }
  void merge_flags(const std::vector<std::string>& other) {
    for (const auto& f : other) flag(f);
  }
};

/// Unweighted least-squares slope of y against x. Needs two distinct x values.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Max and min over the trailing half (the last ceil(n/2) entries).
double tail_max(const std::vector<double>& v);
double tail_min(const std::vector<double>& v);

/// Fills `slope` by regressing `value` on log(1/eps) over the scales that are
/// not resolution-limited (all scales when fewer than two qualify).
void finish_slope(DimensionReport& report);

}  // namespace mmdim
