#pragma once

#include <string>
#include <vector>

#include "exheat/diagnostics.hpp"

namespace exheat::cli {

struct RateRow {
  int N = 0;
  double p = 0.0;
  double q = 0.0;
  std::string scenario;
  double fitted_a = 0.0;
  double fitted_b = 0.0;
  double residual = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

/// `t,value` or `t,value,envelope` rows, 17 significant digits.
std::string series_csv(const diag::Series& s);
std::string series_csv(const diag::Series& s, const diag::Series& envelope);
std::string rates_csv(const std::vector<RateRow>& rows);

void write_file(const std::string& path, const std::string& body);

}  // namespace exheat::cli
