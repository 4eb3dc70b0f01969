#include "exheat/csv.hpp"

#include <fstream>
#include <stdexcept>

#include "exheat/config.hpp"

namespace exheat::cli {

std::string series_csv(const diag::Series& s) {
  std::string out = "t,value\n";
  for (std::size_t i = 0; i < s.size(); ++i) out += format_double(s.t[i]) + "," + format_double(s.value[i]) + "\n";
  return out;
}

std::string series_csv(const diag::Series& s, const diag::Series& envelope) {
  if (envelope.size() != s.size()) throw std::invalid_argument("series_csv: envelope length mismatch");
  std::string out = "t,value,envelope\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out += format_double(s.t[i]) + "," + format_double(s.value[i]) + "," + format_double(envelope.value[i]) + "\n";
  return out;
}

std::string rates_csv(const std::vector<RateRow>& rows) {
  std::string out = "N,p,q,scenario,fitted_a,fitted_b,residual,t_lo,t_hi\n";
  for (const auto& r : rows) {
    out += std::to_string(r.N) + "," + format_double(r.p) + "," + format_double(r.q) + "," + r.scenario + "," +
           format_double(r.fitted_a) + "," + format_double(r.fitted_b) + "," + format_double(r.residual) + "," +
           format_double(r.t_lo) + "," + format_double(r.t_hi) + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << body;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace exheat::cli
