#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "glnematic/concentration.hpp"
#include "glnematic/io.hpp"

namespace glnematic {

const char* const kEnergyCsvHeader =
    "t,kinetic,dirichlet,penalty,total,diss_v,diss_d,l4_v,max_d,penalty_l2";

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string energy_csv_row(const EnergySample& s) {
  const double cols[] = {s.t,      s.kinetic, s.dirichlet, s.penalty, s.total,
                         s.diss_v, s.diss_d,  s.l4_v,      s.max_d,   s.penalty_l2};
  std::string row;
  for (std::size_t i = 0; i < std::size(cols); ++i) {
    if (i) row += ',';
    row += format_real(cols[i]);
  }
  return row;
}

void write_energy_csv(const std::string& path, const std::vector<EnergySample>& trajectory) {
  std::string text = std::string(kEnergyCsvHeader) + "\n";
  for (const auto& s : trajectory) text += energy_csv_row(s) + "\n";
  write_text_file(path, text);
}

void write_field_csv(const std::string& path, const SimState& state, double epsilon) {
  Field vh, dh;
  const Field& v = with_both(state.v, vh);
  const Field& d = with_both(state.d, dh);
  const Field rho = energy_density(d, epsilon);
  const int n = v.n();
  const double h = v.grid().spacing();
  std::string text = "x1,x2,v1,v2,d1,d2,d3,energy_density\n";
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const std::size_t q = static_cast<std::size_t>(a) * n + b;
      const double cols[] = {a * h,
                             b * h,
                             v.physical(0)[q],
                             v.physical(1)[q],
                             d.physical(0)[q],
                             d.physical(1)[q],
                             d.physical(2)[q],
                             rho.physical(0)[q]};
      for (std::size_t i = 0; i < std::size(cols); ++i) {
        if (i) text += ',';
        text += format_real(cols[i]);
      }
      text += '\n';
    }
  write_text_file(path, text);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace glnematic
