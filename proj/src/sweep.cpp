#include <cmath>
#include <sstream>

#include "spl/harness.hpp"

namespace spl {

std::vector<double> Range::points() const {
  if (steps <= 1) return {lo};
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    pts.push_back(k == steps - 1 ? hi : lo + (hi - lo) * k / (steps - 1));
  }
  return pts;
}

Range parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  try {
    if (parts.size() == 1) {
      const double x = std::stod(parts[0]);
      return {x, x, 1};
    }
    if (parts.size() == 3) {
      Range r{std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2])};
      if (r.steps < 1) throw Error(ErrorCode::ParseError, "range needs steps >= 1");
      return r;
    }
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::ParseError, "expected lo:hi:steps, got '" + text + "'");
}

std::vector<SweepRow> sweep(const Range& D_range, double d, const Range& v_range, bool unchecked) {
  std::vector<SweepRow> rows;
  for (double D : D_range.points()) {
    for (double v : v_range.points()) {
      SweepRow row;
      row.D = D;
      row.d = d;
      row.v = v;
      row.flags = regimes(D, d, v);
      if (row.flags.domain) {
        if (row.flags.r12 || unchecked) row.bound13 = bound_apriori_unchecked(v, d).value;
        if (row.flags.r31 || unchecked) {
          row.kappa = kappa_unchecked(D, d, v);
          row.bound32 = sin_half_arctan(row.kappa->value);
        }
        if (row.flags.r29 || unchecked) {
          row.r_V = r_v_unchecked(v, d, D).value;
          row.enclosure = Enclosure{-0.5 * D + (d - *row.r_V), 0.5 * D - (d - *row.r_V)};
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "D,d,v,regime12,regime29,regime31,kappa,branch,bound13,bound32,r_V,encl_lo,encl_hi\n";
  auto opt = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string(); };
  for (const SweepRow& r : rows) {
    out << format_double(r.D) << ',' << format_double(r.d) << ',' << format_double(r.v) << ','
        << int(r.flags.r12) << ',' << int(r.flags.r29) << ',' << int(r.flags.r31) << ','
        << (r.kappa ? format_double(r.kappa->value) : "") << ','
        << (r.kappa ? to_string(r.kappa->branch) : "") << ',' << opt(r.bound13) << ','
        << opt(r.bound32) << ',' << opt(r.r_V) << ','
        << (r.enclosure ? format_double(r.enclosure->lower) : "") << ','
        << (r.enclosure ? format_double(r.enclosure->upper) : "") << '\n';
  }
  return out.str();
}

}  // namespace spl
