#include "viscowave/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "viscowave/errors.hpp"

namespace viscowave::io {

namespace {

constexpr double kGridTol = 1e-9;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view s, const std::filesystem::path& path, std::size_t line) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ValidationError(path.string() + ":" + std::to_string(line) + ": not a finite number: '" +
                          std::string(s) + "'");
  }
  return v;
}

void expect_header(const CsvTable& t, std::initializer_list<std::string_view> names,
                   const std::filesystem::path& path) {
  bool ok = t.header.size() == names.size();
  if (ok) {
    std::size_t i = 0;
    for (auto n : names) ok = ok && t.header[i++] == n;
  }
  if (!ok) {
    std::string want;
    for (auto n : names) want += (want.empty() ? "" : ",") + std::string(n);
    throw ValidationError(path.string() + ": expected header '" + want + "'");
  }
}

// Checks v[i] == v[0] + i h for a strictly increasing uniform sequence
// starting at 0 and returns its last value.
double check_uniform(const std::vector<double>& v, const std::filesystem::path& path, const char* axis) {
  if (v.size() < 2) throw ValidationError(path.string() + ": need at least two " + axis + " values");
  const double last = v.back();
  const double tol = kGridTol * std::max(1.0, std::abs(last));
  if (std::abs(v.front()) > tol) throw ValidationError(path.string() + ": " + axis + " grid must start at 0");
  const double h = last / static_cast<double>(v.size() - 1);
  if (!(h > 0.0)) throw ValidationError(path.string() + ": " + axis + " values must increase");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0 && !(v[i] > v[i - 1])) {
      throw ValidationError(path.string() + ": " + axis + " values are not strictly increasing");
    }
    if (std::abs(v[i] - static_cast<double>(i) * h) > tol) {
      throw ValidationError(path.string() + ": " + axis + " grid is not uniform near " + axis + " = " +
                            format_double(v[i]));
    }
  }
  return last;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double map(double v) const {
    const double a = log ? std::log10(v) : v;
    return (a - lo) / (hi - lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      for (int e = static_cast<int>(std::ceil(lo - 1e-12)); e <= static_cast<int>(std::floor(hi + 1e-12)); ++e) {
        t.push_back(std::pow(10.0, e));
      }
      return t;
    }
    for (int i = 0; i <= 4; ++i) t.push_back(lo + (hi - lo) * i / 4.0);
    return t;
  }
};

Axis make_axis(const std::vector<PlotSeries>& series, bool log, bool use_x) {
  Axis ax;
  ax.log = log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series) {
    const auto& v = use_x ? s.x : s.y;
    for (double d : v) {
      if (!std::isfinite(d) || (log && !(d > 0.0))) continue;
      const double a = log ? std::log10(d) : d;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  if (log) {
    lo = std::floor(lo);
    hi = std::ceil(hi);
  }
  ax.lo = lo;
  ax.hi = hi;
  return ax;
}

std::string tick_label(double v, bool log) {
  if (log) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(std::log10(v))));
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw IoError("cannot format number");
  return std::string(buf, ptr);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (!have_header) {
      for (auto c : cells) t.header.emplace_back(c);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw ValidationError(path.string() + ":" + std::to_string(number) + ": expected " +
                            std::to_string(t.header.size()) + " columns");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) row.push_back(parse_number(c, path, number));
    t.rows.push_back(std::move(row));
  }
  if (in.bad()) throw IoError("read error on " + path.string());
  if (!have_header) throw ValidationError(path.string() + ": empty file");
  return t;
}

SpaceField read_space_field(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  expect_header(t, {"x", "value"}, path);
  std::vector<double> xs, vs;
  for (const auto& r : t.rows) {
    xs.push_back(r[0]);
    vs.push_back(r[1]);
  }
  const double length = check_uniform(xs, path, "x");
  return SpaceField::from_samples(std::move(vs), length);
}

SpaceTimeField read_space_time_field(const std::filesystem::path& path, Grid& grid) {
  const CsvTable t = read_csv(path);
  expect_header(t, {"x", "t", "value"}, path);
  if (t.rows.empty()) throw ValidationError(path.string() + ": no data rows");
  std::size_t nx = 0;
  while (nx < t.rows.size() && t.rows[nx][1] == t.rows[0][1]) ++nx;
  if (t.rows.size() % nx != 0) throw ValidationError(path.string() + ": rows do not form a tensor grid");
  const std::size_t nt = t.rows.size() / nx;
  std::vector<double> xs(nx), ts(nt), vs;
  vs.reserve(t.rows.size());
  for (std::size_t i = 0; i < nx; ++i) xs[i] = t.rows[i][0];
  for (std::size_t k = 0; k < nt; ++k) {
    ts[k] = t.rows[k * nx][1];
    for (std::size_t i = 0; i < nx; ++i) {
      const auto& r = t.rows[k * nx + i];
      if (r[0] != xs[i] || r[1] != ts[k]) {
        throw ValidationError(path.string() + ": rows must be row-major in t with the same x list per slice");
      }
      vs.push_back(r[2]);
    }
  }
  grid.nx = static_cast<int>(nx);
  grid.nt = static_cast<int>(nt);
  grid.length = check_uniform(xs, path, "x");
  grid.T = check_uniform(ts, path, "t");
  return SpaceTimeField::from_samples(std::move(vs), grid);
}

std::vector<double> read_time_series(const std::filesystem::path& path, double& T) {
  const CsvTable t = read_csv(path);
  expect_header(t, {"t", "value"}, path);
  std::vector<double> ts, vs;
  for (const auto& r : t.rows) {
    ts.push_back(r[0]);
    vs.push_back(r[1]);
  }
  T = check_uniform(ts, path, "t");
  return vs;
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("write failed on " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string solution_csv(const SolutionField& field) {
  const Grid& g = field.grid();
  std::string out = "x,t,u\n";
  out.reserve(out.size() + static_cast<std::size_t>(g.nx) * g.nt * 32);
  std::vector<std::string> xs(g.nx);
  for (int i = 0; i < g.nx; ++i) xs[i] = format_double(g.x(i));
  for (int k = 0; k < g.nt; ++k) {
    const std::string tk = format_double(g.t(k));
    for (int i = 0; i < g.nx; ++i) {
      out += xs[i];
      out += ',';
      out += tk;
      out += ',';
      out += format_double(field.at(i, k));
      out += '\n';
    }
  }
  return out;
}

std::string sweep_csv(const SweepReport& report) {
  std::string out = "theorem,eps,t,x,xi,lhs,shape,ratio,regime\n";
  for (const auto& r : report.rows) {
    out += std::string(to_string(r.theorem)) + ',' + format_double(r.eps) + ',' + format_double(r.t) + ',' +
           format_double(r.x) + ',' + (r.xi ? format_double(*r.xi) : std::string()) + ',' +
           format_double(r.lhs) + ',' + format_double(r.shape) + ',' + format_double(r.ratio) + ',' +
           std::string(to_string(r.regime)) + '\n';
  }
  return out;
}

nlohmann::json to_json(const BoundConstants& c) {
  return {{"A", c.A},   {"B", c.B},   {"C", c.C}, {"K0", c.K0}, {"K1", c.K1},
          {"K2", c.K2}, {"K3", c.K3}, {"H", c.H}, {"H1", c.H1}, {"provenance", c.provenance}};
}

nlohmann::json to_json(const BoundDiagnostics& d) {
  return {{"N1", d.n1},   {"N2", d.n2}, {"N_c", d.n_c}, {"c", d.c},     {"rho", d.rho},
          {"g0", d.g0},   {"g1", d.g1}, {"g2", d.g2},   {"s", d.s},     {"q", d.q},
          {"ell", d.ell}, {"phi", d.phi}, {"beta", d.beta}, {"zeta2", d.zeta2}};
}

nlohmann::json to_json(const BoundExponents& e) {
  return {{"gamma", e.gamma}, {"delta", e.delta}, {"eta", e.eta}, {"k", e.k}, {"m", e.m()}};
}

nlohmann::json to_json(const SweepReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& e : r.per_eps) {
    per.push_back({{"eps", e.eps}, {"max_ratio", e.max_ratio}, {"max_lhs", e.max_lhs}, {"t_at_max", e.t_at_max}});
  }
  nlohmann::json j = {{"theorem", std::string(to_string(r.theorem))},
                      {"fitted_constant", r.fitted},
                      {"per_eps", per},
                      {"spread", std::isfinite(r.spread) ? nlohmann::json(r.spread) : nlohmann::json(nullptr)},
                      {"max_growth", std::isfinite(r.max_growth) ? nlohmann::json(r.max_growth) : nlohmann::json(nullptr)},
                      {"trend_slope", r.trend_slope},
                      {"rows", r.rows.size()},
                      {"excluded", r.excluded},
                      {"unconverged_cells", r.unconverged},
                      {"max_tail_bound", r.max_tail}};
  if (r.constants) j["constants"] = to_json(*r.constants);
  return j;
}

std::string svg_line_chart(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                            "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  const double left = 70.0, right = 150.0, top = 40.0, bottom = 50.0;
  const double pw = spec.width - left - right;
  const double ph = spec.height - top - bottom;
  const Axis ax = make_axis(series, spec.log_x, true);
  const Axis ay = make_axis(series, spec.log_y, false);
  auto px = [&](double v) { return left + ax.map(v) * pw; };
  auto py = [&](double v) { return top + (1.0 - ay.map(v)) * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
    << escape_xml(spec.title) << "</text>\n";
  s << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw) << "\" height=\""
    << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ax.ticks()) {
    const double x = px(t);
    s << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(top + ph) << "\" x2=\"" << fixed(x) << "\" y2=\""
      << fixed(top + ph + 5) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(top + ph + 18) << "\" text-anchor=\"middle\">"
      << tick_label(t, ax.log) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    s << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(left) << "\" y2=\""
      << fixed(y) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">"
      << tick_label(t, ay.log) << "</text>\n";
  }
  s << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(spec.height - 10.0)
    << "\" text-anchor=\"middle\">" << escape_xml(spec.x_label) << "</text>\n";
  s << "<text transform=\"translate(16," << fixed(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape_xml(spec.y_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& sr = series[k];
    const char* color = kColors[k % std::size(kColors)];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < sr.x.size() && i < sr.y.size(); ++i) {
      const double x = sr.x[i], y = sr.y[i];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if ((ax.log && !(x > 0.0)) || (ay.log && !(y > 0.0))) continue;
      s << (first ? "" : " ") << fixed(px(x)) << ',' << fixed(py(y));
      first = false;
    }
    s << "\"/>\n";
    const double ly = top + 14.0 * (k + 1);
    s << "<line x1=\"" << fixed(left + pw + 10) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(left + pw + 30)
      << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << fixed(left + pw + 34) << "\" y=\"" << fixed(ly + 4) << "\">" << escape_xml(sr.label)
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace viscowave::io
