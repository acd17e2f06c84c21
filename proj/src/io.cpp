#include "cylspec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cylspec/error.hpp"

namespace cylspec {

namespace {

std::string num(double v, const char* fmt = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

struct Box {
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  void include(double x, double y) {
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  void pad() {
    double dx = (x_hi - x_lo) * 0.05 + 1e-12;
    double dy = (y_hi - y_lo) * 0.05 + 1e-12;
    x_lo -= dx, x_hi += dx, y_lo -= dy, y_hi += dy;
  }
};

constexpr int kSvgW = 640;
constexpr int kSvgH = 480;
constexpr int kSvgPad = 40;

double svg_x(const Box& b, double x) {
  return kSvgPad + (x - b.x_lo) / (b.x_hi - b.x_lo) * (kSvgW - 2 * kSvgPad);
}
double svg_y(const Box& b, double y) {
  return kSvgH - kSvgPad - (y - b.y_lo) / (b.y_hi - b.y_lo) * (kSvgH - 2 * kSvgPad);
}

void svg_header(std::ostringstream& s) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgW
    << "\" height=\"" << kSvgH << "\" viewBox=\"0 0 " << kSvgW << ' ' << kSvgH
    << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void svg_axes(std::ostringstream& s, const Box& b) {
  double x0 = (b.x_lo <= 0.0 && 0.0 <= b.x_hi) ? svg_x(b, 0.0) : kSvgPad;
  double y0 = (b.y_lo <= 0.0 && 0.0 <= b.y_hi) ? svg_y(b, 0.0) : kSvgH - kSvgPad;
  s << "<line x1=\"" << kSvgPad << "\" y1=\"" << num(y0, "%.2f") << "\" x2=\""
    << kSvgW - kSvgPad << "\" y2=\"" << num(y0, "%.2f")
    << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  s << "<line x1=\"" << num(x0, "%.2f") << "\" y1=\"" << kSvgPad << "\" x2=\""
    << num(x0, "%.2f") << "\" y2=\"" << kSvgH - kSvgPad
    << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io_error, "cannot open for writing: " + path);
  out << text;
  if (!out) throw Error(ErrorKind::io_error, "write failed: " + path);
}

void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json eigen_result_json(const EigenResult& res) {
  Json pairs = Json::array();
  for (const EigenPair& p : res.pairs)
    pairs.push_back(Json{{"re", p.lambda.real()},
                         {"im", p.lambda.imag()},
                         {"residual", p.residual}});
  return Json{{"pairs", pairs},
              {"solver",
               Json{{"shift", complex_json(res.solver.shift)},
                    {"iterations", res.solver.iterations},
                    {"subspace", res.solver.subspace},
                    {"restarts", res.solver.restarts}}}};
}

Json realness_json(const RealnessReport& rep) {
  Json right = Json::array();
  for (const RightEigenvalue& r : rep.right)
    right.push_back(Json{{"re", r.lambda.real()},
                         {"im", r.lambda.imag()},
                         {"residual", r.residual},
                         {"sym_partner", r.sym_partner},
                         {"gap", r.gap}});
  return Json{{"sup_re_ess", rep.sup_re_ess}, {"tol", rep.tol},
              {"right", right},              {"max_imag", rep.max_imag},
              {"all_real", rep.all_real},    {"all_matched", rep.all_matched},
              {"empty", rep.empty()}};
}

Json decay_json(const DecayEstimate& est, bool pass) {
  return Json{{"delta_hat", est.delta_hat},
              {"M_hat", est.m_hat},
              {"fit_quality", est.fit_quality},
              {"pass", pass}};
}

Json gronwall_json(const GronwallReport& rep) {
  return Json{{"pass", rep.pass},
              {"delta_hat", rep.delta_hat},
              {"max_slack", rep.max_slack}};
}

Json hypothesis_json(const HypothesisReport& rep) {
  return Json{{"tail_sup_plus", rep.tail_sup_plus},
              {"tail_sup_minus", rep.tail_sup_minus},
              {"h1_pass", rep.h1_pass},
              {"h2_l1_plus", rep.h2_l1_plus},
              {"h2_l1_minus", rep.h2_l1_minus},
              {"h2_diff_plus", rep.h2_diff_plus},
              {"h2_diff_minus", rep.h2_diff_minus},
              {"h2_pass", rep.h2_pass},
              {"h3_status", rep.h3_status},
              {"pass", rep.pass()}};
}

Json essential_json(const EssentialSpectrumDescriptor& d) {
  Json branches = Json::array();
  for (const DispersionBranch& b : d.branches)
    branches.push_back(Json{{"mu", b.mu},
                            {"side", std::string(1, b.side)},
                            {"sampled", b.sampled}});
  return Json{{"speed", d.speed},
              {"sup_re", d.sup_re},
              {"sup_re_plus", d.sup_re_plus},
              {"sup_re_minus", d.sup_re_minus},
              {"s_max", d.s_max},
              {"branches", branches}};
}

void write_csv(const std::string& path,
               const std::vector<std::string>& headers,
               const std::vector<std::vector<double>>& columns) {
  if (headers.size() != columns.size())
    throw Error(ErrorKind::invalid_parameter, "write_csv: header/column count mismatch");
  std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows)
      throw Error(ErrorKind::invalid_parameter, "write_csv: ragged columns");
  std::ostringstream s;
  for (std::size_t j = 0; j < headers.size(); ++j)
    s << (j ? "," : "") << headers[j];
  s << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j)
      s << (j ? "," : "") << num(columns[j][i]);
    s << '\n';
  }
  write_text_file(path, s.str());
}

void write_matrix_market(const std::string& path, const DiscreteOperator& op) {
  std::ostringstream s;
  s << "%%MatrixMarket matrix coordinate real general\n";
  const int n = op.size();
  s << n << ' ' << n << ' ' << op.val.size() << '\n';
  for (int i = 0; i < n; ++i)
    for (int k = op.row_ptr[static_cast<std::size_t>(i)];
         k < op.row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
      s << (i + 1) << ' ' << (op.col[static_cast<std::size_t>(k)] + 1) << ' '
        << num(op.val[static_cast<std::size_t>(k)]) << '\n';
  write_text_file(path, s.str());
}

void write_svg_spectrum(const std::string& path,
                        const EssentialSpectrumDescriptor& d,
                        const std::vector<Complex>& eigenvalues) {
  Box box;
  bool seeded = false;
  auto seed = [&](double x, double y) {
    if (!seeded) {
      box.x_lo = box.x_hi = x;
      box.y_lo = box.y_hi = y;
      seeded = true;
    } else {
      box.include(x, y);
    }
  };
  for (const DispersionBranch& b : d.branches)
    for (const Complex& l : b.lambda) seed(l.real(), l.imag());
  for (const Complex& l : eigenvalues) seed(l.real(), l.imag());
  box.pad();

  std::ostringstream s;
  svg_header(s);
  svg_axes(s, box);
  for (const DispersionBranch& b : d.branches) {
    if (!b.sampled || b.lambda.empty()) continue;
    s << "<path fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" d=\"";
    for (std::size_t i = 0; i < b.lambda.size(); ++i)
      s << (i ? " L " : "M ") << num(svg_x(box, b.lambda[i].real()), "%.2f")
        << ' ' << num(svg_y(box, b.lambda[i].imag()), "%.2f");
    s << "\"/>\n";
  }
  for (const Complex& l : eigenvalues)
    s << "<circle cx=\"" << num(svg_x(box, l.real()), "%.2f") << "\" cy=\""
      << num(svg_y(box, l.imag()), "%.2f")
      << "\" r=\"3\" fill=\"#d62728\"/>\n";
  s << "</svg>\n";
  write_text_file(path, s.str());
}

void write_svg_decay(const std::string& path, std::span<const double> z,
                     std::span<const double> norms) {
  if (z.size() != norms.size() || z.size() < 2)
    throw Error(ErrorKind::invalid_parameter, "write_svg_decay: need matching arrays with >= 2 points");
  Box box;
  bool seeded = false;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(norms[i] > 0.0)) continue;
    double y = std::log10(norms[i]);
    if (!seeded) {
      box.x_lo = box.x_hi = z[i];
      box.y_lo = box.y_hi = y;
      seeded = true;
    } else {
      box.include(z[i], y);
    }
    pts.emplace_back(z[i], y);
  }
  if (pts.size() < 2)
    throw Error(ErrorKind::invalid_parameter, "write_svg_decay: fewer than 2 positive norms");
  box.pad();
  std::ostringstream s;
  svg_header(s);
  svg_axes(s, box);
  s << "<path fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1.5\" d=\"";
  for (std::size_t i = 0; i < pts.size(); ++i)
    s << (i ? " L " : "M ") << num(svg_x(box, pts[i].first), "%.2f") << ' '
      << num(svg_y(box, pts[i].second), "%.2f");
  s << "\"/>\n</svg>\n";
  write_text_file(path, s.str());
}

CylinderPotential read_potential_json(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::config_error, std::string("potential file: ") + e.what());
  }
  CylinderPotential V;
  try {
    V.omega_dim = j.value("omega_dim", 1);
    std::string bc = j.value("bc_x", "dirichlet");
    if (bc == "dirichlet")
      V.bc_x = Bc::dirichlet;
    else if (bc == "periodic")
      V.bc_x = Bc::periodic;
    else
      throw Error(ErrorKind::config_error, "potential file: bc_x must be dirichlet or periodic");
    V.x_length = j.value("x_length", 0.0);
    V.x = j.value("x", std::vector<double>{});
    V.z = j.at("z").get<std::vector<double>>();
    V.values = j.at("values").get<std::vector<double>>();
    V.v_plus = j.at("v_plus").get<std::vector<double>>();
    V.v_minus = j.at("v_minus").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::config_error, std::string("potential file: ") + e.what());
  }
  if (V.omega_dim != 0 && V.omega_dim != 1)
    throw Error(ErrorKind::config_error, "potential file: omega_dim must be 0 or 1");
  const int nx = V.nx();
  const int nz = V.nz();
  if (nz < 3) throw Error(ErrorKind::config_error, "potential file: need at least 3 axial samples");
  if (V.omega_dim == 1 && (V.x.empty() || V.x_length <= 0.0))
    throw Error(ErrorKind::config_error, "potential file: missing cross-section grid");
  if (static_cast<int>(V.values.size()) != nx * nz)
    throw Error(ErrorKind::config_error, "potential file: values size mismatch");
  if (static_cast<int>(V.v_plus.size()) != nx || static_cast<int>(V.v_minus.size()) != nx)
    throw Error(ErrorKind::config_error, "potential file: limit profile size mismatch");
  for (int iz = 1; iz < nz; ++iz)
    if (!(V.z[static_cast<std::size_t>(iz)] > V.z[static_cast<std::size_t>(iz) - 1]))
      throw Error(ErrorKind::config_error, "potential file: z grid must increase");
  return V;
}

void write_potential_json(const std::string& path, const CylinderPotential& V) {
  Json j{{"omega_dim", V.omega_dim}, {"bc_x", bc_name(V.bc_x)},
         {"x_length", V.x_length},   {"x", V.x},
         {"z", V.z},                 {"values", V.values},
         {"v_plus", V.v_plus},       {"v_minus", V.v_minus}};
  write_json_file(path, j);
}

}  // namespace cylspec
