#include "grekit/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "grekit/errors.hpp"

namespace grekit {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  return out;
}

double parse_double(const std::string& tok, const std::filesystem::path& path) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
  if (used == 0 || used != tok.size()) {
    throw ConfigError(path.string() + ": cannot parse number \"" + tok + "\"");
  }
  return v;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  long rows = -1;
  long cols = -1;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream hs(line);
    std::string hash, rkey, ckey;
    if (!(hs >> hash >> rkey >> rows >> ckey >> cols) || hash != "#" || rkey != "rows" ||
        ckey != "cols" || rows < 1 || cols < 1) {
      throw ConfigError(path.string() + ": expected header \"# rows m cols n\"");
    }
    break;
  }
  if (rows < 0) throw ConfigError(path.string() + ": empty file");

  Eigen::MatrixXd m(rows, cols);
  long r = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (r >= rows) throw ConfigError(path.string() + ": more rows than declared");
    std::istringstream ls(line);
    std::string tok;
    long c = 0;
    while (std::getline(ls, tok, ',')) {
      if (c >= cols) throw ConfigError(path.string() + ": too many columns in row " + std::to_string(r));
      m(r, c++) = parse_double(tok, path);
    }
    if (c != cols) throw ConfigError(path.string() + ": too few columns in row " + std::to_string(r));
    ++r;
  }
  if (r != rows) throw ConfigError(path.string() + ": fewer rows than declared");
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path);
  out << "# rows " << m.rows() << " cols " << m.cols() << "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << "\n";
  }
}

Eigen::VectorXd read_vector_csv(const std::filesystem::path& path) {
  const Eigen::MatrixXd m = read_matrix_csv(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw ConfigError(path.string() + ": expected a single row or column");
}

void write_csv(const std::filesystem::path& path, const MarginReport& report) {
  auto out = open_out(path);
  out << "index,margin,scale\n";
  for (std::size_t i = 0; i < report.margins.size(); ++i) {
    out << i << "," << format_double(report.margins[i]) << "," << format_double(report.scales[i])
        << "\n";
  }
}

void write_csv(const std::filesystem::path& path, const DiscreteTrace& trace) {
  auto out = open_out(path);
  out << "k,entropy,mass,step_margin\n";
  for (const auto& r : trace.rows) {
    out << r.k << "," << format_double(r.entropy.to_double()) << "," << format_double(r.mass) << ","
        << format_double(r.step_margin) << "\n";
  }
}

void write_csv(const std::filesystem::path& path, const GrowthTrace& trace) {
  auto out = open_out(path);
  out << "k,t,entropy,weighted_mass,csiszar_margin\n";
  for (const auto& r : trace.rows) {
    out << r.k << "," << format_double(r.t) << "," << format_double(r.entropy.to_double()) << ","
        << format_double(r.weighted_mass) << "," << format_double(r.csiszar_margin) << "\n";
  }
}

void write_csv(const std::filesystem::path& path, const TransportTrace& trace) {
  auto out = open_out(path);
  out << "k,t,mass_f,mass_g,entropy,lr_min_margin\n";
  for (const auto& r : trace.rows) {
    out << r.k << "," << format_double(r.t) << "," << format_double(r.mass_f) << ","
        << format_double(r.mass_g) << "," << format_double(r.entropy.to_double()) << ","
        << format_double(r.lr_min_margin) << "\n";
  }
}

}  // namespace grekit
