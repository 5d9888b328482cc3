#include "hkflow/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hkflow {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

}  // namespace

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

void write_measure_csv(const std::string& path, const DiscreteMeasure& m) {
  std::ostringstream os;
  const int d = m.dim();
  for (int k = 0; k < d; ++k) os << 'x' << k << ',';
  os << "w\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (int k = 0; k < d; ++k) os << format_double(m.points[i][k]) << ',';
    os << format_double(m.weights[i]) << '\n';
  }
  atomic_write(path, os.str());
}

DiscreteMeasure read_measure_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_measure_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_measure_csv: empty file");
  const std::size_t ncol = split_csv_line(line).size();
  if (ncol < 2) throw std::runtime_error("read_measure_csv: need at least x0,w columns");
  const std::size_t d = ncol - 1;
  std::vector<Vec> pts;
  std::vector<double> wts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != ncol) throw std::runtime_error("read_measure_csv: ragged row");
    Vec p(d);
    for (std::size_t k = 0; k < d; ++k) p[k] = std::stod(cells[k]);
    pts.push_back(std::move(p));
    wts.push_back(std::stod(cells[d]));
  }
  return DiscreteMeasure(std::move(pts), std::move(wts));
}

void write_grid_csv(const std::string& path, const GridDensity& u) {
  std::ostringstream os;
  const int d = u.dim();
  os << "cell_index,";
  for (int k = 0; k < d; ++k) os << 'x' << k << ',';
  os << "u\n";
  for (std::size_t i = 0; i < u.size(); ++i) {
    os << i << ',';
    const Vec c = u.center(i);
    for (int k = 0; k < d; ++k) os << format_double(c[k]) << ',';
    os << format_double(u.values[i]) << '\n';
  }
  atomic_write(path, os.str());
}

std::vector<double> read_grid_values_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_grid_values_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_grid_values_csv: empty file");
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() < 2) throw std::runtime_error("read_grid_values_csv: ragged row");
    vals.push_back(std::stod(cells.back()));
  }
  return vals;
}

}  // namespace hkflow
