#include "lasekk/cli_io/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace lasekk::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ValidationError(std::string(what) + ": cannot parse '" + std::string(text) +
                          "' as a number");
  return v;
}

CsvColumn& CsvTable::add(std::string name, std::string unit) {
  columns.push_back({std::move(name), std::move(unit), {}, {}});
  return columns.back();
}

std::size_t CsvTable::rows() const {
  if (columns.empty()) return 0;
  const auto len = [](const CsvColumn& c) { return c.text.empty() ? c.numbers.size() : c.text.size(); };
  const std::size_t n = len(columns.front());
  for (const auto& c : columns)
    if (len(c) != n) throw ValidationError("CSV column '" + c.name + "' has a different length");
  return n;
}

void write_csv(std::ostream& os, const CsvTable& table) {
  const std::size_t n = table.rows();
  std::string line;
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    const auto& c = table.columns[j];
    line += (j ? "," : "") + c.name + "[" + c.unit + "]";
  }
  os << line << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    line.clear();
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      const auto& c = table.columns[j];
      if (j) line += ',';
      line += c.text.empty() ? format_double(c.numbers[i]) : c.text[i];
    }
    os << line << '\n';
  }
}

void write_csv_file(const std::string& path, const CsvTable& table) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  write_csv(f, table);
  if (!f) throw ValidationError("write to '" + path + "' failed");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string bare_name(std::string header) {
  const auto bracket = header.find('[');
  if (bracket != std::string::npos) header.resize(bracket);
  while (!header.empty() && (header.back() == ' ' || header.back() == '\r')) header.pop_back();
  while (!header.empty() && header.front() == ' ') header.erase(header.begin());
  return header;
}

}  // namespace

SampledSpectrumd read_spectrum_csv(const std::string& path, TailExponents tails) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open spectrum file '" + path + "'");
  std::string line;
  std::vector<std::string> header;
  while (std::getline(f, line)) {
    if (line.empty() || line.front() == '#') continue;
    header = split(line);
    break;
  }
  if (header.empty()) throw ValidationError(path + ": no header row");
  int col_re = -1;
  int col_im = -1;
  for (int j = 1; j < int(header.size()); ++j) {
    const auto name = bare_name(header[j]);
    if (name == "chi_prime") col_re = j;
    if (name == "chi_double_prime") col_im = j;
  }
  if (col_re < 0 || col_im < 0)
    throw ValidationError(path + ": needs chi_prime and chi_double_prime columns");

  std::vector<double> x, re, im;
  long line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line.front() == '#') continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw ValidationError(path + ":" + std::to_string(line_no) + ": wrong number of fields");
    const std::string where = path + ":" + std::to_string(line_no);
    x.push_back(parse_double(cells[0], where));
    re.push_back(parse_double(cells[col_re], where));
    im.push_back(parse_double(cells[col_im], where));
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < 2) throw ValidationError(path + ": fewer than two samples");

  UniformGrid<double> grid{x.front(), x.back(), n};
  grid.validate();
  const double tol = 1e-6 * grid.step();
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(x[i] - grid.point(i)) > tol)
      throw ValidationError(path + ": detuning column is not uniformly spaced");

  SampledSpectrumd s{grid, Eigen::Map<const VectorX<double>>(re.data(), n),
                     Eigen::Map<const VectorX<double>>(im.data(), n), tails};
  s.validate();
  return s;
}

CsvTable spectrum_table(const SampledSpectrumd& s, const std::string& axis_name) {
  CsvTable t;
  const auto x = s.grid.points();
  t.add(axis_name, kUnitRate).numbers.assign(x.data(), x.data() + x.size());
  t.add("chi_prime", kUnitNone).numbers.assign(s.chi_prime.data(), s.chi_prime.data() + s.chi_prime.size());
  t.add("chi_double_prime", kUnitNone)
      .numbers.assign(s.chi_double_prime.data(), s.chi_double_prime.data() + s.chi_double_prime.size());
  return t;
}

}  // namespace lasekk::cli
