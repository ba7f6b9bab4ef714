#pragma once

#include <deque>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lasekk/spectrum.hpp"

namespace lasekk::cli {

inline constexpr const char* kUnitRate = "rad_per_s";
inline constexpr const char* kUnitNone = "dimensionless";
inline constexpr const char* kUnitRateSq = "rad2_per_s2";

/// Shortest decimal that reads back to the same binary64; '.' separator
/// regardless of locale. NaN prints as "nan".
std::string format_double(double v);
/// Strict parse of a whole token; throws ValidationError on junk.
double parse_double(std::string_view text, std::string_view what);

struct CsvColumn {
  std::string name;
  std::string unit;
  std::vector<double> numbers;       // used when `text` is empty
  std::vector<std::string> text;
};

/// Column-major table; all columns must have equal length.
struct CsvTable {
  std::deque<CsvColumn> columns;  // deque: references from add() stay valid

  CsvColumn& add(std::string name, std::string unit);
  std::size_t rows() const;
};

/// Header row "name[unit],..." followed by one line per row, '\n' endings.
void write_csv(std::ostream& os, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

/// Spectrum CSV: first column the detuning grid (must be uniform), plus
/// columns named chi_prime and chi_double_prime. Lines starting with '#'
/// are skipped.
SampledSpectrumd read_spectrum_csv(const std::string& path, TailExponents tails = {});

/// Shared layout for a sampled spectrum (detuning, chi', chi'').
CsvTable spectrum_table(const SampledSpectrumd& s, const std::string& axis_name = "delta");

}  // namespace lasekk::cli
