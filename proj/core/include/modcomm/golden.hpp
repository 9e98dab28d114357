#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "modcomm/types.hpp"

namespace modcomm {

// One line of the golden-value table:
//   <model hash, 16 hex digits> <region sets> <quantity> <value>
// Region sets are comma-separated mode lists joined by '|', e.g. 0,1|2,3|4,5.
// Lines starting with '#' are comments.
struct GoldenEntry {
  std::uint64_t model_hash = 0;
  std::string regions;
  std::string quantity;
  double value = 0.0;
};

std::string format_region_sets(const std::vector<IndexList>& sets);
std::vector<IndexList> parse_region_sets(const std::string& text);

std::vector<GoldenEntry> read_golden(std::istream& in);
std::vector<GoldenEntry> read_golden_file(const std::string& path);
void write_golden(std::ostream& out, const std::vector<GoldenEntry>& entries);

// Hash of the raw bytes of h (FNV-1a), stable across runs.
std::uint64_t matrix_hash(const CMatrix& h);

}  // namespace modcomm
