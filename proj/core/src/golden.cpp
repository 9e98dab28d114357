#include "modcomm/golden.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "modcomm/errors.hpp"

namespace modcomm {

namespace {

template <class T>
T parse_number(const std::string& tok, int base, const char* what) {
  T v{};
  const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, base);
  if (ec != std::errc() || end != tok.data() + tok.size() || tok.empty())
    throw InvalidArgument("oracle", fmt::format("invalid {} '{}' in golden data", what, tok));
  return v;
}

}  // namespace

std::string format_region_sets(const std::vector<IndexList>& sets) {
  std::string out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i) out += '|';
    if (sets[i].empty()) out += '-';
    for (std::size_t j = 0; j < sets[i].size(); ++j) out += (j ? "," : "") + std::to_string(sets[i][j]);
  }
  return out;
}

std::vector<IndexList> parse_region_sets(const std::string& text) {
  std::vector<IndexList> sets;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '|')) {
    IndexList s;
    if (part != "-") {
      std::stringstream ps(part);
      std::string tok;
      while (std::getline(ps, tok, ',')) s.push_back(parse_number<int>(tok, 10, "site index"));
    }
    sets.push_back(std::move(s));
  }
  return sets;
}

std::vector<GoldenEntry> read_golden(std::istream& in) {
  std::vector<GoldenEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string hash;
    GoldenEntry e;
    if (!(ls >> hash >> e.regions >> e.quantity >> e.value))
      throw InvalidArgument("oracle", fmt::format("golden file line {} is malformed", lineno));
    e.model_hash = parse_number<std::uint64_t>(hash, 16, "model hash");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<GoldenEntry> read_golden_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("oracle", "cannot open golden file " + path);
  return read_golden(in);
}

void write_golden(std::ostream& out, const std::vector<GoldenEntry>& entries) {
  for (const auto& e : entries)
    out << fmt::format("{:016x} {} {} {:.17g}\n", e.model_hash, e.regions, e.quantity, e.value);
}

std::uint64_t matrix_hash(const CMatrix& h) {
  std::uint64_t f = 0xCBF29CE484222325ULL;
  const auto* p = reinterpret_cast<const unsigned char*>(h.data());
  const std::size_t n = static_cast<std::size_t>(h.size()) * sizeof(cplx);
  for (std::size_t i = 0; i < n; ++i) {
    f ^= p[i];
    f *= 0x100000001B3ULL;
  }
  return f;
}

}  // namespace modcomm
