#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "modcomm/errors.hpp"
#include "modcomm/experiments.hpp"

namespace modcomm {

namespace {

using nlohmann::ordered_json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.17g}", v);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

double as_double(const ordered_json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

ordered_json pairs_to_json(const std::vector<std::pair<std::string, double>>& pairs) {
  ordered_json o = ordered_json::object();
  for (const auto& [k, v] : pairs) o[k] = number(v);
  return o;
}

std::vector<std::pair<std::string, double>> pairs_from_json(const ordered_json& o) {
  std::vector<std::pair<std::string, double>> out;
  for (auto it = o.begin(); it != o.end(); ++it) out.emplace_back(it.key(), as_double(it.value()));
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  std::vector<std::string> extra_keys;
  for (const auto& r : records)
    for (const auto& [k, v] : r.extras)
      if (std::find(extra_keys.begin(), extra_keys.end(), k) == extra_keys.end()) extra_keys.push_back(k);

  out << "sweep_var,value,partition,L-or-Lx,Ly,r,w,seed,J,n,imag_residue,runtime_s,error";
  for (const auto& k : extra_keys) out << ',' << csv_quote(k);
  out << '\n';
  for (const auto& r : records) {
    const bool pi = r.model.name == "pi_flux";
    const auto rr = r.partition_param("r");
    const auto ww = r.partition_param("w");
    out << csv_quote(r.sweep_var) << ',' << num(r.value) << ',' << csv_quote(r.partition) << ','
        << (pi ? r.model.Lx : r.model.L) << ',' << (pi ? std::to_string(r.model.Ly) : "") << ','
        << (rr ? num(*rr) : "") << ',' << (ww ? num(*ww) : "") << ',' << r.seed << ',' << num(r.J) << ','
        << num(r.n) << ',' << num(r.imag_residue) << ',' << fmt::format("{:.6f}", r.runtime_s) << ','
        << csv_quote(r.error);
    for (const auto& k : extra_keys) {
      const auto v = r.extra(k);
      out << ',' << (v ? num(*v) : "");
    }
    out << '\n';
  }
}

std::string record_to_json(const ExperimentRecord& r) {
  ordered_json j;
  j["operation"] = r.operation;
  j["sweep_var"] = r.sweep_var;
  j["value"] = number(r.value);
  j["partition"] = r.partition;
  j["kind"] = r.kind;
  j["partition_params"] = pairs_to_json(r.partition_params);
  ordered_json m;
  m["name"] = r.model.name;
  m["L"] = r.model.L;
  m["Lx"] = r.model.Lx;
  m["Ly"] = r.model.Ly;
  m["mu_tilde"] = number(r.model.mu_tilde);
  m["mu"] = number(r.model.mu);
  m["t1"] = number(r.model.t1);
  m["t2"] = number(r.model.t2);
  m["phi"] = number(r.model.phi);
  m["tau"] = number(r.model.tau);
  m["disorder_w"] = number(r.model.disorder_w);
  m["disorder_seed"] = r.model.disorder_seed ? ordered_json(*r.model.disorder_seed) : ordered_json(nullptr);
  j["model"] = m;
  j["seed"] = r.seed;
  j["J"] = number(r.J);
  j["n"] = number(r.n);
  j["imag_residue"] = number(r.imag_residue);
  j["gap"] = number(r.gap);
  j["prediction"] = r.prediction ? ordered_json(*r.prediction) : ordered_json(nullptr);
  j["extras"] = pairs_to_json(r.extras);
  j["error"] = r.error;
  j["code_version"] = r.code_version;
  j["runtime_s"] = r.runtime_s;
  return j.dump();
}

ExperimentRecord record_from_json(const std::string& line) {
  ExperimentRecord r;
  try {
    const auto j = ordered_json::parse(line);
    r.operation = j.at("operation").get<std::string>();
    r.sweep_var = j.at("sweep_var").get<std::string>();
    r.value = as_double(j.at("value"));
    r.partition = j.at("partition").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.partition_params = pairs_from_json(j.at("partition_params"));
    const auto& m = j.at("model");
    r.model.name = m.at("name").get<std::string>();
    r.model.L = m.at("L").get<int>();
    r.model.Lx = m.at("Lx").get<int>();
    r.model.Ly = m.at("Ly").get<int>();
    r.model.mu_tilde = as_double(m.at("mu_tilde"));
    r.model.mu = as_double(m.at("mu"));
    r.model.t1 = as_double(m.at("t1"));
    r.model.t2 = as_double(m.at("t2"));
    r.model.phi = as_double(m.at("phi"));
    r.model.tau = as_double(m.at("tau"));
    r.model.disorder_w = as_double(m.at("disorder_w"));
    if (!m.at("disorder_seed").is_null()) r.model.disorder_seed = m.at("disorder_seed").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.J = as_double(j.at("J"));
    r.n = as_double(j.at("n"));
    r.imag_residue = as_double(j.at("imag_residue"));
    r.gap = as_double(j.at("gap"));
    if (!j.at("prediction").is_null()) r.prediction = j.at("prediction").get<int>();
    r.extras = pairs_from_json(j.at("extras"));
    r.error = j.at("error").get<std::string>();
    r.code_version = j.at("code_version").get<std::string>();
    r.runtime_s = j.at("runtime_s").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("experiments", std::string("malformed JSON-lines record: ") + e.what());
  }
  return r;
}

void write_jsonl(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  for (const auto& r : records) out << record_to_json(r) << '\n';
}

std::vector<ExperimentRecord> read_jsonl(std::istream& in) {
  std::vector<ExperimentRecord> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(record_from_json(line));
  return out;
}

void write_current_csv(std::ostream& out, const CurrentMap& map) {
  out << "site,x,y,region,outflow\n";
  for (const auto& s : map.sites)
    out << s.site << ',' << num(s.position.x()) << ',' << num(s.position.y()) << ',' << csv_quote(s.region) << ','
        << num(s.outflow) << '\n';
}

}  // namespace modcomm
