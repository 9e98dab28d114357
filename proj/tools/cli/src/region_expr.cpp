#include "modcomm_cli/region_expr.hpp"

#include <numbers>

#include "modcomm_cli/config.hpp"

namespace modcomm::cli {

namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

const char* const kOps[] = {"all", "sites", "sector", "disk", "rectangle", "edge_band", "union", "intersect", "subtract"};

std::pair<std::string, const json*> unwrap(const json& expr, const std::string& where) {
  if (!expr.is_object() || expr.size() != 1)
    throw ConfigError(where + ": a region expression is an object with exactly one key");
  const std::string op = expr.begin().key();
  for (const char* k : kOps)
    if (op == k) return {op, &expr.begin().value()};
  throw ConfigError(where + ": unknown region operator '" + op + "'");
}

void allow_keys(const json& args, const std::string& where, std::initializer_list<const char*> keys,
                std::initializer_list<const char*> required) {
  if (!args.is_object()) throw ConfigError(where + ": arguments must be an object");
  for (auto it = args.begin(); it != args.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw ConfigError(where + ": unknown key '" + it.key() + "'");
    if (!it.value().is_number() && it.key() != std::string("center") && it.key() != std::string("lo") &&
        it.key() != std::string("hi"))
      throw ConfigError(where + "." + it.key() + " must be a number");
  }
  for (const char* k : required)
    if (!args.contains(k)) throw ConfigError(where + ": missing key '" + k + "'");
}

Vec2 point(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(where + " must be an [x, y] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

void check_list(const json& args, const std::string& where, std::size_t min, std::size_t max) {
  if (!args.is_array() || args.size() < min || args.size() > max)
    throw ConfigError(where + ": expects a list of " + std::to_string(min) +
                      (min == max ? "" : " or more") + " expressions");
  for (std::size_t i = 0; i < args.size(); ++i) check_region(args[i], where + "[" + std::to_string(i) + "]");
}

}  // namespace

void check_region(const json& expr, const std::string& where) {
  const auto [op, args] = unwrap(expr, where);
  const std::string at = where + "." + op;
  if (op == "all") {
    if (!args->is_object() || !args->empty()) throw ConfigError(at + " takes an empty object");
  } else if (op == "sites") {
    if (!args->is_array()) throw ConfigError(at + " must be a list of site indices");
    for (const auto& s : *args)
      if (!s.is_number_integer()) throw ConfigError(at + " must contain integers");
  } else if (op == "sector") {
    allow_keys(*args, at, {"theta1_deg", "theta2_deg", "center"}, {"theta1_deg", "theta2_deg"});
    if (args->contains("center")) point(args->at("center"), at + ".center");
  } else if (op == "disk") {
    allow_keys(*args, at, {"radius", "center"}, {"radius"});
    if (args->contains("center")) point(args->at("center"), at + ".center");
  } else if (op == "rectangle") {
    allow_keys(*args, at, {"lo", "hi"}, {"lo", "hi"});
    point(args->at("lo"), at + ".lo");
    point(args->at("hi"), at + ".hi");
  } else if (op == "edge_band") {
    allow_keys(*args, at, {"w"}, {"w"});
  } else if (op == "subtract") {
    check_list(*args, at, 2, 2);
  } else {
    check_list(*args, at, 1, std::size_t(-1));
  }
}

Region eval_region(const json& expr, const LatticeModel& model, const std::string& label) {
  check_region(expr, label);
  const auto [op, args] = unwrap(expr, label);
  const Vec2 origin = model.center();
  auto center = [&](const json& a) { return a.contains("center") ? Vec2(origin + point(a["center"], label)) : origin; };
  Region r;
  if (op == "all") {
    r = all_sites(model);
  } else if (op == "sites") {
    r = Region::from_sites(model, args->get<IndexList>());
  } else if (op == "sector") {
    r = sector(model, center(*args), (*args)["theta1_deg"].get<double>() * kDeg,
               (*args)["theta2_deg"].get<double>() * kDeg);
  } else if (op == "disk") {
    r = disk(model, center(*args), (*args)["radius"].get<double>());
  } else if (op == "rectangle") {
    r = rectangle(model, origin + point((*args)["lo"], label), origin + point((*args)["hi"], label));
  } else if (op == "edge_band") {
    r = edge_band(model, (*args)["w"].get<double>());
  } else if (op == "subtract") {
    r = region_subtract(eval_region((*args)[0], model, label), eval_region((*args)[1], model, label));
  } else {
    r = eval_region((*args)[0], model, label);
    for (std::size_t i = 1; i < args->size(); ++i) {
      const Region next = eval_region((*args)[i], model, label);
      r = op == "union" ? region_union(r, next) : region_intersect(r, next);
    }
  }
  return r.relabeled(label);
}

}  // namespace modcomm::cli
