#include "chemostat/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace chemostat {

namespace {

using nlohmann::json;

// Maps a key path to the line of its last component by scanning for the
// quoted keys in order.
class Locator {
 public:
  explicit Locator(const std::string* text) : text_(text) {}

  std::size_t line_of(const std::vector<std::string>& path) const {
    if (!text_) return 0;
    std::size_t pos = 0;
    std::size_t found = std::string::npos;
    for (const auto& key : path) {
      const auto at = text_->find('"' + key + '"', pos);
      if (at == std::string::npos) break;
      found = at;
      pos = at + key.size() + 2;
    }
    return found == std::string::npos ? 1 : line_at(found);
  }

  std::size_t line_at(std::size_t offset) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text_->size(); ++i) {
      if ((*text_)[i] == '\n') ++line;
    }
    return line;
  }

 private:
  const std::string* text_;
};

class Reader {
 public:
  Reader(const json& root, const Locator& loc) : root_(root), loc_(loc) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& msg) const {
    const std::size_t line = loc_.line_of(path);
    std::string where;
    for (const auto& p : path) where += (where.empty() ? "" : ".") + p;
    throw ScenarioError((line ? "line " + std::to_string(line) + ": " : std::string()) +
                            (where.empty() ? "" : where + ": ") + msg,
                        line);
  }

  const json& node(const std::vector<std::string>& path, bool required = true) const {
    const json* cur = &root_;
    for (const auto& key : path) {
      if (!cur->is_object()) fail(path, "parent is not an object");
      auto it = cur->find(key);
      if (it == cur->end()) {
        if (!required) return null_;
        fail(path, "required field is missing");
      }
      cur = &*it;
    }
    return *cur;
  }

  bool has(const std::vector<std::string>& path) const { return !node(path, false).is_null(); }

  double number(const std::vector<std::string>& path) const {
    const json& v = node(path);
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  double number_or(const std::vector<std::string>& path, double fallback) const {
    return has(path) ? number(path) : fallback;
  }

  std::string text(const std::vector<std::string>& path) const {
    const json& v = node(path);
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  void only(const std::vector<std::string>& path, std::initializer_list<const char*> keys) const {
    const json& v = path.empty() ? root_ : node(path);
    if (!v.is_object()) fail(path, "expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, _] : v.items()) {
      if (!allowed.count(k)) {
        auto p = path;
        p.push_back(k);
        fail(p, "unknown field");
      }
    }
  }

 private:
  const json& root_;
  const Locator& loc_;
  const json null_ = nullptr;
};

Scenario read(const json& root, const Locator& loc) {
  Reader r(root, loc);
  r.only({}, {"id", "params", "initial", "disturbance", "species", "epsilon", "integrator",
              "output"});
  Scenario sc;
  sc.id = r.has({"id"}) ? r.text({"id"}) : std::string();

  r.only({"params"}, {"m", "a"});
  try {
    sc.params = ModelParams(r.number({"params", "m"}), r.number({"params", "a"}));
  } catch (const std::invalid_argument& e) {
    r.fail({"params", "m"}, e.what());
  }

  r.only({"initial"}, {"S", "x", "y"});
  const double S0 = r.number({"initial", "S"});
  const double x0 = r.number({"initial", "x"});
  if (!(S0 > 0.0)) r.fail({"initial", "S"}, "S0 must be > 0");
  if (!(x0 > 0.0)) r.fail({"initial", "x"}, "x0 must be > 0");
  sc.initial = {S0, x0};
  if (r.has({"initial", "y"})) {
    const json& ys = r.node({"initial", "y"});
    if (!ys.is_array()) r.fail({"initial", "y"}, "expected an array");
    for (const auto& v : ys) {
      if (!v.is_number() || !(v.get<double>() >= 0.0)) {
        r.fail({"initial", "y"}, "entries must be numbers >= 0");
      }
      sc.initial.push_back(v.get<double>());
    }
  }

  // Integrator first: the random disturbance depends on h.
  if (r.has({"integrator"})) {
    r.only({"integrator"}, {"h", "t0", "tf", "record_every", "method", "rel_tol", "abs_tol",
                            "positivity_floor", "max_halvings"});
    auto& ic = sc.integrator;
    ic.h = r.number_or({"integrator", "h"}, ic.h);
    ic.t0 = r.number_or({"integrator", "t0"}, ic.t0);
    ic.tf = r.number_or({"integrator", "tf"}, ic.tf);
    const double every = r.number_or({"integrator", "record_every"},
                                     static_cast<double>(ic.record_every));
    if (!(every >= 1.0) || every != static_cast<double>(static_cast<std::size_t>(every))) {
      r.fail({"integrator", "record_every"}, "must be a positive integer");
    }
    ic.record_every = static_cast<std::size_t>(every);
    if (r.has({"integrator", "method"})) {
      try {
        ic.method = step_method_from_string(r.text({"integrator", "method"}));
      } catch (const std::invalid_argument& e) {
        r.fail({"integrator", "method"}, e.what());
      }
    }
    ic.rel_tol = r.number_or({"integrator", "rel_tol"}, ic.rel_tol);
    ic.abs_tol = r.number_or({"integrator", "abs_tol"}, ic.abs_tol);
    ic.positivity_floor = r.number_or({"integrator", "positivity_floor"}, ic.positivity_floor);
    ic.max_halvings = static_cast<int>(
        r.number_or({"integrator", "max_halvings"}, static_cast<double>(ic.max_halvings)));
    try {
      ic.validate();
    } catch (const std::invalid_argument& e) {
      r.fail({"integrator"}, e.what());
    }
  }

  const std::vector<std::string> d = {"disturbance"};
  auto at = [&](const char* key) {
    auto p = d;
    p.push_back(key);
    return p;
  };
  auto& dc = sc.disturbance;
  try {
    dc.kind = disturbance_kind_from_string(r.text(at("kind")));
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    r.fail(at("kind"), e.what());
  }
  dc.ubar = r.number(at("ubar"));
  if (!(dc.ubar >= 0.0)) r.fail(at("ubar"), "must be >= 0");
  try {
    dc.mode = disturbance_mode_from_string(r.text(at("mode")));
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    r.fail(at("mode"), e.what());
  }
  switch (dc.kind) {
    case DisturbanceKind::zero:
      r.only(d, {"kind", "ubar", "mode"});
      break;
    case DisturbanceKind::exp_decay: {
      r.only(d, {"kind", "ubar", "mode", "amplitude", "rate", "channel"});
      dc.amplitude = r.number(at("amplitude"));
      dc.rate = r.number(at("rate"));
      const double ch = r.number(at("channel"));
      if (ch != 1.0 && ch != 2.0) r.fail(at("channel"), "must be 1 or 2");
      dc.channel = static_cast<int>(ch);
      if (std::abs(dc.amplitude) > dc.ubar) r.fail(at("amplitude"), "exceeds ubar");
      if (!(dc.rate >= 0.0)) r.fail(at("rate"), "must be >= 0");
      break;
    }
    case DisturbanceKind::constant:
      r.only(d, {"kind", "ubar", "mode", "u1", "u2"});
      dc.u1 = r.number(at("u1"));
      dc.u2 = r.number(at("u2"));
      if (std::abs(dc.u1) > dc.ubar) r.fail(at("u1"), "exceeds ubar");
      if (std::abs(dc.u2) > dc.ubar) r.fail(at("u2"), "exceeds ubar");
      break;
    case DisturbanceKind::random: {
      r.only(d, {"kind", "ubar", "mode", "seed", "interval"});
      const json& seed = r.node(at("seed"));
      if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
        r.fail(at("seed"), "expected a non-negative integer");
      }
      dc.seed = seed.get<std::uint64_t>();
      dc.interval = r.number_or(at("interval"), 0.0);
      if (dc.interval < 0.0) r.fail(at("interval"), "must be >= 0");
      break;
    }
  }
  if (!(dc.ubar < dilution_bounds(sc.params).d_o)) {
    r.fail(at("ubar"), "must be below d_o");
  }

  if (r.has({"species"})) {
    const json& list = r.node({"species"});
    if (!list.is_array()) r.fail({"species"}, "expected an array");
    for (const auto& g : list) {
      if (!g.is_object() || !g.contains("m") || !g.contains("a") || g.size() != 2 ||
          !g["m"].is_number() || !g["a"].is_number()) {
        r.fail({"species"}, "each entry must be {\"m\": number, \"a\": number}");
      }
      sc.species.push_back({g["m"].get<double>(), g["a"].get<double>()});
    }
  }
  if (sc.initial.size() != sc.species.size() + 2) {
    r.fail({"initial", "y"}, "needs one initial value per entry of species");
  }
  if (!sc.species.empty()) {
    sc.epsilon = r.number({"epsilon"});
    if (dc.kind != DisturbanceKind::zero) {
      r.fail(at("kind"), "multi-species scenarios use the unperturbed model (kind must be zero)");
    }
    try {
      validate_species(sc.species, dilution_bounds(sc.params).d_o);
      (void)multi_certificate(sc.params, sc.species, sc.epsilon, 0.0);
    } catch (const std::invalid_argument& e) {
      r.fail({"species"}, e.what());
    }
  } else if (r.has({"epsilon"})) {
    sc.epsilon = r.number({"epsilon"});
  }

  if (r.has({"output"})) {
    r.only({"output"}, {"trajectory"});
    if (r.has({"output", "trajectory"})) sc.trajectory_out = r.text({"output", "trajectory"});
  }
  return sc;
}

}  // namespace

ScenarioError::ScenarioError(const std::string& what, std::size_t line)
    : std::invalid_argument(what), line_(line) {}

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const Locator loc(&text);
    const std::size_t line = loc.line_at(e.byte > 0 ? e.byte - 1 : 0);
    throw ScenarioError("line " + std::to_string(line) + ": " + e.what(), line);
  }
  if (!root.is_object()) throw ScenarioError("line 1: scenario must be a JSON object", 1);
  const Locator loc(&text);
  return read(root, loc);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open scenario '" + path + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

Scenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ScenarioError("scenario must be a JSON object", 0);
  const Locator loc(nullptr);
  return read(j, loc);
}

nlohmann::json scenario_to_json(const Scenario& sc) {
  json j;
  j["id"] = sc.id;
  j["params"] = {{"m", sc.params.m()}, {"a", sc.params.a()}};
  j["initial"] = {{"S", sc.initial.at(0)}, {"x", sc.initial.at(1)}};
  if (sc.initial.size() > 2) {
    j["initial"]["y"] = std::vector<double>(sc.initial.begin() + 2, sc.initial.end());
  }
  const auto& dc = sc.disturbance;
  json d = {{"kind", to_string(dc.kind)}, {"ubar", dc.ubar}, {"mode", to_string(dc.mode)}};
  switch (dc.kind) {
    case DisturbanceKind::zero: break;
    case DisturbanceKind::exp_decay:
      d["amplitude"] = dc.amplitude;
      d["rate"] = dc.rate;
      d["channel"] = dc.channel;
      break;
    case DisturbanceKind::constant:
      d["u1"] = dc.u1;
      d["u2"] = dc.u2;
      break;
    case DisturbanceKind::random:
      d["seed"] = dc.seed;
      if (dc.interval > 0.0) d["interval"] = dc.interval;
      break;
  }
  j["disturbance"] = d;
  if (!sc.species.empty()) {
    json list = json::array();
    for (const auto& g : sc.species) list.push_back({{"m", g.m}, {"a", g.a}});
    j["species"] = list;
    j["epsilon"] = sc.epsilon;
  }
  const auto& ic = sc.integrator;
  j["integrator"] = {{"h", ic.h},
                     {"t0", ic.t0},
                     {"tf", ic.tf},
                     {"record_every", ic.record_every},
                     {"method", to_string(ic.method)},
                     {"rel_tol", ic.rel_tol},
                     {"abs_tol", ic.abs_tol},
                     {"positivity_floor", ic.positivity_floor},
                     {"max_halvings", ic.max_halvings}};
  if (!sc.trajectory_out.empty()) j["output"] = {{"trajectory", sc.trajectory_out}};
  return j;
}

SimulationContext scenario_context(const Scenario& sc) {
  const auto& ic = sc.integrator;
  SimulationContext ctx = make_context(sc.params, make_disturbance(sc.disturbance, ic.t0, ic.tf, ic.h),
                                       sc.species, sc.species.empty() ? 0.1 : sc.epsilon);
  ctx.scenario_id = sc.id;
  return ctx;
}

SimulationResult run_scenario(const Scenario& sc) {
  const SimulationContext ctx = scenario_context(sc);
  return simulate(ctx, sc.initial, sc.integrator);
}

}  // namespace chemostat
