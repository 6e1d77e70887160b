#include "lrlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "lrlab/linalg.hpp"

namespace lrlab {

using nlohmann::json;

int LatticeConfig::num_qubits() const {
  if (type == "chain") return n;
  if (type == "torus2d") return nx * ny;
  return 2 * nx * ny;
}

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::string s = "invalid config:";
  for (const auto& i : issues) {
    s += "\n  ";
    if (i.line > 0) s += "line " + std::to_string(i.line) + ": ";
    if (!i.path.empty()) s += i.path + ": ";
    s += i.message;
  }
  return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"lightcone", "truncation", "correlation",         "holevo",
                                                 "entropy",   "tqo",        "circuit_lower_bound", "ghz"};
  return names;
}

namespace {

class Validator {
 public:
  std::vector<ConfigIssue> issues;

  void fail(const std::string& path, const std::string& msg) { issues.push_back({path, msg, 0}); }

  /// Rejects keys of `obj` outside `allowed`.
  bool object(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (const auto& [key, value] : obj.items())
      if (!allowed.count(key)) fail(path + "/" + key, "unknown key");
    return true;
  }

  template <class T, class Check>
  void number(const json& obj, const std::string& path, const char* key, T& out, Check check, const char* rule) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    const std::string p = path + "/" + key;
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) {
        fail(p, "expected an integer");
        return;
      }
      const auto x = v.get<long long>();
      if (!check(static_cast<double>(x))) {
        fail(p, std::string("must be ") + rule);
        return;
      }
      out = static_cast<T>(x);
    } else {
      if (!v.is_number()) {
        fail(p, "expected a number");
        return;
      }
      const double x = v.get<double>();
      if (!std::isfinite(x) || !check(x)) {
        fail(p, std::string("must be ") + rule);
        return;
      }
      out = x;
    }
  }

  void boolean(const json& obj, const std::string& path, const char* key, bool& out) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_boolean()) {
      fail(path + "/" + key, "expected true or false");
      return;
    }
    out = obj.at(key).get<bool>();
  }

  void choice(const json& obj, const std::string& path, const char* key, std::string& out,
              const std::vector<std::string>& options) {
    if (!obj.contains(key)) return;
    const std::string p = path + "/" + key;
    if (!obj.at(key).is_string()) {
      fail(p, "expected a string");
      return;
    }
    const auto s = obj.at(key).get<std::string>();
    if (std::find(options.begin(), options.end(), s) == options.end()) {
      std::string list;
      for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
      fail(p, "must be one of: " + list);
      return;
    }
    out = s;
  }

  void int_list(const json& obj, const std::string& path, const char* key, std::vector<int>& out, int min_value,
                bool increasing) {
    if (!obj.contains(key)) return;
    const std::string p = path + "/" + key;
    const json& v = obj.at(key);
    if (!v.is_array() || v.empty()) {
      fail(p, "expected a nonempty list of integers");
      return;
    }
    std::vector<int> xs;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer() || v[i].get<long long>() < min_value) {
        fail(p + "/" + std::to_string(i), "expected an integer >= " + std::to_string(min_value));
        return;
      }
      xs.push_back(v[i].get<int>());
    }
    if (increasing)
      for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] <= xs[i - 1]) {
          fail(p, "values must be strictly increasing");
          return;
        }
    out = xs;
  }

  /// Either a list of numbers or {start, stop, step} with stop included.
  void time_grid(const json& obj, const std::string& path, const char* key, std::vector<double>& out) {
    if (!obj.contains(key)) return;
    const std::string p = path + "/" + key;
    const json& v = obj.at(key);
    std::vector<double> ts;
    if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
          fail(p + "/" + std::to_string(i), "expected a number");
          return;
        }
        ts.push_back(v[i].get<double>());
      }
    } else if (v.is_object()) {
      if (!object(v, p, {"start", "stop", "step"})) return;
      double start = 0.0, stop = -1.0, step = 0.0;
      const std::size_t before = issues.size();
      number(v, p, "start", start, [](double x) { return x >= 0.0; }, ">= 0");
      number(v, p, "stop", stop, [](double x) { return x >= 0.0; }, ">= 0");
      number(v, p, "step", step, [](double x) { return x > 0.0; }, "> 0");
      for (const char* k : {"stop", "step"})
        if (!v.contains(k)) fail(p + "/" + k, "required");
      if (issues.size() != before) return;
      if (stop < start) {
        fail(p, "stop must be >= start");
        return;
      }
      const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
      if (count > 100000) {
        fail(p, "more than 100000 grid points");
        return;
      }
      for (long long k = 0; k < count; ++k) ts.push_back(start + static_cast<double>(k) * step);
    } else {
      fail(p, "expected a list of times or {start, stop, step}");
      return;
    }
    if (ts.empty()) {
      fail(p, "time grid is empty");
      return;
    }
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (!std::isfinite(ts[i]) || ts[i] < 0.0) {
        fail(p, "times must be finite and >= 0");
        return;
      }
      if (i > 0 && !(ts[i] > ts[i - 1])) {
        fail(p, "times must be strictly increasing");
        return;
      }
    }
    out = ts;
  }
};

const std::vector<std::string> kPauliNames = {"I", "X", "Y", "Z"};

struct ParamRule {
  enum class Kind { Number, PositiveNumber, Integer, PositiveInteger, IntList, Bool, Choice } kind;
  json fallback;
  std::vector<std::string> choices;
};

const std::map<std::string, std::map<std::string, ParamRule>>& param_rules() {
  using K = ParamRule::Kind;
  static const std::map<std::string, std::map<std::string, ParamRule>> rules = {
      {"lightcone",
       {{"path", {K::Choice, "auto", {"auto", "dense", "matrix-free"}}},
        {"theta", {K::PositiveNumber, nullptr, {}}},
        {"min_L", {K::PositiveInteger, 3, {}}}}},
      {"truncation", {}},
      {"correlation", {{"initial", {K::Choice, "plus", {"plus", "zero", "ghz"}}}}},
      {"holevo",
       {{"region_a", {K::IntList, json::array({0, 1}), {}}},
        {"region_b", {K::IntList, nullptr, {}}},
        {"initial", {K::Choice, "zero", {"zero", "plus"}}}}},
      {"entropy",
       {{"region_a", {K::IntList, nullptr, {}}},
        {"initial", {K::Choice, "zero", {"zero", "plus", "random-product", "schmidt-optimal"}}},
        {"rate_slack", {K::PositiveNumber, 1e-3, {}}}}},
      {"tqo",
       {{"pair", {K::Choice, "toric", {"toric", "ghz", "local-unitary"}}},
        {"hermitian_scan", {K::Bool, false, {}}},
        {"region_cap", {K::PositiveInteger, 10, {}}}}},
      {"circuit_lower_bound",
       {{"depths", {K::IntList, json::array({1, 2}), {}}},
        {"samples", {K::PositiveInteger, 3, {}}},
        {"l_f", {K::PositiveInteger, 1, {}}}}},
      {"ghz",
       {{"theta_c", {K::PositiveNumber, 0.5, {}}},
        {"g_scale", {K::PositiveNumber, 1.0, {}}},
        {"sample_dt", {K::PositiveNumber, 0.05, {}}}}},
  };
  return rules;
}

void validate_params(Validator& val, const json& doc, RunConfig& cfg) {
  const auto it = param_rules().find(cfg.experiment);
  if (it == param_rules().end()) return;
  json params = json::object();
  const json empty = json::object();
  const json& given = doc.contains("params") ? doc.at("params") : empty;
  std::set<std::string> allowed;
  for (const auto& [k, r] : it->second) allowed.insert(k);
  if (!val.object(given, "/params", allowed)) return;
  using K = ParamRule::Kind;
  for (const auto& [key, rule] : it->second) {
    const std::string p = "/params/" + key;
    if (!given.contains(key)) {
      if (!rule.fallback.is_null()) params[key] = rule.fallback;
      continue;
    }
    const json& v = given.at(key);
    switch (rule.kind) {
      case K::Number:
        if (!v.is_number()) val.fail(p, "expected a number");
        break;
      case K::PositiveNumber:
        if (!v.is_number() || !(v.get<double>() > 0.0) || !std::isfinite(v.get<double>()))
          val.fail(p, "must be a positive number");
        break;
      case K::Integer:
        if (!v.is_number_integer()) val.fail(p, "expected an integer");
        break;
      case K::PositiveInteger:
        if (!v.is_number_integer() || v.get<long long>() < 1) val.fail(p, "must be an integer >= 1");
        break;
      case K::IntList: {
        std::vector<int> xs;
        json wrapper = {{key, v}};
        val.int_list(wrapper, "/params", key.c_str(), xs, 0, false);
        break;
      }
      case K::Bool:
        if (!v.is_boolean()) val.fail(p, "expected true or false");
        break;
      case K::Choice: {
        std::string s;
        json wrapper = {{key, v}};
        val.choice(wrapper, "/params", key.c_str(), s, rule.choices);
        break;
      }
    }
    params[key] = v;
  }
  cfg.params = params;
}

void check_site(Validator& val, const std::string& path, int site, int n) {
  if (site < 0 || site >= n)
    val.fail(path, "site " + std::to_string(site) + " outside 0.." + std::to_string(n - 1));
}

void cross_checks(Validator& val, RunConfig& cfg) {
  const std::string& e = cfg.experiment;
  const int n = cfg.model.lattice.num_qubits();
  const std::string& lat = cfg.model.lattice.type;
  const std::string& model = cfg.model.name;
  if ((model == "toric") != (lat == "toric"))
    val.fail("/model/lattice/type", "the toric model needs the toric lattice and vice versa");
  auto need = [&](bool ok, const std::string& path, const std::string& msg) {
    if (!ok) val.fail(path, msg);
  };
  if (e == "lightcone") {
    need(!cfg.grid.L.empty(), "/grid/L", "required for lightcone");
    need(!cfg.grid.t.empty(), "/grid/t", "required for lightcone");
    need(model == "tfim" || model == "heisenberg", "/model/name", "lightcone needs tfim or heisenberg");
  } else if (e == "truncation") {
    need(!cfg.grid.l.empty(), "/grid/l", "required for truncation");
    need(!cfg.grid.t.empty(), "/grid/t", "required for truncation");
    need(model == "tfim" || model == "heisenberg", "/model/name", "truncation needs tfim or heisenberg");
  } else if (e == "correlation") {
    need(!cfg.grid.t.empty(), "/grid/t", "required for correlation");
    need(model != "toric", "/model/name", "correlation needs a spin-chain or torus model");
  } else if (e == "holevo") {
    need(!cfg.grid.t.empty(), "/grid/t", "required for holevo");
    need(model != "toric", "/model/name", "holevo needs a spin-chain or torus model");
  } else if (e == "entropy") {
    need(!cfg.grid.t.empty(), "/grid/t", "required for entropy");
    need(model != "toric", "/model/name", "entropy needs a spin-chain, torus or product model");
  } else if (e == "tqo") {
    need(!cfg.grid.l.empty(), "/grid/l", "required for tqo");
    if (cfg.params.value("pair", "") == "toric")
      need(lat == "toric", "/model/lattice/type", "the toric pair needs the toric lattice");
  } else if (e == "circuit_lower_bound") {
    need(lat == "toric", "/model/lattice/type", "circuit_lower_bound runs on the toric lattice");
  } else if (e == "ghz") {
    need(!cfg.grid.n.empty(), "/grid/n", "required for ghz");
    for (int k : cfg.grid.n) need(k >= 2, "/grid/n", "sizes must be >= 2");
  }
  if (e != "ghz" && e != "tqo" && e != "circuit_lower_bound") {
    check_site(val, "/observables/site_a", cfg.observables.site_a, n);
    if (cfg.observables.site_b) check_site(val, "/observables/site_b", *cfg.observables.site_b, n);
  }
  for (const char* key : {"region_a", "region_b"})
    if (cfg.params.contains(key))
      for (int q : cfg.params.at(key).get<std::vector<int>>())
        check_site(val, std::string("/params/") + key, q, n);
  if (model == "product") {
    need(cfg.observables.site_b.has_value(), "/observables/site_b", "the product model couples site_a and site_b");
    need(cfg.observables.site_b.value_or(-1) != cfg.observables.site_a, "/observables/site_b",
         "must differ from site_a");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ConfigError({{"", msg, line}});
  }
  Validator val;
  RunConfig cfg;
  cfg.document = doc;
  if (!val.object(doc, "", {"experiment", "seed", "output_dir", "threads", "model", "plan", "grid", "observables",
                            "bounds", "params"}))
    throw ConfigError(val.issues);

  if (!doc.contains("experiment")) {
    val.fail("/experiment", "required");
  } else {
    val.choice(doc, "", "experiment", cfg.experiment, experiment_names());
  }
  val.number(doc, "", "seed", cfg.seed, [](double x) { return x >= 0.0; }, ">= 0");
  val.number(doc, "", "threads", cfg.threads, [](double x) { return x >= 1.0 && x <= 256.0; }, "in 1..256");
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string() || doc.at("output_dir").get<std::string>().empty())
      val.fail("/output_dir", "expected a nonempty string");
    else
      cfg.output_dir = doc.at("output_dir").get<std::string>();
  }

  if (doc.contains("model") && val.object(doc.at("model"), "/model", {"name", "J", "h", "lattice"})) {
    const json& m = doc.at("model");
    val.choice(m, "/model", "name", cfg.model.name, {"tfim", "heisenberg", "toric", "product"});
    const auto any = [](double) { return true; };
    val.number(m, "/model", "J", cfg.model.J, any, "finite");
    val.number(m, "/model", "h", cfg.model.h, any, "finite");
    if (m.contains("lattice") &&
        val.object(m.at("lattice"), "/model/lattice", {"type", "n", "periodic", "nx", "ny"})) {
      const json& l = m.at("lattice");
      LatticeConfig& lc = cfg.model.lattice;
      val.choice(l, "/model/lattice", "type", lc.type, {"chain", "torus2d", "toric"});
      const auto at_least_2 = [](double x) { return x >= 2.0 && x <= 64.0; };
      val.number(l, "/model/lattice", "n", lc.n, at_least_2, "in 2..64");
      val.number(l, "/model/lattice", "nx", lc.nx, at_least_2, "in 2..64");
      val.number(l, "/model/lattice", "ny", lc.ny, at_least_2, "in 2..64");
      val.boolean(l, "/model/lattice", "periodic", lc.periodic);
    }
  }
  if (doc.contains("plan") && val.object(doc.at("plan"), "/plan", {"dt", "tolerance", "method"})) {
    const json& p = doc.at("plan");
    val.number(p, "/plan", "dt", cfg.plan.dt, [](double x) { return x > 0.0; }, "> 0");
    val.number(p, "/plan", "tolerance", cfg.plan.tolerance, [](double x) { return x > 0.0; }, "> 0");
    val.choice(p, "/plan", "method", cfg.plan.method, {"exact", "trotter1", "trotter2"});
  }
  if (doc.contains("grid") && val.object(doc.at("grid"), "/grid", {"L", "t", "l", "n"})) {
    const json& g = doc.at("grid");
    val.int_list(g, "/grid", "L", cfg.grid.L, 1, true);
    val.time_grid(g, "/grid", "t", cfg.grid.t);
    val.int_list(g, "/grid", "l", cfg.grid.l, 1, true);
    val.int_list(g, "/grid", "n", cfg.grid.n, 2, true);
  }
  if (doc.contains("observables") &&
      val.object(doc.at("observables"), "/observables", {"A", "B", "site_a", "site_b"})) {
    const json& o = doc.at("observables");
    val.choice(o, "/observables", "A", cfg.observables.a, kPauliNames);
    val.choice(o, "/observables", "B", cfg.observables.b, kPauliNames);
    val.number(o, "/observables", "site_a", cfg.observables.site_a, [](double x) { return x >= 0.0; }, ">= 0");
    int sb = -1;
    val.number(o, "/observables", "site_b", sb, [](double x) { return x >= 0.0; }, ">= 0");
    if (sb >= 0) cfg.observables.site_b = sb;
  }
  if (doc.contains("bounds") && val.object(doc.at("bounds"), "/bounds", {"c", "v", "xi"})) {
    const json& b = doc.at("bounds");
    BoundsConfig bc;
    const auto positive = [](double x) { return x > 0.0; };
    val.number(b, "/bounds", "c", bc.c, positive, "> 0");
    val.number(b, "/bounds", "v", bc.v, positive, "> 0");
    val.number(b, "/bounds", "xi", bc.xi, positive, "> 0");
    for (const char* k : {"c", "v", "xi"})
      if (!b.contains(k)) val.fail(std::string("/bounds/") + k, "required when bounds are given");
    cfg.bounds = bc;
  }
  if (!cfg.experiment.empty()) {
    validate_params(val, doc, cfg);
    if (val.issues.empty()) cross_checks(val, cfg);
  } else if (doc.contains("params")) {
    val.fail("/params", "cannot be checked without a valid experiment");
  }
  if (!val.issues.empty()) throw ConfigError(val.issues);
  return cfg;
}

}  // namespace lrlab
