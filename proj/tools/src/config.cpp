#include "adiaband_cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

namespace adiaband::cli {

using nlohmann::json;

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::moyal_check: return "moyal_check";
    case Experiment::projector_build: return "projector_build";
    case Experiment::orthogonality: return "orthogonality";
    case Experiment::factorization: return "factorization";
    case Experiment::magnetic_well: return "magnetic_well";
    case Experiment::degennes: return "degennes";
    case Experiment::functional_calculus: return "functional_calculus";
  }
  return "?";
}

namespace {

// Typed access to one JSON object; every read records the key so leftovers
// can be reported as unknown.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return path_ + "/" + key; }
  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& raw(const std::string& key) {
    if (!has(key)) throw ConfigError(at(key), "required field missing");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(at(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(at(key), "must be finite");
    return d;
  }
  double number(const std::string& key, double dflt) { return has(key) ? number(key) : dflt; }

  double positive(const std::string& key, double dflt) {
    const double d = number(key, dflt);
    if (!(d > 0)) throw ConfigError(at(key), "must be positive");
    return d;
  }

  long long integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
    return v.get<long long>();
  }
  int integer(const std::string& key, int dflt, int lo, int hi) {
    const long long v = has(key) ? integer(key) : dflt;
    if (v < lo || v > hi)
      throw ConfigError(at(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
  }

  bool boolean(const std::string& key, bool dflt) {
    if (!has(key)) return dflt;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string");
    return v.get<std::string>();
  }

  Node child(const std::string& key) { return Node(raw(key), at(key)); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double finite_entry(const json& v, const std::string& path, bool allow_inf) {
  if (allow_inf && v.is_string() && v.get<std::string>() == "inf") return kDirichlet;
  if (!v.is_number()) throw ConfigError(path, allow_inf ? "expected a number or \"inf\"" : "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
  return d;
}

std::vector<double> number_list(Node& n, const std::string& key, bool allow_inf = false) {
  const json& v = n.raw(key);
  if (!v.is_array() || v.empty()) throw ConfigError(n.at(key), "expected a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(finite_entry(v[i], n.at(key) + "/" + std::to_string(i), allow_inf));
  return out;
}

std::vector<double> h_list(Node& n) {
  auto h = number_list(n, "h_values");
  for (std::size_t i = 0; i < h.size(); ++i) {
    const std::string p = n.at("h_values") + "/" + std::to_string(i);
    if (!(h[i] > 0 && h[i] < 1)) throw ConfigError(p, "h must lie in (0, 1)");
    if (i > 0 && !(h[i] < h[i - 1])) throw ConfigError(p, "h values must be strictly decreasing");
  }
  if (h.size() < 5) throw ConfigError(n.at("h_values"), "slope fits need at least 5 h values");
  return h;
}

PhaseSpaceGrid parse_grid(Node g) {
  PhaseSpaceGrid out;
  const std::string b = g.string("boundary");
  if (b == "periodic") out.boundary = Boundary::periodic;
  else if (b == "clamped") out.boundary = Boundary::clamped;
  else throw ConfigError(g.at("boundary"), "expected \"periodic\" or \"clamped\"");
  out.x_min = g.number("x_min");
  out.x_max = g.number("x_max");
  out.xi_min = g.number("xi_min");
  out.xi_max = g.number("xi_max");
  if (!(out.x_max > out.x_min)) throw ConfigError(g.at("x_max"), "must exceed x_min");
  if (!(out.xi_max > out.xi_min)) throw ConfigError(g.at("xi_max"), "must exceed xi_min");
  out.n_x = g.integer("n_x", 0, 8, 4096);
  out.n_xi = g.integer("n_xi", 0, 8, 4096);
  out.margin_cells = g.integer("margin_cells", 0, 0, 64);
  if (out.boundary == Boundary::periodic && out.margin_cells != 0)
    throw ConfigError(g.at("margin_cells"), "periodic grids have no margin");
  out.fd_order = g.integer("fd_order", 4, 2, 12);
  if (out.fd_order % 2) throw ConfigError(g.at("fd_order"), "must be even");
  g.finish();
  try {
    out.validate();
  } catch (const std::exception& e) {
    throw ConfigError(g.path(), e.what());
  }
  return out;
}

// [[i, j, c], ...] = sum c s1^i s2^j
Poly2 parse_poly(Node& n, const std::string& key, Poly2 dflt) {
  if (!n.has(key)) return dflt;
  const json& v = n.raw(key);
  const std::string path = n.at(key);
  if (!v.is_array()) throw ConfigError(path, "expected an array of [i, j, c] terms");
  Poly2 p;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string pk = path + "/" + std::to_string(k);
    const json& t = v[k];
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer())
      throw ConfigError(pk, "expected [i, j, c] with integer exponents");
    const int i = t[0].get<int>(), j = t[1].get<int>();
    if (i < 0 || j < 0 || i + j > 8) throw ConfigError(pk, "exponents must be >= 0 with i + j <= 8");
    p += Poly2::monomial(i, j, finite_entry(t[2], pk + "/2", false));
  }
  return p;
}

ModelConfig parse_model(Node m, Experiment e) {
  ModelConfig out;
  out.name = m.string("name");
  static const std::set<std::string> symbol_models = {"two_level", "dirac", "xi_only", "magnetic_well"};
  if (!symbol_models.count(out.name))
    throw ConfigError(m.at("name"), "unknown model \"" + out.name + "\"");
  const bool well_only = e == Experiment::magnetic_well || e == Experiment::functional_calculus;
  if (well_only && out.name != "magnetic_well")
    throw ConfigError(m.at("name"), "this experiment needs the magnetic_well model");
  if (out.name == "dirac") out.delta = m.positive("delta", 1.0);
  if (out.name == "magnetic_well") {
    out.well.B_dot = parse_poly(m, "B_dot", Poly2::constant(1.0));
    out.well.V_dot = parse_poly(m, "V_dot", Poly2());
    out.well.alpha_dot = parse_poly(m, "alpha_dot", Poly2());
    out.well.J = m.integer("J", 2, 0, kMaxMagneticTaylorOrder);
    out.well.b0 = m.positive("b0", 1.0);
  }
  m.finish();
  return out;
}

GapSpec parse_gap(Node g) {
  const std::string mode = g.string("mode");
  const double delta = g.positive("delta", 0.0);
  GapSpec out;
  if (mode == "window") {
    const double lo = g.number("lo"), hi = g.number("hi");
    if (!(hi > lo)) throw ConfigError(g.at("hi"), "must exceed lo");
    out = GapSpec::window(lo, hi, delta);
  } else if (mode == "bands") {
    const int first = g.integer("first", 0, 0, 1 << 20);
    const int last = g.integer("last", first, first, 1 << 20);
    out = GapSpec::bands(first, last, delta);
  } else {
    throw ConfigError(g.at("mode"), "expected \"window\" or \"bands\"");
  }
  g.finish();
  return out;
}

Experiment parse_experiment(Node& n) {
  const std::string s = n.string("experiment");
  for (auto e : {Experiment::moyal_check, Experiment::projector_build, Experiment::orthogonality,
                 Experiment::factorization, Experiment::magnetic_well, Experiment::degennes,
                 Experiment::functional_calculus})
    if (to_string(e) == s) return e;
  throw ConfigError(n.at("experiment"), "unknown experiment \"" + s + "\"");
}

}  // namespace

RunConfig parse_config(const json& doc) {
  Node root(doc, "");
  RunConfig c;
  c.document = doc;

  if (root.integer("schema_version") != kSchemaVersion)
    throw ConfigError("/schema_version", "unsupported schema version (expected 1)");
  c.experiment = parse_experiment(root);
  if (root.has("seed")) {
    const json& s = root.raw("seed");
    if (!s.is_number_unsigned()) throw ConfigError("/seed", "expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (root.has("output_dir")) c.output_dir = root.string("output_dir");
  c.size_cap = root.integer("size_cap", kDefaultSizeCap, 16, 1 << 15);

  const Experiment e = c.experiment;
  const bool symbolic = e != Experiment::degennes;
  if (symbolic) {
    c.grid = parse_grid(root.child("grid"));
    c.h_values = h_list(root);
    c.K = root.integer("K", e == Experiment::moyal_check ? 3 : 1, 0, 8);
  }
  switch (e) {
    case Experiment::moyal_check:
      c.base_n = root.integer("base_n", 32, 8, 256);
      break;
    case Experiment::projector_build:
    case Experiment::orthogonality:
    case Experiment::factorization: {
      c.model = parse_model(root.child("model"), e);
      if (c.model.name == "magnetic_well") c.fiber_m = root.integer("fiber_m", 12, 2, 64);
      c.gap = parse_gap(root.child("gap"));
      if (e == Experiment::orthogonality) c.gap2 = parse_gap(root.child("gap2"));
      if (root.has("solver")) {
        const std::string s = root.string("solver");
        if (s == "basis") c.solver = NodeSolver::basis;
        else if (s == "eigen") c.solver = NodeSolver::eigen;
        else if (s == "contour") c.solver = NodeSolver::contour;
        else throw ConfigError("/solver", "expected \"basis\", \"eigen\" or \"contour\"");
      }
      if (e == Experiment::factorization && root.has("gauge")) {
        const std::string s = root.string("gauge");
        if (s == "equal") c.gauge = GaugeSplit::equal;
        else if (s == "left_only") c.gauge = GaugeSplit::left_only;
        else throw ConfigError("/gauge", "expected \"equal\" or \"left_only\"");
      }
      break;
    }
    case Experiment::magnetic_well:
      c.model = parse_model(root.child("model"), e);
      c.fiber_m = root.integer("fiber_m", 12, 2, 64);
      c.base_n = root.integer("base_n", 256, 16, 4096);
      c.box_factor = root.positive("box_factor", 20.0);
      c.window_C = root.positive("window_C", 2.0);
      c.quasimodes = root.boolean("quasimodes", true);
      c.spectral_slope_min = root.number("spectral_slope_min", 2.3);
      if (!root.has("K")) c.K = c.model.well.J;
      if (c.K > c.model.well.J) throw ConfigError("/K", "cannot exceed the Taylor order model/J");
      if (static_cast<long long>(c.fiber_m) * c.base_n > c.size_cap)
        throw ConfigError("/base_n", "fiber_m * base_n exceeds size_cap");
      break;
    case Experiment::functional_calculus:
      c.model = parse_model(root.child("model"), e);
      c.fiber_m = root.integer("fiber_m", 8, 2, 64);
      c.half_width = root.positive("half_width", 2.6);
      c.xi_reach = root.positive("xi_reach", 2.0);
      c.epsilon = root.positive("epsilon", 0.2);
      if (c.K > c.model.well.J) throw ConfigError("/K", "cannot exceed the Taylor order model/J");
      break;
    case Experiment::degennes: {
      c.gammas = number_list(root, "gammas", true);
      for (std::size_t i = 0; i < c.gammas.size(); ++i)
        if (c.gammas[i] < 0) throw ConfigError("/gammas/" + std::to_string(i), "must be >= 0 or \"inf\"");
      c.sigmas = number_list(root, "sigmas");
      c.n_max = root.integer("n_max", 2, 1, 8);
      c.minima = root.boolean("minima", true);
      break;
    }
  }
  root.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot read " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

std::string config_hash(const json& doc) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : doc.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace adiaband::cli
