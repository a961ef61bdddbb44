#include "semicov/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "semicov/error.hpp"
#include "semicov/semiconj1d.hpp"
#include "semicov/semiconj2d.hpp"
#include "semicov/stability.hpp"

namespace semicov {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const std::map<std::string, std::vector<std::string>>& command_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"semiconj1d", {"map", "orientation", "tol", "grid"}},
      {"rotation", {"map", "tol", "grid", "points"}},
      {"classify", {"map", "tol", "grid", "max_period"}},
      {"compare", {"a", "b", "tol", "grid", "max_period", "compare_tol"}},
      {"semiconj2d", {"map", "band", "tol", "nx", "ny"}},
      {"repellers", {"map", "connector", "depth"}},
      {"star-scan", {"map", "band", "nmax", "loop"}},
      {"counterexample-table", {"nmax"}},
      {"perturb", {"epsilon", "grid", "r_samples", "width", "seed"}},
  };
  return keys;
}

template <class Range>
std::string join(const Range& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : ", ") + std::string(n);
  return s;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ValidationError, what); }

void check_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) invalid(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      invalid("unknown key '" + key + "' in " + where + " (allowed: " + join(allowed) + ")");
    }
  }
}

double number(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) invalid("'" + key + "' must be a number");
  return obj[key].get<double>();
}

long integer(const json& obj, const std::string& key, long fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) invalid("'" + key + "' must be an integer");
  return obj[key].get<long>();
}

double positive(const json& obj, const std::string& key, double fallback) {
  const double v = number(obj, key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) invalid("'" + key + "' must be positive, got " + std::to_string(v));
  return v;
}

long at_least(const json& obj, const std::string& key, long fallback, long lo) {
  const long v = integer(obj, key, fallback);
  if (v < lo) invalid("'" + key + "' must be >= " + std::to_string(lo) + ", got " + std::to_string(v));
  return v;
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto > 0 ? upto - 1 : 0), '\n');
    throw Error(ErrorKind::ParseError, origin + " line " + std::to_string(line) + ": " + e.what());
  }
}

json resolve(const json& ref, const std::filesystem::path& base_dir, const std::string& key) {
  if (ref.is_object()) return ref;
  if (!ref.is_string()) invalid("'" + key + "' must be an object or a file path");
  const auto path = base_dir / ref.get<std::string>();
  if (!std::filesystem::exists(path)) invalid("'" + key + "' file not found: " + path.string());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

Interval parse_band(const json& v) {
  std::vector<double> ab;
  if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) invalid("'band' entries must be numbers");
      ab.push_back(e.get<double>());
    }
  } else if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        std::size_t used = 0;
        ab.push_back(std::stod(part, &used));
        if (part.find_first_not_of(' ', used) != std::string::npos) throw std::invalid_argument(part);
      } catch (const std::exception&) {
        invalid("'band' must look like a,b");
      }
    }
  } else {
    invalid("'band' must be [a, b] or \"a,b\"");
  }
  if (ab.size() != 2 || !(0.0 < ab[0] && ab[0] < ab[1] && ab[1] < 1.0)) invalid("'band' needs 0 < a < b < 1");
  return {ab[0], ab[1]};
}

BaseFn base_from_json(const json& spec) {
  static const std::vector<std::string> known{"identity", "affine", "power"};
  const json obj = spec.is_string() ? json{{"kind", spec}} : spec;
  if (!obj.is_object() || !obj.contains("kind") || !obj["kind"].is_string()) invalid("base needs a 'kind'");
  const auto kind = obj["kind"].get<std::string>();
  if (kind == "identity") {
    check_keys(obj, {"kind"}, "base");
    return base_identity();
  }
  if (kind == "affine") {
    check_keys(obj, {"kind", "slope", "offset"}, "base");
    return base_affine(number(obj, "slope", 1.0), number(obj, "offset", 0.0));
  }
  if (kind == "power") {
    check_keys(obj, {"kind", "p"}, "base");
    return base_power(positive(obj, "p", 2.0));
  }
  invalid("unknown base kind '" + kind + "' (known: " + join(known) + ")");
}

std::function<double(double)> tau_from_json(const json& obj) {
  static const std::vector<std::string> known{"poly", "pole", "sine"};
  if (!obj.is_object() || !obj.contains("kind") || !obj["kind"].is_string()) invalid("tau needs a 'kind'");
  const auto kind = obj["kind"].get<std::string>();
  if (kind == "poly") {
    check_keys(obj, {"kind", "coeffs"}, "tau");
    if (!obj.contains("coeffs") || !obj["coeffs"].is_array()) invalid("poly tau needs 'coeffs'");
    std::vector<double> c;
    for (const auto& e : obj["coeffs"]) {
      if (!e.is_number()) invalid("'coeffs' must be numbers");
      c.push_back(e.get<double>());
    }
    return [c](double x) {
      double v = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
      return v;
    };
  }
  if (kind == "pole") {
    check_keys(obj, {"kind", "scale"}, "tau");
    const double s = number(obj, "scale", 1.0);
    return [s](double x) { return s / (1.0 - x); };
  }
  if (kind == "sine") {
    check_keys(obj, {"kind", "amplitude", "frequency"}, "tau");
    const double a = number(obj, "amplitude", 0.1);
    const double f = number(obj, "frequency", 1.0);
    return [a, f](double x) { return a * std::sin(2.0 * M_PI * f * x); };
  }
  invalid("unknown tau kind '" + kind + "' (known: " + join(known) + ")");
}

int degree_of(const json& obj) {
  if (!obj.contains("degree")) invalid("map needs 'degree'");
  return static_cast<int>(integer(obj, "degree", 0));
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) invalid("cannot write " + path.string());
  f << content;
}

class Artifact {
 public:
  explicit Artifact(const RunConfig& c) : c_(c) {}

  std::string csv_head(const std::string& columns, const ordered_json& tolerances) const {
    std::string s = "# semicov " + c_.command + "\n# config_hash " + hex(config_hash(c_)) + "\n";
    for (const auto& [k, v] : tolerances.items()) s += "# " + k + " " + v.dump() + "\n";
    return s + columns + "\n";
  }

  ordered_json json_head(const ordered_json& tolerances) const {
    ordered_json j;
    j["command"] = c_.command;
    j["config_hash"] = hex(config_hash(c_));
    j["tolerances"] = tolerances;
    return j;
  }

  void emit(const std::string& content) const {
    if (!c_.out.empty()) write_file(c_.out, content);
  }

 private:
  const RunConfig& c_;
};

ordered_json signature_json(const IntervalSignature& s) {
  ordered_json j;
  j["orientation"] = s.orientation;
  j["identity"] = s.identity;
  j["resolved"] = s.resolved;
  j["fixed_point_count"] = s.fixed_point_count;
  j["sign_pattern"] = s.sign_pattern;
  j["left_attracting"] = s.left_attracting;
  j["right_attracting"] = s.right_attracting;
  return j;
}

ClassificationParams classification_params(const RunConfig& c) {
  ClassificationParams p;
  p.tol = c.tol;
  p.max_period = c.max_period;
  return p;
}

int run_semiconj1d(const RunConfig& c, std::ostream& log) {
  const auto map = circle_map_from_json(c.map, c.grid);
  const auto h = solve_semiconjugacy(map, c.orientation, c.tol);
  Artifact art(c);
  std::string out = art.csv_head("x,H", {{"tol", c.tol}, {"grid", map.grid_size()}});
  for (std::size_t i = 0; i <= h.grid_size(); ++i) out += fmt(h.node(i)) + "," + fmt(h.samples()[i]) + "\n";
  art.emit(out);
  log << "semiconj1d: degree " << map.degree() << ", iterations " << h.iterations() << ", residual "
      << fmt(h.residual()) << "\n";
  return kExitOk;
}

int run_rotation(const RunConfig& c, std::ostream& log) {
  const auto map = circle_map_from_json(c.map, c.grid);
  const auto h = solve_semiconjugacy(map, 1, c.tol);
  Artifact art(c);
  std::string out = art.csv_head("x,rho,direct,gap", {{"tol", c.tol}, {"grid", map.grid_size()}});
  double worst = 0.0;
  for (int i = 0; i < c.points; ++i) {
    const double x = static_cast<double>(i) / c.points;
    const auto r = rotation_number(map, h, x);
    worst = std::max(worst, r.gap);
    out += fmt(x) + "," + fmt(r.value) + "," + fmt(r.direct) + "," + fmt(r.gap) + "\n";
  }
  art.emit(out);
  log << "rotation: " << c.points << " points, max gap " << fmt(worst) << "\n";
  return kExitOk;
}

int run_classify(const RunConfig& c, std::ostream& log) {
  const auto map = circle_map_from_json(c.map, c.grid);
  const auto data = classification_data(map, classification_params(c));
  Artifact art(c);
  auto j = art.json_head({{"tol", data.tol}, {"grid", data.grid}, {"max_period", data.max_period}});
  j["degree"] = data.degree;
  j["records"] = ordered_json::array();
  for (const auto& r : data.records) {
    ordered_json rec;
    rec["image_angle"] = r.image_angle;
    rec["kind"] = to_string(r.kind);
    rec["interval"] = {r.interval.a, r.interval.b};
    rec["signature"] = signature_json(r.signature);
    j["records"].push_back(rec);
  }
  art.emit(j.dump(2) + "\n");
  log << "classify: degree " << data.degree << ", " << data.records.size() << " records\n";
  return kExitOk;
}

int run_compare(const RunConfig& c, std::ostream& log) {
  const auto a = classification_data(circle_map_from_json(c.map, c.grid), classification_params(c));
  const auto b = classification_data(circle_map_from_json(c.map_b, c.grid), classification_params(c));
  const auto v = compare_classification(a, b, c.compare_tol);
  Artifact art(c);
  auto j = art.json_head({{"tol", c.tol}, {"compare_tol", c.compare_tol}, {"grid", c.grid}});
  j["verdict"] = to_string(v.kind);
  j["reason"] = v.reason;
  if (v.relator) {
    j["relator"] = {{"rotation_index", v.relator->rotation_index}, {"reflect", v.relator->reflect},
                    {"order", v.relator->order}};
  }
  art.emit(j.dump(2) + "\n");
  log << "compare: " << to_string(v.kind) << (v.reason.empty() ? "" : " (" + v.reason + ")") << "\n";
  switch (v.kind) {
    case Verdict::Kind::Equivalent: return kExitOk;
    case Verdict::Kind::Distinct: return kExitNegative;
    case Verdict::Kind::Inconclusive: return kExitInconclusive;
  }
  return kExitError;
}

int run_semiconj2d(const RunConfig& c, std::ostream& log) {
  const auto map = annulus_map_from_json(c.map);
  const auto h = solve_band_semiconjugacy(map, c.band, c.tol, 0, {c.nx, c.ny});
  Artifact art(c);
  std::string out = art.csv_head("x,y,H", {{"tol", c.tol}, {"nx", c.nx}, {"ny", c.ny}});
  for (std::size_t i = 0; i <= h.nx(); ++i) {
    for (std::size_t j = 0; j <= h.ny(); ++j) out += fmt(h.x_node(i)) + "," + fmt(h.y_node(j)) + "," + fmt(h.at(i, j)) + "\n";
  }
  art.emit(out);
  const bool onto = check_fiber_surjectivity(h, c.band.mid());
  log << "semiconj2d: iterations " << h.iterations() << ", residual " << fmt(h.residual()) << ", M "
      << fmt(h.deviation_bound()) << ", fiber onto " << (onto ? "yes" : "no") << "\n";
  return kExitOk;
}

int run_repellers(const RunConfig& c, std::ostream& log) {
  const auto map = annulus_map_from_json(c.map);
  const auto conn = connector_from_json(c.connector);
  const auto rep = repelling_connectors(map, conn, c.depth);
  Artifact art(c);
  std::string out = art.csv_head("curve_id,x,y", {{"depth", c.depth}, {"expansion", rep.expansion}});
  for (std::size_t k = 0; k < rep.curves.size(); ++k) {
    const auto& curve = rep.curves[k];
    for (std::size_t i = 0; i < curve.xs().size(); ++i) {
      out += std::to_string(k) + "," + fmt(curve.xs()[i]) + "," + fmt(curve.ys()[i]) + "\n";
    }
  }
  art.emit(out);
  log << "repellers: " << rep.curves.size() << " curves, expansion " << fmt(rep.expansion);
  for (const auto& g : rep.gaps) log << ", final gap " << fmt(g.back());
  log << "\n";
  return kExitOk;
}

int run_star_scan(const RunConfig& c, std::ostream& log) {
  const auto map = annulus_map_from_json(c.map);
  const auto rep = star_condition_scan(map, c.band, c.loop, c.nmax);
  Artifact art(c);
  auto j = art.json_head({{"operator_tol", 1e-8}, {"nmax", c.nmax}});
  j["band"] = {c.band.a, c.band.b};
  j["loop"] = {{"x0", c.loop.x0}, {"theta0", c.loop.theta0}};
  j["M"] = rep.m;
  j["bound"] = rep.bound;
  j["max_winding"] = rep.max_winding;
  j["within_bound"] = rep.within_bound;
  j["records"] = ordered_json::array();
  for (const auto& r : rep.records) {
    j["records"].push_back(ordered_json{{"n", r.n}, {"j", r.j}, {"x", r.start.first}, {"y1", r.y1}, {"y2", r.y2},
                                        {"winding", r.winding}});
  }
  art.emit(j.dump(2) + "\n");
  log << "star-scan: M " << fmt(rep.m) << ", bound " << fmt(rep.bound) << ", max windings";
  for (long w : rep.max_winding) log << " " << w;
  log << (rep.within_bound ? ", within bound" : ", BOUND EXCEEDED") << "\n";
  return rep.within_bound ? kExitOk : kExitNegative;
}

int run_counterexample(const RunConfig& c, std::ostream& log) {
  const auto rows = counterexample_growth_table(c.nmax);
  Artifact art(c);
  std::string out = art.csv_head("n,lower_bound,verified", ordered_json::object());
  bool ok = true;
  log << "n lower_bound verified\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.lower_bound) + "," + (r.verified ? "1" : "0") + "\n";
    log << r.n << " " << r.lower_bound << " " << (r.verified ? "yes" : "no") << "\n";
    ok = ok && r.verified;
  }
  art.emit(out);
  return ok ? kExitOk : kExitNegative;
}

int run_perturb(const RunConfig& c, std::ostream& log) {
  const auto eps = EpsilonSpec::parse(c.epsilon);
  const auto rep = verify_perturbation(perturb_p2(eps), eps, c.samples, c.r_samples, c.width, c.seed);
  const bool ok = rep.sup_ratio < 1.0 && rep.r_invariant == rep.r_samples && rep.injective_certificate &&
                  rep.sampled_collisions == 0;
  Artifact art(c);
  auto j = art.json_head({{"epsilon", c.epsilon}, {"width", c.width}, {"seed", c.seed}});
  j["distance_samples"] = rep.distance_samples;
  j["sup_ratio"] = rep.sup_ratio;
  j["r_samples"] = rep.r_samples;
  j["r_invariant"] = rep.r_invariant;
  j["injective_certificate"] = rep.injective_certificate;
  j["min_fiber_slope"] = rep.min_fiber_slope;
  j["sampled_collisions"] = rep.sampled_collisions;
  j["noninjective_iterate"] = rep.noninjective_iterate;
  j["noninjective_formula"] = rep.noninjective_formula;
  j["verified"] = ok;
  art.emit(j.dump(2) + "\n");
  log << "perturb: sup ratio " << fmt(rep.sup_ratio) << ", R invariant " << rep.r_invariant << "/" << rep.r_samples
      << ", injective " << (rep.injective_certificate ? "yes" : "no") << ", p2 loses injectivity after "
      << rep.noninjective_iterate << " iterates\n";
  return ok ? kExitOk : kExitNegative;
}

}  // namespace

LiftedCircleMap circle_map_from_json(const json& spec, std::size_t default_grid) {
  static const std::vector<std::string> known{"linear", "sine", "samples", "blowup"};
  if (!spec.is_object() || !spec.contains("family") || !spec["family"].is_string()) {
    invalid("circle map needs a 'family' (known: " + join(known) + ")");
  }
  const auto family = spec["family"].get<std::string>();
  const auto grid = static_cast<std::size_t>(at_least(spec, "grid", static_cast<long>(default_grid), kMinSamples));
  if (family == "linear") {
    check_keys(spec, {"family", "degree", "c", "grid"}, "linear map");
    return make_linear(degree_of(spec), number(spec, "c", 0.0), grid);
  }
  if (family == "sine") {
    check_keys(spec, {"family", "degree", "amplitude", "grid"}, "sine map");
    return make_sine(degree_of(spec), number(spec, "amplitude", 0.1), grid);
  }
  if (family == "samples") {
    check_keys(spec, {"family", "values"}, "sampled map");
    if (!spec.contains("values") || !spec["values"].is_array()) invalid("sampled map needs 'values'");
    std::vector<double> v;
    for (const auto& e : spec["values"]) {
      if (!e.is_number()) invalid("'values' must be numbers");
      v.push_back(e.get<double>());
    }
    return make_lift(v);
  }
  if (family == "blowup") {
    check_keys(spec, {"family", "degree", "insertions", "grid", "max_depth", "min_cells"}, "blow-up map");
    if (!spec.contains("insertions") || !spec["insertions"].is_array()) invalid("blow-up needs 'insertions'");
    std::vector<Insertion> ins;
    for (const auto& e : spec["insertions"]) {
      check_keys(e, {"angle", "length", "kind"}, "insertion");
      Insertion i;
      i.base_angle = number(e, "angle", 0.0);
      i.length = positive(e, "length", 0.1);
      if (e.contains("kind")) {
        if (!e["kind"].is_string()) invalid("insertion 'kind' must be a string");
        i.kind = parse_insert_kind(e["kind"].get<std::string>());
      }
      ins.push_back(i);
    }
    BlowUpOptions opt;
    opt.grid = grid;
    opt.max_depth = static_cast<int>(at_least(spec, "max_depth", opt.max_depth, 0));
    opt.min_cells = positive(spec, "min_cells", opt.min_cells);
    return blow_up(degree_of(spec), ins, opt);
  }
  invalid("unknown circle map family '" + family + "' (known: " + join(known) + ")");
}

AnnulusMapLift annulus_map_from_json(const json& spec) {
  static const std::vector<std::string> known{"product", "pole", "skew", "circle", "perturbed_p2"};
  if (!spec.is_object() || !spec.contains("family") || !spec["family"].is_string()) {
    invalid("annulus map needs a 'family' (known: " + join(known) + ")");
  }
  const auto family = spec["family"].get<std::string>();
  auto base = [&] { return spec.contains("base") ? base_from_json(spec["base"]) : base_identity(); };
  if (family == "product") {
    check_keys(spec, {"family", "degree", "base"}, "product map");
    return product_model(degree_of(spec), base());
  }
  if (family == "pole") {
    check_keys(spec, {"family", "base"}, "pole map");
    return pole_example(base());
  }
  if (family == "skew") {
    check_keys(spec, {"family", "degree", "base", "tau"}, "skew map");
    auto tau = spec.contains("tau") ? tau_from_json(spec["tau"]) : std::function<double(double)>{};
    return make_skew_product(base(), fiber_linear(degree_of(spec), std::move(tau)), "skew");
  }
  if (family == "circle") {
    check_keys(spec, {"family", "base", "fiber", "tau"}, "circle-fiber map");
    if (!spec.contains("fiber")) invalid("circle-fiber map needs 'fiber'");
    auto tau = spec.contains("tau") ? tau_from_json(spec["tau"]) : std::function<double(double)>{};
    return make_skew_product(base(), fiber_circle_map(circle_map_from_json(spec["fiber"]), std::move(tau)), "circle");
  }
  if (family == "perturbed_p2") {
    check_keys(spec, {"family", "epsilon"}, "perturbed p2");
    if (spec.contains("epsilon") && !spec["epsilon"].is_string()) invalid("'epsilon' must be a string like \"0.1\"");
    return perturb_p2(EpsilonSpec::parse(spec.value("epsilon", std::string("0.1"))));
  }
  invalid("unknown annulus map family '" + family + "' (known: " + join(known) + ")");
}

ConnectorCurve connector_from_json(const json& spec) {
  if (!spec.is_object()) invalid("connector must be an object");
  check_keys(spec, {"height", "samples", "margin", "xs", "ys"}, "connector");
  const double margin = positive(spec, "margin", kBoundaryMargin);
  if (spec.contains("xs") || spec.contains("ys")) {
    if (!spec.contains("xs") || !spec.contains("ys") || !spec["xs"].is_array() || !spec["ys"].is_array()) {
      invalid("connector needs both 'xs' and 'ys'");
    }
    return ConnectorCurve(spec["xs"].get<std::vector<double>>(), spec["ys"].get<std::vector<double>>(), margin);
  }
  return ConnectorCurve::horizontal(number(spec, "height", 0.25),
                                    static_cast<std::size_t>(at_least(spec, "samples", 256, 1)), margin);
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json j = parse_json(text, "config");
  if (!j.is_object()) invalid("config must be a JSON object");
  if (!j.contains("command") || !j["command"].is_string()) invalid("config needs a 'command'");
  RunConfig c;
  c.command = j["command"].get<std::string>();
  const auto& table = command_keys();
  const auto it = table.find(c.command);
  if (it == table.end()) {
    std::vector<std::string> names;
    for (const auto& [name, keys] : table) names.push_back(name);
    invalid("unknown command '" + c.command + "' (known: " + join(names) + ")");
  }
  auto allowed = it->second;
  allowed.insert(allowed.end(), {"command", "out"});
  check_keys(j, allowed, "config");

  for (const char* key : {"map", "a", "b", "connector"}) {
    if (j.contains(key)) j[key] = resolve(j[key], base_dir, key);
  }
  const bool circle = c.command == "semiconj1d" || c.command == "rotation" || c.command == "classify";
  const bool annulus = c.command == "semiconj2d" || c.command == "repellers" || c.command == "star-scan";
  if ((circle || annulus) && !j.contains("map")) invalid("'" + c.command + "' needs 'map'");
  if (c.command == "compare" && (!j.contains("a") || !j.contains("b"))) invalid("'compare' needs 'a' and 'b'");
  if (c.command == "repellers" && !j.contains("connector")) invalid("'repellers' needs 'connector'");

  c.tol = positive(j, "tol", c.tol);
  if (c.command != "perturb") {
    c.grid = static_cast<std::size_t>(at_least(j, "grid", static_cast<long>(c.grid), kMinSamples));
  }
  if (j.contains("orientation")) {
    const auto& o = j["orientation"];
    if (o == "+" || o == 1) c.orientation = 1;
    else if (o == "-" || o == -1) c.orientation = -1;
    else invalid("'orientation' must be +, -, 1 or -1");
  }
  if (j.contains("band")) c.band = parse_band(j["band"]);
  c.nx = static_cast<std::size_t>(at_least(j, "nx", static_cast<long>(c.nx), 1));
  c.ny = static_cast<std::size_t>(at_least(j, "ny", static_cast<long>(c.ny), 2));
  c.depth = static_cast<int>(at_least(j, "depth", c.depth, 1));
  c.nmax = static_cast<int>(at_least(j, "nmax", c.nmax, c.command == "counterexample-table" ? 2 : 1));
  c.points = static_cast<int>(at_least(j, "points", c.points, 1));
  c.max_period = static_cast<int>(at_least(j, "max_period", c.max_period, 1));
  c.compare_tol = positive(j, "compare_tol", c.compare_tol);
  if (j.contains("loop")) {
    check_keys(j["loop"], {"x0", "theta0"}, "loop");
    c.loop.x0 = number(j["loop"], "x0", c.loop.x0);
    c.loop.theta0 = number(j["loop"], "theta0", c.loop.theta0);
    if (!(c.loop.x0 > 0.0 && c.loop.x0 < 1.0)) invalid("'loop.x0' must lie in (0,1)");
  }
  if (j.contains("epsilon")) {
    if (!j["epsilon"].is_string()) invalid("'epsilon' must be a string like \"0.1\" or \"0.1,2\"");
    c.epsilon = j["epsilon"].get<std::string>();
  }
  if (c.command == "perturb") {
    try {
      EpsilonSpec::parse(c.epsilon);
    } catch (const Error& e) {
      invalid(std::string("'epsilon': ") + e.what());
    }
    c.samples = static_cast<std::size_t>(at_least(j, "grid", static_cast<long>(c.samples), 1));
  }
  c.r_samples = static_cast<std::size_t>(at_least(j, "r_samples", static_cast<long>(c.r_samples), 1));
  c.width = positive(j, "width", c.width);
  c.seed = static_cast<std::uint64_t>(at_least(j, "seed", static_cast<long>(c.seed), 0));
  if (j.contains("out")) {
    if (!j["out"].is_string()) invalid("'out' must be a path");
    c.out = j["out"].get<std::string>();
  }

  if (c.command == "compare") {
    c.map = j["a"];
    c.map_b = j["b"];
    circle_map_from_json(c.map, c.grid);
    circle_map_from_json(c.map_b, c.grid);
  } else if (circle) {
    c.map = j["map"];
    circle_map_from_json(c.map, c.grid);
  } else if (annulus) {
    c.map = j["map"];
    annulus_map_from_json(c.map);
  }
  if (c.command == "repellers") {
    c.connector = j["connector"];
    connector_from_json(c.connector);
  }
  c.source = j;
  c.source.erase("out");  // where the artifact goes does not change its content
  return c;
}

std::uint64_t config_hash(const RunConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : config.source.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

int run(const RunConfig& config, std::ostream& log) {
  static const std::map<std::string, int (*)(const RunConfig&, std::ostream&)> dispatch{
      {"semiconj1d", run_semiconj1d}, {"rotation", run_rotation},     {"classify", run_classify},
      {"compare", run_compare},       {"semiconj2d", run_semiconj2d}, {"repellers", run_repellers},
      {"star-scan", run_star_scan},   {"counterexample-table", run_counterexample},
      {"perturb", run_perturb},
  };
  try {
    const auto it = dispatch.find(config.command);
    if (it == dispatch.end()) invalid("unknown command '" + config.command + "'");
    return it->second(config, log);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace semicov
