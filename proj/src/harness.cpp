#include "hjsym/harness.hpp"

#include "json.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace hjsym {

using nlohmann::json;

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

double num(const json& j, const char* key, const std::string& where, std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where + " needs '" + key + "'");
  }
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError("'" + std::string(key) + "' in " + where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("'" + std::string(key) + "' in " + where + " must be finite");
  return x;
}

Vec2 point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(where + " must be a pair [x, y]");
  return Vec2(j[0].get<double>(), j[1].get<double>());
}

ShapeSpec parse_shape(const json& j) {
  const std::string where = "shape";
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw ConfigError("shape needs a string 'type'");
  const std::string type = j.at("type").get<std::string>();
  ShapeSpec s;
  if (j.contains("center")) s.center = point(j.at("center"), "shape center");
  s.rotation = num(j, "rotation", where, 0.0);
  if (type == "disk") {
    only_keys(j, {"type", "center", "rotation", "radius"}, where);
    s.shape = Disk{num(j, "radius", where)};
  } else if (type == "ellipse") {
    only_keys(j, {"type", "center", "rotation", "a", "b"}, where);
    s.shape = Ellipse{num(j, "a", where), num(j, "b", where)};
  } else if (type == "rectangle") {
    only_keys(j, {"type", "center", "rotation", "width", "length"}, where);
    s.shape = Rectangle{num(j, "width", where), num(j, "length", where)};
  } else if (type == "perturbed_disk") {
    only_keys(j, {"type", "center", "rotation", "radius", "amplitude", "mode"}, where);
    const double mode = num(j, "mode", where);
    if (mode != std::floor(mode) || mode < 0) throw ConfigError("perturbed_disk mode must be a non-negative integer");
    s.shape = PerturbedDisk{num(j, "radius", where), num(j, "amplitude", where), int(mode)};
  } else if (type == "two_disks") {
    only_keys(j, {"type", "center", "rotation", "r1", "r2", "gap"}, where);
    s.shape = TwoDisks{num(j, "r1", where), num(j, "r2", where), num(j, "gap", where)};
  } else if (type == "polygon") {
    only_keys(j, {"type", "center", "rotation", "vertices"}, where);
    if (!j.contains("vertices") || !j.at("vertices").is_array() || j.at("vertices").size() < 3)
      throw ConfigError("polygon needs at least three vertices");
    Polygon p;
    for (const json& v : j.at("vertices")) p.vertices.push_back(point(v, "polygon vertex"));
    s.shape = std::move(p);
  } else {
    throw ConfigError("unknown shape type '" + type + "'");
  }
  return s;
}

SourceSpec parse_source(const json& j) {
  const std::string where = "source";
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw ConfigError("source needs a string 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "const") {
    only_keys(j, {"type", "c"}, where);
    return ConstSource{num(j, "c", where)};
  }
  if (type == "radial_affine") {
    only_keys(j, {"type", "c0", "c1"}, where);
    return RadialAffineSource{num(j, "c0", where), num(j, "c1", where)};
  }
  if (type == "linear") {
    only_keys(j, {"type", "a1", "a2", "c"}, where);
    return LinearSource{num(j, "a1", where), num(j, "a2", where), num(j, "c", where)};
  }
  if (type == "expression") {
    only_keys(j, {"type", "expr"}, where);
    if (!j.contains("expr") || !j.at("expr").is_string()) throw ConfigError("expression source needs 'expr'");
    const std::string text = j.at("expr").get<std::string>();
    Expression check(text);  // parse errors surface here
    return ExpressionSource{text};
  }
  throw ConfigError("unknown source type '" + type + "'");
}

Constants parse_constants(const json& j) {
  only_keys(j, {"gamma_n", "r", "s", "C", "c_tol", "excess_exponent", "levels", "propagation_levels"}, "constants");
  Constants k;
  const std::string where = "constants";
  k.gamma_n = num(j, "gamma_n", where, k.gamma_n);
  k.r = num(j, "r", where, k.r);
  k.s = num(j, "s", where, k.s);
  k.C = num(j, "C", where, k.C);
  k.c_tol = num(j, "c_tol", where, k.c_tol);
  k.excess_exponent = num(j, "excess_exponent", where, k.excess_exponent);
  k.levels = int(num(j, "levels", where, k.levels));
  k.propagation_levels = int(num(j, "propagation_levels", where, k.propagation_levels));
  if (!(k.gamma_n > 0) || !(k.r > 0) || !(k.c_tol >= 0) || !(k.excess_exponent > 0 && k.excess_exponent < 1) ||
      k.levels < 1 || k.propagation_levels < 1)
    throw ConfigError("constants out of range");
  return k;
}

json shape_object(const ShapeSpec& s) {
  json j = std::visit(
      Overloaded{[](const Disk& d) { return json{{"type", "disk"}, {"radius", d.radius}}; },
                 [](const Ellipse& e) { return json{{"type", "ellipse"}, {"a", e.a}, {"b", e.b}}; },
                 [](const Rectangle& r) {
                   return json{{"type", "rectangle"}, {"width", r.width}, {"length", r.length}};
                 },
                 [](const PerturbedDisk& p) {
                   return json{{"type", "perturbed_disk"},
                               {"radius", p.radius},
                               {"amplitude", p.amplitude},
                               {"mode", p.mode}};
                 },
                 [](const TwoDisks& t) { return json{{"type", "two_disks"}, {"r1", t.r1}, {"r2", t.r2}, {"gap", t.gap}}; },
                 [](const Polygon& p) {
                   json v = json::array();
                   for (const auto& q : p.vertices) v.push_back(json::array({q.x(), q.y()}));
                   return json{{"type", "polygon"}, {"vertices", v}};
                 }},
      s.shape);
  j["center"] = json::array({s.center.x(), s.center.y()});
  j["rotation"] = s.rotation;
  j["h"] = s.spacing;
  return j;
}

json source_object(const SourceSpec& s) {
  return std::visit(Overloaded{[](const ConstSource& c) { return json{{"type", "const"}, {"c", c.c}}; },
                               [](const RadialAffineSource& r) {
                                 return json{{"type", "radial_affine"}, {"c0", r.c0}, {"c1", r.c1}};
                               },
                               [](const LinearSource& l) {
                                 return json{{"type", "linear"}, {"a1", l.a1}, {"a2", l.a2}, {"c", l.c}};
                               },
                               [](const ExpressionSource& e) { return json{{"type", "expression"}, {"expr", e.text}}; }},
                    s);
}

/// Runs fn(0..count-1) on up to `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, std::size_t(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}


}  // namespace

// ---------------------------------------------------------------------------
// Configs

ExperimentConfig parse_config(const std::string& json_text, const std::string& default_name) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(j, {"name", "h", "n", "shape", "source", "constants", "output"}, "config");
  ExperimentConfig c;
  c.name = default_name;
  if (j.contains("name")) {
    if (!j.at("name").is_string() || j.at("name").get<std::string>().empty())
      throw ConfigError("'name' must be a non-empty string");
    c.name = j.at("name").get<std::string>();
  }
  if (!j.contains("shape")) throw ConfigError("config needs 'shape'");
  if (!j.contains("source")) throw ConfigError("config needs 'source'");
  c.shape = parse_shape(j.at("shape"));
  c.source = parse_source(j.at("source"));
  if (j.contains("h") && j.contains("n")) throw ConfigError("give either 'h' or 'n', not both");
  if (j.contains("h")) c.shape.spacing = num(j, "h", "config");
  else if (j.contains("n")) c.shape.spacing = 1.0 / num(j, "n", "config");
  else throw ConfigError("config needs 'h' or 'n'");
  if (!(c.shape.spacing > 0.0)) throw ConfigError("h must be positive");
  if (j.contains("constants")) c.constants = parse_constants(j.at("constants"));
  if (j.contains("output")) {
    const json& o = j.at("output");
    only_keys(o, {"dir", "grids", "profiles"}, "output");
    if (o.contains("dir")) c.output.dir = o.at("dir").get<std::string>();
    if (o.contains("grids")) c.output.grids = o.at("grids").get<bool>();
    if (o.contains("profiles")) c.output.profiles = o.at("profiles").get<bool>();
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), path.stem().string());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<ExperimentConfig> load_configs(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) throw ConfigError("no such config: " + path.string());
  if (!fs::is_directory(path)) return {load_config(path)};
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("no *.json configs in " + path.string());
  std::vector<ExperimentConfig> out;
  for (const auto& f : files) out.push_back(load_config(f));
  return out;
}

void apply(const Overrides& o, ExperimentConfig& c) {
  if (o.h) {
    if (!(*o.h > 0.0)) throw ConfigError("--h must be positive");
    c.shape.spacing = *o.h;
  }
  if (o.gamma_n) {
    if (!(*o.gamma_n > 0.0)) throw ConfigError("--gamma-n must be positive");
    c.constants.gamma_n = *o.gamma_n;
  }
  if (o.c_tol) {
    if (!(*o.c_tol >= 0.0)) throw ConfigError("--ctol must be non-negative");
    c.constants.c_tol = *o.c_tol;
  }
}

std::string shape_json(const ShapeSpec& shape) { return shape_object(shape).dump(); }
std::string source_json(const SourceSpec& source) { return source_object(source).dump(); }

std::function<double(const Vec2&)> source_function(const SourceSpec& source, const ShapeSpec& shape) {
  const Vec2 c = shape.center;
  return std::visit(
      Overloaded{[](const ConstSource& s) -> std::function<double(const Vec2&)> {
                   return [v = s.c](const Vec2&) { return v; };
                 },
                 [c](const RadialAffineSource& s) -> std::function<double(const Vec2&)> {
                   return [s, c](const Vec2& x) { return s.c0 + s.c1 * (x - c).norm(); };
                 },
                 [](const LinearSource& s) -> std::function<double(const Vec2&)> {
                   return [s](const Vec2& x) { return s.a1 * x.x() + s.a2 * x.y() + s.c; };
                 },
                 [](const ExpressionSource& s) -> std::function<double(const Vec2&)> {
                   return [e = Expression(s.text)](const Vec2& x) { return e(x); };
                 }},
      source);
}

// ---------------------------------------------------------------------------
// Runs

Experiment prepare(const ExperimentConfig& config) {
  std::shared_ptr<const GridDomain> domain;
  try {
    domain = std::make_shared<const GridDomain>(rasterize(config.shape));
  } catch (const SolverError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(config.name + ": " + e.what());
  }
  GridFunction f = GridFunction::sample(domain, source_function(config.source, config.shape));
  for (Index c : domain->cells())
    if (!std::isfinite(f.at(c))) throw ConfigError(config.name + ": source is not finite on the domain");
  const double m = f.min_interior();
  if (!(m > 0.0)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", m);
    throw ConfigError(config.name + ": min f over the domain is " + buf + ", must be positive");
  }
  EikonalSolution sol = solve_eikonal(f, m);
  return Experiment{config, domain, std::move(f), m, std::move(sol)};
}

DeficitReport report(const Experiment& e) {
  ReportInput in;
  in.run_id = e.config.name;
  in.shape = shape_json(e.config.shape);
  in.source = source_json(e.config.source);
  in.constants = e.config.constants;
  return build_report(e.solution.u, e.f, e.m, in);
}

void write_artifacts(const Experiment& e, const DeficitReport& rep, const std::filesystem::path& dir) {
  write_text(dir / "report.json", report_to_json(rep));
  write_text(dir / "report.csv", report_to_csv(rep));
  if (e.config.output.grids) {
    std::ostringstream csv;
    write_grid_csv(e.solution.u, csv);
    write_text(dir / "u.csv", csv.str());
    std::ostringstream bin(std::ios::binary);
    write_grid_binary(e.solution.u, bin);
    write_text(dir / "u.bin", bin.str());
  }
  if (e.config.output.profiles) {
    const Symmetrization sym = symmetrize(e.solution.u, e.f);
    const auto step = [&](const char* name, const StepProfile& p) {
      std::ostringstream out;
      write_step_profile_csv(p.merged(), out);
      write_text(dir / "profiles" / name, out.str());
    };
    const auto radial = [&](const char* name, const RadialSolution& g) {
      std::ostringstream out;
      write_radial_csv(g, out);
      write_text(dir / "profiles" / name, out.str());
    };
    step("u_star.csv", sym.u_star);
    step("f_inc.csv", sym.f_inc);
    step("F.csv", sym.F);
    step("grad_sharp.csv", sym.grad_sharp);
    step("mu.csv", distribution_function(e.solution.u));
    std::ostringstream pl;
    write_pl_profile_csv(sym.u_pl, pl);
    write_text(dir / "profiles" / "u_pl.csv", pl.str());
    radial("uG.csv", sym.uG);
    radial("usharpG.csv", sym.usharpG);
    radial("g.csv", sym.g);
  }
}

std::vector<RunOutcome> run_batch(const std::vector<ExperimentConfig>& configs,
                                  const std::optional<std::filesystem::path>& out, int jobs) {
  std::vector<RunOutcome> outcomes(configs.size());
  parallel_for(configs.size(), jobs, [&](std::size_t i) {
    const ExperimentConfig& c = configs[i];
    RunOutcome& o = outcomes[i];
    o.name = c.name;
    if (out) o.dir = configs.size() == 1 ? *out : *out / c.name;
    else o.dir = c.output.dir.empty() ? std::filesystem::path("out") / c.name : c.output.dir;
    try {
      const Experiment e = prepare(c);
      DeficitReport rep = report(e);
      write_artifacts(e, rep, o.dir);
      if (rep.failed()) {
        o.code = exit_inequality;
        for (const auto& r : rep.rows)
          if (r.kind == RowKind::enforced && r.status == RowStatus::fail) o.message += (o.message.empty() ? "" : " ") + r.name;
      }
      o.report = std::move(rep);
    } catch (const ConfigError& e) {
      o.code = exit_config;
      o.message = e.what();
    } catch (const PreconditionError& e) {
      o.code = exit_config;
      o.message = e.what();
    } catch (const DegenerateDomainError& e) {
      o.code = exit_config;
      o.message = e.what();
    } catch (const std::exception& e) {
      o.code = exit_solver;
      o.message = e.what();
    }
  });
  return outcomes;
}

int combine_codes(const std::vector<RunOutcome>& outcomes) {
  int code = exit_ok;
  const auto rank = [](int c) { return c == exit_config ? 3 : c == exit_solver ? 2 : c == exit_inequality ? 1 : 0; };
  for (const auto& o : outcomes)
    if (rank(o.code) > rank(code)) code = o.code;
  return code;
}

// ---------------------------------------------------------------------------
// Convergence

std::optional<std::function<double(const Vec2&)>> exact_solution(const ExperimentConfig& config) {
  const auto* disk = std::get_if<Disk>(&config.shape.shape);
  if (!disk) return std::nullopt;
  const double R = disk->radius;
  const Vec2 c = config.shape.center;
  if (const auto* s = std::get_if<ConstSource>(&config.source))
    return [R, c, v = s->c](const Vec2& x) { return v * std::max(R - (x - c).norm(), 0.0); };
  if (const auto* s = std::get_if<RadialAffineSource>(&config.source))
    return [R, c, s = *s](const Vec2& x) {
      const double r = std::min((x - c).norm(), R);
      return s.c0 * (R - r) + 0.5 * s.c1 * (R * R - r * r);
    };
  return std::nullopt;
}

namespace {

/// Closed forms of report quantities where the config has them.
std::map<std::string, double> analytic_quantities(const ExperimentConfig& config) {
  std::map<std::string, double> q;
  const double pi = std::numbers::pi;
  if (const auto* disk = std::get_if<Disk>(&config.shape.shape)) {
    const double R = disk->radius;
    double c0 = 0.0, c1 = 0.0;
    if (const auto* s = std::get_if<ConstSource>(&config.source)) c0 = s->c;
    else if (const auto* s = std::get_if<RadialAffineSource>(&config.source)) c0 = s->c0, c1 = s->c1;
    else return q;
    q["u_l1"] = 2.0 * pi * (c0 * R * R * R / 6.0 + c1 * R * R * R * R / 8.0);
    q["alpha"] = 0.0;
    q["E"] = 0.0;
    q["T"] = 0.0;
    if (c1 >= 0.0) q["eps"] = 0.0;
    return q;
  }
  if (const auto* rect = std::get_if<Rectangle>(&config.shape.shape)) {
    const auto* s = std::get_if<ConstSource>(&config.source);
    if (!s) return q;
    const double w = std::min(rect->width, rect->length), l = std::max(rect->width, rect->length);
    const double area = w * l;
    q["u_l1"] = s->c * (l * w * w / 4.0 - w * w * w / 12.0);
    q["eps"] = s->c * std::pow(area, 1.5) / (3.0 * std::sqrt(pi)) - q["u_l1"];
    if (w == l) {
      // Ball of equal area centred in the square: four circular segments stick out.
      const double rho = w / std::sqrt(pi), d = 0.5 * w;
      const double segment = rho * rho * std::acos(d / rho) - d * std::sqrt(rho * rho - d * d);
      q["alpha"] = 8.0 * segment / area;
      q["E"] = 4.0 / pi - 1.0;
    }
  }
  return q;
}

}  // namespace

std::vector<ConvergenceRow> convergence(const ExperimentConfig& config, const std::vector<int>& levels) {
  if (levels.size() < 3) throw ConfigError("convergence needs at least three levels");
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] <= 0 || (i > 0 && levels[i] <= levels[i - 1]))
      throw ConfigError("levels must be positive and increasing");
  const auto exact = exact_solution(config);
  const auto analytic = analytic_quantities(config);
  const std::vector<std::string> names = {"eps", "u_l1", "usharpG_l1", "alpha", "E", "T"};

  std::vector<double> hs;
  std::map<std::string, std::vector<double>> values;
  for (int N : levels) {
    ExperimentConfig c = config;
    c.shape.spacing = 1.0 / N;
    const Experiment e = prepare(c);
    const DeficitReport rep = report(e);
    hs.push_back(c.shape.spacing);
    for (const auto& q : names) values[q].push_back(rep.quantity(q));
    if (exact) {
      double err = 0.0;
      for (Index cell : e.domain->cells())
        err = std::max(err, std::abs(e.solution.u.at(cell) - (*exact)(e.domain->center(cell))));
      values["linf_error"].push_back(err);
    }
  }

  std::vector<ConvergenceRow> rows;
  const auto emit = [&](const std::string& q, const std::vector<double>& v, double ref, const std::string& kind) {
    std::vector<double> err(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) err[i] = std::abs(v[i] - ref);
    for (std::size_t i = 0; i < v.size(); ++i) {
      ConvergenceRow r{q, hs[i], v[i], ref, kind, err[i], std::numeric_limits<double>::quiet_NaN()};
      if (i > 0 && err[i] > 0.0 && err[i - 1] > 0.0) r.order = std::log(err[i - 1] / err[i]) / std::log(hs[i - 1] / hs[i]);
      rows.push_back(r);
    }
  };
  if (exact) emit("linf_error", values["linf_error"], 0.0, "analytic");
  for (const auto& q : names) {
    const auto& v = values[q];
    if (auto it = analytic.find(q); it != analytic.end()) {
      emit(q, v, it->second, "analytic");
    } else {
      // First-order Richardson extrapolation from the two finest levels.
      const std::size_t n = v.size();
      const double hc = hs[n - 2], hf = hs[n - 1];
      const double ref = v[n - 1] + (v[n - 1] - v[n - 2]) * hf / (hc - hf);
      emit(q, v, ref, "richardson");
    }
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream out;
  out << "quantity,h,value,reference,reference_kind,error,order\n";
  for (const auto& r : rows)
    out << r.quantity << ',' << format_double(r.h) << ',' << format_double(r.value) << ',' << format_double(r.reference)
        << ',' << r.reference_kind << ',' << format_double(r.error) << ',' << format_double(r.order) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Verification suites

std::size_t VerifyResult::failures() const {
  return std::size_t(std::count_if(checks.begin(), checks.end(), [](const VerifyCheck& c) { return !c.passed; }));
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> s = {"rearrangement", "hl", "isoperimetric", "sandwich", "bounds", "rescaling"};
  return s;
}

std::vector<ExperimentConfig> case_matrix() {
  std::vector<std::pair<std::string, ShapeSpec>> shapes;
  {
    ShapeSpec s;
    s.shape = Disk{1.0};
    shapes.emplace_back("disk", s);
    s.shape = Ellipse{1.5, 2.0 / 3.0};
    shapes.emplace_back("ellipse", s);
    s.shape = Rectangle{1.0, 1.0};
    s.center = Vec2(0.5, 0.5);
    shapes.emplace_back("square", s);
    s.center = Vec2::Zero();
    s.shape = PerturbedDisk{1.0, 0.15, 2};
    shapes.emplace_back("perturbed", s);
    s.shape = TwoDisks{0.5, 0.5, 0.5};
    shapes.emplace_back("two_disks", s);
    s.shape = Polygon{{Vec2(-1, -1), Vec2(1, -1), Vec2(1, 0), Vec2(0, 0), Vec2(0, 1), Vec2(-1, 1)}};
    shapes.emplace_back("lshape", s);
  }
  const std::vector<std::pair<std::string, SourceSpec>> sources = {
      {"const", ConstSource{1.0}},
      {"radial", RadialAffineSource{1.0, -0.5}},
      {"linear", LinearSource{0.25, 0.125, 1.0}},
      {"expr", ExpressionSource{"0.75 + 0.25*x^2 + 0.125*abs(y)"}},
  };
  std::vector<ExperimentConfig> out;
  for (int N : {32, 64})
    for (const auto& [sn, shape] : shapes)
      for (const auto& [fn, source] : sources) {
        ExperimentConfig c;
        c.name = sn + "_" + fn + "_" + std::to_string(N);
        c.shape = shape;
        c.shape.spacing = 1.0 / N;
        c.source = source;
        c.output.grids = c.output.profiles = false;
        out.push_back(std::move(c));
      }
  return out;
}

namespace {

void add(std::vector<VerifyCheck>& out, const std::string& name, const std::string& check, double lhs, double rhs,
         double tol) {
  out.push_back({name, check, lhs, rhs, tol, lhs <= rhs + tol});
}

void exact(std::vector<VerifyCheck>& out, const std::string& name, const std::string& check, double a, double b) {
  out.push_back({name, check, a, b, 0.0, a == b});
}

std::vector<VerifyCheck> rearrangement_checks(const Experiment& e) {
  std::vector<VerifyCheck> out;
  const std::string& name = e.config.name;
  const GridFunction& u = e.solution.u;
  const StepProfile us = decreasing_rearrangement(u);
  const StepProfile fs = decreasing_rearrangement(e.f);
  for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
    const std::string tag = std::isinf(p) ? "inf" : std::to_string(int(p));
    exact(out, name, "norm_u_p" + tag, u.lp_norm(p), us.lp_norm(p));
    exact(out, name, "norm_f_p" + tag, e.f.lp_norm(p), fs.lp_norm(p));
  }
  const auto hl = hl_products(u, e.f);
  add(out, name, "hardy_littlewood", hl.lhs, hl.rhs, 0.0);

  // Same multisets: u* against |u|, F against f.
  std::vector<double> a = u.interior_values(), b(us.values().data(), us.values().data() + us.size());
  for (double& x : a) x = std::abs(x);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  exact(out, name, "equimeasurable_u", a == b ? 1.0 : 0.0, 1.0);
  const StepProfile F = pseudo_rearrangement(u, e.f);
  std::vector<double> fa = e.f.interior_values(), fb(F.values().data(), F.values().data() + F.size());
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  exact(out, name, "pseudo_multiset", fa == fb ? 1.0 : 0.0, 1.0);

  // u*(mu(t)) <= t and mu(u*(s)) <= s on sampled t, s.
  const StepProfile mu = distribution_function(u);
  const double top = us.max_value(), total = us.back();
  int bad_t = 0, bad_s = 0;
  for (int k = 0; k <= 64; ++k) {
    const double t = top * k / 64.0;
    if (us(mu(t)) > t) ++bad_t;
    const double s = total * k / 64.0;
    if (mu(us(s)) > s) ++bad_s;
  }
  exact(out, name, "inverse_t", double(bad_t), 0.0);
  exact(out, name, "inverse_s", double(bad_s), 0.0);
  return out;
}

std::vector<VerifyCheck> hl_checks(const Experiment& e) {
  std::vector<VerifyCheck> out;
  const std::string& name = e.config.name;
  const GridFunction& u = e.solution.u;
  const double tol = tolerance(*e.domain, e.f.max_abs(), e.config.constants.c_tol);
  const auto a = hl_products(u, e.f);
  add(out, name, "hl_u_f", a.lhs, a.rhs, 0.0);
  const auto b = hl_products(e.f, u);
  add(out, name, "hl_f_u", b.lhs, b.rhs, 0.0);
  const auto c = hl_products(u, u);
  exact(out, name, "hl_u_u_equal", c.lhs, c.rhs);
  const auto q1 = hl_quantitative_gap(u, e.f, LorentzParams{1.0, 1.0});
  add(out, name, "hl_quantitative_u_f", q1.lhs, q1.rhs, tol * std::max(1.0, std::abs(q1.rhs)));
  const auto q2 = hl_quantitative_gap(e.f, u, LorentzParams{1.0, 1.0});
  add(out, name, "hl_quantitative_f_u", q2.lhs, q2.rhs, tol * std::max(1.0, std::abs(q2.rhs)));
  return out;
}

std::vector<VerifyCheck> isoperimetric_checks(const Experiment& e) {
  std::vector<VerifyCheck> out;
  const std::string& name = e.config.name;
  const Constants& k = e.config.constants;
  const double tol = tolerance(*e.domain, e.f.max_abs(), k.c_tol);
  const double iso = isoperimetric_constant(2);
  const auto d = isoperimetric_deficit(*e.domain, k.gamma_n);
  add(out, name, "domain_classical", iso * std::sqrt(d.measure), d.perimeter, tol * std::max(1.0, d.perimeter));
  add(out, name, "domain_quantitative", d.lower_bound, d.perimeter, tol * std::max(1.0, d.perimeter));
  const double top = e.solution.u.max_interior();
  for (double frac : {0.25, 0.5, 0.75}) {
    const double t = frac * top;
    const GridDomain level = superlevel_set(e.solution.u, t);
    const double p = level_set_perimeter(e.solution.u, t);
    char tag[32];
    std::snprintf(tag, sizeof tag, "level_%.2f", frac);
    add(out, name, tag, iso * std::sqrt(level.measure()), p, tol * std::max(1.0, p));
  }
  return out;
}

std::vector<VerifyCheck> report_checks(const Experiment& e, const std::string& suite) {
  std::vector<VerifyCheck> out;
  const DeficitReport rep = report(e);
  const auto pick = [&](const LedgerRow& r) {
    if (suite == "sandwich") return r.name == "gn_inequality" || r.name.rfind("sandwich_", 0) == 0;
    if (suite == "rescaling") return r.name.rfind("rescale_", 0) == 0;
    return r.kind == RowKind::enforced;
  };
  for (const auto& r : rep.rows) {
    if (!pick(r) || r.status == RowStatus::vacuous) continue;
    out.push_back({e.config.name, r.name, r.lhs, r.rhs, r.tol, r.status == RowStatus::pass});
  }
  return out;
}

}  // namespace

VerifyResult verify(const std::string& suite, int jobs) {
  if (std::find(verify_suites().begin(), verify_suites().end(), suite) == verify_suites().end())
    throw ConfigError("unknown suite '" + suite + "'");
  const auto cases = case_matrix();
  std::vector<std::vector<VerifyCheck>> per(cases.size());
  parallel_for(cases.size(), jobs, [&](std::size_t i) {
    const Experiment e = prepare(cases[i]);
    if (suite == "rearrangement") per[i] = rearrangement_checks(e);
    else if (suite == "hl") per[i] = hl_checks(e);
    else if (suite == "isoperimetric") per[i] = isoperimetric_checks(e);
    else per[i] = report_checks(e, suite);
  });
  VerifyResult r;
  r.suite = suite;
  for (auto& v : per) r.checks.insert(r.checks.end(), v.begin(), v.end());
  return r;
}

}  // namespace hjsym
