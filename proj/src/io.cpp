#include "hjsym/io.hpp"

#include "json.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hjsym {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'H', 'J', 'G', 'R', 'I', 'D', '0', '1'};

static_assert(std::endian::native == std::endian::little, "grid binaries assume a little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw Error("grid binary truncated");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double to_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError("expected a number in report JSON, got " + j.dump());
}

json parse_embedded(const std::string& text) {
  if (text.empty()) return json::object();
  return json::parse(text);
}

RowStatus status_from(const std::string& s) {
  if (s == "pass") return RowStatus::pass;
  if (s == "fail") return RowStatus::fail;
  if (s == "vacuous") return RowStatus::vacuous;
  throw ConfigError("unknown row status '" + s + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_grid_csv(const GridFunction& u, std::ostream& out) {
  const GridDomain& d = u.domain();
  out << "i,j,x,y,value\n";
  for (Index c : d.cells()) {
    const Vec2 p = d.center(c);
    out << c % d.nx() << ',' << c / d.nx() << ',' << format_double(p.x()) << ',' << format_double(p.y()) << ','
        << format_double(u.at(c)) << '\n';
  }
}

void write_grid_binary(const GridFunction& u, std::ostream& out) {
  const GridDomain& d = u.domain();
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, std::uint32_t(d.nx()));
  put<std::uint32_t>(out, std::uint32_t(d.ny()));
  put<double>(out, d.spacing());
  const double* v = u.values().data();  // column-major (i fastest) == row-major in rows of constant j
  out.write(reinterpret_cast<const char*>(v), std::streamsize(sizeof(double) * std::size_t(d.nx() * d.ny())));
}

GridBinary read_grid_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw Error("not a HJGRID01 file");
  GridBinary g;
  g.nx = get<std::uint32_t>(in);
  g.ny = get<std::uint32_t>(in);
  g.h = get<double>(in);
  g.values.resize(g.nx, g.ny);
  const auto bytes = std::streamsize(sizeof(double) * std::size_t(g.nx * g.ny));
  if (!in.read(reinterpret_cast<char*>(g.values.data()), bytes)) throw Error("grid binary truncated");
  return g;
}

GridFunction to_grid_function(const GridBinary& grid, std::shared_ptr<const GridDomain> domain) {
  if (grid.nx != domain->nx() || grid.ny != domain->ny() || grid.h != domain->spacing())
    throw DomainMismatchError("grid binary does not match the domain");
  return GridFunction(std::move(domain), grid.values);
}

void write_step_profile_csv(const StepProfile& p, std::ostream& out) {
  out << "s_left,s_right,value\n";
  for (Index k = 0; k < p.size(); ++k)
    out << format_double(p.breaks()(k)) << ',' << format_double(p.breaks()(k + 1)) << ','
        << format_double(p.values()(k)) << '\n';
}

StepProfile read_step_profile_csv(std::istream& in, Monotonicity monotonicity) {
  std::string line;
  if (!std::getline(in, line) || line != "s_left,s_right,value") throw ConfigError("bad step profile header");
  std::vector<double> breaks, values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double a = 0, b = 0, v = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &v) != 3) throw ConfigError("bad step profile row: " + line);
    if (breaks.empty()) breaks.push_back(a);
    else if (a != breaks.back()) throw ConfigError("step profile intervals are not contiguous");
    breaks.push_back(b);
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("empty step profile");
  return StepProfile(Eigen::Map<Eigen::VectorXd>(breaks.data(), Index(breaks.size())),
                     Eigen::Map<Eigen::VectorXd>(values.data(), Index(values.size())), monotonicity);
}

void write_pl_profile_csv(const PLProfile& p, std::ostream& out) {
  out << "s,w\n";
  for (Index k = 0; k < p.nodes().size(); ++k)
    out << format_double(p.nodes()(k)) << ',' << format_double(p.node_values()(k)) << '\n';
}

void write_radial_csv(const RadialSolution& g, std::ostream& out) {
  const StepProfile& phi = g.phi();
  out << "s,r,phi,U\n";
  for (Index k = 0; k <= phi.size(); ++k) {
    const double s = phi.breaks()(k);
    const double v = phi.values()(std::min(k, phi.size() - 1));
    out << format_double(s) << ',' << format_double(g.radius(s)) << ',' << format_double(v) << ','
        << format_double(g.breakpoint_values()(k)) << '\n';
  }
}

std::string report_to_json(const DeficitReport& r) {
  json j;
  j["run_id"] = r.run_id;
  j["grid"] = {{"h", number(r.grid.h)},
               {"nx", r.grid.nx},
               {"ny", r.grid.ny},
               {"origin", json::array({number(r.grid.origin.x()), number(r.grid.origin.y())})},
               {"cells", r.grid.cells},
               {"measure", number(r.grid.measure)}};
  j["shape"] = parse_embedded(r.shape);
  j["source"] = parse_embedded(r.source);
  const Constants& k = r.constants;
  j["constants"] = {{"gamma_n", number(k.gamma_n)},
                    {"r", number(k.r)},
                    {"s", number(k.s)},
                    {"C", number(k.C)},
                    {"c_tol", number(k.c_tol)},
                    {"excess_exponent", number(k.excess_exponent)},
                    {"levels", k.levels},
                    {"propagation_levels", k.propagation_levels}};
  j["tolerance"] = {{"model", "c_tol * h * (1 + sup f * diam); rows scale it by max(1, |lhs|, |rhs|)"},
                    {"c_tol", number(k.c_tol)},
                    {"tol", number(r.tol)},
                    {"tol_normalized", number(r.tol_normalized)}};
  json q = json::object();
  for (const auto& [name, v] : r.quantities) q[name] = number(v);
  j["quantities"] = q;
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"name", row.name},
                    {"lhs", number(row.lhs)},
                    {"rhs", number(row.rhs)},
                    {"margin", number(row.margin)},
                    {"tol", number(row.tol)},
                    {"status", to_string(row.status)},
                    {"kind", to_string(row.kind)},
                    {"note", row.note}});
  j["rows"] = rows;
  j["failed"] = r.failed();
  return j.dump(2) + "\n";
}

DeficitReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  DeficitReport r;
  r.run_id = j.at("run_id").get<std::string>();
  const json& g = j.at("grid");
  r.grid.h = to_double(g.at("h"));
  r.grid.nx = g.at("nx").get<Index>();
  r.grid.ny = g.at("ny").get<Index>();
  r.grid.origin = Vec2(to_double(g.at("origin")[0]), to_double(g.at("origin")[1]));
  r.grid.cells = g.at("cells").get<std::size_t>();
  r.grid.measure = to_double(g.at("measure"));
  r.shape = j.at("shape").dump();
  r.source = j.at("source").dump();
  const json& k = j.at("constants");
  r.constants.gamma_n = to_double(k.at("gamma_n"));
  r.constants.r = to_double(k.at("r"));
  r.constants.s = to_double(k.at("s"));
  r.constants.C = to_double(k.at("C"));
  r.constants.c_tol = to_double(k.at("c_tol"));
  r.constants.excess_exponent = to_double(k.at("excess_exponent"));
  r.constants.levels = k.at("levels").get<int>();
  r.constants.propagation_levels = k.at("propagation_levels").get<int>();
  r.tol = to_double(j.at("tolerance").at("tol"));
  r.tol_normalized = to_double(j.at("tolerance").at("tol_normalized"));
  for (const auto& [name, v] : j.at("quantities").items()) r.quantities[name] = to_double(v);
  for (const json& row : j.at("rows")) {
    LedgerRow lr;
    lr.name = row.at("name").get<std::string>();
    lr.lhs = to_double(row.at("lhs"));
    lr.rhs = to_double(row.at("rhs"));
    lr.margin = to_double(row.at("margin"));
    lr.tol = to_double(row.at("tol"));
    lr.status = status_from(row.at("status").get<std::string>());
    lr.kind = row.at("kind").get<std::string>() == "advisory" ? RowKind::advisory : RowKind::enforced;
    lr.note = row.at("note").get<std::string>();
    r.rows.push_back(std::move(lr));
  }
  return r;
}

std::string report_to_csv(const DeficitReport& r) {
  std::ostringstream out;
  out << "name,kind,status,lhs,rhs,margin,tol,note\n";
  for (const auto& row : r.rows)
    out << row.name << ',' << to_string(row.kind) << ',' << to_string(row.status) << ',' << format_double(row.lhs)
        << ',' << format_double(row.rhs) << ',' << format_double(row.margin) << ',' << format_double(row.tol) << ','
        << csv_field(row.note) << '\n';
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace hjsym
