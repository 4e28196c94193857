#include "pbs/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pbs/errors.hpp"
#include "pbs/verify.hpp"

namespace pbs::io {

using nlohmann::json;

namespace {

double parse_real(const std::string& text, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InputError(field, "expected a number, got '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size() || !std::isfinite(v)) throw InputError(field, "expected a number, got '" + text + "'");
  return v;
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw InputError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(field, "must be finite");
  return v;
}

std::vector<double> get_numbers(const json& j, const std::string& field) {
  if (!j.is_array()) throw InputError(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::string index_field(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

PolyVector to_poly_vector(const CoeffList& list, double origin) {
  PolyVector v{origin, {}};
  for (const auto& c : list) v.entries.emplace_back(c, origin);
  return v;
}

}  // namespace

std::string Builtin::to_string() const {
  return std::string(kind == Kind::kExample1 ? "example1" : "airy") + "(a=" + format_number(a) + ")";
}

Builtin parse_builtin(const std::string& text, const std::string& field) {
  static const std::regex pattern(R"(^\s*(example1|airy)\s*\(\s*a\s*=\s*([^)]*?)\s*\)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern))
    throw InputError(field, "unknown builtin '" + text + "' (expected example1(a=...) or airy(a=...))");
  Builtin b;
  b.kind = m[1] == "example1" ? Builtin::Kind::kExample1 : Builtin::Kind::kAiry;
  b.a = parse_real(m[2], field + ".a");
  return b;
}

PolyMatrix ProblemFile::a_polynomial() const {
  if (const auto* bi = std::get_if<Builtin>(&a))
    return bi->kind == Builtin::Kind::kExample1 ? verify::example1_family(bi->a) : verify::airy_family(bi->a);
  const auto& grid = std::get<CoeffGrid>(a);
  PolyMatrix m(dim, origin);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      m.set(i, j, Poly(grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], origin));
  return m;
}

std::optional<Builtin> ProblemFile::builtin() const {
  if (const auto* bi = std::get_if<Builtin>(&a)) return *bi;
  return std::nullopt;
}

CauchyProblem ProblemFile::to_problem() const {
  Vector x = Vector::Zero(dim);
  if (x0)
    for (int i = 0; i < dim; ++i) x(i) = (*x0)[static_cast<std::size_t>(i)];
  std::optional<VectorFunction> bf;
  if (b) bf = VectorFunction(to_poly_vector(*b, origin));
  SeriesOptions so;
  so.mu_max = options.mu_max;
  so.degree_cap = options.degree_cap;
  return CauchyProblem{MatrixFunction(a_polynomial()), std::move(bf), t0, std::move(x), domain, options.tol, so};
}

ProblemFile parse_problem_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("json", e.what());
  }
  if (!root.is_object()) throw InputError("json", "top level must be an object");

  static const std::vector<std::string> known{"dim", "t0", "domain", "origin", "A", "b", "x0", "options"};
  for (const auto& [key, value] : root.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw InputError(key, "unknown field");

  ProblemFile p;
  if (!root.contains("A")) throw InputError("A", "missing");
  const json& ja = root["A"];
  if (ja.is_string()) {
    p.a = parse_builtin(ja.get<std::string>(), "A");
    p.dim = 2;
    if (root.contains("dim")) {
      if (!root["dim"].is_number_integer() || root["dim"].get<int>() != 2)
        throw InputError("dim", "builtin families have dimension 2");
    }
  } else {
    if (!root.contains("dim")) throw InputError("dim", "missing");
    if (!root["dim"].is_number_integer() || root["dim"].get<long long>() < 1)
      throw InputError("dim", "expected a positive integer");
    p.dim = root["dim"].get<int>();
    if (!ja.is_array() || ja.size() != static_cast<std::size_t>(p.dim))
      throw InputError("A", "expected " + std::to_string(p.dim) + " rows");
    CoeffGrid grid;
    for (std::size_t i = 0; i < ja.size(); ++i) {
      const std::string row_field = index_field("A", i);
      if (!ja[i].is_array() || ja[i].size() != static_cast<std::size_t>(p.dim))
        throw InputError(row_field, "expected " + std::to_string(p.dim) + " entries");
      std::vector<std::vector<double>> row;
      for (std::size_t j = 0; j < ja[i].size(); ++j) row.push_back(get_numbers(ja[i][j], index_field(row_field, j)));
      grid.push_back(std::move(row));
    }
    p.a = std::move(grid);
  }

  if (root.contains("t0")) p.t0 = get_number(root["t0"], "t0");
  if (root.contains("origin")) p.origin = get_number(root["origin"], "origin");
  if (root.contains("domain")) {
    const auto d = get_numbers(root["domain"], "domain");
    if (d.size() != 2 || !(d[0] <= d[1])) throw InputError("domain", "expected [lo, hi] with lo <= hi");
    p.domain = Interval(d[0], d[1]);
  } else {
    p.domain = Interval(p.t0, p.t0 + 1.0);
  }
  if (!p.domain.contains(p.t0)) throw InputError("t0", "must lie inside the domain");

  if (root.contains("b")) {
    const json& jb = root["b"];
    if (!jb.is_array() || jb.size() != static_cast<std::size_t>(p.dim))
      throw InputError("b", "expected " + std::to_string(p.dim) + " coefficient lists");
    CoeffList list;
    for (std::size_t i = 0; i < jb.size(); ++i) list.push_back(get_numbers(jb[i], index_field("b", i)));
    p.b = std::move(list);
  }
  if (root.contains("x0")) {
    auto x = get_numbers(root["x0"], "x0");
    if (x.size() != static_cast<std::size_t>(p.dim)) throw InputError("x0", "expected " + std::to_string(p.dim) + " values");
    p.x0 = std::move(x);
  }
  if (root.contains("options")) {
    const json& jo = root["options"];
    if (!jo.is_object()) throw InputError("options", "expected an object");
    for (const auto& [key, value] : jo.items()) {
      const std::string field = "options." + key;
      if (key == "tol") {
        p.options.tol = get_number(value, field);
        if (!(p.options.tol > 0.0)) throw InputError(field, "must be positive");
      } else if (key == "mu_max") {
        p.options.mu_max = get_number(value, field);
        if (!(p.options.mu_max > 0.0)) throw InputError(field, "must be positive");
      } else if (key == "degree_cap") {
        if (!value.is_number_integer() || value.get<long long>() < 1) throw InputError(field, "expected a positive integer");
        p.options.degree_cap = value.get<int>();
      } else {
        throw InputError(field, "unknown option");
      }
    }
  }
  return p;
}

ProblemFile parse_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("problem", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem_text(buf.str());
}

std::string serialize_problem(const ProblemFile& p) {
  json root;
  root["dim"] = p.dim;
  root["t0"] = p.t0;
  root["domain"] = {p.domain.lo, p.domain.hi};
  root["origin"] = p.origin;
  if (const auto* bi = std::get_if<Builtin>(&p.a))
    root["A"] = bi->to_string();
  else
    root["A"] = std::get<CoeffGrid>(p.a);
  if (p.b) root["b"] = *p.b;
  if (p.x0) root["x0"] = *p.x0;
  root["options"] = {{"tol", p.options.tol}, {"mu_max", p.options.mu_max}, {"degree_cap", p.options.degree_cap}};
  return root.dump(2);
}

std::vector<double> parse_time_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find(':') == std::string::npos) {
      out.push_back(parse_real(item, "--t"));
      continue;
    }
    std::vector<std::string> parts;
    std::stringstream is(item);
    std::string part;
    while (std::getline(is, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw InputError("--t", "range must be start:stop:step");
    const double start = parse_real(parts[0], "--t");
    const double stop = parse_real(parts[1], "--t");
    const double step = parse_real(parts[2], "--t");
    if (step == 0.0 || (stop - start) / step < 0.0) throw InputError("--t", "step does not move from start to stop");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    if (n > 10000000) throw InputError("--t", "range has too many points");
    for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  }
  if (out.empty()) throw InputError("--t", "no times given");
  return out;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& columns, const std::vector<OutputRecord>& records) {
  os << "time";
  for (const auto& c : columns) os << ',' << c;
  os << ",bound\n";
  for (const auto& r : records) {
    os << format_number(r.time);
    for (double v : r.payload) os << ',' << format_number(v);
    os << ',' << format_number(r.bound) << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<OutputRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back({{"time", r.time}, {"values", r.payload}, {"bound", r.bound}});
  os << arr.dump(2) << '\n';
}

std::vector<std::string> matrix_columns(int dim) {
  std::vector<std::string> cols;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) cols.push_back("entry_" + std::to_string(i) + std::to_string(j));
  return cols;
}

std::vector<std::string> vector_columns(int dim) {
  std::vector<std::string> cols;
  for (int i = 0; i < dim; ++i) cols.push_back("x_" + std::to_string(i));
  return cols;
}

std::string dump_transition(const TransitionResult& result) {
  json steps = json::array();
  for (std::size_t k = 0; k < result.steps().size(); ++k) {
    const auto& s = result.steps()[k];
    const PolyMatrix poly = result.step_polynomial(k);
    json entries = json::array();
    for (int i = 0; i < poly.dim(); ++i) {
      json row = json::array();
      for (int j = 0; j < poly.dim(); ++j) {
        const auto c = poly(i, j).coeffs();
        row.push_back(std::vector<double>(c.begin(), c.end()));
      }
      entries.push_back(std::move(row));
    }
    steps.push_back({{"start", s.start},
                     {"end", s.end},
                     {"origin", poly.origin()},
                     {"order", s.order},
                     {"mu", s.mu},
                     {"tail_bound", s.tail_bound},
                     {"phi", std::move(entries)}});
  }
  json root{{"t0", result.t0()},
            {"t_end", result.t_end()},
            {"dim", result.dim()},
            {"total_bound", result.total_bound()},
            {"steps", std::move(steps)}};
  return root.dump(2);
}

}  // namespace pbs::io
