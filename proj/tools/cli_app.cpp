#include "cli_app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pbs/cauchy.hpp"
#include "pbs/commuting.hpp"
#include "pbs/errors.hpp"
#include "pbs/problem_io.hpp"
#include "pbs/series.hpp"
#include "pbs/verify.hpp"

namespace pbs::cli {

namespace {

struct Flags {
  std::string problem;
  std::string times;
  std::optional<double> tol;
  std::optional<double> mu_max;
  std::optional<int> degree_cap;
  std::string format = "csv";
  std::string dump_phi;
  std::string checks = "all";
  bool fast_path = false;
  bool weak_commuting = false;
};

constexpr double kLiouvilleTol = 1e-9;
constexpr double kFlowTol = 1e-9;
constexpr double kExample1OracleTol = 1e-10;
constexpr double kAiryOracleTol = 1e-9;
constexpr double kRk4OracleTol = 1e-7;

void emit(std::ostream& out, const Flags& f, const std::vector<std::string>& columns,
          const std::vector<io::OutputRecord>& records) {
  if (f.format == "json")
    io::write_json(out, records);
  else
    io::write_csv(out, columns, records);
}

std::vector<double> requested_times(const Flags& f, const io::ProblemFile& file) {
  return f.times.empty() ? std::vector<double>{file.domain.hi} : io::parse_time_list(f.times);
}

void require_in_domain(const std::vector<double>& times, const Interval& domain) {
  for (double t : times)
    if (!domain.contains(t)) throw DomainError("t = " + io::format_number(t) + " is outside the problem domain");
}

std::vector<double> flatten(const Matrix& m) {
  std::vector<double> v;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

std::vector<double> flatten(const Vector& x) { return {x.data(), x.data() + x.size()}; }

/// Transitions from t0 to the extreme requested times on each side.
struct Sweep {
  std::optional<TransitionResult> forward;
  std::optional<TransitionResult> backward;

  const TransitionResult* covering(double t) const {
    if (forward && forward->covered().contains(t)) return &*forward;
    if (backward && backward->covered().contains(t)) return &*backward;
    return nullptr;
  }
};

Sweep sweep(const CauchyProblem& p, const std::vector<double>& times) {
  Sweep s;
  const double hi = *std::max_element(times.begin(), times.end());
  const double lo = *std::min_element(times.begin(), times.end());
  if (hi > p.t0) s.forward = transition(p.a, p.t0, hi, p.tol, p.options);
  if (lo < p.t0) s.backward = transition(p.a, p.t0, lo, p.tol, p.options);
  return s;
}

int cmd_transition(const Flags& f, const io::ProblemFile& file, std::ostream& out) {
  const CauchyProblem p = file.to_problem();
  const auto times = requested_times(f, file);
  require_in_domain(times, p.domain);
  const int d = p.dim();

  std::vector<io::OutputRecord> records;
  const PolyMatrix a = file.a_polynomial();
  const bool commuting =
      f.fast_path && (is_commuting(a) || (f.weak_commuting && is_weakly_commuting(a, p.domain)));
  if (commuting) {
    for (double t : times) records.push_back({t, flatten(transition_commuting(a, p.t0, t)), 0.0});
    emit(out, f, io::matrix_columns(d), records);
    return kOk;
  }

  const Sweep s = sweep(p, times);
  for (double t : times) {
    if (t == p.t0) {
      records.push_back({t, flatten(Matrix(Matrix::Identity(d, d))), 0.0});
      continue;
    }
    const TransitionResult* r = s.covering(t);
    records.push_back({t, flatten((*r)(t)), r->bound_at(t)});
  }
  emit(out, f, io::matrix_columns(d), records);

  if (!f.dump_phi.empty()) {
    std::ofstream dump(f.dump_phi);
    if (!dump) throw InputError("--dump-phi", "cannot write '" + f.dump_phi + "'");
    dump << "[";
    bool first = true;
    for (const auto* r : {s.forward ? &*s.forward : nullptr, s.backward ? &*s.backward : nullptr}) {
      if (r == nullptr) continue;
      dump << (first ? "\n" : ",\n") << io::dump_transition(*r);
      first = false;
    }
    dump << "\n]\n";
  }
  return kOk;
}

int cmd_solve(const Flags& f, const io::ProblemFile& file, std::ostream& out) {
  if (!file.x0) throw InputError("x0", "required by the solve command");
  const CauchyProblem p = file.to_problem();
  const auto times = requested_times(f, file);
  require_in_domain(times, p.domain);

  const double hi = *std::max_element(times.begin(), times.end());
  const double lo = *std::min_element(times.begin(), times.end());
  std::optional<Trajectory> forward;
  std::optional<Trajectory> backward;
  if (hi > p.t0) forward = solve_trajectory(p, hi);
  if (lo < p.t0) backward = solve_trajectory(p, lo);

  std::vector<io::OutputRecord> records;
  for (double t : times) {
    const Trajectory* traj = t > p.t0 ? &*forward : (t < p.t0 ? &*backward : nullptr);
    if (traj == nullptr) {
      records.push_back({t, flatten(p.x0), 0.0});
      continue;
    }
    records.push_back({t, flatten((*traj)(t)), traj->error_bound_at(t)});
  }
  emit(out, f, io::vector_columns(p.dim()), records);
  return kOk;
}

struct NamedReport {
  std::string direction;
  verify::CheckReport report;
};

void write_reports(std::ostream& out, const Flags& f, const std::vector<NamedReport>& reports) {
  if (f.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports)
      arr.push_back({{"check", r.report.name},
                     {"direction", r.direction},
                     {"max_residual", r.report.max_residual},
                     {"tolerance", r.report.tolerance},
                     {"pass", r.report.pass},
                     {"grid", r.report.grid}});
    out << arr.dump(2) << '\n';
    return;
  }
  out << "check,direction,max_residual,tolerance,pass,grid\n";
  for (const auto& r : reports)
    out << r.report.name << ',' << r.direction << ',' << io::format_number(r.report.max_residual) << ','
        << io::format_number(r.report.tolerance) << ',' << (r.report.pass ? "pass" : "fail") << ",\""
        << r.report.grid << "\"\n";
}

std::vector<std::string> parse_checks(const std::string& text) {
  static const std::vector<std::string> all{"liouville", "flow", "volterra", "oracle"};
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "all") {
      out.insert(out.end(), all.begin(), all.end());
    } else if (std::find(all.begin(), all.end(), item) != all.end()) {
      out.push_back(item);
    } else {
      throw InputError("--checks", "unknown check '" + item + "' (liouville|flow|volterra|oracle|all)");
    }
  }
  if (out.empty()) throw InputError("--checks", "no checks selected");
  std::vector<std::string> unique;
  for (const auto& c : out)
    if (std::find(unique.begin(), unique.end(), c) == unique.end()) unique.push_back(c);
  return unique;
}

std::vector<NamedReport> run_checks(const io::ProblemFile& file, const CauchyProblem& p,
                                    const std::vector<std::string>& checks, double end, const std::string& direction) {
  std::vector<NamedReport> reports;
  const TransitionResult result = transition(p.a, p.t0, end, p.tol, p.options);
  for (const auto& check : checks) {
    if (check == "liouville") {
      reports.push_back({direction, verify::liouville_residual(p.a, result, verify::kDefaultGridPerStep, kLiouvilleTol)});
    } else if (check == "volterra") {
      reports.push_back({direction, verify::volterra_residual(p.a, result)});
    } else if (check == "flow") {
      const double s = 0.5 * (p.t0 + end);
      reports.push_back({direction, verify::flow_residual(p.a, p.t0, s, end, kFlowTol, p.options, p.tol)});
      reports.push_back({direction, verify::inverse_residual(p.a, s, end, kFlowTol, p.options, p.tol)});
    } else if (check == "oracle") {
      if (const auto bi = file.builtin()) {
        const auto oracle = bi->kind == io::Builtin::Kind::kExample1 ? verify::example1_case(bi->a)
                                                                      : verify::airy_case(bi->a);
        const double tol = bi->kind == io::Builtin::Kind::kExample1 ? kExample1OracleTol : kAiryOracleTol;
        const double t0 = p.t0;
        reports.push_back({direction, verify::oracle_residual("oracle:" + oracle.name, result,
                                                              [&](double t) { return oracle.phi_exact(t, t0); }, tol)});
      } else {
        // RK4 with about 10^4 steps per unit time; fewer grid points to keep it cheap.
        const double t0 = p.t0;
        auto reference = [&](double t) {
          const int steps = std::max(1, static_cast<int>(std::ceil(1e4 * std::abs(t - t0))));
          return verify::rk4_transition(p.a, t0, t, steps);
        };
        reports.push_back({direction, verify::oracle_residual("oracle:rk4", result, reference, kRk4OracleTol, 11)});
      }
    }
  }
  return reports;
}

int cmd_verify(const Flags& f, const io::ProblemFile& file, std::ostream& out, std::ostream& err) {
  const auto checks = parse_checks(f.checks);
  const CauchyProblem p = file.to_problem();
  std::vector<NamedReport> reports;
  try {
    if (p.domain.hi > p.t0) {
      auto r = run_checks(file, p, checks, p.domain.hi, "forward");
      reports.insert(reports.end(), r.begin(), r.end());
    }
    if (p.domain.lo < p.t0) {
      auto r = run_checks(file, p, checks, p.domain.lo, "backward");
      reports.insert(reports.end(), r.begin(), r.end());
    }
  } catch (const Error& e) {
    reports.push_back({"-", verify::CheckReport{"engine", std::numeric_limits<double>::infinity(), 0.0, false, e.what()}});
    write_reports(out, f, reports);
    err << "error: " << e.what() << '\n';
    return kEngineError;
  }
  write_reports(out, f, reports);
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const NamedReport& r) { return r.report.pass; });
  return ok ? kOk : kCheckFailed;
}

int cmd_bench(const Flags& f, const io::ProblemFile& file, std::ostream& out) {
  const CauchyProblem p = file.to_problem();
  const double end = p.domain.hi > p.t0 ? p.domain.hi : p.domain.lo;
  out << "tol,steps,max_order,max_degree,total_bound,runtime_us,status\n";
  for (int e = 2; e <= 14; e += 2) {
    const double tol = std::pow(10.0, -e);
    const auto start = std::chrono::steady_clock::now();
    try {
      const TransitionResult r = transition(p.a, p.t0, end, tol, p.options);
      const auto us =
          std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
      int max_order = 0;
      int max_degree = 0;
      for (const auto& s : r.steps()) {
        max_order = std::max(max_order, s.order);
        max_degree = std::max(max_degree, s.phi.degree());
      }
      out << io::format_number(tol) << ',' << r.steps().size() << ',' << max_order << ',' << max_degree << ','
          << io::format_number(r.total_bound()) << ',' << us << ",ok\n";
    } catch (const DegreeCapExceeded&) {
      out << io::format_number(tol) << ",,,,,,degree_cap\n";
    }
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear time-varying ODE solver based on the Peano-Baker series", "pbs"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&f](CLI::App* sub) {
    sub->add_option("--problem", f.problem, "JSON problem file")->required();
    sub->add_option("--tol", f.tol, "error tolerance (overrides the file)");
    sub->add_option("--mu-max", f.mu_max, "per-step bound on the integral of ||A||");
    sub->add_option("--degree-cap", f.degree_cap, "maximum polynomial degree of series terms");
    sub->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* transition_cmd = app.add_subcommand("transition", "evaluate Phi(t; t0)");
  add_common(transition_cmd);
  transition_cmd->add_option("--t", f.times, "times: list '0,1,2' or range 'start:stop:step'");
  transition_cmd->add_option("--dump-phi", f.dump_phi, "write the piecewise-polynomial Phi as JSON");
  transition_cmd->add_flag("--fast-path", f.fast_path, "use exp(int A) when A commutes");
  transition_cmd->add_flag("--weak-commuting", f.weak_commuting,
                           "with --fast-path, also accept [A(t), int A] = 0 on a grid");

  auto* solve_cmd = app.add_subcommand("solve", "solve x' = A x + b, x(t0) = x0");
  add_common(solve_cmd);
  solve_cmd->add_option("--t", f.times, "times: list '0,1,2' or range 'start:stop:step'");

  auto* verify_cmd = app.add_subcommand("verify", "run invariant checks");
  add_common(verify_cmd);
  verify_cmd->add_option("--checks", f.checks, "liouville,flow,volterra,oracle or all");

  auto* bench_cmd = app.add_subcommand("bench", "time transitions at decreasing tolerances");
  add_common(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    io::ProblemFile file = io::parse_problem(f.problem);
    if (f.tol) {
      if (!(*f.tol > 0.0)) throw InputError("--tol", "must be positive");
      file.options.tol = *f.tol;
    }
    if (f.mu_max) {
      if (!(*f.mu_max > 0.0)) throw InputError("--mu-max", "must be positive");
      file.options.mu_max = *f.mu_max;
    }
    if (f.degree_cap) {
      if (*f.degree_cap < 1) throw InputError("--degree-cap", "must be positive");
      file.options.degree_cap = *f.degree_cap;
    }

    if (transition_cmd->parsed()) return cmd_transition(f, file, out);
    if (solve_cmd->parsed()) return cmd_solve(f, file, out);
    if (verify_cmd->parsed()) return cmd_verify(f, file, out, err);
    if (bench_cmd->parsed()) return cmd_bench(f, file, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "engine error: " << e.what() << '\n';
    return kEngineError;
  }
  return kInputError;
}

}  // namespace pbs::cli
