#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pbs/cauchy.hpp"

namespace pbs::io {

/// Named closed-form family, written "example1(a=...)" or "airy(a=...)".
struct Builtin {
  enum class Kind { kExample1, kAiry };
  Kind kind = Kind::kExample1;
  double a = 0.0;

  std::string to_string() const;
  friend bool operator==(const Builtin&, const Builtin&) = default;
};

/// Parses "example1(a=2)" / "airy(a=-1)". Throws InputError on `field`.
Builtin parse_builtin(const std::string& text, const std::string& field = "A");

/// Coefficient lists lowest degree first, about `origin`.
using CoeffGrid = std::vector<std::vector<std::vector<double>>>;
using CoeffList = std::vector<std::vector<double>>;

struct ProblemOptions {
  double tol = 1e-10;
  double mu_max = 1.0;
  int degree_cap = 64;
  friend bool operator==(const ProblemOptions&, const ProblemOptions&) = default;
};

/// In-memory form of a JSON problem file.
struct ProblemFile {
  int dim = 1;
  double t0 = 0.0;
  Interval domain;
  double origin = 0.0;
  std::variant<CoeffGrid, Builtin> a;
  std::optional<CoeffList> b;
  std::optional<std::vector<double>> x0;
  ProblemOptions options;

  friend bool operator==(const ProblemFile&, const ProblemFile&) = default;

  PolyMatrix a_polynomial() const;
  std::optional<Builtin> builtin() const;
  /// Cauchy problem; a missing x0 becomes the zero vector.
  CauchyProblem to_problem() const;
};

/// Parses and validates problem JSON. Malformed input throws InputError whose
/// field names the offending entry (or "json" with line/column for syntax).
ProblemFile parse_problem_text(const std::string& text);
ProblemFile parse_problem(const std::string& path);

/// Canonical JSON form; parse_problem_text(serialize_problem(p)) == p.
std::string serialize_problem(const ProblemFile& p);

/// "1,2.5,3" or "start:stop:step" (inclusive), or a comma list mixing both.
std::vector<double> parse_time_list(const std::string& text);

/// One output row: time, flattened row-major payload, error bound.
struct OutputRecord {
  double time = 0.0;
  std::vector<double> payload;
  double bound = 0.0;
};

/// Shortest round-trip decimal form ("%.17g").
std::string format_number(double v);

void write_csv(std::ostream& os, const std::vector<std::string>& columns, const std::vector<OutputRecord>& records);
void write_json(std::ostream& os, const std::vector<OutputRecord>& records);

/// Column names entry_00, entry_01, ... for a d x d payload.
std::vector<std::string> matrix_columns(int dim);
/// Column names x_0, x_1, ... for a length-d payload.
std::vector<std::string> vector_columns(int dim);

/// Full piecewise-polynomial dump of a transition as JSON.
std::string dump_transition(const TransitionResult& result);

}  // namespace pbs::io
