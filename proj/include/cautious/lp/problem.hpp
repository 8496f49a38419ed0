#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cautious/errors.hpp"

namespace cautious::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { GreaterEqual, LessEqual, Equal };
enum class Sense { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
};

struct Term {
  std::size_t var;
  double coef;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::GreaterEqual;
  double rhs = 0.0;
};

class Problem {
 public:
  std::size_t add_variable(std::string name, double lower = 0.0, double upper = kInfinity) {
    if (lower > upper) throw PreconditionError("variable '" + name + "' has lower > upper");
    vars_.push_back({std::move(name), lower, upper});
    return vars_.size() - 1;
  }

  std::size_t add_free_variable(std::string name) { return add_variable(std::move(name), -kInfinity, kInfinity); }

  std::size_t add_constraint(std::string name, std::vector<Term> terms, Relation rel, double rhs) {
    for (const auto& t : terms) {
      if (t.var >= vars_.size()) throw PreconditionError("constraint '" + name + "' references unknown variable");
    }
    rows_.push_back({std::move(name), std::move(terms), rel, rhs});
    return rows_.size() - 1;
  }

  void set_objective(Sense sense, std::vector<Term> terms) {
    for (const auto& t : terms) {
      if (t.var >= vars_.size()) throw PreconditionError("objective references unknown variable");
    }
    sense_ = sense;
    objective_ = std::move(terms);
  }

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const std::vector<Term>& objective() const { return objective_; }
  Sense sense() const { return sense_; }

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::vector<Term> objective_;
  Sense sense_ = Sense::Minimize;
};

struct Outcome {
  Status status = Status::Infeasible;
  std::optional<double> objective;  // set iff status == Optimal
  std::vector<double> values;       // empty unless status == Optimal
  std::size_t iterations = 0;
};

namespace detail {

inline std::string lp_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline void write_terms(std::ostream& out, const std::vector<Term>& terms, const std::vector<Variable>& vars) {
  if (terms.empty()) {
    out << " 0 " << (vars.empty() ? "x" : vars.front().name);
    return;
  }
  for (const auto& t : terms) {
    out << (t.coef < 0 ? " - " : " + ") << lp_number(std::fabs(t.coef)) << ' ' << vars[t.var].name;
  }
}

}  // namespace detail

// CPLEX LP text format, readable by glpsol/cbc/HiGHS for cross-checking.
inline void write_cplex_lp(std::ostream& out, const Problem& p) {
  const auto& vars = p.variables();
  out << (p.sense() == Sense::Minimize ? "Minimize\n" : "Maximize\n") << " obj:";
  detail::write_terms(out, p.objective(), vars);
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < p.constraints().size(); ++i) {
    const auto& c = p.constraints()[i];
    out << ' ' << (c.name.empty() ? "c" + std::to_string(i) : c.name) << ':';
    detail::write_terms(out, c.terms, vars);
    switch (c.relation) {
      case Relation::GreaterEqual: out << " >= "; break;
      case Relation::LessEqual: out << " <= "; break;
      case Relation::Equal: out << " = "; break;
    }
    out << detail::lp_number(c.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : vars) {
    const bool lo_inf = std::isinf(v.lower), hi_inf = std::isinf(v.upper);
    if (lo_inf && hi_inf) {
      out << ' ' << v.name << " free\n";
    } else if (lo_inf) {
      out << " -inf <= " << v.name << " <= " << detail::lp_number(v.upper) << '\n';
    } else if (hi_inf) {
      out << ' ' << v.name << " >= " << detail::lp_number(v.lower) << '\n';
    } else {
      out << ' ' << detail::lp_number(v.lower) << " <= " << v.name << " <= " << detail::lp_number(v.upper)
          << '\n';
    }
  }
  out << "End\n";
}

}  // namespace cautious::lp
