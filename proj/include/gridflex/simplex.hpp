#pragma once

#include <limits>
#include <string>
#include <vector>

namespace gridflex::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Le, Ge, Eq };

struct Constraint {
    std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
    Sense sense = Sense::Le;
    double rhs = 0.0;
};

/// min c'x  s.t.  rows, lo <= x <= hi.
struct Problem {
    std::vector<double> cost;
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<Constraint> rows;

    int num_vars() const { return static_cast<int>(cost.size()); }
    int add_var(double c, double lower, double upper);
    Constraint& add_row(Sense sense, double rhs);
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };
const char* to_string(Status s);

struct Options {
    double feas_tol = 1e-8;
    double opt_tol = 1e-9;
    double pivot_tol = 1e-8;
    int max_iterations = 0;  // 0: derived from the problem size
};

struct Solution {
    Status status = Status::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
    int iterations = 0;
};

/// Bounded-variable primal simplex on a dense tableau, two-phase with
/// artificials, Dantzig pricing with a Bland fallback under degeneracy.
Solution solve(const Problem& p, const Options& opts = {});

} // namespace gridflex::lp
