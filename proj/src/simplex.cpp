#include "gridflex/simplex.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "gridflex/errors.hpp"

namespace gridflex::lp {

int Problem::add_var(double c, double lower, double upper) {
    cost.push_back(c);
    lo.push_back(lower);
    hi.push_back(upper);
    return static_cast<int>(cost.size()) - 1;
}

Constraint& Problem::add_row(Sense sense, double rhs) {
    rows.push_back(Constraint{{}, sense, rhs});
    return rows.back();
}

const char* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        case Status::IterationLimit: return "iteration-limit";
    }
    return "?";
}

namespace {

enum class VarState : char { Basic, AtLo, AtHi, FreeZero };

struct Tableau {
    int m, n_struct, n_total;           // rows, structural vars, all columns
    Eigen::MatrixXd a;                  // B^-1 A, m x n_total
    Eigen::VectorXd xb;                 // basic values, m
    Eigen::VectorXd zrow;               // reduced costs, n_total
    std::vector<int> basis;             // row -> column
    std::vector<VarState> state;        // per column
    std::vector<double> lo, hi;         // per column
    std::vector<char> allowed;          // column may enter
    int iterations = 0;

    double nonbasic_value(int j) const {
        switch (state[j]) {
            case VarState::AtLo: return lo[j];
            case VarState::AtHi: return hi[j];
            default: return 0.0;
        }
    }
};

// One simplex phase on the prepared tableau. `costs` covers all columns.
Status run_phase(Tableau& t, const std::vector<double>& costs, const Options& opts,
                 int max_iters) {
    const int m = t.m;
    const int n = t.n_total;

    // reduced costs from scratch
    for (int j = 0; j < n; ++j) {
        double z = costs[j];
        for (int i = 0; i < m; ++i) z -= costs[t.basis[i]] * t.a(i, j);
        t.zrow(j) = z;
    }
    for (int i = 0; i < m; ++i) t.zrow(t.basis[i]) = 0.0;

    int degenerate_run = 0;
    bool bland = false;

    for (int iter = 0; iter < max_iters; ++iter) {
        // entering column
        int enter = -1;
        int dir = 0;
        double best = opts.opt_tol;
        for (int j = 0; j < n; ++j) {
            if (t.state[j] == VarState::Basic || !t.allowed[j]) continue;
            if (t.lo[j] == t.hi[j] && t.state[j] != VarState::FreeZero) continue;  // fixed
            double z = t.zrow(j);
            double viol = 0.0;
            int d = 0;
            if (t.state[j] == VarState::AtLo || t.state[j] == VarState::FreeZero) {
                if (z < -opts.opt_tol) viol = -z, d = +1;
            }
            if (t.state[j] == VarState::AtHi || t.state[j] == VarState::FreeZero) {
                if (z > opts.opt_tol && z > viol) viol = z, d = -1;
            }
            if (d == 0) continue;
            if (bland) {
                enter = j;
                dir = d;
                break;
            }
            if (viol > best) {
                best = viol;
                enter = j;
                dir = d;
            }
        }
        if (enter < 0) {
            t.iterations += iter;
            return Status::Optimal;
        }

        // ratio test: entering moves by step >= 0 in direction dir
        double limit = t.hi[enter] - t.lo[enter];  // own bound flip (inf ok)
        if (t.state[enter] == VarState::FreeZero) limit = kInf;
        double step = limit;
        int leave_row = -1;
        double leave_pivot = 0.0;
        int leave_to_upper = 0;
        for (int i = 0; i < m; ++i) {
            double rate = -dir * t.a(i, enter);  // d xb_i / d step
            if (std::abs(rate) < opts.pivot_tol) continue;
            int bj = t.basis[i];
            double room;
            int to_upper;
            if (rate < 0.0) {
                room = t.lo[bj] == -kInf ? kInf : t.xb(i) - t.lo[bj];
                to_upper = 0;
            } else {
                room = t.hi[bj] == kInf ? kInf : t.hi[bj] - t.xb(i);
                to_upper = 1;
            }
            if (room == kInf) continue;
            double s = std::max(0.0, room / std::abs(rate));
            bool better = s < step - 1e-12;
            bool tie = std::abs(s - step) <= 1e-12;
            bool prefer = false;
            if (tie && leave_row >= 0) {
                if (bland)
                    prefer = t.basis[i] < t.basis[leave_row];
                else
                    prefer = std::abs(t.a(i, enter)) > std::abs(leave_pivot);
            }
            if (better || (tie && (leave_row < 0 || prefer))) {
                step = s;
                leave_row = i;
                leave_pivot = t.a(i, enter);
                leave_to_upper = to_upper;
            }
        }

        if (step == kInf) {
            t.iterations += iter;
            return Status::Unbounded;
        }

        degenerate_run = step <= 1e-11 ? degenerate_run + 1 : 0;
        if (degenerate_run > 2 * (m + n)) bland = true;

        if (leave_row < 0) {
            // bound flip, no basis change
            double delta = dir * step;
            for (int i = 0; i < m; ++i) t.xb(i) -= delta * t.a(i, enter);
            t.state[enter] = t.state[enter] == VarState::AtLo ? VarState::AtHi : VarState::AtLo;
            continue;
        }

        // pivot: entering becomes basic at value (bound + dir*step)
        double enter_start = t.nonbasic_value(enter);
        double delta = dir * step;
        for (int i = 0; i < m; ++i) t.xb(i) -= delta * t.a(i, enter);

        int leave_col = t.basis[leave_row];
        t.state[leave_col] = leave_to_upper ? VarState::AtHi : VarState::AtLo;
        if (t.lo[leave_col] == t.hi[leave_col]) t.state[leave_col] = VarState::AtLo;

        double pivot = t.a(leave_row, enter);
        t.a.row(leave_row) /= pivot;
        double xr = enter_start + delta;
        for (int i = 0; i < m; ++i) {
            if (i == leave_row) continue;
            double f = t.a(i, enter);
            if (f != 0.0) t.a.row(i) -= f * t.a.row(leave_row);
        }
        double zf = t.zrow(enter);
        if (zf != 0.0) t.zrow -= zf * t.a.row(leave_row).transpose();

        t.basis[leave_row] = enter;
        t.state[enter] = VarState::Basic;
        t.xb(leave_row) = xr;
        t.zrow(enter) = 0.0;
    }
    t.iterations += max_iters;
    return Status::IterationLimit;
}

} // namespace

Solution solve(const Problem& p, const Options& opts) {
    const int n = p.num_vars();
    const int m = static_cast<int>(p.rows.size());
    for (int j = 0; j < n; ++j)
        if (p.lo[j] > p.hi[j]) return {Status::Infeasible, {}, 0.0, 0};

    // columns: structural | slack per row | artificial per row (lazily used)
    Tableau t;
    t.m = m;
    t.n_struct = n;
    t.n_total = n + 2 * m;
    t.a = Eigen::MatrixXd::Zero(m, t.n_total);
    t.xb = Eigen::VectorXd::Zero(m);
    t.zrow = Eigen::VectorXd::Zero(t.n_total);
    t.basis.assign(m, -1);
    t.state.assign(t.n_total, VarState::AtLo);
    t.lo.assign(t.n_total, 0.0);
    t.hi.assign(t.n_total, 0.0);
    t.allowed.assign(t.n_total, 1);

    // structural columns, nonbasic at the finite bound nearest zero
    std::vector<double> row_scale(m, 1.0);
    for (int i = 0; i < m; ++i) {
        double mx = 1.0;  // slack coefficient
        for (auto& [j, a] : p.rows[i].terms) mx = std::max(mx, std::abs(a));
        row_scale[i] = 1.0 / mx;
    }
    for (int i = 0; i < m; ++i)
        for (auto& [j, a] : p.rows[i].terms) {
            if (j < 0 || j >= n) throw ValidationError("lp: bad variable index in row");
            t.a(i, j) += a * row_scale[i];
        }

    for (int j = 0; j < n; ++j) {
        t.lo[j] = p.lo[j];
        t.hi[j] = p.hi[j];
        if (p.lo[j] == -kInf && p.hi[j] == kInf)
            t.state[j] = VarState::FreeZero;
        else if (std::abs(p.lo[j]) <= std::abs(p.hi[j]) || p.hi[j] == kInf)
            t.state[j] = VarState::AtLo;
        else
            t.state[j] = VarState::AtHi;
        if (p.lo[j] == -kInf && p.hi[j] != kInf) t.state[j] = VarState::AtHi;
    }

    // slack columns
    for (int i = 0; i < m; ++i) {
        int sj = n + i;
        t.a(i, sj) = row_scale[i];
        switch (p.rows[i].sense) {
            case Sense::Le: t.lo[sj] = 0.0; t.hi[sj] = kInf; break;
            case Sense::Ge: t.lo[sj] = -kInf; t.hi[sj] = 0.0; break;
            case Sense::Eq: t.lo[sj] = 0.0; t.hi[sj] = 0.0; break;
        }
        t.state[sj] = VarState::AtLo;
    }

    // residuals with all structurals/slacks at their start values decide
    // which rows need an artificial
    std::vector<double> phase1_cost(t.n_total, 0.0);
    bool need_phase1 = false;
    for (int i = 0; i < m; ++i) {
        double r = p.rows[i].rhs * row_scale[i];
        for (int j = 0; j < n + m; ++j)
            if (t.state[j] != VarState::Basic) r -= t.a(i, j) * t.nonbasic_value(j);

        int sj = n + i;
        int aj = n + m + i;
        // try to absorb the residual in the slack itself
        double s_val = t.nonbasic_value(sj) + r / t.a(i, sj);
        if (s_val >= t.lo[sj] - opts.feas_tol && s_val <= t.hi[sj] + opts.feas_tol) {
            t.basis[i] = sj;
            t.state[sj] = VarState::Basic;
            t.xb(i) = std::clamp(s_val, t.lo[sj], t.hi[sj]);
            t.allowed[aj] = 0;
        } else {
            // slack pinned at its nearest bound, artificial carries the rest
            double pin = std::clamp(s_val, t.lo[sj], t.hi[sj]);
            t.state[sj] = pin == t.lo[sj] ? VarState::AtLo : VarState::AtHi;
            double resid = r - (pin - t.nonbasic_value(sj)) * t.a(i, sj);
            t.a(i, aj) = resid >= 0.0 ? 1.0 : -1.0;
            t.lo[aj] = 0.0;
            t.hi[aj] = kInf;
            t.basis[i] = aj;
            t.state[aj] = VarState::Basic;
            t.xb(i) = std::abs(resid);
            phase1_cost[aj] = 1.0;
            need_phase1 = true;
        }
    }

    int max_iters = opts.max_iterations > 0 ? opts.max_iterations : 2000 + 60 * (m + n);

    Solution sol;
    if (need_phase1) {
        Status st = run_phase(t, phase1_cost, opts, max_iters);
        double art_sum = 0.0;
        for (int i = 0; i < m; ++i)
            if (t.basis[i] >= n + m) art_sum += std::abs(t.xb(i));
        if (st == Status::IterationLimit) return {Status::IterationLimit, {}, 0.0, t.iterations};
        if (art_sum > 1e-6) return {Status::Infeasible, {}, 0.0, t.iterations};
        // drive leftover zero-valued artificials out of the basis
        for (int i = 0; i < m; ++i) {
            if (t.basis[i] < n + m) continue;
            int pick = -1;
            for (int j = 0; j < n + m; ++j)
                if (t.state[j] != VarState::Basic && t.allowed[j] &&
                    std::abs(t.a(i, j)) > opts.pivot_tol) {
                    pick = j;
                    break;
                }
            if (pick < 0) continue;  // redundant row; artificial stays pinned at 0
            double pivot = t.a(i, pick);
            int old = t.basis[i];
            double entering_val = t.nonbasic_value(pick);
            t.a.row(i) /= pivot;
            for (int k = 0; k < m; ++k) {
                if (k == i) continue;
                double f = t.a(k, pick);
                if (f != 0.0) t.a.row(k) -= f * t.a.row(i);
            }
            t.basis[i] = pick;
            t.state[pick] = VarState::Basic;
            t.state[old] = VarState::AtLo;
            t.xb(i) = entering_val;  // step is zero: artificial was at 0
        }
        for (int i = 0; i < m; ++i) t.allowed[n + m + i] = 0;
    } else {
        for (int i = 0; i < m; ++i) t.allowed[n + m + i] = 0;
    }

    std::vector<double> phase2_cost(t.n_total, 0.0);
    for (int j = 0; j < n; ++j) phase2_cost[j] = p.cost[j];
    Status st = run_phase(t, phase2_cost, opts, max_iters);
    if (st == Status::IterationLimit || st == Status::Unbounded)
        return {st, {}, 0.0, t.iterations};

    sol.status = Status::Optimal;
    sol.iterations = t.iterations;
    sol.x.assign(n, 0.0);
    for (int j = 0; j < n; ++j)
        if (t.state[j] != VarState::Basic) sol.x[j] = t.nonbasic_value(j);
    for (int i = 0; i < m; ++i)
        if (t.basis[i] < n) sol.x[t.basis[i]] = t.xb(i);
    for (int j = 0; j < n; ++j) {
        if (t.lo[j] > -kInf) sol.x[j] = std::max(sol.x[j], t.lo[j]);
        if (t.hi[j] < kInf) sol.x[j] = std::min(sol.x[j], t.hi[j]);
        sol.objective += p.cost[j] * sol.x[j];
    }
    return sol;
}

} // namespace gridflex::lp
