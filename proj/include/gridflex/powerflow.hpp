#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridflex/admittance.hpp"
#include "gridflex/dispatch.hpp"  // Execution

namespace gridflex {

struct PowerflowOptions {
    double tolerance_pu = 1e-8;
    int max_iterations = 50;
    bool warm_start = true;  // within a chunk, start from the previous step
    int chunk_steps = 96;    // fixed chunking; results independent of thread count
};

/// Net injections per bus in per-unit (positive into the network). Slack
/// entries are ignored by the solver.
struct InjectionFrame {
    Eigen::VectorXd p_pu;
    Eigen::VectorXd q_pu;
};

struct NetworkState {
    Eigen::VectorXd v_pu;
    Eigen::VectorXd theta_rad;
    std::vector<double> branch_current_pu;  // |I| at the from side
    std::vector<double> branch_current_ka;
    std::vector<double> trafo_mva;          // apparent power at the HV side; 0 for lines
    int iterations = 0;
    bool converged = false;

    double slack_p_pu = 0.0;  // computed injection at the slack bus
    double slack_q_pu = 0.0;
};

/// Newton-Raphson AC load flow in polar form. Throws SolverError on
/// non-convergence (with the worst mismatch) or a singular Jacobian.
NetworkState solve_loadflow(const AdmittanceModel& model, const InjectionFrame& injections,
                            const PowerflowOptions& opts = {},
                            const NetworkState* warm = nullptr);

struct SeriesResult {
    std::vector<NetworkState> states;
    std::vector<std::pair<int, std::string>> failures;  // step -> diagnostic
};

/// Sweeps a series of injection frames. Steps are grouped in fixed chunks of
/// `chunk_steps`; each chunk starts flat and then warm-starts, so Serial and
/// Parallel produce bit-identical states. Failed steps are recorded, not
/// thrown.
SeriesResult solve_series(const AdmittanceModel& model, std::span<const InjectionFrame> frames,
                          const PowerflowOptions& opts = {},
                          Execution exec = Execution::Parallel);

/// Network losses in pu: slack injection + sum of loads/generation.
double total_losses_pu(const AdmittanceModel& model, const InjectionFrame& inj,
                       const NetworkState& state);

} // namespace gridflex
