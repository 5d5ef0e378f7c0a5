#pragma once

#include <span>
#include <string>
#include <vector>

#include "gridflex/admittance.hpp"
#include "gridflex/dispatch.hpp"
#include "gridflex/powerflow.hpp"
#include "gridflex/tariff.hpp"

namespace gridflex {

struct ReinforcementCostInputs {
    double line_cost_kchf_per_km = 70.0;
    double trafo_cost_kchf_per_mva = 60.0;
    int grid_lifetime_years = 30;
    double grid_interest_rate = 0.03;

    void validate() const;
};

struct ReinforcementCost {
    double annualized_chf_per_yr = 0.0;
    double line_component_kchf = 0.0;   // before annualization
    double trafo_component_kchf = 0.0;  // before annualization
    std::vector<std::string> replaced_lines;   // branch ids with delta = 1
    std::vector<std::string> replaced_trafos;  // branch ids with delta = 1
    double trafo_peak_mva = 0.0;  // sum over flagged transformers of max_t S
};

/// Replacement flags from full-horizon maxima: a line is replaced when its
/// peak current exceeds ampacity, a transformer when its peak apparent power
/// exceeds the rating; component costs are proportional to length and to the
/// observed peak respectively.
ReinforcementCost reinforcement_cost(const AdmittanceModel& model,
                                     std::span<const NetworkState> states,
                                     const ReinforcementCostInputs& inputs);

/// Recomputes the annualized total for an alternate transformer unit cost,
/// keeping the stored flags and peaks.
double reinforcement_cost_at(const ReinforcementCost& base, const ReinforcementCostInputs& inputs,
                             double trafo_cost_kchf_per_mva);

/// Grid-exchange cost of one trajectory (positive injection convention).
double operating_cost_chf(std::span<const double> grid_kw, const StepPrices& prices,
                          double dt_hours);

/// Sum over prosumers of (operating cost after flexibility - before).
double flexibility_cost(std::span<const std::vector<double>> baseline_grid_kw,
                        std::span<const std::vector<double>> spliced_grid_kw,
                        const StepPrices& prices, double dt_hours);

/// One-time value of flexibility capacity in CHF/kW:
/// (C_reinf - delta_opex) / R_grid / sum(P_flex_cap), with per-prosumer
/// flexibility capacity = PV capacity + battery power capacity.
double flexibility_capacity_value(double c_reinf_chf_per_yr, double delta_opex_chf_per_yr,
                                  double r_grid, std::span<const double> flex_capacity_kw);

struct SweepPoint {
    double trafo_cost_kchf_per_mva = 0.0;
    double penetration_pct = 0.0;
    double c_reinf_chf_per_yr = 0.0;
    double delta_opex_chf_per_yr = 0.0;
};

struct SweepScenario {
    double penetration_pct = 0.0;
    ReinforcementCost reinforcement;
    double delta_opex_chf_per_yr = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;  // one per (scenario, cost)
    // per cost: highest penetration with delta_opex <= C_reinf, or -1
    std::vector<std::pair<double, double>> break_even_pct;
};

/// Sensitivity of the reinforcement-vs-flexibility comparison to the
/// transformer specific cost.
SweepResult sensitivity_sweep(std::span<const SweepScenario> scenarios,
                              std::span<const double> trafo_costs_kchf_per_mva,
                              const ReinforcementCostInputs& inputs);

} // namespace gridflex
