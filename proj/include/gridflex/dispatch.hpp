#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gridflex/tariff.hpp"

namespace gridflex {

enum class Execution { Serial, Parallel };

struct BatteryParams {
    double unit_cost_chf_per_kwh = 182.0;
    double fixed_cost_chf = 0.0;
    int lifetime_years = 9;
    double interest_rate = 0.03;
    double charge_efficiency = 0.95;
    double discharge_efficiency = 0.95;
    double power_ratio_kw_per_kwh = 0.5;  // C-rate cap on |p_bat|
    double soc_min_frac = 0.0;
    double soc_max_frac = 1.0;
    double initial_soc_frac = 0.5;  // also the cyclic boundary value
    double sigma_weight_chf_per_kw = 1e-6;  // discharge regularization
};

struct DispatchOptions {
    double capacity_tol_kwh = 1e-4;    // golden-section stopping width
    double max_capacity_kwh = -1.0;    // <=0: derived from the profiles
    bool force_zero_capacity = false;  // fix E_cap = 0 (storage-free mode)
    double fixed_capacity_kwh = -1.0;  // >=0: skip sizing, dispatch at this capacity
    double capital_scale = 1.0;        // battery capital weight vs horizon opex
};

/// Per-step import/export prices in CHF/kWh.
struct StepPrices {
    std::vector<double> import_chf;
    std::vector<double> export_chf;
};
StepPrices prices_for(const Tariff& tariff, std::span<const std::int64_t> timestamps);

struct DispatchSolution {
    double capacity_kwh = 0.0;
    std::vector<double> battery_kw;  // positive when discharging
    std::vector<double> soc_kwh;     // energy at the end of each step
    std::vector<double> grid_kw;     // positive when injecting
    double initial_soc_kwh = 0.0;
    double opex_chf = 0.0;   // grid exchange cost over the horizon
    double sigma_chf = 0.0;  // discharge regularization term
    double totex_chf = 0.0;  // opex + sigma + annualized battery capital

    /// Stage-1 state of charge entering step t (== soc at end of step t-1,
    /// cyclic at t = 0).
    double soc_before(size_t t) const { return t == 0 ? initial_soc_kwh : soc_kwh[t - 1]; }
};

/// Sizes the battery and computes its optimal trajectory for one prosumer:
/// minimizes grid-exchange cost plus discharge regularization plus the
/// annualized battery capital cost, subject to charge/discharge efficiency,
/// C-rate and SOC bounds, and a cyclic SOC boundary. Exact for the linear
/// formulation (convex value-function recursion over SOC; capacity by
/// golden-section over the convex capacity-cost curve).
DispatchSolution optimize_dispatch(std::span<const double> load_kw,
                                   std::span<const double> yield_kw_per_kw, double pv_capacity_kw,
                                   const StepPrices& prices, double dt_hours,
                                   const BatteryParams& params, const DispatchOptions& opts = {});

/// Tariff-based convenience overload.
DispatchSolution optimize_dispatch(std::span<const double> load_kw,
                                   std::span<const double> yield_kw_per_kw, double pv_capacity_kw,
                                   std::span<const std::int64_t> timestamps, const Tariff& tariff,
                                   const BatteryParams& params, const DispatchOptions& opts = {});

struct ProsumerInputs {
    std::string bus_id;
    std::span<const double> load_kw;
    std::span<const double> yield_kw_per_kw;
    double pv_capacity_kw = 0.0;
};

/// Per-prosumer problems are independent; Parallel runs them on OpenMP
/// threads and produces bit-identical results to Serial.
std::vector<DispatchSolution> optimize_fleet(std::span<const ProsumerInputs> fleet,
                                             const StepPrices& prices, double dt_hours,
                                             const BatteryParams& params,
                                             const DispatchOptions& opts = {},
                                             Execution exec = Execution::Parallel);

struct CapacitySummary {
    std::vector<std::pair<std::string, double>> rows;  // bus id -> kWh
    double total_kwh = 0.0;
};
CapacitySummary battery_count_summary(std::span<const std::string> bus_ids,
                                      std::span<const DispatchSolution> solutions);

} // namespace gridflex
