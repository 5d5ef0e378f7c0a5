#pragma once

#include <span>
#include <string>
#include <vector>

#include "gridflex/timeseries.hpp"

namespace gridflex {

struct LcoeParams {
    double pv_lifetime_years = 25.0;
    double discount_rate = 0.03;
    double variable_cost_chf_per_w = 0.83;
    double fixed_cost_chf = 10050.0;
    double threshold_cts_per_kwh = 23.92;

    void validate() const;
};

/// Levelized cost of electricity of a PV system: annualized capital cost
/// divided by annual energy yield.
double lcoe_cts_per_kwh(double capacity_kw, const LcoeParams& params,
                        double annual_yield_kwh_per_kw);

struct PvSystem {
    std::string bus_id;
    int module_count = 0;
    double capacity_kw = 0.0;
};

/// One PV penetration scenario: module counts scaled by alpha and gated by
/// the LCOE threshold.
struct PvScenario {
    double scale = 0.0;  // alpha
    double module_kw = 0.4;
    std::vector<PvSystem> systems;  // one per prosumer, profile order

    double installed_kw() const;
    double capacity_for(const std::string& bus_id) const;
};

/// Module count rounded half away from zero; capacity zeroed when the LCOE
/// exceeds the threshold.
PvSystem scale_pv(double alpha, int n_mod_max, double module_kw, const LcoeParams& lcoe,
                  double annual_yield_kwh_per_kw);

PvScenario build_scenario(double alpha, std::span<const std::string> bus_ids,
                          std::span<const int> n_mod_max, double module_kw,
                          const LcoeParams& lcoe, std::span<const double> annual_yield_kwh_per_kw);

/// Annual PV generation as a percentage of annual network demand.
double penetration_of(const PvScenario& scenario, const TimeSeriesSet& profiles);

} // namespace gridflex
