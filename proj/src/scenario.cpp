#include "gridflex/scenario.hpp"

#include <cmath>

#include "gridflex/errors.hpp"
#include "gridflex/tariff.hpp"

namespace gridflex {

void LcoeParams::validate() const {
    if (pv_lifetime_years <= 0 || discount_rate <= 0 || variable_cost_chf_per_w <= 0 ||
        fixed_cost_chf <= 0 || threshold_cts_per_kwh <= 0)
        throw ValidationError("LcoeParams: all parameters must be strictly positive");
}

double lcoe_cts_per_kwh(double capacity_kw, const LcoeParams& params,
                        double annual_yield_kwh_per_kw) {
    params.validate();
    if (capacity_kw <= 0.0 || annual_yield_kwh_per_kw <= 0.0)
        throw ValidationError("lcoe: capacity and yield must be positive");
    double capex = params.fixed_cost_chf + params.variable_cost_chf_per_w * 1000.0 * capacity_kw;
    double annual_cost =
        annualization(params.discount_rate, static_cast<int>(params.pv_lifetime_years)) * capex;
    double annual_kwh = capacity_kw * annual_yield_kwh_per_kw;
    return annual_cost / annual_kwh * 100.0;
}

double PvScenario::installed_kw() const {
    double sum = 0.0;
    for (const auto& s : systems) sum += s.capacity_kw;
    return sum;
}

double PvScenario::capacity_for(const std::string& bus_id) const {
    for (const auto& s : systems)
        if (s.bus_id == bus_id) return s.capacity_kw;
    return 0.0;
}

PvSystem scale_pv(double alpha, int n_mod_max, double module_kw, const LcoeParams& lcoe,
                  double annual_yield_kwh_per_kw) {
    if (alpha <= 0.0 || alpha > 1.0) throw ValidationError("scale_pv: alpha must be in (0, 1]");
    if (n_mod_max < 0) throw ValidationError("scale_pv: negative module count");
    PvSystem s;
    s.module_count = static_cast<int>(std::round(alpha * n_mod_max));
    s.capacity_kw = s.module_count * module_kw;
    if (s.capacity_kw > 0.0 &&
        lcoe_cts_per_kwh(s.capacity_kw, lcoe, annual_yield_kwh_per_kw) >
            lcoe.threshold_cts_per_kwh) {
        s.module_count = 0;
        s.capacity_kw = 0.0;
    }
    return s;
}

PvScenario build_scenario(double alpha, std::span<const std::string> bus_ids,
                          std::span<const int> n_mod_max, double module_kw,
                          const LcoeParams& lcoe,
                          std::span<const double> annual_yield_kwh_per_kw) {
    if (bus_ids.size() != n_mod_max.size() || bus_ids.size() != annual_yield_kwh_per_kw.size())
        throw ValidationError("build_scenario: input sizes differ");
    PvScenario sc;
    sc.scale = alpha;
    sc.module_kw = module_kw;
    for (size_t i = 0; i < bus_ids.size(); ++i) {
        PvSystem s = scale_pv(alpha, n_mod_max[i], module_kw, lcoe, annual_yield_kwh_per_kw[i]);
        s.bus_id = bus_ids[i];
        sc.systems.push_back(std::move(s));
    }
    return sc;
}

double penetration_of(const PvScenario& scenario, const TimeSeriesSet& profiles) {
    double pv_kwh = 0.0, demand_kwh = 0.0;
    double dt = profiles.dt_hours();
    for (size_t p = 0; p < profiles.prosumers.size(); ++p) {
        double cap = scenario.capacity_for(profiles.prosumers[p]);
        for (double y : profiles.yield_kw_per_kw[p]) pv_kwh += cap * y * dt;
        for (double l : profiles.load_kw[p]) demand_kwh += l * dt;
    }
    if (demand_kwh <= 0.0) throw ValidationError("penetration_of: zero annual demand");
    return 100.0 * pv_kwh / demand_kwh;
}

} // namespace gridflex
