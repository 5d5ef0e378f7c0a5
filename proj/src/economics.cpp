#include "gridflex/economics.hpp"

#include <algorithm>
#include <cmath>

#include "gridflex/errors.hpp"

namespace gridflex {

void ReinforcementCostInputs::validate() const {
    if (line_cost_kchf_per_km <= 0 || trafo_cost_kchf_per_mva < 0 || grid_lifetime_years < 1 ||
        grid_interest_rate <= 0)
        throw ValidationError("ReinforcementCostInputs: invalid parameters");
}

ReinforcementCost reinforcement_cost(const AdmittanceModel& model,
                                     std::span<const NetworkState> states,
                                     const ReinforcementCostInputs& inputs) {
    inputs.validate();
    ReinforcementCost rc;
    const size_t nb = model.branches.size();
    std::vector<double> peak_i_pu(nb, 0.0), peak_s_mva(nb, 0.0);
    for (const auto& st : states) {
        for (size_t b = 0; b < nb; ++b) {
            peak_i_pu[b] = std::max(peak_i_pu[b], st.branch_current_pu[b]);
            peak_s_mva[b] = std::max(peak_s_mva[b], st.trafo_mva[b]);
        }
    }
    for (size_t b = 0; b < nb; ++b) {
        const auto& br = model.branches[b];
        if (br.is_transformer) {
            if (peak_s_mva[b] > br.rating_mva) {
                rc.replaced_trafos.push_back(model.branch_ids[b]);
                rc.trafo_component_kchf += inputs.trafo_cost_kchf_per_mva * peak_s_mva[b];
                rc.trafo_peak_mva += peak_s_mva[b];
            }
        } else if (br.ampacity_pu > 0.0 && peak_i_pu[b] > br.ampacity_pu) {
            rc.replaced_lines.push_back(model.branch_ids[b]);
            rc.line_component_kchf += inputs.line_cost_kchf_per_km * br.length_km;
        }
    }
    double r = annualization(inputs.grid_interest_rate, inputs.grid_lifetime_years);
    rc.annualized_chf_per_yr = r * (rc.line_component_kchf + rc.trafo_component_kchf) * 1000.0;
    return rc;
}

double reinforcement_cost_at(const ReinforcementCost& base, const ReinforcementCostInputs& inputs,
                             double trafo_cost_kchf_per_mva) {
    double trafo_kchf = trafo_cost_kchf_per_mva * base.trafo_peak_mva;
    double r = annualization(inputs.grid_interest_rate, inputs.grid_lifetime_years);
    return r * (base.line_component_kchf + trafo_kchf) * 1000.0;
}

double operating_cost_chf(std::span<const double> grid_kw, const StepPrices& prices,
                          double dt_hours) {
    if (grid_kw.size() != prices.import_chf.size())
        throw ValidationError("operating_cost: trajectory and price lengths differ");
    double sum = 0.0;
    for (size_t t = 0; t < grid_kw.size(); ++t) {
        double g = grid_kw[t];
        sum += (prices.import_chf[t] * std::max(0.0, -g) -
                prices.export_chf[t] * std::max(0.0, g)) *
               dt_hours;
    }
    return sum;
}

double flexibility_cost(std::span<const std::vector<double>> baseline_grid_kw,
                        std::span<const std::vector<double>> spliced_grid_kw,
                        const StepPrices& prices, double dt_hours) {
    if (baseline_grid_kw.size() != spliced_grid_kw.size())
        throw ValidationError("flexibility_cost: prosumer counts differ");
    double delta = 0.0;
    for (size_t p = 0; p < baseline_grid_kw.size(); ++p)
        delta += operating_cost_chf(spliced_grid_kw[p], prices, dt_hours) -
                 operating_cost_chf(baseline_grid_kw[p], prices, dt_hours);
    return delta;
}

double flexibility_capacity_value(double c_reinf_chf_per_yr, double delta_opex_chf_per_yr,
                                  double r_grid, std::span<const double> flex_capacity_kw) {
    double total = 0.0;
    for (double c : flex_capacity_kw) total += c;
    if (total <= 0.0)
        throw ValidationError("flexibility_capacity_value: zero total flexibility capacity");
    return (c_reinf_chf_per_yr - delta_opex_chf_per_yr) / r_grid / total;
}

SweepResult sensitivity_sweep(std::span<const SweepScenario> scenarios,
                              std::span<const double> trafo_costs_kchf_per_mva,
                              const ReinforcementCostInputs& inputs) {
    if (trafo_costs_kchf_per_mva.size() < 2)
        throw ValidationError("sensitivity_sweep: need at least two transformer cost points");
    SweepResult out;
    for (double cost : trafo_costs_kchf_per_mva) {
        double best_pen = -1.0;
        for (const auto& sc : scenarios) {
            SweepPoint p;
            p.trafo_cost_kchf_per_mva = cost;
            p.penetration_pct = sc.penetration_pct;
            p.c_reinf_chf_per_yr = reinforcement_cost_at(sc.reinforcement, inputs, cost);
            p.delta_opex_chf_per_yr = sc.delta_opex_chf_per_yr;
            out.points.push_back(p);
            if (p.delta_opex_chf_per_yr <= p.c_reinf_chf_per_yr + 1e-9)
                best_pen = std::max(best_pen, p.penetration_pct);
        }
        out.break_even_pct.emplace_back(cost, best_pen);
    }
    return out;
}

} // namespace gridflex
