#include "gridflex/dispatch.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "gridflex/errors.hpp"
#include "gridflex/pwl.hpp"

namespace gridflex {

StepPrices prices_for(const Tariff& tariff, std::span<const std::int64_t> timestamps) {
    StepPrices p;
    p.import_chf.reserve(timestamps.size());
    p.export_chf.reserve(timestamps.size());
    for (auto ts : timestamps) {
        auto r = tariff.rate_at(ts);
        p.import_chf.push_back(r.import_cts / 100.0);
        p.export_chf.push_back(r.export_cts / 100.0);
    }
    return p;
}

namespace {

double dt_hours_from(std::span<const std::int64_t> timestamps) {
    if (timestamps.size() < 2)
        throw ValidationError("cannot derive the step length from fewer than two timestamps");
    return static_cast<double>(timestamps[1] - timestamps[0]) / 3600.0;
}

struct StepContext {
    double net_kw;      // pv - load
    double c_imp;       // CHF/kWh
    double c_exp;       // CHF/kWh
};

/// Cost of one step as a function of the SOC change dE (kWh), for a battery
/// of capacity `cap`: optimal charge/discharge split is implied by the sign
/// of dE (mixing is never cheaper under export <= import prices and the
/// discharge penalty).
PwlConvex step_cost_fn(const StepContext& s, double cap, const BatteryParams& bp, double dt_h,
                       double sigma_w) {
    const double p_max = bp.power_ratio_kw_per_kwh * cap;
    const double de_min = -p_max * dt_h / bp.discharge_efficiency;
    const double de_max = bp.charge_efficiency * p_max * dt_h;

    auto cost = [&](double de) {
        double ch = 0.0, dis = 0.0;
        if (de >= 0.0)
            ch = de / (bp.charge_efficiency * dt_h);
        else
            dis = -de * bp.discharge_efficiency / dt_h;
        double grid = s.net_kw + dis - ch;
        return (s.c_imp * std::max(0.0, -grid) - s.c_exp * std::max(0.0, grid)) * dt_h +
               sigma_w * dis;
    };

    double xs[5];
    double vs[5];
    int n = 0;
    auto push = [&](double x) {
        if (x < de_min || x > de_max) return;
        for (int i = 0; i < n; ++i)
            if (xs[i] == x) return;
        xs[n++] = x;
    };
    push(de_min);
    push(0.0);
    // grid-zero crossings: discharging covers a deficit / charging absorbs a
    // surplus exactly
    if (s.net_kw < 0.0) push(s.net_kw * dt_h / bp.discharge_efficiency);
    if (s.net_kw > 0.0) push(bp.charge_efficiency * s.net_kw * dt_h);
    push(de_max);
    std::sort(xs, xs + n);
    for (int i = 0; i < n; ++i) vs[i] = cost(xs[i]);
    return PwlConvex::from_samples({xs, static_cast<size_t>(n)}, {vs, static_cast<size_t>(n)});
}

struct DpResult {
    double operating_cost;  // opex + sigma at the optimum
};

/// Backward value recursion; optionally keeps the per-step value functions
/// for trajectory recovery.
DpResult run_backward(const std::vector<StepContext>& steps, double cap,
                      const BatteryParams& bp, double dt_h, std::vector<PwlConvex>* keep) {
    const size_t T = steps.size();
    const double soc_lo = bp.soc_min_frac * cap;
    const double soc_hi = bp.soc_max_frac * cap;
    const double e0 = bp.initial_soc_frac * cap;

    PwlConvex w = PwlConvex::point(e0, 0.0);  // cyclic boundary
    if (keep) {
        keep->assign(T + 1, PwlConvex());
        (*keep)[T] = w;
    }
    PwlConvex reflected, next;
    for (size_t t = T; t-- > 0;) {
        PwlConvex f = step_cost_fn(steps[t], cap, bp, dt_h, bp.sigma_weight_chf_per_kw);
        f.reflect_into(reflected);
        PwlConvex::inf_convolution(reflected, w, next);
        next.clip(soc_lo, soc_hi);
        std::swap(w, next);
        if (keep) (*keep)[t] = w;
    }
    double e = std::clamp(e0, w.lo(), w.hi());
    return {w.value(e)};
}

DispatchSolution zero_capacity_solution(const std::vector<StepContext>& steps, double dt_h,
                                        const BatteryParams& bp) {
    DispatchSolution s;
    const size_t T = steps.size();
    s.capacity_kwh = 0.0;
    s.battery_kw.assign(T, 0.0);
    s.soc_kwh.assign(T, 0.0);
    s.grid_kw.resize(T);
    for (size_t t = 0; t < T; ++t) {
        double g = steps[t].net_kw;
        s.grid_kw[t] = g;
        s.opex_chf += (steps[t].c_imp * std::max(0.0, -g) - steps[t].c_exp * std::max(0.0, g)) *
                      dt_h;
    }
    s.totex_chf = s.opex_chf +
                  annualization(bp.interest_rate, bp.lifetime_years) * bp.fixed_cost_chf;
    return s;
}

double max_daily_energy_kwh(const std::vector<StepContext>& steps, double dt_h) {
    // Largest calendar-day surplus or deficit; used to bound the capacity
    // search. Step count per day follows from dt.
    size_t per_day = std::max<size_t>(1, static_cast<size_t>(std::lround(24.0 / dt_h)));
    double best = 0.0;
    for (size_t d = 0; d * per_day < steps.size(); ++d) {
        double surplus = 0.0, deficit = 0.0;
        for (size_t t = d * per_day; t < std::min(steps.size(), (d + 1) * per_day); ++t) {
            surplus += std::max(0.0, steps[t].net_kw) * dt_h;
            deficit += std::max(0.0, -steps[t].net_kw) * dt_h;
        }
        best = std::max({best, surplus, deficit});
    }
    return best;
}

} // namespace

DispatchSolution optimize_dispatch(std::span<const double> load_kw,
                                   std::span<const double> yield_kw_per_kw, double pv_capacity_kw,
                                   const StepPrices& prices, double dt_hours,
                                   const BatteryParams& params, const DispatchOptions& opts) {
    const size_t T = load_kw.size();
    if (yield_kw_per_kw.size() != T || prices.import_chf.size() != T ||
        prices.export_chf.size() != T)
        throw ValidationError("optimize_dispatch: input series lengths differ");
    if (pv_capacity_kw < 0.0) throw ValidationError("optimize_dispatch: negative PV capacity");
    if (params.charge_efficiency <= 0.0 || params.charge_efficiency > 1.0 ||
        params.discharge_efficiency <= 0.0 || params.discharge_efficiency > 1.0)
        throw ValidationError("optimize_dispatch: efficiencies must be in (0, 1]");

    std::vector<StepContext> steps(T);
    for (size_t t = 0; t < T; ++t)
        steps[t] = {pv_capacity_kw * yield_kw_per_kw[t] - load_kw[t], prices.import_chf[t],
                    prices.export_chf[t]};

    const double cap_factor =
        annualization(params.interest_rate, params.lifetime_years) * opts.capital_scale;
    auto annual_capital = [&](double cap) {
        return cap_factor * (params.fixed_cost_chf + params.unit_cost_chf_per_kwh * cap);
    };

    if (opts.force_zero_capacity || (opts.fixed_capacity_kwh == 0.0) || T == 0)
        return zero_capacity_solution(steps, dt_hours, params);

    auto totex_at = [&](double cap) {
        if (cap <= 0.0) {
            double opex = 0.0;
            for (const auto& s : steps)
                opex += (s.c_imp * std::max(0.0, -s.net_kw) -
                         s.c_exp * std::max(0.0, s.net_kw)) *
                        dt_hours;
            return opex + annual_capital(0.0);
        }
        return run_backward(steps, cap, params, dt_hours, nullptr).operating_cost +
               annual_capital(cap);
    };

    double best_cap;
    if (opts.fixed_capacity_kwh > 0.0) {
        best_cap = opts.fixed_capacity_kwh;
    } else {
        double cap_hi = opts.max_capacity_kwh > 0.0
                            ? opts.max_capacity_kwh
                            : 1.0 + 1.5 * max_daily_energy_kwh(steps, dt_hours);

        // golden-section over the convex capacity-cost curve; re-expand if
        // the optimum presses against the upper bound
        best_cap = 0.0;
        double best_val = totex_at(0.0);
        for (int expand = 0; expand < 4; ++expand) {
            const double gr = 0.61803398874989484820;
            double a = 0.0, b = cap_hi;
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            double f1 = totex_at(x1), f2 = totex_at(x2);
            auto consider = [&](double c, double v) {
                if (v < best_val - 1e-15 || (v < best_val + 1e-12 && c < best_cap)) {
                    best_val = std::min(best_val, v);
                    best_cap = c;
                }
            };
            consider(x1, f1);
            consider(x2, f2);
            while (b - a > opts.capacity_tol_kwh) {
                if (f1 <= f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - gr * (b - a);
                    f1 = totex_at(x1);
                    consider(x1, f1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + gr * (b - a);
                    f2 = totex_at(x2);
                    consider(x2, f2);
                }
            }
            if (best_cap < 0.98 * cap_hi || opts.max_capacity_kwh > 0.0) break;
            cap_hi *= 2.0;
        }

        if (best_cap <= opts.capacity_tol_kwh &&
            totex_at(0.0) <= best_val + 1e-9 * (1.0 + std::abs(best_val))) {
            // a vanishing battery is a zero battery
            return zero_capacity_solution(steps, dt_hours, params);
        }
    }

    // trajectory recovery at the chosen capacity
    const double cap = best_cap;
    std::vector<PwlConvex> values;
    run_backward(steps, cap, params, dt_hours, &values);

    DispatchSolution s;
    s.capacity_kwh = cap;
    s.initial_soc_kwh = params.initial_soc_frac * cap;
    s.battery_kw.resize(T);
    s.soc_kwh.resize(T);
    s.grid_kw.resize(T);
    double e = s.initial_soc_kwh;
    for (size_t t = 0; t < T; ++t) {
        PwlConvex f = step_cost_fn(steps[t], cap, params, dt_hours,
                                   params.sigma_weight_chf_per_kw);
        auto r = minimize_shifted_sum(f, values[t + 1], e, 0.0);
        double de = r.d;
        double ch = 0.0, dis = 0.0;
        if (de >= 0.0)
            ch = de / (params.charge_efficiency * dt_hours);
        else
            dis = -de * params.discharge_efficiency / dt_hours;
        e = std::clamp(e + de, values[t + 1].lo(), values[t + 1].hi());
        s.battery_kw[t] = dis - ch;
        s.soc_kwh[t] = e;
        double grid = steps[t].net_kw + dis - ch;
        s.grid_kw[t] = grid;
        s.opex_chf += (steps[t].c_imp * std::max(0.0, -grid) -
                       steps[t].c_exp * std::max(0.0, grid)) *
                      dt_hours;
        s.sigma_chf += params.sigma_weight_chf_per_kw * dis;
    }
    if (std::abs(e - s.initial_soc_kwh) > 1e-6)
        throw SolverError("dispatch: cyclic SOC boundary violated by " +
                          std::to_string(e - s.initial_soc_kwh) + " kWh");
    s.totex_chf = s.opex_chf + s.sigma_chf + annual_capital(cap);
    return s;
}

DispatchSolution optimize_dispatch(std::span<const double> load_kw,
                                   std::span<const double> yield_kw_per_kw, double pv_capacity_kw,
                                   std::span<const std::int64_t> timestamps, const Tariff& tariff,
                                   const BatteryParams& params, const DispatchOptions& opts) {
    return optimize_dispatch(load_kw, yield_kw_per_kw, pv_capacity_kw,
                             prices_for(tariff, timestamps), dt_hours_from(timestamps), params,
                             opts);
}

std::vector<DispatchSolution> optimize_fleet(std::span<const ProsumerInputs> fleet,
                                             const StepPrices& prices, double dt_hours,
                                             const BatteryParams& params,
                                             const DispatchOptions& opts, Execution exec) {
    std::vector<DispatchSolution> out(fleet.size());
    std::exception_ptr err;
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < static_cast<int>(fleet.size()); ++i) {
            try {
                out[i] = optimize_dispatch(fleet[i].load_kw, fleet[i].yield_kw_per_kw,
                                           fleet[i].pv_capacity_kw, prices, dt_hours, params,
                                           opts);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
    } else {
        for (size_t i = 0; i < fleet.size(); ++i)
            out[i] = optimize_dispatch(fleet[i].load_kw, fleet[i].yield_kw_per_kw,
                                       fleet[i].pv_capacity_kw, prices, dt_hours, params, opts);
    }
    if (err) std::rethrow_exception(err);
    return out;
}

CapacitySummary battery_count_summary(std::span<const std::string> bus_ids,
                                      std::span<const DispatchSolution> solutions) {
    if (bus_ids.size() != solutions.size())
        throw ValidationError("battery_count_summary: one solution per prosumer required");
    CapacitySummary s;
    for (size_t i = 0; i < bus_ids.size(); ++i) {
        s.rows.emplace_back(bus_ids[i], solutions[i].capacity_kwh);
        s.total_kwh += solutions[i].capacity_kwh;
    }
    return s;
}

} // namespace gridflex
