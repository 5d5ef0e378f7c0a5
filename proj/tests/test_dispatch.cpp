#include <doctest.h>

#include <cmath>
#include <vector>

#include "gridflex/dispatch.hpp"
#include "gridflex/simplex.hpp"
#include "gridflex/tariff.hpp"

using namespace gridflex;

TEST_SUITE_BEGIN("dispatch");

namespace {

struct Toy {
    std::vector<double> load_kw;
    std::vector<double> yield;
    double pv_capacity_kw = 0.0;
    StepPrices prices;
    double dt_h = 1.0;
    std::vector<std::int64_t> timestamps;
};

/// 24 hourly steps on a Wednesday: flat 2 kW load, midday PV bell, the
/// two-level import tariff and flat export.
Toy make_toy(double pv_cap = 3.0) {
    Toy toy;
    toy.pv_capacity_kw = pv_cap;
    Tariff tariff;
    std::int64_t start = epoch_from_civil(2019, 1, 2);
    for (int h = 0; h < 24; ++h) {
        toy.timestamps.push_back(start + 3600LL * h);
        toy.load_kw.push_back(2.0);
        double y = std::max(0.0, std::sin((h - 6.0) / 12.0 * M_PI));
        toy.yield.push_back(h >= 7 && h <= 17 ? y : 0.0);
    }
    toy.prices = prices_for(tariff, toy.timestamps);
    return toy;
}

BatteryParams cheap_battery() {
    BatteryParams bp;
    bp.unit_cost_chf_per_kwh = 0.2;  // amortized small against a 24 h horizon
    return bp;
}

/// Brute-force oracle: optimal dispatch at a fixed capacity as a linear
/// program (independent of the value-function recursion under test).
double lp_dispatch_totex(const Toy& toy, double cap, const BatteryParams& bp,
                         std::vector<double>* imports = nullptr,
                         std::vector<double>* exports = nullptr) {
    const int T = static_cast<int>(toy.load_kw.size());
    const double dt = toy.dt_h;
    lp::Problem p;
    const double pmax = bp.power_ratio_kw_per_kwh * cap;
    std::vector<int> ch(T), dis(T), imp(T), exp(T), soc(T);
    for (int t = 0; t < T; ++t) {
        ch[t] = p.add_var(0.0, 0.0, pmax);
        dis[t] = p.add_var(bp.sigma_weight_chf_per_kw, 0.0, pmax);
        imp[t] = p.add_var(toy.prices.import_chf[t] * dt, 0.0, lp::kInf);
        exp[t] = p.add_var(-toy.prices.export_chf[t] * dt, 0.0, lp::kInf);
        soc[t] = p.add_var(0.0, bp.soc_min_frac * cap, bp.soc_max_frac * cap);
    }
    const double e0 = bp.initial_soc_frac * cap;
    for (int t = 0; t < T; ++t) {
        // exp - imp - dis + ch = pv - load
        auto& bal = p.add_row(lp::Sense::Eq, toy.pv_capacity_kw * toy.yield[t] - toy.load_kw[t]);
        bal.terms = {{exp[t], 1.0}, {imp[t], -1.0}, {dis[t], -1.0}, {ch[t], 1.0}};
        // soc_t - soc_{t-1} - eta_ch dt ch + dt/eta_dis dis = 0
        auto& dyn = p.add_row(lp::Sense::Eq, t == 0 ? e0 : 0.0);
        dyn.terms = {{soc[t], 1.0},
                     {ch[t], -bp.charge_efficiency * dt},
                     {dis[t], dt / bp.discharge_efficiency}};
        if (t > 0) dyn.terms.push_back({soc[t - 1], -1.0});
        if (t == 0) dyn.terms.back() = dyn.terms.back();  // rhs carries e0
    }
    auto& cyc = p.add_row(lp::Sense::Eq, e0);
    cyc.terms = {{soc[T - 1], 1.0}};

    auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::Status::Optimal);
    if (imports) {
        imports->resize(T);
        exports->resize(T);
        for (int t = 0; t < T; ++t) {
            (*imports)[t] = sol.x[imp[t]];
            (*exports)[t] = sol.x[exp[t]];
        }
    }
    double capital = annualization(bp.interest_rate, bp.lifetime_years) *
                     (bp.fixed_cost_chf + bp.unit_cost_chf_per_kwh * cap);
    return sol.objective + capital;
}

} // namespace

TEST_CASE("no PV and flat symmetric prices: no battery, opex is the energy bill") {
    Toy toy = make_toy(0.0);
    for (int t = 0; t < 24; ++t) {
        toy.prices.import_chf[t] = 0.20;
        toy.prices.export_chf[t] = 0.20;
    }
    BatteryParams bp;  // full-price battery
    auto s = optimize_dispatch(toy.load_kw, toy.yield, 0.0, toy.prices, toy.dt_h, bp);
    CHECK(s.capacity_kwh == 0.0);
    for (double b : s.battery_kw) CHECK(b == 0.0);
    CHECK(s.opex_chf == doctest::Approx(2.0 * 24 * 0.20).epsilon(1e-12));
}

TEST_CASE("forced zero capacity reproduces the raw net profile") {
    Toy toy = make_toy(3.0);
    BatteryParams bp;
    DispatchOptions opts;
    opts.force_zero_capacity = true;
    auto s = optimize_dispatch(toy.load_kw, toy.yield, toy.pv_capacity_kw, toy.prices, toy.dt_h,
                               bp, opts);
    for (int t = 0; t < 24; ++t)
        CHECK(s.grid_kw[t] ==
              doctest::Approx(toy.pv_capacity_kw * toy.yield[t] - toy.load_kw[t]).epsilon(1e-12));
}

TEST_CASE("24-step toy: recursion matches the capacity-grid LP oracle") {
    Toy toy = make_toy(3.0);
    BatteryParams bp = cheap_battery();
    DispatchOptions opts;
    opts.capacity_tol_kwh = 1e-7;

    auto full = optimize_dispatch(toy.load_kw, toy.yield, toy.pv_capacity_kw, toy.prices,
                                  toy.dt_h, bp, opts);

    double best_oracle = 1e300;
    for (int k = 0; k <= 20; ++k) {
        double cap = 0.5 * k;
        double oracle = lp_dispatch_totex(toy, cap, bp);
        best_oracle = std::min(best_oracle, oracle);
        CHECK(full.totex_chf <= oracle * (1.0 + 1e-6) + 1e-9);

        // exact agreement of the two solvers at the same capacity
        DispatchOptions fixed;
        fixed.fixed_capacity_kwh = cap;
        auto at_cap = optimize_dispatch(toy.load_kw, toy.yield, toy.pv_capacity_kw, toy.prices,
                                        toy.dt_h, bp, fixed);
        CHECK(at_cap.totex_chf == doctest::Approx(oracle).epsilon(1e-8));
    }
    // the free optimum may only improve on the grid
    CHECK(full.totex_chf <= best_oracle + 1e-9);
}

TEST_CASE("no simultaneous import and export at the LP optimum") {
    Toy toy = make_toy(3.0);
    BatteryParams bp = cheap_battery();
    std::vector<double> imports, exports;
    lp_dispatch_totex(toy, 5.0, bp, &imports, &exports);
    for (int t = 0; t < 24; ++t) CHECK(imports[t] * exports[t] < 1e-9);
}

TEST_CASE("SOC bounds and cyclic closure hold exactly") {
    Toy toy = make_toy(3.0);
    BatteryParams bp = cheap_battery();
    DispatchOptions opts;
    opts.fixed_capacity_kwh = 4.0;
    auto s = optimize_dispatch(toy.load_kw, toy.yield, toy.pv_capacity_kw, toy.prices, toy.dt_h,
                               bp, opts);
    for (double e : s.soc_kwh) {
        CHECK(e >= -1e-9);
        CHECK(e <= 4.0 + 1e-9);
    }
    CHECK(s.soc_kwh.back() == doctest::Approx(s.initial_soc_kwh).epsilon(1e-9));
    for (double b : s.battery_kw) CHECK(std::abs(b) <= 0.5 * 4.0 + 1e-9);
}

TEST_CASE("discharge regularization shifts opex by no more than its own bound") {
    Toy toy = make_toy(3.0);
    BatteryParams with_sigma = cheap_battery();
    BatteryParams no_sigma = cheap_battery();
    no_sigma.sigma_weight_chf_per_kw = 0.0;
    DispatchOptions opts;
    opts.fixed_capacity_kwh = 5.0;
    auto a = optimize_dispatch(toy.load_kw, toy.yield, toy.pv_capacity_kw, toy.prices, toy.dt_h,
                               with_sigma, opts);
    auto b = optimize_dispatch(toy.load_kw, toy.yield, toy.pv_capacity_kw, toy.prices, toy.dt_h,
                               no_sigma, opts);
    double discharge_sum = 0.0;
    for (double p : b.battery_kw) discharge_sum += std::max(0.0, p);
    CHECK(a.opex_chf - b.opex_chf >= -1e-9);
    CHECK(a.opex_chf - b.opex_chf <= 1e-6 * discharge_sum + 1e-9);
}

TEST_CASE("raising the battery unit cost never raises the optimal capacity") {
    Toy toy = make_toy(6.0);
    DispatchOptions opts;
    opts.capacity_tol_kwh = 1e-6;
    double prev = 1e300;
    for (double cost : {0.05, 0.2, 0.8}) {
        BatteryParams bp = cheap_battery();
        bp.unit_cost_chf_per_kwh = cost;
        auto s = optimize_dispatch(toy.load_kw, toy.yield, toy.pv_capacity_kw, toy.prices,
                                   toy.dt_h, bp, opts);
        CHECK(s.capacity_kwh <= prev + 1e-4);
        prev = s.capacity_kwh;
    }
}

TEST_CASE("fleet: identical prosumers get identical solutions, serial == parallel") {
    Toy toy = make_toy(3.0);
    BatteryParams bp = cheap_battery();
    std::vector<ProsumerInputs> fleet(3);
    for (auto& f : fleet) {
        f.load_kw = toy.load_kw;
        f.yield_kw_per_kw = toy.yield;
        f.pv_capacity_kw = toy.pv_capacity_kw;
    }
    fleet[0].bus_id = "A";
    fleet[1].bus_id = "B";
    fleet[2].bus_id = "C";
    auto par = optimize_fleet(fleet, toy.prices, toy.dt_h, bp, {}, Execution::Parallel);
    auto ser = optimize_fleet(fleet, toy.prices, toy.dt_h, bp, {}, Execution::Serial);
    REQUIRE(par.size() == 3);
    CHECK(par[0].capacity_kwh == par[1].capacity_kwh);
    CHECK(par[0].totex_chf == par[1].totex_chf);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(par[i].capacity_kwh == ser[i].capacity_kwh);
        CHECK(par[i].grid_kw == ser[i].grid_kw);
    }
}

TEST_CASE("costly battery with no PV sizes to zero; summary totals") {
    Toy toy = make_toy(0.0);
    BatteryParams bp;  // 182 CHF/kWh against a day of arbitrage
    std::vector<ProsumerInputs> fleet(2);
    for (auto& f : fleet) {
        f.load_kw = toy.load_kw;
        f.yield_kw_per_kw = toy.yield;
        f.pv_capacity_kw = 0.0;
    }
    auto sols = optimize_fleet(fleet, toy.prices, toy.dt_h, bp);
    std::vector<std::string> ids = {"A", "B"};
    auto summary = battery_count_summary(ids, sols);
    CHECK(summary.total_kwh == 0.0);
    CHECK(summary.rows.size() == 2);
}

TEST_SUITE_END();
