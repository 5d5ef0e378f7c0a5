#include <doctest.h>

#include <cmath>
#include <random>

#include "gridflex/audit.hpp"
#include "gridflex/errors.hpp"
#include "gridflex/powerflow.hpp"
#include "test_support.hpp"

using namespace gridflex;
namespace gt = gridflex::testing;

TEST_SUITE_BEGIN("powerflow");

namespace {

AdmittanceModel two_bus_model() {
    auto path = gt::temp_file("pf2.net",
                              "bus,S,slack,0.4,0\n"
                              "bus,L,pq,0.4,1\n"
                              "branch,S,L,1.0,0.1,0.1,1.0,0,0\n");  // y = 0.8 - 0.8j pu
    return build_admittance(load_network(path));
}

AdmittanceModel four_bus_model() {
    // radial: slack - b2 - b3 - b4 with mixed impedances (pu on 0.4 kV / 1 MVA)
    double zb = 0.16;
    auto line = [&](double rpu, double xpu) {
        return std::to_string(rpu * zb) + "," + std::to_string(xpu * zb);
    };
    auto path = gt::temp_file("pf4.net",
                              "bus,B1,slack,0.4,0\n"
                              "bus,B2,pq,0.4,1\n"
                              "bus,B3,pq,0.4,1\n"
                              "bus,B4,pq,0.4,1\n"
                              "branch,B1,B2,1.0," + line(0.04, 0.04) + ",1.0,0,0\n" +
                              "branch,B2,B3,1.0," + line(0.08, 0.03) + ",1.0,0,0\n" +
                              "branch,B3,B4,1.0," + line(0.10, 0.05) + ",1.0,0,0\n");
    return build_admittance(load_network(path));
}

InjectionFrame frame(const AdmittanceModel& m) {
    InjectionFrame f;
    f.p_pu = Eigen::VectorXd::Zero(m.num_buses());
    f.q_pu = Eigen::VectorXd::Zero(m.num_buses());
    return f;
}

} // namespace

TEST_CASE("flat no-load solution") {
    AdmittanceModel m = build_admittance(load_network(gt::data_file("cigre_lv.net")));
    auto st = solve_loadflow(m, frame(m));
    CHECK(st.converged);
    for (int i = 0; i < m.num_buses(); ++i) {
        CHECK(st.v_pu(i) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(st.theta_rad(i) == doctest::Approx(0.0).epsilon(1e-10));
    }
    for (double i_pu : st.branch_current_pu) CHECK(i_pu < 1e-9);
}

TEST_CASE("2-bus case against the dense root-search oracle") {
    AdmittanceModel m = two_bus_model();
    InjectionFrame f = frame(m);
    f.p_pu(1) = -0.1;
    auto st = solve_loadflow(m, f);

    // frozen from an independent root finder on the mismatch equations
    CHECK(st.theta_rad(1) == doctest::Approx(-0.067213038332).epsilon(1e-9));
    CHECK(st.v_pu(1) == doctest::Approx(0.930579611062).epsilon(1e-9));

    Eigen::VectorXd v, th;
    REQUIRE(gt::grid_search_loadflow(m, f, v, th, 1e-10));
    CHECK(std::abs(st.v_pu(1) - v(1)) < 1e-8);
    CHECK(std::abs(st.theta_rad(1) - th(1)) < 1e-8);
}

TEST_CASE("4-bus radial instance against the oracle and frozen values") {
    AdmittanceModel m = four_bus_model();
    InjectionFrame f = frame(m);
    f.p_pu(1) = -0.08;
    f.q_pu(1) = -0.02;
    f.p_pu(2) = 0.05;
    f.p_pu(3) = -0.06;
    f.q_pu(3) = -0.01;
    auto st = solve_loadflow(m, f);

    CHECK(st.v_pu(1) == doctest::Approx(0.995149851323).epsilon(1e-8));
    CHECK(st.v_pu(2) == doctest::Approx(0.994006821446).epsilon(1e-8));
    CHECK(st.v_pu(3) == doctest::Approx(0.987421959087).epsilon(1e-8));
    CHECK(st.theta_rad(3) == doctest::Approx(-0.003948144056).epsilon(1e-8));

    Eigen::VectorXd v, th;
    REQUIRE(gt::grid_search_loadflow(m, f, v, th, 1e-10));
    for (int i = 1; i < 4; ++i) {
        CHECK(std::abs(st.v_pu(i) - v(i)) < 1e-8);
        CHECK(std::abs(st.theta_rad(i) - th(i)) < 1e-8);
    }
}

TEST_CASE("pure PV injection at a leaf raises its voltage above the slack") {
    AdmittanceModel m = two_bus_model();
    InjectionFrame f = frame(m);
    f.p_pu(1) = 0.08;
    auto st = solve_loadflow(m, f);
    CHECK(st.v_pu(1) > 1.0);
}

TEST_CASE("residual re-substitution on 1000 randomized fixture steps") {
    AdmittanceModel m = build_admittance(load_network(gt::data_file("cigre_lv.net")));
    std::mt19937 rng(2024);
    auto uni = [&](double a, double b) {
        return a + (b - a) * (rng() / double(std::mt19937::max()));
    };
    std::vector<InjectionFrame> frames;
    for (int k = 0; k < 1000; ++k) {
        InjectionFrame f = frame(m);
        for (int p : m.prosumers) {
            f.p_pu(p) = uni(-0.15, 0.25);
            f.q_pu(p) = uni(-0.05, 0.05);
        }
        frames.push_back(std::move(f));
    }
    auto res = solve_series(m, frames, {}, Execution::Parallel);
    REQUIRE(res.failures.empty());
    Eigen::VectorXd p, q;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        gt::injections_of(m, res.states[k].v_pu, res.states[k].theta_rad, p, q);
        for (int i = 0; i < m.num_buses(); ++i) {
            if (i == m.slack) continue;
            worst = std::max({worst, std::abs(p(i) - frames[k].p_pu(i)),
                              std::abs(q(i) - frames[k].q_pu(i))});
        }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("slack balances load minus generation plus non-negative losses") {
    AdmittanceModel m = build_admittance(load_network(gt::data_file("cigre_lv.net")));
    InjectionFrame f = frame(m);
    for (int p : m.prosumers) f.p_pu(p) = -0.02;  // pure load
    auto st = solve_loadflow(m, f);
    double losses = total_losses_pu(m, f, st);
    CHECK(losses >= 0.0);
    CHECK(losses < 0.05);
}

TEST_CASE("serial and parallel sweeps are bit-identical") {
    AdmittanceModel m = build_admittance(load_network(gt::data_file("cigre_lv.net")));
    std::mt19937 rng(5);
    auto uni = [&](double a, double b) {
        return a + (b - a) * (rng() / double(std::mt19937::max()));
    };
    std::vector<InjectionFrame> frames;
    for (int k = 0; k < 400; ++k) {
        InjectionFrame f = frame(m);
        for (int p : m.prosumers) f.p_pu(p) = uni(-0.1, 0.2);
        frames.push_back(std::move(f));
    }
    auto a = solve_series(m, frames, {}, Execution::Parallel);
    auto b = solve_series(m, frames, {}, Execution::Serial);
    REQUIRE(a.failures.empty());
    REQUIRE(b.failures.empty());
    for (int k = 0; k < 400; ++k) {
        CHECK(a.states[k].v_pu == b.states[k].v_pu);  // exact
        CHECK(a.states[k].theta_rad == b.states[k].theta_rad);
    }
}

TEST_CASE("warm start reaches the same solution") {
    AdmittanceModel m = build_admittance(load_network(gt::data_file("cigre_lv.net")));
    InjectionFrame f = frame(m);
    for (int p : m.prosumers) f.p_pu(p) = 0.05;
    auto cold = solve_loadflow(m, f);
    auto warm = solve_loadflow(m, f, {}, &cold);
    CHECK(warm.iterations <= cold.iterations);
    for (int i = 0; i < m.num_buses(); ++i)
        CHECK(warm.v_pu(i) == doctest::Approx(cold.v_pu(i)).epsilon(1e-10));
}

TEST_CASE("non-convergence carries the worst mismatch diagnostic") {
    AdmittanceModel m = two_bus_model();
    InjectionFrame f = frame(m);
    f.p_pu(1) = -100.0;  // far beyond the loadability limit
    CHECK_THROWS_AS(solve_loadflow(m, f), SolverError);
}

TEST_CASE("isolated bus yields a singular-system error") {
    auto path = gt::temp_file("island.net",
                              "bus,S,slack,0.4,0\n"
                              "bus,A,pq,0.4,0\n"
                              "bus,X,pq,0.4,0\n"  // no branch touches X
                              "branch,S,A,1.0,0.1,0.1,1.0,0,0\n");
    AdmittanceModel m = build_admittance(load_network(path));
    InjectionFrame f = frame(m);
    f.p_pu(1) = -0.01;
    CHECK_THROWS_AS(solve_loadflow(m, f), SolverError);
}

TEST_SUITE_END();
