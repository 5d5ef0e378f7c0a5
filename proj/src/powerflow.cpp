#include "gridflex/powerflow.hpp"

#include <cmath>
#include <complex>

#include <omp.h>

#include "gridflex/errors.hpp"

namespace gridflex {

namespace {

void compute_power(const Eigen::MatrixXcd& ybus, const Eigen::VectorXd& v,
                   const Eigen::VectorXd& th, Eigen::VectorXd& p, Eigen::VectorXd& q) {
    const int n = static_cast<int>(v.size());
    Eigen::VectorXcd vc(n);
    for (int i = 0; i < n; ++i) vc(i) = std::polar(v(i), th(i));
    Eigen::VectorXcd s = vc.array() * (ybus * vc).conjugate().array();
    p = s.real();
    q = s.imag();
}

void fill_flows(const AdmittanceModel& model, NetworkState& st) {
    const size_t nb = model.branches.size();
    st.branch_current_pu.resize(nb);
    st.branch_current_ka.resize(nb);
    st.trafo_mva.resize(nb);
    for (size_t b = 0; b < nb; ++b) {
        const auto& br = model.branches[b];
        std::complex<double> vf = std::polar(st.v_pu(br.from), st.theta_rad(br.from));
        std::complex<double> vt = std::polar(st.v_pu(br.to), st.theta_rad(br.to));
        std::complex<double> i = br.y_pu * (vf - vt);
        double imag = std::abs(i);
        st.branch_current_pu[b] = imag;
        st.branch_current_ka[b] = imag * model.bus_i_base_ka[br.from];
        st.trafo_mva[b] =
            br.is_transformer ? std::abs(vf * std::conj(i)) * model.s_base_mva : 0.0;
    }
}

} // namespace

NetworkState solve_loadflow(const AdmittanceModel& model, const InjectionFrame& inj,
                            const PowerflowOptions& opts, const NetworkState* warm) {
    const int n = model.num_buses();
    if (inj.p_pu.size() != n || inj.q_pu.size() != n)
        throw ValidationError("solve_loadflow: injection frame size mismatch");

    std::vector<int> pq;
    pq.reserve(n - 1);
    for (int i = 0; i < n; ++i)
        if (i != model.slack) pq.push_back(i);
    const int m = static_cast<int>(pq.size());

    NetworkState st;
    if (warm && warm->converged) {
        st.v_pu = warm->v_pu;
        st.theta_rad = warm->theta_rad;
    } else {
        st.v_pu = Eigen::VectorXd::Ones(n);
        st.theta_rad = Eigen::VectorXd::Zero(n);
    }
    st.v_pu(model.slack) = 1.0;
    st.theta_rad(model.slack) = 0.0;

    const Eigen::MatrixXd G = model.ybus.real();
    const Eigen::MatrixXd B = model.ybus.imag();

    Eigen::VectorXd pcalc, qcalc;
    Eigen::MatrixXd jac(2 * m, 2 * m);
    Eigen::VectorXd mis(2 * m);

    for (int it = 1; it <= opts.max_iterations; ++it) {
        compute_power(model.ybus, st.v_pu, st.theta_rad, pcalc, qcalc);
        double worst = 0.0;
        for (int a = 0; a < m; ++a) {
            int i = pq[a];
            mis(a) = inj.p_pu(i) - pcalc(i);
            mis(m + a) = inj.q_pu(i) - qcalc(i);
            worst = std::max({worst, std::abs(mis(a)), std::abs(mis(m + a))});
        }
        if (worst < opts.tolerance_pu) {
            st.iterations = it - 1;
            st.converged = true;
            st.slack_p_pu = pcalc(model.slack);
            st.slack_q_pu = qcalc(model.slack);
            fill_flows(model, st);
            return st;
        }

        for (int a = 0; a < m; ++a) {
            int i = pq[a];
            double vi = st.v_pu(i);
            for (int b = 0; b < m; ++b) {
                int k = pq[b];
                if (i == k) {
                    jac(a, b) = -qcalc(i) - B(i, i) * vi * vi;
                    jac(a, m + b) = pcalc(i) / vi + G(i, i) * vi;
                    jac(m + a, b) = pcalc(i) - G(i, i) * vi * vi;
                    jac(m + a, m + b) = qcalc(i) / vi - B(i, i) * vi;
                } else {
                    double tik = st.theta_rad(i) - st.theta_rad(k);
                    double vk = st.v_pu(k);
                    double gc = G(i, k) * std::cos(tik) + B(i, k) * std::sin(tik);
                    double gs = G(i, k) * std::sin(tik) - B(i, k) * std::cos(tik);
                    jac(a, b) = vi * vk * gs;
                    jac(a, m + b) = vi * gc;
                    jac(m + a, b) = -vi * vk * gc;
                    jac(m + a, m + b) = vi * gs;
                }
            }
        }

        Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        Eigen::VectorXd dx = lu.solve(mis);
        if (!dx.allFinite())
            throw SolverError("loadflow: singular Jacobian at iteration " + std::to_string(it));
        for (int a = 0; a < m; ++a) {
            st.theta_rad(pq[a]) += dx(a);
            st.v_pu(pq[a]) += dx(m + a);
            if (st.v_pu(pq[a]) < 1e-4)
                throw SolverError("loadflow: voltage collapse at bus " + model.bus_ids[pq[a]]);
        }
    }

    compute_power(model.ybus, st.v_pu, st.theta_rad, pcalc, qcalc);
    double worst = 0.0;
    std::string worst_bus;
    for (int i : pq) {
        double w = std::max(std::abs(inj.p_pu(i) - pcalc(i)), std::abs(inj.q_pu(i) - qcalc(i)));
        if (w > worst) {
            worst = w;
            worst_bus = model.bus_ids[i];
        }
    }
    throw SolverError("loadflow: no convergence after " + std::to_string(opts.max_iterations) +
                      " iterations; worst mismatch " + std::to_string(worst) + " pu at bus " +
                      worst_bus);
}

SeriesResult solve_series(const AdmittanceModel& model, std::span<const InjectionFrame> frames,
                          const PowerflowOptions& opts, Execution exec) {
    SeriesResult out;
    out.states.resize(frames.size());
    const int T = static_cast<int>(frames.size());
    const int chunk = std::max(1, opts.chunk_steps);
    const int nchunks = (T + chunk - 1) / chunk;
    std::vector<std::vector<std::pair<int, std::string>>> fails(nchunks);

    auto run_chunk = [&](int c) {
        int lo = c * chunk;
        int hi = std::min(T, lo + chunk);
        const NetworkState* prev = nullptr;
        for (int t = lo; t < hi; ++t) {
            try {
                out.states[t] =
                    solve_loadflow(model, frames[t], opts, opts.warm_start ? prev : nullptr);
                prev = &out.states[t];
            } catch (const std::exception& e) {
                fails[c].emplace_back(t, e.what());
                prev = nullptr;
            }
        }
    };

    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int c = 0; c < nchunks; ++c) run_chunk(c);
    } else {
        for (int c = 0; c < nchunks; ++c) run_chunk(c);
    }
    for (auto& f : fails)
        out.failures.insert(out.failures.end(), f.begin(), f.end());
    return out;
}

double total_losses_pu(const AdmittanceModel& model, const InjectionFrame& inj,
                       const NetworkState& state) {
    double sum = state.slack_p_pu;
    for (int i = 0; i < model.num_buses(); ++i)
        if (i != model.slack) sum += inj.p_pu(i);
    return sum;
}

} // namespace gridflex
