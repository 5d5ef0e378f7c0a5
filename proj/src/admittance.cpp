#include "gridflex/admittance.hpp"

#include <cmath>

#include "gridflex/errors.hpp"

namespace gridflex {

AdmittanceModel build_admittance(const Network& net, const AdmittanceOptions& opts) {
    const int n = static_cast<int>(net.buses.size());
    AdmittanceModel m;
    m.s_base_mva = opts.s_base_mva;
    m.slack = net.slack;
    m.prosumers = net.prosumers;
    m.bus_base_kv.resize(n);
    m.bus_i_base_ka.resize(n);
    m.bus_ids.resize(n);
    for (int i = 0; i < n; ++i) {
        m.bus_base_kv[i] = net.buses[i].base_kv;
        m.bus_i_base_ka[i] = opts.s_base_mva / (std::sqrt(3.0) * net.buses[i].base_kv);
        m.bus_ids[i] = net.buses[i].id;
    }

    m.ybus = Eigen::MatrixXcd::Zero(n, n);
    for (const Branch& br : net.branches) {
        int f = net.index_of(br.from);
        int t = net.index_of(br.to);
        std::complex<double> z_pu;
        if (br.is_transformer) {
            double r_pct = br.r_ohm_per_km;
            double x_pct = br.x_ohm_per_km;
            if (r_pct == 0.0 && x_pct == 0.0) {
                r_pct = opts.default_trafo_r_pct;
                x_pct = opts.default_trafo_x_pct;
            }
            // percent on own rating -> pu on the system base
            z_pu = std::complex<double>(r_pct, x_pct) / 100.0 *
                   (opts.s_base_mva / br.rating_mva);
        } else {
            std::complex<double> z_ohm(br.r_ohm_per_km * br.length_km,
                                       br.x_ohm_per_km * br.length_km);
            z_pu = m.to_pu(z_ohm, net.buses[f].base_kv);
        }
        if (std::abs(z_pu) == 0.0)
            throw ValidationError("branch " + br.id() + " has zero impedance");

        BranchAdmittance ba;
        ba.from = f;
        ba.to = t;
        ba.y_pu = 1.0 / z_pu;
        ba.is_transformer = br.is_transformer;
        ba.rating_mva = br.rating_mva;
        ba.length_km = br.is_transformer ? 0.0 : br.length_km;
        ba.ampacity_pu = br.ampacity_ka > 0.0 ? br.ampacity_ka / m.bus_i_base_ka[f] : 0.0;
        m.branches.push_back(ba);
        m.branch_ids.push_back(br.id());

        m.ybus(f, f) += ba.y_pu;
        m.ybus(t, t) += ba.y_pu;
        m.ybus(f, t) -= ba.y_pu;
        m.ybus(t, f) -= ba.y_pu;
    }
    return m;
}

} // namespace gridflex
