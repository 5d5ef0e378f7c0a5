#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "gridflex/network.hpp"

namespace gridflex {

/// Per-unit series admittance of one branch.
struct BranchAdmittance {
    int from;                    // bus index (HV side for transformers)
    int to;
    std::complex<double> y_pu;   // 1/z in per-unit
    double ampacity_pu;          // current limit in pu at the from side (0 = unlimited)
    bool is_transformer;
    double rating_mva;
    double length_km;            // 0 for transformers
};

/// Validated per-unit network model: branch admittances plus the nodal
/// admittance matrix used by the power flow equations. Immutable after
/// build_admittance; safe for concurrent reads.
struct AdmittanceModel {
    double s_base_mva = 1.0;
    std::vector<double> bus_base_kv;    // per bus
    std::vector<double> bus_i_base_ka;  // S_base / (sqrt(3) V_base)
    std::vector<BranchAdmittance> branches;
    Eigen::MatrixXcd ybus;              // nodal matrix, no shunt terms
    int slack = -1;
    std::vector<int> prosumers;         // bus indices
    std::vector<std::string> bus_ids;
    std::vector<std::string> branch_ids;

    int num_buses() const { return static_cast<int>(bus_ids.size()); }

    /// Converts a physical branch impedance (ohm, at the given voltage
    /// level) to per-unit.
    std::complex<double> to_pu(std::complex<double> z_ohm, double base_kv) const {
        double z_base = base_kv * base_kv / s_base_mva;
        return z_ohm / z_base;
    }
};

struct AdmittanceOptions {
    double s_base_mva = 1.0;
    // Nameplate fallback when a transformer record carries no short-circuit
    // data: percent impedance on the transformer's own rating.
    double default_trafo_r_pct = 1.0;
    double default_trafo_x_pct = 4.0;
};

AdmittanceModel build_admittance(const Network& net, const AdmittanceOptions& opts = {});

} // namespace gridflex
