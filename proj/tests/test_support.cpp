#include "test_support.hpp"

#include <cmath>
#include <complex>

namespace gridflex::testing {

std::filesystem::path data_file(const std::string& name) {
    return std::filesystem::path(GRIDFLEX_DATA_DIR) / name;
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
    auto dir = std::filesystem::temp_directory_path() / "gridflex_tests";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream out(path);
    out << text;
    return path;
}

void injections_of(const AdmittanceModel& model, const Eigen::VectorXd& v,
                   const Eigen::VectorXd& theta, Eigen::VectorXd& p, Eigen::VectorXd& q) {
    const int n = model.num_buses();
    Eigen::VectorXcd vc(n);
    for (int i = 0; i < n; ++i) vc(i) = std::polar(v(i), theta(i));
    Eigen::VectorXcd s = vc.array() * (model.ybus * vc).conjugate().array();
    p = s.real();
    q = s.imag();
}

bool grid_search_loadflow(const AdmittanceModel& model, const InjectionFrame& inj,
                          Eigen::VectorXd& v, Eigen::VectorXd& theta, double residual_target,
                          int max_sweeps) {
    const int n = model.num_buses();
    v = Eigen::VectorXd::Ones(n);
    theta = Eigen::VectorXd::Zero(n);

    Eigen::VectorXd p, q;
    auto residual2 = [&]() {
        injections_of(model, v, theta, p, q);
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            if (i == model.slack) continue;
            double dp = inj.p_pu(i) - p(i);
            double dq = inj.q_pu(i) - q(i);
            r += dp * dp + dq * dq;
        }
        return r;
    };

    double span = 0.4;  // search half-width per coordinate, shrunk on success
    double best = residual2();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool improved = false;
        for (int i = 0; i < n; ++i) {
            if (i == model.slack) continue;
            for (int coord = 0; coord < 2; ++coord) {
                double& x = coord == 0 ? theta(i) : v(i);
                double center = x;
                double best_x = x;
                for (int k = -6; k <= 6; ++k) {
                    if (k == 0) continue;
                    x = center + span * k / 6.0;
                    if (coord == 1 && x < 0.2) continue;
                    double r = residual2();
                    if (r < best) {
                        best = r;
                        best_x = x;
                        improved = true;
                    }
                }
                x = best_x;
            }
        }
        if (best < residual_target * residual_target) return true;
        if (!improved) {
            span *= 0.35;
            if (span < 1e-14) return best < residual_target * residual_target;
        }
    }
    return false;
}

} // namespace gridflex::testing
