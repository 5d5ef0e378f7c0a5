#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "gridflex/admittance.hpp"
#include "gridflex/network.hpp"
#include "gridflex/powerflow.hpp"

namespace gridflex::testing {

/// Path of the bundled CIGRE fixture relative to the source tree; resolved
/// through the GRIDFLEX_DATA_DIR compile definition.
std::filesystem::path data_file(const std::string& name);

/// Writes `text` into a fresh temp file and returns its path.
std::filesystem::path temp_file(const std::string& name, const std::string& text);

/// Independent load-flow oracle: cyclic per-coordinate grid refinement on
/// the squared power mismatch. Shares no code with the Newton solver.
/// Returns false if the residual target was not reached.
bool grid_search_loadflow(const AdmittanceModel& model, const InjectionFrame& inj,
                          Eigen::VectorXd& v, Eigen::VectorXd& theta,
                          double residual_target = 1e-10, int max_sweeps = 20000);

/// Exact power injections for a candidate (V, theta); shared by the oracle
/// and by residual checks in tests.
void injections_of(const AdmittanceModel& model, const Eigen::VectorXd& v,
                   const Eigen::VectorXd& theta, Eigen::VectorXd& p, Eigen::VectorXd& q);

} // namespace gridflex::testing
