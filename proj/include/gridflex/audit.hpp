#pragma once

#include <span>
#include <string>
#include <vector>

#include "gridflex/admittance.hpp"
#include "gridflex/powerflow.hpp"

namespace gridflex {

struct OperatingLimits {
    double v_min_pu = 0.95;
    double v_max_pu = 1.05;
    // line ampacities and transformer ratings come from the network model

    void validate() const;
};

enum class ViolationKind { Overvoltage, Undervoltage, Ampacity, Transformer };
const char* to_string(ViolationKind k);
ViolationKind violation_kind_from(const std::string& s);

struct ViolationRecord {
    int t = 0;
    ViolationKind kind;
    std::string element;  // bus or branch id
    double value = 0.0;
    double limit = 0.0;
};

/// One record per (step, element) whose magnitude is strictly beyond its
/// limit relaxed by `slack_tol` (relative for ratings/ampacities, absolute
/// in pu for voltages).
std::vector<ViolationRecord> audit_step(const AdmittanceModel& model, const NetworkState& state,
                                        int t, const OperatingLimits& limits,
                                        double slack_tol = 0.0);

std::vector<ViolationRecord> audit_series(const AdmittanceModel& model,
                                          std::span<const NetworkState> states,
                                          const OperatingLimits& limits, double slack_tol = 0.0);

/// Contiguous run of steps with at least one violation; closed interval.
struct InterventionPeriod {
    int index = 0;  // 1-based
    int start = 0;
    int end = 0;

    int steps() const { return end - start + 1; }
};

/// Maximal runs of consecutive violating steps, widened by `padding` steps
/// on both ends (clamped to [0, horizon)), overlapping runs re-merged.
std::vector<InterventionPeriod> extract_periods(std::span<const ViolationRecord> violations,
                                                int horizon, int padding = 0);

/// Step-hours and maxima per category; a step counts once per category no
/// matter how many elements violate (reporting convention).
struct ViolationSummary {
    double trafo_hours = 0.0;
    double trafo_max_loading_pct = 0.0;
    double overvoltage_hours = 0.0;
    double overvoltage_max_pu = 0.0;
    double undervoltage_hours = 0.0;
    double undervoltage_min_pu = 0.0;
    double ampacity_hours = 0.0;
    double ampacity_max_ratio = 0.0;
};

ViolationSummary summarize_violations(const AdmittanceModel& model,
                                      std::span<const ViolationRecord> records, double dt_hours);

} // namespace gridflex
