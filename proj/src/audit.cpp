#include "gridflex/audit.hpp"

#include <algorithm>
#include <set>

#include "gridflex/errors.hpp"

namespace gridflex {

void OperatingLimits::validate() const {
    if (!(0.0 < v_min_pu && v_min_pu < 1.0 && 1.0 < v_max_pu))
        throw ValidationError("OperatingLimits: need 0 < v_min < 1 < v_max");
}

const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::Overvoltage: return "overvoltage";
        case ViolationKind::Undervoltage: return "undervoltage";
        case ViolationKind::Ampacity: return "ampacity";
        case ViolationKind::Transformer: return "transformer";
    }
    return "?";
}

ViolationKind violation_kind_from(const std::string& s) {
    if (s == "overvoltage") return ViolationKind::Overvoltage;
    if (s == "undervoltage") return ViolationKind::Undervoltage;
    if (s == "ampacity") return ViolationKind::Ampacity;
    if (s == "transformer") return ViolationKind::Transformer;
    throw ValidationError("unknown violation kind: " + s);
}

std::vector<ViolationRecord> audit_step(const AdmittanceModel& model, const NetworkState& state,
                                        int t, const OperatingLimits& limits, double slack_tol) {
    limits.validate();
    std::vector<ViolationRecord> out;
    for (int i = 0; i < model.num_buses(); ++i) {
        if (i == model.slack) continue;
        double v = state.v_pu(i);
        if (v > limits.v_max_pu + slack_tol)
            out.push_back({t, ViolationKind::Overvoltage, model.bus_ids[i], v, limits.v_max_pu});
        else if (v < limits.v_min_pu - slack_tol)
            out.push_back({t, ViolationKind::Undervoltage, model.bus_ids[i], v, limits.v_min_pu});
    }
    for (size_t b = 0; b < model.branches.size(); ++b) {
        const auto& br = model.branches[b];
        if (br.is_transformer) {
            double s = state.trafo_mva[b];
            if (s > br.rating_mva * (1.0 + slack_tol))
                out.push_back(
                    {t, ViolationKind::Transformer, model.branch_ids[b], s, br.rating_mva});
        } else if (br.ampacity_pu > 0.0) {
            double i_pu = state.branch_current_pu[b];
            if (i_pu > br.ampacity_pu * (1.0 + slack_tol))
                out.push_back({t, ViolationKind::Ampacity, model.branch_ids[b],
                               state.branch_current_ka[b],
                               br.ampacity_pu * model.bus_i_base_ka[br.from]});
        }
    }
    return out;
}

std::vector<ViolationRecord> audit_series(const AdmittanceModel& model,
                                          std::span<const NetworkState> states,
                                          const OperatingLimits& limits, double slack_tol) {
    std::vector<ViolationRecord> out;
    for (size_t t = 0; t < states.size(); ++t) {
        auto recs = audit_step(model, states[t], static_cast<int>(t), limits, slack_tol);
        out.insert(out.end(), recs.begin(), recs.end());
    }
    return out;
}

std::vector<InterventionPeriod> extract_periods(std::span<const ViolationRecord> violations,
                                                int horizon, int padding) {
    std::set<int> steps;
    for (const auto& v : violations) {
        if (v.t < 0 || v.t >= horizon)
            throw ValidationError("extract_periods: violation step outside horizon");
        steps.insert(v.t);
    }

    std::vector<InterventionPeriod> runs;
    for (int s : steps) {
        if (!runs.empty() && runs.back().end + 1 == s)
            runs.back().end = s;
        else
            runs.push_back({0, s, s});
    }
    for (auto& r : runs) {
        r.start = std::max(0, r.start - padding);
        r.end = std::min(horizon - 1, r.end + padding);
    }
    std::vector<InterventionPeriod> merged;
    for (const auto& r : runs) {
        if (!merged.empty() && r.start <= merged.back().end + 1)
            merged.back().end = std::max(merged.back().end, r.end);
        else
            merged.push_back(r);
    }
    for (size_t i = 0; i < merged.size(); ++i) merged[i].index = static_cast<int>(i) + 1;
    return merged;
}

ViolationSummary summarize_violations(const AdmittanceModel& model,
                                      std::span<const ViolationRecord> records, double dt_hours) {
    ViolationSummary s;
    s.undervoltage_min_pu = 2.0;
    std::set<int> trafo_steps, over_steps, under_steps, amp_steps;
    for (const auto& r : records) {
        switch (r.kind) {
            case ViolationKind::Transformer: {
                trafo_steps.insert(r.t);
                double pct = 100.0 * r.value / r.limit;
                s.trafo_max_loading_pct = std::max(s.trafo_max_loading_pct, pct);
                break;
            }
            case ViolationKind::Overvoltage:
                over_steps.insert(r.t);
                s.overvoltage_max_pu = std::max(s.overvoltage_max_pu, r.value);
                break;
            case ViolationKind::Undervoltage:
                under_steps.insert(r.t);
                s.undervoltage_min_pu = std::min(s.undervoltage_min_pu, r.value);
                break;
            case ViolationKind::Ampacity:
                amp_steps.insert(r.t);
                s.ampacity_max_ratio = std::max(s.ampacity_max_ratio, r.value / r.limit);
                break;
        }
    }
    (void)model;
    s.trafo_hours = trafo_steps.size() * dt_hours;
    s.overvoltage_hours = over_steps.size() * dt_hours;
    s.undervoltage_hours = under_steps.size() * dt_hours;
    s.ampacity_hours = amp_steps.size() * dt_hours;
    if (under_steps.empty()) s.undervoltage_min_pu = 0.0;
    return s;
}

} // namespace gridflex
