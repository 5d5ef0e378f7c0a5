#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridflex/network.hpp"

namespace gridflex {

/// Per-prosumer load and normalized PV yield series on a shared time grid.
/// Immutable after construction. A horizon shorter than the year is a set of
/// whole representative weeks; annual quantities scale by annualize_factor().
struct TimeSeriesSet {
    std::vector<std::int64_t> timestamps;  // step start, epoch seconds
    int step_seconds = 900;
    std::vector<std::string> prosumers;               // bus ids
    std::vector<std::vector<double>> load_kw;         // [prosumer][step]
    std::vector<std::vector<double>> yield_kw_per_kw; // [prosumer][step], 0..1.2

    int horizon() const { return static_cast<int>(timestamps.size()); }
    double dt_hours() const { return step_seconds / 3600.0; }
    double span_fraction_of_year() const {
        return static_cast<double>(timestamps.size()) * step_seconds / (365.0 * 86400.0);
    }
    double annualize_factor() const { return 1.0 / span_fraction_of_year(); }

    int prosumer_index(const std::string& bus_id) const;

    /// Yield integral over the horizon scaled to a full year (kWh per kW
    /// installed per year).
    double annual_yield_kwh_per_kw(int prosumer) const;
    /// Load integral over the horizon scaled to a full year (MWh/yr).
    double annual_demand_mwh(int prosumer) const;
};

/// Reads the profiles CSV (`timestamp,<bus_id>,...`; ISO-8601 timestamps;
/// kW). Every prosumer bus of the network must have a column. The optional
/// yield file must share the exact grid and columns. With expected_steps = 0
/// the horizon must span exactly one study year; otherwise it must match
/// expected_steps. Timestamps must advance by one uniform step, with
/// whole-day jumps allowed between representative weeks.
TimeSeriesSet load_profiles(const std::filesystem::path& load_csv,
                            const std::optional<std::filesystem::path>& yield_csv,
                            const Network& network, int expected_steps = 0);

void write_profiles(const TimeSeriesSet& ts, const std::filesystem::path& load_csv,
                    const std::optional<std::filesystem::path>& yield_csv);

struct SynthesisParams {
    std::uint64_t seed = 1;
    int horizon_steps = 35040;
    int step_seconds = 900;
    int start_year = 2019;
    double capacity_factor_target = 0.128;  // kept within [0.10, 0.15]
};

/// Deterministic synthetic profiles: seasonal/diurnal load shapes scaled so
/// each series integrates to its target annual demand, and one shared PV
/// yield series from a clear-sky envelope modulated by seeded cloud noise.
/// Horizons shorter than a year are laid out as evenly spaced whole weeks
/// across the calendar year (requires a whole-week horizon).
TimeSeriesSet synthesize_profiles(const SynthesisParams& params,
                                  std::span<const double> annual_demand_mwh,
                                  const Network& network);

} // namespace gridflex
