#include "gridflex/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gridflex/csv.hpp"
#include "gridflex/errors.hpp"
#include "gridflex/tariff.hpp"

namespace gridflex {

int TimeSeriesSet::prosumer_index(const std::string& bus_id) const {
    for (size_t i = 0; i < prosumers.size(); ++i)
        if (prosumers[i] == bus_id) return static_cast<int>(i);
    return -1;
}

double TimeSeriesSet::annual_yield_kwh_per_kw(int prosumer) const {
    double sum = 0.0;
    for (double y : yield_kw_per_kw[prosumer]) sum += y;
    return sum * dt_hours() * annualize_factor();
}

double TimeSeriesSet::annual_demand_mwh(int prosumer) const {
    double sum = 0.0;
    for (double l : load_kw[prosumer]) sum += l;
    return sum * dt_hours() * annualize_factor() / 1000.0;
}

namespace {

constexpr std::int64_t kYearSeconds = 365LL * 86400;

void check_grid(const std::vector<std::int64_t>& ts, int expected_steps,
                const std::string& origin) {
    if (ts.size() < 2) throw ValidationError(origin + ": need at least two rows");
    std::int64_t step = ts[1] - ts[0];
    if (step <= 0) throw ValidationError(origin + ": non-monotone timestamps at row 2");
    for (size_t i = 1; i < ts.size(); ++i) {
        std::int64_t d = ts[i] - ts[i - 1];
        if (d <= 0)
            throw ValidationError(origin + ": non-monotone timestamps at row " +
                                  std::to_string(i + 1));
        bool week_jump = d > step && (d - step) % 86400 == 0;
        if (d != step && !week_jump)
            throw ValidationError(origin + ": irregular step at row " + std::to_string(i + 1));
    }
    std::int64_t span = static_cast<std::int64_t>(ts.size()) * step;
    if (expected_steps > 0) {
        if (static_cast<int>(ts.size()) != expected_steps)
            throw ValidationError(origin + ": horizon is " + std::to_string(ts.size()) +
                                  " steps, configured study horizon is " +
                                  std::to_string(expected_steps));
    } else if (span != kYearSeconds) {
        throw ValidationError(origin + ": horizon of " + std::to_string(ts.size()) +
                              " steps does not span the study year");
    }
}

} // namespace

TimeSeriesSet load_profiles(const std::filesystem::path& load_csv,
                            const std::optional<std::filesystem::path>& yield_csv,
                            const Network& network, int expected_steps) {
    csv::Table table = csv::read_table(load_csv);
    if (table.header.empty() || table.header[0] != "timestamp")
        throw ParseError(load_csv.string() + ": first column must be 'timestamp'");

    TimeSeriesSet ts;
    for (size_t c = 1; c < table.header.size(); ++c) ts.prosumers.push_back(table.header[c]);

    for (int p : network.prosumers) {
        const std::string& id = network.buses[p].id;
        if (std::find(ts.prosumers.begin(), ts.prosumers.end(), id) == ts.prosumers.end())
            throw ValidationError(load_csv.string() + ": missing column for prosumer bus " + id);
    }

    const size_t P = ts.prosumers.size();
    ts.load_kw.assign(P, {});
    ts.yield_kw_per_kw.assign(P, {});
    for (auto& v : ts.load_kw) v.reserve(table.rows.size());

    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        ts.timestamps.push_back(parse_iso8601(row[0]));
        for (size_t c = 1; c < row.size(); ++c) {
            double v = csv::parse_double(row[c], load_csv.string() + " row " +
                                                      std::to_string(r + 2));
            if (v < 0.0)
                throw ValidationError(load_csv.string() + ": negative load at row " +
                                      std::to_string(r + 2) + ", bus " + table.header[c]);
            ts.load_kw[c - 1].push_back(v);
        }
    }
    check_grid(ts.timestamps, expected_steps, load_csv.string());
    ts.step_seconds = static_cast<int>(ts.timestamps[1] - ts.timestamps[0]);

    if (yield_csv) {
        csv::Table yt = csv::read_table(*yield_csv);
        if (yt.header != table.header)
            throw ValidationError(yield_csv->string() + ": columns differ from the load file");
        if (yt.rows.size() != table.rows.size())
            throw ValidationError(yield_csv->string() + ": row count differs from the load file");
        for (size_t r = 0; r < yt.rows.size(); ++r) {
            if (parse_iso8601(yt.rows[r][0]) != ts.timestamps[r])
                throw ValidationError(yield_csv->string() + ": timestamp mismatch at row " +
                                      std::to_string(r + 2));
            for (size_t c = 1; c < yt.rows[r].size(); ++c) {
                double v = csv::parse_double(yt.rows[r][c], yield_csv->string() + " row " +
                                                                std::to_string(r + 2));
                if (v < 0.0 || v > 1.2)
                    throw ValidationError(yield_csv->string() + ": yield out of [0, 1.2] at row " +
                                          std::to_string(r + 2) + ", bus " + yt.header[c]);
                ts.yield_kw_per_kw[c - 1].push_back(v);
            }
        }
    } else {
        for (auto& v : ts.yield_kw_per_kw) v.assign(ts.timestamps.size(), 0.0);
    }
    return ts;
}

void write_profiles(const TimeSeriesSet& ts, const std::filesystem::path& load_csv,
                    const std::optional<std::filesystem::path>& yield_csv) {
    auto write = [&](const std::filesystem::path& path,
                     const std::vector<std::vector<double>>& cols) {
        csv::Writer w(path);
        std::string hdr = "timestamp";
        for (const auto& p : ts.prosumers) hdr += "," + p;
        w.header(hdr);
        for (size_t t = 0; t < ts.timestamps.size(); ++t) {
            w.field(format_iso8601(ts.timestamps[t]));
            for (size_t p = 0; p < cols.size(); ++p) w.field(cols[p][t]);
            w.end_row();
        }
    };
    write(load_csv, ts.load_kw);
    if (yield_csv) write(*yield_csv, ts.yield_kw_per_kw);
}

namespace {

/// Deterministic helpers on top of the fully specified mt19937_64 stream:
/// distribution classes from <random> are implementation-defined, these are
/// not.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double next_normal(std::mt19937_64& rng) {
    double u1 = next_uniform(rng);
    double u2 = next_uniform(rng);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double gaussian_bump(double h, double center, double width) {
    double z = (h - center) / width;
    return std::exp(-0.5 * z * z);
}

} // namespace

TimeSeriesSet synthesize_profiles(const SynthesisParams& params,
                                  std::span<const double> annual_demand_mwh,
                                  const Network& network) {
    if (annual_demand_mwh.size() != network.prosumers.size())
        throw ValidationError("synthesize_profiles: one demand target per prosumer bus required");
    if (params.horizon_steps < 2 || params.step_seconds <= 0)
        throw ValidationError("synthesize_profiles: bad horizon");

    TimeSeriesSet ts;
    ts.step_seconds = params.step_seconds;
    for (int p : network.prosumers) ts.prosumers.push_back(network.buses[p].id);

    // Time grid: the full year, or evenly spaced whole weeks across it.
    const std::int64_t year_start = epoch_from_civil(params.start_year, 1, 1);
    const std::int64_t span_s =
        static_cast<std::int64_t>(params.horizon_steps) * params.step_seconds;
    ts.timestamps.reserve(params.horizon_steps);
    if (span_s == kYearSeconds) {
        for (int t = 0; t < params.horizon_steps; ++t)
            ts.timestamps.push_back(year_start + static_cast<std::int64_t>(t) *
                                                     params.step_seconds);
    } else {
        if (span_s % (7 * 86400) != 0)
            throw ValidationError(
                "synthesize_profiles: a reduced horizon must be a whole number of weeks");
        int weeks = static_cast<int>(span_s / (7 * 86400));
        int steps_per_week = params.horizon_steps / weeks;
        for (int w = 0; w < weeks; ++w) {
            int start_day = static_cast<int>(
                std::floor((w + 0.5) * 365.0 / weeks - 3.5));
            start_day = std::clamp(start_day, 0, 358);
            std::int64_t week_start = year_start + static_cast<std::int64_t>(start_day) * 86400;
            for (int t = 0; t < steps_per_week; ++t)
                ts.timestamps.push_back(week_start + static_cast<std::int64_t>(t) *
                                                         params.step_seconds);
        }
    }

    const int T = params.horizon_steps;
    const double dt_h = params.step_seconds / 3600.0;

    // --- shared PV yield: clear-sky envelope x daily clearness (AR(1)) x
    // intra-day flicker, normalized to the target capacity factor ---
    std::mt19937_64 pv_rng(params.seed * 0x9E3779B97F4A7C15ULL + 1);
    std::vector<double> clearness(366);
    double z = 0.0;
    for (int d = 0; d < 366; ++d) {
        z = 0.72 * z + 0.28 * next_normal(pv_rng);
        clearness[d] = std::clamp(0.78 + 0.30 * z, 0.15, 1.0);
    }
    std::vector<double> yield(T);
    for (int t = 0; t < T; ++t) {
        CivilTime c = civil_from_epoch(ts.timestamps[t]);
        int doy = static_cast<int>((ts.timestamps[t] - epoch_from_civil(c.year, 1, 1)) / 86400);
        double season = std::cos(2.0 * M_PI * (doy - 172) / 365.0);
        double amplitude = 0.62 + 0.36 * season;
        double half_width_h = 6.3 + 2.3 * season;
        double h = c.hour + c.minute / 60.0 + dt_h / 2.0;
        double x = (h - 12.5) / half_width_h;
        double envelope =
            std::abs(x) < 1.0 ? amplitude * std::pow(std::cos(0.5 * M_PI * x), 2.0) : 0.0;
        double flicker = 1.0 - 0.35 * (1.0 - clearness[doy]) * next_uniform(pv_rng);
        yield[t] = envelope * clearness[doy] * flicker;
    }
    // scale to the capacity-factor target, clipping unrealistic peaks
    for (int pass = 0; pass < 3; ++pass) {
        double cf = 0.0;
        for (double y : yield) cf += y;
        cf /= T;
        if (cf <= 0.0) break;
        double scale = params.capacity_factor_target / cf;
        for (double& y : yield) y = std::min(1.0, y * scale);
    }

    const size_t P = ts.prosumers.size();
    ts.yield_kw_per_kw.assign(P, yield);
    ts.load_kw.assign(P, std::vector<double>(T, 0.0));

    for (size_t p = 0; p < P; ++p) {
        double target_kwh =
            annual_demand_mwh[p] * 1000.0 * ts.span_fraction_of_year();
        if (annual_demand_mwh[p] < 0.0)
            throw ValidationError("synthesize_profiles: negative demand for " + ts.prosumers[p]);
        if (target_kwh == 0.0) continue;

        std::mt19937_64 rng(params.seed * 0x9E3779B97F4A7C15ULL + 101 + p);
        bool business = ts.prosumers[p][0] == 'C' || ts.prosumers[p][0] == 'I';
        std::vector<double>& load = ts.load_kw[p];
        double day_factor = 1.0;
        int last_day = -1;
        for (int t = 0; t < T; ++t) {
            CivilTime c = civil_from_epoch(ts.timestamps[t]);
            int doy = static_cast<int>((ts.timestamps[t] - epoch_from_civil(c.year, 1, 1)) /
                                       86400);
            if (doy != last_day) {
                day_factor = std::clamp(1.0 + 0.15 * next_normal(rng), 0.6, 1.4);
                last_day = doy;
            }
            double h = c.hour + c.minute / 60.0;
            double shape;
            if (business) {
                shape = 0.35 + 0.95 * gaussian_bump(h, 13.0, 3.6);
                if (c.weekday >= 5) shape = 0.35 + 0.25 * gaussian_bump(h, 13.0, 3.6);
            } else {
                shape = 0.45 + 0.35 * gaussian_bump(h, 7.5, 1.8) +
                        0.75 * gaussian_bump(h, 19.0, 2.4);
                if (c.weekday >= 5) shape *= 1.08;
            }
            double season = 1.0 + 0.16 * std::cos(2.0 * M_PI * (doy - 15) / 365.0);
            double noise = std::max(0.08, 1.0 + 0.22 * next_normal(rng));
            load[t] = shape * season * day_factor * noise;
        }
        double integral = 0.0;
        for (double v : load) integral += v * dt_h;
        double scale = target_kwh / integral;
        for (double& v : load) v *= scale;
    }
    return ts;
}

} // namespace gridflex
