#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gridflex {

/// Capital-recovery factor r(1+r)^L / ((1+r)^L - 1).
double annualization(double rate, int lifetime_years);

/// Broken-down civil time (no timezone, no DST; profiles carry naive local
/// timestamps).
struct CivilTime {
    int year;
    int month;  // 1..12
    int day;    // 1..31
    int hour;   // 0..23
    int minute;
    int second;
    int weekday;  // 0 = Monday .. 6 = Sunday
};

CivilTime civil_from_epoch(std::int64_t epoch_s);
std::int64_t epoch_from_civil(int year, int month, int day, int hour = 0, int minute = 0,
                              int second = 0);

/// Parses "YYYY-MM-DDTHH:MM:SS" (a space separator is also accepted).
std::int64_t parse_iso8601(std::string_view s);
std::string format_iso8601(std::int64_t epoch_s);

/// Time-of-use tariff: weekday peak window at the high import rate,
/// everything else off-peak; flat export rate.
struct Tariff {
    double peak_cts = 23.92;
    double offpeak_cts = 15.16;
    double export_cts = 8.16;
    int peak_start_hour = 6;   // inclusive
    int peak_end_hour = 22;    // exclusive

    struct Rate {
        double import_cts;
        double export_cts;
    };

    Rate rate_at(std::int64_t epoch_s) const;

    double import_chf_per_kwh(std::int64_t epoch_s) const {
        return rate_at(epoch_s).import_cts / 100.0;
    }
    double export_chf_per_kwh() const { return export_cts / 100.0; }
};

} // namespace gridflex
