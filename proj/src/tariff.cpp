#include "gridflex/tariff.hpp"

#include <cmath>
#include <cstdio>

#include "gridflex/errors.hpp"

namespace gridflex {

double annualization(double rate, int lifetime_years) {
    if (rate <= 0.0) throw ValidationError("annualization: rate must be > 0");
    if (lifetime_years < 1) throw ValidationError("annualization: lifetime must be >= 1 year");
    double g = std::pow(1.0 + rate, lifetime_years);
    return rate * g / (g - 1.0);
}

namespace {

// Days-from-civil / civil-from-days per Howard Hinnant's public-domain
// algorithms; valid for all Gregorian dates.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    unsigned doe = static_cast<unsigned>(z - era * 146097);
    unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

} // namespace

CivilTime civil_from_epoch(std::int64_t epoch_s) {
    std::int64_t days = epoch_s / 86400;
    std::int64_t rem = epoch_s % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    CivilTime c{};
    civil_from_days(days, c.year, c.month, c.day);
    c.hour = static_cast<int>(rem / 3600);
    c.minute = static_cast<int>((rem % 3600) / 60);
    c.second = static_cast<int>(rem % 60);
    // 1970-01-01 is a Thursday; weekday 0 = Monday.
    c.weekday = static_cast<int>(((days % 7) + 7 + 3) % 7);
    return c;
}

std::int64_t epoch_from_civil(int year, int month, int day, int hour, int minute, int second) {
    return days_from_civil(year, month, day) * 86400 + hour * 3600 + minute * 60 + second;
}

std::int64_t parse_iso8601(std::string_view s) {
    int y, mo, d, h, mi, se;
    char sep;
    if (std::sscanf(std::string(s).c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi,
                    &se) != 7 ||
        (sep != 'T' && sep != ' '))
        throw ParseError("invalid ISO-8601 timestamp: '" + std::string(s) + "'");
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 60)
        throw ParseError("timestamp out of range: '" + std::string(s) + "'");
    return epoch_from_civil(y, mo, d, h, mi, se);
}

std::string format_iso8601(std::int64_t epoch_s) {
    CivilTime c = civil_from_epoch(epoch_s);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d", c.year, c.month, c.day,
                  c.hour, c.minute, c.second);
    return buf;
}

Tariff::Rate Tariff::rate_at(std::int64_t epoch_s) const {
    CivilTime c = civil_from_epoch(epoch_s);
    bool weekday = c.weekday < 5;
    bool peak = weekday && c.hour >= peak_start_hour && c.hour < peak_end_hour;
    return Rate{peak ? peak_cts : offpeak_cts, export_cts};
}

} // namespace gridflex
