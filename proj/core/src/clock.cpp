#include "routinecast/clock.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace routinecast {

namespace {

// Floor division for possibly-negative dividends.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

bool parse_fixed_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > text.size()) return false;
    int value = 0;
    for (std::size_t i = 0; i < len; ++i) {
        char c = text[pos + i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

}  // namespace

const char* weekday_short(Weekday day) { return kWeekdayShort[static_cast<int>(day)]; }
const char* weekday_full(Weekday day) { return kWeekdayFull[static_cast<int>(day)]; }

std::optional<Weekday> weekday_from_string(std::string_view text) {
    for (int i = 0; i < 7; ++i) {
        if (text == kWeekdayShort[i] || text == kWeekdayFull[i]) {
            return static_cast<Weekday>(i);
        }
    }
    return std::nullopt;
}

std::optional<Timestamp> Timestamp::from_date_time(int year, int month, int day, int hour,
                                                   int minute, int second, int micro) {
    using namespace std::chrono;
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{unsigned(month)},
                       std::chrono::day{unsigned(day)}};
    if (!ymd.ok()) return std::nullopt;
    if (hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 59 ||
        micro < 0 || micro >= kMicrosPerSecond) {
        return std::nullopt;
    }
    std::int64_t days = sys_days(ymd).time_since_epoch().count();
    std::int64_t micros = days * kMicrosPerDay + (hour * 3600ll + minute * 60ll + second) *
                          kMicrosPerSecond + micro;
    return Timestamp(micros);
}

std::optional<Timestamp> Timestamp::parse(std::string_view text) {
    // YYYY-MM-DD{ |T}HH:MM:SS[.f{1,6}]
    if (text.size() < 19) return std::nullopt;
    int year, month, day, hour, minute, second;
    if (!parse_fixed_int(text, 0, 4, year) || text[4] != '-' ||
        !parse_fixed_int(text, 5, 2, month) || text[7] != '-' ||
        !parse_fixed_int(text, 8, 2, day)) {
        return std::nullopt;
    }
    if (text[10] != ' ' && text[10] != 'T') return std::nullopt;
    if (!parse_fixed_int(text, 11, 2, hour) || text[13] != ':' ||
        !parse_fixed_int(text, 14, 2, minute) || text[16] != ':' ||
        !parse_fixed_int(text, 17, 2, second)) {
        return std::nullopt;
    }
    int micro = 0;
    if (text.size() > 19) {
        if (text[19] != '.') return std::nullopt;
        std::size_t digits = text.size() - 20;
        if (digits < 1 || digits > 6) return std::nullopt;
        int fraction = 0;
        if (!parse_fixed_int(text, 20, digits, fraction)) return std::nullopt;
        for (std::size_t i = digits; i < 6; ++i) fraction *= 10;
        micro = fraction;
    }
    return from_date_time(year, month, day, hour, minute, second, micro);
}

std::int64_t Timestamp::days_since_epoch() const { return floor_div(micros_, kMicrosPerDay); }

Weekday Timestamp::weekday() const {
    // 1970-01-01 was a Thursday (index 3 with Monday = 0).
    return static_cast<Weekday>(floor_mod(days_since_epoch() + 3, 7));
}

int Timestamp::minutes_since_midnight() const {
    return static_cast<int>(floor_mod(micros_, kMicrosPerDay) / kMicrosPerMinute);
}

Timestamp Timestamp::day_start() const {
    return Timestamp(days_since_epoch() * kMicrosPerDay);
}

Timestamp Timestamp::add_minutes(double minutes) const {
    return Timestamp(micros_ + std::llround(minutes * static_cast<double>(kMicrosPerMinute)));
}

std::string Timestamp::iso8601() const {
    using namespace std::chrono;
    std::int64_t days = days_since_epoch();
    year_month_day ymd{sys_days{std::chrono::days{days}}};
    std::int64_t rem = floor_mod(micros_, kMicrosPerDay);
    int hour = static_cast<int>(rem / (3600 * kMicrosPerSecond));
    int minute = static_cast<int>((rem / kMicrosPerMinute) % 60);
    int second = static_cast<int>((rem / kMicrosPerSecond) % 60);
    int micro = static_cast<int>(rem % kMicrosPerSecond);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%06d",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), hour, minute, second, micro);
    return buf;
}

std::string Timestamp::date_string() const {
    using namespace std::chrono;
    year_month_day ymd{sys_days{std::chrono::days{days_since_epoch()}}};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string Timestamp::hhmm() const {
    int minutes = minutes_since_midnight();
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d:%02d", minutes / 60, minutes % 60);
    return buf;
}

double minutes_between(Timestamp from, Timestamp to) {
    return static_cast<double>(to.micros() - from.micros()) /
           static_cast<double>(kMicrosPerMinute);
}

}  // namespace routinecast
