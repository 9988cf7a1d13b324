#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace routinecast {

enum class Weekday : int {
    Monday = 0,
    Tuesday,
    Wednesday,
    Thursday,
    Friday,
    Saturday,
    Sunday,
};

inline constexpr std::array<const char*, 7> kWeekdayShort{"Mon", "Tue", "Wed", "Thu",
                                                          "Fri", "Sat", "Sun"};
inline constexpr std::array<const char*, 7> kWeekdayFull{
    "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"};

const char* weekday_short(Weekday day);
const char* weekday_full(Weekday day);
std::optional<Weekday> weekday_from_string(std::string_view text);

inline constexpr std::int64_t kMicrosPerSecond = 1'000'000;
inline constexpr std::int64_t kMicrosPerMinute = 60 * kMicrosPerSecond;
inline constexpr std::int64_t kMicrosPerDay = 24 * 60 * kMicrosPerMinute;
inline constexpr int kSlotMinutes = 15;
inline constexpr int kSlotsPerDay = 96;

/// Calendar instant with microsecond precision, stored as microseconds since
/// 1970-01-01 00:00:00. Timestamps are naive local time: CASAS logs carry no
/// timezone and none is applied.
class Timestamp {
public:
    Timestamp() = default;

    static Timestamp from_micros(std::int64_t micros) { return Timestamp(micros); }

    /// Accepts "YYYY-MM-DD HH:MM:SS" with an optional fractional-seconds part
    /// of 1..6 digits; 'T' is accepted in place of the space separator.
    static std::optional<Timestamp> parse(std::string_view text);

    static std::optional<Timestamp> from_date_time(int year, int month, int day, int hour,
                                                   int minute, int second, int micro = 0);

    std::int64_t micros() const { return micros_; }

    std::int64_t days_since_epoch() const;
    Weekday weekday() const;
    /// Whole minutes elapsed since this instant's midnight, in [0, 1440).
    int minutes_since_midnight() const;
    /// 15-minute slot of the day, in [0, 96).
    int slot_index() const { return minutes_since_midnight() / kSlotMinutes; }
    Timestamp day_start() const;

    Timestamp add_minutes(double minutes) const;
    Timestamp add_micros(std::int64_t micros) const { return Timestamp(micros_ + micros); }

    /// "YYYY-MM-DDTHH:MM:SS.ffffff" (fraction always 6 digits).
    std::string iso8601() const;
    std::string date_string() const;  // "YYYY-MM-DD"
    std::string hhmm() const;         // "HH:MM"

    friend bool operator==(Timestamp a, Timestamp b) { return a.micros_ == b.micros_; }
    friend bool operator!=(Timestamp a, Timestamp b) { return a.micros_ != b.micros_; }
    friend bool operator<(Timestamp a, Timestamp b) { return a.micros_ < b.micros_; }
    friend bool operator<=(Timestamp a, Timestamp b) { return a.micros_ <= b.micros_; }
    friend bool operator>(Timestamp a, Timestamp b) { return a.micros_ > b.micros_; }
    friend bool operator>=(Timestamp a, Timestamp b) { return a.micros_ >= b.micros_; }

private:
    explicit Timestamp(std::int64_t micros) : micros_(micros) {}
    std::int64_t micros_ = 0;
};

/// Signed distance (to - from) in minutes.
double minutes_between(Timestamp from, Timestamp to);

}  // namespace routinecast
