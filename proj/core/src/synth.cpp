#include "routinecast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "routinecast/baseline.hpp"
#include "routinecast/clock.hpp"
#include "routinecast/errors.hpp"

namespace routinecast {

namespace {

// Raw CASAS spellings.
constexpr std::string_view kSleeping = "Sleeping";
constexpr std::string_view kBedToToilet = "Bed_to_Toilet";
constexpr std::string_view kMealPrep = "Meal_Preparation";
constexpr std::string_view kEating = "Eating";
constexpr std::string_view kWashDishes = "Wash_Dishes";
constexpr std::string_view kRelax = "Relax";
constexpr std::string_view kWork = "Work";
constexpr std::string_view kHousekeeping = "Housekeeping";
constexpr std::string_view kResperate = "Resperate";
constexpr std::string_view kLeaveHomeRaw = "Leave_Home";
constexpr std::string_view kEnterHomeRaw = "Enter_Home";

/// Portable draws on top of SeededRng so the log is byte-identical across
/// standard libraries.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    double unit() { return rng_.next_unit(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(unit() * static_cast<double>(hi - lo + 1));
    }

    bool chance(double p) { return unit() < p; }

    double gauss(double mean, double sd) {
        double u1 = unit(), u2 = unit();
        if (u1 < 1e-12) u1 = 1e-12;
        return mean + sd * std::sqrt(-2.0 * std::log(u1)) *
                          std::cos(2.0 * std::numbers::pi * u2);
    }

    double gauss_clamped(double mean, double sd, double lo, double hi) {
        return std::clamp(gauss(mean, sd), lo, hi);
    }

    int weighted(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = unit() * total;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0) return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

private:
    SeededRng rng_;
};

struct Line {
    std::int64_t micros;
    std::string text;
};

class LogBuilder {
public:
    explicit LogBuilder(std::uint64_t seed) : draw_(seed) {}

    Draw& draw() { return draw_; }

    void sensor_event(Timestamp t, std::string_view sensor, std::string_view value,
                      std::string_view annotation = {}) {
        std::string text = stamp(t);
        text += ' ';
        text += sensor;
        text += ' ';
        text += value;
        if (!annotation.empty()) {
            text += ' ';
            text += annotation;
        }
        lines_.push_back({t.micros(), std::move(text)});
    }

    void marker(Timestamp t, std::string_view sensor, std::string_view value,
                std::string_view activity, bool begin) {
        std::string annotation{activity};
        annotation += begin ? " begin" : " end";
        sensor_event(t, sensor, value, annotation);
    }

    void raw_line(Timestamp t, std::string text) { lines_.push_back({t.micros(), std::move(text)}); }

    std::string render() {
        std::stable_sort(lines_.begin(), lines_.end(),
                         [](const Line& a, const Line& b) { return a.micros < b.micros; });
        std::string out;
        for (const auto& line : lines_) {
            out += line.text;
            out += '\n';
        }
        return out;
    }

private:
    std::string stamp(Timestamp t) {
        std::string text = t.iso8601();
        text[10] = ' ';
        if (draw_.chance(0.15)) {
            text.resize(19);  // drop the fractional part on some lines
        }
        return text;
    }

    Draw draw_;
    std::vector<Line> lines_;
};

struct Activity {
    std::string_view label;
    Timestamp start;
    Timestamp end;
};

const char* room_sensor(Draw& draw, std::string_view label) {
    auto pick = [&](std::initializer_list<const char*> sensors) {
        auto it = sensors.begin();
        std::advance(it, draw.uniform_int(0, static_cast<int>(sensors.size()) - 1));
        return *it;
    };
    if (label == kSleeping) return pick({"M002", "M003"});
    if (label == kBedToToilet) return pick({"M004"});
    if (label == kMealPrep) return pick({"M015", "M016", "M017", "M018", "M019"});
    if (label == kEating) return pick({"M014"});
    if (label == kWashDishes) return pick({"M017", "M018"});
    if (label == kRelax) return pick({"M009", "M010", "M012", "M020"});
    if (label == kWork) return pick({"M026", "M027", "M028"});
    if (label == kHousekeeping)
        return pick({"M005", "M006", "M008", "M021", "M022", "M023", "M024", "M025"});
    if (label == kResperate) return pick({"M013"});
    if (label == kLeaveHomeRaw || label == kEnterHomeRaw) return pick({"D001", "D002"});
    return "M001";
}

class Simulator {
public:
    Simulator(const SynthConfig& config, LogBuilder& log)
        : config_(config), log_(log), draw_(log.draw()) {}

    void run() {
        auto day0 = Timestamp::from_date_time(config_.start_year, config_.start_month,
                                              config_.start_day, 0, 0, 0);
        if (!day0) throw ConfigError("synthetic log start date is not a valid calendar day");
        day0_ = *day0;

        // The resident is asleep when the log opens; the first sleep segment
        // starts right after midnight of day zero so no annotation falls on an
        // earlier date.
        Timestamp cursor = at_minutes(0, draw_.uniform(0.3, 1.5));
        begin_activity(kSleeping, cursor);

        for (int day = 0; day < config_.days; ++day) {
            const bool last_day = day == config_.days - 1;
            const double wake = draw_.gauss_clamped(352, 28, 290, 430);
            cursor = finish_night(day, wake);
            cursor = morning(day, cursor);
            const double bed = draw_.gauss_clamped(1332, 30, 1270, 1425);
            cursor = daytime(day, cursor, bed);
            cursor = evening(day, cursor, bed, last_day);
            if (!last_day) begin_activity(kSleeping, cursor);
            daily_filler(day);
        }
        if (config_.inject_defects) inject_defects();
    }

private:
    Timestamp at_minutes(int day, double minutes) {
        return day0_.add_micros(static_cast<std::int64_t>(day) * kMicrosPerDay)
            .add_minutes(minutes);
    }

    double jitter_seconds() { return draw_.uniform(0.0, 50.0) / 60.0; }

    void begin_activity(std::string_view label, Timestamp t) {
        open_label_ = label;
        open_start_ = t;
        log_.marker(t, room_sensor(draw_, label), "ON", label, true);
    }

    void end_activity(Timestamp t) {
        log_.marker(t, room_sensor(draw_, open_label_), "OFF", open_label_, false);
        // in-activity motion chatter
        const int extra = draw_.uniform_int(1, 4);
        for (int i = 0; i < extra; ++i) {
            double offset = draw_.uniform(0.1, std::max(0.2, minutes_between(open_start_, t) - 0.1));
            log_.sensor_event(open_start_.add_minutes(offset), room_sensor(draw_, open_label_),
                              draw_.chance(0.5) ? "ON" : "OFF");
        }
        open_label_ = {};
    }

    Timestamp do_activity(std::string_view label, Timestamp start, double duration_minutes) {
        begin_activity(label, start);
        Timestamp end = start.add_minutes(duration_minutes + jitter_seconds());
        end_activity(end);
        return end;
    }

    Timestamp gap_after(Timestamp t, double lo = 1.0, double hi = 6.0) {
        Timestamp next = t.add_minutes(draw_.uniform(lo, hi));
        if (draw_.chance(0.5)) {
            log_.sensor_event(t.add_minutes(draw_.uniform(0.1, 0.6)), "M007",
                              draw_.chance(0.5) ? "ON" : "OFF");
        }
        return next;
    }

    /// Close the overnight sleep (opened the previous evening), with optional
    /// bed-to-toilet interruptions, waking at `wake` minutes into `day`.
    Timestamp finish_night(int day, double wake) {
        Timestamp wake_ts = at_minutes(day, wake + jitter_seconds());
        const int interruptions = draw_.weighted({0.35, 0.45, 0.20});
        // Sleep usually opens the previous evening (negative minute relative
        // to `day`) but can slip past midnight after a long evening.
        const double sleep_open = minutes_between(at_minutes(day, 0), open_start_);
        const double cut_lo = std::max(60.0, sleep_open + 30.0);
        const double cut_hi = wake - 70.0;
        std::vector<double> cuts;
        for (int i = 0; i < interruptions && cut_lo < cut_hi; ++i) {
            cuts.push_back(draw_.uniform(cut_lo, cut_hi));
        }
        std::sort(cuts.begin(), cuts.end());
        double prev = -1e9;
        for (double cut : cuts) {
            if (cut - prev < 25.0) continue;  // keep segments apart
            prev = cut;
            Timestamp cut_ts = at_minutes(day, cut + jitter_seconds());
            end_activity(cut_ts);
            Timestamp toilet_end = do_activity(kBedToToilet, cut_ts.add_minutes(draw_.uniform(0.5, 2.0)),
                                               draw_.uniform(3.0, 8.0));
            begin_activity(kSleeping, toilet_end.add_minutes(draw_.uniform(0.5, 2.5)));
        }
        end_activity(wake_ts);
        return wake_ts;
    }

    Timestamp morning(int day, Timestamp cursor) {
        (void)day;
        if (draw_.chance(0.5)) {
            cursor = gap_after(cursor, 0.5, 2.5);
            cursor = do_activity(kBedToToilet, cursor, draw_.uniform(3.0, 7.0));
        }
        cursor = gap_after(cursor, 2.0, 6.0);
        cursor = do_activity(kMealPrep, cursor, draw_.gauss_clamped(22, 7, 8, 45));
        cursor = gap_after(cursor, 1.0, 3.0);
        cursor = do_activity(kEating, cursor, draw_.gauss_clamped(16, 5, 6, 35));
        if (draw_.chance(0.62)) {
            cursor = gap_after(cursor, 1.0, 4.0);
            cursor = do_activity(kWashDishes, cursor, draw_.gauss_clamped(8, 3, 3, 18));
        }
        cursor = gap_after(cursor, 2.0, 8.0);
        cursor = do_activity(kRelax, cursor, draw_.gauss_clamped(55, 25, 15, 130));
        return cursor;
    }

    Timestamp outside_block(Timestamp cursor) {
        Timestamp leave_end = do_activity(kLeaveHomeRaw, cursor, draw_.uniform(1.0, 3.0));
        double away = draw_.gauss_clamped(120, 55, 35, 290);
        Timestamp back = leave_end.add_minutes(away);
        log_.sensor_event(cursor.add_minutes(0.2), "D003", "OPEN");
        log_.sensor_event(back.add_minutes(-0.2), "D003", "CLOSE");
        return do_activity(kEnterHomeRaw, back, draw_.uniform(1.0, 3.0));
    }

    Timestamp daytime(int day, Timestamp cursor, double bed) {
        const bool weekend = is_weekend(day);
        const double afternoon_end = std::min(bed - 120.0, 1065.0);  // ~17:45
        double lunch_at = draw_.gauss_clamped(742, 25, 690, 810);
        bool had_lunch = false;

        while (minute_of(day, cursor) < afternoon_end - 20.0) {
            double now = minute_of(day, cursor);
            if (!had_lunch && now >= lunch_at - 15.0) {
                cursor = gap_after(cursor);
                cursor = do_activity(kMealPrep, cursor, draw_.gauss_clamped(18, 6, 7, 40));
                cursor = gap_after(cursor, 0.5, 2.0);
                cursor = do_activity(kEating, cursor, draw_.gauss_clamped(15, 5, 6, 32));
                if (draw_.chance(0.5)) {
                    cursor = gap_after(cursor, 1.0, 3.0);
                    cursor = do_activity(kWashDishes, cursor, draw_.gauss_clamped(7, 3, 3, 15));
                }
                had_lunch = true;
                continue;
            }
            cursor = gap_after(cursor, 2.0, 10.0);
            int block = draw_.weighted(weekend ? std::vector<double>{0.10, 0.38, 0.12, 0.40}
                                               : std::vector<double>{0.30, 0.30, 0.12, 0.28});
            switch (block) {
                case 0:
                    cursor = do_activity(kWork, cursor, draw_.gauss_clamped(95, 35, 30, 200));
                    break;
                case 1:
                    cursor = outside_block(cursor);
                    break;
                case 2:
                    cursor = do_activity(kHousekeeping, cursor,
                                         draw_.gauss_clamped(35, 12, 12, 75));
                    break;
                default:
                    cursor = do_activity(kRelax, cursor, draw_.gauss_clamped(48, 20, 12, 110));
                    break;
            }
        }
        return cursor;
    }

    Timestamp evening(int day, Timestamp cursor, double bed, bool last_day) {
        // The last day must not spill annotations past its own midnight, so
        // every block is capped there and optional blocks are dropped.
        const double hard_cap = 1434.0;
        auto capped = [&](Timestamp start, double duration) {
            if (!last_day) return duration;
            double remaining = hard_cap - minute_of(day, start);
            return std::clamp(duration, 1.0, std::max(1.0, remaining));
        };
        double dinner_at = std::max(minute_of(day, cursor) + 5.0,
                                    draw_.gauss_clamped(1085, 28, 1020, 1160));
        if (last_day) dinner_at = std::min(dinner_at, 1240.0);
        cursor = at_minutes(day, dinner_at + jitter_seconds());
        cursor = do_activity(kMealPrep, cursor,
                             capped(cursor, draw_.gauss_clamped(26, 8, 10, 50)));
        cursor = gap_after(cursor, 0.5, 2.5);
        cursor = do_activity(kEating, cursor, capped(cursor, draw_.gauss_clamped(18, 6, 8, 40)));
        if (draw_.chance(0.7) && (!last_day || minute_of(day, cursor) < 1390.0)) {
            cursor = gap_after(cursor, 1.0, 3.0);
            cursor = do_activity(kWashDishes, cursor,
                                 capped(cursor, draw_.gauss_clamped(9, 3, 3, 18)));
        }
        cursor = gap_after(cursor, 2.0, 7.0);
        cursor = do_activity(kRelax, cursor, capped(cursor, draw_.gauss_clamped(85, 30, 20, 170)));
        if (draw_.chance(0.45) && (!last_day || minute_of(day, cursor) < 1380.0)) {
            cursor = gap_after(cursor, 1.0, 4.0);
            cursor = do_activity(kResperate, cursor,
                                 capped(cursor, draw_.gauss_clamped(20, 2, 15, 25)));
        }
        // Fill the remainder of the evening so bedtime is reached organically.
        double now = minute_of(day, cursor);
        double target = last_day ? std::min(bed, 1380.0) : bed;
        if (now + 18.0 < target) {
            cursor = gap_after(cursor, 1.0, 5.0);
            Timestamp end = at_minutes(day, target - draw_.uniform(1.0, 5.0));
            begin_activity(kRelax, cursor);
            end_activity(end);
            cursor = end;
        }
        return cursor.add_minutes(draw_.uniform(1.0, 4.0));
    }

    void daily_filler(int day) {
        // Unannotated background chatter: idle motion and temperature lines.
        const int idle = draw_.uniform_int(4, 9);
        for (int i = 0; i < idle; ++i) {
            char sensor[8];
            std::snprintf(sensor, sizeof(sensor), "M%03d", draw_.uniform_int(1, 31));
            log_.sensor_event(at_minutes(day, draw_.uniform(0, 1439.0)), sensor,
                              draw_.chance(0.5) ? "ON" : "OFF");
        }
        const int temps = draw_.uniform_int(2, 4);
        for (int i = 0; i < temps; ++i) {
            char sensor[8], value[8];
            std::snprintf(sensor, sizeof(sensor), "T%03d", draw_.uniform_int(1, 5));
            std::snprintf(value, sizeof(value), "%.1f", draw_.uniform(18.0, 27.5));
            log_.sensor_event(at_minutes(day, draw_.uniform(0, 1439.0)), sensor, value);
        }
    }

    void inject_defects() {
        // Malformed lines for the parser's skip report.
        log_.raw_line(at_minutes(3, 600), at_minutes(3, 600).iso8601().substr(0, 10) +
                                              " 10:00:00 M007");  // too few fields
        log_.raw_line(at_minutes(5, 610), "2010-13-40 09:00:00 M001 ON");  // bad date
        log_.raw_line(at_minutes(7, 620), at_minutes(7, 620).date_string() +
                                              " 07:61:00 M002 OFF");  // bad time
        log_.raw_line(at_minutes(9, 630), at_minutes(9, 630).date_string() +
                                              " 10:30:00 M004 ON Relax middle");  // bad marker
        log_.raw_line(at_minutes(11, 640), at_minutes(11, 640).date_string() +
                                               " 11:00:00 M005 ON Relax");  // label, no marker
        // Orphaned annotations for the interval-matching exclusion counters.
        log_.marker(at_minutes(20, 300), "M009", "OFF", kRelax, false);        // unmatched end
        log_.marker(at_minutes(50, 302), "M021", "ON", kHousekeeping, true);   // orphaned begin
        Timestamp zero = at_minutes(80, 305);
        log_.marker(zero, "M009", "ON", kRelax, true);   // zero-duration pair
        log_.marker(zero, "M009", "OFF", kRelax, false);
    }

    bool is_weekend(int day) {
        Weekday dow = at_minutes(day, 0).weekday();
        return dow == Weekday::Saturday || dow == Weekday::Sunday;
    }

    double minute_of(int day, Timestamp t) {
        return minutes_between(at_minutes(day, 0), t);
    }

    const SynthConfig& config_;
    LogBuilder& log_;
    Draw& draw_;
    Timestamp day0_;
    std::string_view open_label_;
    Timestamp open_start_;
};

}  // namespace

std::string generate_synthetic_log(const SynthConfig& config) {
    if (config.days < 1) throw ConfigError("synthetic log needs at least one day");
    LogBuilder log(config.seed);
    Simulator sim(config, log);
    sim.run();
    return log.render();
}

void write_synthetic_log(std::ostream& out, const SynthConfig& config) {
    out << generate_synthetic_log(config);
}

}  // namespace routinecast
