#include "panelcast/time.hpp"

#include <cstdio>

#include "panelcast/error.hpp"

namespace panelcast {

using namespace std::chrono;

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

}  // namespace

Instant parse_instant(std::string_view text) {
  // Trim surrounding whitespace.
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  const bool shape_ok = text.size() >= 19 && text[4] == '-' && text[7] == '-' &&
                        (text[10] == 'T' || text[10] == ' ') && text[13] == ':' &&
                        text[16] == ':' &&
                        (text.size() == 19 || (text.size() == 20 && text[19] == 'Z'));
  if (!shape_ok || !read_int(text, 0, 4, y) || !read_int(text, 5, 2, mo) ||
      !read_int(text, 8, 2, d) || !read_int(text, 11, 2, h) || !read_int(text, 14, 2, mi) ||
      !read_int(text, 17, 2, s)) {
    fail(ErrorKind::parse, "invalid UTC timestamp '" + std::string(text) +
                               "' (expected YYYY-MM-DDTHH:MM:SSZ)");
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) {
    fail(ErrorKind::parse, "timestamp out of calendar range: '" + std::string(text) + "'");
  }
  return sys_days(ymd) + hours(h) + minutes(mi) + seconds(s);
}

std::string format_instant(Instant t) {
  const auto days_part = floor<days>(t);
  const year_month_day ymd(days_part);
  const hh_mm_ss hms(t - days_part);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

int day_of_year(Instant t) {
  const auto days_part = floor<days>(t);
  const year_month_day ymd(days_part);
  const sys_days jan1 = sys_days(year_month_day{ymd.year(), January, day{1}});
  return static_cast<int>((days_part - jan1).count()) + 1;
}

int year_of(Instant t) {
  return static_cast<int>(year_month_day(floor<days>(t)).year());
}

}  // namespace panelcast
