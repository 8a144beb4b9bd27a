#include "pvfc/time.hpp"

#include <charconv>
#include <stdexcept>

namespace pvfc {

namespace {

int parse_int(std::string_view s, const std::string& what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("bad " + what + " in timestamp: '" + std::string(s) + "'");
  return v;
}

}  // namespace

utc_time parse_iso8601(const std::string& text) {
  using namespace std::chrono;
  std::string_view s{text};
  if (s.size() != 10 && s.size() != 19 && s.size() != 20)
    throw std::invalid_argument("bad timestamp '" + text + "' (want YYYY-MM-DD[THH:MM:SS[Z]])");
  if (s[4] != '-' || s[7] != '-')
    throw std::invalid_argument("bad timestamp '" + text + "'");
  const int y = parse_int(s.substr(0, 4), "year");
  const int mo = parse_int(s.substr(5, 2), "month");
  const int d = parse_int(s.substr(8, 2), "day");
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date '" + text + "'");
  seconds tod{0};
  if (s.size() > 10) {
    if ((s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':')
      throw std::invalid_argument("bad timestamp '" + text + "'");
    if (s.size() == 20 && s[19] != 'Z')
      throw std::invalid_argument("bad timestamp '" + text + "' (trailing char must be Z)");
    const int hh = parse_int(s.substr(11, 2), "hour");
    const int mi = parse_int(s.substr(14, 2), "minute");
    const int ss = parse_int(s.substr(17, 2), "second");
    if (hh > 23 || mi > 59 || ss > 59)
      throw std::invalid_argument("invalid time of day '" + text + "'");
    tod = hours{hh} + minutes{mi} + seconds{ss};
  }
  return sys_days{ymd} + tod;
}

std::string format_iso8601(utc_time t) {
  using namespace std::chrono;
  const auto dp = floor<days>(t);
  const year_month_day ymd{dp};
  const hh_mm_ss hms{t - dp};
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

TimeGrid grid15_between(utc_time begin, utc_time end) {
  if (!aligned_to(begin, kStep15) || !aligned_to(end, kStep15))
    throw std::invalid_argument("span endpoints must be aligned to the 15-min grid");
  if (end <= begin) throw std::invalid_argument("empty span");
  return TimeGrid{begin, static_cast<std::size_t>((end - begin) / kStep15), kStep15};
}

}  // namespace pvfc
