#include "jsonoid/facets/format.hpp"

#include <array>
#include <cctype>
#include <charconv>

namespace jsonoid {

namespace {

bool all_hex(std::string_view s) {
  for (char c : s)
    if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
  return !s.empty();
}

bool all_digits(std::string_view s) {
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return !s.empty();
}

// 8-4-4-4-12 hexadecimal groups.
bool is_uuid(std::string_view s) {
  if (s.size() != 36) return false;
  if (s[8] != '-' || s[13] != '-' || s[18] != '-' || s[23] != '-') return false;
  return all_hex(s.substr(0, 8)) && all_hex(s.substr(9, 4)) && all_hex(s.substr(14, 4)) &&
         all_hex(s.substr(19, 4)) && all_hex(s.substr(24, 12));
}

// RFC 3339 full-date: YYYY-MM-DD with plausible month/day ranges.
bool is_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  if (!all_digits(s.substr(0, 4)) || !all_digits(s.substr(5, 2)) || !all_digits(s.substr(8, 2)))
    return false;
  int month = (s[5] - '0') * 10 + (s[6] - '0');
  int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

// RFC 3339 full-time: HH:MM:SS with optional fraction and a Z or numeric
// offset.
bool is_time(std::string_view s) {
  if (s.size() < 9) return false;  // shortest: 00:00:00Z
  if (s[2] != ':' || s[5] != ':') return false;
  if (!all_digits(s.substr(0, 2)) || !all_digits(s.substr(3, 2)) || !all_digits(s.substr(6, 2)))
    return false;
  int hour = (s[0] - '0') * 10 + (s[1] - '0');
  int minute = (s[3] - '0') * 10 + (s[4] - '0');
  int second = (s[6] - '0') * 10 + (s[7] - '0');
  if (hour > 23 || minute > 59 || second > 60) return false;
  std::size_t pos = 8;
  if (pos < s.size() && s[pos] == '.') {
    std::size_t start = ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) return false;
  }
  if (pos >= s.size()) return false;
  if (s[pos] == 'Z' || s[pos] == 'z') return pos + 1 == s.size();
  if (s[pos] != '+' && s[pos] != '-') return false;
  std::string_view off = s.substr(pos + 1);
  if (off.size() != 5 || off[2] != ':') return false;
  if (!all_digits(off.substr(0, 2)) || !all_digits(off.substr(3, 2))) return false;
  int oh = (off[0] - '0') * 10 + (off[1] - '0');
  int om = (off[3] - '0') * 10 + (off[4] - '0');
  return oh <= 23 && om <= 59;
}

// RFC 3339 date-time: full-date "T" full-time.
bool is_date_time(std::string_view s) {
  if (s.size() < 20) return false;
  if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return false;
  return is_date(s.substr(0, 10)) && is_time(s.substr(11));
}

bool is_ipv4(std::string_view s) {
  int groups = 0;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t dot = s.find('.', pos);
    std::string_view part = s.substr(pos, dot == std::string_view::npos ? s.size() - pos : dot - pos);
    if (part.empty() || part.size() > 3 || !all_digits(part)) return false;
    if (part.size() > 1 && part[0] == '0') return false;  // no leading zeros
    int value = 0;
    std::from_chars(part.data(), part.data() + part.size(), value);
    if (value > 255) return false;
    ++groups;
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return groups == 4;
}

// Hex groups with at most one "::" compression; a trailing dotted quad
// counts as two groups.
bool is_ipv6(std::string_view s) {
  if (s.empty()) return false;
  std::size_t dcolon = s.find("::");
  if (dcolon != std::string_view::npos && s.find("::", dcolon + 1) != std::string_view::npos)
    return false;

  auto count_groups = [](std::string_view part, bool allow_ipv4_tail, int& groups) -> bool {
    groups = 0;
    if (part.empty()) return true;
    std::size_t pos = 0;
    while (pos <= part.size()) {
      std::size_t colon = part.find(':', pos);
      std::string_view g =
          part.substr(pos, colon == std::string_view::npos ? part.size() - pos : colon - pos);
      bool last = colon == std::string_view::npos;
      if (g.empty()) return false;
      if (last && allow_ipv4_tail && g.find('.') != std::string_view::npos) {
        if (!is_ipv4(g)) return false;
        groups += 2;
      } else {
        if (g.size() > 4 || !all_hex(g)) return false;
        ++groups;
      }
      if (last) break;
      pos = colon + 1;
    }
    return true;
  };

  int left = 0, right = 0;
  if (dcolon == std::string_view::npos) {
    if (!count_groups(s, true, left)) return false;
    return left == 8;
  }
  if (!count_groups(s.substr(0, dcolon), false, left)) return false;
  if (!count_groups(s.substr(dcolon + 2), true, right)) return false;
  return left + right < 8;
}

// Pragmatic email shape: one @, non-empty local part, domain with a dot,
// no whitespace.
bool is_email(std::string_view s) {
  std::size_t at = s.find('@');
  if (at == std::string_view::npos || at == 0 || at + 1 >= s.size()) return false;
  if (s.find('@', at + 1) != std::string_view::npos) return false;
  std::string_view domain = s.substr(at + 1);
  std::size_t dot = domain.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 >= domain.size()) return false;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

// RFC 3986 scheme followed by a colon and a non-empty remainder.
bool is_uri(std::string_view s) {
  std::size_t colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 >= s.size()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s.substr(1, colon - 1)) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
      return false;
  }
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

constexpr std::array<StringFormat, 8> kDetectionOrder{
    StringFormat::Uuid, StringFormat::DateTime, StringFormat::Date, StringFormat::Time,
    StringFormat::Ipv4, StringFormat::Ipv6,     StringFormat::Email, StringFormat::Uri,
};

bool run_detector(std::string_view value, StringFormat format) {
  switch (format) {
    case StringFormat::Uuid: return is_uuid(value);
    case StringFormat::DateTime: return is_date_time(value);
    case StringFormat::Date: return is_date(value);
    case StringFormat::Time: return is_time(value);
    case StringFormat::Ipv4: return is_ipv4(value);
    case StringFormat::Ipv6: return is_ipv6(value);
    case StringFormat::Email: return is_email(value);
    case StringFormat::Uri: return is_uri(value);
  }
  return false;
}

}  // namespace

std::optional<StringFormat> detect_format(std::string_view value) {
  for (StringFormat f : kDetectionOrder)
    if (run_detector(value, f)) return f;
  return std::nullopt;
}

bool matches_format(std::string_view value, StringFormat format) {
  return detect_format(value) == format;
}

std::string_view format_name(StringFormat format) {
  switch (format) {
    case StringFormat::Uuid: return "uuid";
    case StringFormat::DateTime: return "date-time";
    case StringFormat::Date: return "date";
    case StringFormat::Time: return "time";
    case StringFormat::Ipv4: return "ipv4";
    case StringFormat::Ipv6: return "ipv6";
    case StringFormat::Email: return "email";
    case StringFormat::Uri: return "uri";
  }
  return "?";
}

std::optional<StringFormat> format_from_name(std::string_view name) {
  for (StringFormat f : kDetectionOrder)
    if (format_name(f) == name) return f;
  return std::nullopt;
}

}  // namespace jsonoid
