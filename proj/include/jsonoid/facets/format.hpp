#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace jsonoid {

// Named string formats, detected in this priority order; the first
// detector that accepts a value wins.
enum class StringFormat {
  Uuid,
  DateTime,
  Date,
  Time,
  Ipv4,
  Ipv6,
  Email,
  Uri,
};

// First matching format for a string, or nullopt when none applies.
std::optional<StringFormat> detect_format(std::string_view value);

// True when the value matches the specific detector (via priority
// detection, so discovery and validation agree on the verdict).
bool matches_format(std::string_view value, StringFormat format);

std::string_view format_name(StringFormat format);
std::optional<StringFormat> format_from_name(std::string_view name);

// Format agreement across observed strings. Identity is the not-yet-seen
// state; a value with no recognized format yields a concrete "plain" state
// that conflicts with every named format, so one unformatted value
// suppresses the keyword.
struct FormatFacet {
  enum class State { Identity, Named, Plain, Conflict };

  State state = State::Plain;
  StringFormat format = StringFormat::Uuid;  // meaningful only when Named

  static FormatFacet identity() { return FormatFacet{State::Identity, StringFormat::Uuid}; }

  static FormatFacet of(std::string_view value) {
    if (auto f = detect_format(value)) return FormatFacet{State::Named, *f};
    return FormatFacet{State::Plain, StringFormat::Uuid};
  }

  friend FormatFacet combine(const FormatFacet& a, const FormatFacet& b) {
    if (a.state == State::Identity) return b;
    if (b.state == State::Identity) return a;
    if (a.state == State::Conflict || b.state == State::Conflict)
      return FormatFacet{State::Conflict, StringFormat::Uuid};
    if (a.state == b.state && (a.state != State::Named || a.format == b.format))
      return a;
    return FormatFacet{State::Conflict, StringFormat::Uuid};
  }

  std::optional<StringFormat> emitted() const {
    if (state == State::Named) return format;
    return std::nullopt;
  }

  bool operator==(const FormatFacet&) const = default;
};

}  // namespace jsonoid
