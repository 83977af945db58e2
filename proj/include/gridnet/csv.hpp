#pragma once

#include <charconv>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridnet::csv {

/// Splits one comma-separated line. Double-quoted fields may contain commas
/// and escaped quotes (""). Returns nullopt on an unterminated quote.
inline std::optional<std::vector<std::string>> split_line(std::string_view line)
{
  if (!line.empty() && line.back() == '\r')
    line.remove_suffix(1);

  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i)
  {
    const char c = line[i];
    if (quoted)
    {
      if (c == '"')
      {
        if (i + 1 < line.size() && line[i + 1] == '"')
        {
          cur.push_back('"');
          ++i;
        }
        else
          quoted = false;
      }
      else
        cur.push_back(c);
    }
    else if (c == '"')
      quoted = true;
    else if (c == ',')
    {
      fields.push_back(std::move(cur));
      cur.clear();
    }
    else
      cur.push_back(c);
  }
  if (quoted)
    return std::nullopt;
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  return s;
}

inline std::optional<long long> parse_int(std::string_view s)
{
  s = trim(s);
  if (s.empty())
    return std::nullopt;
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    return std::nullopt;
  return v;
}

inline std::optional<bool> parse_bool(std::string_view s)
{
  s = trim(s);
  if (s == "true")
    return true;
  if (s == "false")
    return false;
  return std::nullopt;
}

/// Quotes a field only when it needs it.
inline std::string escape(std::string_view s)
{
  if (s.find_first_of(",\"\n") == std::string_view::npos)
    return std::string(s);
  std::string out = "\"";
  for (char c : s)
  {
    if (c == '"')
      out += "\"\"";
    else
      out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// printf-style %.6g, the fixed float format of every table this library emits.
inline std::string format_g6(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Round-trip precision for doubles.
inline std::string format_g17(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace gridnet::csv
