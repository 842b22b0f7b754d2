#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hrvson {

enum class RrUnit { Seconds, Milliseconds };

// Accepts "s"/"seconds" and "ms"/"milliseconds".
RrUnit parse_rr_unit(std::string_view text);

// Inter-beat intervals in milliseconds. Every interval is finite and > 0 and
// there are at least two of them; make_rr_series enforces this.
struct RRSeries {
  std::vector<double> intervals_ms;
  std::string label;
  std::string source_path;

  std::size_t size() const { return intervals_ms.size(); }
  double duration_ms() const;
};

RRSeries make_rr_series(std::vector<double> intervals_ms, std::string label,
                        std::string source_path = {});

// Lines are "<interval>" or "<cumulative time> <interval>", split on
// whitespace and/or commas. Blank lines and lines starting with '#' are
// skipped. Errors carry the 1-based line number.
RRSeries parse_rr_text(std::string_view text, RrUnit unit, std::string label,
                       std::string source_path = {});
RRSeries parse_rr_file(const std::filesystem::path& path, RrUnit unit, std::string label);

// One interval per line in milliseconds, shortest text that round-trips.
std::string format_rr_text(const RRSeries& series);
void write_rr_file(const RRSeries& series, const std::filesystem::path& path);

inline constexpr double kDefaultRrMinMs = 300.0;
inline constexpr double kDefaultRrMaxMs = 2000.0;

struct FilterResult {
  RRSeries series;
  std::size_t removed = 0;
};

// Drops intervals outside [lo_ms, hi_ms]; order of the survivors is kept.
FilterResult filter_artifacts(const RRSeries& series, double lo_ms = kDefaultRrMinMs,
                              double hi_ms = kDefaultRrMaxMs);

}  // namespace hrvson
