#include "hrvson/rr_ingest.hpp"

#include <cmath>
#include <numeric>

#include "hrvson/error.hpp"
#include "hrvson/text.hpp"

namespace hrvson {

RrUnit parse_rr_unit(std::string_view text) {
  if (text == "s" || text == "seconds") return RrUnit::Seconds;
  if (text == "ms" || text == "milliseconds") return RrUnit::Milliseconds;
  throw ConfigError("unknown RR unit '" + std::string(text) + "' (expected s or ms)");
}

double RRSeries::duration_ms() const {
  return std::accumulate(intervals_ms.begin(), intervals_ms.end(), 0.0);
}

RRSeries make_rr_series(std::vector<double> intervals_ms, std::string label,
                        std::string source_path) {
  for (std::size_t i = 0; i < intervals_ms.size(); ++i) {
    const double v = intervals_ms[i];
    if (!std::isfinite(v) || v <= 0.0) {
      throw DataError("interval " + std::to_string(i) + " of '" + label +
                      "' is not a positive finite value");
    }
  }
  if (intervals_ms.size() < 2) {
    throw DataError("record '" + label + "' has fewer than 2 intervals");
  }
  return RRSeries{std::move(intervals_ms), std::move(label), std::move(source_path)};
}

RRSeries parse_rr_text(std::string_view text, RrUnit unit, std::string label,
                       std::string source_path) {
  const double scale = unit == RrUnit::Seconds ? 1000.0 : 1.0;
  const std::string where = source_path.empty() ? label : source_path;
  std::vector<double> intervals;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto fields = text::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() > 2) {
      throw DataError(where + ":" + std::to_string(line_no) + ": expected 1 or 2 fields, got " +
                      std::to_string(fields.size()));
    }
    for (auto f : fields) {
      if (!text::parse_double(f)) {
        throw DataError(where + ":" + std::to_string(line_no) + ": non-numeric token '" +
                        std::string(f) + "'");
      }
    }
    const double value = *text::parse_double(fields.back());
    if (value <= 0.0) {
      throw DataError(where + ":" + std::to_string(line_no) + ": non-positive interval " +
                      std::string(fields.back()));
    }
    intervals.push_back(value * scale);
  }
  if (intervals.size() < 2) {
    throw DataError(where + ": fewer than 2 valid intervals");
  }
  return make_rr_series(std::move(intervals), std::move(label), std::move(source_path));
}

RRSeries parse_rr_file(const std::filesystem::path& path, RrUnit unit, std::string label) {
  const auto contents = text::read_file(path);
  return parse_rr_text(contents, unit, std::move(label), path.string());
}

std::string format_rr_text(const RRSeries& series) {
  std::string out = "# " + series.label + " (ms)\n";
  for (double v : series.intervals_ms) {
    out += text::shortest(v);
    out += '\n';
  }
  return out;
}

void write_rr_file(const RRSeries& series, const std::filesystem::path& path) {
  text::write_file(path, format_rr_text(series));
}

FilterResult filter_artifacts(const RRSeries& series, double lo_ms, double hi_ms) {
  if (!(lo_ms > 0.0) || !(lo_ms < hi_ms)) {
    throw ConfigError("artifact bounds must satisfy 0 < lo < hi");
  }
  FilterResult result;
  result.series.label = series.label;
  result.series.source_path = series.source_path;
  for (double v : series.intervals_ms) {
    if (v >= lo_ms && v <= hi_ms) {
      result.series.intervals_ms.push_back(v);
    } else {
      ++result.removed;
    }
  }
  if (result.series.size() < 2) {
    throw DataError("record '" + series.label + "' has fewer than 2 intervals after filtering to [" +
                    text::sig6(lo_ms) + ", " + text::sig6(hi_ms) + "] ms");
  }
  return result;
}

}  // namespace hrvson
