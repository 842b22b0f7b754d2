#include "hrvson/hrv_features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hrvson/error.hpp"
#include "hrvson/text.hpp"

namespace hrvson {

namespace {

void require_pairs(std::span<const double> rr, const char* metric) {
  if (rr.size() < 2) {
    throw DataError(std::string(metric) + " needs at least 2 intervals");
  }
}

}  // namespace

double avnn(std::span<const double> rr_ms) {
  require_pairs(rr_ms, "AVNN");
  return std::accumulate(rr_ms.begin(), rr_ms.end(), 0.0) / static_cast<double>(rr_ms.size());
}

double sdnn(std::span<const double> rr_ms) {
  require_pairs(rr_ms, "SDNN");
  const double mean = avnn(rr_ms);
  double ss = 0.0;
  for (double v : rr_ms) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(rr_ms.size() - 1));
}

double rmssd(std::span<const double> rr_ms) {
  require_pairs(rr_ms, "RMSSD");
  double ss = 0.0;
  for (std::size_t i = 1; i < rr_ms.size(); ++i) {
    const double d = rr_ms[i] - rr_ms[i - 1];
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(rr_ms.size() - 1));
}

double pnnx(std::span<const double> rr_ms, double x_ms, PnnThreshold mode) {
  require_pairs(rr_ms, "pNNx");
  if (!(x_ms > 0.0)) throw ConfigError("pNNx threshold must be > 0");
  std::size_t count = 0;
  for (std::size_t i = 1; i < rr_ms.size(); ++i) {
    const double d = std::abs(rr_ms[i] - rr_ms[i - 1]);
    if (mode == PnnThreshold::Inclusive ? d >= x_ms : d > x_ms) ++count;
  }
  return 100.0 * static_cast<double>(count) / static_cast<double>(rr_ms.size() - 1);
}

std::string_view feature_name(Feature f) {
  switch (f) {
    case Feature::Avnn: return "avnn";
    case Feature::Sdnn: return "sdnn";
    case Feature::Rmssd: return "rmssd";
    case Feature::Pnnx: return "pnnx";
  }
  return "?";
}

Feature parse_feature(std::string_view name) {
  if (name == "avnn") return Feature::Avnn;
  if (name == "sdnn") return Feature::Sdnn;
  if (name == "rmssd") return Feature::Rmssd;
  if (name == "pnnx" || name.starts_with("pnn")) return Feature::Pnnx;
  throw ConfigError("unknown feature '" + std::string(name) +
                    "' (expected avnn, sdnn, rmssd or pnn<x>)");
}

double FeatureVector::get(Feature f) const {
  switch (f) {
    case Feature::Avnn: return avnn_ms;
    case Feature::Sdnn: return sdnn_ms;
    case Feature::Rmssd: return rmssd_ms;
    case Feature::Pnnx: return pnnx_pct;
  }
  return 0.0;
}

std::vector<double> FeatureMatrix::column(Feature f) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.get(f));
  return out;
}

std::vector<double> FeatureMatrix::series(Feature f, std::string_view label) const {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.record_label == label) out.push_back(r.get(f));
  }
  return out;
}

std::vector<std::string> FeatureMatrix::labels() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.record_label) == out.end()) {
      out.push_back(r.record_label);
    }
  }
  return out;
}

std::string FeatureMatrix::pnn_column_name() const { return "pnn" + text::shortest(pnn_x_ms); }

std::array<std::string, kFeatureCount> FeatureMatrix::column_names() const {
  return {"avnn", "sdnn", "rmssd", pnn_column_name()};
}

FeatureVector record_features(const RRSeries& rr, double x_ms, PnnThreshold mode) {
  const std::span<const double> v(rr.intervals_ms);
  FeatureVector f;
  f.avnn_ms = avnn(v);
  f.sdnn_ms = sdnn(v);
  f.rmssd_ms = rmssd(v);
  f.pnnx_pct = pnnx(v, x_ms, mode);
  f.window_start_ms = 0.0;
  f.window_len_ms = rr.duration_ms();
  f.record_label = rr.label;
  return f;
}

void WindowParams::validate() const {
  if (!(window_ms >= 10000.0)) throw ConfigError("window must be at least 10 s");
  if (!(hop_ms > 0.0) || hop_ms > window_ms) {
    throw ConfigError("hop must satisfy 0 < hop <= window");
  }
  if (!(pnn_x_ms > 0.0)) throw ConfigError("pNNx threshold must be > 0");
}

FeatureMatrix windowed_features(const RRSeries& rr, const WindowParams& params) {
  params.validate();
  const auto& iv = rr.intervals_ms;

  std::vector<double> onset(iv.size());
  double t = 0.0;
  for (std::size_t i = 0; i < iv.size(); ++i) {
    onset[i] = t;
    t += iv[i];
  }
  const double total = t;

  FeatureMatrix out;
  out.pnn_x_ms = params.pnn_x_ms;
  out.pnn_mode = params.pnn_mode;

  for (std::size_t k = 0;; ++k) {
    const double start = static_cast<double>(k) * params.hop_ms;
    if (start >= total) break;
    const double stop = start + params.window_ms;
    const bool last = stop >= total;
    const double covered = std::min(stop, total) - start;
    if (last && k > 0 && covered < params.window_ms / 2.0) break;

    const auto first = std::lower_bound(onset.begin(), onset.end(), start) - onset.begin();
    const auto end = std::lower_bound(onset.begin(), onset.end(), stop) - onset.begin();
    if (end - first >= 2) {
      const std::span<const double> w(iv.data() + first, static_cast<std::size_t>(end - first));
      FeatureVector f;
      f.avnn_ms = avnn(w);
      f.sdnn_ms = sdnn(w);
      f.rmssd_ms = rmssd(w);
      f.pnnx_pct = pnnx(w, params.pnn_x_ms, params.pnn_mode);
      f.window_start_ms = start;
      f.window_len_ms = covered;
      f.record_label = rr.label;
      out.rows.push_back(std::move(f));
    }
    if (last) break;
  }
  if (out.rows.empty()) {
    throw DataError("record '" + rr.label + "' produced no feature window");
  }
  return out;
}

FeatureMatrix concat(const std::vector<FeatureMatrix>& parts) {
  FeatureMatrix out;
  if (parts.empty()) return out;
  out.pnn_x_ms = parts.front().pnn_x_ms;
  out.pnn_mode = parts.front().pnn_mode;
  for (const auto& p : parts) {
    if (p.pnn_x_ms != out.pnn_x_ms || p.pnn_mode != out.pnn_mode) {
      throw DataError("feature matrices use different pNNx thresholds");
    }
    out.rows.insert(out.rows.end(), p.rows.begin(), p.rows.end());
  }
  return out;
}

std::string format_features_csv(const FeatureMatrix& m) {
  std::string out = "label,window_start_ms,avnn,sdnn,rmssd," + m.pnn_column_name() + "\n";
  for (const auto& r : m.rows) {
    out += r.record_label;
    out += ',' + text::sig6(r.window_start_ms);
    for (double v : r.values()) out += ',' + text::sig6(v);
    out += '\n';
  }
  return out;
}

FeatureMatrix parse_features_csv(std::string_view csv) {
  FeatureMatrix m;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool have_header = false;
  while (pos < csv.size()) {
    auto nl = csv.find('\n', pos);
    if (nl == std::string_view::npos) nl = csv.size();
    const auto line = text::trim(csv.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = text::split_csv(line);
    const auto where = "features CSV line " + std::to_string(line_no);
    if (!have_header) {
      if (fields.size() != 6 || fields[0] != "label" || fields[1] != "window_start_ms" ||
          fields[2] != "avnn" || fields[3] != "sdnn" || fields[4] != "rmssd" ||
          !fields[5].starts_with("pnn")) {
        throw DataError(where + ": unexpected header");
      }
      const auto x = text::parse_double(fields[5].substr(3));
      if (!x || *x <= 0.0) throw DataError(where + ": cannot read pNNx threshold from header");
      m.pnn_x_ms = *x;
      have_header = true;
      continue;
    }
    if (fields.size() != 6) throw DataError(where + ": expected 6 fields");
    std::array<double, 5> nums{};
    for (std::size_t i = 0; i < 5; ++i) {
      const auto v = text::parse_double(fields[i + 1]);
      if (!v) throw DataError(where + ": non-numeric field '" + std::string(fields[i + 1]) + "'");
      nums[i] = *v;
    }
    FeatureVector f;
    f.record_label = std::string(fields[0]);
    f.window_start_ms = nums[0];
    f.avnn_ms = nums[1];
    f.sdnn_ms = nums[2];
    f.rmssd_ms = nums[3];
    f.pnnx_pct = nums[4];
    m.rows.push_back(std::move(f));
  }
  if (!have_header) throw DataError("features CSV is empty");
  return m;
}

void write_features_csv(const FeatureMatrix& m, const std::filesystem::path& path) {
  text::write_file(path, format_features_csv(m));
}

FeatureMatrix read_features_csv(const std::filesystem::path& path) {
  return parse_features_csv(text::read_file(path));
}

}  // namespace hrvson
