#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hrvson/rr_ingest.hpp"

namespace hrvson {

// Time-domain HRV metrics over NN intervals in ms. All require >= 2 intervals.
double avnn(std::span<const double> rr_ms);
// Sample standard deviation (N-1 divisor).
double sdnn(std::span<const double> rr_ms);
double rmssd(std::span<const double> rr_ms);

enum class PnnThreshold {
  Inclusive,  // |diff| >= x
  Strict,     // |diff| >  x
};

// Percentage of successive differences reaching x_ms.
double pnnx(std::span<const double> rr_ms, double x_ms,
            PnnThreshold mode = PnnThreshold::Inclusive);

enum class Feature { Avnn = 0, Sdnn = 1, Rmssd = 2, Pnnx = 3 };
inline constexpr std::size_t kFeatureCount = 4;

std::string_view feature_name(Feature f);
Feature parse_feature(std::string_view name);

struct FeatureVector {
  double avnn_ms = 0.0;
  double sdnn_ms = 0.0;
  double rmssd_ms = 0.0;
  double pnnx_pct = 0.0;
  double window_start_ms = 0.0;
  double window_len_ms = 0.0;
  std::string record_label;

  double get(Feature f) const;
  std::array<double, kFeatureCount> values() const {
    return {avnn_ms, sdnn_ms, rmssd_ms, pnnx_pct};
  }
};

// Rows in (AVNN, SDNN, RMSSD, pNNx) column order, all sharing one pNNx
// threshold.
struct FeatureMatrix {
  std::vector<FeatureVector> rows;
  double pnn_x_ms = 50.0;
  PnnThreshold pnn_mode = PnnThreshold::Inclusive;

  std::size_t size() const { return rows.size(); }
  std::vector<double> column(Feature f) const;
  // Feature values of rows whose label matches, in row order.
  std::vector<double> series(Feature f, std::string_view label) const;
  std::vector<std::string> labels() const;  // distinct, first-seen order
  // "pnn50" for x = 50.
  std::string pnn_column_name() const;
  std::array<std::string, kFeatureCount> column_names() const;
};

FeatureVector record_features(const RRSeries& rr, double x_ms = 50.0,
                              PnnThreshold mode = PnnThreshold::Inclusive);

struct WindowParams {
  double window_ms = 60000.0;
  double hop_ms = 30000.0;
  double pnn_x_ms = 50.0;
  PnnThreshold pnn_mode = PnnThreshold::Inclusive;

  void validate() const;
};

// Windows are laid out on cumulative time, an interval belonging to the
// window that contains its onset. Windows start at 0, hop, 2*hop, ... and
// stop after the first window that reaches the end of the record; a last
// window covering less than half its length is dropped.
FeatureMatrix windowed_features(const RRSeries& rr, const WindowParams& params = {});

// Concatenates matrices computed with the same pNNx threshold.
FeatureMatrix concat(const std::vector<FeatureMatrix>& parts);

// CSV with header "label,window_start_ms,avnn,sdnn,rmssd,pnn<x>"; numbers
// at six significant digits.
std::string format_features_csv(const FeatureMatrix& m);
FeatureMatrix parse_features_csv(std::string_view csv);
void write_features_csv(const FeatureMatrix& m, const std::filesystem::path& path);
FeatureMatrix read_features_csv(const std::filesystem::path& path);

}  // namespace hrvson
