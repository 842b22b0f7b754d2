#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hrvson/clustering.hpp"
#include "hrvson/error.hpp"
#include "hrvson/hrv_features.hpp"
#include "hrvson/rr_ingest.hpp"
#include "hrvson/sonifier.hpp"
#include "hrvson/spectrogram.hpp"

namespace hrvson {

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "HRVSON_OUTPUT_DIR";

std::filesystem::path default_output_dir();

struct RecordSpec {
  std::filesystem::path path;
  RrUnit unit = RrUnit::Milliseconds;
  std::string label;
};

struct ImageSize {
  std::size_t width = 900;
  std::size_t height = 300;
};

struct PipelineConfig {
  std::vector<RecordSpec> records;
  double rr_min_ms = kDefaultRrMinMs;
  double rr_max_ms = kDefaultRrMaxMs;
  WindowParams window;
  FcmConfig fcm{.seed = 42};
  Feature sonify_feature = Feature::Avnn;
  SonificationConfig sonification;
  std::optional<std::filesystem::path> vowel_table;
  SpectrogramParams spectrogram;
  ImageSize image;
  std::filesystem::path output_dir = default_output_dir();

  void validate() const;
  // "key = value" lines covering every setting, defaults included.
  std::string describe() const;
};

// Applies a key/value config file on top of `base`. Record paths are taken
// relative to the file's directory.
PipelineConfig load_pipeline_config(const std::filesystem::path& path, PipelineConfig base = {});
void apply_config_text(PipelineConfig& config, std::string_view text,
                       const std::filesystem::path& base_dir, std::string_view source);

// "chi/subject1" -> "chi_subject1"
std::string file_stem_for(std::string_view label);

// Runs `fn`, prefixing any hrvson::Error with the stage name.
template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    const std::string what = std::string(stage) + " stage: " + e.what();
    switch (e.kind()) {
      case ErrorKind::Config:
        throw ConfigError(what);
      case ErrorKind::Data:
        throw DataError(what);
      case ErrorKind::Io:
        throw IoError(what);
    }
    throw;
  }
}

struct ClusterOutputs {
  std::vector<std::string> column_names;
  std::vector<std::string> point_labels;
  ZScore zscore;
  FcmResult fcm;
};

ClusterOutputs cluster_features(const FeatureMatrix& features, const FcmConfig& config);

// centers.csv, partition.csv and the six pairs_*.csv; returns file names.
std::vector<std::string> write_cluster_outputs(const ClusterOutputs& outputs,
                                               const std::filesystem::path& dir);

AudioBuffer sonify_record(const FeatureMatrix& features, Feature feature, const std::string& label,
                          const SonificationConfig& config);

void wav_to_png(const std::filesystem::path& wav, const std::filesystem::path& png,
                const SpectrogramParams& params, ImageSize size);

struct RunReport {
  std::size_t iterations = 0;
  double final_objective = 0.0;
  bool converged = false;
  std::vector<std::string> files;  // relative to the output directory
  std::string text;
};

// ingest -> features -> zscore -> fcm -> sonify -> spectrogram, writing every
// artifact plus report.txt under config.output_dir.
RunReport run_pipeline(const PipelineConfig& config);

}  // namespace hrvson
