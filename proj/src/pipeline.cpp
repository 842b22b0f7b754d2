#include "hrvson/pipeline.hpp"

#include <cstdlib>
#include <set>

#include "hrvson/keyvalue.hpp"
#include "hrvson/text.hpp"
#include "hrvson/wav.hpp"

namespace hrvson {

namespace fs = std::filesystem;

namespace {

std::string unit_name(RrUnit u) { return u == RrUnit::Seconds ? "s" : "ms"; }

std::size_t to_count(const KeyValueEntry& e) {
  const double v = kv_number(e);
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw ConfigError(e.where() + ": expected a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

fs::path default_output_dir() {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return fs::path(env);
  return fs::path("hrvson_out");
}

void PipelineConfig::validate() const {
  if (records.empty()) throw ConfigError("no input records configured");
  std::set<std::string> stems;
  for (const auto& r : records) {
    if (r.label.empty()) throw ConfigError("record '" + r.path.string() + "' has an empty label");
    if (!stems.insert(file_stem_for(r.label)).second) {
      throw ConfigError("duplicate record label '" + r.label + "'");
    }
  }
  if (!(rr_min_ms > 0.0) || !(rr_min_ms < rr_max_ms)) {
    throw ConfigError("artifact bounds must satisfy 0 < rr_min_ms < rr_max_ms");
  }
  window.validate();
  fcm.validate();
  sonification.validate();
  spectrogram.validate();
  if (image.width == 0 || image.height == 0) throw ConfigError("image size must be positive");
  if (output_dir.empty()) throw ConfigError("output directory is empty");
}

std::string PipelineConfig::describe() const {
  std::string out;
  const auto kv = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  for (const auto& r : records) {
    kv("record", "[\"" + r.path.generic_string() + "\", \"" + unit_name(r.unit) + "\", \"" +
                     r.label + "\"]");
  }
  kv("rr_min_ms", text::sig6(rr_min_ms));
  kv("rr_max_ms", text::sig6(rr_max_ms));
  kv("window_s", text::sig6(window.window_ms / 1000.0));
  kv("hop_s", text::sig6(window.hop_ms / 1000.0));
  kv("pnn_x_ms", text::sig6(window.pnn_x_ms));
  kv("strict_pnn", window.pnn_mode == PnnThreshold::Strict ? "true" : "false");
  kv("clusters", std::to_string(fcm.n_clusters));
  kv("fuzzifier", text::sig6(fcm.fuzzifier));
  kv("max_iter", std::to_string(fcm.max_iter));
  kv("tol", text::sig6(fcm.tol));
  kv("seed", std::to_string(fcm.seed));
  kv("feature", std::string(feature_name(sonify_feature)));
  kv("sample_rate_hz", std::to_string(sonification.sample_rate_hz));
  kv("seg_dur_s", text::sig6(sonification.seg_dur_s));
  kv("f0_min_hz", text::sig6(sonification.f0_min_hz));
  kv("f0_max_hz", text::sig6(sonification.f0_max_hz));
  kv("glide_ms", text::sig6(sonification.glide_ms));
  kv("control_block", std::to_string(sonification.block_size));
  kv("peak_level", text::sig6(sonification.peak_level));
  kv("vowel_table", vowel_table ? "\"" + vowel_table->generic_string() + "\"" : "\"(built-in)\"");
  for (const auto& [name, v] : {std::pair{"a", &sonification.vowel_a}, {"i", &sonification.vowel_i}}) {
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& f = v->formants[k];
      kv(std::string("# vowel_") + name + ".f" + std::to_string(k + 1),
         "[" + text::sig6(f.center_hz) + ", " + text::sig6(f.bandwidth_hz) + ", " +
             text::sig6(f.gain_db) + "]");
    }
  }
  kv("dft_size", std::to_string(spectrogram.dft_size));
  kv("hop", std::to_string(spectrogram.hop));
  kv("floor_db", text::sig6(spectrogram.floor_db));
  kv("width", std::to_string(image.width));
  kv("height", std::to_string(image.height));
  return out;
}

void apply_config_text(PipelineConfig& config, std::string_view contents, const fs::path& base_dir,
                       std::string_view source) {
  std::optional<RrUnit> default_unit;
  std::vector<std::pair<KeyValueEntry, bool>> records;  // entry, unit given
  for (const auto& e : parse_key_values(contents, source)) {
    const auto& k = e.key;
    if (!e.section.empty()) {
      throw ConfigError(std::string(source) + ":" + std::to_string(e.line) +
                        ": sections are not used in pipeline configs");
    }
    if (k == "record") {
      const auto items = kv_list(e);
      if (items.empty() || items.size() > 3) {
        throw ConfigError(std::string(source) + ":" + std::to_string(e.line) +
                          ": record = [\"path\", \"unit\", \"label\"]");
      }
      records.emplace_back(e, items.size() >= 2);
    } else if (k == "unit") {
      default_unit = parse_rr_unit(kv_string(e));
    } else if (k == "output_dir") {
      config.output_dir = base_dir / kv_string(e);
    } else if (k == "rr_min_ms") {
      config.rr_min_ms = kv_number(e);
    } else if (k == "rr_max_ms") {
      config.rr_max_ms = kv_number(e);
    } else if (k == "window_s") {
      config.window.window_ms = kv_number(e) * 1000.0;
    } else if (k == "hop_s") {
      config.window.hop_ms = kv_number(e) * 1000.0;
    } else if (k == "pnn_x_ms") {
      config.window.pnn_x_ms = kv_number(e);
    } else if (k == "strict_pnn") {
      config.window.pnn_mode = kv_bool(e) ? PnnThreshold::Strict : PnnThreshold::Inclusive;
    } else if (k == "clusters") {
      config.fcm.n_clusters = to_count(e);
    } else if (k == "fuzzifier") {
      config.fcm.fuzzifier = kv_number(e);
    } else if (k == "max_iter") {
      config.fcm.max_iter = to_count(e);
    } else if (k == "tol") {
      config.fcm.tol = kv_number(e);
    } else if (k == "seed") {
      config.fcm.seed = to_count(e);
    } else if (k == "feature") {
      config.sonify_feature = parse_feature(kv_string(e));
    } else if (k == "sample_rate_hz") {
      config.sonification.sample_rate_hz = static_cast<int>(to_count(e));
    } else if (k == "seg_dur_s") {
      config.sonification.seg_dur_s = kv_number(e);
    } else if (k == "f0_min_hz") {
      config.sonification.f0_min_hz = kv_number(e);
    } else if (k == "f0_max_hz") {
      config.sonification.f0_max_hz = kv_number(e);
    } else if (k == "glide_ms") {
      config.sonification.glide_ms = kv_number(e);
    } else if (k == "control_block") {
      config.sonification.block_size = to_count(e);
    } else if (k == "peak_level") {
      config.sonification.peak_level = kv_number(e);
    } else if (k == "vowel_table") {
      const auto path = base_dir / kv_string(e);
      const auto table = read_vowel_table(path);
      config.sonification.vowel_a = table.a;
      config.sonification.vowel_i = table.i;
      config.vowel_table = path;
    } else if (k == "dft_size") {
      config.spectrogram.dft_size = to_count(e);
    } else if (k == "hop") {
      config.spectrogram.hop = to_count(e);
    } else if (k == "floor_db") {
      config.spectrogram.floor_db = kv_number(e);
    } else if (k == "width") {
      config.image.width = to_count(e);
    } else if (k == "height") {
      config.image.height = to_count(e);
    } else {
      throw ConfigError(std::string(source) + ":" + std::to_string(e.line) + ": unknown key '" + k +
                        "'");
    }
  }
  if (!records.empty()) config.records.clear();
  for (const auto& [e, has_unit] : records) {
    const auto items = kv_list(e);
    RecordSpec r;
    r.path = base_dir / items[0];
    r.unit = has_unit ? parse_rr_unit(items[1]) : default_unit.value_or(RrUnit::Milliseconds);
    r.label = items.size() == 3 ? items[2] : fs::path(items[0]).stem().string();
    config.records.push_back(std::move(r));
  }
}

PipelineConfig load_pipeline_config(const fs::path& path, PipelineConfig base) {
  apply_config_text(base, text::read_file(path), path.parent_path(), path.string());
  return base;
}

std::string file_stem_for(std::string_view label) {
  std::string out;
  for (char c : label) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '-' || c == '_' || c == '.';
    out += keep ? c : '_';
  }
  return out.empty() ? "record" : out;
}

ClusterOutputs cluster_features(const FeatureMatrix& features, const FcmConfig& config) {
  ClusterOutputs out;
  const auto names = features.column_names();
  out.column_names.assign(names.begin(), names.end());
  config.validate(features.size());

  Matrix data(static_cast<Eigen::Index>(features.size()), static_cast<Eigen::Index>(kFeatureCount));
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto v = features.rows[i].values();
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = v[c];
    }
    out.point_labels.push_back(features.rows[i].record_label);
  }
  out.zscore = zscore(data, out.column_names);
  out.fcm = fcm(out.zscore.normalized, config);
  return out;
}

std::vector<std::string> write_cluster_outputs(const ClusterOutputs& outputs, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<std::string> files;
  const auto put = [&](const std::string& name, const std::string& contents) {
    text::write_file(dir / name, contents);
    files.push_back(name);
  };
  put("centers.csv", format_centers_csv(outputs.fcm.centers, outputs.column_names));
  put("partition.csv", format_partition_csv(outputs.fcm.partition, outputs.point_labels));
  for (const auto& p :
       pairwise_plot_data(outputs.zscore.normalized, outputs.fcm.partition, outputs.column_names)) {
    put(p.file_stem() + ".csv", p.to_csv());
  }
  return files;
}

AudioBuffer sonify_record(const FeatureMatrix& features, Feature feature, const std::string& label,
                          const SonificationConfig& config) {
  const auto series = features.series(feature, label);
  if (series.empty()) throw DataError("no feature rows for record '" + label + "'");
  return render_sonification(series, config);
}

void wav_to_png(const fs::path& wav, const fs::path& png, const SpectrogramParams& params,
                ImageSize size) {
  const auto audio = read_wav_buffer(wav);
  const auto spec = compute_spectrogram(audio, params);
  render_png(spec, png, size.height, size.width);
}

RunReport run_pipeline(const PipelineConfig& config) {
  run_stage("config", [&] { config.validate(); });
  const fs::path& dir = config.output_dir;
  run_stage("output", [&] {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
      throw IoError("cannot create output directory '" + dir.string() + "'");
    }
  });

  RunReport report;
  std::string records_text;

  // Features go through the CSV so the later stages see exactly what the
  // `features` subcommand would hand them.
  const auto features = run_stage("features", [&] {
    std::vector<FeatureMatrix> parts;
    for (const auto& r : config.records) {
      const auto raw = parse_rr_file(r.path, r.unit, r.label);
      const auto filtered = filter_artifacts(raw, config.rr_min_ms, config.rr_max_ms);
      parts.push_back(windowed_features(filtered.series, config.window));
      records_text += r.label + ": " + std::to_string(raw.size()) + " intervals, " +
                      std::to_string(filtered.removed) + " removed as artifacts, " +
                      std::to_string(parts.back().size()) + " windows\n";
    }
    FeatureMatrix all = concat(parts);
    write_features_csv(all, dir / "features.csv");
    return read_features_csv(dir / "features.csv");
  });
  report.files.push_back("features.csv");

  const auto clusters = run_stage("clustering", [&] { return cluster_features(features, config.fcm); });
  const auto cluster_files = run_stage("clustering", [&] { return write_cluster_outputs(clusters, dir); });
  report.files.insert(report.files.end(), cluster_files.begin(), cluster_files.end());
  report.iterations = clusters.fcm.iterations_run;
  report.final_objective = clusters.fcm.objective_trace.back();
  report.converged = clusters.fcm.converged;

  for (const auto& r : config.records) {
    const auto stem = file_stem_for(r.label);
    run_stage("sonification", [&] {
      const auto audio = sonify_record(features, config.sonify_feature, r.label, config.sonification);
      write_wav(audio, dir / (stem + ".wav"));
    });
    report.files.push_back(stem + ".wav");
    run_stage("spectrogram", [&] {
      wav_to_png(dir / (stem + ".wav"), dir / (stem + ".png"), config.spectrogram, config.image);
    });
    report.files.push_back(stem + ".png");
    report.files.push_back(stem + ".png.txt");
  }
  report.files.push_back("report.txt");

  std::string& t = report.text;
  t += "# hrvson pipeline report\n\n[settings]\n";
  t += config.describe();
  t += "\n[records]\n" + records_text;
  t += "\n[clustering]\n";
  t += "feature_rows = " + std::to_string(features.size()) + "\n";
  t += "iterations = " + std::to_string(report.iterations) + "\n";
  t += "final_objective = " + text::sig6(report.final_objective) + "\n";
  t += std::string("converged = ") + (report.converged ? "true" : "false") + "\n";
  t += "\n[files]\n";
  for (const auto& f : report.files) t += f + "\n";
  run_stage("report", [&] { text::write_file(dir / "report.txt", t); });
  return report;
}

}  // namespace hrvson
