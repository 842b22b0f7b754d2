// hrvson: RR intervals -> HRV features -> fuzzy c-means -> vocal sonification
// -> spectrogram images.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hrvson/pipeline.hpp"
#include "hrvson/text.hpp"
#include "hrvson/wav.hpp"

namespace fs = std::filesystem;
using namespace hrvson;

namespace {

struct IngestOptions {
  std::string unit = "ms";
  double rr_min_ms = kDefaultRrMinMs;
  double rr_max_ms = kDefaultRrMaxMs;
};

void add_ingest_flags(CLI::App* app, IngestOptions& o) {
  app->add_option("--unit", o.unit, "Interval unit of the input files (s|ms)")
      ->check(CLI::IsMember({"s", "ms", "seconds", "milliseconds"}))
      ->capture_default_str();
  app->add_option("--rr-min-ms", o.rr_min_ms, "Shortest plausible interval")->capture_default_str();
  app->add_option("--rr-max-ms", o.rr_max_ms, "Longest plausible interval")->capture_default_str();
}

std::string label_for(const std::vector<std::string>& labels, std::size_t i, const fs::path& p) {
  return i < labels.size() ? labels[i] : p.stem().string();
}

int cmd_ingest(const std::string& input, const std::string& label_opt, const IngestOptions& o,
               const std::string& out_opt) {
  const fs::path in(input);
  const auto label = label_opt.empty() ? in.stem().string() : label_opt;
  const auto raw = parse_rr_file(in, parse_rr_unit(o.unit), label);
  const auto filtered = filter_artifacts(raw, o.rr_min_ms, o.rr_max_ms);
  const fs::path out = out_opt.empty() ? default_output_dir() / (file_stem_for(label) + ".rr.txt")
                                       : fs::path(out_opt);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_rr_file(filtered.series, out);
  std::cout << label << ": " << raw.size() << " intervals, " << filtered.removed
            << " removed, duration " << text::sig6(filtered.series.duration_ms() / 1000.0)
            << " s -> " << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HRV feature clustering and vocal sonification"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate and filter one RR file, write it in ms");
  std::string ingest_input, ingest_label, ingest_out;
  IngestOptions ingest_opts;
  ingest->add_option("input", ingest_input, "RR interval text file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--label", ingest_label, "Record label (default: file stem)");
  ingest->add_option("-o,--output", ingest_out, "Output file");
  add_ingest_flags(ingest, ingest_opts);

  // features
  auto* features = app.add_subcommand("features", "Windowed time-domain HRV features to CSV");
  std::vector<std::string> feat_inputs, feat_labels;
  std::string feat_out;
  IngestOptions feat_ingest;
  WindowParams window;
  double window_s = window.window_ms / 1000.0;
  double hop_s = window.hop_ms / 1000.0;
  bool strict_pnn = false;
  features->add_option("inputs", feat_inputs, "RR interval text files")->required()->check(CLI::ExistingFile);
  features->add_option("--label", feat_labels, "Record labels, one per input (default: file stems)");
  features->add_option("--window-s", window_s, "Window length in seconds")->capture_default_str();
  features->add_option("--hop-s", hop_s, "Window hop in seconds")->capture_default_str();
  features->add_option("--pnn-x-ms", window.pnn_x_ms, "pNNx threshold in ms")->capture_default_str();
  features->add_flag("--strict-pnn", strict_pnn, "Count only differences strictly above x");
  features->add_option("-o,--output", feat_out, "Output CSV (default: <outdir>/features.csv)");
  add_ingest_flags(features, feat_ingest);

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Z-score and fuzzy c-means over a features CSV");
  std::string cluster_input, cluster_out;
  FcmConfig fcm_config{.seed = 42};
  cluster->add_option("features", cluster_input, "Features CSV")->required()->check(CLI::ExistingFile);
  cluster->add_option("--clusters", fcm_config.n_clusters, "Number of clusters")->capture_default_str();
  cluster->add_option("--fuzzifier", fcm_config.fuzzifier, "Fuzzifier m (> 1)")->capture_default_str();
  cluster->add_option("--max-iter", fcm_config.max_iter, "Iteration cap")->capture_default_str();
  cluster->add_option("--tol", fcm_config.tol, "Minimum objective improvement")->capture_default_str();
  cluster->add_option("--seed", fcm_config.seed, "Partition initialization seed")->capture_default_str();
  cluster->add_option("-o,--output-dir", cluster_out, "Output directory");

  // sonify
  auto* sonify = app.add_subcommand("sonify", "Render one record's feature series to WAV");
  std::string sonify_input, sonify_label, sonify_out, sonify_feature = "avnn", vowel_table;
  SonificationConfig son;
  sonify->add_option("features", sonify_input, "Features CSV")->required()->check(CLI::ExistingFile);
  sonify->add_option("--label", sonify_label, "Record to render (required if the CSV holds several)");
  sonify->add_option("--feature", sonify_feature, "avnn, sdnn, rmssd or pnnx")->capture_default_str();
  sonify->add_option("--seg-dur", son.seg_dur_s, "Seconds per data point")->capture_default_str();
  sonify->add_option("--f0-min", son.f0_min_hz, "Lowest fundamental (Hz)")->capture_default_str();
  sonify->add_option("--f0-max", son.f0_max_hz, "Highest fundamental (Hz)")->capture_default_str();
  sonify->add_option("--glide-ms", son.glide_ms, "Control glide at segment boundaries")->capture_default_str();
  sonify->add_option("--vowel-table", vowel_table, "Formant table file")->check(CLI::ExistingFile);
  sonify->add_option("-o,--output", sonify_out, "Output WAV");

  // spectrogram
  auto* spectro = app.add_subcommand("spectrogram", "Render a WAV file as a spectrogram PNG");
  std::string spectro_input, spectro_out;
  SpectrogramParams sp;
  ImageSize image;
  spectro->add_option("input", spectro_input, "Mono 16-bit WAV")->required()->check(CLI::ExistingFile);
  spectro->add_option("-o,--output", spectro_out, "Output PNG (default: input with .png)");
  spectro->add_option("--dft", sp.dft_size, "DFT size (power of two)")->capture_default_str();
  spectro->add_option("--hop", sp.hop, "Frame hop in samples")->capture_default_str();
  spectro->add_option("--floor-db", sp.floor_db, "Magnitude floor in dBFS")->capture_default_str();
  spectro->add_option("--width", image.width, "Image width in pixels")->capture_default_str();
  spectro->add_option("--height", image.height, "Image height in pixels")->capture_default_str();

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage and write the full inventory");
  std::string config_path, pipe_out, pipe_unit;
  std::vector<std::string> pipe_inputs;
  std::optional<std::size_t> o_clusters, o_max_iter, o_dft, o_hop;
  std::optional<double> o_fuzzifier, o_tol, o_seg, o_f0_min, o_f0_max, o_window, o_hop_s, o_pnn;
  std::optional<std::uint64_t> o_seed;
  std::optional<std::string> o_feature;
  pipeline->add_option("--config", config_path, "Pipeline config file")->check(CLI::ExistingFile);
  pipeline->add_option("--input", pipe_inputs, "RR files (replace the configured records)")
      ->check(CLI::ExistingFile);
  pipeline->add_option("--unit", pipe_unit, "Unit for --input files (s|ms)");
  pipeline->add_option("-o,--output-dir", pipe_out, "Output directory");
  pipeline->add_option("--clusters", o_clusters, "Number of clusters");
  pipeline->add_option("--fuzzifier", o_fuzzifier, "Fuzzifier m");
  pipeline->add_option("--max-iter", o_max_iter, "Iteration cap");
  pipeline->add_option("--tol", o_tol, "Minimum objective improvement");
  pipeline->add_option("--seed", o_seed, "Partition initialization seed");
  pipeline->add_option("--window-s", o_window, "Window length in seconds");
  pipeline->add_option("--hop-s", o_hop_s, "Window hop in seconds");
  pipeline->add_option("--pnn-x-ms", o_pnn, "pNNx threshold in ms");
  pipeline->add_option("--feature", o_feature, "Feature to sonify");
  pipeline->add_option("--seg-dur", o_seg, "Seconds per data point");
  pipeline->add_option("--f0-min", o_f0_min, "Lowest fundamental (Hz)");
  pipeline->add_option("--f0-max", o_f0_max, "Highest fundamental (Hz)");
  pipeline->add_option("--dft", o_dft, "DFT size");
  pipeline->add_option("--hop", o_hop, "Spectrogram hop in samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorKind::Config);
  }

  try {
    if (*ingest) return cmd_ingest(ingest_input, ingest_label, ingest_opts, ingest_out);

    if (*features) {
      window.window_ms = window_s * 1000.0;
      window.hop_ms = hop_s * 1000.0;
      window.pnn_mode = strict_pnn ? PnnThreshold::Strict : PnnThreshold::Inclusive;
      window.validate();
      const auto unit = parse_rr_unit(feat_ingest.unit);
      std::vector<FeatureMatrix> parts;
      for (std::size_t i = 0; i < feat_inputs.size(); ++i) {
        const fs::path p(feat_inputs[i]);
        const auto raw = parse_rr_file(p, unit, label_for(feat_labels, i, p));
        const auto filtered = filter_artifacts(raw, feat_ingest.rr_min_ms, feat_ingest.rr_max_ms);
        parts.push_back(windowed_features(filtered.series, window));
      }
      const fs::path out = feat_out.empty() ? default_output_dir() / "features.csv" : fs::path(feat_out);
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
      const auto all = concat(parts);
      write_features_csv(all, out);
      std::cout << all.size() << " feature rows -> " << out.string() << "\n";
      return 0;
    }

    if (*cluster) {
      const auto m = read_features_csv(cluster_input);
      const auto result = run_stage("clustering", [&] { return cluster_features(m, fcm_config); });
      const fs::path dir = cluster_out.empty() ? default_output_dir() : fs::path(cluster_out);
      for (const auto& f : write_cluster_outputs(result, dir)) std::cout << (dir / f).string() << "\n";
      std::cout << "iterations " << result.fcm.iterations_run << ", final objective "
                << text::sig6(result.fcm.objective_trace.back()) << ", converged "
                << (result.fcm.converged ? "yes" : "no") << "\n";
      return 0;
    }

    if (*sonify) {
      const auto m = read_features_csv(sonify_input);
      if (!vowel_table.empty()) {
        const auto table = read_vowel_table(vowel_table);
        son.vowel_a = table.a;
        son.vowel_i = table.i;
      }
      std::string label = sonify_label;
      if (label.empty()) {
        const auto labels = m.labels();
        if (labels.size() != 1) {
          throw ConfigError("features CSV holds " + std::to_string(labels.size()) +
                            " records; pick one with --label");
        }
        label = labels.front();
      }
      const auto audio = sonify_record(m, parse_feature(sonify_feature), label, son);
      const fs::path out = sonify_out.empty() ? default_output_dir() / (file_stem_for(label) + ".wav")
                                              : fs::path(sonify_out);
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
      write_wav(audio, out);
      std::cout << text::sig6(audio.duration_s()) << " s -> " << out.string() << "\n";
      return 0;
    }

    if (*spectro) {
      const fs::path in(spectro_input);
      const fs::path out = spectro_out.empty() ? fs::path(in).replace_extension(".png") : fs::path(spectro_out);
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
      wav_to_png(in, out, sp, image);
      std::cout << out.string() << "\n";
      return 0;
    }

    if (*pipeline) {
      PipelineConfig cfg;
      if (!config_path.empty()) cfg = load_pipeline_config(config_path);
      if (!pipe_inputs.empty()) {
        const auto unit = pipe_unit.empty() ? RrUnit::Milliseconds : parse_rr_unit(pipe_unit);
        cfg.records.clear();
        for (const auto& p : pipe_inputs) cfg.records.push_back({p, unit, fs::path(p).stem().string()});
      }
      if (!pipe_out.empty()) cfg.output_dir = pipe_out;
      if (o_clusters) cfg.fcm.n_clusters = *o_clusters;
      if (o_fuzzifier) cfg.fcm.fuzzifier = *o_fuzzifier;
      if (o_max_iter) cfg.fcm.max_iter = *o_max_iter;
      if (o_tol) cfg.fcm.tol = *o_tol;
      if (o_seed) cfg.fcm.seed = *o_seed;
      if (o_window) cfg.window.window_ms = *o_window * 1000.0;
      if (o_hop_s) cfg.window.hop_ms = *o_hop_s * 1000.0;
      if (o_pnn) cfg.window.pnn_x_ms = *o_pnn;
      if (o_feature) cfg.sonify_feature = parse_feature(*o_feature);
      if (o_seg) cfg.sonification.seg_dur_s = *o_seg;
      if (o_f0_min) cfg.sonification.f0_min_hz = *o_f0_min;
      if (o_f0_max) cfg.sonification.f0_max_hz = *o_f0_max;
      if (o_dft) cfg.spectrogram.dft_size = *o_dft;
      if (o_hop) cfg.spectrogram.hop = *o_hop;
      const auto report = run_pipeline(cfg);
      std::cout << report.text;
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Io);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
