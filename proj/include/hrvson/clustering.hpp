#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hrvson {

// Data matrices are points x features (one row per point). Partition
// matrices are clusters x points; every column sums to one.
using Matrix = Eigen::MatrixXd;

struct ColumnStats {
  std::string name;
  double mean = 0.0;
  double stddev = 0.0;  // sample (N-1)
};

struct ZScore {
  Matrix normalized;
  std::vector<ColumnStats> stats;

  // Maps normalized rows back to the original units.
  Matrix inverse(const Matrix& normalized_rows) const;
};

// Column-wise (x - mean) / sample_std. Throws DataError naming the column if
// its variance is zero.
ZScore zscore(const Matrix& data, const std::vector<std::string>& column_names = {});

struct FcmConfig {
  std::size_t n_clusters = 3;
  double fuzzifier = 2.0;
  std::size_t max_iter = 100;
  // Stop once the objective improves by less than this (absolute). Zero
  // disables the early stop so exactly max_iter iterations run.
  double tol = 1e-5;
  std::uint64_t seed = 0;

  void validate() const;
  void validate(std::size_t n_points) const;
};

struct FcmResult {
  Matrix centers;    // clusters x features
  Matrix partition;  // clusters x points
  std::vector<double> objective_trace;
  std::size_t iterations_run = 0;
  bool converged = false;
};

// Memberships below this point-to-center distance are treated as coincident.
inline constexpr double kCoincidentDistance = 1e-12;

// Seeded uniform draws in (0, 1], each column normalized to sum 1.
Matrix init_partition(std::size_t n_clusters, std::size_t n_points, std::uint64_t seed);

// c_j = sum_i u_ij^m x_i / sum_i u_ij^m.
Matrix update_centers(const Matrix& data, const Matrix& partition, double m);

// u_ij = 1 / sum_k (d_ij / d_ik)^(2/(m-1)); a point sitting on one or more
// centers gets its membership split equally among them.
Matrix update_partition(const Matrix& data, const Matrix& centers, double m);

// J_m = sum_i sum_j u_ij^m ||x_i - c_j||^2.
double objective(const Matrix& data, const Matrix& centers, const Matrix& partition, double m);

// Alternating minimization from init_partition(config.seed), or from the
// supplied initial partition. Each iteration recomputes centers from the
// current partition, records J_m for that pair, then updates the partition.
FcmResult fcm(const Matrix& data, const FcmConfig& config,
              const std::optional<Matrix>& initial_partition = std::nullopt);

// Argmax membership per point; ties go to the lowest cluster index.
std::vector<std::size_t> hard_labels(const Matrix& partition);

struct PairPlot {
  std::size_t x_column = 0;
  std::size_t y_column = 0;
  std::string x_name;
  std::string y_name;
  Matrix points;  // n x 2, columns (x, y)
  std::vector<std::size_t> labels;

  std::string file_stem() const;  // e.g. "pairs_sdnn_vs_avnn"
  std::string to_csv() const;
};

// The six feature pairs in plotting order (SDNN,AVNN), (RMSSD,AVNN),
// (pNNx,AVNN), (RMSSD,SDNN), (pNNx,SDNN), (pNNx,RMSSD) where the first
// element is plotted on y against the second on x.
std::vector<PairPlot> pairwise_plot_data(const Matrix& data, const Matrix& partition,
                                         const std::vector<std::string>& column_names);

// Rows = clusters, one column per feature.
std::string format_centers_csv(const Matrix& centers, const std::vector<std::string>& column_names);
// Rows = points, one membership column per cluster, plus the hard label.
std::string format_partition_csv(const Matrix& partition, const std::vector<std::string>& point_labels);

}  // namespace hrvson
