#include "hrvson/clustering.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "hrvson/error.hpp"
#include "hrvson/text.hpp"

namespace hrvson {

namespace {

void check_shapes(const Matrix& data, const Matrix& partition) {
  if (partition.cols() != data.rows()) {
    throw std::invalid_argument("partition has " + std::to_string(partition.cols()) +
                                " columns for " + std::to_string(data.rows()) + " points");
  }
}

void check_fuzzifier(double m) {
  if (!(m > 1.0) || !std::isfinite(m)) throw ConfigError("fuzzifier m must be > 1");
}

}  // namespace

Matrix ZScore::inverse(const Matrix& normalized_rows) const {
  Matrix out = normalized_rows;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const auto& s = stats.at(static_cast<std::size_t>(c));
    out.col(c) = (out.col(c).array() * s.stddev + s.mean).matrix();
  }
  return out;
}

ZScore zscore(const Matrix& data, const std::vector<std::string>& column_names) {
  if (data.rows() < 2) throw DataError("z-score normalization needs at least 2 rows");
  const auto n = static_cast<double>(data.rows());
  ZScore z;
  z.normalized.resize(data.rows(), data.cols());
  for (Eigen::Index c = 0; c < data.cols(); ++c) {
    ColumnStats s;
    s.name = static_cast<std::size_t>(c) < column_names.size()
                 ? column_names[static_cast<std::size_t>(c)]
                 : "column " + std::to_string(c);
    s.mean = data.col(c).sum() / n;
    const double ss = (data.col(c).array() - s.mean).square().sum();
    s.stddev = std::sqrt(ss / (n - 1.0));
    if (!(s.stddev > 0.0)) {
      throw DataError("zero variance in column '" + s.name + "'; cannot z-score normalize");
    }
    z.normalized.col(c) = ((data.col(c).array() - s.mean) / s.stddev).matrix();
    z.stats.push_back(std::move(s));
  }
  return z;
}

void FcmConfig::validate() const {
  if (n_clusters < 2) throw ConfigError("number of clusters must be >= 2");
  check_fuzzifier(fuzzifier);
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(tol >= 0.0) || !std::isfinite(tol)) throw ConfigError("tol must be finite and >= 0");
}

void FcmConfig::validate(std::size_t n_points) const {
  validate();
  if (n_clusters > n_points) {
    throw DataError("clustering: " + std::to_string(n_clusters) + " clusters requested but only " +
                    std::to_string(n_points) + " feature rows available");
  }
}

Matrix init_partition(std::size_t n_clusters, std::size_t n_points, std::uint64_t seed) {
  if (n_clusters == 0 || n_clusters > n_points) {
    throw DataError("init_partition needs 0 < clusters <= points");
  }
  // Explicit 53-bit mapping: std::uniform_real_distribution is not
  // reproducible across standard libraries.
  std::mt19937_64 rng(seed);
  Matrix u(static_cast<Eigen::Index>(n_clusters), static_cast<Eigen::Index>(n_points));
  for (Eigen::Index i = 0; i < u.cols(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < u.rows(); ++j) {
      const double draw = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
      u(j, i) = draw;
      sum += draw;
    }
    u.col(i) /= sum;
  }
  return u;
}

Matrix update_centers(const Matrix& data, const Matrix& partition, double m) {
  check_shapes(data, partition);
  check_fuzzifier(m);
  const Matrix w = partition.array().pow(m).matrix();
  Matrix centers = w * data;
  for (Eigen::Index j = 0; j < w.rows(); ++j) {
    const double total = w.row(j).sum();
    if (!(total > 0.0) || !std::isfinite(total)) {
      throw DataError("clustering: cluster " + std::to_string(j + 1) +
                      " has no membership weight (degenerate cluster)");
    }
    centers.row(j) /= total;
  }
  return centers;
}

Matrix update_partition(const Matrix& data, const Matrix& centers, double m) {
  if (centers.cols() != data.cols()) throw std::invalid_argument("center dimension mismatch");
  check_fuzzifier(m);
  const Eigen::Index nc = centers.rows();
  const double exponent = 1.0 / (m - 1.0);
  Matrix u(nc, data.rows());
  Eigen::VectorXd d2(nc);
  constexpr double coincident2 = kCoincidentDistance * kCoincidentDistance;

  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < nc; ++j) d2(j) = (data.row(i) - centers.row(j)).squaredNorm();

    const Eigen::Index hits = (d2.array() < coincident2).count();
    if (hits > 0) {
      for (Eigen::Index j = 0; j < nc; ++j) {
        u(j, i) = d2(j) < coincident2 ? 1.0 / static_cast<double>(hits) : 0.0;
      }
      continue;
    }
    // Ratios against the nearest center keep every term in (0, 1].
    const double nearest = d2.minCoeff();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < nc; ++j) {
      u(j, i) = std::pow(nearest / d2(j), exponent);
      sum += u(j, i);
    }
    u.col(i) /= sum;
  }
  return u;
}

double objective(const Matrix& data, const Matrix& centers, const Matrix& partition, double m) {
  check_shapes(data, partition);
  if (centers.rows() != partition.rows()) throw std::invalid_argument("cluster count mismatch");
  double j_m = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < centers.rows(); ++j) {
      j_m += std::pow(partition(j, i), m) * (data.row(i) - centers.row(j)).squaredNorm();
    }
  }
  return j_m;
}

FcmResult fcm(const Matrix& data, const FcmConfig& config,
              const std::optional<Matrix>& initial_partition) {
  config.validate(static_cast<std::size_t>(data.rows()));
  if (!data.allFinite()) throw DataError("clustering: data contains non-finite values");

  FcmResult result;
  Matrix u;
  if (initial_partition) {
    if (initial_partition->rows() != static_cast<Eigen::Index>(config.n_clusters)) {
      throw std::invalid_argument("initial partition has the wrong number of clusters");
    }
    check_shapes(data, *initial_partition);
    u = *initial_partition;
  } else {
    u = init_partition(config.n_clusters, static_cast<std::size_t>(data.rows()), config.seed);
  }

  const double m = config.fuzzifier;
  Matrix centers;
  for (std::size_t it = 1; it <= config.max_iter; ++it) {
    centers = update_centers(data, u, m);
    const double j_m = objective(data, centers, u, m);
    result.objective_trace.push_back(j_m);
    u = update_partition(data, centers, m);
    result.iterations_run = it;
    if (it > 1 && config.tol > 0.0) {
      const double prev = result.objective_trace[result.objective_trace.size() - 2];
      if (prev - j_m < config.tol) {
        result.converged = true;
        break;
      }
    }
  }
  result.centers = std::move(centers);
  result.partition = std::move(u);
  return result;
}

std::vector<std::size_t> hard_labels(const Matrix& partition) {
  std::vector<std::size_t> labels(static_cast<std::size_t>(partition.cols()), 0);
  for (Eigen::Index i = 0; i < partition.cols(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < partition.rows(); ++j) {
      if (partition(j, i) > partition(best, i)) best = j;
    }
    labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
  }
  return labels;
}

std::string PairPlot::file_stem() const { return "pairs_" + y_name + "_vs_" + x_name; }

std::string PairPlot::to_csv() const {
  std::string out = x_name + "," + y_name + ",cluster\n";
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out += text::sig6(points(i, 0)) + "," + text::sig6(points(i, 1)) + "," +
           std::to_string(labels[static_cast<std::size_t>(i)] + 1) + "\n";
  }
  return out;
}

std::vector<PairPlot> pairwise_plot_data(const Matrix& data, const Matrix& partition,
                                         const std::vector<std::string>& column_names) {
  if (data.cols() != 4) throw DataError("pairwise plot data needs exactly 4 feature columns");
  if (column_names.size() != 4) throw std::invalid_argument("need 4 column names");
  check_shapes(data, partition);
  const auto labels = hard_labels(partition);

  // (y, x) pairs over columns AVNN=0, SDNN=1, RMSSD=2, pNNx=3.
  constexpr std::size_t order[6][2] = {{1, 0}, {2, 0}, {3, 0}, {2, 1}, {3, 1}, {3, 2}};
  std::vector<PairPlot> plots;
  for (const auto& [y, x] : order) {
    PairPlot p;
    p.x_column = x;
    p.y_column = y;
    p.x_name = column_names[x];
    p.y_name = column_names[y];
    p.points.resize(data.rows(), 2);
    p.points.col(0) = data.col(static_cast<Eigen::Index>(x));
    p.points.col(1) = data.col(static_cast<Eigen::Index>(y));
    p.labels = labels;
    plots.push_back(std::move(p));
  }
  return plots;
}

std::string format_centers_csv(const Matrix& centers, const std::vector<std::string>& column_names) {
  std::string out = "cluster";
  for (const auto& n : column_names) out += "," + n;
  out += '\n';
  for (Eigen::Index j = 0; j < centers.rows(); ++j) {
    out += "Cluster" + std::to_string(j + 1);
    for (Eigen::Index c = 0; c < centers.cols(); ++c) out += "," + text::sig6(centers(j, c));
    out += '\n';
  }
  return out;
}

std::string format_partition_csv(const Matrix& partition,
                                 const std::vector<std::string>& point_labels) {
  const auto labels = hard_labels(partition);
  std::string out = "point,label";
  for (Eigen::Index j = 0; j < partition.rows(); ++j) out += ",u" + std::to_string(j + 1);
  out += ",cluster\n";
  for (Eigen::Index i = 0; i < partition.cols(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out += std::to_string(i) + "," + (idx < point_labels.size() ? point_labels[idx] : "");
    for (Eigen::Index j = 0; j < partition.rows(); ++j) out += "," + text::sig6(partition(j, i));
    out += "," + std::to_string(labels[idx] + 1) + "\n";
  }
  return out;
}

}  // namespace hrvson
