#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "framescore/vecstore.hpp"

namespace framescore {

struct TsneOptions {
    double perplexity = 30.0;
    std::size_t iterations = 1000;
    double learning_rate = 200.0;
    double early_exaggeration = 12.0;
    /// Exaggeration and the low momentum (0.5) apply before this iteration;
    /// momentum is 0.8 afterwards.
    std::size_t exaggeration_iterations = 250;
    std::uint64_t seed = 1;
};

struct Projection2D {
    std::vector<std::string> labels;
    Matrix coordinates;  // n × 2
    double kl_initial = 0.0;
    double kl_final = 0.0;
};

/// Perplexity-calibrated conditional affinities p_{j|i} (rows sum to 1,
/// zero diagonal) and the Gaussian precision found for each row.
struct Affinities {
    Matrix conditional;
    std::vector<double> precision;
    /// exp(entropy) of each row, for checking the calibration.
    std::vector<double> perplexity;
};

/// Binary-searches each row's Gaussian precision until the row entropy is
/// within 1e-5 nats of log(perplexity).
Affinities calibrate_affinities(const Matrix& vectors, double perplexity);

/// Exact t-SNE into two dimensions. Throws DomainError when
/// n < 3·perplexity + 1 or d < 2, ValidationError on non-finite input or a
/// label count that differs from the row count.
Projection2D tsne(const Matrix& vectors, std::vector<std::string> labels, const TsneOptions& options = {});

/// Mean silhouette coefficient of a labelled point set (Euclidean).
double silhouette_score(const Matrix& points, const std::vector<int>& labels);

/// Writes `<stem>.csv` (`word,x,y,group`) and `<stem>.svg` with one marker
/// per point, styled by group. Words without a group get "default".
void export_projection(const Projection2D& projection, const std::map<std::string, std::string>& groups,
                       const std::filesystem::path& stem);

}  // namespace framescore
