#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "framescore/score_matrix.hpp"

namespace framescore {

double mean(std::span<const double> x);
/// Sample variance (divisor n-1); needs n >= 2.
double sample_variance(std::span<const double> x);
double sample_stdev(std::span<const double> x);

/// Cronbach's alpha over a cases × items matrix:
///   k/(k-1) · (1 - Σ var(item) / var(row sum)).
/// NaN cells are a ValidationError (drop incomplete cases first); zero
/// variance of the row sums is a DegenerateInputError.
double cronbach_alpha(const Eigen::MatrixXd& scores);

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// Student t cumulative distribution with (real) df > 0.
double student_t_cdf(double t, double df);

/// P(|T| >= |t|) for T ~ t(df).
double student_t_two_sided_p(double t, double df);

struct Correlation {
    double r;
    double p;  // two-sided, t(n-2)
};

/// Pearson correlation with a two-sided p-value. Needs n >= 3 and
/// nonconstant inputs (DegenerateInputError otherwise). |r| = 1 gives p = 0.
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// Smallest |r| reaching two-sided significance `alpha` with n cases.
double critical_pearson_r(std::size_t n, double alpha = 0.05);

struct TTest {
    double t;
    std::size_t df;
    double p;
};

/// Student's pooled-variance two-sample t-test, df = nx + ny - 2.
TTest two_sample_t(std::span<const double> x, std::span<const double> y);

/// (mean x - mean y) / pooled sample standard deviation.
double cohens_d_groups(std::span<const double> x, std::span<const double> y);

struct MtmmLabel {
    std::string method;
    std::string trait;
    std::string text() const { return method + "/" + trait; }
};

/// Multi-trait multi-method matrix: Cronbach's alpha over replications on
/// the diagonal, Pearson r between per-entity replication means off it.
struct MtmmMatrix {
    std::vector<MtmmLabel> labels;
    Eigen::MatrixXd cells;
    /// Cases entering each cell (complete cases on the diagonal, pairwise
    /// present entities off it).
    Eigen::MatrixXi cases;
    std::size_t n_cases = 0;
    std::string diagonal_kind = "reliability";

    std::size_t size() const { return labels.size(); }
};

/// All matrices must list the same entities in the same order and have
/// k >= 2 replications. Throws ValidationError when a cell has fewer than
/// 3 usable entities.
MtmmMatrix build_mtmm(const std::vector<ScoreMatrix>& matrices);

/// CSV with a `# n_cases=N` metadata line, a header row of labels and the
/// full symmetric body (or the lower triangle only).
void write_mtmm_csv(const MtmmMatrix& mtmm, std::ostream& out, bool lower_triangle = false);

/// Shortest round-trip decimal for a double ("NA" when NaN).
std::string format_real(double x);

}  // namespace framescore
