#include "framescore/planar.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "framescore/error.hpp"
#include "framescore/psych.hpp"
#include "framescore/rng.hpp"
#include "svg.hpp"

namespace framescore {

namespace {

Matrix squared_distances(const Matrix& x) {
    const Eigen::VectorXd sq = x.rowwise().squaredNorm();
    Matrix d = (-2.0 * x * x.transpose()).colwise() + sq;
    d.rowwise() += sq.transpose();
    d = d.cwiseMax(0.0);
    d.diagonal().setZero();
    return d;
}

// KL(P || Q) for the Student-t kernel at coordinates y.
double kl_divergence(const Matrix& p, const Matrix& y) {
    const Matrix d = squared_distances(y);
    Matrix num = (1.0 + d.array()).inverse().matrix();
    num.diagonal().setZero();
    const double z = num.sum();
    double kl = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            if (i == j || p(i, j) <= 0.0) continue;
            const double q = std::max(num(i, j) / z, 1e-300);
            kl += p(i, j) * std::log(p(i, j) / q);
        }
    return kl;
}

}  // namespace

Affinities calibrate_affinities(const Matrix& vectors, double perplexity) {
    const auto n = vectors.rows();
    const Matrix dist = squared_distances(vectors);
    const double target = std::log(perplexity);
    Affinities out;
    out.conditional = Matrix::Zero(n, n);
    out.precision.assign(static_cast<std::size_t>(n), 1.0);
    out.perplexity.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> row(static_cast<std::size_t>(n));

    for (Eigen::Index i = 0; i < n; ++i) {
        // Shift by the nearest distance so exp() cannot underflow to all zeros.
        double dmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) dmin = std::min(dmin, dist(i, j));

        double beta = 1.0;
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        double entropy = 0.0;
        auto evaluate = [&] {
            double sum = 0.0;
            double weighted = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto u = static_cast<std::size_t>(j);
                if (j == i) {
                    row[u] = 0.0;
                    continue;
                }
                const double shifted = dist(i, j) - dmin;
                row[u] = std::exp(-beta * shifted);
                sum += row[u];
                weighted += shifted * row[u];
            }
            entropy = std::log(sum) + beta * weighted / sum;
            for (auto& v : row) v /= sum;
        };
        evaluate();
        for (int it = 0; it < 200 && std::fabs(entropy - target) > 1e-5; ++it) {
            if (entropy > target) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
            } else {
                hi = beta;
                beta = 0.5 * (beta + lo);
            }
            evaluate();
        }
        for (Eigen::Index j = 0; j < n; ++j) out.conditional(i, j) = row[static_cast<std::size_t>(j)];
        out.precision[static_cast<std::size_t>(i)] = beta;
        out.perplexity[static_cast<std::size_t>(i)] = std::exp(entropy);
    }
    return out;
}

Projection2D tsne(const Matrix& vectors, std::vector<std::string> labels, const TsneOptions& options) {
    const auto n = vectors.rows();
    if (!(options.perplexity > 0)) throw DomainError("perplexity must be positive");
    const double min_n = 3.0 * options.perplexity + 1.0;
    if (static_cast<double>(n) < min_n)
        throw DomainError("t-SNE needs n >= 3*perplexity + 1 = " + format_real(min_n) + " points, got " +
                          std::to_string(n));
    if (vectors.cols() < 2) throw DomainError("t-SNE needs input dimension >= 2");
    if (!vectors.allFinite()) throw ValidationError("t-SNE input contains non-finite values");
    if (!labels.empty() && labels.size() != static_cast<std::size_t>(n))
        throw ValidationError("t-SNE label count differs from the number of vectors");

    const Affinities aff = calibrate_affinities(vectors, options.perplexity);
    Matrix p = aff.conditional + aff.conditional.transpose();
    p /= p.sum();
    p = p.cwiseMax(1e-12);
    p.diagonal().setZero();

    Rng rng(options.seed);
    Matrix y(n, 2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index c = 0; c < 2; ++c) y(i, c) = 1e-4 * rng.normal();

    Projection2D out;
    out.labels = std::move(labels);
    out.kl_initial = kl_divergence(p, y);

    Matrix velocity = Matrix::Zero(n, 2);
    Matrix gains = Matrix::Ones(n, 2);
    Matrix grad(n, 2);
    for (std::size_t it = 0; it < options.iterations; ++it) {
        const bool early = it < options.exaggeration_iterations;
        const double exaggeration = early ? options.early_exaggeration : 1.0;
        const double momentum = early ? 0.5 : 0.8;

        const Matrix d = squared_distances(y);
        Matrix num = (1.0 + d.array()).inverse().matrix();
        num.diagonal().setZero();
        const double z = num.sum();
        // dC/dy_i = 4 Σ_j (exaggeration p_ij - q_ij) num_ij (y_i - y_j)
        const Matrix w = ((exaggeration * p).array() - num.array() / z).matrix().cwiseProduct(num);
        const Eigen::VectorXd row_sum = w.rowwise().sum();
        grad = 4.0 * (row_sum.asDiagonal() * y - w * y);

        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index c = 0; c < 2; ++c) {
                const bool same_sign = (grad(i, c) > 0) == (velocity(i, c) > 0);
                gains(i, c) = same_sign ? std::max(gains(i, c) * 0.8, 0.01) : gains(i, c) + 0.2;
                velocity(i, c) = momentum * velocity(i, c) - options.learning_rate * gains(i, c) * grad(i, c);
            }
        y += velocity;
        y.rowwise() -= y.colwise().mean();
    }
    out.kl_final = kl_divergence(p, y);
    out.coordinates = std::move(y);
    return out;
}

double silhouette_score(const Matrix& points, const std::vector<int>& labels) {
    const auto n = points.rows();
    if (static_cast<std::size_t>(n) != labels.size()) throw ValidationError("silhouette: label count mismatch");
    if (n < 2) throw DomainError("silhouette needs at least two points");
    std::vector<int> clusters(labels);
    std::sort(clusters.begin(), clusters.end());
    clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
    if (clusters.size() < 2) throw DomainError("silhouette needs at least two clusters");

    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<double> sum(clusters.size(), 0.0);
        std::vector<std::size_t> count(clusters.size(), 0);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto k = static_cast<std::size_t>(
                std::lower_bound(clusters.begin(), clusters.end(), labels[static_cast<std::size_t>(j)]) - clusters.begin());
            sum[k] += (points.row(i) - points.row(j)).norm();
            ++count[k];
        }
        const auto own = static_cast<std::size_t>(
            std::lower_bound(clusters.begin(), clusters.end(), labels[static_cast<std::size_t>(i)]) - clusters.begin());
        if (count[own] == 0) continue;  // singleton cluster scores 0
        const double a = sum[own] / static_cast<double>(count[own]);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < clusters.size(); ++k)
            if (k != own && count[k] > 0) b = std::min(b, sum[k] / static_cast<double>(count[k]));
        const double denom = std::max(a, b);
        if (denom > 0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

void export_projection(const Projection2D& projection, const std::map<std::string, std::string>& groups,
                       const std::filesystem::path& stem) {
    const auto n = static_cast<std::size_t>(projection.coordinates.rows());
    std::vector<std::string> group_of(n, "default");
    std::vector<std::string> group_names;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string label = i < projection.labels.size() ? projection.labels[i] : std::to_string(i);
        if (const auto it = groups.find(label); it != groups.end()) group_of[i] = it->second;
        if (std::find(group_names.begin(), group_names.end(), group_of[i]) == group_names.end())
            group_names.push_back(group_of[i]);
    }

    auto path_with = [&](const char* ext) {
        auto p = stem;
        p += ext;
        return p;
    };
    const auto csv_path = path_with(".csv");
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw IoError("cannot write projection CSV '" + csv_path.string() + "'");
    csv << "word,x,y,group\n";
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        csv << (i < projection.labels.size() ? projection.labels[i] : std::to_string(i)) << ','
            << format_real(projection.coordinates(row, 0)) << ',' << format_real(projection.coordinates(row, 1)) << ','
            << group_of[i] << '\n';
    }
    if (!csv) throw IoError("write failed for '" + csv_path.string() + "'");

    const auto svg_path = path_with(".svg");
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) throw IoError("cannot write projection SVG '" + svg_path.string() + "'");
    constexpr int width = 720;
    constexpr int height = 600;
    constexpr double margin = 40;
    constexpr double legend = 140;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (n > 0) {
        xmin = projection.coordinates.col(0).minCoeff();
        xmax = projection.coordinates.col(0).maxCoeff();
        ymin = projection.coordinates.col(1).minCoeff();
        ymax = projection.coordinates.col(1).maxCoeff();
    }
    const double xspan = std::max(xmax - xmin, 1e-9);
    const double yspan = std::max(ymax - ymin, 1e-9);
    const double plot_w = width - 2 * margin - legend;
    const double plot_h = height - 2 * margin;

    auto marker = [](std::size_t style, double x, double y) {
        const std::string sx = svg::num(x);
        const std::string sy = svg::num(y);
        switch (style % 4) {
            case 0:  // circle
                return "M" + svg::num(x - 4) + "," + sy + " a4,4 0 1,0 8,0 a4,4 0 1,0 -8,0 Z";
            case 1:  // square
                return "M" + svg::num(x - 4) + "," + svg::num(y - 4) + " h8 v8 h-8 Z";
            case 2:  // triangle
                return "M" + sx + "," + svg::num(y - 5) + " L" + svg::num(x + 5) + "," + svg::num(y + 4) + " L" +
                       svg::num(x - 5) + "," + svg::num(y + 4) + " Z";
            default:  // diamond
                return "M" + sx + "," + svg::num(y - 5) + " L" + svg::num(x + 5) + "," + sy + " L" + sx + "," +
                       svg::num(y + 5) + " L" + svg::num(x - 5) + "," + sy + " Z";
        }
    };

    svg::open(out, width, height);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const double x = margin + plot_w * (projection.coordinates(row, 0) - xmin) / xspan;
        const double y = margin + plot_h * (ymax - projection.coordinates(row, 1)) / yspan;
        const auto g = static_cast<std::size_t>(
            std::find(group_names.begin(), group_names.end(), group_of[i]) - group_names.begin());
        const std::string label = i < projection.labels.size() ? projection.labels[i] : std::to_string(i);
        out << "<path class=\"marker\" d=\"" << marker(g, x, y) << "\" fill=\"" << svg::palette(g) << "\"><title>"
            << svg::escape(label) << "</title></path>\n";
        out << "<text x=\"" << svg::num(x + 6) << "\" y=\"" << svg::num(y - 4)
            << "\" font-family=\"sans-serif\" font-size=\"9\">" << svg::escape(label) << "</text>\n";
    }
    for (std::size_t g = 0; g < group_names.size(); ++g) {
        const double x = width - legend + 10;
        const double y = margin + 18.0 * static_cast<double>(g);
        out << "<path class=\"legend\" d=\"" << marker(g, x, y) << "\" fill=\"" << svg::palette(g) << "\"/>\n";
        out << "<text x=\"" << svg::num(x + 10) << "\" y=\"" << svg::num(y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << svg::escape(group_names[g]) << "</text>\n";
    }
    svg::close(out);
    if (!out) throw IoError("write failed for '" + svg_path.string() + "'");
}

}  // namespace framescore
