#include "framescore/psych.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "framescore/error.hpp"

namespace framescore {

double mean(std::span<const double> x) {
    if (x.empty()) throw DomainError("mean of an empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) throw DomainError("sample variance needs at least two values");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double sample_stdev(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

double cronbach_alpha(const Eigen::MatrixXd& scores) {
    const auto n = scores.rows();
    const auto k = scores.cols();
    if (k < 2) throw DomainError("Cronbach's alpha needs at least two items");
    if (n < 2) throw DomainError("Cronbach's alpha needs at least two cases");
    if (scores.hasNaN()) throw ValidationError("Cronbach's alpha input has missing cells; drop incomplete cases first");
    if (!scores.allFinite()) throw ValidationError("Cronbach's alpha input has non-finite cells");

    auto column_variance = [&](const Eigen::VectorXd& c) {
        std::vector<double> v(c.data(), c.data() + c.size());
        return sample_variance(v);
    };
    const Eigen::VectorXd totals = scores.rowwise().sum();
    const double total_var = column_variance(totals);
    if (total_var == 0.0) throw DegenerateInputError("Cronbach's alpha: total score has zero variance");

    // Identical items: the ratio below is 1/k only up to rounding.
    bool identical = true;
    for (Eigen::Index j = 1; j < k && identical; ++j) identical = scores.col(j) == scores.col(0);
    if (identical) return 1.0;

    double item_var = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) item_var += column_variance(scores.col(j));
    const double kk = static_cast<double>(k);
    return kk / (kk - 1.0) * (1.0 - item_var / total_var);
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0) || !(b > 0)) throw DomainError("incomplete beta needs positive shape parameters");
    if (x < 0.0 || x > 1.0 || std::isnan(x)) throw DomainError("incomplete beta argument outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);

    // Continued fraction converges fast for x < (a+1)/(a+b+2); otherwise
    // use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
    auto continued_fraction = [](double a, double b, double x) {
        constexpr double tiny = 1e-300;
        constexpr double eps = 1e-16;
        const double qab = a + b;
        const double qap = a + 1.0;
        const double qam = a - 1.0;
        double c = 1.0;
        double d = 1.0 - qab * x / qap;
        if (std::fabs(d) < tiny) d = tiny;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= 10000; ++m) {
            const double m2 = 2.0 * m;
            double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
            d = 1.0 + aa * d;
            if (std::fabs(d) < tiny) d = tiny;
            c = 1.0 + aa / c;
            if (std::fabs(c) < tiny) c = tiny;
            d = 1.0 / d;
            h *= d * c;
            aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
            d = 1.0 + aa * d;
            if (std::fabs(d) < tiny) d = tiny;
            c = 1.0 + aa / c;
            if (std::fabs(c) < tiny) c = tiny;
            d = 1.0 / d;
            const double delta = d * c;
            h *= delta;
            if (std::fabs(delta - 1.0) < eps) return h;
        }
        return h;
    };

    if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * continued_fraction(a, b, x) / a;
    return 1.0 - std::exp(log_front) * continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0)) throw DomainError("t distribution needs positive degrees of freedom");
    if (std::isnan(t)) throw DomainError("t statistic is NaN");
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) return 1.0;
    const double x = df / (df + t * t);
    return std::clamp(regularized_incomplete_beta(df / 2.0, 0.5, x), 0.0, 1.0);
}

double student_t_cdf(double t, double df) {
    if (std::isinf(t)) {
        if (!(df > 0)) throw DomainError("t distribution needs positive degrees of freedom");
        return t > 0 ? 1.0 : 0.0;
    }
    const double tail = 0.5 * student_t_two_sided_p(t, df);
    return t > 0 ? 1.0 - tail : tail;
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("pearson: inputs differ in length");
    if (x.size() < 3) throw DomainError("pearson needs at least three pairs");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateInputError("pearson: constant input");
    const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double df = static_cast<double>(x.size() - 2);
    if (std::fabs(r) == 1.0) return {r, 0.0};
    const double t = r * std::sqrt(df / (1.0 - r * r));
    return {r, student_t_two_sided_p(t, df)};
}

double critical_pearson_r(std::size_t n, double alpha) {
    if (n < 3) throw DomainError("critical r needs n >= 3");
    if (!(alpha > 0 && alpha < 1)) throw DomainError("significance level must lie in (0, 1)");
    const double df = static_cast<double>(n - 2);
    // p(r) = two-sided p of t = r sqrt(df / (1 - r^2)) is decreasing in r.
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double t = mid * std::sqrt(df / (1.0 - mid * mid));
        if (student_t_two_sided_p(t, df) > alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

struct Pooled {
    double mean_x;
    double mean_y;
    double variance;
    std::size_t df;
};

Pooled pooled(std::span<const double> x, std::span<const double> y) {
    if (x.size() < 2 || y.size() < 2) throw DomainError("two-sample statistics need at least two values per group");
    const double mx = mean(x);
    const double my = mean(y);
    // Per-group sums keep the result exactly symmetric under swapping groups.
    double ssx = 0.0, ssy = 0.0;
    for (double v : x) ssx += (v - mx) * (v - mx);
    for (double v : y) ssy += (v - my) * (v - my);
    const std::size_t df = x.size() + y.size() - 2;
    return {mx, my, (ssx + ssy) / static_cast<double>(df), df};
}

}  // namespace

TTest two_sample_t(std::span<const double> x, std::span<const double> y) {
    const Pooled p = pooled(x, y);
    const double diff = p.mean_x - p.mean_y;
    if (p.variance == 0.0) {
        if (diff == 0.0) return {0.0, p.df, 1.0};
        throw DegenerateInputError("two-sample t: zero pooled variance with unequal means");
    }
    const double se = std::sqrt(p.variance * (1.0 / static_cast<double>(x.size()) + 1.0 / static_cast<double>(y.size())));
    const double t = diff / se;
    return {t, p.df, student_t_two_sided_p(t, static_cast<double>(p.df))};
}

double cohens_d_groups(std::span<const double> x, std::span<const double> y) {
    const Pooled p = pooled(x, y);
    if (p.variance == 0.0) throw DegenerateInputError("Cohen's d: zero pooled standard deviation");
    return (p.mean_x - p.mean_y) / std::sqrt(p.variance);
}

MtmmMatrix build_mtmm(const std::vector<ScoreMatrix>& matrices) {
    if (matrices.empty()) throw ValidationError("MTMM needs at least one score matrix");
    const auto& entities = matrices.front().entities();
    for (const auto& m : matrices) {
        if (m.entities() != entities) throw ValidationError("MTMM score matrices must share one entity list and order");
        if (m.replications() < 2)
            throw ValidationError("MTMM needs at least two replications for " + m.method() + "/" + m.trait());
    }
    const std::size_t n = matrices.size();
    MtmmMatrix out;
    out.cells = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    out.cases = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    out.n_cases = entities.size();
    std::vector<std::vector<std::optional<double>>> means;
    for (const auto& m : matrices) {
        out.labels.push_back({m.method(), m.trait()});
        means.push_back(m.means());
    }

    for (std::size_t a = 0; a < n; ++a) {
        const auto& m = matrices[a];
        std::vector<std::size_t> complete;
        for (std::size_t e = 0; e < entities.size(); ++e)
            if (m.present(e) == m.replications()) complete.push_back(e);
        if (complete.size() < 3)
            throw ValidationError("MTMM reliability for " + out.labels[a].text() + " has fewer than 3 complete entities");
        Eigen::MatrixXd grid(static_cast<Eigen::Index>(complete.size()), static_cast<Eigen::Index>(m.replications()));
        for (std::size_t i = 0; i < complete.size(); ++i)
            for (std::size_t r = 0; r < m.replications(); ++r)
                grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) = *m.at(complete[i], r);
        const auto ai = static_cast<Eigen::Index>(a);
        out.cells(ai, ai) = cronbach_alpha(grid);
        out.cases(ai, ai) = static_cast<int>(complete.size());

        for (std::size_t b = 0; b < a; ++b) {
            std::vector<double> x;
            std::vector<double> y;
            for (std::size_t e = 0; e < entities.size(); ++e) {
                if (means[a][e] && means[b][e]) {
                    x.push_back(*means[a][e]);
                    y.push_back(*means[b][e]);
                }
            }
            if (x.size() < 3)
                throw ValidationError("MTMM cell " + out.labels[a].text() + " x " + out.labels[b].text() +
                                      " has fewer than 3 shared entities");
            const double r = pearson(x, y).r;
            const auto bi = static_cast<Eigen::Index>(b);
            out.cells(ai, bi) = out.cells(bi, ai) = r;
            out.cases(ai, bi) = out.cases(bi, ai) = static_cast<int>(x.size());
        }
    }
    return out;
}

std::string format_real(double x) {
    if (std::isnan(x)) return "NA";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

void write_mtmm_csv(const MtmmMatrix& mtmm, std::ostream& out, bool lower_triangle) {
    out << "# n_cases=" << mtmm.n_cases << ",diagonal=" << mtmm.diagonal_kind << '\n';
    out << "label";
    for (const auto& l : mtmm.labels) out << ',' << l.text();
    out << '\n';
    for (std::size_t i = 0; i < mtmm.size(); ++i) {
        out << mtmm.labels[i].text();
        for (std::size_t j = 0; j < mtmm.size(); ++j) {
            out << ',';
            if (!lower_triangle || j <= i)
                out << format_real(mtmm.cells(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
        out << '\n';
    }
}

}  // namespace framescore
