// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failures.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "framescore/assoc.hpp"
#include "framescore/chrono.hpp"
#include "framescore/cli.hpp"
#include "framescore/error.hpp"
#include "framescore/lexicon.hpp"
#include "framescore/planar.hpp"
#include "framescore/psych.hpp"
#include "framescore/trainer.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

using namespace framescore;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome score_oracle() {
    const auto t0 = Clock::now();
    Rng rng(2024);
    double worst = 0.0;
    std::size_t done = 0;
    while (done < 1000) {
        const std::size_t d = 2 + rng.below(3);
        const std::size_t m = 1 + rng.below(5);
        const auto a = oracle::random_vec(rng, d);
        std::vector<oracle::Vec> x, y;
        for (std::size_t i = 0; i < m; ++i) x.push_back(oracle::random_vec(rng, d));
        for (std::size_t i = 0; i < m; ++i) y.push_back(oracle::random_vec(rng, d));
        double got;
        try {
            got = target_score(a, oracle::views(x), oracle::views(y));
        } catch (const DegenerateInputError&) {
            continue;
        }
        const double want = oracle::brute_target_score(a, x, y);
        worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
        ++done;
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-10 && secs < 5.0, "max error " + fmt("%.2e", worst) + ", " + fmt("%.2f s", secs)};
}

Outcome gradients() {
    const auto t0 = Clock::now();
    Rng rng(77);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto algorithm = i % 2 ? Algorithm::Sgns : Algorithm::Cbow;
        const std::size_t d = 2 + rng.below(9);
        std::vector<oracle::Vec> contexts, negatives;
        for (std::size_t c = 0, n = 1 + rng.below(5); c < n; ++c) contexts.push_back(oracle::random_vec(rng, d, 0.5));
        for (std::size_t k = 0, n = 1 + rng.below(5); k < n; ++k) negatives.push_back(oracle::random_vec(rng, d, 0.5));
        worst = std::max(worst,
                         oracle::gradient_relative_error(oracle::random_vec(rng, d, 0.5), contexts, negatives, algorithm));
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-4 && secs < 10.0, "max relative error " + fmt("%.2e", worst) + ", " + fmt("%.2f s", secs)};
}

Outcome lock_semantics() {
    bool ok = true;
    std::size_t tokens = 0;
    for (auto algorithm : {Algorithm::Cbow, Algorithm::Sgns}) {
        const auto background = synth::two_topic_corpus(11, 400);
        TrainConfig pre_cfg = synth::small_config(11);
        EmbeddingSpace pretrained = init_space(background.set, nullptr, pre_cfg);
        train(pretrained, background.set, pre_cfg);

        std::vector<std::string> entities;
        auto corpus = synth::graded_entity_corpus(12, 25, 10, entities);
        corpus.set.documents.resize(500);  // 500 x 20 tokens
        tokens = corpus.set.token_count();
        TrainConfig cfg = synth::small_config(13);
        cfg.algorithm = algorithm;
        cfg.lock_factor = 0.0;
        EmbeddingSpace space = init_space(corpus.set, &pretrained, cfg);
        train(space, corpus.set, cfg);
        for (const auto& w : pretrained.vocab().words()) {
            const auto a = pretrained.vector(w);
            const auto b = space.vector(w);
            ok = ok && std::equal(a.begin(), a.end(), b.begin());
        }
    }
    return {ok && tokens == 10000, std::to_string(tokens) + " tokens, pretrained rows bitwise unchanged: " + (ok ? "yes" : "no")};
}

Outcome training_signal() {
    const auto t0 = Clock::now();
    int hits = 0;
    double lowest = 1e9;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto c = synth::two_topic_corpus(seed);
        const auto cfg = synth::small_config(seed);
        EmbeddingSpace space = init_space(c.set, nullptr, cfg);
        train(space, c.set, cfg);
        const double margin = synth::topic_margin(c, space);
        lowest = std::min(lowest, margin);
        hits += margin >= 0.2;
    }
    const double secs = seconds_since(t0);
    return {hits >= 9 && secs < 60.0,
            std::to_string(hits) + "/10 seeds with margin >= 0.2 (lowest " + fmt("%.3f", lowest) + "), " +
                fmt("%.2f s", secs)};
}

Outcome statistics() {
    std::vector<std::string> failed;
    auto check = [&](const char* what, double got, double want, double tol = 1e-10) {
        if (!(std::abs(got - want) <= tol)) failed.push_back(what);
    };
    Eigen::MatrixXd cols(3, 2);
    cols << 1, 2, 2, 4, 3, 6;
    check("alpha", cronbach_alpha(cols), 8.0 / 9.0);
    Eigen::MatrixXd same(3, 2);
    same << 1, 1, 2, 2, 3, 3;
    check("alpha identical", cronbach_alpha(same), 1.0);

    const std::vector<double> x{1, 2, 3}, y{1, 3, 2}, z{2, 3, 4};
    const auto r = pearson(x, y);
    // t = r sqrt(1 / (1 - r^2)) on one degree of freedom, p = 1 - 2 atan(t) / pi.
    const double t1 = 0.5 / std::sqrt(0.75);
    check("pearson r", r.r, 0.5);
    check("pearson p", r.p, 1.0 - 2.0 * std::atan(t1) / M_PI);

    const auto t = two_sample_t(x, z);
    check("t", t.t, -1.0 / std::sqrt(2.0 / 3.0));
    if (t.df != 4) failed.push_back("df 4");
    // Closed form two-sided p for four degrees of freedom.
    const double tt = t.t * t.t;
    const double p4 = 1.0 - std::abs(t.t) * (6.0 + tt) / std::pow(4.0 + tt, 1.5);
    check("t p", t.p, p4);
    check("d", cohens_d_groups(x, z), -1.0);

    Rng rng(5);
    std::vector<double> g37, g21;
    for (int i = 0; i < 37; ++i) g37.push_back(rng.normal());
    for (int i = 0; i < 21; ++i) g21.push_back(rng.normal());
    if (two_sample_t(g37, g21).df != 56) failed.push_back("df 56");

    std::size_t within = 0;
    for (int i = 0; i < 20; ++i) {
        const double df = 1.0 + static_cast<double>(rng.below(40));
        const double at = rng.uniform(-4.0, 4.0);
        const auto [p, se] = oracle::monte_carlo_t_cdf(at, df, 200000, 1000 + static_cast<std::uint64_t>(i));
        within += std::abs(student_t_cdf(at, df) - p) <= 3.0 * se;
    }
    if (within != 20) failed.push_back("t cdf");
    std::string detail = "t CDF within 3 SE at " + std::to_string(within) + "/20 points";
    for (const auto& f : failed) detail += "; mismatch: " + f;
    return {failed.empty(), detail};
}

Outcome robustness() {
    const auto t0 = Clock::now();
    double planted_min = 1e9;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        std::vector<std::string> entities;
        const auto c = synth::graded_entity_corpus(seed, 30, 20, entities);
        const PolarLexicon lex{"planted", c.topic_a, c.topic_b};
        planted_min = std::min(planted_min,
                               robustness_alpha(c.set, nullptr, synth::small_config(seed), lex, entities, 10, 0.5));
    }
    std::vector<double> null_alpha;
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(100 + static_cast<std::uint64_t>(trial));
        const auto pos = synth::word_list("p", 2000), neg = synth::word_list("n", 2000);
        const auto entities = synth::word_list("@e", 100);
        Vocabulary vocab;
        for (const auto* list : {&pos, &neg, &entities})
            for (const auto& w : *list) vocab.add(w);
        EmbeddingSpace space(vocab, 20);
        for (Eigen::Index i = 0; i < space.input().rows(); ++i)
            for (Eigen::Index j = 0; j < space.input().cols(); ++j) space.input()(i, j) = rng.normal();
        null_alpha.push_back(robustness_alpha(space, {"null", pos, neg}, entities, 10, 0.01, 7 + static_cast<std::uint64_t>(trial)));
    }
    std::sort(null_alpha.begin(), null_alpha.end());
    const double median = 0.5 * (null_alpha[9] + null_alpha[10]);
    const double secs = seconds_since(t0);
    return {planted_min > 0.95 && std::abs(median) < 0.3 && secs < 60.0,
            "planted alpha min " + fmt("%.4f", planted_min) + ", null median " + fmt("%.3f", median) + ", " +
                fmt("%.2f s", secs)};
}

Outcome mtmm_pattern() {
    // Four methods observe four latent traits with noise 0.1; the fifth trait
    // is pure noise.
    Rng rng(58);
    const std::size_t n = 58, reps = 10;
    const std::vector<std::string> traits{"valence", "trust", "purity", "saturated", "random"};
    const std::vector<std::string> methods{"m1", "m2", "m3", "m4"};
    const auto entities = synth::word_list("@j", n);
    std::vector<std::vector<double>> latent(4, std::vector<double>(n));
    for (auto& t : latent)
        for (auto& v : t) v = rng.normal();
    std::vector<ScoreMatrix> matrices;
    for (const auto& m : methods)
        for (std::size_t t = 0; t < traits.size(); ++t) {
            ScoreMatrix sm(entities, reps, traits[t], m);
            for (std::size_t e = 0; e < n; ++e)
                for (std::size_t r = 0; r < reps; ++r)
                    sm.at(e, r) = t < 4 ? latent[t][e] + 0.1 * rng.normal() : rng.normal();
            matrices.push_back(std::move(sm));
        }
    const auto mtmm = build_mtmm(matrices);
    double lowest_convergent = 1e9, highest_random = -1e9;
    for (std::size_t i = 0; i < mtmm.size(); ++i)
        for (std::size_t j = i + 1; j < mtmm.size(); ++j) {
            const double r = mtmm.cells(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            const auto &a = mtmm.labels[i], &b = mtmm.labels[j];
            if (a.trait == "random" || b.trait == "random") highest_random = std::max(highest_random, r);
            else if (a.trait == b.trait) lowest_convergent = std::min(lowest_convergent, r);
        }
    const bool pattern = mtmm.size() == 20 && lowest_convergent > highest_random;

    // Same shape from the command line: four configurations, four lexicons plus null.
    const auto project = synth::make_project("acceptance_mtmm");
    std::ostringstream out, err;
    const int rc = cli::run(project.args("mtmm", "mtmm"), out, err);
    std::size_t rows = 0, cols = 0;
    if (rc == 0) {
        std::istringstream csv(synth::slurp(project.dir / "mtmm" / "mtmm.csv"));
        std::string line;
        std::getline(csv, line);  // metadata
        std::getline(csv, line);  // header
        cols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
        while (std::getline(csv, line))
            if (!line.empty()) ++rows;
    }
    return {pattern && rc == 0 && rows == 20 && cols == 20,
            "planted " + std::to_string(mtmm.size()) + "x" + std::to_string(mtmm.size()) + ", min same-trait r " +
                fmt("%.3f", lowest_convergent) + " > max random-trait r " + fmt("%.3f", highest_random) +
                "; cli mtmm " + std::to_string(rows) + "x" + std::to_string(cols) +
                (rc == 0 ? "" : " (exit " + std::to_string(rc) + ": " + err.str() + ")")};
}

Outcome planted_dip() {
    const auto t0 = Clock::now();
    const synth::Valence v;
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto pretrained = synth::valence_pretrained(v, 1000 + seed);
        const auto set = synth::attack_week_corpus(v, "@alvo", seed);
        TimelineOptions options;
        options.replications = 10;
        const auto series = run_timeline(set, &pretrained, synth::small_config(seed), {v.lexicon()}, {"@alvo"}, options);
        const auto& pts = series.front().points;
        std::size_t argmin = pts.size();
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (pts[i].mean && (argmin == pts.size() || *pts[i].mean < *pts[argmin].mean)) argmin = i;
        hits += pts.size() == 3 && argmin == 1;
    }
    return {hits >= 8, std::to_string(hits) + "/10 seeds with the minimum in the planted week, " +
                           fmt("%.2f s", seconds_since(t0))};
}

Outcome tsne_clusters() {
    double slowest = 0.0;
    int hits = 0;
    bool kl_ok = true;
    double lowest = 1e9;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed * 7919);
        Matrix x(150, 20);
        std::vector<int> labels(150);
        std::vector<std::string> names;
        for (Eigen::Index i = 0; i < 150; ++i) {
            const int c = static_cast<int>(i / 50);
            labels[static_cast<std::size_t>(i)] = c;
            names.push_back("w" + std::to_string(i));
            for (Eigen::Index j = 0; j < 20; ++j) x(i, j) = rng.normal();
            x(i, c) += 10.0 / std::sqrt(2.0);  // centres pairwise 10 sigma apart
        }
        TsneOptions options;
        options.seed = seed;
        const auto t0 = Clock::now();
        const auto proj = tsne(x, names, options);
        slowest = std::max(slowest, seconds_since(t0));
        kl_ok = kl_ok && proj.kl_final <= proj.kl_initial;
        const double s = silhouette_score(proj.coordinates, labels);
        lowest = std::min(lowest, s);
        hits += s > 0.5;
    }
    bool precondition = false;
    try {
        tsne(Matrix::Random(10, 5), synth::word_list("w", 10), {});
    } catch (const DomainError&) {
        precondition = true;
    }
    return {hits >= 9 && kl_ok && precondition && slowest < 30.0,
            std::to_string(hits) + "/10 silhouette > 0.5 (lowest " + fmt("%.3f", lowest) + "), kl decreased: " +
                (kl_ok ? "all" : "not all") + ", n=10 rejected: " + (precondition ? "yes" : "no") +
                ", slowest run " + fmt("%.2f s", slowest)};
}

Outcome fixtures() {
    const std::string dir = FRAMESCORE_DATA_DIR "/lexicons/";
    std::vector<std::string> bad;
    auto expect = [&](const std::string& name, std::size_t pos, std::size_t neg) {
        const auto lex = load_lexicon(dir + name + ".json");
        if (lex.positive.size() != pos || lex.negative.size() != neg)
            bad.push_back(name + " " + std::to_string(lex.positive.size()) + "/" + std::to_string(lex.negative.size()));
    };
    expect("valence", 28, 32);
    expect("trust", 8, 9);
    expect("purity", 27, 27);
    expect("saturated", 8, 8);
    const auto abusive = load_word_list(dir + "abusive.json");
    const auto single = std::count_if(abusive.begin(), abusive.end(),
                                      [](const std::string& w) { return tokenize(w).size() == 1; });
    if (single != 77) bad.push_back("abusive single-token " + std::to_string(single));
    if (abusive.size() != 80) bad.push_back("abusive verbatim " + std::to_string(abusive.size()));
    std::string detail = "valence 28/32, trust 8/9, purity 27/27, saturated 8/8, abusive 77 single-token (80 verbatim)";
    for (const auto& b : bad) detail += "; wrong: " + b;
    return {bad.empty(), detail};
}

Outcome determinism() {
    const auto project = synth::make_project("acceptance_determinism");
    std::ostringstream out, err;
    const int a = cli::run(project.args("score", "run1"), out, err);
    const int b = cli::run(project.args("score", "run2"), out, err);
    if (a != 0 || b != 0) return {false, "score failed: " + err.str()};
    bool same = true;
    for (const char* f : {"scores.csv", "scores_mean.csv"}) {
        const auto x = synth::slurp(project.dir / "run1" / f);
        same = same && !x.empty() && x == synth::slurp(project.dir / "run2" / f);
    }
    return {same, same ? "scores.csv and scores_mean.csv byte-identical" : "outputs differ"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"score oracle equivalence", score_oracle},
        {"gradient correctness", gradients},
        {"lock semantics", lock_semantics},
        {"training signal", training_signal},
        {"statistics oracles", statistics},
        {"robustness replication", robustness},
        {"MTMM convergent-discriminant pattern", mtmm_pattern},
        {"diachronic planted dip", planted_dip},
        {"t-SNE", tsne_clusters},
        {"fixtures integrity", fixtures},
        {"end-to-end determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
