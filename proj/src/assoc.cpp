#include "framescore/assoc.hpp"

#include <cmath>
#include <ostream>

#include "framescore/error.hpp"
#include "framescore/parallel.hpp"
#include "framescore/psych.hpp"

namespace framescore {

double target_score(VectorView entity, const std::vector<VectorView>& positive,
                    const std::vector<VectorView>& negative) {
    if (positive.empty() || negative.empty()) throw DomainError("association score needs nonempty attribute sets");
    if (positive.size() != negative.size())
        throw DomainError("association score needs balanced attribute sets (" + std::to_string(positive.size()) +
                          " vs " + std::to_string(negative.size()) + ")");
    const std::size_t m = positive.size();
    std::vector<double> cosines;
    cosines.reserve(2 * m);
    double pos_sum = 0.0;
    double neg_sum = 0.0;
    for (auto x : positive) {
        cosines.push_back(cosine(entity, x));
        pos_sum += cosines.back();
    }
    for (auto y : negative) {
        cosines.push_back(cosine(entity, y));
        neg_sum += cosines.back();
    }
    bool all_equal = true;
    for (double c : cosines) all_equal = all_equal && c == cosines.front();
    if (all_equal) throw DegenerateInputError("association score: all attribute cosines are identical");
    const double sd = sample_stdev(cosines);
    return ((pos_sum - neg_sum) / static_cast<double>(m)) / sd;
}

double target_score(const EmbeddingSpace& space, const PolarLexicon& lex, std::string_view entity) {
    const VectorView a = space.vector(entity);
    std::vector<VectorView> pos;
    std::vector<VectorView> neg;
    for (const auto& w : lex.positive) pos.push_back(space.vector(w));
    for (const auto& w : lex.negative) neg.push_back(space.vector(w));
    return target_score(a, pos, neg);
}

double effect_size(std::span<const double> x_scores, std::span<const double> y_scores) {
    if (x_scores.empty() || y_scores.empty()) throw DomainError("effect size needs two nonempty groups");
    if (x_scores.size() + y_scores.size() < 3) throw DomainError("effect size needs at least three scores in total");
    std::vector<double> all(x_scores.begin(), x_scores.end());
    all.insert(all.end(), y_scores.begin(), y_scores.end());
    const double sd = sample_stdev(all);
    const double diff = mean(x_scores) - mean(y_scores);
    if (sd == 0.0) {
        if (diff == 0.0) return 0.0;
        throw DegenerateInputError("effect size: pooled scores have zero spread");
    }
    return diff / sd;
}

double group_effect_size(const EmbeddingSpace& space, const PolarLexicon& lex,
                         const std::vector<std::string>& group_x, const std::vector<std::string>& group_y) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& h : group_x) xs.push_back(target_score(space, lex, h));
    for (const auto& h : group_y) ys.push_back(target_score(space, lex, h));
    return effect_size(xs, ys);
}

std::vector<std::optional<double>> score_entities(const EmbeddingSpace& space, const PolarLexicon& lex,
                                                  const std::vector<std::string>& entities) {
    std::vector<std::optional<double>> out;
    out.reserve(entities.size());
    for (const auto& e : entities) {
        if (space.vocab().contains(e)) {
            out.emplace_back(target_score(space, lex, e));
        } else {
            out.emplace_back(std::nullopt);
        }
    }
    return out;
}

std::vector<ReplicatedScores> replicate_scores(const DocumentSet& set, const EmbeddingSpace* pretrained,
                                               const TrainConfig& config, const std::vector<PolarLexicon>& lexicons,
                                               const std::vector<std::string>& entities,
                                               const ReplicationOptions& options) {
    if (options.replications == 0) throw DomainError("replications must be at least 1");
    config.validate();
    std::vector<ReplicatedScores> results;
    for (const auto& lex : lexicons)
        results.push_back({ScoreMatrix(entities, options.replications, lex.trait, options.method), {}});

    // Each replication writes only its own column, so jobs never share cells.
    parallel_for(options.replications, options.jobs, [&](std::size_t r) {
        TrainConfig cfg = config;
        cfg.seed = config.seed + r;
        EmbeddingSpace space = init_space(set, pretrained, cfg);
        train(space, set, cfg);
        for (std::size_t l = 0; l < lexicons.size(); ++l) {
            const PolarLexicon lex = balance(prune_oov(lexicons[l], space.vocab()), config.seed);
            const auto scores = score_entities(space, lex, entities);
            for (std::size_t e = 0; e < entities.size(); ++e) results[l].matrix.at(e, r) = scores[e];
        }
    });

    for (auto& res : results)
        for (std::size_t e = 0; e < entities.size(); ++e)
            if (res.matrix.present(e) == 0) res.missing_entities.push_back(entities[e]);
    return results;
}

ReplicatedScores replicate_scores(const DocumentSet& set, const EmbeddingSpace* pretrained, const TrainConfig& config,
                                  const PolarLexicon& lex, const std::vector<std::string>& entities,
                                  const ReplicationOptions& options) {
    return std::move(replicate_scores(set, pretrained, config, std::vector<PolarLexicon>{lex}, entities, options).front());
}

double robustness_alpha(const EmbeddingSpace& space, const PolarLexicon& lex, const std::vector<std::string>& entities,
                        std::size_t n_draws, double subset_fraction, std::uint64_t seed) {
    if (n_draws < 2) throw DomainError("robustness alpha needs at least two draws");
    if (!(subset_fraction > 0.0 && subset_fraction <= 1.0)) throw DomainError("subset fraction must lie in (0, 1]");
    const PolarLexicon balanced = balance(lex, seed);
    const std::size_t m = balanced.positive.size();
    const auto size = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(subset_fraction * static_cast<double>(m))));

    std::vector<std::string> present;
    for (const auto& e : entities)
        if (space.vocab().contains(e)) present.push_back(e);
    if (present.size() < 2) throw DomainError("robustness alpha needs at least two in-vocabulary entities");

    Rng rng(seed);
    Eigen::MatrixXd grid(static_cast<Eigen::Index>(present.size()), static_cast<Eigen::Index>(n_draws));
    for (std::size_t d = 0; d < n_draws; ++d) {
        PolarLexicon draw{lex.trait, sample_subset(balanced.positive, size, rng), sample_subset(balanced.negative, size, rng)};
        for (std::size_t e = 0; e < present.size(); ++e)
            grid(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(d)) = target_score(space, draw, present[e]);
    }
    return cronbach_alpha(grid);
}

double robustness_alpha(const DocumentSet& set, const EmbeddingSpace* pretrained, const TrainConfig& config,
                        const PolarLexicon& lex, const std::vector<std::string>& entities, std::size_t n_draws,
                        double subset_fraction) {
    EmbeddingSpace space = init_space(set, pretrained, config);
    train(space, set, config);
    return robustness_alpha(space, prune_oov(lex, space.vocab()), entities, n_draws, subset_fraction, config.seed);
}

void write_scores_csv(const std::vector<ScoreMatrix>& matrices, std::ostream& out) {
    out << "entity,trait,method,replication,value\n";
    for (const auto& m : matrices)
        for (std::size_t e = 0; e < m.entities().size(); ++e)
            for (std::size_t r = 0; r < m.replications(); ++r) {
                const auto& v = m.at(e, r);
                out << m.entities()[e] << ',' << m.trait() << ',' << m.method() << ',' << r << ','
                    << (v ? format_real(*v) : "NA") << '\n';
            }
}

void write_means_csv(const std::vector<ScoreMatrix>& matrices, std::ostream& out) {
    out << "entity,trait,method,mean,n_replications\n";
    for (const auto& m : matrices)
        for (std::size_t e = 0; e < m.entities().size(); ++e) {
            const auto v = m.mean(e);
            out << m.entities()[e] << ',' << m.trait() << ',' << m.method() << ',' << (v ? format_real(*v) : "NA")
                << ',' << m.present(e) << '\n';
        }
}

}  // namespace framescore
