#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "framescore/corpus.hpp"
#include "framescore/lexicon.hpp"
#include "framescore/score_matrix.hpp"
#include "framescore/trainer.hpp"
#include "framescore/vecstore.hpp"

namespace framescore {

/// Single-target association score of an entity vector a against polar
/// attribute sets X (positive) and Y (negative) of equal size m:
///
///   s = [ (1/m) (Σ_x cos(a,x) - Σ_y cos(a,y)) ] / sd_{w ∈ X∪Y} cos(a,w)
///
/// with the sample standard deviation (divisor 2m-1). Throws DomainError
/// for unequal or empty sets and DegenerateInputError when all 2m cosines
/// coincide.
double target_score(VectorView entity, const std::vector<VectorView>& positive,
                    const std::vector<VectorView>& negative);

/// Scores a vocabulary entity; every word must be in the space
/// (LookupError otherwise) and the poles must be balanced.
double target_score(const EmbeddingSpace& space, const PolarLexicon& lex, std::string_view entity);

/// Group effect size from per-entity scores: difference of group means over
/// the sample stdev of the pooled scores. Needs at least 3 scores in total.
double effect_size(std::span<const double> x_scores, std::span<const double> y_scores);

/// effect_size over target_score of each handle in the two groups.
double group_effect_size(const EmbeddingSpace& space, const PolarLexicon& lex,
                         const std::vector<std::string>& group_x, const std::vector<std::string>& group_y);

struct ReplicationOptions {
    std::size_t replications = 10;
    /// Replications trained concurrently; results do not depend on it.
    std::size_t jobs = 1;
    std::string method;
};

struct ReplicatedScores {
    ScoreMatrix matrix;
    /// Entities without a score in any replication.
    std::vector<std::string> missing_entities;
};

/// Trains `replications` spaces (seed = config.seed + r) on the corpus,
/// optionally starting from a pretrained space, and scores every entity
/// under every lexicon. Each lexicon is pruned against the trained
/// vocabulary and balanced with config.seed. One result per lexicon, in
/// order.
std::vector<ReplicatedScores> replicate_scores(const DocumentSet& set, const EmbeddingSpace* pretrained,
                                               const TrainConfig& config, const std::vector<PolarLexicon>& lexicons,
                                               const std::vector<std::string>& entities,
                                               const ReplicationOptions& options = {});

ReplicatedScores replicate_scores(const DocumentSet& set, const EmbeddingSpace* pretrained, const TrainConfig& config,
                                  const PolarLexicon& lex, const std::vector<std::string>& entities,
                                  const ReplicationOptions& options = {});

/// Scores all entities present in `space` under one lexicon; absent
/// entities give empty results.
std::vector<std::optional<double>> score_entities(const EmbeddingSpace& space, const PolarLexicon& lex,
                                                  const std::vector<std::string>& entities);

/// Word-selection robustness for one space: draws n_draws balanced
/// sub-lexicons (each pole of the balanced lexicon subsampled to
/// max(1, round(fraction * m)) words), scores the in-vocabulary entities
/// under each, and returns Cronbach's alpha with draws as items.
double robustness_alpha(const EmbeddingSpace& space, const PolarLexicon& lex, const std::vector<std::string>& entities,
                        std::size_t n_draws, double subset_fraction, std::uint64_t seed);

/// Trains one space with config.seed, prunes the lexicon against it, then
/// applies the space overload.
double robustness_alpha(const DocumentSet& set, const EmbeddingSpace* pretrained, const TrainConfig& config,
                        const PolarLexicon& lex, const std::vector<std::string>& entities, std::size_t n_draws = 10,
                        double subset_fraction = 0.5);

/// `entity,trait,method,replication,value`; missing cells print NA.
void write_scores_csv(const std::vector<ScoreMatrix>& matrices, std::ostream& out);
/// `entity,trait,method,mean,n_replications`.
void write_means_csv(const std::vector<ScoreMatrix>& matrices, std::ostream& out);

}  // namespace framescore
