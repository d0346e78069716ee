#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "framescore/corpus.hpp"
#include "framescore/rng.hpp"
#include "framescore/vecstore.hpp"

namespace framescore {

enum class Algorithm { Cbow, Sgns };

std::string_view to_string(Algorithm a);
/// Accepts "cbow" or "sgns" (case-insensitive); throws ValidationError.
Algorithm parse_algorithm(std::string_view text);

/// Word2Vec hyperparameters. Defaults follow the common reference
/// toolkit defaults.
struct TrainConfig {
    Algorithm algorithm = Algorithm::Cbow;
    std::size_t dimension = 300;
    std::size_t window = 5;
    std::size_t negatives = 5;
    std::size_t epochs = 5;
    double lr_start = 0.025;
    double lr_end = 1e-4;
    std::uint64_t min_count = 5;
    double subsample = 1e-3;
    double unigram_exponent = 0.75;
    /// Gradient multiplier on pretrained rows; 0 freezes them.
    double lock_factor = 0.0;
    std::uint64_t seed = 1;
    /// Threads per training run. More than one enables unsynchronized
    /// (racy) updates and gives up bit-reproducibility.
    std::size_t workers = 1;

    /// Throws ValidationError on an inconsistent configuration.
    void validate() const;
};

/// Cumulative unigram^exponent distribution over the words with a positive
/// count. Words with count zero (pretrained-only) are never drawn.
class NegativeSamplingTable {
public:
    NegativeSamplingTable() = default;
    NegativeSamplingTable(const Vocabulary& vocab, double exponent);

    bool empty() const { return ordinals_.empty(); }
    std::size_t size() const { return ordinals_.size(); }

    /// Probability mass of a vocabulary ordinal (0 if not in the table).
    double probability(std::size_t ordinal) const;

    const std::vector<std::size_t>& ordinals() const { return ordinals_; }
    const std::vector<double>& cumulative() const { return cumulative_; }

private:
    std::vector<std::size_t> ordinals_;
    std::vector<double> cumulative_;
};

/// Draws a vocabulary ordinal from the table; DomainError if it is empty.
std::size_t draw_negative(const NegativeSamplingTable& table, Rng& rng);

/// Tokens occurring at least min_count times, ordered by descending count
/// with ties broken by first occurrence.
Vocabulary build_vocab(const DocumentSet& set, std::uint64_t min_count);

/// Working space for (fine-)tuning: pretrained words first in their file
/// order, then novel corpus words. Pretrained rows copy their input vector
/// and are locked when lock_factor is 0; novel rows are drawn uniformly in
/// [-0.5/d, 0.5/d] and stay trainable. Output vectors start at zero.
/// Counts are the raw corpus counts of every word in the union.
EmbeddingSpace init_space(const Vocabulary& corpus_vocab, const EmbeddingSpace* pretrained,
                          const TrainConfig& config, const DocumentSet* counts_from = nullptr);

/// Convenience: build_vocab + init_space with counts from the same set.
EmbeddingSpace init_space(const DocumentSet& set, const EmbeddingSpace* pretrained, const TrainConfig& config);

enum class TrainStatus { Trained, EmptyCorpus };

struct TrainReport {
    TrainStatus status = TrainStatus::Trained;
    /// Mean logistic loss per positive pair, one entry per epoch.
    std::vector<double> epoch_loss;
    std::uint64_t words_processed = 0;
    std::uint64_t updates = 0;
};

/// Runs config.epochs passes of CBOW or SGNS with negative sampling over
/// the documents (each document is one sentence) and updates the space in
/// place. The learning rate decays linearly from lr_start to lr_end over
/// epochs * corpus words. Gradients into locked input rows are scaled by
/// lock_factor; output rows always train. Throws ValidationError on a
/// space/config mismatch.
TrainReport train(EmbeddingSpace& space, const DocumentSet& set, const TrainConfig& config);

struct LossGradient {
    double loss = 0.0;
    std::vector<double> center;
    std::vector<std::vector<double>> contexts;
    std::vector<std::vector<double>> negatives;
};

/// One negative-sampling objective and its analytic gradient.
///
/// SGNS: `center` is the input vector of the center word and each entry of
/// `contexts` is the output vector of one context word; the result sums
///   -log σ(u_ctx·v) - Σ_k log σ(-u_k·v)
/// over the contexts (the negatives are shared).
///
/// CBOW: the mean h of `contexts` (input vectors) predicts the center,
/// whose output vector is `center`:
///   -log σ(u_center·h) - Σ_k log σ(-u_k·h).
///
/// Throws DomainError on an empty context list or mismatched dimensions.
LossGradient loss_and_grad(VectorView center, const std::vector<VectorView>& contexts,
                           const std::vector<VectorView>& negatives, Algorithm algorithm);

}  // namespace framescore
