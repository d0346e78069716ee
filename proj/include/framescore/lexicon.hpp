#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "framescore/rng.hpp"
#include "framescore/vecstore.hpp"

namespace framescore {

/// A trait operationalized as two opposed word lists.
struct PolarLexicon {
    std::string trait;
    std::vector<std::string> positive;
    std::vector<std::string> negative;

    /// Words of both poles, positive first.
    std::vector<std::string> words() const;
    /// Same trait with the poles exchanged.
    PolarLexicon swapped() const;
    /// Throws ValidationError if a pole is empty or a word sits in both.
    void validate() const;
};

/// Reads {"trait": ..., "positive": [...], "negative": [...]}. Words are
/// lowercased with the tokenizer's rules and checked with validate().
PolarLexicon load_lexicon(const std::filesystem::path& path);
PolarLexicon parse_lexicon(const std::string& json_text);

/// Reads a flat word list {"name": ..., "words": [...]}, lowercased.
std::vector<std::string> load_word_list(const std::filesystem::path& path);

/// Drops words missing from vocab, keeping order. Throws ValidationError
/// naming the pole if one becomes empty.
PolarLexicon prune_oov(const PolarLexicon& lex, const Vocabulary& vocab);

/// Subsamples the longer pole uniformly at random (without replacement,
/// original order kept) down to the shorter pole's size.
PolarLexicon balance(const PolarLexicon& lex, std::uint64_t seed);

/// Uniform random subset of `size` elements from `words`, original order kept.
std::vector<std::string> sample_subset(const std::vector<std::string>& words, std::size_t size, Rng& rng);

/// Two disjoint uniform samples from vocab minus `exclude`. Trait "null".
/// Throws DomainError when fewer than 2*size_per_pole words are eligible.
PolarLexicon sample_null(const Vocabulary& vocab, std::size_t size_per_pole,
                         const std::set<std::string>& exclude, std::uint64_t seed);

/// Ranks candidate words by cosine to the centroid of the target vectors:
/// the k most similar form the negative pole, the k least similar the
/// positive pole (each in rank order). Trait "saturated". Duplicate
/// candidates count once. Throws LookupError for unknown words and
/// DomainError for fewer than 2k distinct candidates.
PolarLexicon build_saturated(const EmbeddingSpace& space, const std::vector<std::string>& targets,
                             const std::vector<std::string>& candidates, std::size_t k = 8);

/// Candidate pool for build_saturated: every word of every lexicon plus
/// the extra words, first occurrence kept.
std::vector<std::string> candidate_union(const std::vector<PolarLexicon>& lexicons,
                                         const std::vector<std::string>& extra = {});

}  // namespace framescore
