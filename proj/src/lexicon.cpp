#include "framescore/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "framescore/error.hpp"
#include "framescore/unicode.hpp"

namespace framescore {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open lexicon file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> string_list(const nlohmann::json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_array()) throw ValidationError(std::string("lexicon needs an array '") + key + "'");
    std::vector<std::string> out;
    for (const auto& item : *it) {
        if (!item.is_string()) throw ValidationError(std::string("non-string entry in '") + key + "'");
        out.push_back(unicode::to_lower(item.get<std::string>()));
    }
    return out;
}

}  // namespace

std::vector<std::string> PolarLexicon::words() const {
    std::vector<std::string> all = positive;
    all.insert(all.end(), negative.begin(), negative.end());
    return all;
}

PolarLexicon PolarLexicon::swapped() const { return {trait, negative, positive}; }

void PolarLexicon::validate() const {
    if (positive.empty()) throw ValidationError("lexicon '" + trait + "' has an empty positive pole");
    if (negative.empty()) throw ValidationError("lexicon '" + trait + "' has an empty negative pole");
    const std::unordered_set<std::string> pos(positive.begin(), positive.end());
    for (const auto& w : negative)
        if (pos.count(w)) throw ValidationError("lexicon '" + trait + "' lists '" + w + "' in both poles");
}

PolarLexicon parse_lexicon(const std::string& json_text) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed lexicon JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("trait") || !obj["trait"].is_string())
        throw ValidationError("lexicon needs a string 'trait'");
    PolarLexicon lex{obj["trait"].get<std::string>(), string_list(obj, "positive"), string_list(obj, "negative")};
    lex.validate();
    return lex;
}

PolarLexicon load_lexicon(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return parse_lexicon(text);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<std::string> load_word_list(const std::filesystem::path& path) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": malformed word list JSON: " + e.what());
    }
    return string_list(obj, "words");
}

PolarLexicon prune_oov(const PolarLexicon& lex, const Vocabulary& vocab) {
    auto keep = [&](const std::vector<std::string>& pole, const char* name) {
        std::vector<std::string> out;
        std::copy_if(pole.begin(), pole.end(), std::back_inserter(out),
                     [&](const std::string& w) { return vocab.contains(w); });
        if (out.empty())
            throw ValidationError("lexicon '" + lex.trait + "': no " + name + " pole word is in the vocabulary");
        return out;
    };
    return {lex.trait, keep(lex.positive, "positive"), keep(lex.negative, "negative")};
}

std::vector<std::string> sample_subset(const std::vector<std::string>& words, std::size_t size, Rng& rng) {
    if (size >= words.size()) return words;
    std::vector<std::size_t> idx(words.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < size; ++i) {
        const std::size_t j = i + rng.below(idx.size() - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(size);
    std::sort(idx.begin(), idx.end());
    std::vector<std::string> out;
    out.reserve(size);
    for (auto i : idx) out.push_back(words[i]);
    return out;
}

PolarLexicon balance(const PolarLexicon& lex, std::uint64_t seed) {
    lex.validate();
    const std::size_t m = std::min(lex.positive.size(), lex.negative.size());
    Rng rng(seed);
    PolarLexicon out{lex.trait, lex.positive, lex.negative};
    if (out.positive.size() > m) out.positive = sample_subset(lex.positive, m, rng);
    if (out.negative.size() > m) out.negative = sample_subset(lex.negative, m, rng);
    return out;
}

PolarLexicon sample_null(const Vocabulary& vocab, std::size_t size_per_pole, const std::set<std::string>& exclude,
                         std::uint64_t seed) {
    if (size_per_pole == 0) throw DomainError("null lexicon pole size must be positive");
    std::vector<std::string> eligible;
    for (const auto& w : vocab.words())
        if (!exclude.count(w)) eligible.push_back(w);
    if (eligible.size() < 2 * size_per_pole)
        throw DomainError("null lexicon needs " + std::to_string(2 * size_per_pole) + " eligible words, vocabulary has " +
                          std::to_string(eligible.size()));
    Rng rng(seed);
    // Shuffle the leading 2m slots, then split them between the poles.
    for (std::size_t i = 0; i < 2 * size_per_pole; ++i) {
        const std::size_t j = i + rng.below(eligible.size() - i);
        std::swap(eligible[i], eligible[j]);
    }
    PolarLexicon lex;
    lex.trait = "null";
    lex.positive.assign(eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(size_per_pole));
    lex.negative.assign(eligible.begin() + static_cast<std::ptrdiff_t>(size_per_pole),
                        eligible.begin() + static_cast<std::ptrdiff_t>(2 * size_per_pole));
    return lex;
}

std::vector<std::string> candidate_union(const std::vector<PolarLexicon>& lexicons,
                                         const std::vector<std::string>& extra) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    auto push = [&](const std::string& w) {
        if (seen.insert(w).second) out.push_back(w);
    };
    for (const auto& lex : lexicons)
        for (const auto& w : lex.words()) push(w);
    for (const auto& w : extra) push(w);
    return out;
}

PolarLexicon build_saturated(const EmbeddingSpace& space, const std::vector<std::string>& targets,
                             const std::vector<std::string>& candidates, std::size_t k) {
    if (k == 0) throw DomainError("saturated pole size must be positive");
    if (targets.empty()) throw DomainError("saturated lexicon needs at least one target");
    std::vector<double> centroid(space.dimension(), 0.0);
    for (const auto& t : targets) {
        const auto v = space.vector(t);
        for (std::size_t i = 0; i < centroid.size(); ++i) centroid[i] += v[i];
    }
    for (auto& x : centroid) x /= static_cast<double>(targets.size());

    struct Ranked {
        double sim;
        std::size_t order;
        std::string word;
    };
    std::vector<Ranked> ranked;
    std::unordered_set<std::string> seen;
    for (const auto& w : candidates) {
        if (!seen.insert(w).second) continue;
        ranked.push_back({cosine(centroid, space.vector(w)), ranked.size(), w});
    }
    if (ranked.size() < 2 * k)
        throw DomainError("saturated lexicon needs " + std::to_string(2 * k) + " distinct candidates, got " +
                          std::to_string(ranked.size()));
    std::sort(ranked.begin(), ranked.end(),
              [](const Ranked& a, const Ranked& b) { return a.sim != b.sim ? a.sim > b.sim : a.order < b.order; });
    PolarLexicon lex;
    lex.trait = "saturated";
    for (std::size_t i = 0; i < k; ++i) lex.negative.push_back(ranked[i].word);
    for (std::size_t i = 0; i < k; ++i) lex.positive.push_back(ranked[ranked.size() - 1 - i].word);
    return lex;
}

}  // namespace framescore
