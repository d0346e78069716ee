#include <doctest.h>

#include <algorithm>
#include <set>

#include "framescore/error.hpp"
#include "framescore/lexicon.hpp"
#include "support/spaces.hpp"
#include "support/synth.hpp"

using namespace framescore;

namespace {

Vocabulary vocab_of(const std::vector<std::string>& words) {
    Vocabulary v;
    for (const auto& w : words) v.add(w, 1);
    return v;
}

bool subset_in_order(const std::vector<std::string>& sub, const std::vector<std::string>& full) {
    auto it = full.begin();
    for (const auto& w : sub) {
        it = std::find(it, full.end(), w);
        if (it == full.end()) return false;
        ++it;
    }
    return true;
}

}  // namespace

TEST_CASE("parse_lexicon") {
    const auto lex = parse_lexicon(R"({"trait":"valence","positive":["Bom","ÓTIMO"],"negative":["mau"]})");
    CHECK(lex.trait == "valence");
    CHECK(lex.positive == std::vector<std::string>{"bom", "ótimo"});
    CHECK_THROWS_AS(parse_lexicon(R"({"trait":"x","positive":["bom"],"negative":["bom"]})"), ValidationError);
    CHECK_THROWS_AS(parse_lexicon(R"({"trait":"x","positive":[],"negative":["a"]})"), ValidationError);
    CHECK_THROWS_AS(parse_lexicon(R"({"trait":"x","positive":["a"]})"), ValidationError);
    CHECK_THROWS_AS(parse_lexicon("not json"), ParseError);
    CHECK_THROWS_AS(load_lexicon("/nonexistent.json"), IoError);
}

TEST_CASE("shipped fixtures") {
    const std::string dir = FRAMESCORE_DATA_DIR "/lexicons/";
    const auto valence = load_lexicon(dir + "valence.json");
    CHECK(valence.positive.size() == 28);
    CHECK(valence.negative.size() == 32);
    CHECK(std::count(valence.negative.begin(), valence.negative.end(), "assalto") == 1);
    CHECK(std::count(valence.negative.begin(), valence.negative.end(), "assassinato") == 1);
    const auto trust = load_lexicon(dir + "trust.json");
    CHECK(trust.positive.size() == 8);
    CHECK(trust.negative.size() == 9);
    CHECK(std::count(trust.negative.begin(), trust.negative.end(), "desleal") == 1);
    const auto purity = load_lexicon(dir + "purity.json");
    CHECK(purity.positive.size() == 27);
    CHECK(purity.negative.size() == 27);
    const auto saturated = load_lexicon(dir + "saturated.json");
    CHECK(saturated.positive.size() == 8);
    CHECK(saturated.negative.size() == 8);
    CHECK(saturated.positive.front() == "acolhedor");
    const auto abusive = load_word_list(dir + "abusive.json");
    CHECK(abusive.size() == 80);
    CHECK(abusive.front() == "asco");
}

TEST_CASE("prune_oov") {
    const PolarLexicon lex{"purity", {"limpo", "arco-íris", "puro"}, {"sujo", "imundo"}};
    const auto all = vocab_of({"limpo", "arco-íris", "puro", "sujo", "imundo"});
    CHECK(prune_oov(lex, all).positive == lex.positive);
    const auto pruned = prune_oov(lex, vocab_of({"limpo", "puro", "sujo", "imundo"}));
    CHECK(pruned.positive == std::vector<std::string>{"limpo", "puro"});
    try {
        prune_oov(lex, vocab_of({"limpo"}));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("negative") != std::string::npos);
    }
}

TEST_CASE("balance") {
    const PolarLexicon even{"t", synth::word_list("p", 8), synth::word_list("n", 8)};
    CHECK(balance(even, 1).positive == even.positive);
    const PolarLexicon odd{"t", synth::word_list("p", 9), synth::word_list("n", 8)};
    const auto b = balance(odd, 1);
    CHECK(b.positive.size() == 8);
    CHECK(b.negative == odd.negative);
    CHECK(subset_in_order(b.positive, odd.positive));
    CHECK(balance(odd, 1).positive == b.positive);
}

TEST_CASE("prune then balance properties") {
    Rng rng(12);
    for (int t = 0; t < 200; ++t) {
        const auto pos = synth::word_list("p", 1 + rng.below(15));
        const auto neg = synth::word_list("n", 1 + rng.below(15));
        std::vector<std::string> keep;
        for (const auto* pole : {&pos, &neg})
            for (const auto& w : *pole)
                if (rng.uniform() < 0.7) keep.push_back(w);
        const PolarLexicon lex{"t", pos, neg};
        PolarLexicon pruned;
        try {
            pruned = prune_oov(lex, vocab_of(keep));
        } catch (const ValidationError&) {
            continue;
        }
        const auto b = balance(pruned, rng.next());
        CHECK(b.positive.size() == b.negative.size());
        CHECK(subset_in_order(b.positive, pos));
        CHECK(subset_in_order(b.negative, neg));
        for (const auto& w : b.words()) CHECK(std::find(keep.begin(), keep.end(), w) != keep.end());
    }
}

TEST_CASE("sample_null") {
    const auto words = synth::word_list("w", 100);
    const auto v = vocab_of(words);
    std::set<std::string> exclude{"w0", "w1", "w2"};
    const auto a = sample_null(v, 5, exclude, 4);
    CHECK(a.trait == "null");
    CHECK(a.positive.size() == 5);
    CHECK(a.negative.size() == 5);
    std::set<std::string> seen;
    for (const auto& w : a.words()) {
        CHECK(seen.insert(w).second);
        CHECK(exclude.count(w) == 0);
    }
    CHECK(sample_null(v, 5, exclude, 4).words() == a.words());
    std::set<std::string> most(words.begin(), words.begin() + 91);
    CHECK_THROWS_AS(sample_null(v, 5, most, 4), DomainError);
}

TEST_CASE("build_saturated") {
    // unit candidates at hand-set cosines to the centroid (1, 0)
    auto at = [](double c) { return std::vector<double>{c, std::sqrt(1 - c * c)}; };
    const auto s = synth::make_space(
        {{"@a", {1, 0}}, {"c9", at(0.9)}, {"c5", at(0.5)}, {"m5", at(-0.5)}, {"m9", at(-0.9)}, {"c1", {2, 0}}});
    const auto sat = build_saturated(s, {"@a"}, {"m5", "c5", "m9", "c9"}, 2);
    CHECK(sat.trait == "saturated");
    CHECK(sat.negative == std::vector<std::string>{"c9", "c5"});
    CHECK(sat.positive == std::vector<std::string>{"m9", "m5"});
    CHECK(build_saturated(s, {"@a"}, {"m5", "c1", "c5", "m9"}, 2).negative.front() == "c1");
    CHECK_THROWS_AS(build_saturated(s, {"@a"}, {"c9", "c5", "m5"}, 2), DomainError);
    CHECK_THROWS_AS(build_saturated(s, {"@nobody"}, {"c9", "c5", "m5", "m9"}, 2), LookupError);
}
