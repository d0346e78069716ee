#include <doctest.h>

#include <cmath>

#include "framescore/error.hpp"
#include "framescore/trainer.hpp"
#include "support/oracles.hpp"
#include "support/spaces.hpp"
#include "support/synth.hpp"

using namespace framescore;
using doctest::Approx;

namespace {

DocumentSet text_corpus(const std::vector<std::vector<std::string>>& sentences) {
    DocumentSet set;
    for (std::size_t i = 0; i < sentences.size(); ++i)
        set.documents.push_back(synth::doc(std::to_string(i), synth::day(0), sentences[i]));
    return set;
}

bool same_matrix(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && std::equal(a.data(), a.data() + a.size(), b.data());
}

}  // namespace

TEST_CASE("build_vocab") {
    const auto v = build_vocab(text_corpus({{"a", "a", "a", "b"}}), 2);
    REQUIRE(v.size() == 1);
    CHECK(v.word(0) == "a");
    CHECK(v.count(0) == 3);
    CHECK(build_vocab(DocumentSet{}, 1).empty());
    const auto xy = build_vocab(text_corpus({{"y", "x", "y", "x", "x"}}), 1);
    CHECK(xy.words() == std::vector<std::string>{"x", "y"});
    const auto tie = build_vocab(text_corpus({{"q", "p"}, {"p", "q"}}), 1);
    CHECK(tie.words() == std::vector<std::string>{"q", "p"});
}

TEST_CASE("config validation") {
    TrainConfig c;
    c.validate();
    c.lr_end = 0.5;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = TrainConfig{};
    c.dimension = 0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    CHECK(parse_algorithm("SGNS") == Algorithm::Sgns);
    CHECK_THROWS_AS(parse_algorithm("glove"), ValidationError);
}

TEST_CASE("init_space copies pretrained rows and bounds new rows") {
    const auto pretrained = synth::make_space({{"bom", std::vector<double>(300, 0.123)}});
    TrainConfig cfg;
    cfg.min_count = 1;
    const auto set = text_corpus({{"bom", "@ana", "bom"}});
    const auto s = init_space(set, &pretrained, cfg);
    REQUIRE(s.size() == 2);
    const auto bom = s.vector("bom");
    CHECK(std::equal(bom.begin(), bom.end(), pretrained.vector("bom").begin()));
    CHECK(s.locked(s.vocab().at("bom")));
    CHECK_FALSE(s.locked(s.vocab().at("@ana")));
    for (double x : s.vector("@ana")) {
        CHECK(x >= -1.0 / 600);
        CHECK(x <= 1.0 / 600);
    }
    CHECK(s.output().isZero());
    CHECK(s.vocab().count(s.vocab().at("bom")) == 2);

    cfg.lock_factor = 1.0;
    CHECK_FALSE(init_space(set, &pretrained, cfg).locked(0));
    cfg.dimension = 10;
    CHECK_THROWS_AS(init_space(set, &pretrained, cfg), ValidationError);

    const auto fresh = init_space(set, nullptr, TrainConfig{.min_count = 1});
    for (std::size_t i = 0; i < fresh.size(); ++i) CHECK_FALSE(fresh.locked(i));
}

TEST_CASE("train is deterministic and freezes locked rows") {
    const auto c = synth::two_topic_corpus(5, 200);
    for (auto algorithm : {Algorithm::Cbow, Algorithm::Sgns}) {
        auto cfg = synth::small_config(5);
        cfg.algorithm = algorithm;
        auto a = init_space(c.set, nullptr, cfg);
        auto b = init_space(c.set, nullptr, cfg);
        train(a, c.set, cfg);
        train(b, c.set, cfg);
        CHECK(same_matrix(a.input(), b.input()));
        CHECK(same_matrix(a.output(), b.output()));

        // every word pretrained and locked: input rows untouched
        auto locked = init_space(c.set, &a, cfg);
        const Matrix before = locked.input();
        train(locked, c.set, cfg);
        CHECK(same_matrix(before, locked.input()));
        CHECK_FALSE(locked.output().isZero());
    }
}

TEST_CASE("train reports empty corpus") {
    auto cfg = synth::small_config(1);
    const auto pretrained = synth::make_space({{"a", {1, 0}}, {"b", {0, 1}}});
    cfg.dimension = 2;
    auto s = init_space(DocumentSet{}, &pretrained, cfg);
    CHECK(train(s, DocumentSet{}, cfg).status == TrainStatus::EmptyCorpus);
}

TEST_CASE("loss decreases and topics separate") {
    for (auto algorithm : {Algorithm::Cbow, Algorithm::Sgns}) {
        const auto c = synth::two_topic_corpus(2);
        auto cfg = synth::small_config(2);
        cfg.algorithm = algorithm;
        auto s = init_space(c.set, nullptr, cfg);
        const auto report = train(s, c.set, cfg);
        REQUIRE(report.epoch_loss.size() == 5);
        CHECK(report.epoch_loss.back() < report.epoch_loss.front());
        CHECK(synth::topic_margin(c, s) >= 0.2);
    }
}

TEST_CASE("multi-worker training runs and stays finite") {
    const auto c = synth::two_topic_corpus(6, 400);
    auto cfg = synth::small_config(6);
    cfg.workers = 3;
    auto s = init_space(c.set, nullptr, cfg);
    train(s, c.set, cfg);
    s.validate();
}

TEST_CASE("loss_and_grad") {
    SUBCASE("zero vectors") {
        const std::vector<double> z(4, 0.0);
        for (auto algorithm : {Algorithm::Cbow, Algorithm::Sgns}) {
            const auto g = loss_and_grad(z, {z}, {z, z, z}, algorithm);
            CHECK(g.loss == Approx(4 * std::log(2.0)));
            for (double x : g.center) CHECK(x == 0.0);
        }
    }
    SUBCASE("finite differences") {
        Rng rng(31);
        for (int i = 0; i < 40; ++i) {
            const std::size_t d = 2 + rng.below(6);
            std::vector<oracle::Vec> ctx, neg;
            for (std::size_t k = 0, n = 1 + rng.below(4); k < n; ++k) ctx.push_back(oracle::random_vec(rng, d, 0.7));
            for (std::size_t k = 0, n = 1 + rng.below(4); k < n; ++k) neg.push_back(oracle::random_vec(rng, d, 0.7));
            const auto alg = i % 2 ? Algorithm::Sgns : Algorithm::Cbow;
            CHECK(oracle::gradient_relative_error(oracle::random_vec(rng, d, 0.7), ctx, neg, alg) < 1e-4);
        }
    }
    SUBCASE("doubling an aligned negative raises its loss") {
        const std::vector<double> c{1, 0.5}, ctx{0.2, 0.1}, n{0.3, 0.4}, n2{0.6, 0.8};
        const double base = loss_and_grad(c, {ctx}, {n}, Algorithm::Sgns).loss;
        CHECK(loss_and_grad(c, {ctx}, {n2}, Algorithm::Sgns).loss >= base);
    }
    CHECK_THROWS_AS(loss_and_grad(std::vector<double>{1, 0}, {}, {}, Algorithm::Sgns), DomainError);
}

TEST_CASE("negative sampling table") {
    Vocabulary v;
    v.add("a", 4);
    v.add("b", 1);
    const NegativeSamplingTable t(v, 0.75);
    const double pa = std::pow(4.0, 0.75) / (std::pow(4.0, 0.75) + 1.0);
    CHECK(t.probability(0) == Approx(pa).epsilon(1e-12));
    CHECK(t.probability(0) + t.probability(1) == Approx(1.0).epsilon(1e-12));
    Rng rng(17);
    std::size_t hits = 0;
    for (int i = 0; i < 1000000; ++i) hits += draw_negative(t, rng) == 0;
    CHECK(std::abs(static_cast<double>(hits) / 1e6 - pa) < 0.005);

    const NegativeSamplingTable raw(v, 1.0);
    CHECK(raw.probability(0) == Approx(0.8));

    Vocabulary one;
    one.add("só", 3);
    const NegativeSamplingTable single(one, 0.75);
    for (int i = 0; i < 10; ++i) CHECK(draw_negative(single, rng) == 0);
    CHECK_THROWS_AS(draw_negative(NegativeSamplingTable{}, rng), DomainError);
}
