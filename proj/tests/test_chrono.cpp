#include <doctest.h>

#include <sstream>

#include "framescore/assoc.hpp"
#include "framescore/chrono.hpp"
#include "framescore/error.hpp"
#include "support/synth.hpp"

using namespace framescore;

namespace {

TimelineOptions weekly(std::size_t replications) {
    TimelineOptions o;
    o.replications = replications;
    return o;
}

}  // namespace

TEST_CASE("single window matches the synchronic pipeline") {
    const synth::Valence v;
    const auto pretrained = synth::valence_pretrained(v, 8);
    auto set = synth::attack_week_corpus(v, "@alvo", 8);
    std::erase_if(set.documents, [](const Document& d) { return d.timestamp >= synth::day(7); });
    const auto cfg = synth::small_config(8);
    const auto series = run_timeline(set, &pretrained, cfg, {v.lexicon()}, {"@alvo"}, weekly(3));
    REQUIRE(series.size() == 1);
    REQUIRE(series[0].points.size() == 1);
    const auto sync = replicate_scores(set, &pretrained, cfg, v.lexicon(), {"@alvo"}, {3, 1, "default"});
    CHECK(*series[0].points[0].mean == doctest::Approx(*sync.matrix.mean(0)).epsilon(1e-12));
    CHECK(series[0].points[0].n_replications == 3);
}

TEST_CASE("absent entity leaves a missing point and empty windows are kept") {
    const synth::Valence v;
    const auto pretrained = synth::valence_pretrained(v, 9);
    auto set = synth::attack_week_corpus(v, "@alvo", 9);
    for (auto& d : set.documents)
        if (d.timestamp >= synth::day(7) && d.timestamp < synth::day(14)) std::erase(d.tokens, "@alvo");
    // push the last week out to leave an empty window between
    for (auto& d : set.documents)
        if (d.timestamp >= synth::day(14)) d.timestamp += std::chrono::days{7};
    const auto series = run_timeline(set, &pretrained, synth::small_config(9), {v.lexicon()}, {"@alvo"}, weekly(2));
    const auto& pts = series[0].points;
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].mean.has_value());
    CHECK_FALSE(pts[1].mean.has_value());
    CHECK(pts[1].n_documents > 0);
    CHECK_FALSE(pts[2].mean.has_value());
    CHECK(pts[2].n_documents == 0);
    CHECK(pts[3].mean.has_value());
    CHECK(pts[3].stdev.has_value());
    CHECK(series[0].points.size() == window_split(set, std::chrono::days{7}).size());
}

TEST_CASE("window isolation") {
    const synth::Valence v;
    const auto pretrained = synth::valence_pretrained(v, 10);
    const auto set = synth::attack_week_corpus(v, "@alvo", 10);
    auto shuffled = set;
    // rewrite week-3 content; week-1 scores must not move
    Rng rng(1);
    for (auto& d : shuffled.documents)
        if (d.timestamp >= synth::day(14)) std::reverse(d.tokens.begin(), d.tokens.end());
    std::stable_sort(shuffled.documents.begin() + 340, shuffled.documents.end(),
                     [](const Document& a, const Document& b) { return a.id > b.id; });
    std::stable_sort(shuffled.documents.begin(), shuffled.documents.end(),
                     [](const Document& a, const Document& b) { return a.timestamp < b.timestamp; });
    const auto cfg = synth::small_config(10);
    const auto a = run_timeline(set, &pretrained, cfg, {v.lexicon()}, {"@alvo"}, weekly(2));
    const auto b = run_timeline(shuffled, &pretrained, cfg, {v.lexicon()}, {"@alvo"}, weekly(2));
    CHECK(*a[0].points[0].mean == *b[0].points[0].mean);
    CHECK(*a[0].points[1].mean == *b[0].points[1].mean);
}

TEST_CASE("annotate") {
    ScoreSeries s{"@ana", "valence", std::chrono::days{7}, {}};
    for (int w = 0; w < 3; ++w) s.points.push_back({synth::day(7 * w), 0.5, std::nullopt, 1, 10});
    CHECK(annotate(s, {}).markers.empty());
    CHECK(annotate(s, {}).warnings.empty());
    const std::vector<EventRecord> events{{synth::day(7), "@ana", "boundary"},
                                          {synth::day(-1), "@ana", "too early"},
                                          {synth::day(3), "@outro", "someone else"}};
    const auto a = annotate(s, events);
    REQUIRE(a.markers.size() == 1);
    CHECK(a.markers[0].point == 1);
    CHECK(a.warnings.size() == 1);
}

TEST_CASE("events csv and outputs") {
    std::istringstream in("date,entity,description\n2021-06-29,@ana,\"ataque, em rede\"\n");
    const auto ev = read_events_csv(in);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].description == "ataque, em rede");
    CHECK(ev[0].date == synth::day(28));
    std::istringstream bad_header("when,who,what\n");
    CHECK_THROWS_AS(read_events_csv(bad_header), ParseError);
    std::istringstream bad_date("date,entity,description\nontem,@a,x\n");
    CHECK_THROWS_AS(read_events_csv(bad_date), ParseError);

    ScoreSeries s{"@ana", "valence", std::chrono::days{7}, {}};
    s.points.push_back({synth::day(0), 0.25, 0.1, 2, 5});
    s.points.push_back({synth::day(7), std::nullopt, std::nullopt, 0, 0});
    std::ostringstream csv;
    write_series_csv({s}, csv);
    CHECK(csv.str() ==
          "window_start,entity,trait,mean,stdev,n_replications,n_documents\n"
          "2021-06-01T00:00:00Z,@ana,valence,0.25,0.1,2,5\n"
          "2021-06-08T00:00:00Z,@ana,valence,NA,NA,0,0\n");
    std::ostringstream svg;
    write_series_svg({annotate(s, {{synth::day(8), "@ana", "x"}})}, svg);
    CHECK(svg.str().find("<svg") != std::string::npos);
    CHECK(svg.str().find("class=\"event\"") != std::string::npos);
}
