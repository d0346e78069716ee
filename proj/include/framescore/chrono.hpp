#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "framescore/assoc.hpp"
#include "framescore/corpus.hpp"

namespace framescore {

struct EventRecord {
    Instant date;  // midnight UTC of the event day
    std::string entity;
    std::string description;
};

struct SeriesPoint {
    Instant window_start;
    std::optional<double> mean;
    std::optional<double> stdev;  // needs >= 2 scored replications
    std::size_t n_replications = 0;
    std::size_t n_documents = 0;
};

/// One entity's score trajectory for one trait, in window order.
struct ScoreSeries {
    std::string entity;
    std::string trait;
    std::chrono::seconds window_length{0};
    std::vector<SeriesPoint> points;
};

struct TimelineOptions {
    std::chrono::seconds window_length = std::chrono::days{7};
    /// Defaults to the earliest document's day.
    std::optional<Instant> origin;
    std::size_t replications = 10;
    /// Concurrent (window, replication) jobs; results do not depend on it.
    std::size_t jobs = 1;
};

/// Splits the corpus into windows and, per window, fine-tunes
/// `replications` spaces on that window alone and scores every entity under
/// every lexicon. Returns entity-major series (entity, then lexicon order),
/// each with one point per window.
std::vector<ScoreSeries> run_timeline(const DocumentSet& set, const EmbeddingSpace* pretrained,
                                      const TrainConfig& config, const std::vector<PolarLexicon>& lexicons,
                                      const std::vector<std::string>& entities, const TimelineOptions& options = {});

struct EventMarker {
    std::size_t point;
    EventRecord event;
};

struct AnnotatedSeries {
    ScoreSeries series;
    std::vector<EventMarker> markers;
    std::vector<std::string> warnings;
};

/// Maps the series entity's events onto the window whose [start, end)
/// contains the event date. Events outside the series span become warnings.
/// Events for other entities are ignored.
AnnotatedSeries annotate(const ScoreSeries& series, const std::vector<EventRecord>& events);

/// Reads `date,entity,description` (header required; the description may
/// be double-quoted and contain commas).
std::vector<EventRecord> read_events_csv(std::istream& in);
std::vector<EventRecord> load_events_csv(const std::filesystem::path& path);

/// `window_start,entity,trait,mean,stdev,n_replications,n_documents`.
void write_series_csv(const std::vector<ScoreSeries>& series, std::ostream& out);

/// Line plot of one entity's traits over time with event markers.
void write_series_svg(const std::vector<AnnotatedSeries>& traits, std::ostream& out);

}  // namespace framescore
