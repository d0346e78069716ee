#include "framescore/chrono.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "framescore/csv.hpp"
#include "framescore/error.hpp"
#include "framescore/parallel.hpp"
#include "framescore/psych.hpp"
#include "svg.hpp"

namespace framescore {

std::vector<ScoreSeries> run_timeline(const DocumentSet& set, const EmbeddingSpace* pretrained,
                                      const TrainConfig& config, const std::vector<PolarLexicon>& lexicons,
                                      const std::vector<std::string>& entities, const TimelineOptions& options) {
    if (options.replications == 0) throw DomainError("replications must be at least 1");
    config.validate();
    const auto windows = options.origin ? window_split(set, options.window_length, *options.origin)
                                        : window_split(set, options.window_length);
    const std::size_t n_win = windows.size();
    const std::size_t n_rep = options.replications;
    const std::size_t n_lex = lexicons.size();
    const std::size_t n_ent = entities.size();

    // scores[((w * n_rep + r) * n_lex + l) * n_ent + e]
    std::vector<std::optional<double>> scores(n_win * n_rep * n_lex * n_ent);
    auto cell = [&](std::size_t w, std::size_t r, std::size_t l, std::size_t e) -> std::optional<double>& {
        return scores[((w * n_rep + r) * n_lex + l) * n_ent + e];
    };

    parallel_for(n_win * n_rep, options.jobs, [&](std::size_t job) {
        const std::size_t w = job / n_rep;
        const std::size_t r = job % n_rep;
        if (windows[w].documents.empty()) return;
        const DocumentSet window_set = as_document_set(windows[w], set.source_path);
        TrainConfig cfg = config;
        cfg.seed = config.seed + r;
        EmbeddingSpace space = init_space(window_set, pretrained, cfg);
        train(space, window_set, cfg);
        for (std::size_t l = 0; l < n_lex; ++l) {
            PolarLexicon lex;
            try {
                lex = balance(prune_oov(lexicons[l], space.vocab()), config.seed);
            } catch (const ValidationError&) {
                continue;  // a pole has no word in this window: scores stay missing
            }
            const auto s = score_entities(space, lex, entities);
            for (std::size_t e = 0; e < n_ent; ++e) cell(w, r, l, e) = s[e];
        }
    });

    std::vector<ScoreSeries> out;
    for (std::size_t e = 0; e < n_ent; ++e) {
        for (std::size_t l = 0; l < n_lex; ++l) {
            ScoreSeries series{entities[e], lexicons[l].trait, options.window_length, {}};
            for (std::size_t w = 0; w < n_win; ++w) {
                SeriesPoint p;
                p.window_start = windows[w].start;
                p.n_documents = windows[w].documents.size();
                std::vector<double> values;
                for (std::size_t r = 0; r < n_rep; ++r)
                    if (const auto& v = cell(w, r, l, e)) values.push_back(*v);
                p.n_replications = values.size();
                if (!values.empty()) p.mean = mean(values);
                if (values.size() >= 2) p.stdev = sample_stdev(values);
                series.points.push_back(p);
            }
            out.push_back(std::move(series));
        }
    }
    return out;
}

AnnotatedSeries annotate(const ScoreSeries& series, const std::vector<EventRecord>& events) {
    AnnotatedSeries out{series, {}, {}};
    for (const auto& ev : events) {
        if (ev.entity != series.entity) continue;
        bool placed = false;
        for (std::size_t i = 0; i < series.points.size(); ++i) {
            const Instant start = series.points[i].window_start;
            if (ev.date >= start && ev.date < start + series.window_length) {
                out.markers.push_back({i, ev});
                placed = true;
                break;
            }
        }
        if (!placed)
            out.warnings.push_back("event on " + format_date(ev.date) + " for " + ev.entity +
                                   " falls outside the series span");
    }
    return out;
}

std::vector<EventRecord> read_events_csv(std::istream& in) {
    std::vector<EventRecord> events;
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = csv::split(line, line_no);
        if (header) {
            header = false;
            if (fields.size() < 3 || fields[0] != "date" || fields[1] != "entity" || fields[2] != "description")
                throw ParseError("events CSV header must be date,entity,description", line_no);
            continue;
        }
        if (fields.size() != 3) throw ParseError("expected 3 fields, found " + std::to_string(fields.size()), line_no);
        EventRecord ev;
        try {
            ev.date = std::chrono::floor<std::chrono::days>(parse_timestamp(fields[0]));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        ev.entity = fields[1];
        ev.description = fields[2];
        events.push_back(std::move(ev));
    }
    return events;
}

std::vector<EventRecord> load_events_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open events file '" + path.string() + "'");
    return read_events_csv(in);
}

void write_series_csv(const std::vector<ScoreSeries>& series, std::ostream& out) {
    out << "window_start,entity,trait,mean,stdev,n_replications,n_documents\n";
    for (const auto& s : series)
        for (const auto& p : s.points) {
            out << format_timestamp(p.window_start) << ',' << csv::quote(s.entity) << ',' << csv::quote(s.trait) << ','
                << (p.mean ? format_real(*p.mean) : "NA") << ',' << (p.stdev ? format_real(*p.stdev) : "NA") << ','
                << p.n_replications << ',' << p.n_documents << '\n';
        }
}

void write_series_svg(const std::vector<AnnotatedSeries>& traits, std::ostream& out) {
    constexpr int width = 800;
    constexpr int height = 420;
    constexpr double left = 60, right = 150, top = 40, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    std::size_t n_points = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& t : traits) {
        n_points = std::max(n_points, t.series.points.size());
        for (const auto& p : t.series.points)
            if (p.mean) {
                lo = std::min(lo, *p.mean);
                hi = std::max(hi, *p.mean);
            }
    }
    if (!std::isfinite(lo)) {
        lo = -1.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-9) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    auto x_of = [&](std::size_t i) {
        return left + (n_points <= 1 ? plot_w / 2 : plot_w * static_cast<double>(i) / static_cast<double>(n_points - 1));
    };
    auto y_of = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

    svg::open(out, width, height);
    const std::string entity = traits.empty() ? "" : traits.front().series.entity;
    out << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << svg::escape(entity)
        << "</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << svg::num(top + plot_h) << "\" x2=\"" << svg::num(left + plot_w)
        << "\" y2=\"" << svg::num(top + plot_h) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << svg::num(top + plot_h)
        << "\" stroke=\"black\"/>\n";
    if (lo < 0 && hi > 0)
        out << "<line x1=\"" << left << "\" y1=\"" << svg::num(y_of(0)) << "\" x2=\"" << svg::num(left + plot_w)
            << "\" y2=\"" << svg::num(y_of(0)) << "\" stroke=\"#cccccc\" stroke-dasharray=\"4 4\"/>\n";
    out << "<text x=\"4\" y=\"" << svg::num(top + 4) << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << svg::num(hi) << "</text>\n";
    out << "<text x=\"4\" y=\"" << svg::num(top + plot_h) << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << svg::num(lo) << "</text>\n";
    if (!traits.empty())
        for (std::size_t i = 0; i < traits.front().series.points.size(); ++i)
            out << "<text x=\"" << svg::num(x_of(i)) << "\" y=\"" << svg::num(top + plot_h + 18)
                << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
                << format_date(traits.front().series.points[i].window_start).substr(5) << "</text>\n";

    for (std::size_t t = 0; t < traits.size(); ++t) {
        const auto color = svg::palette(t);
        const auto& pts = traits[t].series.points;
        std::string path;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!pts[i].mean) {
                if (!path.empty()) out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"" << path << "\"/>\n";
                path.clear();
                continue;
            }
            if (!path.empty()) path.push_back(' ');
            path += svg::num(x_of(i)) + "," + svg::num(y_of(*pts[i].mean));
        }
        if (!path.empty()) out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"" << path << "\"/>\n";
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (pts[i].mean)
                out << "<circle cx=\"" << svg::num(x_of(i)) << "\" cy=\"" << svg::num(y_of(*pts[i].mean))
                    << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << svg::num(left + plot_w + 12) << "\" y=\"" << svg::num(top + 16 * (t + 1))
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
            << svg::escape(traits[t].series.trait) << "</text>\n";
    }
    if (!traits.empty()) {
        for (const auto& m : traits.front().markers) {
            const double x = x_of(m.point);
            out << "<g class=\"event\"><title>" << svg::escape(format_date(m.event.date) + " " + m.event.description)
                << "</title><line x1=\"" << svg::num(x) << "\" y1=\"" << top << "\" x2=\"" << svg::num(x) << "\" y2=\""
                << svg::num(top + plot_h) << "\" stroke=\"red\" stroke-width=\"2\"/></g>\n";
        }
    }
    svg::close(out);
}

}  // namespace framescore
