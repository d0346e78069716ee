#include "framescore/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "framescore/assoc.hpp"
#include "framescore/chrono.hpp"
#include "framescore/corpus.hpp"
#include "framescore/csv.hpp"
#include "framescore/error.hpp"
#include "framescore/lexicon.hpp"
#include "framescore/planar.hpp"
#include "framescore/psych.hpp"
#include "framescore/unicode.hpp"
#include "framescore/vecstore.hpp"

#ifndef FRAMESCORE_VERSION
#define FRAMESCORE_VERSION "dev"
#endif

namespace framescore::cli {

namespace fs = std::filesystem;

namespace {

/// Raised for configuration problems that are the caller's usage mistake.
class UsageError : public Error {
public:
    using Error::Error;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw ValidationError("setting '" + key + "' has invalid value '" + value + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ValidationError("setting '" + key + "' expects true or false, got '" + value + "'");
}

std::string dashed(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

struct Method {
    std::string name;
    std::string pretrained_key;
    Algorithm algorithm;
    double lock_factor;
};

const std::vector<Method>& known_methods() {
    static const std::vector<Method> methods{
        {"locked-sgns/cbow", "pretrained_sgns", Algorithm::Cbow, 0.0},
        {"locked-sgns/sgns", "pretrained_sgns", Algorithm::Sgns, 0.0},
        {"unlocked-cbow/sgns", "pretrained_cbow", Algorithm::Sgns, 1.0},
        {"locked-glove/sgns", "pretrained_glove", Algorithm::Sgns, 0.0},
    };
    return methods;
}

const std::vector<std::pair<std::string, std::string>>& setting_help() {
    static const std::vector<std::pair<std::string, std::string>> help{
        {"corpus", "JSON-lines corpus file"},
        {"pretrained", "pretrained vector file (Word2Vec or GloVe text)"},
        {"pretrained_sgns", "SGNS-pretrained vectors for the mtmm methods"},
        {"pretrained_cbow", "CBOW-pretrained vectors for the mtmm methods"},
        {"pretrained_glove", "GloVe-pretrained vectors for the mtmm methods"},
        {"lexicons", "comma-separated lexicon JSON files"},
        {"entities", "file with one entity handle per line"},
        {"output_dir", "directory receiving all outputs"},
        {"seed", "base random seed"},
        {"jobs", "replications/windows run concurrently"},
        {"algorithm", "cbow or sgns"},
        {"dimension", "embedding dimension"},
        {"window", "maximum context window per side"},
        {"negatives", "negative samples per positive pair"},
        {"epochs", "training passes"},
        {"lr_start", "initial learning rate"},
        {"lr_end", "final learning rate"},
        {"min_count", "minimum corpus count for new words"},
        {"subsample", "frequent-word subsampling threshold"},
        {"unigram_exponent", "negative sampling exponent"},
        {"lock_factor", "gradient multiplier for pretrained rows (0 freezes)"},
        {"workers", "threads per training run (>1 is nondeterministic)"},
        {"window_days", "timeline window length in days"},
        {"origin", "timeline origin date (default: first document's day)"},
        {"replications", "model fits per configuration or window"},
        {"include_null", "add a random-word null lexicon"},
        {"null_size", "null lexicon pole size (0: match the first lexicon)"},
        {"method", "method label written to score files"},
        {"methods", "comma-separated mtmm methods"},
    };
    return help;
}

struct Context {
    RunConfig config;
    std::ostream& out;
    std::ostream& err;
    std::string command;
    std::vector<std::string> outputs;
    std::vector<std::uint64_t> seeds;
};

std::string require(const std::string& value, const char* key) {
    if (value.empty()) throw UsageError(std::string("missing required setting '") + key + "' (--" + dashed(key) + ")");
    return value;
}

std::vector<std::string> load_entities(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open entities file '" + path + "'");
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '%') continue;
        const auto handle = unicode::to_lower(line);
        if (std::find(out.begin(), out.end(), handle) == out.end()) out.push_back(handle);
    }
    return out;
}

std::vector<PolarLexicon> load_lexicons(const RunConfig& cfg) {
    if (cfg.lexicon_paths.empty()) throw UsageError("missing required setting 'lexicons' (--lexicons)");
    std::vector<PolarLexicon> out;
    for (const auto& p : cfg.lexicon_paths) out.push_back(load_lexicon(p));
    return out;
}

fs::path output_path(Context& ctx, const std::string& name) {
    fs::create_directories(ctx.config.output_dir);
    ctx.outputs.push_back(name);
    return fs::path(ctx.config.output_dir) / name;
}

std::ofstream open_output(Context& ctx, const std::string& name) {
    const auto path = output_path(ctx, name);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

void write_manifest(Context& ctx) {
    std::string canonical;
    for (const auto& [k, v] : ctx.config.settings) canonical += k + "=" + v + "\n";
    nlohmann::ordered_json manifest;
    manifest["tool"] = "framescore";
    manifest["version"] = FRAMESCORE_VERSION;
    manifest["command"] = ctx.command;
    manifest["config_hash"] = fnv1a_hex(canonical);
    manifest["deterministic"] = ctx.config.train.workers == 1;
    manifest["settings"] = ctx.config.settings;
    manifest["seeds"] = ctx.seeds;
    manifest["outputs"] = ctx.outputs;
    const auto path = fs::path(ctx.config.output_dir) / "manifest.json";
    fs::create_directories(ctx.config.output_dir);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << manifest.dump(2) << '\n';
}

std::optional<EmbeddingSpace> load_pretrained(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return load_vectors(path);
}

// Adopts the pretrained dimension unless the user pinned one.
TrainConfig effective_train(const RunConfig& cfg, const EmbeddingSpace* pretrained) {
    TrainConfig t = cfg.train;
    if (pretrained && !cfg.explicit_keys.count("dimension")) t.dimension = pretrained->dimension();
    return t;
}

Vocabulary union_vocab(const Vocabulary& a, const EmbeddingSpace* pretrained) {
    Vocabulary out;
    if (pretrained)
        for (const auto& w : pretrained->vocab().words()) out.add(w);
    for (const auto& w : a.words())
        if (!out.contains(w)) out.add(w);
    return out;
}

PolarLexicon make_null(const RunConfig& cfg, const DocumentSet& set, const EmbeddingSpace* pretrained,
                       const std::vector<PolarLexicon>& lexicons, const std::vector<std::string>& entities) {
    const Vocabulary corpus_vocab = build_vocab(set, cfg.train.min_count);
    std::size_t size = cfg.null_size;
    if (size == 0) {
        const auto known = union_vocab(corpus_vocab, pretrained);
        size = balance(prune_oov(lexicons.front(), known), cfg.seed).positive.size();
    }
    std::set<std::string> exclude(entities.begin(), entities.end());
    for (const auto& lex : lexicons)
        for (const auto& w : lex.words()) exclude.insert(w);
    return sample_null(corpus_vocab, size, exclude, cfg.seed);
}

void report_missing(Context& ctx, const std::vector<ReplicatedScores>& results) {
    for (const auto& r : results)
        for (const auto& e : r.missing_entities)
            ctx.err << "warning: entity '" << e << "' is out of vocabulary in every replication (" << r.matrix.method()
                    << "/" << r.matrix.trait() << ")\n";
}

std::vector<std::uint64_t> replication_seeds(std::uint64_t base, std::size_t n) {
    std::vector<std::uint64_t> seeds;
    for (std::size_t r = 0; r < n; ++r) seeds.push_back(base + r);
    return seeds;
}

int cmd_ingest(Context& ctx) {
    const auto set = ingest_jsonl(require(ctx.config.corpus_path, "corpus"));
    ctx.out << "documents: " << set.documents.size() << '\n';
    ctx.out << "tokens: " << set.token_count() << '\n';
    if (!set.documents.empty()) {
        ctx.out << "first: " << format_timestamp(set.documents.front().timestamp) << '\n';
        ctx.out << "last: " << format_timestamp(set.documents.back().timestamp) << '\n';
        const auto origin = ctx.config.origin.empty() ? default_origin(set) : parse_timestamp(ctx.config.origin);
        const auto windows = window_split(set, std::chrono::days{ctx.config.window_days}, origin);
        ctx.out << "windows: " << windows.size() << " of " << ctx.config.window_days << " days from "
                << format_date(origin) << '\n';
    }
    ctx.out << "vocabulary (min_count " << ctx.config.train.min_count
            << "): " << build_vocab(set, ctx.config.train.min_count).size() << '\n';
    return 0;
}

int cmd_train(Context& ctx, const std::string& out_name) {
    const auto set = ingest_jsonl(require(ctx.config.corpus_path, "corpus"));
    const auto pretrained = load_pretrained(ctx.config.pretrained_path);
    const auto* pre = pretrained ? &*pretrained : nullptr;
    const TrainConfig train_cfg = effective_train(ctx.config, pre);
    EmbeddingSpace space = init_space(set, pre, train_cfg);
    const auto report = train(space, set, train_cfg);
    if (report.status == TrainStatus::EmptyCorpus) ctx.err << "warning: no trainable tokens; space left untrained\n";
    const auto path = output_path(ctx, out_name);
    save_vectors(space, path);
    ctx.seeds = {train_cfg.seed};
    for (std::size_t e = 0; e < report.epoch_loss.size(); ++e)
        ctx.out << "epoch " << e + 1 << " loss " << format_real(report.epoch_loss[e]) << '\n';
    ctx.out << "saved " << space.size() << " x " << space.dimension() << " space to " << path.string() << '\n';
    write_manifest(ctx);
    return 0;
}

int cmd_score(Context& ctx) {
    const auto& cfg = ctx.config;
    const auto set = ingest_jsonl(require(cfg.corpus_path, "corpus"));
    const auto pretrained = load_pretrained(cfg.pretrained_path);
    const auto* pre = pretrained ? &*pretrained : nullptr;
    auto lexicons = load_lexicons(cfg);
    const auto entities = load_entities(require(cfg.entities_path, "entities"));
    if (cfg.include_null) lexicons.push_back(make_null(cfg, set, pre, lexicons, entities));

    const TrainConfig train_cfg = effective_train(cfg, pre);
    const auto results =
        replicate_scores(set, pre, train_cfg, lexicons, entities, {cfg.replications, cfg.jobs, cfg.method});
    report_missing(ctx, results);
    std::vector<ScoreMatrix> matrices;
    for (const auto& r : results) matrices.push_back(r.matrix);
    {
        auto out = open_output(ctx, "scores.csv");
        write_scores_csv(matrices, out);
    }
    {
        auto out = open_output(ctx, "scores_mean.csv");
        write_means_csv(matrices, out);
    }
    ctx.seeds = replication_seeds(train_cfg.seed, cfg.replications);
    ctx.out << "scored " << entities.size() << " entities x " << lexicons.size() << " traits x " << cfg.replications
            << " replications into " << cfg.output_dir << '\n';
    write_manifest(ctx);
    return 0;
}

int cmd_mtmm(Context& ctx) {
    const auto& cfg = ctx.config;
    const auto set = ingest_jsonl(require(cfg.corpus_path, "corpus"));
    auto lexicons = load_lexicons(cfg);
    const auto entities = load_entities(require(cfg.entities_path, "entities"));

    std::vector<Method> methods;
    for (const auto& name : cfg.methods) {
        const auto it = std::find_if(known_methods().begin(), known_methods().end(),
                                     [&](const Method& m) { return m.name == name; });
        if (it == known_methods().end()) throw UsageError("unknown mtmm method '" + name + "'");
        methods.push_back(*it);
    }
    if (methods.empty()) throw UsageError("no mtmm methods selected");

    std::map<std::string, std::shared_ptr<EmbeddingSpace>> cache;
    auto pretrained_for = [&](const Method& m) {
        const std::string& path = cfg.settings.at(m.pretrained_key);
        require(path, m.pretrained_key.c_str());
        auto& slot = cache[path];
        if (!slot) slot = std::make_shared<EmbeddingSpace>(load_vectors(path));
        return slot;
    };

    if (cfg.include_null) {
        const auto first = pretrained_for(methods.front());
        lexicons.push_back(make_null(cfg, set, first.get(), lexicons, entities));
    }

    std::vector<ScoreMatrix> matrices;
    for (const auto& m : methods) {
        const auto pre = pretrained_for(m);
        TrainConfig t = effective_train(cfg, pre.get());
        t.algorithm = m.algorithm;
        t.lock_factor = m.lock_factor;
        const auto results = replicate_scores(set, pre.get(), t, lexicons, entities, {cfg.replications, cfg.jobs, m.name});
        report_missing(ctx, results);
        for (const auto& r : results) matrices.push_back(r.matrix);
        ctx.err << "fitted " << m.name << '\n';
    }
    const MtmmMatrix mtmm = build_mtmm(matrices);
    {
        auto out = open_output(ctx, "mtmm.csv");
        write_mtmm_csv(mtmm, out);
    }
    {
        auto out = open_output(ctx, "mtmm_scores.csv");
        write_scores_csv(matrices, out);
    }
    ctx.seeds = replication_seeds(cfg.train.seed, cfg.replications);
    ctx.out << "wrote " << mtmm.size() << "x" << mtmm.size() << " MTMM (" << methods.size() << " methods x "
            << lexicons.size() << " traits, n=" << mtmm.n_cases << ")\n";
    ctx.out << "critical |r| at p<0.05: " << format_real(critical_pearson_r(std::max<std::size_t>(mtmm.n_cases, 3)))
            << '\n';
    write_manifest(ctx);
    return 0;
}

int cmd_compare(Context& ctx, const std::string& scores_path, const std::string& groups_path, std::string method) {
    const std::string means_file =
        scores_path.empty() ? (fs::path(ctx.config.output_dir) / "scores_mean.csv").string() : scores_path;
    std::ifstream means_in(means_file, std::ios::binary);
    if (!means_in) throw IoError("cannot open scores file '" + means_file + "'");
    std::ifstream groups_in(require(groups_path, "groups"), std::ios::binary);
    if (!groups_in) throw IoError("cannot open groups file '" + groups_path + "'");

    std::map<std::string, std::string> group_of;
    std::vector<std::string> group_names;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(groups_in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = csv::split(line, line_no);
        if (line_no == 1 && f.size() >= 2 && f[0] == "entity" && f[1] == "group") continue;
        if (f.size() != 2) throw ParseError(groups_path + ": expected entity,group", line_no);
        const auto handle = unicode::to_lower(trim(f[0]));
        const auto group = trim(f[1]);
        group_of[handle] = group;
        if (std::find(group_names.begin(), group_names.end(), group) == group_names.end()) group_names.push_back(group);
    }
    if (group_names.size() != 2)
        throw ValidationError(groups_path + ": expected exactly two groups, found " + std::to_string(group_names.size()));

    // trait -> (x scores, y scores), in first-seen trait order
    std::vector<std::string> traits;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_trait;
    line_no = 0;
    while (std::getline(means_in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = csv::split(line, line_no);
        if (line_no == 1) {
            if (f.size() < 5 || f[0] != "entity" || f[3] != "mean")
                throw ParseError(means_file + ": expected header entity,trait,method,mean,n_replications", 1);
            continue;
        }
        if (f.size() != 5) throw ParseError(means_file + ": expected 5 fields", line_no);
        if (method.empty()) method = f[2];
        if (f[2] != method || f[3] == "NA") continue;
        const auto g = group_of.find(f[0]);
        if (g == group_of.end()) continue;
        if (!by_trait.count(f[1])) traits.push_back(f[1]);
        auto& slot = by_trait[f[1]];
        const double v = parse_number<double>("mean", f[3]);
        (g->second == group_names[0] ? slot.first : slot.second).push_back(v);
    }
    if (traits.empty()) throw ValidationError("no scored entities of either group for method '" + method + "'");

    auto out = open_output(ctx, "compare.csv");
    out << "trait,t,df,p,d,n_x,n_y\n";
    for (const auto& trait : traits) {
        const auto& [x, y] = by_trait[trait];
        const TTest t = two_sample_t(x, y);
        const double d = cohens_d_groups(x, y);
        out << trait << ',' << format_real(t.t) << ',' << t.df << ',' << format_real(t.p) << ',' << format_real(d)
            << ',' << x.size() << ',' << y.size() << '\n';
        ctx.out << trait << ": t(" << t.df << ")=" << format_real(t.t) << " p=" << format_real(t.p)
                << " d=" << format_real(d) << " (" << group_names[0] << " n=" << x.size() << " vs " << group_names[1]
                << " n=" << y.size() << ")\n";
    }
    write_manifest(ctx);
    return 0;
}

std::string file_safe(const std::string& s) {
    std::string out;
    for (unsigned char c : s) out.push_back(std::isalnum(c) || c == '-' || c == '_' ? static_cast<char>(c) : '_');
    return out;
}

int cmd_timeline(Context& ctx, const std::string& events_path, bool svg) {
    const auto& cfg = ctx.config;
    const auto set = ingest_jsonl(require(cfg.corpus_path, "corpus"));
    const auto pretrained = load_pretrained(cfg.pretrained_path);
    const auto* pre = pretrained ? &*pretrained : nullptr;
    const auto lexicons = load_lexicons(cfg);
    const auto entities = load_entities(require(cfg.entities_path, "entities"));
    if (cfg.window_days <= 0) throw UsageError("window_days must be positive");

    TimelineOptions opts;
    opts.window_length = std::chrono::days{cfg.window_days};
    if (!cfg.origin.empty()) opts.origin = parse_timestamp(cfg.origin);
    opts.replications = cfg.replications;
    opts.jobs = cfg.jobs;
    const auto series = run_timeline(set, pre, effective_train(cfg, pre), lexicons, entities, opts);
    {
        auto out = open_output(ctx, "series.csv");
        write_series_csv(series, out);
    }
    const auto events = events_path.empty() ? std::vector<EventRecord>{} : load_events_csv(events_path);
    std::vector<std::string> warned;
    for (std::size_t e = 0; e < entities.size(); ++e) {
        std::vector<AnnotatedSeries> traits;
        for (std::size_t l = 0; l < lexicons.size(); ++l) traits.push_back(annotate(series[e * lexicons.size() + l], events));
        if (!traits.empty())
            for (const auto& w : traits.front().warnings) ctx.err << "warning: " << w << '\n';
        if (svg) {
            auto out = open_output(ctx, "timeline_" + file_safe(entities[e]) + ".svg");
            write_series_svg(traits, out);
        }
    }
    ctx.seeds = replication_seeds(cfg.train.seed, cfg.replications);
    ctx.out << "wrote " << series.size() << " series to " << cfg.output_dir << '\n';
    write_manifest(ctx);
    return 0;
}

int cmd_tsne(Context& ctx, const std::string& vectors_path, double perplexity, std::size_t iterations) {
    const auto& cfg = ctx.config;
    const std::string path = vectors_path.empty() ? (fs::path(cfg.output_dir) / "space.vec").string() : vectors_path;
    const EmbeddingSpace space = load_vectors(path);
    const auto lexicons = load_lexicons(cfg);
    const auto entities = cfg.entities_path.empty() ? std::vector<std::string>{} : load_entities(cfg.entities_path);

    std::vector<std::string> words;
    std::map<std::string, std::string> groups;
    auto add = [&](const std::string& w, const std::string& group) {
        if (!space.vocab().contains(w) || groups.count(w)) return;
        words.push_back(w);
        groups[w] = group;
    };
    for (const auto& e : entities) add(e, "handle");
    for (const auto& lex : lexicons) {
        for (const auto& w : lex.positive) add(w, lex.trait + "+");
        for (const auto& w : lex.negative) add(w, lex.trait + "-");
    }
    Matrix vectors(static_cast<Eigen::Index>(words.size()), static_cast<Eigen::Index>(space.dimension()));
    for (std::size_t i = 0; i < words.size(); ++i)
        vectors.row(static_cast<Eigen::Index>(i)) = space.input().row(static_cast<Eigen::Index>(space.vocab().at(words[i])));

    TsneOptions opts;
    opts.perplexity = perplexity;
    opts.iterations = iterations;
    opts.seed = cfg.seed;
    const auto proj = tsne(vectors, words, opts);
    const auto stem = output_path(ctx, "projection");
    ctx.outputs.back() = "projection.csv";
    ctx.outputs.push_back("projection.svg");
    export_projection(proj, groups, stem);
    ctx.seeds = {cfg.seed};
    ctx.out << "projected " << words.size() << " words; KL " << format_real(proj.kl_initial) << " -> "
            << format_real(proj.kl_final) << '\n';
    write_manifest(ctx);
    return 0;
}

int cmd_analogy(Context& ctx, const std::string& vectors_path, const std::vector<std::string>& words) {
    const EmbeddingSpace space = load_vectors(require(vectors_path, "vectors"));
    std::vector<std::string> lowered;
    for (const auto& w : words) lowered.push_back(unicode::to_lower(w));
    ctx.out << analogy(space, lowered[0], lowered[1], lowered[2]) << '\n';
    return 0;
}

}  // namespace

const std::map<std::string, std::string>& default_settings() {
    static const std::map<std::string, std::string> defaults = [] {
        const TrainConfig t;
        std::map<std::string, std::string> d{
            {"corpus", ""},
            {"pretrained", ""},
            {"pretrained_sgns", ""},
            {"pretrained_cbow", ""},
            {"pretrained_glove", ""},
            {"lexicons", ""},
            {"entities", ""},
            {"output_dir", "out"},
            {"seed", "1"},
            {"jobs", "1"},
            {"algorithm", std::string(to_string(t.algorithm))},
            {"dimension", std::to_string(t.dimension)},
            {"window", std::to_string(t.window)},
            {"negatives", std::to_string(t.negatives)},
            {"epochs", std::to_string(t.epochs)},
            {"lr_start", format_real(t.lr_start)},
            {"lr_end", format_real(t.lr_end)},
            {"min_count", std::to_string(t.min_count)},
            {"subsample", format_real(t.subsample)},
            {"unigram_exponent", format_real(t.unigram_exponent)},
            {"lock_factor", format_real(t.lock_factor)},
            {"workers", std::to_string(t.workers)},
            {"window_days", "7"},
            {"origin", ""},
            {"replications", "10"},
            {"include_null", "true"},
            {"null_size", "0"},
            {"method", "default"},
            {"methods", "locked-sgns/cbow,locked-sgns/sgns,unlocked-cbow/sgns,locked-glove/sgns"},
        };
        return d;
    }();
    return defaults;
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path.string() + "'");
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(path.string() + ": expected key = value", line_no);
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '-', '_');
        if (!default_settings().count(key))
            throw ValidationError(path.string() + ": unknown setting '" + key + "' at line " + std::to_string(line_no));
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

RunConfig resolve(const std::map<std::string, std::string>& settings, const std::set<std::string>& explicit_keys) {
    RunConfig c;
    c.settings = default_settings();
    for (const auto& [k, v] : settings) c.settings[k] = v;
    c.explicit_keys = explicit_keys;
    const auto& s = c.settings;
    c.corpus_path = s.at("corpus");
    c.pretrained_path = s.at("pretrained");
    c.pretrained_sgns = s.at("pretrained_sgns");
    c.pretrained_cbow = s.at("pretrained_cbow");
    c.pretrained_glove = s.at("pretrained_glove");
    c.lexicon_paths = split_list(s.at("lexicons"));
    c.entities_path = s.at("entities");
    c.output_dir = s.at("output_dir");
    c.seed = parse_number<std::uint64_t>("seed", s.at("seed"));
    c.jobs = parse_number<std::size_t>("jobs", s.at("jobs"));
    c.train.algorithm = parse_algorithm(s.at("algorithm"));
    c.train.dimension = parse_number<std::size_t>("dimension", s.at("dimension"));
    c.train.window = parse_number<std::size_t>("window", s.at("window"));
    c.train.negatives = parse_number<std::size_t>("negatives", s.at("negatives"));
    c.train.epochs = parse_number<std::size_t>("epochs", s.at("epochs"));
    c.train.lr_start = parse_number<double>("lr_start", s.at("lr_start"));
    c.train.lr_end = parse_number<double>("lr_end", s.at("lr_end"));
    c.train.min_count = parse_number<std::uint64_t>("min_count", s.at("min_count"));
    c.train.subsample = parse_number<double>("subsample", s.at("subsample"));
    c.train.unigram_exponent = parse_number<double>("unigram_exponent", s.at("unigram_exponent"));
    c.train.lock_factor = parse_number<double>("lock_factor", s.at("lock_factor"));
    c.train.workers = parse_number<std::size_t>("workers", s.at("workers"));
    c.train.seed = c.seed;
    c.window_days = parse_number<int>("window_days", s.at("window_days"));
    c.origin = s.at("origin");
    c.replications = parse_number<std::size_t>("replications", s.at("replications"));
    c.include_null = parse_bool("include_null", s.at("include_null"));
    c.null_size = parse_number<std::size_t>("null_size", s.at("null_size"));
    c.method = s.at("method");
    c.methods = split_list(s.at("methods"));
    if (c.replications == 0) throw ValidationError("replications must be at least 1");
    if (c.jobs == 0) throw ValidationError("jobs must be at least 1");
    c.train.validate();
    return c;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"framescore: corpus-level framing scores for named entities from fine-tuned word embeddings"};
    app.name("framescore");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", FRAMESCORE_VERSION);

    std::string config_path;
    app.add_option("--config", config_path, "key = value configuration file (flags override it)");
    std::map<std::string, std::string> flag_values;
    std::map<std::string, CLI::Option*> flag_options;
    for (const auto& [key, help] : setting_help())
        flag_options[key] = app.add_option("--" + dashed(key), flag_values[key], help)
                                ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto* ingest = app.add_subcommand("ingest", "validate and summarize a corpus file");
    auto* train_cmd = app.add_subcommand("train", "fit one space and save it in Word2Vec text format");
    std::string train_out = "space.vec";
    train_cmd->add_option("--out", train_out, "file name under output_dir");
    auto* score = app.add_subcommand("score", "replicated association scores for every trait");
    auto* mtmm = app.add_subcommand("mtmm", "multi-trait multi-method matrix over the four fine-tuning methods");
    auto* compare = app.add_subcommand("compare", "two-group t-tests and Cohen's d on mean scores");
    std::string scores_path;
    std::string groups_path;
    std::string compare_method;
    compare->add_option("--scores", scores_path, "mean scores CSV (default: output_dir/scores_mean.csv)");
    compare->add_option("--groups", groups_path, "CSV of entity,group with exactly two groups")->required();
    compare->add_option("--compare-method", compare_method, "method label to compare (default: first in file)");
    auto* timeline = app.add_subcommand("timeline", "per-window scores over time");
    std::string events_path;
    bool svg = false;
    timeline->add_option("--events", events_path, "CSV of date,entity,description");
    timeline->add_flag("--svg", svg, "write one SVG plot per entity");
    auto* tsne_cmd = app.add_subcommand("tsne", "2-D t-SNE projection of handles and lexicon words");
    std::string vectors_path;
    double perplexity = 30.0;
    std::size_t iterations = 1000;
    tsne_cmd->add_option("--vectors", vectors_path, "vector file (default: output_dir/space.vec)");
    tsne_cmd->add_option("--perplexity", perplexity, "t-SNE perplexity");
    tsne_cmd->add_option("--iterations", iterations, "t-SNE iterations");
    auto* analogy_cmd = app.add_subcommand("analogy", "a is to b as c is to ?");
    std::vector<std::string> analogy_words;
    analogy_cmd->add_option("--vectors", vectors_path, "vector file")->required();
    analogy_cmd->add_option("words", analogy_words, "a b c")->expected(3)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << FRAMESCORE_VERSION << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    Context ctx{{}, out, err, sub->get_name(), {}, {}};
    try {
        std::map<std::string, std::string> settings;
        std::set<std::string> explicit_keys;
        if (!config_path.empty()) {
            settings = read_config_file(config_path);
            for (const auto& [k, v] : settings) explicit_keys.insert(k);
        }
        for (const auto& [key, opt] : flag_options)
            if (opt->count() > 0) {
                settings[key] = flag_values[key];
                explicit_keys.insert(key);
            }
        ctx.config = resolve(settings, explicit_keys);

        if (sub == ingest) return cmd_ingest(ctx);
        if (sub == train_cmd) return cmd_train(ctx, train_out);
        if (sub == score) return cmd_score(ctx);
        if (sub == mtmm) return cmd_mtmm(ctx);
        if (sub == compare) return cmd_compare(ctx, scores_path, groups_path, compare_method);
        if (sub == timeline) return cmd_timeline(ctx, events_path, svg);
        if (sub == tsne_cmd) return cmd_tsne(ctx, vectors_path, perplexity, iterations);
        if (sub == analogy_cmd) return cmd_analogy(ctx, vectors_path, analogy_words);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace framescore::cli
