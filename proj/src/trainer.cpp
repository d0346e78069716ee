#include "framescore/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "framescore/error.hpp"

namespace framescore {

namespace {

constexpr std::uint64_t kInitStream = 0x5851F42D4C957F2DULL;
constexpr std::uint64_t kTrainStream = 0x14057B7EF767814FULL;

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// -log σ(x), computed without overflow.
double neg_log_sigmoid(double x) { return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x)); }

struct Corpus {
    std::vector<std::vector<std::uint32_t>> sentences;
    std::uint64_t words = 0;
};

Corpus encode(const DocumentSet& set, const Vocabulary& vocab) {
    Corpus corpus;
    corpus.sentences.reserve(set.documents.size());
    for (const auto& doc : set.documents) {
        std::vector<std::uint32_t> sentence;
        sentence.reserve(doc.tokens.size());
        for (const auto& tok : doc.tokens) {
            if (auto i = vocab.find(tok); i && vocab.count(*i) > 0) sentence.push_back(static_cast<std::uint32_t>(*i));
        }
        corpus.words += sentence.size();
        if (!sentence.empty()) corpus.sentences.push_back(std::move(sentence));
    }
    return corpus;
}

class Worker {
public:
    Worker(EmbeddingSpace& space, const TrainConfig& config, const NegativeSamplingTable& table,
           const std::vector<double>& keep_prob, std::uint64_t seed)
        : config_(config),
          table_(table),
          keep_prob_(keep_prob),
          rng_(seed),
          dim_(space.dimension()),
          input_(space.input().data()),
          output_(space.output().data()),
          lock_(space.lock_mask()),
          hidden_(dim_),
          error_(dim_) {}

    // Processes one sentence at the given learning rate schedule.
    template <typename LrFn>
    void sentence(const std::vector<std::uint32_t>& raw, LrFn&& lr_at) {
        kept_.clear();
        for (auto w : raw) {
            if (keep_prob_[w] >= 1.0 || rng_.uniform() < keep_prob_[w]) kept_.push_back(w);
        }
        for (std::size_t pos = 0; pos < kept_.size(); ++pos) {
            const double lr = lr_at();
            const auto reach = static_cast<std::ptrdiff_t>(rng_.below(config_.window) + 1);
            const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(pos) - reach);
            const auto hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(kept_.size()) - 1,
                                                     static_cast<std::ptrdiff_t>(pos) + reach);
            if (config_.algorithm == Algorithm::Sgns) {
                for (auto j = lo; j <= hi; ++j) {
                    if (j == static_cast<std::ptrdiff_t>(pos)) continue;
                    sgns_pair(kept_[pos], kept_[static_cast<std::size_t>(j)], lr);
                }
            } else {
                context_.clear();
                for (auto j = lo; j <= hi; ++j)
                    if (j != static_cast<std::ptrdiff_t>(pos)) context_.push_back(kept_[static_cast<std::size_t>(j)]);
                if (!context_.empty()) cbow(kept_[pos], lr);
            }
        }
        // Positions removed by subsampling still advance the schedule.
        for (std::size_t i = kept_.size(); i < raw.size(); ++i) lr_at();
    }

    double loss = 0.0;
    std::uint64_t pairs = 0;

private:
    double* in_row(std::size_t w) { return input_ + w * dim_; }
    double* out_row(std::size_t w) { return output_ + w * dim_; }
    double lock_scale(std::size_t w) const { return lock_[w] ? config_.lock_factor : 1.0; }

    // Accumulates into error_ the gradient step for predictor h and updates
    // output rows of the target and its negatives.
    void negative_sampling(const double* h, std::size_t target, double lr) {
        std::fill(error_.begin(), error_.end(), 0.0);
        for (std::size_t k = 0; k <= config_.negatives; ++k) {
            std::size_t word;
            double label;
            if (k == 0) {
                word = target;
                label = 1.0;
            } else {
                word = draw_negative(table_, rng_);
                if (word == target) continue;
                label = 0.0;
            }
            double* u = out_row(word);
            double f = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) f += h[i] * u[i];
            loss += label > 0 ? neg_log_sigmoid(f) : neg_log_sigmoid(-f);
            const double g = (label - sigmoid(f)) * lr;
            for (std::size_t i = 0; i < dim_; ++i) error_[i] += g * u[i];
            for (std::size_t i = 0; i < dim_; ++i) u[i] += g * h[i];
        }
        ++pairs;
    }

    void sgns_pair(std::size_t center, std::size_t context, double lr) {
        double* v = in_row(center);
        negative_sampling(v, context, lr);
        const double scale = lock_scale(center);
        if (scale == 0.0) return;
        for (std::size_t i = 0; i < dim_; ++i) v[i] += scale * error_[i];
    }

    void cbow(std::size_t center, double lr) {
        std::fill(hidden_.begin(), hidden_.end(), 0.0);
        for (auto c : context_) {
            const double* v = in_row(c);
            for (std::size_t i = 0; i < dim_; ++i) hidden_[i] += v[i];
        }
        const double inv = 1.0 / static_cast<double>(context_.size());
        for (auto& x : hidden_) x *= inv;
        negative_sampling(hidden_.data(), center, lr);
        for (auto c : context_) {
            const double scale = lock_scale(c) * inv;
            if (scale == 0.0) continue;
            double* v = in_row(c);
            for (std::size_t i = 0; i < dim_; ++i) v[i] += scale * error_[i];
        }
    }

    const TrainConfig& config_;
    const NegativeSamplingTable& table_;
    const std::vector<double>& keep_prob_;
    Rng rng_;
    std::size_t dim_;
    double* input_;
    double* output_;
    const std::vector<std::uint8_t>& lock_;
    std::vector<double> hidden_;
    std::vector<double> error_;
    std::vector<std::uint32_t> kept_;
    std::vector<std::uint32_t> context_;
};

}  // namespace

std::string_view to_string(Algorithm a) { return a == Algorithm::Cbow ? "cbow" : "sgns"; }

Algorithm parse_algorithm(std::string_view text) {
    std::string lower(text);
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "cbow") return Algorithm::Cbow;
    if (lower == "sgns" || lower == "skipgram" || lower == "sg") return Algorithm::Sgns;
    throw ValidationError("unknown algorithm '" + std::string(text) + "' (expected cbow or sgns)");
}

void TrainConfig::validate() const {
    if (dimension == 0) throw ValidationError("dimension must be positive");
    if (window == 0) throw ValidationError("window must be positive");
    if (negatives == 0) throw ValidationError("negatives must be positive");
    if (epochs == 0) throw ValidationError("epochs must be positive");
    if (!(lr_start > 0) || !(lr_end > 0)) throw ValidationError("learning rates must be positive");
    if (lr_end > lr_start) throw ValidationError("lr_end must not exceed lr_start");
    if (min_count == 0) throw ValidationError("min_count must be positive");
    if (!(subsample >= 0)) throw ValidationError("subsample must be nonnegative");
    if (!std::isfinite(unigram_exponent)) throw ValidationError("unigram_exponent must be finite");
    if (!(lock_factor >= 0) || !std::isfinite(lock_factor)) throw ValidationError("lock_factor must be nonnegative");
    if (workers == 0) throw ValidationError("workers must be positive");
}

NegativeSamplingTable::NegativeSamplingTable(const Vocabulary& vocab, double exponent) {
    double total = 0.0;
    std::vector<double> mass;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        if (vocab.count(i) == 0) continue;
        const double m = std::pow(static_cast<double>(vocab.count(i)), exponent);
        ordinals_.push_back(i);
        mass.push_back(m);
        total += m;
    }
    cumulative_.resize(mass.size());
    double running = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        running += mass[i];
        cumulative_[i] = running / total;
    }
    if (!cumulative_.empty()) cumulative_.back() = 1.0;
}

double NegativeSamplingTable::probability(std::size_t ordinal) const {
    const auto it = std::lower_bound(ordinals_.begin(), ordinals_.end(), ordinal);
    if (it == ordinals_.end() || *it != ordinal) return 0.0;
    const auto i = static_cast<std::size_t>(it - ordinals_.begin());
    return cumulative_[i] - (i ? cumulative_[i - 1] : 0.0);
}

std::size_t draw_negative(const NegativeSamplingTable& table, Rng& rng) {
    if (table.empty()) throw DomainError("negative sampling table is empty");
    const double u = rng.uniform();
    const auto& cum = table.cumulative();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    return table.ordinals()[static_cast<std::size_t>(it - cum.begin())];
}

Vocabulary build_vocab(const DocumentSet& set, std::uint64_t min_count) {
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<std::pair<std::string, std::uint64_t>> seen;  // first-occurrence order
    for (const auto& doc : set.documents) {
        for (const auto& tok : doc.tokens) {
            auto [it, inserted] = slot.emplace(tok, seen.size());
            if (inserted) seen.emplace_back(tok, 0);
            ++seen[it->second].second;
        }
    }
    std::stable_sort(seen.begin(), seen.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    Vocabulary vocab;
    for (auto& [word, count] : seen)
        if (count >= min_count) vocab.add(std::move(word), count);
    return vocab;
}

EmbeddingSpace init_space(const Vocabulary& corpus_vocab, const EmbeddingSpace* pretrained,
                          const TrainConfig& config, const DocumentSet* counts_from) {
    config.validate();
    const std::size_t d = config.dimension;
    if (pretrained && pretrained->dimension() != d)
        throw ValidationError("pretrained dimension " + std::to_string(pretrained->dimension()) +
                              " differs from configured dimension " + std::to_string(d));

    std::unordered_map<std::string, std::uint64_t> raw_counts;
    if (counts_from) {
        for (const auto& doc : counts_from->documents)
            for (const auto& tok : doc.tokens) ++raw_counts[tok];
    }
    auto count_of = [&](const std::string& w) -> std::uint64_t {
        if (counts_from) {
            const auto it = raw_counts.find(w);
            return it == raw_counts.end() ? 0 : it->second;
        }
        const auto i = corpus_vocab.find(w);
        return i ? corpus_vocab.count(*i) : 0;
    };

    Vocabulary vocab;
    if (pretrained) {
        for (const auto& w : pretrained->vocab().words()) vocab.add(w, count_of(w));
    }
    const std::size_t n_pretrained = vocab.size();
    for (const auto& w : corpus_vocab.words())
        if (!vocab.contains(w)) vocab.add(w, count_of(w));

    EmbeddingSpace space(std::move(vocab), d);
    const bool lock_pretrained = config.lock_factor == 0.0;
    if (pretrained) {
        space.input().topRows(static_cast<Eigen::Index>(n_pretrained)) = pretrained->input();
        for (std::size_t i = 0; i < n_pretrained; ++i) space.set_locked(i, lock_pretrained);
    }
    Rng rng(config.seed ^ kInitStream);
    const double half = 0.5 / static_cast<double>(d);
    for (std::size_t i = n_pretrained; i < space.size(); ++i) {
        double* row = space.input().data() + i * d;
        for (std::size_t j = 0; j < d; ++j) row[j] = rng.uniform(-half, half);
    }
    return space;
}

EmbeddingSpace init_space(const DocumentSet& set, const EmbeddingSpace* pretrained, const TrainConfig& config) {
    return init_space(build_vocab(set, config.min_count), pretrained, config, &set);
}

TrainReport train(EmbeddingSpace& space, const DocumentSet& set, const TrainConfig& config) {
    config.validate();
    if (space.dimension() != config.dimension)
        throw ValidationError("space dimension " + std::to_string(space.dimension()) +
                              " differs from configured dimension " + std::to_string(config.dimension));
    space.validate();

    TrainReport report;
    const Corpus corpus = encode(set, space.vocab());
    if (corpus.words == 0) {
        report.status = TrainStatus::EmptyCorpus;
        return report;
    }
    const NegativeSamplingTable table(space.vocab(), config.unigram_exponent);

    std::vector<double> keep_prob(space.size(), 1.0);
    if (config.subsample > 0) {
        const double threshold = config.subsample * static_cast<double>(corpus.words);
        for (std::size_t i = 0; i < space.size(); ++i) {
            const auto c = static_cast<double>(space.vocab().count(i));
            if (c > 0) keep_prob[i] = std::min(1.0, (std::sqrt(c / threshold) + 1.0) * threshold / c);
        }
    }

    const double planned = static_cast<double>(config.epochs) * static_cast<double>(corpus.words);
    auto lr_for = [&](std::uint64_t processed) {
        const double progress = std::min(1.0, static_cast<double>(processed) / planned);
        return config.lr_start - (config.lr_start - config.lr_end) * progress;
    };

    const std::size_t n_workers = std::min(config.workers, corpus.sentences.size());
    if (n_workers <= 1) {
        Worker worker(space, config, table, keep_prob, config.seed ^ kTrainStream);
        std::uint64_t processed = 0;
        auto lr_at = [&] { return lr_for(processed++); };
        for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
            worker.loss = 0.0;
            worker.pairs = 0;
            for (const auto& s : corpus.sentences) worker.sentence(s, lr_at);
            report.epoch_loss.push_back(worker.pairs ? worker.loss / static_cast<double>(worker.pairs) : 0.0);
            report.updates += worker.pairs;
        }
        report.words_processed = processed;
        return report;
    }

    // Multi-worker mode: contiguous sentence shards updated without locks.
    std::vector<Worker> workers;
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w)
        workers.emplace_back(space, config, table, keep_prob, (config.seed ^ kTrainStream) + 0x9E3779B97F4A7C15ULL * w);
    std::atomic<std::uint64_t> processed{0};
    const std::size_t shard = (corpus.sentences.size() + n_workers - 1) / n_workers;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < n_workers; ++w) {
            threads.emplace_back([&, w] {
                Worker& worker = workers[w];
                worker.loss = 0.0;
                worker.pairs = 0;
                auto lr_at = [&] { return lr_for(processed.fetch_add(1, std::memory_order_relaxed)); };
                const std::size_t begin = w * shard;
                const std::size_t end = std::min(corpus.sentences.size(), begin + shard);
                for (std::size_t s = begin; s < end; ++s) worker.sentence(corpus.sentences[s], lr_at);
            });
        }
        for (auto& t : threads) t.join();
        double loss = 0.0;
        std::uint64_t pairs = 0;
        for (const auto& worker : workers) {
            loss += worker.loss;
            pairs += worker.pairs;
        }
        report.epoch_loss.push_back(pairs ? loss / static_cast<double>(pairs) : 0.0);
        report.updates += pairs;
    }
    report.words_processed = processed.load();
    return report;
}

LossGradient loss_and_grad(VectorView center, const std::vector<VectorView>& contexts,
                           const std::vector<VectorView>& negatives, Algorithm algorithm) {
    if (contexts.empty()) throw DomainError("loss_and_grad needs at least one context vector");
    const std::size_t d = center.size();
    auto check = [&](VectorView v) {
        if (v.size() != d) throw DomainError("loss_and_grad vectors differ in dimension");
    };
    for (auto v : contexts) check(v);
    for (auto v : negatives) check(v);

    LossGradient out;
    out.center.assign(d, 0.0);
    out.contexts.assign(contexts.size(), std::vector<double>(d, 0.0));
    out.negatives.assign(negatives.size(), std::vector<double>(d, 0.0));

    // Adds the terms for predictor h with positive target `pos`; returns
    // dL/dh into h_grad and writes target gradients.
    auto objective = [&](VectorView h, VectorView pos, std::vector<double>& pos_grad, std::vector<double>& h_grad) {
        const double fp = dot(h, pos);
        out.loss += neg_log_sigmoid(fp);
        const double gp = sigmoid(fp) - 1.0;  // d/dfp of -log σ(fp)
        for (std::size_t i = 0; i < d; ++i) {
            h_grad[i] += gp * pos[i];
            pos_grad[i] += gp * h[i];
        }
        for (std::size_t k = 0; k < negatives.size(); ++k) {
            const double fn = dot(h, negatives[k]);
            out.loss += neg_log_sigmoid(-fn);
            const double gn = sigmoid(fn);  // d/dfn of -log σ(-fn)
            for (std::size_t i = 0; i < d; ++i) {
                h_grad[i] += gn * negatives[k][i];
                out.negatives[k][i] += gn * h[i];
            }
        }
    };

    if (algorithm == Algorithm::Sgns) {
        for (std::size_t c = 0; c < contexts.size(); ++c) objective(center, contexts[c], out.contexts[c], out.center);
        return out;
    }

    std::vector<double> hidden(d, 0.0);
    for (auto v : contexts)
        for (std::size_t i = 0; i < d; ++i) hidden[i] += v[i];
    const double inv = 1.0 / static_cast<double>(contexts.size());
    for (auto& x : hidden) x *= inv;
    std::vector<double> hidden_grad(d, 0.0);
    objective(hidden, center, out.center, hidden_grad);
    for (auto& g : out.contexts)
        for (std::size_t i = 0; i < d; ++i) g[i] = hidden_grad[i] * inv;
    return out;
}

}  // namespace framescore
