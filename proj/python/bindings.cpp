#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "framescore/assoc.hpp"
#include "framescore/cli.hpp"
#include "framescore/corpus.hpp"
#include "framescore/error.hpp"
#include "framescore/lexicon.hpp"
#include "framescore/planar.hpp"
#include "framescore/psych.hpp"
#include "framescore/trainer.hpp"
#include "framescore/vecstore.hpp"

namespace py = pybind11;
using namespace framescore;

namespace {

std::vector<double> as_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<std::vector<double>> rows_of(const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(as_vector(m.row(i).transpose()));
    return out;
}

std::vector<VectorView> views(const std::vector<std::vector<double>>& rows) {
    return {rows.begin(), rows.end()};
}

py::list score_rows(const ScoreMatrix& m) {
    py::list rows;
    for (std::size_t e = 0; e < m.entities().size(); ++e) {
        py::list row;
        for (std::size_t r = 0; r < m.replications(); ++r) {
            if (const auto& v = m.at(e, r)) row.append(*v);
            else row.append(py::none());
        }
        rows.append(row);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Association scores for named entities from fine-tuned word embeddings";
    m.attr("__version__") = FRAMESCORE_VERSION;

    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    static py::exception<IoError> io_error(m, "IoError", error.ptr());
    static py::exception<ParseError> parse_error(m, "ParseError", error.ptr());
    static py::exception<ValidationError> validation_error(m, "ValidationError", error.ptr());
    static py::exception<DomainError> domain_error(m, "DomainError", error.ptr());
    static py::exception<LookupError> lookup_error(m, "LookupError", error.ptr());
    static py::exception<DegenerateInputError> degenerate_error(m, "DegenerateInputError", error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const IoError& e) {
            py::set_error(io_error, e.what());
        } catch (const ParseError& e) {
            py::set_error(parse_error, e.what());
        } catch (const ValidationError& e) {
            py::set_error(validation_error, e.what());
        } catch (const DomainError& e) {
            py::set_error(domain_error, e.what());
        } catch (const LookupError& e) {
            py::set_error(lookup_error, e.what());
        } catch (const DegenerateInputError& e) {
            py::set_error(degenerate_error, e.what());
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    // corpus
    m.def("tokenize", [](const std::string& text) { return tokenize(text); });
    py::class_<DocumentSet>(m, "DocumentSet")
        .def("__len__", [](const DocumentSet& s) { return s.documents.size(); })
        .def_property_readonly("token_count", &DocumentSet::token_count)
        .def("documents", [](const DocumentSet& s) {
            py::list out;
            for (const auto& d : s.documents) out.append(py::make_tuple(d.id, format_timestamp(d.timestamp), d.tokens));
            return out;
        });
    m.def("ingest_jsonl", &ingest_jsonl, py::arg("path"));

    // vecstore
    py::class_<EmbeddingSpace>(m, "EmbeddingSpace")
        .def_property_readonly("words", [](const EmbeddingSpace& s) { return s.vocab().words(); })
        .def_property_readonly("dimension", &EmbeddingSpace::dimension)
        .def("__len__", &EmbeddingSpace::size)
        .def("__contains__", [](const EmbeddingSpace& s, const std::string& w) { return s.vocab().contains(w); })
        .def("vector", [](const EmbeddingSpace& s, const std::string& w) {
            const auto v = s.vector(w);
            return std::vector<double>(v.begin(), v.end());
        })
        .def("matrix", [](const EmbeddingSpace& s) { return Eigen::MatrixXd(s.input()); })
        .def("locked", [](const EmbeddingSpace& s, const std::string& w) { return s.locked(s.vocab().at(w)); });
    m.def("load_vectors", &load_vectors, py::arg("path"));
    m.def("save_vectors", &save_vectors, py::arg("space"), py::arg("path"));
    m.def("cosine", [](const std::vector<double>& u, const std::vector<double>& v) { return cosine(u, v); });
    m.def(
        "nearest",
        [](const EmbeddingSpace& s, const std::vector<double>& q, std::size_t k, const std::set<std::string>& exclude) {
            std::vector<std::pair<std::string, double>> out;
            for (const auto& n : nearest(s, q, k, exclude)) out.emplace_back(n.word, n.similarity);
            return out;
        },
        py::arg("space"), py::arg("query"), py::arg("k"), py::arg("exclude") = std::set<std::string>{});
    m.def("analogy", [](const EmbeddingSpace& s, const std::string& a, const std::string& b, const std::string& c) {
        return analogy(s, a, b, c);
    });

    // trainer
    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_property(
            "algorithm", [](const TrainConfig& c) { return std::string(to_string(c.algorithm)); },
            [](TrainConfig& c, const std::string& a) { c.algorithm = parse_algorithm(a); })
        .def_readwrite("dimension", &TrainConfig::dimension)
        .def_readwrite("window", &TrainConfig::window)
        .def_readwrite("negatives", &TrainConfig::negatives)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("lr_start", &TrainConfig::lr_start)
        .def_readwrite("lr_end", &TrainConfig::lr_end)
        .def_readwrite("min_count", &TrainConfig::min_count)
        .def_readwrite("subsample", &TrainConfig::subsample)
        .def_readwrite("unigram_exponent", &TrainConfig::unigram_exponent)
        .def_readwrite("lock_factor", &TrainConfig::lock_factor)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("workers", &TrainConfig::workers);
    m.def(
        "train",
        [](const DocumentSet& set, const EmbeddingSpace* pretrained, const TrainConfig& config) {
            EmbeddingSpace space = init_space(set, pretrained, config);
            TrainReport report;
            {
                py::gil_scoped_release release;
                report = train(space, set, config);
            }
            return py::make_tuple(std::move(space), report.epoch_loss);
        },
        py::arg("corpus"), py::arg("pretrained") = nullptr, py::arg("config") = TrainConfig{},
        "Initializes a space from the corpus (and optional pretrained space) and trains it; returns (space, epoch_loss).");
    m.def(
        "loss_and_grad",
        [](const std::vector<double>& center, const std::vector<std::vector<double>>& contexts,
           const std::vector<std::vector<double>>& negatives, const std::string& algorithm) {
            const auto g = loss_and_grad(center, views(contexts), views(negatives), parse_algorithm(algorithm));
            return py::make_tuple(g.loss, g.center, g.contexts, g.negatives);
        });

    // lexicon
    py::class_<PolarLexicon>(m, "PolarLexicon")
        .def(py::init([](std::string trait, std::vector<std::string> pos, std::vector<std::string> neg) {
                 PolarLexicon lex{std::move(trait), std::move(pos), std::move(neg)};
                 lex.validate();
                 return lex;
             }),
             py::arg("trait"), py::arg("positive"), py::arg("negative"))
        .def_readonly("trait", &PolarLexicon::trait)
        .def_readonly("positive", &PolarLexicon::positive)
        .def_readonly("negative", &PolarLexicon::negative);
    m.def("load_lexicon", &load_lexicon, py::arg("path"));
    m.def("balance", &balance, py::arg("lexicon"), py::arg("seed"));
    m.def(
        "prune_oov", [](const PolarLexicon& lex, const EmbeddingSpace& s) { return prune_oov(lex, s.vocab()); },
        py::arg("lexicon"), py::arg("space"));

    // assoc
    m.def(
        "target_score",
        [](const EmbeddingSpace& s, const PolarLexicon& lex, const std::string& entity) {
            return target_score(s, lex, entity);
        },
        py::arg("space"), py::arg("lexicon"), py::arg("entity"));
    m.def(
        "target_score_vectors",
        [](const std::vector<double>& a, const std::vector<std::vector<double>>& x,
           const std::vector<std::vector<double>>& y) { return target_score(a, views(x), views(y)); },
        py::arg("entity"), py::arg("positive"), py::arg("negative"));
    m.def(
        "replicate_scores",
        [](const DocumentSet& set, const EmbeddingSpace* pretrained, const TrainConfig& config,
           const PolarLexicon& lex, const std::vector<std::string>& entities, std::size_t replications,
           std::size_t jobs) {
            ReplicatedScores r;
            {
                py::gil_scoped_release release;
                r = replicate_scores(set, pretrained, config, lex, entities, {replications, jobs, "default"});
            }
            py::dict out;
            out["entities"] = r.matrix.entities();
            out["scores"] = score_rows(r.matrix);
            out["means"] = r.matrix.means();
            out["missing"] = r.missing_entities;
            return out;
        },
        py::arg("corpus"), py::arg("pretrained"), py::arg("config"), py::arg("lexicon"), py::arg("entities"),
        py::arg("replications") = 10, py::arg("jobs") = 1);
    m.def(
        "robustness_alpha",
        [](const EmbeddingSpace& s, const PolarLexicon& lex, const std::vector<std::string>& entities,
           std::size_t n_draws, double fraction, std::uint64_t seed) {
            return robustness_alpha(s, lex, entities, n_draws, fraction, seed);
        },
        py::arg("space"), py::arg("lexicon"), py::arg("entities"), py::arg("n_draws") = 10,
        py::arg("subset_fraction") = 0.5, py::arg("seed") = 1);

    // psych
    m.def("cronbach_alpha", &cronbach_alpha, py::arg("scores"));
    m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) {
        const auto c = pearson(x, y);
        return py::make_tuple(c.r, c.p);
    });
    m.def("critical_pearson_r", &critical_pearson_r, py::arg("n"), py::arg("alpha") = 0.05);
    m.def("two_sample_t", [](const std::vector<double>& x, const std::vector<double>& y) {
        const auto t = two_sample_t(x, y);
        return py::make_tuple(t.t, t.df, t.p);
    });
    m.def("cohens_d_groups",
          [](const std::vector<double>& x, const std::vector<double>& y) { return cohens_d_groups(x, y); });
    m.def("student_t_cdf", &student_t_cdf, py::arg("t"), py::arg("df"));

    // planar
    m.def(
        "tsne",
        [](const Eigen::MatrixXd& vectors, std::vector<std::string> labels, double perplexity, std::size_t iterations,
           std::uint64_t seed) {
            TsneOptions o;
            o.perplexity = perplexity;
            o.iterations = iterations;
            o.seed = seed;
            const Matrix x = vectors;
            Projection2D p;
            {
                py::gil_scoped_release release;
                p = tsne(x, std::move(labels), o);
            }
            py::dict out;
            out["labels"] = p.labels;
            out["coordinates"] = Eigen::MatrixXd(p.coordinates);
            out["kl_initial"] = p.kl_initial;
            out["kl_final"] = p.kl_final;
            return out;
        },
        py::arg("vectors"), py::arg("labels"), py::arg("perplexity") = 30.0, py::arg("iterations") = 1000,
        py::arg("seed") = 1);
    m.def("silhouette_score", [](const Eigen::MatrixXd& points, const std::vector<int>& labels) {
        return silhouette_score(points, labels);
    });

    // cli
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
