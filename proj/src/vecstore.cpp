#include "framescore/vecstore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "framescore/error.hpp"

namespace framescore {

std::size_t Vocabulary::add(std::string word, std::uint64_t count) {
    const std::size_t ordinal = words_.size();
    auto [it, inserted] = index_.emplace(word, ordinal);
    if (!inserted) throw ValidationError("duplicate word '" + word + "' in vocabulary");
    words_.push_back(std::move(word));
    counts_.push_back(count);
    return ordinal;
}

std::optional<std::size_t> Vocabulary::find(std::string_view word) const {
    const auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Vocabulary::at(std::string_view word) const {
    if (auto i = find(word)) return *i;
    throw LookupError("word '" + std::string(word) + "' is not in the vocabulary", std::string(word));
}

EmbeddingSpace::EmbeddingSpace(Vocabulary vocab, std::size_t dimension)
    : vocab_(std::move(vocab)),
      input_(Matrix::Zero(static_cast<Eigen::Index>(vocab_.size()), static_cast<Eigen::Index>(dimension))),
      output_(Matrix::Zero(static_cast<Eigen::Index>(vocab_.size()), static_cast<Eigen::Index>(dimension))),
      locked_(vocab_.size(), 0) {
    if (dimension == 0) throw ValidationError("embedding dimension must be positive");
}

EmbeddingSpace::EmbeddingSpace(Vocabulary vocab, Matrix input, Matrix output,
                               std::vector<std::uint8_t> locked)
    : vocab_(std::move(vocab)), input_(std::move(input)), output_(std::move(output)), locked_(std::move(locked)) {
    validate();
}

void EmbeddingSpace::validate() const {
    const auto rows = static_cast<Eigen::Index>(vocab_.size());
    if (input_.rows() != rows || output_.rows() != rows)
        throw ValidationError("embedding matrices must have one row per vocabulary word");
    if (input_.cols() != output_.cols())
        throw ValidationError("input and output matrices differ in dimension");
    if (input_.cols() == 0) throw ValidationError("embedding dimension must be positive");
    if (locked_.size() != vocab_.size()) throw ValidationError("lock mask length differs from vocabulary size");
    if (!input_.allFinite() || !output_.allFinite())
        throw ValidationError("embedding matrices contain non-finite values");
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
        if (pos >= line.size()) break;
        std::size_t end = pos;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
        fields.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return fields;
}

bool parse_unsigned(std::string_view s, std::size_t& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

double parse_real(std::string_view s, std::size_t line_no) {
    double value = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("invalid number '" + std::string(s) + "'", line_no);
    if (!std::isfinite(value)) throw ParseError("non-finite value '" + std::string(s) + "'", line_no);
    return value;
}

bool looks_binary(std::string_view line) {
    return std::any_of(line.begin(), line.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return u == 0 || (u < 0x09) || (u > 0x0D && u < 0x20);
    });
}

}  // namespace

EmbeddingSpace read_vectors(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> declared_rows;
    std::size_t dimension = 0;
    Vocabulary vocab;
    std::vector<double> values;

    auto take_row = [&](std::string_view text) {
        if (looks_binary(text))
            throw ParseError("binary vector files are not supported; convert to text format", line_no);
        const auto fields = split_fields(text);
        if (fields.empty()) return;
        if (dimension == 0) {
            if (fields.size() < 2) throw ParseError("vector line has no values", line_no);
            dimension = fields.size() - 1;
        }
        if (fields.size() != dimension + 1)
            throw ParseError("expected " + std::to_string(dimension) + " values, found " +
                                 std::to_string(fields.size() - 1),
                             line_no);
        for (std::size_t j = 1; j < fields.size(); ++j) values.push_back(parse_real(fields[j], line_no));
        try {
            vocab.add(std::string(fields[0]));
        } catch (const ValidationError&) {
            throw ValidationError("duplicate word '" + std::string(fields[0]) + "' at line " +
                                  std::to_string(line_no));
        }
    };

    if (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_fields(line);
        std::size_t v = 0;
        std::size_t d = 0;
        if (fields.size() == 2 && parse_unsigned(fields[0], v) && parse_unsigned(fields[1], d)) {
            if (d == 0) throw ParseError("header declares zero dimensions", line_no);
            declared_rows = v;
            dimension = d;
        } else {
            take_row(line);
        }
    }
    while (std::getline(in, line)) {
        ++line_no;
        take_row(line);
    }
    if (declared_rows && *declared_rows != vocab.size())
        throw ParseError("header declares " + std::to_string(*declared_rows) + " words, file has " +
                         std::to_string(vocab.size()));
    if (dimension == 0) throw ParseError("vector file is empty");

    const auto rows = static_cast<Eigen::Index>(vocab.size());
    const auto cols = static_cast<Eigen::Index>(dimension);
    Matrix input = Eigen::Map<const Matrix>(values.data(), rows, cols);
    std::vector<std::uint8_t> locked(vocab.size(), 1);
    return EmbeddingSpace(std::move(vocab), std::move(input), Matrix::Zero(rows, cols), std::move(locked));
}

EmbeddingSpace load_vectors(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open vector file '" + path.string() + "'");
    try {
        return read_vectors(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    }
}

void write_vectors(const EmbeddingSpace& space, std::ostream& out) {
    out << space.size() << ' ' << space.dimension() << '\n';
    char buf[64];
    for (std::size_t i = 0; i < space.size(); ++i) {
        out << space.vocab().word(i);
        for (double x : space.input_row(i)) {
            std::snprintf(buf, sizeof buf, " %.6g", x);
            out << buf;
        }
        out << '\n';
    }
}

void save_vectors(const EmbeddingSpace& space, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write vector file '" + path.string() + "'");
    write_vectors(space, out);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

double dot(VectorView u, VectorView v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double norm(VectorView u) { return std::sqrt(dot(u, u)); }

double cosine(VectorView u, VectorView v) {
    if (u.size() != v.size()) throw DomainError("cosine of vectors with different dimensions");
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu == 0.0 || nv == 0.0) throw DomainError("cosine of a zero-norm vector");
    return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

std::vector<Neighbor> nearest(const EmbeddingSpace& space, VectorView query, std::size_t k,
                              const std::set<std::string>& exclude) {
    if (query.size() != space.dimension())
        throw DomainError("query dimension " + std::to_string(query.size()) + " differs from space dimension " +
                          std::to_string(space.dimension()));
    const double qn = norm(query);
    if (qn == 0.0) throw DomainError("nearest-neighbor query has zero norm");
    struct Scored {
        double sim;
        std::size_t ordinal;
    };
    std::vector<Scored> scored;
    scored.reserve(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (exclude.count(space.vocab().word(i))) continue;
        const auto row = space.input_row(i);
        const double rn = norm(row);
        if (rn == 0.0) continue;
        scored.push_back({std::clamp(dot(row, query) / (rn * qn), -1.0, 1.0), i});
    }
    const std::size_t take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                      [](const Scored& a, const Scored& b) {
                          return a.sim != b.sim ? a.sim > b.sim : a.ordinal < b.ordinal;
                      });
    std::vector<Neighbor> result;
    result.reserve(take);
    for (std::size_t i = 0; i < take; ++i)
        result.push_back({space.vocab().word(scored[i].ordinal), scored[i].sim});
    return result;
}

std::string analogy(const EmbeddingSpace& space, std::string_view a, std::string_view b, std::string_view c) {
    const auto unit = [&](std::string_view word) {
        const auto row = space.vector(word);
        const double n = norm(row);
        if (n == 0.0) throw DomainError("analogy word '" + std::string(word) + "' has a zero vector");
        std::vector<double> out(row.begin(), row.end());
        for (double& x : out) x /= n;
        return out;
    };
    const auto ua = unit(a);
    const auto ub = unit(b);
    const auto uc = unit(c);
    std::vector<double> target(ua.size());
    for (std::size_t i = 0; i < target.size(); ++i) target[i] = ub[i] - ua[i] + uc[i];
    const std::set<std::string> exclude{std::string(a), std::string(b), std::string(c)};
    const auto best = nearest(space, target, 1, exclude);
    if (best.empty()) throw DomainError("analogy has no candidate words outside the query");
    return best.front().word;
}

}  // namespace framescore
