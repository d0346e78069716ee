#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace framescore {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VectorView = std::span<const double>;

/// Ordered word list with ordinal lookup and corpus counts.
class Vocabulary {
public:
    /// Appends a word and returns its ordinal. Throws ValidationError if the
    /// word is already present.
    std::size_t add(std::string word, std::uint64_t count = 0);

    std::optional<std::size_t> find(std::string_view word) const;
    bool contains(std::string_view word) const { return find(word).has_value(); }

    /// Ordinal of a word; throws LookupError naming it when absent.
    std::size_t at(std::string_view word) const;

    const std::string& word(std::size_t i) const { return words_[i]; }
    std::uint64_t count(std::size_t i) const { return counts_[i]; }
    void set_count(std::size_t i, std::uint64_t c) { counts_[i] = c; }

    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }
    const std::vector<std::string>& words() const { return words_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }

private:
    std::vector<std::string> words_;
    std::vector<std::uint64_t> counts_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Vocabulary plus input (word) and output (context) vectors.
///
/// A locked row is one whose input vector came from a pretrained space and
/// is frozen during fine-tuning with lock factor 0.
class EmbeddingSpace {
public:
    EmbeddingSpace() = default;
    /// Zero-initialized space with every row trainable.
    EmbeddingSpace(Vocabulary vocab, std::size_t dimension);
    EmbeddingSpace(Vocabulary vocab, Matrix input, Matrix output, std::vector<std::uint8_t> locked);

    const Vocabulary& vocab() const { return vocab_; }
    Vocabulary& vocab() { return vocab_; }
    std::size_t size() const { return vocab_.size(); }
    std::size_t dimension() const { return static_cast<std::size_t>(input_.cols()); }

    const Matrix& input() const { return input_; }
    Matrix& input() { return input_; }
    const Matrix& output() const { return output_; }
    Matrix& output() { return output_; }

    bool locked(std::size_t row) const { return locked_[row] != 0; }
    void set_locked(std::size_t row, bool value) { locked_[row] = value ? 1 : 0; }
    const std::vector<std::uint8_t>& lock_mask() const { return locked_; }

    VectorView input_row(std::size_t row) const {
        return {input_.data() + row * input_.cols(), static_cast<std::size_t>(input_.cols())};
    }
    /// Input vector of a word; throws LookupError naming it when absent.
    VectorView vector(std::string_view word) const { return input_row(vocab_.at(word)); }

    /// Checks matrix shapes, mask length and finiteness of every entry.
    void validate() const;

private:
    Vocabulary vocab_;
    Matrix input_;
    Matrix output_;
    std::vector<std::uint8_t> locked_;
};

/// Reads a Word2Vec text file (first line "V d") or a headerless GloVe
/// text file. Output vectors are zero, every row is locked, counts are 0.
EmbeddingSpace load_vectors(const std::filesystem::path& path);
EmbeddingSpace read_vectors(std::istream& in);

/// Writes Word2Vec text format with 6 significant digits per value.
void save_vectors(const EmbeddingSpace& space, const std::filesystem::path& path);
void write_vectors(const EmbeddingSpace& space, std::ostream& out);

double dot(VectorView u, VectorView v);
double norm(VectorView u);

/// Cosine similarity. Throws DomainError on a zero-norm argument or a
/// dimension mismatch.
double cosine(VectorView u, VectorView v);

struct Neighbor {
    std::string word;
    double similarity;
};

/// Up to k words by descending cosine to query, skipping `exclude` and
/// zero-norm rows. Ties go to the lower vocabulary ordinal.
std::vector<Neighbor> nearest(const EmbeddingSpace& space, VectorView query, std::size_t k,
                              const std::set<std::string>& exclude = {});

/// 3CosAdd: the word w outside {a, b, c} maximizing cos(w, b̂ - â + ĉ),
/// where hats denote unit-normalized input vectors. "a is to b as c is
/// to ?". Throws LookupError for an unknown query word.
std::string analogy(const EmbeddingSpace& space, std::string_view a, std::string_view b,
                    std::string_view c);

}  // namespace framescore
