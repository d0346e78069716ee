#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace framescore {

/// Entities × replications grid of association scores for one trait under
/// one method. A cell is empty when the entity was out of vocabulary in
/// that replication.
class ScoreMatrix {
public:
    ScoreMatrix() = default;
    ScoreMatrix(std::vector<std::string> entities, std::size_t replications, std::string trait, std::string method)
        : entities_(std::move(entities)),
          replications_(replications),
          trait_(std::move(trait)),
          method_(std::move(method)),
          values_(entities_.size() * replications) {}

    const std::vector<std::string>& entities() const { return entities_; }
    std::size_t replications() const { return replications_; }
    const std::string& trait() const { return trait_; }
    const std::string& method() const { return method_; }
    void set_method(std::string method) { method_ = std::move(method); }

    std::optional<double>& at(std::size_t entity, std::size_t replication) {
        return values_[entity * replications_ + replication];
    }
    const std::optional<double>& at(std::size_t entity, std::size_t replication) const {
        return values_[entity * replications_ + replication];
    }

    /// Number of replications in which the entity has a score.
    std::size_t present(std::size_t entity) const {
        std::size_t n = 0;
        for (std::size_t r = 0; r < replications_; ++r) n += at(entity, r).has_value();
        return n;
    }

    /// Mean over the replications in which the entity was scored.
    std::optional<double> mean(std::size_t entity) const {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t r = 0; r < replications_; ++r) {
            if (const auto& v = at(entity, r)) {
                sum += *v;
                ++n;
            }
        }
        if (n == 0) return std::nullopt;
        return sum / static_cast<double>(n);
    }

    std::vector<std::optional<double>> means() const {
        std::vector<std::optional<double>> out;
        out.reserve(entities_.size());
        for (std::size_t e = 0; e < entities_.size(); ++e) out.push_back(mean(e));
        return out;
    }

private:
    std::vector<std::string> entities_;
    std::size_t replications_ = 0;
    std::string trait_;
    std::string method_;
    std::vector<std::optional<double>> values_;
};

}  // namespace framescore
