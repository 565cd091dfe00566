#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "dga/features.hpp"

namespace dga {

/// Bounded memo of computed feature vectors keyed by (SLD, dot count).
/// Readers share the lock; inserts take it exclusively. Oldest entries are
/// evicted first. Results never depend on whether a lookup hits, provided a
/// cache is only ever used with one set of models and one config.
class FeatureCache {
public:
    explicit FeatureCache(std::size_t capacity) : capacity_(capacity) {}

    std::optional<FeatureVector> find(const DomainRecord& record) const;
    void insert(const DomainRecord& record, const FeatureVector& v);

    /// find() or compute-and-insert.
    FeatureVector get_or_compute(const DomainRecord& record, const CorpusModels& models,
                                 const FeatureConfig& config);

    std::size_t size() const;
    std::size_t capacity() const { return capacity_; }
    std::size_t hits() const;
    std::size_t misses() const;

private:
    static std::string key(const DomainRecord& record);

    std::size_t capacity_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, FeatureVector> entries_;
    std::deque<std::string> order_;
    mutable std::size_t hits_ = 0;
    mutable std::size_t misses_ = 0;
};

}  // namespace dga
