#include "dga/feature_cache.hpp"

#include <atomic>
#include <mutex>

namespace dga {

std::string FeatureCache::key(const DomainRecord& record) {
    return record.sld + '\x1f' + std::to_string(record.dot_count);
}

std::optional<FeatureVector> FeatureCache::find(const DomainRecord& record) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key(record));
    // counters are only advisory; relaxed atomics keep readers lock-shared
    if (it == entries_.end()) {
        std::atomic_ref<std::size_t>(misses_).fetch_add(1, std::memory_order_relaxed);
        return std::nullopt;
    }
    std::atomic_ref<std::size_t>(hits_).fetch_add(1, std::memory_order_relaxed);
    return it->second;
}

void FeatureCache::insert(const DomainRecord& record, const FeatureVector& v) {
    if (capacity_ == 0) return;
    std::unique_lock lock(mutex_);
    auto k = key(record);
    if (entries_.contains(k)) return;
    while (entries_.size() >= capacity_) {
        entries_.erase(order_.front());
        order_.pop_front();
    }
    entries_.emplace(k, v);
    order_.push_back(std::move(k));
}

FeatureVector FeatureCache::get_or_compute(const DomainRecord& record, const CorpusModels& models,
                                           const FeatureConfig& config) {
    if (auto hit = find(record)) return *hit;
    FeatureVector v = extract_features(record, models, config);
    insert(record, v);
    return v;
}

std::size_t FeatureCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

std::size_t FeatureCache::hits() const {
    return std::atomic_ref<std::size_t>(hits_).load(std::memory_order_relaxed);
}

std::size_t FeatureCache::misses() const {
    return std::atomic_ref<std::size_t>(misses_).load(std::memory_order_relaxed);
}

}  // namespace dga
