#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dga/corpus_models.hpp"
#include "dga/features.hpp"
#include "dga/forest.hpp"
#include "dga/rng.hpp"

namespace dga {

/// malicious:benign sample ratio.
struct Ratio {
    int malicious = 1;
    int benign = 1;

    /// "1:10" style. Throws Error{InvalidSpec}.
    static Ratio parse(std::string_view text);
    std::string str() const;
};

struct EvalConfig {
    Ratio ratio;
    int repetitions = 10;
    int folds = 10;
    std::uint64_t rng_seed = 0;
    ForestParams forest;
    std::size_t per_class_cap = 5000;

    /// Throws Error{InvalidSpec}.
    void validate() const;
};

/// Binary metrics are for the malicious class (index 1); confusion rows are
/// the true class, columns the predicted one.
struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double auc = 0.5;
    std::vector<std::vector<std::size_t>> confusion;
    bool no_positive_predictions = false;  // precision set to 0
};

/// predictions/truths are 0 (benign) or 1 (malicious); scores are
/// P(malicious). AUC is the Mann-Whitney statistic with ties counted 0.5, and
/// 0.5 when one class is absent. Throws Error{LengthMismatch}.
Metrics compute_metrics(std::span<const int> predictions, std::span<const int> truths,
                        std::span<const double> scores);

/// Rank-statistic AUC of `positive` scores against `negative` ones.
double rank_auc(std::span<const double> positive, std::span<const double> negative);

/// Population standard deviation; 0 for fewer than two values.
double population_std(std::span<const double> v);

/// Feature rows plus the SLD each row came from.
struct Pool {
    FeatureMatrix x{kFeatureCount};
    std::vector<std::string> slds;

    std::size_t size() const { return slds.size(); }
};

/// Parses each line as a domain and extracts features. Lines that do not
/// parse are skipped and counted in `skipped`.
Pool build_pool(std::span<const std::string> domains, const CorpusModels& models, const FeatureConfig& config,
                std::size_t* skipped = nullptr);

struct RatioSample {
    std::vector<std::size_t> malicious;  // indices into the malicious input
    std::vector<std::size_t> benign;
};

/// Draws without replacement u*ratio.malicious malicious and u*ratio.benign
/// benign indices, u as large as both classes (each capped at `cap`) allow.
/// Throws Error{InsufficientSamples} when either class would end up with fewer
/// than `min_per_class` members.
RatioSample sample_ratio(std::size_t n_malicious, std::size_t n_benign, Ratio ratio, SplitMix64& rng,
                         std::size_t cap = SIZE_MAX, std::size_t min_per_class = 1);

/// Same, returning the chosen SLDs.
std::pair<std::vector<std::string>, std::vector<std::string>> sample_ratio(
    std::span<const std::string> malicious, std::span<const std::string> benign, Ratio ratio, SplitMix64& rng,
    std::size_t cap = SIZE_MAX, std::size_t min_per_class = 1);

/// Fold id per sample. Each class is shuffled and dealt round-robin, the deal
/// continuing across classes, so fold sizes and per-fold class counts each
/// differ by at most one. Throws Error{TooFewSamples}.
std::vector<int> stratified_folds(std::span<const int> y, std::size_t n_classes, int folds, SplitMix64& rng);

struct Dataset {
    FeatureMatrix x{kFeatureCount};
    std::vector<int> y;
    std::vector<std::string> keys;  // SLDs, for the duplicate audit
};

struct CvResult {
    Metrics mean;                   // fold means; confusion is summed
    std::vector<Metrics> per_fold;
    std::size_t duplicates_across_folds = 0;  // test keys also present in that fold's train set
};

/// Binary stratified k-fold CV. The forest of fold f is seeded with
/// derive_seed(seed, "fold", f). Throws Error{TooFewSamples}.
CvResult cross_validate(const Dataset& data, const EvalConfig& config, std::uint64_t seed);

/// Test keys that also occur among the training keys, summed over folds.
std::size_t duplicate_audit(std::span<const std::string> keys, std::span<const int> fold_of);

struct FamilyResult {
    std::string family;
    Metrics mean;  // mean over repetitions
    double sigma_f1 = 0.0;  // population std of the repetition F1 means
    std::vector<double> repetition_f1;
    std::size_t support = 0;         // family samples per repetition
    std::size_t benign_support = 0;  // binary only
    std::size_t duplicates_across_folds = 0;
    bool flagged = false;
    std::string flag_reason;
};

struct EvalReport {
    std::string mode;  // binary or multiclass
    EvalConfig config;
    std::vector<std::string> class_labels;
    std::vector<FamilyResult> per_family;
    Metrics weighted_average;  // over unflagged families, weights = support
    double wall_seconds = 0.0;  // shown in the table, left out of the JSON
};

/// Repetition r samples with derive_seed(seed, family + "/sample", r) and
/// cross-validates with derive_seed(seed, family + "/cv", r).
FamilyResult repeat_experiment(const Pool& benign, const Pool& malicious, const std::string& family,
                               const EvalConfig& config);

/// One repeat_experiment per family against the shared benign pool.
EvalReport binary_evaluate(const Pool& benign, std::span<const std::pair<std::string, Pool>> families,
                           const EvalConfig& config);

/// One k-class forest over all families. Families with fewer than `folds`
/// samples are flagged with zero metrics and left out of training and of the
/// weighted average. Per-family metrics come from the confusion matrix pooled
/// over folds; AUC is one-vs-rest. Throws Error{TooFewSamples} when fewer
/// than two families remain.
EvalReport multiclass_evaluate(std::span<const std::pair<std::string, Pool>> families, const EvalConfig& config);

/// Support-weighted mean of the unflagged families' metrics.
Metrics weighted_average(std::span<const FamilyResult> families);

std::string report_to_json(const EvalReport& report);
std::string report_table(const EvalReport& report);

/// Monotonic milliseconds.
using MillisClock = std::function<double()>;
MillisClock steady_clock_ms();

struct LatencyStats {
    std::size_t samples = 0;
    double mean_feature_ms = 0.0;
    double p95_feature_ms = 0.0;
    double mean_predict_ms = 0.0;
    double p95_predict_ms = 0.0;
    double total_feature_ms = 0.0;
    double total_predict_ms = 0.0;
};

/// Times feature extraction and prediction per SLD on the calling thread.
/// A warm-up pass over the first `warmup` SLDs is not recorded. SLDs that do
/// not parse are skipped.
LatencyStats benchmark_latency(std::span<const std::string> slds, const CorpusModels& models, const Forest& forest,
                               const FeatureConfig& config = {}, const MillisClock& clock = steady_clock_ms(),
                               std::size_t warmup = 200);

}  // namespace dga
