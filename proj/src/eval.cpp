#include "dga/eval.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "dga/dga_synth.hpp"
#include "dga/domain.hpp"
#include "dga/error.hpp"

namespace dga {

using nlohmann::json;

Ratio Ratio::parse(std::string_view text) {
    const auto colon = text.find(':');
    Ratio r;
    auto parse_part = [&](std::string_view part, int& out) {
        const auto* end = part.data() + part.size();
        auto [ptr, ec] = std::from_chars(part.data(), end, out);
        return ec == std::errc() && ptr == end && out >= 1;
    };
    if (colon == std::string_view::npos || !parse_part(text.substr(0, colon), r.malicious) ||
        !parse_part(text.substr(colon + 1), r.benign)) {
        throw Error(Errc::InvalidSpec, "ratio '" + std::string(text) + "' is not of the form M:B with M,B >= 1");
    }
    return r;
}

std::string Ratio::str() const { return std::to_string(malicious) + ":" + std::to_string(benign); }

void EvalConfig::validate() const {
    if (folds < 2) throw Error(Errc::InvalidSpec, "folds must be >= 2");
    if (repetitions < 1) throw Error(Errc::InvalidSpec, "repetitions must be >= 1");
    if (ratio.malicious < 1 || ratio.benign < 1) throw Error(Errc::InvalidSpec, "ratio components must be >= 1");
    if (per_class_cap < 1) throw Error(Errc::InvalidSpec, "per-class cap must be >= 1");
    forest.validate();
}

double rank_auc(std::span<const double> positive, std::span<const double> negative) {
    if (positive.empty() || negative.empty()) return 0.5;
    std::vector<std::pair<double, bool>> all;
    all.reserve(positive.size() + negative.size());
    for (double s : positive) all.emplace_back(s, true);
    for (double s : negative) all.emplace_back(s, false);
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    // midranks make every tied positive/negative pair count one half
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (all[k].second) rank_sum += midrank;
        }
        i = j;
    }
    const auto np = static_cast<double>(positive.size());
    const auto nn = static_cast<double>(negative.size());
    return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double population_std(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

namespace {

void fill_prf(Metrics& m, std::size_t tp, std::size_t fp, std::size_t fn) {
    if (tp + fp == 0) {
        m.precision = 0.0;
        m.no_positive_predictions = true;
    } else {
        m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    }
    m.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
}

std::vector<std::vector<std::size_t>> zero_confusion(std::size_t k) {
    return std::vector<std::vector<std::size_t>>(k, std::vector<std::size_t>(k, 0));
}

void add_confusion(std::vector<std::vector<std::size_t>>& into, const std::vector<std::vector<std::size_t>>& c) {
    if (into.empty()) into = zero_confusion(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = 0; j < c.size(); ++j) into[i][j] += c[i][j];
    }
}

// Means of precision/recall/f1/auc, confusion summed.
Metrics mean_metrics(std::span<const Metrics> ms) {
    Metrics out;
    if (ms.empty()) return out;
    out.auc = 0.0;
    for (const auto& m : ms) {
        out.precision += m.precision;
        out.recall += m.recall;
        out.f1 += m.f1;
        out.auc += m.auc;
        out.no_positive_predictions = out.no_positive_predictions || m.no_positive_predictions;
        add_confusion(out.confusion, m.confusion);
    }
    const auto n = static_cast<double>(ms.size());
    out.precision /= n;
    out.recall /= n;
    out.f1 /= n;
    out.auc /= n;
    return out;
}

std::vector<std::string> feature_name_list() { return {kFeatureNames.begin(), kFeatureNames.end()}; }

// First k entries of a seeded Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> draw_without_replacement(std::size_t n, std::size_t k, SplitMix64& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.uniform_below(n - i)]);
    idx.resize(k);
    return idx;
}

struct FoldSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

FoldSplit split_fold(std::span<const int> fold_of, int f) {
    FoldSplit s;
    for (std::size_t i = 0; i < fold_of.size(); ++i) (fold_of[i] == f ? s.test : s.train).push_back(i);
    std::vector<char> in_train(fold_of.size(), 0);
    for (auto i : s.train) in_train[i] = 1;
    for (auto i : s.test) {
        if (in_train[i]) throw std::logic_error("fold train and test sets overlap");
    }
    return s;
}

std::vector<int> select_labels(std::span<const int> y, std::span<const std::size_t> idx) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(y[i]);
    return out;
}

// A sample leaks when its key also sits in a different fold, i.e. in the
// training set of the fold that tests it.
std::vector<char> duplicate_flags(std::span<const std::string> keys, std::span<const int> fold_of) {
    if (keys.size() != fold_of.size()) throw Error(Errc::LengthMismatch, "keys and fold ids differ in length");
    std::unordered_map<std::string_view, std::vector<int>> where;
    for (std::size_t i = 0; i < keys.size(); ++i) where[keys[i]].push_back(fold_of[i]);
    std::vector<char> out(keys.size(), 0);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto& folds = where[keys[i]];
        out[i] = std::any_of(folds.begin(), folds.end(), [&](int f) { return f != fold_of[i]; }) ? 1 : 0;
    }
    return out;
}

}  // namespace

Metrics compute_metrics(std::span<const int> predictions, std::span<const int> truths,
                        std::span<const double> scores) {
    if (predictions.size() != truths.size() || scores.size() != truths.size()) {
        throw Error(Errc::LengthMismatch, "predictions, truths and scores differ in length");
    }
    Metrics m;
    m.confusion = zero_confusion(2);
    std::vector<double> pos;
    std::vector<double> neg;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        const int t = truths[i];
        const int p = predictions[i];
        if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
            throw Error(Errc::InvalidSpec, "binary metrics need 0/1 labels");
        }
        ++m.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
        (t == 1 ? pos : neg).push_back(scores[i]);
    }
    fill_prf(m, m.confusion[1][1], m.confusion[0][1], m.confusion[1][0]);
    m.auc = rank_auc(pos, neg);
    return m;
}

Pool build_pool(std::span<const std::string> domains, const CorpusModels& models, const FeatureConfig& config,
                std::size_t* skipped) {
    Pool pool;
    pool.x.reserve(domains.size());
    std::size_t bad = 0;
    for (const auto& d : domains) {
        DomainRecord rec;
        try {
            rec = parse_domain(d);
        } catch (const Error&) {
            ++bad;
            continue;
        }
        const auto fv = extract_features(rec, models, config);
        pool.x.add_row(fv.values);
        pool.slds.push_back(rec.sld);
    }
    if (skipped) *skipped = bad;
    return pool;
}

RatioSample sample_ratio(std::size_t n_malicious, std::size_t n_benign, Ratio ratio, SplitMix64& rng,
                         std::size_t cap, std::size_t min_per_class) {
    if (ratio.malicious < 1 || ratio.benign < 1) throw Error(Errc::InvalidSpec, "ratio components must be >= 1");
    const auto m = static_cast<std::size_t>(ratio.malicious);
    const auto b = static_cast<std::size_t>(ratio.benign);
    const std::size_t units = std::min(std::min(n_malicious, cap) / m, std::min(n_benign, cap) / b);
    if (units == 0 || units * std::min(m, b) < min_per_class) {
        throw Error(Errc::InsufficientSamples,
                    "ratio " + ratio.str() + " cannot be met with " + std::to_string(n_malicious) + " malicious and " +
                        std::to_string(n_benign) + " benign samples (need at least " +
                        std::to_string(std::max<std::size_t>(1, min_per_class)) + " per class)");
    }
    RatioSample s;
    s.malicious = draw_without_replacement(n_malicious, units * m, rng);
    s.benign = draw_without_replacement(n_benign, units * b, rng);
    return s;
}

std::pair<std::vector<std::string>, std::vector<std::string>> sample_ratio(
    std::span<const std::string> malicious, std::span<const std::string> benign, Ratio ratio, SplitMix64& rng,
    std::size_t cap, std::size_t min_per_class) {
    const auto s = sample_ratio(malicious.size(), benign.size(), ratio, rng, cap, min_per_class);
    std::pair<std::vector<std::string>, std::vector<std::string>> out;
    for (auto i : s.malicious) out.first.push_back(malicious[i]);
    for (auto i : s.benign) out.second.push_back(benign[i]);
    return out;
}

std::vector<int> stratified_folds(std::span<const int> y, std::size_t n_classes, int folds, SplitMix64& rng) {
    if (folds < 2) throw Error(Errc::InvalidSpec, "folds must be >= 2");
    std::vector<std::vector<std::size_t>> by_class(n_classes);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0 || static_cast<std::size_t>(y[i]) >= n_classes) {
            throw Error(Errc::InvalidSpec, "class index out of range");
        }
        by_class[static_cast<std::size_t>(y[i])].push_back(i);
    }
    std::vector<int> fold_of(y.size(), -1);
    std::size_t offset = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        auto& members = by_class[c];
        if (members.size() < static_cast<std::size_t>(folds)) {
            throw Error(Errc::TooFewSamples, "class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                                                 " samples, fewer than " + std::to_string(folds) + " folds");
        }
        for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[rng.uniform_below(i)]);
        for (std::size_t j = 0; j < members.size(); ++j) {
            fold_of[members[j]] = static_cast<int>((offset + j) % static_cast<std::size_t>(folds));
        }
        offset += members.size();
    }
    return fold_of;
}

std::size_t duplicate_audit(std::span<const std::string> keys, std::span<const int> fold_of) {
    const auto flags = duplicate_flags(keys, fold_of);
    return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
}

CvResult cross_validate(const Dataset& data, const EvalConfig& config, std::uint64_t seed) {
    config.validate();
    if (data.y.size() != data.x.rows() || (!data.keys.empty() && data.keys.size() != data.y.size())) {
        throw Error(Errc::LengthMismatch, "dataset arrays differ in length");
    }
    SplitMix64 rng(derive_seed(seed, "folds"));
    const auto fold_of = stratified_folds(data.y, 2, config.folds, rng);
    const std::vector<std::string> labels{std::string(kBenignLabel), std::string(kMaliciousLabel)};

    CvResult out;
    for (int f = 0; f < config.folds; ++f) {
        const auto split = split_fold(fold_of, f);
        ForestParams params = config.forest;
        params.rng_seed = derive_seed(seed, "fold", static_cast<std::uint64_t>(f));
        const auto y_train = select_labels(data.y, split.train);
        const Forest forest = train_forest(data.x.select(split.train), y_train, labels, feature_name_list(), params);

        std::vector<int> pred;
        std::vector<int> truth;
        std::vector<double> score;
        for (auto i : split.test) {
            const auto proba = forest.predict_proba(data.x.row(i));
            score.push_back(proba[1]);
            pred.push_back(proba[1] > proba[0] ? 1 : 0);
            truth.push_back(data.y[i]);
        }
        out.per_fold.push_back(compute_metrics(pred, truth, score));
    }
    out.mean = mean_metrics(out.per_fold);
    if (!data.keys.empty()) out.duplicates_across_folds = duplicate_audit(data.keys, fold_of);
    return out;
}

FamilyResult repeat_experiment(const Pool& benign, const Pool& malicious, const std::string& family,
                               const EvalConfig& config) {
    config.validate();
    FamilyResult out;
    out.family = family;
    std::vector<Metrics> reps;
    for (int r = 0; r < config.repetitions; ++r) {
        const auto ru = static_cast<std::uint64_t>(r);
        SplitMix64 rng(derive_seed(config.rng_seed, family + "/sample", ru));
        const auto s = sample_ratio(malicious.size(), benign.size(), config.ratio, rng, config.per_class_cap,
                                    static_cast<std::size_t>(config.folds));
        Dataset data;
        data.x.reserve(s.malicious.size() + s.benign.size());
        for (auto i : s.malicious) {
            data.x.add_row(malicious.x.row(i));
            data.y.push_back(1);
            data.keys.push_back(malicious.slds[i]);
        }
        for (auto i : s.benign) {
            data.x.add_row(benign.x.row(i));
            data.y.push_back(0);
            data.keys.push_back(benign.slds[i]);
        }
        const auto cv = cross_validate(data, config, derive_seed(config.rng_seed, family + "/cv", ru));
        reps.push_back(cv.mean);
        out.repetition_f1.push_back(cv.mean.f1);
        out.duplicates_across_folds += cv.duplicates_across_folds;
        out.support = s.malicious.size();
        out.benign_support = s.benign.size();
    }
    out.mean = mean_metrics(reps);
    out.sigma_f1 = population_std(out.repetition_f1);
    return out;
}

Metrics weighted_average(std::span<const FamilyResult> families) {
    Metrics out;
    out.auc = 0.0;
    double total = 0.0;
    for (const auto& f : families) {
        if (f.flagged) continue;
        const auto w = static_cast<double>(f.support);
        out.precision += w * f.mean.precision;
        out.recall += w * f.mean.recall;
        out.f1 += w * f.mean.f1;
        out.auc += w * f.mean.auc;
        out.no_positive_predictions = out.no_positive_predictions || f.mean.no_positive_predictions;
        total += w;
    }
    if (total == 0.0) return Metrics{};
    out.precision /= total;
    out.recall /= total;
    out.f1 /= total;
    out.auc /= total;
    return out;
}

EvalReport binary_evaluate(const Pool& benign, std::span<const std::pair<std::string, Pool>> families,
                           const EvalConfig& config) {
    config.validate();
    EvalReport report;
    report.mode = "binary";
    report.config = config;
    report.class_labels = {std::string(kBenignLabel), std::string(kMaliciousLabel)};
    for (const auto& [name, pool] : families) report.per_family.push_back(repeat_experiment(benign, pool, name, config));
    report.weighted_average = weighted_average(report.per_family);
    return report;
}

EvalReport multiclass_evaluate(std::span<const std::pair<std::string, Pool>> families, const EvalConfig& config) {
    config.validate();
    if (families.size() < 2) throw Error(Errc::TooFewSamples, "multiclass evaluation needs at least two families");
    EvalReport report;
    report.mode = "multiclass";
    report.config = config;

    std::vector<std::size_t> active;  // indices into families
    for (std::size_t i = 0; i < families.size(); ++i) {
        FamilyResult fr;
        fr.family = families[i].first;
        fr.support = std::min(families[i].second.size(), config.per_class_cap);
        if (families[i].second.size() < static_cast<std::size_t>(config.folds)) {
            fr.flagged = true;
            fr.flag_reason = "fewer samples than folds";
            fr.mean.auc = 0.0;
            fr.mean.no_positive_predictions = true;
        } else {
            active.push_back(i);
            report.class_labels.push_back(fr.family);
        }
        report.per_family.push_back(std::move(fr));
    }
    if (active.size() < 2) throw Error(Errc::TooFewSamples, "fewer than two families have enough samples");
    const std::size_t k = active.size();

    std::vector<std::vector<Metrics>> reps(k);
    std::vector<std::vector<std::size_t>> pooled_total;
    for (int r = 0; r < config.repetitions; ++r) {
        const auto ru = static_cast<std::uint64_t>(r);
        SplitMix64 rng(derive_seed(config.rng_seed, "multiclass/sample", ru));
        Dataset data;
        for (std::size_t c = 0; c < k; ++c) {
            const Pool& pool = families[active[c]].second;
            for (auto i : draw_without_replacement(pool.size(), std::min(pool.size(), config.per_class_cap), rng)) {
                data.x.add_row(pool.x.row(i));
                data.y.push_back(static_cast<int>(c));
                data.keys.push_back(pool.slds[i]);
            }
        }
        const std::uint64_t cv_seed = derive_seed(config.rng_seed, "multiclass/cv", ru);
        SplitMix64 fold_rng(derive_seed(cv_seed, "folds"));
        const auto fold_of = stratified_folds(data.y, k, config.folds, fold_rng);

        auto confusion = zero_confusion(k);
        std::vector<std::vector<double>> proba_of(data.y.size());
        for (int f = 0; f < config.folds; ++f) {
            const auto split = split_fold(fold_of, f);
            ForestParams params = config.forest;
            params.rng_seed = derive_seed(cv_seed, "fold", static_cast<std::uint64_t>(f));
            const Forest forest = train_forest(data.x.select(split.train), select_labels(data.y, split.train),
                                               report.class_labels, feature_name_list(), params);
            for (auto i : split.test) {
                const auto pred = forest.predict(data.x.row(i));
                ++confusion[static_cast<std::size_t>(data.y[i])][pred.class_index];
                proba_of[i] = pred.probabilities;
            }
        }
        add_confusion(pooled_total, confusion);

        for (std::size_t c = 0; c < k; ++c) {
            std::size_t row = 0;
            std::size_t col = 0;
            for (std::size_t j = 0; j < k; ++j) {
                row += confusion[c][j];
                col += confusion[j][c];
            }
            const std::size_t tp = confusion[c][c];
            const std::size_t fp = col - tp;
            const std::size_t fn = row - tp;
            Metrics m;
            fill_prf(m, tp, fp, fn);
            m.confusion = {{data.y.size() - tp - fp - fn, fp}, {fn, tp}};
            std::vector<double> pos;
            std::vector<double> neg;
            for (std::size_t i = 0; i < data.y.size(); ++i) {
                (static_cast<std::size_t>(data.y[i]) == c ? pos : neg).push_back(proba_of[i][c]);
            }
            m.auc = rank_auc(pos, neg);
            reps[c].push_back(m);
        }
        const auto leaked = duplicate_flags(data.keys, fold_of);
        for (std::size_t i = 0; i < leaked.size(); ++i) {
            if (leaked[i]) ++report.per_family[active[static_cast<std::size_t>(data.y[i])]].duplicates_across_folds;
        }
    }

    for (std::size_t c = 0; c < k; ++c) {
        auto& fr = report.per_family[active[c]];
        fr.mean = mean_metrics(reps[c]);
        for (const auto& m : reps[c]) fr.repetition_f1.push_back(m.f1);
        fr.sigma_f1 = population_std(fr.repetition_f1);
    }
    report.weighted_average = weighted_average(report.per_family);
    report.weighted_average.confusion = pooled_total;
    return report;
}

namespace {

json metrics_json(const Metrics& m) {
    json j;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    j["auc"] = m.auc;
    j["no_positive_predictions"] = m.no_positive_predictions;
    j["confusion"] = m.confusion;
    return j;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
    const auto& c = report.config;
    json forest;
    forest["n_trees"] = c.forest.n_trees;
    forest["max_depth"] = c.forest.max_depth ? json(*c.forest.max_depth) : json(nullptr);
    forest["features_per_split"] = c.forest.features_per_split ? json(*c.forest.features_per_split) : json(nullptr);
    forest["min_samples_split"] = c.forest.min_samples_split;
    forest["bootstrap"] = c.forest.bootstrap;

    json config;
    config["ratio"] = c.ratio.str();
    config["repetitions"] = c.repetitions;
    config["folds"] = c.folds;
    config["rng_seed"] = c.rng_seed;
    config["per_class_cap"] = c.per_class_cap;
    config["forest"] = std::move(forest);

    json families = json::array();
    for (const auto& f : report.per_family) {
        json jf;
        jf["family"] = f.family;
        jf["support"] = f.support;
        if (report.mode == "binary") jf["benign_support"] = f.benign_support;
        jf["mean"] = metrics_json(f.mean);
        jf["sigma_f1"] = f.sigma_f1;
        jf["repetition_f1"] = f.repetition_f1;
        jf["duplicates_across_folds"] = f.duplicates_across_folds;
        jf["flagged"] = f.flagged;
        if (f.flagged) jf["flag_reason"] = f.flag_reason;
        families.push_back(std::move(jf));
    }

    json j;
    j["mode"] = report.mode;
    j["config"] = std::move(config);
    j["class_labels"] = report.class_labels;
    j["per_family"] = std::move(families);
    j["weighted_average"] = metrics_json(report.weighted_average);
    return j.dump(2) + "\n";
}

std::string report_table(const EvalReport& report) {
    std::ostringstream out;
    char line[256];
    out << report.mode << " evaluation, ratio " << report.config.ratio.str() << ", " << report.config.repetitions
        << " repetitions x " << report.config.folds << " folds, " << report.config.forest.n_trees << " trees\n";
    std::snprintf(line, sizeof line, "%-16s %7s %9s %9s %9s %7s %9s  %s\n", "family", "n", "precision", "recall",
                  "F1", "sigma", "AUC", "notes");
    out << line;
    for (const auto& f : report.per_family) {
        std::string notes = f.flag_reason;
        if (f.duplicates_across_folds > 0) {
            if (!notes.empty()) notes += "; ";
            notes += std::to_string(f.duplicates_across_folds) + " duplicates across folds";
        }
        std::snprintf(line, sizeof line, "%-16s %7zu %9.2f %9.2f %9.2f %7.2f %9.2f  %s\n", f.family.c_str(), f.support,
                      100.0 * f.mean.precision, 100.0 * f.mean.recall, 100.0 * f.mean.f1, 100.0 * f.sigma_f1,
                      100.0 * f.mean.auc, notes.c_str());
        out << line;
    }
    const auto& w = report.weighted_average;
    std::snprintf(line, sizeof line, "%-16s %7s %9.2f %9.2f %9.2f %7s %9.2f\n", "weighted avg", "", 100.0 * w.precision,
                  100.0 * w.recall, 100.0 * w.f1, "", 100.0 * w.auc);
    out << line;
    std::snprintf(line, sizeof line, "wall clock: %.1f s\n", report.wall_seconds);
    out << line;
    return out.str();
}

MillisClock steady_clock_ms() {
    return [] {
        const auto now = std::chrono::steady_clock::now().time_since_epoch();
        return std::chrono::duration<double, std::milli>(now).count();
    };
}

namespace {

// Nearest-rank percentile.
double percentile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
    return v[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace

LatencyStats benchmark_latency(std::span<const std::string> slds, const CorpusModels& models, const Forest& forest,
                               const FeatureConfig& config, const MillisClock& clock, std::size_t warmup) {
    models.require_complete();
    std::vector<DomainRecord> records;
    records.reserve(slds.size());
    for (const auto& s : slds) {
        try {
            records.push_back(parse_domain(s));
        } catch (const Error&) {
        }
    }
    double sink = 0.0;
    for (std::size_t i = 0; i < std::min(warmup, records.size()); ++i) {
        sink += forest.predict_proba(extract_features(records[i], models, config).values)[0];
    }

    std::vector<double> feature_ms;
    std::vector<double> predict_ms;
    feature_ms.reserve(records.size());
    predict_ms.reserve(records.size());
    for (const auto& rec : records) {
        const double t0 = clock();
        const auto fv = extract_features(rec, models, config);
        const double t1 = clock();
        sink += forest.predict_proba(fv.values)[0];
        const double t2 = clock();
        feature_ms.push_back(t1 - t0);
        predict_ms.push_back(t2 - t1);
    }
    // keeps the optimizer from dropping the predictions
    if (std::isnan(sink)) throw std::logic_error("NaN probability");

    LatencyStats st;
    st.samples = records.size();
    if (st.samples == 0) return st;
    st.total_feature_ms = std::accumulate(feature_ms.begin(), feature_ms.end(), 0.0);
    st.total_predict_ms = std::accumulate(predict_ms.begin(), predict_ms.end(), 0.0);
    st.mean_feature_ms = st.total_feature_ms / static_cast<double>(st.samples);
    st.mean_predict_ms = st.total_predict_ms / static_cast<double>(st.samples);
    st.p95_feature_ms = percentile(feature_ms, 0.95);
    st.p95_predict_ms = percentile(predict_ms, 0.95);
    return st;
}

}  // namespace dga
