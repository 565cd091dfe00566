#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "dga/dga_synth.hpp"
#include "dga/error.hpp"
#include "dga/eval.hpp"
#include "support.hpp"

using namespace dga;

namespace {

Errc error_code(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Io;
}

// Two clouds in 40 dimensions; `gap` shifts the malicious one.
Dataset clouds(std::size_t per_class, double gap, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Dataset d;
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const int label = i < per_class ? 0 : 1;
        std::vector<double> row(kFeatureCount);
        for (auto& v : row) v = rng.uniform01() + (label == 1 ? gap : 0.0);
        d.x.add_row(row);
        d.y.push_back(label);
        d.keys.push_back("k" + std::to_string(i));
    }
    return d;
}

Pool synthetic_pool(std::size_t n, double offset, std::uint64_t seed, const std::string& prefix) {
    SplitMix64 rng(seed);
    Pool p;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(kFeatureCount);
        for (auto& v : row) v = rng.uniform01() + offset;
        p.x.add_row(row);
        p.slds.push_back(prefix + std::to_string(i));
    }
    return p;
}

EvalConfig small_config() {
    EvalConfig cfg;
    cfg.repetitions = 2;
    cfg.folds = 4;
    cfg.forest.n_trees = 10;
    cfg.rng_seed = 17;
    return cfg;
}

}  // namespace

TEST_CASE("metric examples") {
    auto m = compute_metrics(std::vector<int>{1, 1, 0, 0}, std::vector<int>{1, 1, 0, 0},
                             std::vector<double>{0.9, 0.8, 0.1, 0.2});
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
    CHECK(m.auc == 1.0);

    m = compute_metrics(std::vector<int>{1, 0, 1, 0}, std::vector<int>{1, 1, 0, 0},
                        std::vector<double>{0.6, 0.4, 0.6, 0.4});
    CHECK(m.precision == 0.5);
    CHECK(m.recall == 0.5);
    CHECK(m.f1 == 0.5);
    CHECK(m.auc == 0.5);
    CHECK(m.confusion == std::vector<std::vector<std::size_t>>{{1, 1}, {1, 1}});

    m = compute_metrics(std::vector<int>{0, 0}, std::vector<int>{1, 0}, std::vector<double>{0.1, 0.2});
    CHECK(m.no_positive_predictions);
    CHECK(m.precision == 0.0);
    CHECK(m.f1 == 0.0);

    m = compute_metrics(std::vector<int>{1}, std::vector<int>{1}, std::vector<double>{0.7});
    CHECK(m.auc == 0.5);

    CHECK(error_code([] { compute_metrics(std::vector<int>{1}, std::vector<int>{1, 0}, std::vector<double>{0.5}); }) ==
          Errc::LengthMismatch);
}

TEST_CASE("metric bounds, F1 identity and AUC antisymmetry") {
    SplitMix64 rng(12);
    for (int t = 0; t < 300; ++t) {
        const auto n = 2 + rng.uniform_below(40);
        std::vector<int> pred(n), truth(n);
        std::vector<double> score(n), reversed(n);
        for (std::size_t i = 0; i < n; ++i) {
            truth[i] = static_cast<int>(rng.uniform_below(2));
            score[i] = static_cast<double>(rng.uniform_below(7)) / 6.0;  // ties on purpose
            reversed[i] = -score[i];
            pred[i] = score[i] > 0.5 ? 1 : 0;
        }
        const auto m = compute_metrics(pred, truth, score);
        for (double v : {m.precision, m.recall, m.f1, m.auc}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        if (m.precision + m.recall > 0) {
            CHECK(m.f1 == doctest::Approx(2 * m.precision * m.recall / (m.precision + m.recall)).epsilon(1e-9));
        } else {
            CHECK(m.f1 == 0.0);
        }
        const auto r = compute_metrics(pred, truth, reversed);
        CHECK(r.auc == doctest::Approx(1.0 - m.auc).epsilon(1e-12));
    }
}

TEST_CASE("rank AUC counts ties as halves") {
    CHECK(rank_auc(std::vector<double>{0.5}, std::vector<double>{0.5}) == 0.5);
    CHECK(rank_auc(std::vector<double>{0.9, 0.5}, std::vector<double>{0.5, 0.1}) == doctest::Approx(0.875));
    CHECK(rank_auc({}, std::vector<double>{0.1}) == 0.5);
}

TEST_CASE("population standard deviation") {
    CHECK(population_std(std::vector<double>{0.9, 0.95, 1.0}) == doctest::Approx(0.0408248290463863).epsilon(1e-12));
    CHECK(population_std(std::vector<double>{0.7}) == 0.0);
    CHECK(population_std({}) == 0.0);
}

TEST_CASE("ratio parsing") {
    CHECK(Ratio::parse("1:10").benign == 10);
    CHECK(Ratio::parse("1:100").str() == "1:100");
    for (const char* bad : {"", "1", "0:1", "1:0", "a:b", "1:2:3", "-1:4"}) {
        CHECK(error_code([&] { Ratio::parse(bad); }) == Errc::InvalidSpec);
    }
}

TEST_CASE("ratio sampling arithmetic") {
    SplitMix64 rng(1);
    auto s = sample_ratio(100, 10000, Ratio::parse("1:10"), rng);
    CHECK(s.malicious.size() == 100);
    CHECK(s.benign.size() == 1000);
    s = sample_ratio(50, 10000, Ratio::parse("1:1"), rng);
    CHECK(s.malicious.size() == 50);
    CHECK(s.benign.size() == 50);
    s = sample_ratio(50, 10000, Ratio::parse("1:100"), rng, 5000);
    CHECK(s.malicious.size() == 50);
    CHECK(s.benign.size() == 5000);
    s = sample_ratio(5000, 5000, Ratio::parse("1:100"), rng, 5000);
    CHECK(s.malicious.size() == 50);
    CHECK(s.benign.size() == 5000);
    std::set<std::size_t> uniq(s.benign.begin(), s.benign.end());
    CHECK(uniq.size() == s.benign.size());

    CHECK(error_code([&] { sample_ratio(5, 10, Ratio::parse("1:100"), rng); }) == Errc::InsufficientSamples);
    CHECK(error_code([&] { sample_ratio(5000, 5000, Ratio::parse("1:100"), rng, 5000, 100); }) ==
          Errc::InsufficientSamples);
}

TEST_CASE("different seeds draw different benign subsets") {
    std::vector<std::string> benign, mal;
    for (int i = 0; i < 10000; ++i) benign.push_back("b" + std::to_string(i));
    for (int i = 0; i < 100; ++i) mal.push_back("m" + std::to_string(i));
    int identical = 0;
    double overlap_sum = 0.0;
    for (std::uint64_t run = 0; run < 20; ++run) {
        SplitMix64 a(derive_seed(1, "run", 2 * run)), b(derive_seed(1, "run", 2 * run + 1));
        auto [ma, ba] = sample_ratio(mal, benign, Ratio::parse("1:10"), a);
        auto [mb, bb] = sample_ratio(mal, benign, Ratio::parse("1:10"), b);
        std::sort(ba.begin(), ba.end());
        std::sort(bb.begin(), bb.end());
        std::vector<std::string> common;
        std::set_intersection(ba.begin(), ba.end(), bb.begin(), bb.end(), std::back_inserter(common));
        identical += common.size() == ba.size();
        overlap_sum += static_cast<double>(common.size()) / static_cast<double>(ba.size());
    }
    CHECK(identical == 0);
    // expected overlap of two 1000-of-10000 draws is 10%
    CHECK(overlap_sum / 20.0 == doctest::Approx(0.1).epsilon(0.3));
}

TEST_CASE("stratified folds are balanced") {
    SplitMix64 rng(4);
    for (int t = 0; t < 50; ++t) {
        const auto n = 20 + rng.uniform_below(200);
        const std::size_t k = 2 + rng.uniform_below(3);
        const int folds = 2 + static_cast<int>(rng.uniform_below(9));
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i < k * static_cast<std::size_t>(folds) ? i % k : rng.uniform_below(k));
        const auto f = stratified_folds(y, k, folds, rng);
        std::vector<std::size_t> size(static_cast<std::size_t>(folds));
        std::vector<std::vector<std::size_t>> per_class(k, std::vector<std::size_t>(static_cast<std::size_t>(folds)));
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(f[i] >= 0);
            REQUIRE(f[i] < folds);
            ++size[static_cast<std::size_t>(f[i])];
            ++per_class[static_cast<std::size_t>(y[i])][static_cast<std::size_t>(f[i])];
        }
        CHECK(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()) <= 1);
        for (const auto& c : per_class) CHECK(*std::max_element(c.begin(), c.end()) - *std::min_element(c.begin(), c.end()) <= 1);
    }
    std::vector<int> tiny{0, 1, 1, 1};
    CHECK(error_code([&] { stratified_folds(tiny, 2, 3, rng); }) == Errc::TooFewSamples);
}

TEST_CASE("cross-validation on separable data is perfect") {
    const auto d = clouds(60, 3.0, 1);
    auto cfg = small_config();
    cfg.folds = 5;
    const auto r = cross_validate(d, cfg, 9);
    CHECK(r.per_fold.size() == 5);
    CHECK(r.mean.f1 == 1.0);
    CHECK(r.mean.auc == 1.0);
    CHECK(r.duplicates_across_folds == 0);
    std::size_t total = 0;
    for (const auto& row : r.mean.confusion) for (auto c : row) total += c;
    CHECK(total == 120);
}

TEST_CASE("shuffled labels give chance-level AUC") {
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto d = clouds(60, 0.0, 100 + seed);
        SplitMix64 rng(seed);
        for (std::size_t i = d.y.size() - 1; i > 0; --i) std::swap(d.y[i], d.y[rng.uniform_below(i + 1)]);
        auto cfg = small_config();
        cfg.folds = 5;
        cfg.forest.n_trees = 20;
        sum += cross_validate(d, cfg, seed).mean.auc;
    }
    CHECK(sum / 10.0 == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("duplicate audit flags leaked samples") {
    auto d = clouds(40, 3.0, 2);
    auto cfg = small_config();
    cfg.folds = 5;
    CHECK(cross_validate(d, cfg, 1).duplicates_across_folds == 0);
    // every sample twice
    const auto n = d.y.size();
    for (std::size_t i = 0; i < n; ++i) {
        d.x.add_row(d.x.row(i));
        d.y.push_back(d.y[i]);
        d.keys.push_back(d.keys[i]);
    }
    const auto leaked = cross_validate(d, cfg, 1).duplicates_across_folds;
    CHECK(leaked > 0);
    CHECK(leaked <= d.y.size());

    const std::vector<std::string> keys{"a", "a", "b", "c"};
    CHECK(duplicate_audit(keys, std::vector<int>{0, 1, 0, 1}) == 2);
    CHECK(duplicate_audit(keys, std::vector<int>{0, 0, 1, 1}) == 0);
}

TEST_CASE("repeat_experiment reports mean and sigma over repetitions") {
    const auto benign = synthetic_pool(300, 0.0, 1, "b");
    const auto mal = synthetic_pool(300, 2.0, 2, "m");
    auto cfg = small_config();
    cfg.repetitions = 3;
    const auto r = repeat_experiment(benign, mal, "far", cfg);
    CHECK(r.repetition_f1.size() == 3);
    CHECK(r.mean.f1 >= 0.99);
    CHECK(r.sigma_f1 <= 0.01);
    CHECK(r.support == 300);
    CHECK(r.benign_support == 300);
    CHECK_FALSE(r.flagged);

    cfg.repetitions = 1;
    CHECK(repeat_experiment(benign, mal, "far", cfg).sigma_f1 == 0.0);

    cfg.ratio = Ratio::parse("1:100");
    CHECK(error_code([&] { repeat_experiment(benign, mal, "far", cfg); }) == Errc::InsufficientSamples);
}

TEST_CASE("weighted average uses support and skips flagged families") {
    std::vector<FamilyResult> fams(3);
    fams[0].mean.f1 = 1.0;
    fams[0].mean.precision = 1.0;
    fams[0].support = 300;
    fams[1].mean.f1 = 0.5;
    fams[1].mean.precision = 0.25;
    fams[1].support = 100;
    fams[2].mean.f1 = 0.0;
    fams[2].support = 5;
    fams[2].flagged = true;
    const auto w = weighted_average(fams);
    CHECK(w.f1 == doctest::Approx(0.875));
    CHECK(w.precision == doctest::Approx(0.8125));
}

TEST_CASE("multiclass evaluation") {
    std::vector<std::pair<std::string, Pool>> fams;
    fams.emplace_back("a", synthetic_pool(80, 0.0, 1, "a"));
    fams.emplace_back("b", synthetic_pool(80, 2.0, 2, "b"));
    fams.emplace_back("c", synthetic_pool(80, 4.0, 3, "c"));
    fams.emplace_back("tiny", synthetic_pool(3, 6.0, 4, "t"));
    auto cfg = small_config();
    cfg.repetitions = 1;
    const auto r = multiclass_evaluate(fams, cfg);
    CHECK(r.mode == "multiclass");
    REQUIRE(r.per_family.size() == 4);
    for (int i = 0; i < 3; ++i) {
        CHECK(r.per_family[static_cast<std::size_t>(i)].mean.f1 == 1.0);
        CHECK(r.per_family[static_cast<std::size_t>(i)].support == 80);
    }
    CHECK(r.per_family[3].flagged);
    CHECK(r.per_family[3].mean.f1 == 0.0);
    CHECK(r.weighted_average.f1 == 1.0);

    std::vector<std::pair<std::string, Pool>> lonely;
    lonely.emplace_back("a", synthetic_pool(80, 0.0, 1, "a"));
    lonely.emplace_back("tiny", synthetic_pool(3, 6.0, 4, "t"));
    CHECK(error_code([&] { multiclass_evaluate(lonely, cfg); }) == Errc::TooFewSamples);
}

TEST_CASE("reports are reproducible and leave timing out of the JSON") {
    const auto benign = synthetic_pool(120, 0.0, 1, "b");
    std::vector<std::pair<std::string, Pool>> fams;
    fams.emplace_back("near", synthetic_pool(120, 0.4, 2, "n"));
    const auto cfg = small_config();
    auto a = binary_evaluate(benign, fams, cfg);
    auto b = binary_evaluate(benign, fams, cfg);
    a.wall_seconds = 1.0;
    b.wall_seconds = 2.0;
    CHECK(report_to_json(a) == report_to_json(b));
    CHECK(report_to_json(a).find("wall") == std::string::npos);
    CHECK(report_table(a).find("near") != std::string::npos);

    auto other = cfg;
    other.rng_seed = 18;
    CHECK(report_to_json(binary_evaluate(benign, fams, other)) != report_to_json(a));
}

TEST_CASE("config validation") {
    EvalConfig cfg;
    cfg.folds = 1;
    CHECK(error_code([&] { cfg.validate(); }) == Errc::InvalidSpec);
    cfg.folds = 10;
    cfg.repetitions = 0;
    CHECK(error_code([&] { cfg.validate(); }) == Errc::InvalidSpec);
}

TEST_CASE("benchmark timing with a fake clock") {
    const auto& models = support::shipped_models();
    std::vector<std::string> slds;
    for (int i = 0; i < 260; ++i) slds.push_back("name" + std::to_string(i) + ".com");
    const auto pool = build_pool(slds, models, {});
    std::vector<int> y(pool.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<int>(i % 2);
    ForestParams p;
    p.n_trees = 3;
    std::vector<std::string> feature_names(kFeatureNames.begin(), kFeatureNames.end());
    const auto forest = train_forest(pool.x, y, {"benign", "malicious"}, feature_names, p);

    // each reading advances by an increasing step
    double now = 0.0, step = 0.0;
    MillisClock clock = [&] {
        step += 0.5;
        now += step;
        return now;
    };
    // warm-up runs over the first 200 unrecorded, then every SLD is timed
    const auto s = benchmark_latency(slds, models, forest, {}, clock, 200);
    CHECK(s.samples == 260);
    CHECK(s.mean_feature_ms > 0.0);
    CHECK(s.mean_feature_ms == doctest::Approx(s.total_feature_ms / 260.0).epsilon(1e-12));
    CHECK(s.mean_predict_ms == doctest::Approx(s.total_predict_ms / 260.0).epsilon(1e-12));
    CHECK(s.p95_feature_ms >= s.mean_feature_ms);
}
