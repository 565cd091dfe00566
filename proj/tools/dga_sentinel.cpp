#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "dga/corpus_models.hpp"
#include "dga/dga_synth.hpp"
#include "dga/domain.hpp"
#include "dga/error.hpp"
#include "dga/eval.hpp"
#include "dga/feature_cache.hpp"
#include "dga/features.hpp"
#include "dga/forest.hpp"
#include "dga/io.hpp"
#include "dga/rng.hpp"
#include "dga/text.hpp"

namespace {

constexpr int kExitData = 2;
constexpr int kExitUsage = 64;

const std::string kDataDir = DGA_DATA_DIR;

std::uint64_t g_seed = 0;

std::vector<std::string> nonempty_lines(const std::string& path) {
    std::vector<std::string> out;
    for (const auto& line : dga::read_lines(path)) {
        const auto t = dga::trim(line);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content << std::flush;
    } else {
        dga::write_text_file(path, content);
    }
}

dga::FeatureConfig feature_config(bool no_dot) {
    dga::FeatureConfig cfg;
    cfg.enable_dot = !no_dot;
    return cfg;
}

dga::CorpusModels load_models(const std::string& dir) {
    auto models = dga::load_corpus_models(dir);
    models.require_complete();
    return models;
}

// ---- train-models

struct TrainModelsArgs {
    std::string benign, out, suffixes;
    std::string wordlist = kDataDir + "/wordlist.txt";
    std::string gibberish_text = kDataDir + "/gibberish_text.txt";
    std::string gibberish_good = kDataDir + "/gibberish_good.txt";
    std::string gibberish_bad = kDataDir + "/gibberish_bad.txt";
};

int cmd_train_models(const TrainModelsArgs& a) {
    const auto suffixes = a.suffixes.empty() ? dga::SuffixSet::builtin() : dga::SuffixSet::load(a.suffixes);
    const auto benign = dga::ingest_benign_corpus(dga::read_domain_lines(a.benign), suffixes);
    const auto words = nonempty_lines(a.wordlist);
    const auto text = dga::read_text_file(a.gibberish_text);
    const auto good = nonempty_lines(a.gibberish_good);
    const auto bad = nonempty_lines(a.gibberish_bad);

    dga::CorpusTrainingInputs in;
    in.benign = &benign;
    in.ranked_words = words;
    in.gibberish_text = text;
    in.gibberish_good = good;
    in.gibberish_bad = bad;
    const auto models = dga::train_corpus_models(in);
    dga::save_corpus_models(models, a.out);
    std::cerr << "benign corpus: " << benign.slds.size() << " SLDs from " << benign.source_count << " lines ("
              << benign.dropped_duplicate << " duplicates, " << benign.dropped_idn << " IDN, " << benign.dropped_invalid
              << " invalid dropped)\n"
              << "models written to " << a.out << "\n";
    return 0;
}

// ---- generate

struct GenerateArgs {
    std::string archetype, out = "-", dictionary = kDataDir + "/dict500.txt", tld;
    std::size_t count = 0;
    bool labeled = false;
};

int cmd_generate(const GenerateArgs& a) {
    std::vector<std::string> dictionary;
    if (a.archetype == "dict2") dictionary = nonempty_lines(a.dictionary);
    auto spec = dga::archetype_spec(a.archetype, dga::derive_seed(g_seed, "generate/" + a.archetype), a.count,
                                    dictionary);
    spec.tld = a.tld;
    const auto slds = dga::generate(spec);
    std::ostringstream out;
    if (a.labeled) {
        std::vector<dga::LabeledRecord> records;
        for (const auto& s : slds) {
            records.push_back({s, std::string(dga::kMaliciousLabel), a.archetype});
        }
        dga::write_labeled_csv(out, records);
    } else {
        for (const auto& line : dga::with_tld(slds, a.tld)) out << line << '\n';
    }
    write_output(a.out, out.str());
    return 0;
}

// ---- extract

struct ExtractArgs {
    std::string models, in, out = "-", labels;
    bool no_dot = false;
};

int cmd_extract(const ExtractArgs& a) {
    const auto models = load_models(a.models);
    const auto domains = dga::read_domain_lines(a.in);
    std::vector<std::pair<std::string, std::string>> labels;  // label, family
    if (!a.labels.empty()) {
        for (const auto& line : nonempty_lines(a.labels)) {
            const auto comma = line.find(',');
            if (comma == std::string::npos) {
                labels.emplace_back(line, "");
            } else {
                labels.emplace_back(line.substr(0, comma), line.substr(comma + 1));
            }
        }
        if (labels.size() != domains.size()) {
            throw dga::Error(dga::Errc::LengthMismatch, std::to_string(domains.size()) + " domains but " +
                                                            std::to_string(labels.size()) + " labels");
        }
    }
    const auto cfg = feature_config(a.no_dot);
    std::ostringstream out;
    dga::write_feature_csv_header(out);
    for (std::size_t i = 0; i < domains.size(); ++i) {
        auto v = dga::extract_features(dga::parse_domain(domains[i]), models, cfg);
        if (!labels.empty()) {
            v.label = labels[i].first;
            if (!labels[i].second.empty()) v.family = labels[i].second;
        }
        dga::write_feature_csv_row(out, v);
    }
    write_output(a.out, out.str());
    return 0;
}

// ---- train

struct TrainArgs {
    std::string features, out;
    std::optional<int> trees;
    std::optional<int> max_depth;
    bool multiclass = false;
};

int cmd_train(const TrainArgs& a) {
    std::ifstream in(a.features);
    if (!in) throw dga::Error(dga::Errc::Io, "cannot open " + a.features);
    const auto rows = dga::read_feature_csv(in);
    dga::FeatureMatrix x(dga::kFeatureCount);
    std::vector<std::string> y;
    for (const auto& r : rows) {
        const auto& target = a.multiclass ? r.family : r.label;
        if (!target || target->empty()) {
            throw dga::Error(dga::Errc::CorruptDocument, "row for '" + r.sld + "' has no " +
                                                             (a.multiclass ? "family" : "label"));
        }
        x.add_row(r.values);
        y.push_back(*target);
    }
    dga::ForestParams params;
    params.n_trees = a.trees.value_or(a.multiclass ? 200 : 100);
    params.max_depth = a.max_depth;
    params.rng_seed = dga::derive_seed(g_seed, "train");
    const auto forest = dga::train_forest(x, y, {dga::kFeatureNames.begin(), dga::kFeatureNames.end()}, params);
    dga::write_text_file(a.out, dga::serialize_model(forest));
    std::cerr << "trained " << params.n_trees << " trees on " << rows.size() << " rows, "
              << forest.class_labels().size() << " classes\n";
    return 0;
}

// ---- classify

struct ClassifyArgs {
    std::string model, models, in;
    bool stream = false;
    bool no_dot = false;
};

int cmd_classify(const ClassifyArgs& a) {
    const auto forest = dga::deserialize_model(dga::read_text_file(a.model));
    const auto models = load_models(a.models);
    const auto cfg = feature_config(a.no_dot);
    const auto& labels = forest.class_labels();
    std::optional<std::size_t> malicious;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == dga::kMaliciousLabel) malicious = i;
    }
    dga::FeatureCache cache(100000);

    auto verdict = [&](std::string_view line) {
        dga::DomainRecord rec;
        try {
            rec = dga::parse_domain(line);
        } catch (const dga::Error& e) {
            std::cerr << "warning: " << e.what() << '\n';
            return std::string(line) + ",invalid,";
        }
        const auto pred = forest.predict(cache.get_or_compute(rec, models, cfg).values);
        const double score = malicious ? pred.probabilities[*malicious] : pred.probabilities[pred.class_index];
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", score);
        return rec.sld + "," + pred.label + "," + buf;
    };

    std::ifstream file;
    if (!a.stream) {
        file.open(a.in);
        if (!file) throw dga::Error(dga::Errc::Io, "cannot open " + a.in);
        std::cout << "sld,label,score\n";
    }
    std::istream& in = a.stream ? std::cin : file;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = dga::trim(line);
        if (t.empty()) {
            std::cerr << "warning: line " << lineno << " is empty, skipped\n";
            continue;
        }
        if (!a.stream && t.front() == '#') continue;
        std::cout << verdict(t) << '\n';
        if (a.stream) std::cout.flush();
    }
    std::cout.flush();
    return 0;
}

// ---- evaluate

struct EvaluateArgs {
    std::string benign, report, models, ratio = "1:1";
    std::vector<std::string> malicious;
    int reps = 10;
    int folds = 10;
    std::optional<int> trees;
    std::optional<int> max_depth;
    std::size_t cap = 5000;
    bool multiclass = false;
    bool no_dot = false;
};

// First line per SLD, raw so the dot count survives. Unparseable lines are
// dropped with a warning, as are IDNs when drop_idn is set.
std::vector<std::string> unique_domains(const std::string& path, bool drop_idn) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    std::size_t skipped = 0;
    for (const auto& line : dga::read_domain_lines(path)) {
        try {
            const auto rec = dga::parse_domain(line);
            if (drop_idn && rec.is_idn) continue;
            if (seen.insert(rec.sld).second) out.push_back(line);
        } catch (const dga::Error&) {
            ++skipped;
        }
    }
    if (skipped > 0) std::cerr << "warning: " << path << ": " << skipped << " unparseable lines skipped\n";
    return out;
}

int cmd_evaluate(const EvaluateArgs& a) {
    dga::EvalConfig cfg;
    cfg.ratio = dga::Ratio::parse(a.ratio);
    cfg.repetitions = a.reps;
    cfg.folds = a.folds;
    cfg.rng_seed = dga::derive_seed(g_seed, "evaluate");
    cfg.per_class_cap = a.cap;
    cfg.forest.n_trees = a.trees.value_or(a.multiclass ? 200 : 100);
    cfg.forest.max_depth = a.max_depth;
    cfg.validate();
    if (!a.multiclass && a.benign.empty()) {
        throw dga::Error(dga::Errc::InvalidSpec, "binary evaluation needs --benign");
    }

    const auto models = load_models(a.models);
    const auto fcfg = feature_config(a.no_dot);
    const auto start = std::chrono::steady_clock::now();

    std::vector<std::pair<std::string, dga::Pool>> families;
    std::optional<dga::Pool> benign;
    if (!a.benign.empty()) benign = dga::build_pool(unique_domains(a.benign, true), models, fcfg);
    for (const auto& path : a.malicious) {
        families.emplace_back(std::filesystem::path(path).stem().string(),
                              dga::build_pool(unique_domains(path, false), models, fcfg));
    }

    dga::EvalReport report;
    if (a.multiclass) {
        if (benign) families.insert(families.begin(), {std::string(dga::kBenignLabel), std::move(*benign)});
        report = dga::multiclass_evaluate(families, cfg);
    } else {
        report = dga::binary_evaluate(*benign, families, cfg);
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_output(a.report, dga::report_to_json(report));
    std::cout << dga::report_table(report);
    return 0;
}

// ---- bench

struct BenchArgs {
    std::string models, model, in;
    bool force = false;
    bool no_dot = false;
};

int cmd_bench(const BenchArgs& a) {
    const auto domains = dga::read_domain_lines(a.in);
    if (domains.size() < 1000 && !a.force) {
        throw dga::Error(dga::Errc::InsufficientSamples, "benchmark needs at least 1000 SLDs for stable statistics (" +
                                                             std::to_string(domains.size()) +
                                                             " given); pass --force to run anyway");
    }
    const auto models = load_models(a.models);
    const auto forest = dga::deserialize_model(dga::read_text_file(a.model));
    const auto st = dga::benchmark_latency(domains, models, forest, feature_config(a.no_dot));
    std::printf("single-threaded measurement, %zu SLDs after warm-up, %zu trees\n", st.samples,
                forest.trees().size());
    std::printf("%-10s %12s %12s\n", "stage", "mean_ms", "p95_ms");
    std::printf("%-10s %12.4f %12.4f\n", "features", st.mean_feature_ms, st.p95_feature_ms);
    std::printf("%-10s %12.4f %12.4f\n", "predict", st.mean_predict_ms, st.p95_predict_ms);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lexical detection of algorithmically generated domains", "dga-sentinel"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read flags from a key=value file")->envname("DGA_SENTINEL_CONFIG");
    app.add_option("--seed", g_seed, "Seed all randomness flows from")->capture_default_str();

    TrainModelsArgs tm;
    auto* train_models = app.add_subcommand("train-models", "Train n-gram, word and gibberish models");
    train_models->add_option("--benign", tm.benign, "Benign domain list")->required()->check(CLI::ExistingFile);
    train_models->add_option("--wordlist", tm.wordlist, "Words ranked by frequency, one per line")
        ->check(CLI::ExistingFile)
        ->capture_default_str();
    train_models->add_option("--gibberish-text", tm.gibberish_text, "English training text")
        ->check(CLI::ExistingFile)
        ->capture_default_str();
    train_models->add_option("--gibberish-good", tm.gibberish_good, "Readable calibration lines")
        ->check(CLI::ExistingFile)
        ->capture_default_str();
    train_models->add_option("--gibberish-bad", tm.gibberish_bad, "Gibberish calibration lines")
        ->check(CLI::ExistingFile)
        ->capture_default_str();
    train_models->add_option("--suffixes", tm.suffixes, "Second-level suffix labels, one per line")
        ->check(CLI::ExistingFile);
    train_models->add_option("--out", tm.out, "Output directory")->required();

    GenerateArgs ge;
    auto* generate = app.add_subcommand("generate", "Emit synthetic AGDs of one archetype");
    generate->add_option("--archetype", ge.archetype, "Archetype")
        ->required()
        ->check(CLI::IsMember(dga::archetype_names()));
    generate->add_option("--count", ge.count, "Number of SLDs")->required()->check(CLI::PositiveNumber);
    generate->add_option("--out", ge.out, "Output file, - for stdout")->capture_default_str();
    generate->add_option("--dictionary", ge.dictionary, "Word source for dict2")
        ->check(CLI::ExistingFile)
        ->capture_default_str();
    generate->add_option("--tld", ge.tld, "Suffix appended to each SLD");
    generate->add_flag("--labeled", ge.labeled, "Emit sld,label,family CSV");

    ExtractArgs ex;
    auto* extract = app.add_subcommand("extract", "Write the feature CSV for a domain list");
    extract->add_option("--models", ex.models, "Model directory")->required()->check(CLI::ExistingDirectory);
    extract->add_option("--in", ex.in, "Domain list")->required()->check(CLI::ExistingFile);
    extract->add_option("--out", ex.out, "Output CSV, - for stdout")->capture_default_str();
    extract->add_option("--labels", ex.labels, "label[,family] per domain, same order")->check(CLI::ExistingFile);
    extract->add_flag("--no-dot-feature", ex.no_dot, "Force L-DOT to 0");

    TrainArgs tr;
    auto* train = app.add_subcommand("train", "Train a random forest from a feature CSV");
    train->add_option("--features", tr.features, "Labeled feature CSV")->required()->check(CLI::ExistingFile);
    train->add_option("--out", tr.out, "Model file")->required();
    train->add_option("--trees", tr.trees, "Trees (default 100, 200 with --multiclass)")->check(CLI::PositiveNumber);
    train->add_option("--max-depth", tr.max_depth, "Depth limit (default unlimited)")->check(CLI::NonNegativeNumber);
    train->add_flag("--multiclass", tr.multiclass, "Predict the family column instead of the label");

    ClassifyArgs cl;
    auto* classify = app.add_subcommand("classify", "Classify domains as sld,label,score lines");
    classify->add_option("--model", cl.model, "Forest model")->required()->check(CLI::ExistingFile);
    classify->add_option("--models", cl.models, "Model directory")->required()->check(CLI::ExistingDirectory);
    auto* cl_in = classify->add_option("--in", cl.in, "Domain list")->check(CLI::ExistingFile);
    auto* cl_stream = classify->add_flag("--stdin-stream", cl.stream, "Read stdin, flush one verdict per line");
    cl_in->excludes(cl_stream);
    classify->add_flag("--no-dot-feature", cl.no_dot, "Force L-DOT to 0");

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "Repeated stratified cross-validation");
    evaluate->add_option("--benign", ev.benign, "Benign domain list")->check(CLI::ExistingFile);
    evaluate->add_option("--malicious", ev.malicious, "AGD lists; the file stem names the family")
        ->required()
        ->delimiter(',')
        ->check(CLI::ExistingFile);
    evaluate->add_option("--ratio", ev.ratio, "malicious:benign")->capture_default_str();
    evaluate->add_option("--reps", ev.reps, "Repetitions")->capture_default_str()->check(CLI::PositiveNumber);
    evaluate->add_option("--folds", ev.folds, "Folds")->capture_default_str()->check(CLI::Range(2, 1000));
    evaluate->add_option("--report", ev.report, "Report JSON, - for stdout")->required();
    evaluate->add_option("--models", ev.models, "Model directory")->required()->check(CLI::ExistingDirectory);
    evaluate->add_option("--trees", ev.trees, "Trees (default 100, 200 with --multiclass)")
        ->check(CLI::PositiveNumber);
    evaluate->add_option("--max-depth", ev.max_depth, "Depth limit")->check(CLI::NonNegativeNumber);
    evaluate->add_option("--cap", ev.cap, "Samples per class")->capture_default_str()->check(CLI::PositiveNumber);
    evaluate->add_flag("--multiclass", ev.multiclass, "One forest over the malicious families");
    evaluate->add_flag("--no-dot-feature", ev.no_dot, "Force L-DOT to 0");

    BenchArgs be;
    auto* bench = app.add_subcommand("bench", "Per-SLD feature and prediction latency");
    bench->add_option("--models", be.models, "Model directory")->required()->check(CLI::ExistingDirectory);
    bench->add_option("--model", be.model, "Forest model")->required()->check(CLI::ExistingFile);
    bench->add_option("--in", be.in, "Domain list")->required()->check(CLI::ExistingFile);
    bench->add_flag("--force", be.force, "Run on fewer than 1000 SLDs");
    bench->add_flag("--no-dot-feature", be.no_dot, "Force L-DOT to 0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }
    if (classify->parsed() && cl.in.empty() && !cl.stream) {
        std::cerr << "classify: one of --in or --stdin-stream is required\n";
        return kExitUsage;
    }

    try {
        if (train_models->parsed()) return cmd_train_models(tm);
        if (generate->parsed()) return cmd_generate(ge);
        if (extract->parsed()) return cmd_extract(ex);
        if (train->parsed()) return cmd_train(tr);
        if (classify->parsed()) return cmd_classify(cl);
        if (evaluate->parsed()) return cmd_evaluate(ev);
        if (bench->parsed()) return cmd_bench(be);
    } catch (const dga::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == dga::Errc::InvalidSpec ? kExitUsage : kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
