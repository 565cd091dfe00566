#include "dga/corpus_models.hpp"

#include <filesystem>
#include <json.hpp>

#include "dga/error.hpp"
#include "dga/io.hpp"

namespace dga {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kModelFiles[] = {"ngram3.json", "ngram4.json", "ngram5.json", "word.json",
                                       "markov.json"};

json parse_document(std::string_view doc, std::string_view kind) {
    json j;
    try {
        j = json::parse(doc);
    } catch (const json::exception& e) {
        throw Error(Errc::CorruptDocument, std::string(kind) + " model: " + e.what());
    }
    if (!j.is_object() || !j.contains("schema_version")) {
        throw Error(Errc::CorruptDocument, std::string(kind) + " model has no schema_version");
    }
    if (j.at("schema_version") != kModelSchemaVersion) {
        throw Error(Errc::SchemaVersionMismatch,
                    std::string(kind) + " model schema " + j.at("schema_version").dump() +
                        ", expected " + std::to_string(kModelSchemaVersion));
    }
    if (j.value("kind", "") != kind) {
        throw Error(Errc::CorruptDocument, "document is not a " + std::string(kind) + " model");
    }
    return j;
}

// Runs fn, turning json access errors into CorruptDocument.
template <typename Fn>
auto guarded(std::string_view kind, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw Error(Errc::CorruptDocument, std::string(kind) + " model: " + e.what());
    }
}

}  // namespace

void CorpusModels::require_complete() const {
    if (!ngram3) throw Error(Errc::ModelMissing, "3-gram model");
    if (!ngram4) throw Error(Errc::ModelMissing, "4-gram model");
    if (!ngram5) throw Error(Errc::ModelMissing, "5-gram model");
    if (!words) throw Error(Errc::ModelMissing, "word model");
    if (!markov) throw Error(Errc::ModelMissing, "Markov gibberish model");
}

const NGramModel& CorpusModels::ngram(int n) const {
    const std::optional<NGramModel>* m = n == 3 ? &ngram3 : n == 4 ? &ngram4 : n == 5 ? &ngram5 : nullptr;
    if (m == nullptr) throw Error(Errc::BadGramLength, std::to_string(n));
    if (!*m) throw Error(Errc::ModelMissing, std::to_string(n) + "-gram model");
    return **m;
}

CorpusModels train_corpus_models(const CorpusTrainingInputs& in) {
    if (in.benign == nullptr || in.benign->slds.empty()) {
        throw Error(Errc::EmptyCorpus, "benign corpus is empty");
    }
    CorpusModels m;
    m.ngram3 = train_ngram_model(in.benign->slds, 3);
    m.ngram4 = train_ngram_model(in.benign->slds, 4);
    m.ngram5 = train_ngram_model(in.benign->slds, 5);
    m.words = WordModel::from_ranked_words(in.ranked_words);
    m.markov = markov_train(in.gibberish_text, in.gibberish_good, in.gibberish_bad);
    return m;
}

std::string ngram_to_json(const NGramModel& m) {
    json j;
    j["schema_version"] = kModelSchemaVersion;
    j["kind"] = "ngram";
    j["n"] = m.n();
    j["training_sld_count"] = m.training_sld_count();
    j["grams"] = m.sorted_grams();
    return j.dump();
}

NGramModel ngram_from_json(std::string_view doc) {
    const json j = parse_document(doc, "ngram");
    return guarded("ngram", [&] {
        auto grams = j.at("grams").get<std::vector<std::string>>();
        return NGramModel(j.at("n").get<int>(), grams, j.at("training_sld_count").get<std::size_t>());
    });
}

std::string word_model_to_json(const WordModel& m) {
    json j;
    j["schema_version"] = kModelSchemaVersion;
    j["kind"] = "word";
    j["vocab_size"] = m.vocab_size();
    j["words"] = m.ranked_words();
    return j.dump();
}

WordModel word_model_from_json(std::string_view doc) {
    const json j = parse_document(doc, "word");
    return guarded("word", [&] {
        auto words = j.at("words").get<std::vector<std::string>>();
        auto model = WordModel::from_ranked_words(words);
        if (model.vocab_size() != j.at("vocab_size").get<std::size_t>()) {
            throw Error(Errc::CorruptDocument, "word model vocab_size does not match its word list");
        }
        return model;
    });
}

std::string markov_to_json(const MarkovGibberishModel& m) {
    constexpr int k = MarkovGibberishModel::kAlphabet;
    json rows = json::array();
    for (int a = 0; a < k; ++a) {
        json row = json::array();
        for (int b = 0; b < k; ++b) row.push_back(m.log_prob(a, b));
        rows.push_back(std::move(row));
    }
    json j;
    j["schema_version"] = kModelSchemaVersion;
    j["kind"] = "markov";
    j["alphabet"] = std::string(MarkovGibberishModel::kSymbols);
    j["log_prob"] = std::move(rows);
    j["threshold"] = m.threshold();
    return j.dump();
}

MarkovGibberishModel markov_from_json(std::string_view doc) {
    const json j = parse_document(doc, "markov");
    return guarded("markov", [&] {
        constexpr int k = MarkovGibberishModel::kAlphabet;
        if (j.at("alphabet").get<std::string>() != MarkovGibberishModel::kSymbols) {
            throw Error(Errc::CorruptDocument, "markov model alphabet differs");
        }
        const auto& rows = j.at("log_prob");
        if (!rows.is_array() || rows.size() != k) {
            throw Error(Errc::CorruptDocument, "markov log_prob must be 27x27");
        }
        std::array<double, k * k> table{};
        for (int a = 0; a < k; ++a) {
            const auto& row = rows.at(static_cast<std::size_t>(a));
            if (!row.is_array() || row.size() != k) {
                throw Error(Errc::CorruptDocument, "markov log_prob must be 27x27");
            }
            for (int b = 0; b < k; ++b) {
                table[static_cast<std::size_t>(a * k + b)] = row.at(static_cast<std::size_t>(b)).get<double>();
            }
        }
        return MarkovGibberishModel(table, j.at("threshold").get<double>());
    });
}

void save_corpus_models(const CorpusModels& models, const std::string& dir) {
    models.require_complete();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error(Errc::Io, "cannot create " + dir + ": " + ec.message());
    }
    const std::string docs[] = {ngram_to_json(*models.ngram3), ngram_to_json(*models.ngram4),
                                ngram_to_json(*models.ngram5), word_model_to_json(*models.words),
                                markov_to_json(*models.markov)};
    json manifest;
    manifest["schema_version"] = kModelSchemaVersion;
    manifest["kind"] = "manifest";
    json files = json::object();
    for (std::size_t i = 0; i < std::size(kModelFiles); ++i) {
        write_text_file((fs::path(dir) / kModelFiles[i]).string(), docs[i]);
        files[kModelFiles[i]] = sha256_hex(docs[i]);
    }
    manifest["files"] = std::move(files);
    write_text_file((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

CorpusModels load_corpus_models(const std::string& dir) {
    if (!fs::is_directory(dir)) {
        throw Error(Errc::ModelMissing, "model directory " + dir + " does not exist");
    }
    json manifest;
    const fs::path manifest_path = fs::path(dir) / "manifest.json";
    if (fs::exists(manifest_path)) {
        manifest = parse_document(read_text_file(manifest_path.string()), "manifest");
    }

    auto load = [&](const char* name) -> std::optional<std::string> {
        const fs::path p = fs::path(dir) / name;
        if (!fs::exists(p)) return std::nullopt;
        std::string doc = read_text_file(p.string());
        if (!manifest.is_null()) {
            const auto& files = manifest.at("files");
            if (files.contains(name) && files.at(name).get<std::string>() != sha256_hex(doc)) {
                throw Error(Errc::CorruptDocument, std::string(name) + " does not match its manifest hash");
            }
        }
        return doc;
    };

    CorpusModels m;
    if (auto d = load("ngram3.json")) m.ngram3 = ngram_from_json(*d);
    if (auto d = load("ngram4.json")) m.ngram4 = ngram_from_json(*d);
    if (auto d = load("ngram5.json")) m.ngram5 = ngram_from_json(*d);
    if (auto d = load("word.json")) m.words = word_model_from_json(*d);
    if (auto d = load("markov.json")) m.markov = markov_from_json(*d);
    return m;
}

}  // namespace dga
