#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dga/corpus_models.hpp"
#include "dga/domain.hpp"
#include "dga/io.hpp"
#include "dga/text.hpp"

namespace support {

inline std::string data_path(const std::string& name) { return std::string(DGA_DATA_DIR) + "/" + name; }
inline std::string fixture_path(const std::string& name) { return std::string(DGA_FIXTURE_DIR) + "/" + name; }

inline std::vector<std::string> nonempty_lines(const std::string& path) {
    std::vector<std::string> out;
    for (const auto& l : dga::read_lines(path)) {
        auto t = dga::trim(l);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

/// Models trained from the shipped data, built once per process.
inline const dga::CorpusModels& shipped_models() {
    static const dga::CorpusModels models = [] {
        const auto benign = dga::ingest_benign_corpus(dga::read_domain_lines(data_path("benign_model.txt")));
        const auto words = nonempty_lines(data_path("wordlist.txt"));
        const auto text = dga::read_text_file(data_path("gibberish_text.txt"));
        const auto good = nonempty_lines(data_path("gibberish_good.txt"));
        const auto bad = nonempty_lines(data_path("gibberish_bad.txt"));
        dga::CorpusTrainingInputs in;
        in.benign = &benign;
        in.ranked_words = words;
        in.gibberish_text = text;
        in.gibberish_good = good;
        in.gibberish_bad = bad;
        return dga::train_corpus_models(in);
    }();
    return models;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("dga_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace support
