#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "dga/domain.hpp"
#include "dga/gibberish.hpp"
#include "dga/ngram.hpp"
#include "dga/word_model.hpp"

namespace dga {

inline constexpr int kModelSchemaVersion = 1;

/// The trained artifacts the feature extractor reads. Any member may be
/// missing (e.g. after a partial load); require_complete() reports which.
struct CorpusModels {
    std::optional<NGramModel> ngram3;
    std::optional<NGramModel> ngram4;
    std::optional<NGramModel> ngram5;
    std::optional<WordModel> words;
    std::optional<MarkovGibberishModel> markov;

    /// Throws Error{ModelMissing} naming the first absent model.
    void require_complete() const;
    const NGramModel& ngram(int n) const;
};

struct CorpusTrainingInputs {
    const BenignCorpus* benign = nullptr;
    std::span<const std::string> ranked_words;
    std::string_view gibberish_text;
    std::span<const std::string> gibberish_good;
    std::span<const std::string> gibberish_bad;
};

CorpusModels train_corpus_models(const CorpusTrainingInputs& in);

// One JSON document per model, each carrying "schema_version".
std::string ngram_to_json(const NGramModel& m);
NGramModel ngram_from_json(std::string_view doc);
std::string word_model_to_json(const WordModel& m);
WordModel word_model_from_json(std::string_view doc);
std::string markov_to_json(const MarkovGibberishModel& m);
MarkovGibberishModel markov_from_json(std::string_view doc);

/// Writes ngram3.json, ngram4.json, ngram5.json, word.json, markov.json and
/// manifest.json (SHA-256 of each model file) into dir, creating it.
void save_corpus_models(const CorpusModels& models, const std::string& dir);

/// Loads whatever model files exist in dir. When a manifest is present each
/// listed file must match its hash (Error{CorruptDocument} otherwise).
CorpusModels load_corpus_models(const std::string& dir);

}  // namespace dga
