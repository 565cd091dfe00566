#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dga/corpus_models.hpp"
#include "dga/domain.hpp"
#include "dga/gibberish.hpp"

namespace dga {

inline constexpr std::size_t kFeatureCount = 40;

/// Canonical feature order. Every producer and consumer of feature vectors
/// (CSV, models, importances) indexes through this table.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "L-HEX",         "L-LEN",         "L-DIG",          "L-DOT",          "L-CON-MAX",
    "L-VOW-MAX",     "L-W2",          "L-W3",           "R-CON-VOW",      "R-Dom-3G",
    "R-Dom-4G",      "R-Dom-5G",      "R-VOW-3G",       "R-VOW-4G",       "R-VOW-5G",
    "R-WS-LEN",      "R-WD-LEN",      "R-WDS-LEN",      "R-W2-LEN",       "R-W2-LEN-D",
    "R-W3-LEN",      "R-W3-LEN-D",    "GIB-1-Dom",      "GIB-1-Dom-WS",   "GIB-1-Dom-D",
    "GIB-1-Dom-WDS", "GIB-1-Dom-W2",  "GIB-1-Dom-W3",   "GIB-2-Dom",      "GIB-2-Dom-WS",
    "GIB-2-Dom-D",   "GIB-2-Dom-WDS", "GIB-2-Dom-W2",   "GIB-2-Dom-W3",   "E-Dom",
    "E-Dom-WS",      "E-Dom-D",       "E-Dom-WDS",      "E-Dom-W2",       "E-Dom-W3",
};

enum class Feature : std::size_t {
    LHex, LLen, LDig, LDot, LConMax, LVowMax, LW2, LW3,
    RConVow, RDom3G, RDom4G, RDom5G, RVow3G, RVow4G, RVow5G,
    RWsLen, RWdLen, RWdsLen, RW2Len, RW2LenD, RW3Len, RW3LenD,
    Gib1Dom, Gib1DomWs, Gib1DomD, Gib1DomWds, Gib1DomW2, Gib1DomW3,
    Gib2Dom, Gib2DomWs, Gib2DomD, Gib2DomWds, Gib2DomW2, Gib2DomW3,
    EDom, EDomWs, EDomD, EDomWds, EDomW2, EDomW3,
};

constexpr std::size_t index_of(Feature f) { return static_cast<std::size_t>(f); }

/// The intermediate strings every feature is computed from.
struct DerivedStrings {
    std::string dom;    // SLD
    std::string dom_d;  // dom without digits
    std::vector<std::string> grams3, grams4, grams5;
    std::vector<std::string> words;    // split of dom; digits and hyphens separate runs
    std::vector<std::string> words_d;  // split of dom_d
    std::string dom_w, dom_ws;
    std::string dom_wd, dom_wds;
    std::string dom_w2;  // words of dom with length > 2
    std::string dom_w3;  // words of dom with length > 3
};

struct FeatureConfig {
    bool enable_dot = true;  // L-DOT is forced to 0 when false
    HeuristicBands heuristic;
};

struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    std::string sld;
    std::optional<std::string> label;
    std::optional<std::string> family;

    double operator[](Feature f) const { return values[index_of(f)]; }
    double& operator[](Feature f) { return values[index_of(f)]; }
};

enum class CharClass { Consonant, Vowel };

double shannon_entropy(std::string_view s);
int max_consecutive_run(std::string_view s, CharClass cls);
bool is_hex(std::string_view s);
double gram_ratio(std::span<const std::string> grams, const NGramModel& model);
double vowel_gram_ratio(std::span<const std::string> grams);

DerivedStrings derive_strings(const DomainRecord& record, const WordModel& words);

/// Throws Error{ModelMissing} when models are incomplete.
FeatureVector extract_features(const DomainRecord& record, const CorpusModels& models,
                               const FeatureConfig& config = {});

// CSV: canonical feature columns, then sld,label,family. Values use 6 decimals.
std::string feature_csv_header();
void write_feature_csv_header(std::ostream& out);
void write_feature_csv_row(std::ostream& out, const FeatureVector& v);
/// Throws Error{CorruptDocument} when the header differs from the canonical
/// one or a row is malformed.
std::vector<FeatureVector> read_feature_csv(std::istream& in);

}  // namespace dga
