#include "dga/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "dga/error.hpp"
#include "dga/text.hpp"

namespace dga {

namespace {

std::string join(std::span<const std::string> words, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) out += sep;
        out += words[i];
    }
    return out;
}

std::string concat_min_len(std::span<const std::string> words, std::size_t min_len) {
    std::string out;
    for (const auto& w : words) {
        if (w.size() >= min_len) out += w;
    }
    return out;
}

// Segments each maximal run of letters separately; anything else is a
// separator and never part of a word.
std::vector<std::string> split_letter_runs(std::string_view s, const WordModel& words) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!is_lower_letter(s[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && is_lower_letter(s[j])) ++j;
        for (auto& w : segment(s.substr(i, j - i), words)) out.push_back(std::move(w));
        i = j;
    }
    return out;
}

std::size_t count_letters(std::string_view s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), is_lower_letter));
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace

double shannon_entropy(std::string_view s) {
    if (s.empty()) return 0.0;
    std::array<std::size_t, 256> counts{};
    for (char c : s) ++counts[static_cast<unsigned char>(c)];
    const double n = static_cast<double>(s.size());
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    // a single repeated symbol would otherwise give -0.0
    return h > 0.0 ? h : 0.0;
}

int max_consecutive_run(std::string_view s, CharClass cls) {
    int best = 0;
    int run = 0;
    for (char c : s) {
        const bool hit = cls == CharClass::Vowel ? is_vowel(c) : is_consonant(c);
        run = hit ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best;
}

bool is_hex(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return is_digit(c) || (c >= 'a' && c <= 'f');
    });
}

double gram_ratio(std::span<const std::string> grams, const NGramModel& model) {
    if (grams.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& g : grams) {
        if (model.contains(g)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(grams.size());
}

double vowel_gram_ratio(std::span<const std::string> grams) {
    if (grams.empty()) return 0.0;
    const auto with_vowel = std::count_if(grams.begin(), grams.end(), [](const std::string& g) {
        return std::any_of(g.begin(), g.end(), is_vowel);
    });
    return static_cast<double>(with_vowel) / static_cast<double>(grams.size());
}

DerivedStrings derive_strings(const DomainRecord& record, const WordModel& words) {
    DerivedStrings d;
    d.dom = record.sld;
    d.dom_d.reserve(d.dom.size());
    for (char c : d.dom) {
        if (!is_digit(c)) d.dom_d.push_back(c);
    }
    d.grams3 = ngrams(d.dom, 3);
    d.grams4 = ngrams(d.dom, 4);
    d.grams5 = ngrams(d.dom, 5);
    d.words = split_letter_runs(d.dom, words);
    d.words_d = split_letter_runs(d.dom_d, words);
    d.dom_w = join(d.words, "");
    d.dom_ws = join(d.words, " ");
    d.dom_wd = join(d.words_d, "");
    d.dom_wds = join(d.words_d, " ");
    d.dom_w2 = concat_min_len(d.words, 3);
    d.dom_w3 = concat_min_len(d.words, 4);
    return d;
}

FeatureVector extract_features(const DomainRecord& record, const CorpusModels& models,
                               const FeatureConfig& config) {
    models.require_complete();
    const WordModel& words = *models.words;
    const MarkovGibberishModel& markov = *models.markov;
    const DerivedStrings d = derive_strings(record, words);

    FeatureVector v;
    v.sld = record.sld;
    const double len = static_cast<double>(d.dom.size());
    const auto digits = static_cast<double>(std::count_if(d.dom.begin(), d.dom.end(), is_digit));
    const auto vowels = static_cast<double>(std::count_if(d.dom.begin(), d.dom.end(), is_vowel));
    const auto consonants = static_cast<double>(std::count_if(d.dom.begin(), d.dom.end(), is_consonant));

    v[Feature::LHex] = is_hex(d.dom) ? 1.0 : 0.0;
    v[Feature::LLen] = len;
    v[Feature::LDig] = digits;
    v[Feature::LDot] = config.enable_dot ? static_cast<double>(record.dot_count) : 0.0;
    v[Feature::LConMax] = max_consecutive_run(d.dom, CharClass::Consonant);
    v[Feature::LVowMax] = max_consecutive_run(d.dom, CharClass::Vowel);
    v[Feature::LW2] = static_cast<double>(std::count_if(d.words.begin(), d.words.end(),
                                                        [](const std::string& w) { return w.size() >= 3; }));
    v[Feature::LW3] = static_cast<double>(std::count_if(d.words.begin(), d.words.end(),
                                                        [](const std::string& w) { return w.size() >= 4; }));

    // consonants per vowel, capped at the length, then scaled into [0,1]
    v[Feature::RConVow] = safe_ratio(std::min(consonants / std::max(1.0, vowels), len), len);
    v[Feature::RDom3G] = gram_ratio(d.grams3, models.ngram(3));
    v[Feature::RDom4G] = gram_ratio(d.grams4, models.ngram(4));
    v[Feature::RDom5G] = gram_ratio(d.grams5, models.ngram(5));
    v[Feature::RVow3G] = vowel_gram_ratio(d.grams3);
    v[Feature::RVow4G] = vowel_gram_ratio(d.grams4);
    v[Feature::RVow5G] = vowel_gram_ratio(d.grams5);

    // string operands count their letters; spaces are not characters of the domain
    const double dom_d_len = static_cast<double>(d.dom_d.size());
    v[Feature::RWsLen] = safe_ratio(static_cast<double>(count_letters(d.dom_ws)), len);
    v[Feature::RWdLen] = safe_ratio(static_cast<double>(count_letters(d.dom_wd)), len);
    v[Feature::RWdsLen] = safe_ratio(static_cast<double>(count_letters(d.dom_wds)), len);
    v[Feature::RW2Len] = safe_ratio(static_cast<double>(d.dom_w2.size()), len);
    v[Feature::RW2LenD] = safe_ratio(static_cast<double>(d.dom_w2.size()), dom_d_len);
    v[Feature::RW3Len] = safe_ratio(static_cast<double>(d.dom_w3.size()), len);
    v[Feature::RW3LenD] = safe_ratio(static_cast<double>(d.dom_w3.size()), dom_d_len);

    const std::string_view targets[6] = {d.dom, d.dom_ws, d.dom_d, d.dom_wds, d.dom_w2, d.dom_w3};
    for (std::size_t i = 0; i < 6; ++i) {
        v.values[index_of(Feature::Gib1Dom) + i] = markov.score(targets[i]);
        v.values[index_of(Feature::Gib2Dom) + i] =
            heuristic_gibberish_score(targets[i], words, config.heuristic);
        v.values[index_of(Feature::EDom) + i] = shannon_entropy(targets[i]);
    }
    return v;
}

std::string feature_csv_header() {
    std::string h;
    for (auto name : kFeatureNames) {
        h += name;
        h += ',';
    }
    h += "sld,label,family";
    return h;
}

void write_feature_csv_header(std::ostream& out) { out << feature_csv_header() << '\n'; }

void write_feature_csv_row(std::ostream& out, const FeatureVector& v) {
    std::string line;
    for (double x : v.values) {
        line += format_value(x);
        line += ',';
    }
    line += csv_field(v.sld);
    line += ',';
    line += csv_field(v.label.value_or(""));
    line += ',';
    line += csv_field(v.family.value_or(""));
    line += '\n';
    out << line;
}

std::vector<FeatureVector> read_feature_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(Errc::CorruptDocument, "feature CSV is empty");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != feature_csv_header()) {
        throw Error(Errc::CorruptDocument, "feature CSV header differs from the canonical order");
    }
    std::vector<FeatureVector> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != kFeatureCount + 3) {
            throw Error(Errc::CorruptDocument, "feature CSV line " + std::to_string(line_no) +
                                                   " has " + std::to_string(fields.size()) + " fields");
        }
        FeatureVector v;
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            char* end = nullptr;
            v.values[i] = std::strtod(fields[i].c_str(), &end);
            if (fields[i].empty() || end != fields[i].c_str() + fields[i].size() || std::isnan(v.values[i])) {
                throw Error(Errc::CorruptDocument, "bad number '" + fields[i] + "' on line " +
                                                       std::to_string(line_no));
            }
        }
        v.sld = fields[kFeatureCount];
        if (!fields[kFeatureCount + 1].empty()) v.label = fields[kFeatureCount + 1];
        if (!fields[kFeatureCount + 2].empty()) v.family = fields[kFeatureCount + 2];
        rows.push_back(std::move(v));
    }
    return rows;
}

}  // namespace dga
