#include "dga/domain.hpp"

#include <algorithm>
#include <fstream>

#include "dga/error.hpp"
#include "dga/text.hpp"

namespace dga {

namespace {

constexpr std::size_t kMaxLabelLength = 63;

std::vector<std::string_view> split_labels(std::string_view s) {
    std::vector<std::string_view> labels;
    std::size_t start = 0;
    while (true) {
        const auto dot = s.find('.', start);
        if (dot == std::string_view::npos) {
            labels.push_back(s.substr(start));
            break;
        }
        labels.push_back(s.substr(start, dot - start));
        start = dot + 1;
    }
    return labels;
}

// Trimmed, lowercased, root dot removed.
std::string normalize(std::string_view raw) {
    std::string s = to_lower_ascii(trim(raw));
    if (!s.empty() && s.back() == '.') {
        s.pop_back();
    }
    return s;
}

bool is_ldh(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

}  // namespace

const char* to_string(Violation v) noexcept {
    switch (v) {
        case Violation::LeadingHyphen: return "LEADING_HYPHEN";
        case Violation::TrailingHyphen: return "TRAILING_HYPHEN";
        case Violation::IdnHyphen34: return "IDN_HYPHEN_34";
        case Violation::BadChar: return "BAD_CHAR";
        case Violation::LabelTooLong: return "LABEL_TOO_LONG";
        case Violation::EmptyLabel: return "EMPTY_LABEL";
    }
    return "UNKNOWN";
}

SuffixSet::SuffixSet(std::vector<std::string> labels) {
    for (auto& l : labels) {
        labels_.insert(to_lower_ascii(l));
    }
}

const SuffixSet& SuffixSet::builtin() {
    static const SuffixSet set({"ac", "co", "com", "edu", "gov", "net", "org"});
    return set;
}

SuffixSet SuffixSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::Io, "cannot open suffix file " + path);
    }
    std::vector<std::string> labels;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        labels.emplace_back(t);
    }
    return SuffixSet(std::move(labels));
}

bool SuffixSet::contains(std::string_view label) const {
    return labels_.contains(std::string(label));
}

DomainRecord parse_domain(std::string_view raw, const SuffixSet& suffixes) {
    if (trim(raw).empty()) {
        throw Error(Errc::EmptyInput, "blank domain");
    }
    std::string s = normalize(raw);
    if (s.empty()) {
        throw Error(Errc::EmptyInput, "domain is only a root dot");
    }
    if (s.find_first_of("/:") != std::string::npos) {
        throw Error(Errc::NotHostname, "not a hostname: " + s);
    }

    const auto labels = split_labels(s);
    DomainRecord rec;
    rec.label_count = labels.size();
    rec.dot_count = static_cast<std::size_t>(std::count(s.begin(), s.end(), '.'));
    for (auto label : labels) {
        const bool idn = label.starts_with("xn--");
        rec.is_idn = rec.is_idn || idn;
        if (!idn && std::any_of(label.begin(), label.end(),
                                [](char c) { return static_cast<unsigned char>(c) >= 0x80; })) {
            throw Error(Errc::NonAscii, "non-ASCII label in " + s);
        }
    }

    const std::size_t n = labels.size();
    std::string_view sld;
    if (n == 1) {
        sld = labels[0];
    } else if (n >= 3 && labels[n - 1].size() == 2 && suffixes.contains(labels[n - 2])) {
        sld = labels[n - 3];
    } else {
        sld = labels[n - 2];
    }
    if (sld.empty()) {
        throw Error(Errc::EmptyInput, "empty second-level label in " + s);
    }
    rec.sld = std::string(sld);
    rec.raw = std::move(s);
    return rec;
}

ValidityVerdict validate_rfc(std::string_view raw) {
    const std::string s = normalize(raw);
    bool seen[6] = {};
    for (auto label : split_labels(s)) {
        if (label.empty()) {
            seen[static_cast<int>(Violation::EmptyLabel)] = true;
            continue;
        }
        if (label.size() > kMaxLabelLength) seen[static_cast<int>(Violation::LabelTooLong)] = true;
        if (label.front() == '-') seen[static_cast<int>(Violation::LeadingHyphen)] = true;
        if (label.back() == '-') seen[static_cast<int>(Violation::TrailingHyphen)] = true;
        if (label.size() >= 4 && label[2] == '-' && label[3] == '-' && !label.starts_with("xn")) {
            seen[static_cast<int>(Violation::IdnHyphen34)] = true;
        }
        if (!std::all_of(label.begin(), label.end(), is_ldh)) {
            seen[static_cast<int>(Violation::BadChar)] = true;
        }
    }
    ValidityVerdict verdict;
    for (int i = 0; i < 6; ++i) {
        if (seen[i]) verdict.violations.push_back(static_cast<Violation>(i));
    }
    verdict.valid = verdict.violations.empty();
    return verdict;
}

BenignCorpus ingest_benign_corpus(std::span<const std::string> lines, const SuffixSet& suffixes) {
    BenignCorpus corpus;
    std::unordered_set<std::string> seen;
    for (const auto& line : lines) {
        ++corpus.source_count;
        DomainRecord rec;
        try {
            rec = parse_domain(line, suffixes);
        } catch (const Error& e) {
            // raw Unicode names are internationalised names too
            if (e.code() == Errc::NonAscii) {
                ++corpus.dropped_idn;
            } else {
                ++corpus.dropped_invalid;
            }
            continue;
        }
        if (rec.is_idn) {
            ++corpus.dropped_idn;
            continue;
        }
        if (!seen.insert(rec.sld).second) {
            ++corpus.dropped_duplicate;
            continue;
        }
        corpus.slds.push_back(std::move(rec.sld));
    }
    if (corpus.slds.empty()) {
        throw Error(Errc::EmptyCorpus, "no SLD survived preprocessing");
    }
    return corpus;
}

std::vector<std::string> read_domain_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::Io, "cannot open " + path);
    }
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        out.emplace_back(t);
    }
    return out;
}

void write_corpus(const BenignCorpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(Errc::Io, "cannot write " + path);
    }
    for (const auto& s : corpus.slds) {
        out << s << '\n';
    }
}

}  // namespace dga
