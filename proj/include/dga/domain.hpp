#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace dga {

/// A parsed domain. All features operate on `sld`.
struct DomainRecord {
    std::string raw;           // trimmed, lowercased, without the root dot
    std::string sld;
    std::size_t label_count = 0;
    std::size_t dot_count = 0;
    bool is_idn = false;       // some label starts with "xn--"
};

enum class Violation {
    LeadingHyphen,
    TrailingHyphen,
    IdnHyphen34,
    BadChar,
    LabelTooLong,
    EmptyLabel,
};

const char* to_string(Violation v) noexcept;

struct ValidityVerdict {
    bool valid = true;
    std::vector<Violation> violations;  // unique, in enum order
};

struct BenignCorpus {
    std::vector<std::string> slds;  // unique, in order of first occurrence
    std::size_t source_count = 0;
    std::size_t dropped_idn = 0;
    std::size_t dropped_duplicate = 0;
    std::size_t dropped_invalid = 0;
};

/// Second-level labels ("co", "com", ...) that are stripped along with a
/// 2-letter country-code TLD, so that "google.co.in" yields "google".
class SuffixSet {
public:
    SuffixSet() = default;
    explicit SuffixSet(std::vector<std::string> labels);

    static const SuffixSet& builtin();
    /// One label per line; blank lines and '#' comments are ignored.
    static SuffixSet load(const std::string& path);

    bool contains(std::string_view label) const;
    std::size_t size() const { return labels_.size(); }

private:
    std::unordered_set<std::string> labels_;
};

/// Throws Error{EmptyInput | NonAscii | NotHostname}.
DomainRecord parse_domain(std::string_view raw, const SuffixSet& suffixes = SuffixSet::builtin());

ValidityVerdict validate_rfc(std::string_view raw);

/// Throws Error{EmptyCorpus} when nothing survives.
BenignCorpus ingest_benign_corpus(std::span<const std::string> lines,
                                  const SuffixSet& suffixes = SuffixSet::builtin());

/// Reads newline-delimited domains, skipping blank lines and '#' comments.
std::vector<std::string> read_domain_lines(const std::string& path);

/// Writes one SLD per line.
void write_corpus(const BenignCorpus& corpus, const std::string& path);

}  // namespace dga
