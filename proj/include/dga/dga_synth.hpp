#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dga/domain.hpp"

namespace dga {

enum class Archetype { Hex, RandomChar, Wordlist };

struct LengthRange {
    int min = 8;
    int max = 8;
};

struct DgaSpec {
    Archetype archetype = Archetype::Hex;
    std::uint64_t seed = 0;
    std::size_t count = 1;
    LengthRange length;                // Hex and RandomChar
    std::string charset;               // RandomChar
    std::vector<std::string> wordlist; // Wordlist
    int words_per_domain = 2;          // Wordlist
    std::string tld = "com";
    // Redraw repeats so the output holds `count` distinct SLDs.
    bool unique = true;

    /// Throws Error{InvalidSpec}.
    void validate() const;
};

/// Exactly spec.count SLDs from a SplitMix64 stream seeded with spec.seed.
/// Throws Error{InvalidSpec}, also when `unique` is set and the archetype
/// cannot produce that many distinct strings.
std::vector<std::string> generate(const DgaSpec& spec);

/// "sld.tld" lines for emission.
std::vector<std::string> with_tld(std::span<const std::string> slds, std::string_view tld);

/// Named presets: hex8, rand12 (a-z, 12 chars), rand12c (consonants only,
/// 12 chars), dict2 (two words from `dictionary`). Throws Error{InvalidSpec}
/// for other names or a dict2 request without a dictionary.
DgaSpec archetype_spec(std::string_view name, std::uint64_t seed, std::size_t count,
                       std::span<const std::string> dictionary = {});
std::vector<std::string> archetype_names();

inline constexpr std::string_view kBenignLabel = "benign";
inline constexpr std::string_view kMaliciousLabel = "malicious";

struct LabeledRecord {
    std::string sld;
    std::string label;   // benign or malicious
    std::string family;  // "benign" for benign records
};

struct MaliciousFamily {
    std::string family;
    std::vector<std::string> slds;
};

struct LabeledDataset {
    std::vector<LabeledRecord> records;
    std::size_t dropped_overlap = 0;    // AGDs equal to a benign SLD
    std::size_t dropped_duplicate = 0;  // repeats within the malicious side
};

/// Benign records first, then each family in order. Throws Error{EmptyClass}.
LabeledDataset label_dataset(const BenignCorpus& benign, std::span<const MaliciousFamily> malicious);

void write_labeled_csv(std::ostream& out, std::span<const LabeledRecord> records);
/// Throws Error{CorruptDocument}.
std::vector<LabeledRecord> read_labeled_csv(std::istream& in);

}  // namespace dga
