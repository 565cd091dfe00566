#include "dga/dga_synth.hpp"

#include <istream>
#include <ostream>
#include <unordered_set>

#include "dga/error.hpp"
#include "dga/rng.hpp"
#include "dga/text.hpp"

namespace dga {

namespace {

constexpr std::string_view kHexDigits = "0123456789abcdef";

bool valid_label_chars(std::string_view s) {
    for (char c : s) {
        if (!is_lower_letter(c) && !is_digit(c) && c != '-') return false;
    }
    return !s.empty();
}

// Saturates at 2^62.
std::uint64_t power_capped(std::uint64_t base, int exp) {
    constexpr std::uint64_t cap = 1ULL << 62;
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && r > cap / base) return cap;
        r *= base;
    }
    return r;
}

std::uint64_t capacity(const DgaSpec& spec) {
    constexpr std::uint64_t cap = 1ULL << 62;
    if (spec.archetype == Archetype::Wordlist) {
        return power_capped(spec.wordlist.size(), spec.words_per_domain);
    }
    const std::uint64_t base = spec.archetype == Archetype::Hex ? kHexDigits.size() : spec.charset.size();
    std::uint64_t total = 0;
    for (int len = spec.length.min; len <= spec.length.max; ++len) {
        total += power_capped(base, len);
        if (total >= cap) return cap;
    }
    return total;
}

std::string draw(const DgaSpec& spec, SplitMix64& rng) {
    std::string out;
    if (spec.archetype == Archetype::Wordlist) {
        for (int i = 0; i < spec.words_per_domain; ++i) {
            out += spec.wordlist[rng.uniform_below(spec.wordlist.size())];
        }
        return out;
    }
    const std::string_view alphabet = spec.archetype == Archetype::Hex ? kHexDigits : std::string_view(spec.charset);
    const auto span = static_cast<std::uint64_t>(spec.length.max - spec.length.min + 1);
    const int len = spec.length.min + static_cast<int>(rng.uniform_below(span));
    out.reserve(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) out += alphabet[rng.uniform_below(alphabet.size())];
    return out;
}

}  // namespace

void DgaSpec::validate() const {
    auto bad = [](const std::string& m) { throw Error(Errc::InvalidSpec, m); };
    if (count < 1) bad("count must be >= 1");
    if (!tld.empty() && !valid_label_chars(tld)) bad("tld must be a lowercase label");
    switch (archetype) {
        case Archetype::Hex:
            if (length.min < 4) bad("hex length must be >= 4");
            if (length.max < length.min) bad("length range is empty");
            break;
        case Archetype::RandomChar:
            if (charset.empty()) bad("charset must not be empty");
            if (!valid_label_chars(charset)) bad("charset may only hold a-z, 0-9 and '-'");
            if (length.min < 1) bad("length must be >= 1");
            if (length.max < length.min) bad("length range is empty");
            break;
        case Archetype::Wordlist:
            if (wordlist.size() < 2) bad("wordlist needs at least two words");
            if (words_per_domain < 1) bad("words_per_domain must be >= 1");
            for (const auto& w : wordlist) {
                if (!valid_label_chars(w)) bad("wordlist entry '" + w + "' is not a lowercase word");
            }
            break;
    }
    if (unique && capacity(*this) < count) bad("archetype cannot produce " + std::to_string(count) + " distinct SLDs");
}

std::vector<std::string> generate(const DgaSpec& spec) {
    spec.validate();
    SplitMix64 rng(spec.seed);
    std::vector<std::string> out;
    out.reserve(spec.count);
    if (!spec.unique) {
        for (std::size_t i = 0; i < spec.count; ++i) out.push_back(draw(spec, rng));
        return out;
    }
    std::unordered_set<std::string> seen;
    const std::size_t max_draws = spec.count * 100 + 10000;
    for (std::size_t draws = 0; out.size() < spec.count; ++draws) {
        if (draws == max_draws) {
            throw Error(Errc::InvalidSpec, "gave up after " + std::to_string(draws) + " draws with " +
                                               std::to_string(out.size()) + " distinct SLDs");
        }
        auto s = draw(spec, rng);
        if (seen.insert(s).second) out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::string> with_tld(std::span<const std::string> slds, std::string_view tld) {
    std::vector<std::string> out;
    out.reserve(slds.size());
    for (const auto& s : slds) out.push_back(tld.empty() ? s : s + "." + std::string(tld));
    return out;
}

std::vector<std::string> archetype_names() { return {"hex8", "rand12", "rand12c", "dict2"}; }

DgaSpec archetype_spec(std::string_view name, std::uint64_t seed, std::size_t count,
                       std::span<const std::string> dictionary) {
    DgaSpec spec;
    spec.seed = seed;
    spec.count = count;
    if (name == "hex8") {
        spec.archetype = Archetype::Hex;
        spec.length = {8, 8};
    } else if (name == "rand12") {
        spec.archetype = Archetype::RandomChar;
        spec.charset = "abcdefghijklmnopqrstuvwxyz";
        spec.length = {12, 12};
    } else if (name == "rand12c") {
        spec.archetype = Archetype::RandomChar;
        spec.charset = "bcdfghjklmnpqrstvwxyz";
        spec.length = {12, 12};
    } else if (name == "dict2") {
        if (dictionary.empty()) throw Error(Errc::InvalidSpec, "dict2 needs a dictionary");
        spec.archetype = Archetype::Wordlist;
        spec.wordlist.assign(dictionary.begin(), dictionary.end());
        spec.words_per_domain = 2;
    } else {
        throw Error(Errc::InvalidSpec, "unknown archetype '" + std::string(name) + "'");
    }
    return spec;
}

LabeledDataset label_dataset(const BenignCorpus& benign, std::span<const MaliciousFamily> malicious) {
    if (benign.slds.empty()) throw Error(Errc::EmptyClass, "no benign SLDs");
    std::size_t malicious_total = 0;
    for (const auto& f : malicious) malicious_total += f.slds.size();
    if (malicious_total == 0) throw Error(Errc::EmptyClass, "no malicious SLDs");

    LabeledDataset out;
    std::unordered_set<std::string> benign_set;
    for (const auto& s : benign.slds) {
        if (!benign_set.insert(s).second) continue;
        out.records.push_back({s, std::string(kBenignLabel), std::string(kBenignLabel)});
    }
    std::unordered_set<std::string> malicious_set;
    for (const auto& f : malicious) {
        for (const auto& s : f.slds) {
            if (benign_set.contains(s)) {
                ++out.dropped_overlap;
            } else if (!malicious_set.insert(s).second) {
                ++out.dropped_duplicate;
            } else {
                out.records.push_back({s, std::string(kMaliciousLabel), f.family});
            }
        }
    }
    if (out.records.size() == benign_set.size()) throw Error(Errc::EmptyClass, "every AGD overlapped a benign SLD");
    return out;
}

void write_labeled_csv(std::ostream& out, std::span<const LabeledRecord> records) {
    out << "sld,label,family\n";
    for (const auto& r : records) out << r.sld << ',' << r.label << ',' << r.family << '\n';
}

std::vector<LabeledRecord> read_labeled_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "sld,label,family") {
        throw Error(Errc::CorruptDocument, "labeled CSV must start with 'sld,label,family'");
    }
    std::vector<LabeledRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto a = t.find(',');
        const auto b = a == std::string_view::npos ? a : t.find(',', a + 1);
        if (b == std::string_view::npos || t.find(',', b + 1) != std::string_view::npos) {
            throw Error(Errc::CorruptDocument, "line " + std::to_string(lineno) + ": expected 3 fields");
        }
        LabeledRecord r{std::string(t.substr(0, a)), std::string(t.substr(a + 1, b - a - 1)),
                        std::string(t.substr(b + 1))};
        if (r.label != kBenignLabel && r.label != kMaliciousLabel) {
            throw Error(Errc::CorruptDocument, "line " + std::to_string(lineno) + ": unknown label '" + r.label + "'");
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace dga
