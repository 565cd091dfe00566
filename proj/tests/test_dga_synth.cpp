#include <doctest.h>

#include <set>
#include <sstream>

#include "dga/dga_synth.hpp"
#include "dga/error.hpp"
#include "dga/features.hpp"
#include "dga/word_model.hpp"
#include "support.hpp"

using namespace dga;

namespace {

Errc error_code(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Io;
}

BenignCorpus corpus_of(std::vector<std::string> slds) {
    BenignCorpus c;
    c.source_count = slds.size();
    c.slds = std::move(slds);
    return c;
}

}  // namespace

TEST_CASE("hex output") {
    DgaSpec spec;
    spec.archetype = Archetype::Hex;
    spec.seed = 1;
    spec.count = 3;
    spec.length = {8, 8};
    const auto out = generate(spec);
    REQUIRE(out.size() == 3);
    for (const auto& s : out) {
        CHECK(s.size() == 8);
        CHECK(is_hex(s));
    }
    CHECK(generate(spec) == out);
    spec.seed = 2;
    CHECK(generate(spec) != out);
}

TEST_CASE("wordlist output is a closure of concatenations") {
    DgaSpec spec;
    spec.archetype = Archetype::Wordlist;
    spec.seed = 7;
    spec.count = 4;
    spec.wordlist = {"alpha", "beta"};
    const std::set<std::string> allowed{"alphaalpha", "alphabeta", "betaalpha", "betabeta"};
    const auto out = generate(spec);
    CHECK(out.size() == 4);
    for (const auto& s : out) CHECK(allowed.contains(s));
    spec.count = 5;
    CHECK(error_code([&] { generate(spec); }) == Errc::InvalidSpec);
    spec.unique = false;
    CHECK(generate(spec).size() == 5);
}

TEST_CASE("random-char output stays in its charset and length range") {
    DgaSpec spec;
    spec.archetype = Archetype::RandomChar;
    spec.seed = 3;
    spec.count = 400;
    spec.length = {6, 14};
    spec.charset = "xyz019";
    std::set<std::size_t> lengths;
    for (const auto& s : generate(spec)) {
        CHECK(s.size() >= 6);
        CHECK(s.size() <= 14);
        CHECK(s.find_first_not_of("xyz019") == std::string::npos);
        lengths.insert(s.size());
    }
    CHECK(lengths.size() == 9);
}

TEST_CASE("spec validation") {
    DgaSpec spec;
    spec.count = 0;
    CHECK(error_code([&] { spec.validate(); }) == Errc::InvalidSpec);
    spec.count = 1;
    spec.length = {3, 3};
    CHECK(error_code([&] { spec.validate(); }) == Errc::InvalidSpec);
    spec.archetype = Archetype::RandomChar;
    spec.length = {5, 5};
    CHECK(error_code([&] { spec.validate(); }) == Errc::InvalidSpec);
    spec.charset = "ab";
    spec.length = {6, 5};
    CHECK(error_code([&] { spec.validate(); }) == Errc::InvalidSpec);
    spec.archetype = Archetype::Wordlist;
    spec.wordlist = {"solo"};
    CHECK(error_code([&] { spec.validate(); }) == Errc::InvalidSpec);
    CHECK(error_code([&] { archetype_spec("nope", 1, 1); }) == Errc::InvalidSpec);
    CHECK(error_code([&] { archetype_spec("dict2", 1, 1); }) == Errc::InvalidSpec);
}

TEST_CASE("named archetypes") {
    const auto dict = support::nonempty_lines(support::data_path("dict500.txt"));
    CHECK(dict.size() == 500);
    for (const auto& name : archetype_names()) {
        const auto out = generate(archetype_spec(name, 11, 300, dict));
        CHECK(out.size() == 300);
        CHECK(std::set<std::string>(out.begin(), out.end()).size() == 300);
    }
    for (const auto& s : generate(archetype_spec("rand12c", 1, 100))) {
        CHECK(s.size() == 12);
        CHECK(s.find_first_of("aeiou") == std::string::npos);
    }
    CHECK(with_tld(std::vector<std::string>{"abc"}, "net") == std::vector<std::string>{"abc.net"});
}

TEST_CASE("two-word names segment back into two words") {
    // a vocabulary where no word is a concatenation of others
    const std::vector<std::string> vocab{"river", "stone", "cloud", "maple", "tiger", "lemon", "quartz", "violet"};
    auto ranked = support::shipped_models().words->ranked_words();
    std::vector<std::string> merged(vocab);
    merged.insert(merged.end(), ranked.begin(), ranked.end());
    const auto model = WordModel::from_ranked_words(merged);
    DgaSpec spec;
    spec.archetype = Archetype::Wordlist;
    spec.seed = 5;
    spec.count = 64;
    spec.wordlist = vocab;
    for (const auto& s : generate(spec)) CHECK(segment(s, model).size() == 2);
}

TEST_CASE("label_dataset") {
    const auto benign = corpus_of({"b0", "b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8", "b9"});
    DgaSpec spec;
    spec.count = 10;
    std::vector<MaliciousFamily> fam{{"hex8", generate(spec)}};
    auto ds = label_dataset(benign, fam);
    CHECK(ds.records.size() == 20);
    std::set<std::string> labels;
    for (const auto& r : ds.records) labels.insert(r.label);
    CHECK(labels == std::set<std::string>{"benign", "malicious"});
    CHECK(ds.records.front().family == "benign");
    CHECK(ds.records.back().family == "hex8");

    std::vector<MaliciousFamily> overlap{{"x", {"b3", "zz", "zz"}}};
    ds = label_dataset(benign, overlap);
    CHECK(ds.dropped_overlap == 1);
    CHECK(ds.dropped_duplicate == 1);
    CHECK(ds.records.size() == 11);

    std::vector<MaliciousFamily> only_overlap{{"x", {"b3"}}};
    CHECK(error_code([&] { label_dataset(benign, only_overlap); }) == Errc::EmptyClass);
    CHECK(error_code([&] { label_dataset(corpus_of({}), fam); }) == Errc::EmptyClass);
}

TEST_CASE("labeled CSV round-trip keeps family tags") {
    const auto benign = corpus_of({"google", "wikipedia"});
    std::vector<MaliciousFamily> fam{{"hex8", {"deadbeef"}}, {"dict2", {"rivermaple"}}};
    const auto ds = label_dataset(benign, fam);
    std::stringstream ss;
    write_labeled_csv(ss, ds.records);
    CHECK(ss.str().starts_with("sld,label,family\n"));
    const auto back = read_labeled_csv(ss);
    REQUIRE(back.size() == ds.records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].sld == ds.records[i].sld);
        CHECK(back[i].label == ds.records[i].label);
        CHECK(back[i].family == ds.records[i].family);
    }
    std::stringstream bad("sld,label\nx,y\n");
    CHECK(error_code([&] { read_labeled_csv(bad); }) == Errc::CorruptDocument);
}
