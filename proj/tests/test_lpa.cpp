#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ideate/corpus.hpp"
#include "ideate/errors.hpp"
#include "ideate/lpa.hpp"

using namespace ideate;
using corpus::Idea;
using corpus::IdeaSource;

namespace {

std::vector<Idea> ideas_from(const std::vector<std::string>& texts, IdeaSource source,
                             const std::string& prefix) {
    std::vector<Idea> out;
    for (std::size_t i = 0; i < texts.size(); ++i)
        out.push_back({prefix + std::to_string(i), "t", source, texts[i], false});
    return out;
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path, std::ios::binary) << content;
    return path;
}

} // namespace

TEST_CASE("extractor drops stopwords and short tokens") {
    const lpa::TermExtractor extractor;
    CHECK(extractor.extract("The user holds a device") ==
          std::vector<std::string>{"user", "holds", "device"});
    CHECK(extractor.extract("") == std::vector<std::string>{});
    CHECK(extractor.extract("a I of") == std::vector<std::string>{});
    CHECK(extractor.extract("x y z") == std::vector<std::string>{}); // below min length
    CHECK(extractor.extract("Desk-mounted lamp, lamp!") ==
          std::vector<std::string>{"desk", "mounted", "lamp", "lamp"});
}

TEST_CASE("extractor options") {
    SUBCASE("case folding off") {
        lpa::TermExtractorConfig config;
        config.lowercase = false;
        CHECK(lpa::extract_terms("Desk desk", config) ==
              std::vector<std::string>{"Desk", "desk"});
    }
    SUBCASE("min token length") {
        lpa::TermExtractorConfig config;
        config.min_token_len = 5;
        CHECK(lpa::extract_terms("tiny gadget walks", config) ==
              std::vector<std::string>{"gadget", "walks"});
    }
    SUBCASE("custom stopword file replaces the builtin list") {
        const auto path = write_temp("ideate_stop_test.txt", "# comment\ndevice\n");
        lpa::TermExtractorConfig config;
        config.stopword_path = path.string();
        // "the" is no longer stopped, "device" now is
        CHECK(lpa::extract_terms("the device hums", config) ==
              std::vector<std::string>{"the", "hums"});
    }
    SUBCASE("keep lexicon whitelists terms") {
        const auto path = write_temp("ideate_keep_test.txt", "desk\nlamp\n");
        lpa::TermExtractorConfig config;
        config.keep_lexicon_path = path.string();
        CHECK(lpa::extract_terms("desk lamp gadget", config) ==
              std::vector<std::string>{"desk", "lamp"});
    }
    SUBCASE("missing term file raises") {
        lpa::TermExtractorConfig config;
        config.stopword_path = "/nonexistent/stopwords.txt";
        CHECK_THROWS_WITH_AS(lpa::TermExtractor{config}, doctest::Contains("BadLexiconFile"),
                             Error);
    }
}

TEST_CASE("extractor handles accented words") {
    const lpa::TermExtractor extractor;
    // non-ASCII letters stay inside tokens; ASCII-only lowercasing leaves them
    const auto terms = extractor.extract("Caf\xc3\xa9 seating nooks");
    REQUIRE(terms.size() == 3);
    CHECK(terms[0] == "caf\xc3\xa9");
}

TEST_CASE("frequency vectors normalize counts") {
    const auto ideas = ideas_from({"lamp lamp desk"}, IdeaSource::Human, "h");
    const lpa::TermExtractor extractor;
    const lpa::TermVector counts = lpa::build_term_vector("doc", ideas, extractor);
    CHECK(counts.total == 3);
    CHECK(counts.counts.at("lamp") == 2);
    const lpa::FreqVector freq = lpa::normalize(counts);
    CHECK(freq.freqs.at("lamp") == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(freq.freqs.at("desk") == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("a one-term document normalizes to unit mass") {
    const auto ideas = ideas_from({"lamp"}, IdeaSource::Human, "h");
    const lpa::FreqVector freq = lpa::build_freq_vector("doc", ideas, lpa::TermExtractor{});
    REQUIRE(freq.freqs.size() == 1);
    CHECK(freq.freqs.at("lamp") == 1.0);
}

TEST_CASE("signatures are deterministic") {
    const auto human = ideas_from({"alpha beta gamma", "alpha delta"}, IdeaSource::Human, "h");
    const auto machine = ideas_from({"omega psi", "omega chi"}, IdeaSource::Llm, "g");
    const lpa::TermExtractor extractor;
    const lpa::LpaSignature first = lpa::signature("doc", human, machine, extractor);
    const lpa::LpaSignature second = lpa::signature("doc", human, machine, extractor);
    CHECK(first.entries == second.entries);
    CHECK(lpa::signatures_to_csv(std::vector<lpa::LpaSignature>{first}) ==
          lpa::signatures_to_csv(std::vector<lpa::LpaSignature>{second}));
}

TEST_CASE("empty vocabulary is rejected") {
    const auto ideas = ideas_from({"of the and"}, IdeaSource::Human, "h");
    const lpa::TermExtractor extractor;
    CHECK_THROWS_WITH_AS(lpa::build_term_vector("doc", ideas, extractor),
                         doctest::Contains("EmptyVocabulary"), Error);
}

TEST_CASE("corpus vector averages over the union support") {
    lpa::FreqVector vh{"h", {{"a", 0.5}, {"b", 0.5}}};
    lpa::FreqVector vg{"g", {{"a", 1.0}}};
    const lpa::FreqVector corpus = lpa::corpus_vector(vh, vg);
    CHECK(corpus.freqs.at("a") == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(corpus.freqs.at("b") == doctest::Approx(0.25).epsilon(1e-12));
    // disjoint supports
    lpa::FreqVector va{"x", {{"a", 1.0}}}, vb{"y", {{"b", 1.0}}};
    const lpa::FreqVector mixed = lpa::corpus_vector(va, vb);
    CHECK(mixed.freqs.at("a") == doctest::Approx(0.5));
    CHECK(mixed.freqs.at("b") == doctest::Approx(0.5));
}

TEST_CASE("padding fills missing support then renormalizes") {
    SUBCASE("full support comes back bit-identical") {
        lpa::FreqVector doc{"d", {{"a", 0.5}, {"b", 0.5}}};
        const lpa::FreqVector padded = lpa::pad_and_renormalize(doc, {"a", "b"}, 1e-6);
        CHECK(padded.freqs.at("a") == 0.5);
        CHECK(padded.freqs.at("b") == 0.5);
    }
    SUBCASE("missing terms get epsilon mass") {
        lpa::FreqVector doc{"d", {{"a", 1.0}}};
        const lpa::FreqVector padded = lpa::pad_and_renormalize(doc, {"a", "b"}, 1e-6);
        CHECK(padded.freqs.at("a") == doctest::Approx(1.0 / (1.0 + 1e-6)).epsilon(1e-15));
        CHECK(padded.freqs.at("b") == doctest::Approx(1e-6 / (1.0 + 1e-6)).epsilon(1e-15));
        double sum = 0.0;
        for (const auto& [term, freq] : padded.freqs) sum += freq;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("large epsilon example") {
        lpa::FreqVector doc{"d", {{"a", 0.5}, {"b", 0.5}}};
        const lpa::FreqVector padded = lpa::pad_and_renormalize(doc, {"a", "b", "c", "d"}, 0.25);
        CHECK(padded.freqs.at("a") == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(padded.freqs.at("c") == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    }
    SUBCASE("doc term outside the support") {
        lpa::FreqVector doc{"d", {{"zz", 1.0}}};
        CHECK_THROWS_WITH_AS(lpa::pad_and_renormalize(doc, {"a"}, 1e-6),
                             doctest::Contains("SupportMismatch"), Error);
    }
}

TEST_CASE("symmetric kld contributions match hand-computed values") {
    SUBCASE("two terms") {
        lpa::FreqVector doc{"d", {{"a", 0.75}, {"b", 0.25}}};
        lpa::FreqVector corpus{"c", {{"a", 0.5}, {"b", 0.5}}};
        const auto contributions = lpa::sym_kld_contributions(doc, corpus);
        CHECK(contributions.at("a") == doctest::Approx(0.146240625180289).epsilon(1e-12));
        CHECK(contributions.at("b") == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("three terms") {
        lpa::FreqVector doc{"d", {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}}};
        lpa::FreqVector corpus{"c", {{"a", 0.2}, {"b", 0.5}, {"c", 0.3}}};
        const auto contributions = lpa::sym_kld_contributions(doc, corpus);
        CHECK(contributions.at("a") == doctest::Approx(0.396578428466209).epsilon(1e-12));
        CHECK(contributions.at("b") == doctest::Approx(0.147393118833241).epsilon(1e-12));
        CHECK(contributions.at("c") == doctest::Approx(0.058496250072116).epsilon(1e-12));
        double sum = 0.0;
        for (const auto& [term, weight] : contributions) sum += weight;
        CHECK(sum == doctest::Approx(0.602467797371566).epsilon(1e-12));
    }
    SUBCASE("support mismatch raises") {
        lpa::FreqVector doc{"d", {{"a", 1.0}}};
        lpa::FreqVector corpus{"c", {{"a", 0.5}, {"b", 0.5}}};
        CHECK_THROWS_AS(lpa::sym_kld_contributions(doc, corpus), Error);
    }
}

TEST_CASE("contribution sum equals the direct two-sided divergence") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> support_size(2, 12);
    std::uniform_real_distribution<double> mass(0.05, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = support_size(rng);
        lpa::FreqVector doc{"d", {}};
        lpa::FreqVector corpus{"c", {}};
        double doc_sum = 0.0, corpus_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const std::string term = "t" + std::to_string(i);
            doc.freqs[term] = mass(rng);
            corpus.freqs[term] = mass(rng);
            doc_sum += doc.freqs[term];
            corpus_sum += corpus.freqs[term];
        }
        for (auto& [term, freq] : doc.freqs) freq /= doc_sum;
        for (auto& [term, freq] : corpus.freqs) freq /= corpus_sum;

        double direct = 0.0;
        for (const auto& [term, d] : doc.freqs) {
            const double c = corpus.freqs.at(term);
            direct += d * std::log2(d / c) + c * std::log2(c / d);
        }
        const auto contributions = lpa::sym_kld_contributions(doc, corpus);
        double sum = 0.0;
        for (const auto& [term, weight] : contributions) {
            CHECK(weight >= 0.0);
            sum += weight;
        }
        CHECK(sum == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("signature of identical corpora is empty") {
    const auto ideas = ideas_from({"solar lamp clips", "desk fan hums"}, IdeaSource::Human, "h");
    const lpa::TermExtractor extractor;
    const lpa::LpaSignature sig = lpa::signature("h-vs-h", ideas, ideas, extractor);
    CHECK(sig.entries.empty());
}

TEST_CASE("signature signs track over- and under-representation") {
    const auto human = ideas_from({"shared gizmo lamp", "gizmo stand shade", "lamp gizmo arm"},
                                  IdeaSource::Human, "h");
    const auto machine = ideas_from({"shared widget lamp", "widget stand shade", "lamp widget arm"},
                                    IdeaSource::Llm, "g");
    const lpa::TermExtractor extractor;
    lpa::LpaConfig config;
    const lpa::LpaSignature sig = lpa::signature("human", human, machine, extractor, config);
    REQUIRE_FALSE(sig.entries.empty());
    int gizmo_sign = 0, widget_sign = 0;
    for (const auto& entry : sig.entries) {
        if (entry.term == "gizmo") gizmo_sign = entry.sign;
        if (entry.term == "widget") widget_sign = entry.sign;
        CHECK(entry.weight >= 0.0);
    }
    CHECK(gizmo_sign == 1);
    CHECK(widget_sign == -1);

    // swapping the roles flips every sign
    const lpa::LpaSignature flipped = lpa::signature("machine", machine, human, extractor, config);
    for (const auto& entry : flipped.entries) {
        if (entry.term == "gizmo") CHECK(entry.sign == -1);
        if (entry.term == "widget") CHECK(entry.sign == 1);
    }
}

TEST_CASE("signature ordering and truncation") {
    const auto human = ideas_from({"alpha alpha alpha beta gamma", "alpha beta delta"},
                                  IdeaSource::Human, "h");
    const auto machine = ideas_from({"omega omega psi", "omega psi chi"}, IdeaSource::Llm, "g");
    const lpa::TermExtractor extractor;
    lpa::LpaConfig config;
    config.top_k = 3;
    const lpa::LpaSignature sig = lpa::signature("human", human, machine, extractor, config);
    REQUIRE(sig.entries.size() == 3);
    CHECK(sig.entries[0].weight >= sig.entries[1].weight);
    CHECK(sig.entries[1].weight >= sig.entries[2].weight);
}

TEST_CASE("epsilon warning fires when padding is not small") {
    const auto human = ideas_from({"alpha beta"}, IdeaSource::Human, "h");
    const auto machine = ideas_from({"alpha gamma"}, IdeaSource::Llm, "g");
    const lpa::TermExtractor extractor;
    lpa::LpaConfig config;
    std::vector<std::string> warnings;

    config.epsilon = 0.4; // not small against frequencies of 0.5
    lpa::signature("human", human, machine, extractor, config, &warnings);
    CHECK(warnings.size() == 1);

    warnings.clear();
    config.epsilon = 1e-6;
    lpa::signature("human", human, machine, extractor, config, &warnings);
    CHECK(warnings.empty());
}

TEST_CASE("signature csv format") {
    lpa::LpaSignature sig{"human", {{"gizmo", 0.1234567, 1}, {"widget", 0.05, -1}}};
    const std::string text = lpa::signatures_to_csv(std::vector<lpa::LpaSignature>{sig});
    CHECK(text == "doc_id,term,weight,sign\n"
                  "human,gizmo,0.123457,1\n"
                  "human,widget,0.050000,-1\n");
}

TEST_CASE("filter_by_source keeps ingestion order") {
    corpus::IdeaSet set;
    set.problem_statement = "p";
    set.ideas = {
        {"a", "t", IdeaSource::Human, "first idea text", false},
        {"b", "t", IdeaSource::Llm, "second idea text", false},
        {"c", "t", IdeaSource::Human, "third idea text", false},
    };
    const auto humans = lpa::filter_by_source(set, IdeaSource::Human);
    REQUIRE(humans.size() == 2);
    CHECK(humans[0].id == "a");
    CHECK(humans[1].id == "c");
}
