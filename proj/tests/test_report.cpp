#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "ideate/corpus.hpp"
#include "ideate/errors.hpp"
#include "ideate/report.hpp"

using namespace ideate;
using corpus::Criterion;
using corpus::IdeaSource;
using corpus::RaterGroup;

namespace {

report::ReportBundle counts_bundle() {
    report::ReportBundle bundle;
    corpus::TeamSourceCounts::Row row;
    row.team = "team-1";
    row.human = 20;
    row.llm = 4;
    row.collaborative = 2;
    bundle.counts.rows.push_back(row);
    bundle.metadata = {"0.1.0-test", "aaaa", "bbbb", "", "2024-06-01T00:00:00Z"};
    return bundle;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::set<std::string> numeric_tokens(const std::string& text) {
    static const std::regex number(R"(\d+\.\d+)"); // decimal-formatted values only
    std::set<std::string> tokens;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), number);
         it != std::sregex_iterator(); ++it)
        tokens.insert(it->str());
    return tokens;
}

} // namespace

TEST_CASE("fixed-precision formatters") {
    CHECK(report::fmt2(4.8125) == "4.81");
    CHECK(report::fmt2(0.4) == "0.40");
    CHECK(report::fmt3(9.125) == "9.125");
    CHECK(report::fmt3(0.42) == "0.420");
    CHECK(report::fmt6(0.1234567) == "0.123457");
}

TEST_CASE("empty sections are omitted") {
    const report::ReportBundle bundle = counts_bundle();
    const std::string markdown = report::render_markdown(bundle);
    CHECK(markdown.find("## Idea counts") != std::string::npos);
    CHECK(markdown.find("## Metadata") != std::string::npos);
    CHECK(markdown.find("## Self-ratings") == std::string::npos);
    CHECK(markdown.find("## Inter-rater agreement") == std::string::npos);
    CHECK(markdown.find("## Divergence signatures") == std::string::npos);
}

TEST_CASE("counts table carries the totals") {
    const std::string markdown = report::render_markdown(counts_bundle());
    CHECK(markdown.find("| team-1 | 20 | 4 | 2 | 26 |") != std::string::npos);
    CHECK(markdown.find("| all |") != std::string::npos);
}

TEST_CASE("self-rating cells render mean and deviation") {
    report::ReportBundle bundle = counts_bundle();
    corpus::SelfRatingSummary summary;
    summary.at(IdeaSource::Human, Criterion::Relevance) = {4.8125, 0.4031, 16};
    summary.at(IdeaSource::Collaborative, Criterion::Insightfulness) = {4.8077, 0.4019, 26};
    bundle.self_ratings = summary;
    const std::string markdown = report::render_markdown(bundle);
    CHECK(markdown.find("4.81 (0.40)") != std::string::npos);
    CHECK(markdown.find("| -") != std::string::npos); // empty cells stay visibly empty
}

TEST_CASE("agreement and ranking sections render fixed precisions") {
    report::ReportBundle bundle = counts_bundle();

    report::KappaRow kappa;
    kappa.criterion = Criterion::Relevance;
    kappa.group = RaterGroup::Expert;
    kappa.result = {0.42, 2.0 / 3.0, 17.0 / 72.0, 26, 3};
    bundle.kappa_table.push_back(kappa);

    report::CorrelationRow correlation;
    correlation.group_a = RaterGroup::Expert;
    correlation.group_b = RaterGroup::Machine;
    correlation.result = {0.556, 26};
    bundle.correlations.push_back(correlation);

    report::RankingRow ranking;
    ranking.group = RaterGroup::Expert;
    ranking.ranking.entries = {{"idea-7", 9.125}, {"idea-2", 8.5}};
    bundle.rankings.push_back(ranking);

    const std::string markdown = report::render_markdown(bundle);
    CHECK(markdown.find("0.420") != std::string::npos);
    CHECK(markdown.find("0.667") != std::string::npos);
    CHECK(markdown.find("0.236") != std::string::npos);
    CHECK(markdown.find("0.556") != std::string::npos);
    CHECK(markdown.find("9.125") != std::string::npos);
    CHECK(markdown.find("| 1 | idea-7 |") != std::string::npos);
}

TEST_CASE("chosen-idea section lists teams against the field") {
    report::ReportBundle bundle = counts_bundle();
    agreement::ChosenComparison comparison;
    comparison.teams = {"team-1", "team-2"};
    comparison.chosen[0][0] = {{3.75, 0.96, 4}, {4.5, 0.5, 4}};
    comparison.all_ideas[0][0] = {3.2, 0.8, 26};
    bundle.chosen_comparison = comparison;
    const std::string markdown = report::render_markdown(bundle);
    CHECK(markdown.find("## Chosen ideas") != std::string::npos);
    CHECK(markdown.find("3.75") != std::string::npos);
    CHECK(markdown.find("0.96") != std::string::npos);
}

TEST_CASE("rendering is deterministic") {
    const report::ReportBundle bundle = counts_bundle();
    CHECK(report::render_markdown(bundle) == report::render_markdown(bundle));
}

TEST_CASE("csv export mirrors every markdown number") {
    report::ReportBundle bundle = counts_bundle();
    corpus::SelfRatingSummary summary;
    summary.at(IdeaSource::Human, Criterion::Relevance) = {4.8125, 0.4031, 16};
    bundle.self_ratings = summary;
    bundle.word_stats.push_back({"human", {16.5, 5.25, 97}});
    report::KappaRow kappa;
    kappa.result = {0.42, 0.61, 0.33, 26, 3};
    bundle.kappa_table.push_back(kappa);
    lpa::LpaSignature signature{"human-vs-machine", {{"walk", 0.1234567, 1}}};
    bundle.signatures.push_back(signature);

    const auto out_dir = std::filesystem::temp_directory_path() / "ideate_report_csv";
    std::filesystem::remove_all(out_dir);
    const std::vector<std::string> paths = report::export_csv(bundle, out_dir.string());
    REQUIRE_FALSE(paths.empty());

    std::string all_csv;
    for (const std::string& path : paths) {
        CHECK(std::filesystem::exists(path));
        all_csv += slurp(path);
    }
    const std::string markdown = report::render_markdown(bundle);
    const auto md_tokens = numeric_tokens(markdown);
    const auto csv_tokens = numeric_tokens(all_csv);
    for (const std::string& token : md_tokens) {
        INFO("markdown number missing from csv exports: " << token);
        CHECK(csv_tokens.contains(token));
    }

    // kappa csv follows the documented schema
    bool saw_kappa = false;
    for (const std::string& path : paths)
        if (path.ends_with("kappa.csv")) {
            saw_kappa = true;
            CHECK(slurp(path).starts_with("criterion,group,n_subjects,n_raters,P_bar,P_e,kappa\n"));
        }
    CHECK(saw_kappa);
}

TEST_CASE("csv export is reproducible and reports unusable destinations") {
    report::ReportBundle bundle = counts_bundle();
    report::KappaRow kappa;
    kappa.result = {0.42, 0.61, 0.33, 26, 3};
    bundle.kappa_table.push_back(kappa);

    const auto base = std::filesystem::temp_directory_path() / "ideate_report_repro";
    std::filesystem::remove_all(base);
    std::filesystem::create_directories(base);
    const auto first_dir = base / "first";
    const auto second_dir = base / "second";
    const auto first = report::export_csv(bundle, first_dir.string());
    const auto second = report::export_csv(bundle, second_dir.string());
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(std::filesystem::path(first[i]).filename() ==
              std::filesystem::path(second[i]).filename());
        CHECK(slurp(first[i]) == slurp(second[i]));
    }

    const auto blocker = base / "not_a_dir";
    std::ofstream(blocker) << "occupied";
    CHECK_THROWS_WITH_AS(report::export_csv(bundle, blocker.string()),
                         doctest::Contains("IoError"), Error);
}

TEST_CASE("timestamp honors SOURCE_DATE_EPOCH") {
    setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
    CHECK(report::current_timestamp() == "2023-11-14T22:13:20Z");
    unsetenv("SOURCE_DATE_EPOCH");
    CHECK(report::current_timestamp().size() == 20);
}
