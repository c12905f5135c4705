/// @file ideate.cpp
/// Command-line pipeline over an ideation session: validate inputs, run the
/// machine judge, compute divergence signatures, run the agreement suite,
/// and render the full report.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ideate/agreement.hpp"
#include "ideate/corpus.hpp"
#include "ideate/csv.hpp"
#include "ideate/digest.hpp"
#include "ideate/errors.hpp"
#include "ideate/judge.hpp"
#include "ideate/lpa.hpp"
#include "ideate/report.hpp"
#include "ideate/version.hpp"

namespace {

using namespace ideate;
using corpus::Criterion;
using corpus::IdeaSet;
using corpus::IdeaSource;
using corpus::RaterGroup;
using corpus::RatingTable;

struct Options {
    std::string config_path;
    std::string ideas_path;
    std::string ratings_path;
    std::string machine_path;
    std::string rubric_path;
    std::string stopwords_path;
    std::string lexicon_path;
    std::string out_dir = "out";
    std::string provider_url;
    std::string model_id;
    std::string api_key_env = "IDEATE_API_KEY";
    int rounds = 30;
    int max_parallel = 4;
    int timeout_seconds = 60;
    int max_retries = 2;
    double temperature = 0.0;
    double epsilon = 1e-6;
    int top_k = 15;
    long long seed = 0; // reserved for statistical utilities
};

/// Fill any option the command line left untouched from the JSON config.
void apply_config(Options& opts, const std::function<bool(const char*)>& flag_given) {
    if (opts.config_path.empty()) return;
    std::ifstream in(opts.config_path, std::ios::binary);
    if (!in) raise(ErrorCode::MissingFile, "cannot open config " + opts.config_path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        raise(ErrorCode::SchemaError, std::string("config is not valid JSON: ") + e.what());
    }
    auto unset = [&](const char* flag) { return !flag_given(flag); };
    auto pick_str = [&](const char* key, const char* flag, std::string& out) {
        if (doc.contains(key) && unset(flag)) out = doc[key].get<std::string>();
    };
    pick_str("ideas", "--ideas", opts.ideas_path);
    pick_str("ratings", "--ratings", opts.ratings_path);
    pick_str("machine", "--machine", opts.machine_path);
    pick_str("rubric", "--rubric", opts.rubric_path);
    pick_str("stopwords", "--stopwords", opts.stopwords_path);
    pick_str("lexicon", "--lexicon", opts.lexicon_path);
    pick_str("out", "--out", opts.out_dir);
    if (doc.contains("rounds") && unset("--rounds")) opts.rounds = doc["rounds"].get<int>();
    if (doc.contains("epsilon") && unset("--epsilon")) opts.epsilon = doc["epsilon"].get<double>();
    if (doc.contains("top_k") && unset("--top-k")) opts.top_k = doc["top_k"].get<int>();
    if (doc.contains("seed") && unset("--seed")) opts.seed = doc["seed"].get<long long>();
    if (doc.contains("provider") && doc["provider"].is_object()) {
        const auto& p = doc["provider"];
        if (p.contains("endpoint") && unset("--provider"))
            opts.provider_url = p["endpoint"].get<std::string>();
        if (p.contains("model") && unset("--model")) opts.model_id = p["model"].get<std::string>();
        if (p.contains("api_key_env")) opts.api_key_env = p["api_key_env"].get<std::string>();
        if (p.contains("timeout_seconds")) opts.timeout_seconds = p["timeout_seconds"].get<int>();
        if (p.contains("max_retries")) opts.max_retries = p["max_retries"].get<int>();
        if (p.contains("max_parallel")) opts.max_parallel = p["max_parallel"].get<int>();
        if (p.contains("temperature")) opts.temperature = p["temperature"].get<double>();
    }
}

judge::ProviderConfig provider_config(const Options& opts) {
    judge::ProviderConfig config;
    config.endpoint_url = opts.provider_url;
    config.model_id = opts.model_id;
    config.api_key_env = opts.provider_url.starts_with("mock:") ? "" : opts.api_key_env;
    config.timeout = std::chrono::seconds(opts.timeout_seconds);
    config.max_retries_per_request = opts.max_retries;
    config.max_parallel = opts.max_parallel;
    config.temperature = opts.temperature;
    return config;
}

lpa::TermExtractorConfig term_config(const Options& opts) {
    lpa::TermExtractorConfig config;
    if (!opts.stopwords_path.empty()) config.stopword_path = opts.stopwords_path;
    if (!opts.lexicon_path.empty()) config.keep_lexicon_path = opts.lexicon_path;
    return config;
}

IdeaSet load_ideas_checked(const Options& opts) {
    if (opts.ideas_path.empty())
        raise(ErrorCode::MissingFile, "no ideas file given (--ideas or config)");
    return corpus::load_ideas(opts.ideas_path);
}

/// Human ratings, machine ratings (when given), and their merge.
struct Tables {
    RatingTable human;
    RatingTable machine;
    RatingTable merged;
};

Tables load_tables(const Options& opts, const IdeaSet& ideas) {
    Tables tables;
    if (!opts.ratings_path.empty()) tables.human = corpus::load_ratings(opts.ratings_path, ideas);
    if (!opts.machine_path.empty())
        tables.machine = judge::load_judge_csv(opts.machine_path, ideas);
    tables.merged = RatingTable::merge(tables.human, tables.machine, ideas);
    return tables;
}

std::vector<RaterGroup> groups_present(const RatingTable& table) {
    std::vector<RaterGroup> groups;
    for (RaterGroup group : corpus::kRaterGroups) {
        if (table.has_group(group)) groups.push_back(group);
    }
    return groups;
}

void note(const std::string& message) { std::cerr << "note: " << message << "\n"; }

// ---------------------------------------------------------------------------
// Analysis bundle assembly (shared by `agree` and `report`)
// ---------------------------------------------------------------------------

struct AnalysisResults {
    report::ReportBundle bundle;
    // group × criterion normality results, aligned row-wise
    struct NormalityRow {
        RaterGroup group;
        Criterion criterion;
        agreement::NormalityResult result;
    };
    std::vector<NormalityRow> normality;
};

void add_agreement_sections(AnalysisResults& analysis, const IdeaSet& ideas,
                            const RatingTable& merged) {
    report::ReportBundle& bundle = analysis.bundle;
    const std::vector<RaterGroup> groups = groups_present(merged);

    for (RaterGroup group : groups) {
        for (Criterion criterion : corpus::kCriteria) {
            try {
                report::DistributionRow row;
                row.group = group;
                row.criterion = criterion;
                row.distribution = agreement::rating_distribution(merged, ideas, group, criterion);
                bundle.distributions.push_back(std::move(row));
            } catch (const Error& e) {
                note(std::string("distribution skipped: ") + e.what());
            }
        }
    }

    for (Criterion criterion : corpus::kCriteria) {
        for (RaterGroup group : groups) {
            try {
                agreement::CategoricalMatrix matrix =
                    agreement::build_matrix(merged, ideas, group, criterion);
                report::KappaRow row;
                row.criterion = criterion;
                row.group = group;
                row.result = agreement::fleiss_kappa(matrix);
                bundle.kappa_table.push_back(std::move(row));
            } catch (const Error& e) {
                note(std::string("kappa skipped: ") + e.what());
            }
        }
    }

    std::map<RaterGroup, std::vector<agreement::AggregateScore>> scores;
    for (RaterGroup group : groups) {
        try {
            scores[group] = agreement::group_means(merged, ideas, group);
            report::RankingRow row;
            row.group = group;
            row.ranking = agreement::rank(scores[group]);
            bundle.rankings.push_back(std::move(row));
        } catch (const Error& e) {
            note(std::string("ranking skipped: ") + e.what());
        }
    }

    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            if (!scores.contains(groups[i]) || !scores.contains(groups[j])) continue;
            std::vector<double> x;
            std::vector<double> y;
            for (const auto& s : scores[groups[i]]) x.push_back(s.total);
            for (const auto& s : scores[groups[j]]) y.push_back(s.total);
            try {
                report::CorrelationRow row;
                row.group_a = groups[i];
                row.group_b = groups[j];
                row.result = agreement::pearson(x, y);
                bundle.correlations.push_back(std::move(row));
            } catch (const Error& e) {
                note(std::string("correlation skipped: ") + e.what());
            }
        }
    }

    std::map<RaterGroup, const agreement::RankedList*> rankings;
    for (const report::RankingRow& row : bundle.rankings) rankings[row.group] = &row.ranking;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            auto a = rankings.find(groups[i]);
            auto b = rankings.find(groups[j]);
            if (a == rankings.end() || b == rankings.end()) continue;
            const std::size_t n = a->second->entries.size();
            if (n == 0) continue;
            try {
                report::OverlapRow row;
                row.group_a = groups[i];
                row.group_b = groups[j];
                row.k = std::min<std::size_t>(4, n);
                row.result = agreement::top_bottom_overlap(*a->second, *b->second, row.k);
                bundle.overlaps.push_back(std::move(row));
            } catch (const Error& e) {
                note(std::string("overlap skipped: ") + e.what());
            }
        }
    }

    for (const report::DistributionRow& row : bundle.distributions) {
        try {
            AnalysisResults::NormalityRow nrow{row.group, row.criterion,
                                              agreement::shapiro_wilk(row.distribution.means)};
            analysis.normality.push_back(std::move(nrow));
        } catch (const Error& e) {
            note(std::string("normality skipped: ") + e.what());
        }
    }
}

report::Metadata make_metadata(const IdeaSet& ideas, const Tables& tables, const Options& opts) {
    report::Metadata metadata;
    metadata.tool_version = kVersion;
    metadata.ideas_digest = judge::ideas_digest(ideas);
    if (!tables.merged.empty())
        metadata.ratings_digest = fnv1a64_hex(corpus::ratings_to_csv(tables.merged));
    if (!opts.rubric_path.empty())
        metadata.rubric_digest = judge::rubric_digest(judge::load_rubric(opts.rubric_path));
    metadata.generated_at = report::current_timestamp();
    return metadata;
}

std::string normality_csv(const AnalysisResults& analysis) {
    std::string out = "group,criterion,n,W,p_value\n";
    char buf[64];
    for (const auto& row : analysis.normality) {
        std::snprintf(buf, sizeof(buf), "%.6g", row.result.p_value);
        out += csv::format_row({std::string(corpus::to_string(row.group)),
                                std::string(corpus::to_string(row.criterion)),
                                std::to_string(row.result.n), report::fmt6(row.result.w), buf});
    }
    return out;
}

void write_text(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::IoError, "cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) raise(ErrorCode::IoError, "write failed for " + path);
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_validate(const Options& opts) {
    IdeaSet ideas = load_ideas_checked(opts);
    std::set<std::string> teams;
    for (const auto& idea : ideas.ideas) teams.insert(idea.team);
    std::cout << "ideas: " << ideas.ideas.size() << " across " << teams.size() << " team(s)\n";
    if (!opts.ratings_path.empty()) {
        RatingTable table = corpus::load_ratings(opts.ratings_path, ideas);
        std::cout << "ratings: " << table.size() << " record(s)\n";
    }
    if (!opts.machine_path.empty()) {
        RatingTable table = judge::load_judge_csv(opts.machine_path, ideas);
        std::cout << "machine ratings: " << table.size() << " record(s)\n";
    }
    if (!opts.rubric_path.empty()) {
        judge::load_rubric(opts.rubric_path);
        std::cout << "rubric: ok\n";
    }
    std::cout << "validation passed\n";
    return 0;
}

int cmd_judge(const Options& opts) {
    IdeaSet ideas = load_ideas_checked(opts);
    judge::Rubric rubric =
        opts.rubric_path.empty() ? judge::default_rubric() : judge::load_rubric(opts.rubric_path);
    judge::ProviderConfig config = provider_config(opts);
    std::unique_ptr<judge::RatingProvider> provider = judge::make_provider(config);
    judge::JudgeRunResult result =
        judge::run_judge(ideas, rubric, *provider, opts.rounds, config);
    judge::JudgeOutputPaths paths = judge::write_outputs(result, opts.out_dir);
    int succeeded = 0;
    for (const auto& round : result.rounds) succeeded += round.succeeded ? 1 : 0;
    std::cout << "rounds: " << result.requested_rounds << " requested, " << succeeded
              << " succeeded\n";
    std::cout << "wrote " << paths.ratings_csv << "\n";
    std::cout << "wrote " << paths.justifications_log << "\n";
    return 0;
}

int cmd_lpa(const Options& opts) {
    IdeaSet ideas = load_ideas_checked(opts);
    lpa::TermExtractor extractor(term_config(opts));
    lpa::LpaConfig config{opts.epsilon, opts.top_k};
    std::vector<corpus::Idea> human = lpa::filter_by_source(ideas, IdeaSource::Human);
    std::vector<corpus::Idea> llm = lpa::filter_by_source(ideas, IdeaSource::Llm);
    std::vector<std::string> warnings;
    std::vector<lpa::LpaSignature> signatures;
    signatures.push_back(lpa::signature("human", human, llm, extractor, config, &warnings));
    signatures.push_back(lpa::signature("llm", llm, human, extractor, config, &warnings));
    for (const std::string& warning : warnings) std::cerr << "warning: " << warning << "\n";
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) raise(ErrorCode::IoError, "cannot create " + opts.out_dir + ": " + ec.message());
    const std::string path = (std::filesystem::path(opts.out_dir) / "signatures.csv").string();
    lpa::save_signatures(signatures, path);
    std::cout << "wrote " << path << " (" << signatures[0].entries.size() << " human terms, "
              << signatures[1].entries.size() << " llm terms)\n";
    return 0;
}

int cmd_agree(const Options& opts) {
    IdeaSet ideas = load_ideas_checked(opts);
    Tables tables = load_tables(opts, ideas);
    if (tables.merged.empty())
        raise(ErrorCode::EmptyTable, "no ratings given (--ratings and/or --machine)");
    AnalysisResults analysis;
    add_agreement_sections(analysis, ideas, tables.merged);
    analysis.bundle.metadata = make_metadata(ideas, tables, opts);
    std::vector<std::string> paths = report::export_csv(analysis.bundle, opts.out_dir);
    const std::string normality_path =
        (std::filesystem::path(opts.out_dir) / "normality.csv").string();
    write_text(normality_path, normality_csv(analysis));
    paths.push_back(normality_path);
    for (const std::string& path : paths) std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_report(const Options& opts) {
    IdeaSet ideas = load_ideas_checked(opts);
    Tables tables = load_tables(opts, ideas);
    AnalysisResults analysis;
    report::ReportBundle& bundle = analysis.bundle;

    bundle.counts = corpus::count_by_team_source(ideas);
    const std::pair<std::string, std::optional<IdeaSource>> word_slices[] = {
        {"all", std::nullopt},
        {"human", IdeaSource::Human},
        {"llm", IdeaSource::Llm},
        {"collaborative", IdeaSource::Collaborative}};
    for (const auto& [label, source] : word_slices) {
        try {
            bundle.word_stats.emplace_back(label, corpus::word_count_stats(ideas, source));
        } catch (const Error& e) {
            note(std::string("word stats skipped: ") + e.what());
        }
    }

    if (!tables.human.empty())
        bundle.self_ratings = corpus::summarize_self_ratings(tables.human, ideas);

    if (!tables.merged.empty()) add_agreement_sections(analysis, ideas, tables.merged);

    try {
        lpa::TermExtractor extractor(term_config(opts));
        lpa::LpaConfig config{opts.epsilon, opts.top_k};
        std::vector<corpus::Idea> human = lpa::filter_by_source(ideas, IdeaSource::Human);
        std::vector<corpus::Idea> llm = lpa::filter_by_source(ideas, IdeaSource::Llm);
        std::vector<std::string> warnings;
        bundle.signatures.push_back(
            lpa::signature("human", human, llm, extractor, config, &warnings));
        bundle.signatures.push_back(
            lpa::signature("llm", llm, human, extractor, config, &warnings));
        for (const std::string& warning : warnings) std::cerr << "warning: " << warning << "\n";
    } catch (const Error& e) {
        bundle.signatures.clear();
        note(std::string("signatures skipped: ") + e.what());
    }

    if (!tables.merged.empty()) {
        try {
            bundle.chosen_comparison = agreement::chosen_idea_comparison(tables.merged, ideas);
        } catch (const Error& e) {
            note(std::string("chosen-idea comparison skipped: ") + e.what());
        }
    }

    bundle.metadata = make_metadata(ideas, tables, opts);

    std::vector<std::string> paths = report::export_csv(bundle, opts.out_dir);
    if (!analysis.normality.empty()) {
        const std::string normality_path =
            (std::filesystem::path(opts.out_dir) / "normality.csv").string();
        write_text(normality_path, normality_csv(analysis));
        paths.push_back(normality_path);
    }
    const std::string report_path = (std::filesystem::path(opts.out_dir) / "report.md").string();
    write_text(report_path, report::render_markdown(bundle));
    std::cout << "wrote " << report_path << "\n";
    for (const std::string& path : paths) std::cout << "wrote " << path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Brainwriting session analysis toolkit"};
    app.require_subcommand(1);

    Options opts;
    std::string command;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "JSON config file; flags take precedence");
        sub->add_option("--ideas", opts.ideas_path, "ideas JSON file");
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--seed", opts.seed, "seed for statistical utilities (reserved)");
    };

    CLI::App* validate = app.add_subcommand("validate", "schema-check the session inputs");
    add_common(validate);
    validate->add_option("--ratings", opts.ratings_path, "human ratings CSV");
    validate->add_option("--machine", opts.machine_path, "machine ratings CSV");
    validate->add_option("--rubric", opts.rubric_path, "rubric JSON file");
    validate->callback([&] { command = "validate"; });

    CLI::App* judge_cmd = app.add_subcommand("judge", "run N machine evaluation rounds");
    add_common(judge_cmd);
    judge_cmd->add_option("--rubric", opts.rubric_path, "rubric JSON file");
    judge_cmd->add_option("--rounds", opts.rounds, "evaluation rounds");
    judge_cmd->add_option("--provider", opts.provider_url,
                          "endpoint URL, or mock:<script.json> for offline runs");
    judge_cmd->add_option("--model", opts.model_id, "model identifier");
    judge_cmd->callback([&] { command = "judge"; });

    CLI::App* lpa_cmd = app.add_subcommand("lpa", "emit human-vs-llm divergence signatures");
    add_common(lpa_cmd);
    lpa_cmd->add_option("--epsilon", opts.epsilon, "padding value for missing terms");
    lpa_cmd->add_option("--top-k", opts.top_k, "signature length cap");
    lpa_cmd->add_option("--stopwords", opts.stopwords_path, "stopword file");
    lpa_cmd->add_option("--lexicon", opts.lexicon_path, "keep-lexicon whitelist file");
    lpa_cmd->callback([&] { command = "lpa"; });

    CLI::App* agree_cmd =
        app.add_subcommand("agree", "kappa, distributions, rankings, correlations, normality");
    add_common(agree_cmd);
    agree_cmd->add_option("--ratings", opts.ratings_path, "human ratings CSV");
    agree_cmd->add_option("--machine", opts.machine_path, "machine ratings CSV");
    agree_cmd->callback([&] { command = "agree"; });

    CLI::App* report_cmd = app.add_subcommand("report", "assemble and render the full report");
    add_common(report_cmd);
    report_cmd->add_option("--ratings", opts.ratings_path, "human ratings CSV");
    report_cmd->add_option("--machine", opts.machine_path, "machine ratings CSV");
    report_cmd->add_option("--rubric", opts.rubric_path, "rubric JSON file");
    report_cmd->add_option("--epsilon", opts.epsilon, "padding value for missing terms");
    report_cmd->add_option("--top-k", opts.top_k, "signature length cap");
    report_cmd->add_option("--stopwords", opts.stopwords_path, "stopword file");
    report_cmd->add_option("--lexicon", opts.lexicon_path, "keep-lexicon whitelist file");
    report_cmd->callback([&] { command = "report"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    auto flag_given = [&](const char* flag) {
        for (CLI::App* sub : app.get_subcommands()) {
            const CLI::Option* option = sub->get_option_no_throw(flag);
            if (option != nullptr && option->count() > 0) return true;
        }
        return false;
    };

    try {
        apply_config(opts, flag_given);
        if (command == "validate") return cmd_validate(opts);
        if (command == "judge") return cmd_judge(opts);
        if (command == "lpa") return cmd_lpa(opts);
        if (command == "agree") return cmd_agree(opts);
        if (command == "report") return cmd_report(opts);
        std::cerr << "error: no subcommand selected\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        const bool provider_problem = e.code() == ErrorCode::ProviderError ||
                                      e.code() == ErrorCode::ProviderUnconfigured;
        return provider_problem ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
