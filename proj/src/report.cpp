#include "ideate/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ideate/csv.hpp"
#include "ideate/errors.hpp"

namespace ideate::report {

using corpus::Criterion;
using corpus::MeanStd;
using corpus::RaterGroup;

namespace {

std::string fmt(const char* spec, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, value);
    return buf;
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::IoError, "cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) raise(ErrorCode::IoError, "write failed for " + path);
}

std::string cell(const MeanStd& stats) {
    if (stats.n == 0) return "-";
    return fmt2(stats.mean) + " (" + fmt2(stats.sample_std) + ")";
}

std::string group_label(RaterGroup group) { return std::string(corpus::to_string(group)); }
std::string criterion_label(Criterion criterion) {
    return std::string(corpus::to_string(criterion));
}

} // namespace

std::string fmt2(double value) { return fmt("%.2f", value); }
std::string fmt3(double value) { return fmt("%.3f", value); }
std::string fmt6(double value) { return fmt("%.6f", value); }

std::string current_timestamp() {
    std::time_t now;
    if (const char* pinned = std::getenv("SOURCE_DATE_EPOCH");
        pinned != nullptr && *pinned != '\0') {
        now = static_cast<std::time_t>(std::strtoll(pinned, nullptr, 10));
    } else {
        now = std::time(nullptr);
    }
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

// ---------------------------------------------------------------------------
// Markdown
// ---------------------------------------------------------------------------

std::string render_markdown(const ReportBundle& bundle) {
    std::ostringstream md;
    md << "# Ideation session report\n";

    if (!bundle.counts.rows.empty()) {
        md << "\n## Idea counts\n\n";
        md << "| Team | Human | LLM | Collaborative | Total |\n";
        md << "| --- | --- | --- | --- | --- |\n";
        for (const auto& row : bundle.counts.rows)
            md << "| " << row.team << " | " << row.human << " | " << row.llm << " | "
               << row.collaborative << " | " << row.total() << " |\n";
        md << "| all | | | | " << bundle.counts.grand_total() << " |\n";
    }

    if (!bundle.word_stats.empty()) {
        md << "\n### Word counts\n\n";
        md << "| Ideas | Mean words | Std | N |\n";
        md << "| --- | --- | --- | --- |\n";
        for (const auto& [label, stats] : bundle.word_stats)
            md << "| " << label << " | " << fmt2(stats.mean) << " | " << fmt2(stats.sample_std)
               << " | " << stats.n << " |\n";
    }

    if (bundle.self_ratings) {
        md << "\n## Self-ratings\n\n";
        md << "| Source | Relevance | Innovation | Insightfulness |\n";
        md << "| --- | --- | --- | --- |\n";
        for (corpus::IdeaSource source : corpus::kIdeaSources) {
            md << "| " << corpus::to_string(source);
            for (Criterion criterion : corpus::kCriteria)
                md << " | " << cell(bundle.self_ratings->at(source, criterion));
            md << " |\n";
        }
    }

    if (!bundle.distributions.empty()) {
        md << "\n## Rating distributions\n\n";
        md << "| Group | Criterion | 1 | 2 | 3 | 4 | 5 | Ideas |\n";
        md << "| --- | --- | --- | --- | --- | --- | --- | --- |\n";
        for (const DistributionRow& row : bundle.distributions) {
            md << "| " << group_label(row.group) << " | " << criterion_label(row.criterion);
            for (std::size_t bin : row.distribution.bins) md << " | " << bin;
            md << " | " << row.distribution.means.size() << " |\n";
        }
    }

    if (!bundle.kappa_table.empty()) {
        md << "\n## Inter-rater agreement\n\n";
        md << "| Criterion | Group | Subjects | Raters | P_bar | P_e | Kappa |\n";
        md << "| --- | --- | --- | --- | --- | --- | --- |\n";
        for (const KappaRow& row : bundle.kappa_table)
            md << "| " << criterion_label(row.criterion) << " | " << group_label(row.group)
               << " | " << row.result.n_subjects << " | " << row.result.n_raters << " | "
               << fmt3(row.result.p_bar) << " | " << fmt3(row.result.p_e) << " | "
               << fmt3(row.result.kappa) << " |\n";
    }

    if (!bundle.correlations.empty()) {
        md << "\n## Score correlations\n\n";
        md << "| Groups | Ideas | Pearson r |\n";
        md << "| --- | --- | --- |\n";
        for (const CorrelationRow& row : bundle.correlations)
            md << "| " << group_label(row.group_a) << " vs " << group_label(row.group_b) << " | "
               << row.result.n << " | " << fmt3(row.result.r) << " |\n";
    }

    if (!bundle.rankings.empty()) {
        md << "\n## Rankings\n";
        for (const RankingRow& row : bundle.rankings) {
            md << "\n### " << group_label(row.group) << "\n\n";
            md << "| Rank | Idea | Total |\n";
            md << "| --- | --- | --- |\n";
            for (std::size_t i = 0; i < row.ranking.entries.size(); ++i)
                md << "| " << i + 1 << " | " << row.ranking.entries[i].idea_id << " | "
                   << fmt3(row.ranking.entries[i].total) << " |\n";
        }
    }

    if (!bundle.overlaps.empty()) {
        md << "\n## Top/bottom overlap\n\n";
        md << "| Groups | k | Top shared | Bottom shared |\n";
        md << "| --- | --- | --- | --- |\n";
        for (const OverlapRow& row : bundle.overlaps)
            md << "| " << group_label(row.group_a) << " vs " << group_label(row.group_b) << " | "
               << row.k << " | " << row.result.top_shared << " | " << row.result.bottom_shared
               << " |\n";
        for (const OverlapRow& row : bundle.overlaps) {
            md << "\n### " << group_label(row.group_a) << " vs " << group_label(row.group_b)
               << " positions\n\n";
            md << "| Idea | Rank (" << group_label(row.group_a) << ") | Rank ("
               << group_label(row.group_b) << ") |\n";
            md << "| --- | --- | --- |\n";
            for (const auto& [idea_id, ranks] : row.result.positions)
                md << "| " << idea_id << " | " << ranks.first << " | " << ranks.second << " |\n";
        }
    }

    if (!bundle.signatures.empty()) {
        md << "\n## Divergence signatures\n\n";
        md << "| Document | Term | Weight | Sign |\n";
        md << "| --- | --- | --- | --- |\n";
        for (const lpa::LpaSignature& sig : bundle.signatures) {
            for (const lpa::SignatureEntry& entry : sig.entries)
                md << "| " << sig.doc_id << " | " << entry.term << " | " << fmt6(entry.weight)
                   << " | " << (entry.sign > 0 ? "+1" : "-1") << " |\n";
        }
    }

    if (bundle.chosen_comparison) {
        const agreement::ChosenComparison& chosen = *bundle.chosen_comparison;
        md << "\n## Chosen ideas\n\n";
        md << "| Rater | Criterion | Stat |";
        for (const std::string& team : chosen.teams) md << " " << team << " |";
        md << " All ideas |\n";
        md << "| --- | --- | --- |";
        for (std::size_t i = 0; i < chosen.teams.size(); ++i) md << " --- |";
        md << " --- |\n";
        for (RaterGroup group : corpus::kRaterGroups) {
            bool group_has_data = false;
            for (Criterion criterion : corpus::kCriteria) {
                if (chosen.all_ideas[static_cast<std::size_t>(group)]
                                    [static_cast<std::size_t>(criterion)]
                        .n > 0)
                    group_has_data = true;
            }
            if (!group_has_data) continue;
            for (Criterion criterion : corpus::kCriteria) {
                const auto& cells = chosen.chosen[static_cast<std::size_t>(group)]
                                                 [static_cast<std::size_t>(criterion)];
                const MeanStd& all = chosen.all_ideas[static_cast<std::size_t>(group)]
                                                     [static_cast<std::size_t>(criterion)];
                md << "| " << group_label(group) << " | " << criterion_label(criterion)
                   << " | avg |";
                for (const MeanStd& stats : cells)
                    md << " " << (stats.n == 0 ? "-" : fmt2(stats.mean)) << " |";
                md << " " << (all.n == 0 ? "-" : fmt2(all.mean)) << " |\n";
                md << "| " << group_label(group) << " | " << criterion_label(criterion)
                   << " | stdev |";
                for (const MeanStd& stats : cells)
                    md << " " << (stats.n == 0 ? "-" : fmt2(stats.sample_std)) << " |";
                md << " " << (all.n == 0 ? "-" : fmt2(all.sample_std)) << " |\n";
            }
        }
    }

    md << "\n## Metadata\n\n";
    md << "- tool version: " << bundle.metadata.tool_version << "\n";
    md << "- ideas digest: " << bundle.metadata.ideas_digest << "\n";
    if (!bundle.metadata.ratings_digest.empty())
        md << "- ratings digest: " << bundle.metadata.ratings_digest << "\n";
    if (!bundle.metadata.rubric_digest.empty())
        md << "- rubric digest: " << bundle.metadata.rubric_digest << "\n";
    md << "- generated at: " << bundle.metadata.generated_at << "\n";
    return md.str();
}

// ---------------------------------------------------------------------------
// CSV exports
// ---------------------------------------------------------------------------

std::vector<std::string> export_csv(const ReportBundle& bundle, const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) raise(ErrorCode::IoError, "cannot create " + out_dir + ": " + ec.message());
    std::vector<std::string> paths;
    auto emit = [&](const std::string& name, const std::string& content) {
        std::string path = (std::filesystem::path(out_dir) / name).string();
        write_file(path, content);
        paths.push_back(std::move(path));
    };

    if (!bundle.counts.rows.empty()) {
        std::string out = "team,human,llm,collaborative,total\n";
        for (const auto& row : bundle.counts.rows)
            out += csv::format_row({row.team, std::to_string(row.human), std::to_string(row.llm),
                                    std::to_string(row.collaborative),
                                    std::to_string(row.total())});
        out += csv::format_row({"all", "", "", "", std::to_string(bundle.counts.grand_total())});
        emit("counts.csv", out);
    }

    if (!bundle.word_stats.empty()) {
        std::string out = "ideas,mean_words,std_words,n\n";
        for (const auto& [label, stats] : bundle.word_stats)
            out += csv::format_row(
                {label, fmt2(stats.mean), fmt2(stats.sample_std), std::to_string(stats.n)});
        emit("word_stats.csv", out);
    }

    if (bundle.self_ratings) {
        std::string out = "source,criterion,mean,std,n\n";
        for (corpus::IdeaSource source : corpus::kIdeaSources) {
            for (Criterion criterion : corpus::kCriteria) {
                const MeanStd& stats = bundle.self_ratings->at(source, criterion);
                if (stats.n == 0) continue;
                out += csv::format_row({std::string(corpus::to_string(source)),
                                        criterion_label(criterion), fmt2(stats.mean),
                                        fmt2(stats.sample_std), std::to_string(stats.n)});
            }
        }
        emit("self_ratings.csv", out);
    }

    if (!bundle.distributions.empty()) {
        std::string out = "group,criterion,bin_1,bin_2,bin_3,bin_4,bin_5,n_ideas\n";
        for (const DistributionRow& row : bundle.distributions) {
            csv::Row fields = {group_label(row.group), criterion_label(row.criterion)};
            for (std::size_t bin : row.distribution.bins) fields.push_back(std::to_string(bin));
            fields.push_back(std::to_string(row.distribution.means.size()));
            out += csv::format_row(fields);
        }
        emit("distributions.csv", out);
    }

    if (!bundle.kappa_table.empty()) {
        std::string out = "criterion,group,n_subjects,n_raters,P_bar,P_e,kappa\n";
        for (const KappaRow& row : bundle.kappa_table)
            out += csv::format_row({criterion_label(row.criterion), group_label(row.group),
                                    std::to_string(row.result.n_subjects),
                                    std::to_string(row.result.n_raters), fmt3(row.result.p_bar),
                                    fmt3(row.result.p_e), fmt3(row.result.kappa)});
        emit("kappa.csv", out);
    }

    if (!bundle.correlations.empty()) {
        std::string out = "group_a,group_b,n,r\n";
        for (const CorrelationRow& row : bundle.correlations)
            out += csv::format_row({group_label(row.group_a), group_label(row.group_b),
                                    std::to_string(row.result.n), fmt3(row.result.r)});
        emit("correlations.csv", out);
    }

    if (!bundle.rankings.empty()) {
        std::string out = "group,rank,idea_id,total\n";
        for (const RankingRow& row : bundle.rankings) {
            for (std::size_t i = 0; i < row.ranking.entries.size(); ++i)
                out += csv::format_row({group_label(row.group), std::to_string(i + 1),
                                        row.ranking.entries[i].idea_id,
                                        fmt3(row.ranking.entries[i].total)});
        }
        emit("rankings.csv", out);
    }

    if (!bundle.overlaps.empty()) {
        std::string out = "group_a,group_b,k,top_shared,bottom_shared\n";
        std::string positions = "group_a,group_b,idea_id,rank_a,rank_b\n";
        for (const OverlapRow& row : bundle.overlaps) {
            out += csv::format_row({group_label(row.group_a), group_label(row.group_b),
                                    std::to_string(row.k), std::to_string(row.result.top_shared),
                                    std::to_string(row.result.bottom_shared)});
            for (const auto& [idea_id, ranks] : row.result.positions)
                positions += csv::format_row({group_label(row.group_a), group_label(row.group_b),
                                              idea_id, std::to_string(ranks.first),
                                              std::to_string(ranks.second)});
        }
        emit("overlap.csv", out);
        emit("overlap_positions.csv", positions);
    }

    if (!bundle.signatures.empty()) {
        emit("signatures.csv", lpa::signatures_to_csv(bundle.signatures));
    }

    if (bundle.chosen_comparison) {
        const agreement::ChosenComparison& chosen = *bundle.chosen_comparison;
        std::string out = "group,criterion,team,mean,std,n\n";
        for (RaterGroup group : corpus::kRaterGroups) {
            for (Criterion criterion : corpus::kCriteria) {
                const auto& cells = chosen.chosen[static_cast<std::size_t>(group)]
                                                 [static_cast<std::size_t>(criterion)];
                const MeanStd& all = chosen.all_ideas[static_cast<std::size_t>(group)]
                                                     [static_cast<std::size_t>(criterion)];
                if (all.n == 0) continue;
                for (std::size_t t = 0; t < chosen.teams.size(); ++t) {
                    const MeanStd& stats = cells[t];
                    if (stats.n == 0) continue;
                    out += csv::format_row({group_label(group), criterion_label(criterion),
                                            chosen.teams[t], fmt2(stats.mean),
                                            fmt2(stats.sample_std), std::to_string(stats.n)});
                }
                out += csv::format_row({group_label(group), criterion_label(criterion), "all",
                                        fmt2(all.mean), fmt2(all.sample_std),
                                        std::to_string(all.n)});
            }
        }
        emit("chosen.csv", out);
    }

    {
        std::string out = "key,value\n";
        out += csv::format_row({"tool_version", bundle.metadata.tool_version});
        out += csv::format_row({"ideas_digest", bundle.metadata.ideas_digest});
        if (!bundle.metadata.ratings_digest.empty())
            out += csv::format_row({"ratings_digest", bundle.metadata.ratings_digest});
        if (!bundle.metadata.rubric_digest.empty())
            out += csv::format_row({"rubric_digest", bundle.metadata.rubric_digest});
        out += csv::format_row({"generated_at", bundle.metadata.generated_at});
        emit("metadata.csv", out);
    }

    return paths;
}

} // namespace ideate::report
