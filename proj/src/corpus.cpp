#include "ideate/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ideate/csv.hpp"
#include "ideate/errors.hpp"
#include "ideate/stats.hpp"
#include "ideate/unicode.hpp"

namespace ideate::corpus {

using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::MissingFile, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::IoError, "cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) raise(ErrorCode::IoError, "write failed for " + path);
}

bool is_blank(std::string_view text) {
    return std::all_of(text.begin(), text.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

} // namespace

std::string_view to_string(IdeaSource source) {
    switch (source) {
    case IdeaSource::Human: return "human";
    case IdeaSource::Llm: return "llm";
    case IdeaSource::Collaborative: return "collaborative";
    }
    return "human";
}

std::string_view to_string(RaterGroup group) {
    switch (group) {
    case RaterGroup::Expert: return "expert";
    case RaterGroup::Novice: return "novice";
    case RaterGroup::Machine: return "machine";
    }
    return "expert";
}

std::string_view to_string(Criterion criterion) {
    switch (criterion) {
    case Criterion::Relevance: return "relevance";
    case Criterion::Innovation: return "innovation";
    case Criterion::Insightfulness: return "insightfulness";
    }
    return "relevance";
}

IdeaSource idea_source_from_string(std::string_view text) {
    if (text == "human") return IdeaSource::Human;
    if (text == "llm") return IdeaSource::Llm;
    if (text == "collaborative") return IdeaSource::Collaborative;
    raise(ErrorCode::SchemaError, "unknown idea source \"" + std::string(text) + "\"");
}

RaterGroup rater_group_from_string(std::string_view text) {
    if (text == "expert") return RaterGroup::Expert;
    if (text == "novice") return RaterGroup::Novice;
    if (text == "machine") return RaterGroup::Machine;
    raise(ErrorCode::SchemaError, "unknown rater group \"" + std::string(text) + "\"");
}

Criterion criterion_from_string(std::string_view text) {
    if (text == "relevance") return Criterion::Relevance;
    if (text == "innovation") return Criterion::Innovation;
    if (text == "insightfulness") return Criterion::Insightfulness;
    raise(ErrorCode::SchemaError, "unknown criterion \"" + std::string(text) + "\"");
}

// ---------------------------------------------------------------------------
// Ideas
// ---------------------------------------------------------------------------

const Idea* IdeaSet::find(std::string_view id) const {
    for (const Idea& idea : ideas) {
        if (idea.id == id) return &idea;
    }
    return nullptr;
}

IdeaSet parse_ideas_json(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        raise(ErrorCode::SchemaError, std::string("ideas file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) raise(ErrorCode::SchemaError, "ideas file must be a JSON object");
    if (!doc.contains("ideas") || !doc["ideas"].is_array())
        raise(ErrorCode::SchemaError, "missing \"ideas\" array");

    IdeaSet set;
    set.problem_statement =
        unicode::nfc(doc.value("problem_statement", std::string()));

    std::set<std::string> seen_ids;
    std::size_t index = 0;
    for (const auto& item : doc["ideas"]) {
        ++index;
        if (!item.is_object())
            raise(ErrorCode::SchemaError, "idea #" + std::to_string(index) + " is not an object");
        for (const char* key : {"id", "team", "source", "text"}) {
            if (!item.contains(key) || !item[key].is_string())
                raise(ErrorCode::SchemaError,
                      "idea #" + std::to_string(index) + " missing string field \"" + key + "\"");
        }
        Idea idea;
        idea.id = unicode::nfc(item["id"].get<std::string>());
        idea.team = unicode::nfc(item["team"].get<std::string>());
        idea.source = idea_source_from_string(item["source"].get<std::string>());
        idea.text = unicode::nfc(item["text"].get<std::string>());
        if (item.contains("chosen")) {
            if (!item["chosen"].is_boolean())
                raise(ErrorCode::SchemaError,
                      "idea \"" + idea.id + "\": \"chosen\" must be a boolean");
            idea.chosen = item["chosen"].get<bool>();
        }
        if (idea.id.empty())
            raise(ErrorCode::SchemaError, "idea #" + std::to_string(index) + " has empty id");
        if (idea.team.empty())
            raise(ErrorCode::SchemaError, "idea \"" + idea.id + "\" has empty team");
        if (is_blank(idea.text)) raise(ErrorCode::EmptyText, "idea \"" + idea.id + "\"");
        if (!seen_ids.insert(idea.id).second)
            raise(ErrorCode::DuplicateId, "idea id \"" + idea.id + "\"");
        set.ideas.push_back(std::move(idea));
    }
    return set;
}

IdeaSet load_ideas(const std::string& path) { return parse_ideas_json(read_file(path)); }

std::string ideas_to_json(const IdeaSet& set) {
    ordered_json doc;
    doc["problem_statement"] = set.problem_statement;
    doc["ideas"] = ordered_json::array();
    for (const Idea& idea : set.ideas) {
        ordered_json item;
        item["id"] = idea.id;
        item["team"] = idea.team;
        item["source"] = to_string(idea.source);
        item["text"] = idea.text;
        item["chosen"] = idea.chosen;
        doc["ideas"].push_back(std::move(item));
    }
    return doc.dump(2) + "\n";
}

void save_ideas(const IdeaSet& set, const std::string& path) {
    write_file(path, ideas_to_json(set));
}

// ---------------------------------------------------------------------------
// Ratings
// ---------------------------------------------------------------------------

RatingTable RatingTable::build(std::vector<RatingRecord> records, const IdeaSet& ideas) {
    RatingTable table;
    std::set<std::tuple<std::string, std::string, int, int>> seen;
    for (const RatingRecord& rec : records) {
        if (rec.value < 1 || rec.value > 5)
            raise(ErrorCode::ValueOutOfRange,
                  "rating " + std::to_string(rec.value) + " for idea \"" + rec.idea_id + "\"");
        if (rec.round.has_value() != (rec.group == RaterGroup::Machine))
            raise(ErrorCode::SchemaError,
                  "round must be present exactly for machine records (idea \"" + rec.idea_id +
                      "\", rater \"" + rec.rater_id + "\")");
        if (rec.round && *rec.round < 0)
            raise(ErrorCode::SchemaError, "negative round for idea \"" + rec.idea_id + "\"");
        if (ideas.find(rec.idea_id) == nullptr)
            raise(ErrorCode::UnknownIdea, "idea id \"" + rec.idea_id + "\"");
        auto key = std::make_tuple(rec.idea_id, rec.rater_id,
                                   static_cast<int>(rec.criterion), rec.round.value_or(-1));
        if (!seen.insert(key).second)
            raise(ErrorCode::DuplicateRecord,
                  "duplicate rating (idea \"" + rec.idea_id + "\", rater \"" + rec.rater_id +
                      "\", " + std::string(to_string(rec.criterion)) + ")");
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        const RatingRecord& rec = records[i];
        table.index_[{rec.idea_id, static_cast<int>(rec.group), static_cast<int>(rec.criterion)}]
            .push_back(i);
    }
    table.records_ = std::move(records);
    return table;
}

std::vector<int> RatingTable::values(std::string_view idea_id, RaterGroup group,
                                     Criterion criterion) const {
    std::vector<int> out;
    for (const RatingRecord* rec : find(idea_id, group, criterion)) out.push_back(rec->value);
    return out;
}

std::vector<const RatingRecord*> RatingTable::find(std::string_view idea_id, RaterGroup group,
                                                   Criterion criterion) const {
    std::vector<const RatingRecord*> out;
    auto it = index_.find({std::string(idea_id), static_cast<int>(group),
                           static_cast<int>(criterion)});
    if (it == index_.end()) return out;
    out.reserve(it->second.size());
    for (std::size_t i : it->second) out.push_back(&records_[i]);
    return out;
}

std::vector<std::string> RatingTable::rater_ids(RaterGroup group) const {
    std::set<std::string> ids;
    for (const RatingRecord& rec : records_) {
        if (rec.group == group) ids.insert(rec.rater_id);
    }
    return {ids.begin(), ids.end()};
}

bool RatingTable::has_group(RaterGroup group) const {
    return std::any_of(records_.begin(), records_.end(),
                       [group](const RatingRecord& r) { return r.group == group; });
}

RatingTable RatingTable::merge(const RatingTable& a, const RatingTable& b, const IdeaSet& ideas) {
    std::vector<RatingRecord> all = a.records_;
    all.insert(all.end(), b.records_.begin(), b.records_.end());
    return build(std::move(all), ideas);
}

RatingTable parse_ratings_csv(std::string_view text, const IdeaSet& ideas) {
    auto rows = csv::parse(text);
    if (rows.empty()) raise(ErrorCode::SchemaError, "ratings file is empty");
    const csv::Row expected_header = {"idea_id", "rater_id", "group", "criterion", "value", "round"};
    if (rows.front() != expected_header)
        raise(ErrorCode::SchemaError,
              "ratings header must be idea_id,rater_id,group,criterion,value,round");

    std::vector<RatingRecord> records;
    records.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const csv::Row& row = rows[r];
        if (row.size() != 6)
            raise(ErrorCode::SchemaError,
                  "ratings line " + std::to_string(r + 1) + ": expected 6 fields, got " +
                      std::to_string(row.size()));
        RatingRecord rec;
        rec.idea_id = unicode::nfc(row[0]);
        rec.rater_id = unicode::nfc(row[1]);
        rec.group = rater_group_from_string(row[2]);
        rec.criterion = criterion_from_string(row[3]);
        try {
            std::size_t pos = 0;
            rec.value = std::stoi(row[4], &pos);
            if (pos != row[4].size()) throw std::invalid_argument(row[4]);
        } catch (const std::exception&) {
            raise(ErrorCode::SchemaError,
                  "ratings line " + std::to_string(r + 1) + ": bad value \"" + row[4] + "\"");
        }
        if (!row[5].empty()) {
            try {
                std::size_t pos = 0;
                rec.round = std::stoi(row[5], &pos);
                if (pos != row[5].size()) throw std::invalid_argument(row[5]);
            } catch (const std::exception&) {
                raise(ErrorCode::SchemaError,
                      "ratings line " + std::to_string(r + 1) + ": bad round \"" + row[5] + "\"");
            }
        }
        records.push_back(std::move(rec));
    }
    return RatingTable::build(std::move(records), ideas);
}

RatingTable load_ratings(const std::string& path, const IdeaSet& ideas) {
    return parse_ratings_csv(read_file(path), ideas);
}

std::string ratings_to_csv(const RatingTable& table) {
    std::string out = "idea_id,rater_id,group,criterion,value,round\n";
    for (const RatingRecord& rec : table.records()) {
        csv::Row row = {rec.idea_id,
                        rec.rater_id,
                        std::string(to_string(rec.group)),
                        std::string(to_string(rec.criterion)),
                        std::to_string(rec.value),
                        rec.round ? std::to_string(*rec.round) : std::string()};
        out += csv::format_row(row);
    }
    return out;
}

void save_ratings(const RatingTable& table, const std::string& path) {
    write_file(path, ratings_to_csv(table));
}

// ---------------------------------------------------------------------------
// Descriptive statistics
// ---------------------------------------------------------------------------

long TeamSourceCounts::count(std::string_view team, IdeaSource source) const {
    for (const Row& row : rows) {
        if (row.team != team) continue;
        switch (source) {
        case IdeaSource::Human: return row.human;
        case IdeaSource::Llm: return row.llm;
        case IdeaSource::Collaborative: return row.collaborative;
        }
    }
    return 0;
}

long TeamSourceCounts::grand_total() const {
    long total = 0;
    for (const Row& row : rows) total += row.total();
    return total;
}

TeamSourceCounts count_by_team_source(const IdeaSet& ideas) {
    std::map<std::string, TeamSourceCounts::Row> by_team;
    for (const Idea& idea : ideas.ideas) {
        auto& row = by_team[idea.team];
        row.team = idea.team;
        switch (idea.source) {
        case IdeaSource::Human: ++row.human; break;
        case IdeaSource::Llm: ++row.llm; break;
        case IdeaSource::Collaborative: ++row.collaborative; break;
        }
    }
    TeamSourceCounts counts;
    counts.rows.reserve(by_team.size());
    for (auto& [_, row] : by_team) counts.rows.push_back(std::move(row));
    return counts;
}

std::size_t word_count(std::string_view text) {
    std::size_t count = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        bool ws = std::isspace(c) != 0;
        if (!ws && !in_word) ++count;
        in_word = !ws;
    }
    return count;
}

WordStats word_count_stats(const IdeaSet& ideas, std::optional<IdeaSource> source) {
    std::vector<double> counts;
    for (const Idea& idea : ideas.ideas) {
        if (source && idea.source != *source) continue;
        counts.push_back(static_cast<double>(word_count(idea.text)));
    }
    if (counts.empty())
        raise(ErrorCode::EmptyFilter,
              source ? "no ideas with source " + std::string(to_string(*source))
                     : std::string("idea set is empty"));
    return {stats::mean(counts), stats::sample_std(counts), counts.size()};
}

SelfRatingSummary summarize_self_ratings(const RatingTable& table, const IdeaSet& ideas) {
    if (table.empty()) raise(ErrorCode::EmptyTable, "no ratings to summarize");
    std::array<std::array<std::vector<double>, 3>, 3> buckets;
    for (const RatingRecord& rec : table.records()) {
        const Idea* idea = ideas.find(rec.idea_id);
        if (idea == nullptr) raise(ErrorCode::UnknownIdea, "idea id \"" + rec.idea_id + "\"");
        buckets[static_cast<std::size_t>(idea->source)][static_cast<std::size_t>(rec.criterion)]
            .push_back(static_cast<double>(rec.value));
    }
    SelfRatingSummary summary;
    for (IdeaSource source : kIdeaSources) {
        for (Criterion criterion : kCriteria) {
            const auto& values =
                buckets[static_cast<std::size_t>(source)][static_cast<std::size_t>(criterion)];
            if (values.empty()) continue;
            summary.at(source, criterion) = {stats::mean(values), stats::sample_std(values),
                                             values.size()};
        }
    }
    return summary;
}

} // namespace ideate::corpus
