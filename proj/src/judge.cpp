#include "ideate/judge.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ideate/csv.hpp"
#include "ideate/digest.hpp"
#include "ideate/errors.hpp"
#include "ideate/unicode.hpp"

namespace ideate::judge {

using corpus::Idea;
using corpus::IdeaSet;
using corpus::RatingRecord;
using corpus::RatingTable;
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

std::string display_name(Criterion criterion) {
    std::string name(corpus::to_string(criterion));
    name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    return name;
}

std::string escape_delim(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '|') out += "\\|";
        else out += c;
    }
    return out;
}

std::string single_line(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Rubric
// ---------------------------------------------------------------------------

Rubric default_rubric() {
    Rubric rubric;
    rubric.at(Criterion::Relevance) = {
        "How strongly the idea is connected with or appropriate for the objectives, "
        "requirements, or challenges of the problem statement.",
        {"The idea is unrelated to the problem statement and addresses none of its "
         "objectives or requirements.",
         "The idea touches the problem area only tangentially; most objectives and "
         "requirements are ignored.",
         "The idea is moderately connected to the problem statement, addressing some "
         "objectives while missing others.",
         "The idea is clearly appropriate for the problem statement and addresses most "
         "of its objectives and requirements.",
         "The idea is fully aligned with the problem statement, directly addressing its "
         "central objectives, requirements, and challenges."}};
    rubric.at(Criterion::Innovation) = {
        "How original and creative the idea is, breaking away from conventional or "
        "existing solutions.",
        {"The idea replicates a conventional, widely available solution with no creative "
         "departure.",
         "The idea is a minor variation on existing solutions; little originality is "
         "visible.",
         "The idea mixes familiar elements with some creative touches, partially "
         "breaking away from conventional solutions.",
         "The idea is largely original, clearly breaking away from conventional or "
         "existing solutions in at least one important way.",
         "The idea is strikingly original and creative, breaking away from conventional "
         "and existing solutions in its core approach."}};
    rubric.at(Criterion::Insightfulness) = {
        "How far the idea reflects a profound and nuanced understanding of the problem "
        "statement.",
        {"The idea shows no understanding of the problem statement beyond its surface "
         "wording.",
         "The idea reflects a superficial reading of the problem with little awareness "
         "of its underlying needs.",
         "The idea shows a working understanding of the problem statement, capturing "
         "some of its deeper needs.",
         "The idea reflects a solid, nuanced understanding of the problem statement and "
         "the needs behind it.",
         "The idea demonstrates a profound and nuanced understanding of the problem "
         "statement, surfacing needs and constraints that are not explicit."}};
    return rubric;
}

Rubric parse_rubric_json(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        raise(ErrorCode::SchemaError, std::string("rubric file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) raise(ErrorCode::SchemaError, "rubric file must be a JSON object");

    Rubric rubric;
    for (Criterion criterion : corpus::kCriteria) {
        const std::string key(corpus::to_string(criterion));
        if (!doc.contains(key) || !doc[key].is_object())
            raise(ErrorCode::SchemaError, "rubric missing criterion \"" + key + "\"");
        const auto& entry = doc[key];
        if (!entry.contains("definition") || !entry["definition"].is_string())
            raise(ErrorCode::SchemaError, "rubric criterion \"" + key + "\" needs a definition");
        CriterionRubric& cr = rubric.at(criterion);
        cr.definition = unicode::nfc(entry["definition"].get<std::string>());
        if (cr.definition.empty())
            raise(ErrorCode::SchemaError, "empty definition for criterion \"" + key + "\"");
        if (!entry.contains("anchors") || !entry["anchors"].is_object())
            raise(ErrorCode::SchemaError, "rubric criterion \"" + key + "\" needs anchors");
        for (int value = 1; value <= 5; ++value) {
            const std::string anchor_key = std::to_string(value);
            if (!entry["anchors"].contains(anchor_key) ||
                !entry["anchors"][anchor_key].is_string())
                raise(ErrorCode::SchemaError,
                      "rubric criterion \"" + key + "\" missing anchor " + anchor_key);
            std::string anchor = unicode::nfc(entry["anchors"][anchor_key].get<std::string>());
            if (anchor.empty())
                raise(ErrorCode::SchemaError,
                      "rubric criterion \"" + key + "\" has an empty anchor " + anchor_key);
            cr.anchors[static_cast<std::size_t>(value - 1)] = std::move(anchor);
        }
    }
    return rubric;
}

Rubric load_rubric(const std::string& path) { return parse_rubric_json(read_file(path)); }

std::string rubric_to_json(const Rubric& rubric) {
    ordered_json doc;
    for (Criterion criterion : corpus::kCriteria) {
        const CriterionRubric& cr = rubric.at(criterion);
        ordered_json entry;
        entry["definition"] = cr.definition;
        entry["anchors"] = ordered_json::object();
        for (int value = 1; value <= 5; ++value)
            entry["anchors"][std::to_string(value)] =
                cr.anchors[static_cast<std::size_t>(value - 1)];
        doc[std::string(corpus::to_string(criterion))] = std::move(entry);
    }
    return doc.dump(2) + "\n";
}

void save_rubric(const Rubric& rubric, const std::string& path) {
    write_file(path, rubric_to_json(rubric));
}

std::string rubric_digest(const Rubric& rubric) { return fnv1a64_hex(rubric_to_json(rubric)); }

std::string ideas_digest(const IdeaSet& ideas) {
    return fnv1a64_hex(corpus::ideas_to_json(ideas));
}

// ---------------------------------------------------------------------------
// Prompts and response parsing
// ---------------------------------------------------------------------------

PromptParts build_prompt_parts(const std::string& problem_statement, const Rubric& rubric,
                               const Idea& idea) {
    PromptParts parts;
    parts.system =
        "You are an impartial expert judge of ideation outputs. Rate one idea at a time, "
        "independently of any other idea or conversation, strictly following the rubric "
        "and the output format you are given.";

    std::ostringstream user;
    user << "Problem statement:\n" << escape_delim(problem_statement) << "\n\n";
    user << "Rating criteria:\n";
    for (Criterion criterion : corpus::kCriteria)
        user << "- " << display_name(criterion) << ": "
             << escape_delim(rubric.at(criterion).definition) << "\n";
    user << "\nScale anchors:\n";
    for (Criterion criterion : corpus::kCriteria) {
        const CriterionRubric& cr = rubric.at(criterion);
        user << "\n" << display_name(criterion) << "\n";
        for (int value = 1; value <= 5; ++value)
            user << "  " << value << ": "
                 << escape_delim(cr.anchors[static_cast<std::size_t>(value - 1)]) << "\n";
    }
    user << "\nIdea to evaluate:\n" << escape_delim(idea.text) << "\n\n";
    user << "Respond with exactly one line in this format and nothing else:\n";
    user << "R=<1-5>|I=<1-5>|S=<1-5>|J=<free text justification>";
    parts.user = user.str();
    return parts;
}

std::string build_prompt(const std::string& problem_statement, const Rubric& rubric,
                         const Idea& idea) {
    return build_prompt_parts(problem_statement, rubric, idea).full();
}

ParsedRating parse_response(std::string_view text) {
    static const std::regex kLine(
        R"(^\s*R\s*=\s*(\d{1,3})\s*\|\s*I\s*=\s*(\d{1,3})\s*\|\s*S\s*=\s*(\d{1,3})\s*\|\s*J\s*=\s*(.*?)\s*$)");
    std::string_view rest = text;
    while (!rest.empty()) {
        std::size_t eol = rest.find('\n');
        std::string_view raw = eol == std::string_view::npos ? rest : rest.substr(0, eol);
        rest = eol == std::string_view::npos ? std::string_view() : rest.substr(eol + 1);
        std::string line(raw);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::smatch match;
        if (!std::regex_match(line, match, kLine)) continue;
        ParsedRating rating;
        rating.relevance = std::stoi(match[1].str());
        rating.innovation = std::stoi(match[2].str());
        rating.insightfulness = std::stoi(match[3].str());
        rating.justification = match[4].str();
        for (int value : {rating.relevance, rating.innovation, rating.insightfulness}) {
            if (value < 1 || value > 5)
                raise(ErrorCode::ValueOutOfRange,
                      "score " + std::to_string(value) + " outside [1,5] in rating line");
        }
        return rating;
    }
    raise(ErrorCode::ParseError, "no R=|I=|S=|J= rating line in the reply");
}

// ---------------------------------------------------------------------------
// HTTP provider
// ---------------------------------------------------------------------------

HttpProvider::HttpProvider(ProviderConfig config) : config_(std::move(config)) {
    if (config_.endpoint_url.empty())
        raise(ErrorCode::ProviderUnconfigured, "no endpoint URL configured");
    if (config_.model_id.empty())
        raise(ErrorCode::ProviderUnconfigured, "no model id configured");
    static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch match;
    if (!std::regex_match(config_.endpoint_url, match, kUrl))
        raise(ErrorCode::ProviderUnconfigured,
              "endpoint URL must be http(s)://host[:port]/path, got " + config_.endpoint_url);
    scheme_host_ = match[1].str();
    path_ = match[2].matched ? match[2].str() : "/";
    if (!config_.api_key_env.empty()) {
        const char* key = std::getenv(config_.api_key_env.c_str());
        if (key == nullptr || *key == '\0')
            raise(ErrorCode::ProviderUnconfigured,
                  "environment variable " + config_.api_key_env + " is not set");
        api_key_ = key;
    }
}

std::string HttpProvider::complete(const ProviderCall& call) {
    httplib::Client client(scheme_host_);
    if (!client.is_valid())
        raise(ErrorCode::ProviderError, "cannot reach endpoint " + scheme_host_);
    client.set_connection_timeout(config_.timeout.count(), 0);
    client.set_read_timeout(config_.timeout.count(), 0);
    client.set_write_timeout(config_.timeout.count(), 0);
    if (!api_key_.empty()) client.set_bearer_token_auth(api_key_);

    ordered_json body;
    body["model"] = config_.model_id;
    body["temperature"] = config_.temperature;
    body["messages"] = ordered_json::array(
        {{{"role", "system"}, {"content", call.system_prompt}},
         {{"role", "user"}, {"content", call.user_prompt}}});

    auto result = client.Post(path_, body.dump(), "application/json");
    if (!result)
        raise(ErrorCode::ProviderError,
              "transport failure: " + httplib::to_string(result.error()));
    if (result->status != 200)
        raise(ErrorCode::ProviderError,
              "endpoint returned HTTP " + std::to_string(result->status));
    try {
        ordered_json reply = ordered_json::parse(result->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception& e) {
        raise(ErrorCode::ProviderError, std::string("malformed completion payload: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Mock provider
// ---------------------------------------------------------------------------

MockProvider::MockProvider(const std::string& script_path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(read_file(script_path));
    } catch (const ordered_json::parse_error& e) {
        raise(ErrorCode::SchemaError,
              "mock script " + script_path + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object())
        raise(ErrorCode::SchemaError, "mock script " + script_path + " must be a JSON object");

    auto read_score = [&](const ordered_json& node, const std::string& label) {
        if (!node.is_object())
            raise(ErrorCode::SchemaError, "mock score for " + label + " must be an object");
        ScriptedScore score;
        score.relevance = node.value("relevance", score.relevance);
        score.innovation = node.value("innovation", score.innovation);
        score.insightfulness = node.value("insightfulness", score.insightfulness);
        score.justification = node.value("justification", score.justification);
        return score;
    };

    if (doc.contains("default")) default_score_ = read_score(doc["default"], "default");
    if (doc.contains("scores")) {
        if (!doc["scores"].is_object())
            raise(ErrorCode::SchemaError, "mock \"scores\" must map idea ids to score objects");
        for (const auto& [idea_id, node] : doc["scores"].items())
            scores_[idea_id] = read_score(node, idea_id);
    }
    if (doc.contains("fail_rounds")) {
        for (const auto& value : doc["fail_rounds"]) fail_rounds_.insert(value.get<int>());
    }
    if (doc.contains("flaky")) {
        for (const auto& [idea_id, count] : doc["flaky"].items())
            flaky_[idea_id] = count.get<int>();
    }
    jitter_ = doc.value("jitter", 0);
    preamble_ = doc.value("preamble", std::string());
}

MockProvider::ScriptedScore MockProvider::score_for(const ProviderCall& call) const {
    auto it = scores_.find(call.idea_id);
    ScriptedScore score = it != scores_.end() ? it->second : default_score_;
    if (jitter_ > 0) {
        const int span = 2 * jitter_ + 1;
        int* fields[3] = {&score.relevance, &score.innovation, &score.insightfulness};
        for (int c = 0; c < 3; ++c) {
            std::string key =
                call.idea_id + "|" + std::to_string(call.round_index) + "|" + std::to_string(c);
            int delta = static_cast<int>(fnv1a64(key) % static_cast<std::uint64_t>(span)) - jitter_;
            *fields[c] = std::clamp(*fields[c] + delta, 1, 5);
        }
    }
    return score;
}

std::string MockProvider::complete(const ProviderCall& call) {
    if (auto it = flaky_.find(call.idea_id); it != flaky_.end()) {
        std::lock_guard<std::mutex> lock(mutex_);
        int& attempts = attempts_[{call.round_index, call.idea_id}];
        ++attempts;
        if (attempts <= it->second)
            raise(ErrorCode::ProviderError,
                  "scripted transport failure for idea \"" + call.idea_id + "\"");
    }
    if (fail_rounds_.contains(call.round_index))
        return "I cannot provide ratings in the requested format for this round.";
    ScriptedScore score = score_for(call);
    std::ostringstream reply;
    reply << preamble_ << "R=" << score.relevance << "|I=" << score.innovation
          << "|S=" << score.insightfulness << "|J=" << score.justification;
    return reply.str();
}

std::unique_ptr<RatingProvider> make_provider(const ProviderConfig& config) {
    if (config.endpoint_url.empty())
        raise(ErrorCode::ProviderUnconfigured, "no provider endpoint configured");
    if (config.endpoint_url.starts_with("mock:"))
        return std::make_unique<MockProvider>(config.endpoint_url.substr(5));
    return std::make_unique<HttpProvider>(config);
}

// ---------------------------------------------------------------------------
// Evaluation rounds
// ---------------------------------------------------------------------------

RoundResult evaluate_round(const IdeaSet& ideas, const Rubric& rubric, RatingProvider& provider,
                           int round_index, const ProviderConfig& config) {
    RoundResult round;
    round.round_index = round_index;
    for (const Idea& idea : ideas.ideas) {
        PromptParts prompt = build_prompt_parts(ideas.problem_statement, rubric, idea);
        ProviderCall call{round_index, idea.id, prompt.system, prompt.user};
        std::string failure;
        bool rated = false;
        for (int attempt = 0; attempt <= config.max_retries_per_request; ++attempt) {
            try {
                ParsedRating rating = parse_response(provider.complete(call));
                round.scores.push_back({idea.id,
                                        {rating.relevance, rating.innovation,
                                         rating.insightfulness},
                                        rating.justification});
                rated = true;
                break;
            } catch (const Error& e) {
                if (e.code() == ErrorCode::ProviderError || e.code() == ErrorCode::ParseError ||
                    e.code() == ErrorCode::ValueOutOfRange) {
                    failure = e.what();
                    continue;
                }
                throw; // configuration problems are not retryable
            }
        }
        if (!rated) {
            round.succeeded = false;
            round.failure_reason = "idea \"" + idea.id + "\": " + failure;
            return round;
        }
    }
    round.succeeded = true;
    return round;
}

JudgeRunResult run_judge(const IdeaSet& ideas, const Rubric& rubric, RatingProvider& provider,
                         int n_rounds, const ProviderConfig& config) {
    if (n_rounds < 1)
        raise(ErrorCode::ValueOutOfRange, "n_rounds must be >= 1, got " + std::to_string(n_rounds));
    if (ideas.ideas.empty()) raise(ErrorCode::EmptyTable, "no ideas to judge");
    const int workers =
        std::max(1, std::min(config.max_parallel, n_rounds));

    JudgeRunResult result;
    result.requested_rounds = n_rounds;
    result.ideas_digest = ideas_digest(ideas);
    result.rubric_digest = rubric_digest(rubric);
    result.rounds.resize(static_cast<std::size_t>(n_rounds));

    // One worker drives one round at a time, so at most max_parallel provider
    // requests are ever in flight. Rounds land in their own slots; ordering
    // is by round index regardless of completion order.
    std::atomic<int> next_round{1};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto work = [&] {
        while (true) {
            const int round_index = next_round.fetch_add(1);
            if (round_index > n_rounds) return;
            try {
                result.rounds[static_cast<std::size_t>(round_index - 1)] =
                    evaluate_round(ideas, rubric, provider, round_index, config);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) threads.emplace_back(work);
        for (std::thread& t : threads) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return result;
}

// ---------------------------------------------------------------------------
// Outputs
// ---------------------------------------------------------------------------

std::string ratings_csv_text(const JudgeRunResult& result) {
    std::string out = "round,idea_id,relevance,innovation,insightfulness\n";
    for (const RoundResult& round : result.rounds) {
        if (!round.succeeded) continue;
        for (const IdeaScore& score : round.scores) {
            out += csv::format_row({std::to_string(round.round_index), score.idea_id,
                                    std::to_string(score.values[0]),
                                    std::to_string(score.values[1]),
                                    std::to_string(score.values[2])});
        }
    }
    return out;
}

std::string justifications_text(const JudgeRunResult& result) {
    std::string out;
    for (const RoundResult& round : result.rounds) {
        if (!round.succeeded) continue;
        out += "== round " + std::to_string(round.round_index) + " ==\n";
        for (const IdeaScore& score : round.scores)
            out += score.idea_id + ": " + single_line(score.justification) + "\n";
        out += "\n";
    }
    for (const RoundResult& round : result.rounds) {
        if (round.succeeded) continue;
        out += "# round " + std::to_string(round.round_index) +
               " failed: " + single_line(round.failure_reason) + "\n";
    }
    return out;
}

JudgeOutputPaths write_outputs(const JudgeRunResult& result, const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) raise(ErrorCode::IoError, "cannot create " + out_dir + ": " + ec.message());
    JudgeOutputPaths paths;
    paths.ratings_csv = (std::filesystem::path(out_dir) / "machine_ratings.csv").string();
    paths.justifications_log = (std::filesystem::path(out_dir) / "justifications.txt").string();
    write_file(paths.ratings_csv, ratings_csv_text(result));
    write_file(paths.justifications_log, justifications_text(result));
    return paths;
}

RatingTable machine_ratings(const JudgeRunResult& result, const IdeaSet& ideas) {
    std::vector<RatingRecord> records;
    bool any = false;
    for (const RoundResult& round : result.rounds) {
        if (!round.succeeded) continue;
        any = true;
        const std::string rater = "machine-r" + std::to_string(round.round_index);
        for (const IdeaScore& score : round.scores) {
            for (Criterion criterion : corpus::kCriteria) {
                RatingRecord record;
                record.idea_id = score.idea_id;
                record.rater_id = rater;
                record.group = corpus::RaterGroup::Machine;
                record.criterion = criterion;
                record.value = score.values[static_cast<std::size_t>(criterion)];
                record.round = round.round_index;
                records.push_back(std::move(record));
            }
        }
    }
    if (!any) raise(ErrorCode::NoSuccessfulRounds, "every judge round failed");
    return RatingTable::build(std::move(records), ideas);
}

RatingTable load_judge_csv(const std::string& path, const IdeaSet& ideas) {
    auto rows = csv::parse(read_file(path));
    if (rows.empty()) raise(ErrorCode::SchemaError, "judge CSV is empty");
    const csv::Row expected_header = {"round", "idea_id", "relevance", "innovation",
                                      "insightfulness"};
    if (rows.front() != expected_header)
        raise(ErrorCode::SchemaError,
              "judge CSV header must be round,idea_id,relevance,innovation,insightfulness");
    std::vector<RatingRecord> records;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const csv::Row& row = rows[r];
        if (row.size() != 5)
            raise(ErrorCode::SchemaError, "judge CSV line " + std::to_string(r + 1) +
                                              ": expected 5 fields, got " +
                                              std::to_string(row.size()));
        int round_index = 0;
        std::array<int, 3> values{};
        try {
            round_index = std::stoi(row[0]);
            for (int c = 0; c < 3; ++c)
                values[static_cast<std::size_t>(c)] = std::stoi(row[static_cast<std::size_t>(c + 2)]);
        } catch (const std::exception&) {
            raise(ErrorCode::SchemaError,
                  "judge CSV line " + std::to_string(r + 1) + ": non-numeric field");
        }
        for (Criterion criterion : corpus::kCriteria) {
            RatingRecord record;
            record.idea_id = row[1];
            record.rater_id = "machine-r" + std::to_string(round_index);
            record.group = corpus::RaterGroup::Machine;
            record.criterion = criterion;
            record.value = values[static_cast<std::size_t>(criterion)];
            record.round = round_index;
            records.push_back(std::move(record));
        }
    }
    return RatingTable::build(std::move(records), ideas);
}

} // namespace ideate::judge
