#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const std::string cli = IDEATE_CLI_PATH;
const fs::path data_dir = IDEATE_DATA_DIR;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& tag) {
    static int serial = 0;
    const fs::path dir =
        fs::temp_directory_path() / ("ideate_cli_" + tag + "_" + std::to_string(++serial));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunResult run(const std::string& args, const std::string& extra_env = "") {
    const fs::path dir = fresh_dir("io");
    const fs::path out_file = dir / "stdout.txt";
    const fs::path err_file = dir / "stderr.txt";
    const std::string command = extra_env + cli + " " + args + " >" + out_file.string() + " 2>" +
                                err_file.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
}

std::string session_args() {
    return "--ideas " + (data_dir / "session" / "ideas.json").string();
}

std::string mock_provider_arg() {
    return "--provider mock:" + (data_dir / "session" / "mock_replies.json").string();
}

std::size_t line_count(const std::string& text) {
    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    return lines;
}

} // namespace

TEST_CASE("help and usage errors") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("validate --help").exit_code == 0);
    CHECK(run("").exit_code == 1);                    // a subcommand is required
    CHECK(run("validate --no-such-flag").exit_code == 1);
    CHECK(run("frobnicate").exit_code == 1);
}

TEST_CASE("validate accepts the bundled session") {
    const auto result = run("validate " + session_args() + " --ratings " +
                            (data_dir / "session" / "ratings.csv").string() + " --rubric " +
                            (data_dir / "rubric.json").string());
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("validation passed") != std::string::npos);
}

TEST_CASE("validate rejects a rating for an unknown idea with exit 2") {
    const fs::path dir = fresh_dir("badratings");
    const fs::path bad = dir / "ratings.csv";
    std::ofstream(bad) << "idea_id,rater_id,group,criterion,value,round\n"
                       << "no-such-idea,E1,expert,relevance,4,\n";
    const auto result = run("validate " + session_args() + " --ratings " + bad.string());
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("UnknownIdea") != std::string::npos);
}

TEST_CASE("agree rejects a rating for an unknown idea with exit 2") {
    const fs::path dir = fresh_dir("badagree");
    const fs::path bad = dir / "ratings.csv";
    std::ofstream(bad) << "idea_id,rater_id,group,criterion,value,round\n"
                       << "no-such-idea,E1,expert,relevance,4,\n";
    const auto result = run("agree " + session_args() + " --ratings " + bad.string() + " --out " +
                            (dir / "out").string());
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("UnknownIdea") != std::string::npos);
}

TEST_CASE("validate reports malformed json with exit 2") {
    const fs::path dir = fresh_dir("badjson");
    const fs::path bad = dir / "ideas.json";
    std::ofstream(bad) << "{not json";
    const auto result = run("validate --ideas " + bad.string());
    CHECK(result.exit_code == 2);
}

TEST_CASE("judge without a provider exits 3") {
    const fs::path dir = fresh_dir("noprov");
    const auto result =
        run("judge " + session_args() + " --rounds 1 --out " + (dir / "out").string());
    CHECK(result.exit_code == 3);
    CHECK(result.err.find("ProviderUnconfigured") != std::string::npos);
}

TEST_CASE("judge writes csv and justification outputs") {
    const fs::path dir = fresh_dir("judge");
    const auto result = run("judge " + session_args() + " " + mock_provider_arg() +
                            " --rounds 3 --out " + dir.string());
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("3 requested") != std::string::npos);

    const std::string csv_text = slurp(dir / "machine_ratings.csv");
    CHECK(line_count(csv_text) == 1 + 3 * 40); // header + rounds x ideas
    const std::string log_text = slurp(dir / "justifications.txt");
    CHECK(log_text.find("== round 3 ==") != std::string::npos);
}

TEST_CASE("judge output is byte-identical across runs") {
    const fs::path dir_a = fresh_dir("judge_a");
    const fs::path dir_b = fresh_dir("judge_b");
    const std::string base = "judge " + session_args() + " " + mock_provider_arg() + " --rounds 4";
    CHECK(run(base + " --out " + dir_a.string()).exit_code == 0);
    CHECK(run(base + " --out " + dir_b.string()).exit_code == 0);
    CHECK(slurp(dir_a / "machine_ratings.csv") == slurp(dir_b / "machine_ratings.csv"));
    CHECK(slurp(dir_a / "justifications.txt") == slurp(dir_b / "justifications.txt"));
}

TEST_CASE("lpa writes divergence signatures") {
    const fs::path dir = fresh_dir("lpa");
    const auto result = run("lpa " + session_args() + " --out " + dir.string());
    CHECK(result.exit_code == 0);
    const std::string csv_text = slurp(dir / "signatures.csv");
    CHECK(csv_text.starts_with("doc_id,term,weight,sign\n"));
    CHECK(csv_text.find("human") != std::string::npos);
    CHECK(line_count(csv_text) >= 3);
}

TEST_CASE("agree computes agreement statistics from human ratings") {
    const fs::path dir = fresh_dir("agree");
    const auto result = run("agree " + session_args() + " --ratings " +
                            (data_dir / "session" / "ratings.csv").string() + " --out " +
                            dir.string());
    CHECK(result.exit_code == 0);
    const std::string kappa_text = slurp(dir / "kappa.csv");
    CHECK(kappa_text.starts_with("criterion,group,n_subjects,n_raters,P_bar,P_e,kappa\n"));
    CHECK(kappa_text.find("relevance,expert,40,3,") != std::string::npos);
    CHECK(fs::exists(dir / "rankings.csv"));
    CHECK(fs::exists(dir / "correlations.csv"));
    CHECK(fs::exists(dir / "normality.csv"));
}

TEST_CASE("report builds the full document deterministically") {
    const fs::path judge_dir = fresh_dir("rep_judge");
    CHECK(run("judge " + session_args() + " " + mock_provider_arg() + " --rounds 3 --out " +
              judge_dir.string())
              .exit_code == 0);

    const std::string env = "SOURCE_DATE_EPOCH=1700000000 ";
    const fs::path dir_a = fresh_dir("rep_a");
    const fs::path dir_b = fresh_dir("rep_b");
    const std::string base = "report " + session_args() + " --ratings " +
                             (data_dir / "session" / "ratings.csv").string() + " --machine " +
                             (judge_dir / "machine_ratings.csv").string() + " --rubric " +
                             (data_dir / "rubric.json").string();
    const auto first = run(base + " --out " + dir_a.string(), env);
    CHECK(first.exit_code == 0);
    CHECK(run(base + " --out " + dir_b.string(), env).exit_code == 0);

    const std::string markdown = slurp(dir_a / "report.md");
    CHECK(markdown.find("## Idea counts") != std::string::npos);
    CHECK(markdown.find("## Inter-rater agreement") != std::string::npos);
    CHECK(markdown.find("## Divergence signatures") != std::string::npos);
    CHECK(markdown.find("## Chosen ideas") != std::string::npos);
    CHECK(markdown == slurp(dir_b / "report.md"));
    CHECK(slurp(dir_a / "kappa.csv") == slurp(dir_b / "kappa.csv"));
}

TEST_CASE("config file supplies defaults that flags override") {
    const fs::path dir = fresh_dir("config");
    const fs::path config = dir / "config.json";
    std::ofstream(config) << R"({"ideas": ")" << (data_dir / "session" / "ideas.json").string()
                          << R"(", "top_k": 2})";
    const auto result =
        run("lpa --config " + config.string() + " --out " + (dir / "out").string());
    CHECK(result.exit_code == 0);
    // top_k 2 from config: per-document signatures hold at most 2 rows each
    const std::string csv_text = slurp(dir / "out" / "signatures.csv");
    CHECK(line_count(csv_text) <= 1 + 2 * 2);

    // the explicit flag wins over the config value
    const auto override_result = run("lpa --config " + config.string() + " --top-k 1 --out " +
                                     (dir / "out2").string());
    CHECK(override_result.exit_code == 0);
    CHECK(line_count(slurp(dir / "out2" / "signatures.csv")) <= 1 + 1 * 2);
}
