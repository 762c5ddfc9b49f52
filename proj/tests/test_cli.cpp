// End-to-end exercises of the clicklab binary: synth -> ingest -> pipeline,
// exit codes, and output determinism on a desk-scale corpus.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const std::string kBin = CLICKLAB_BIN;

int run(const std::string& args) {
    std::string command = kBin + " " + args + " 2>/dev/null";
    int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream file(path, std::ios::binary);
    REQUIRE(file.is_open());
    return std::string((std::istreambuf_iterator<char>(file)),
                       std::istreambuf_iterator<char>());
}

// Relative path -> file contents for every regular file under root.
std::map<std::string, std::string> tree_contents(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        out[fs::relative(entry.path(), root).string()] = slurp(entry.path());
    }
    return out;
}

}  // namespace

TEST_CASE("synth, ingest, and pipeline run end to end") {
    fs::path base = fresh_dir("clicklab_cli_e2e");
    fs::path dumps = base / "dumps";
    fs::path cfg_path = base / "config.json";

    std::ofstream cfg(cfg_path);
    cfg << R"({"n_users": 120, "n_days": 2, "sessions_per_user_day": 3.0,
               "video_session_fraction": 0.6, "signal_strength": 0.8, "seed": 5})";
    cfg.close();

    REQUIRE(run("synth --config " + cfg_path.string() + " --out " + dumps.string()) == 0);
    CHECK(fs::exists(dumps / "day_000.tsv"));
    CHECK(fs::exists(dumps / "manifest.json"));
    CHECK(fs::exists(dumps / "run.json"));

    fs::path archive = base / "archive.tsv";
    fs::path prune = base / "prune.json";
    REQUIRE(run("ingest " + dumps.string() + " --out " + archive.string() +
                " --prune-report " + prune.string()) == 0);
    CHECK(fs::exists(archive));
    CHECK(fs::exists(prune));
    CHECK(slurp(prune).find("extra_const_0") != std::string::npos);

    fs::path out1 = base / "out1";
    REQUIRE(run("--seed 3 --folds 5 --learners naive_bayes,c45 pipeline --archive " +
                archive.string() + " --out-dir " + out1.string()) == 0);
    for (const char* name :
         {"sessions.jsonl", "graph_edges.csv", "graph_nodes.csv", "views.tsv",
          "dropoff.csv", "rankings.csv", "consensus.json", "summary.csv", "run.json",
          "eval_naive_bayes_multiclass5.json", "eval_c45_binary_early.json"}) {
        CHECK(fs::exists(out1 / name));
    }

    SUBCASE("pipeline output is reproducible byte for byte") {
        fs::path out2 = base / "out2";
        REQUIRE(run("--seed 3 --folds 5 --learners naive_bayes,c45 pipeline --archive " +
                    archive.string() + " --out-dir " + out2.string()) == 0);
        CHECK(tree_contents(out1) == tree_contents(out2));
    }

    SUBCASE("ingest is idempotent byte for byte") {
        fs::path archive2 = base / "archive2.tsv";
        REQUIRE(run("ingest " + dumps.string() + " --out " + archive2.string()) == 0);
        CHECK(slurp(archive) == slurp(archive2));
    }

    SUBCASE("single commands work off the same archive") {
        fs::path sessions = base / "sessions.jsonl";
        CHECK(run("sessionize " + archive.string() + " --out " + sessions.string()) == 0);
        CHECK(fs::exists(sessions));

        fs::path views = base / "views.tsv";
        CHECK(run("label " + archive.string() + " --out " + views.string()) == 0);
        fs::path ranks = base / "ranks";
        CHECK(run("rank " + views.string() + " --out-dir " + ranks.string()) == 0);
        CHECK(fs::exists(ranks / "rankings.csv"));
        CHECK(fs::exists(ranks / "consensus.json"));

        fs::path model = base / "model.json";
        CHECK(run("train " + views.string() + " --learner c45 --model-task binary --out " +
                  model.string()) == 0);
        CHECK(slurp(model).find("\"learner\": \"c45\"") != std::string::npos);

        fs::path graph_dir = base / "graph";
        CHECK(run("graph " + archive.string() + " --out-dir " + graph_dir.string() +
                  " --top-k 4") == 0);
        std::string nodes = slurp(graph_dir / "graph_nodes.csv");
        CHECK(std::count(nodes.begin(), nodes.end(), '\n') == 5);  // header + 4
    }

    fs::remove_all(base);
}

TEST_CASE("failure modes exit nonzero") {
    fs::path base = fresh_dir("clicklab_cli_fail");

    SUBCASE("empty ingest directory") {
        fs::path empty = base / "empty";
        fs::create_directories(empty);
        CHECK(run("ingest " + empty.string() + " --out " + (base / "a.tsv").string()) != 0);
    }

    SUBCASE("dump with a missing required column fails that file") {
        fs::path dumps = base / "dumps";
        fs::create_directories(dumps);
        std::ofstream bad(dumps / "bad.tsv");
        bad << "not_a_real_header\tanother\n1\t2\n";
        bad.close();
        CHECK(run("ingest " + dumps.string() + " --out " + (base / "a.tsv").string()) != 0);
    }

    SUBCASE("a mix of good and bad dumps fails overall but keeps good events") {
        fs::path dumps = base / "mixed";
        fs::create_directories(dumps);
        fs::path good_dir = base / "good_src";
        std::ofstream cfg(base / "cfg.json");
        cfg << R"({"n_users": 10, "n_days": 1, "seed": 2})";
        cfg.close();
        REQUIRE(run("synth --config " + (base / "cfg.json").string() + " --out " +
                    good_dir.string()) == 0);
        fs::copy_file(good_dir / "day_000.tsv", dumps / "a_good.tsv");
        std::ofstream bad(dumps / "b_bad.tsv");
        bad << "wrong\theader\n1\t2\n";
        bad.close();

        fs::path archive = base / "mixed.tsv";
        CHECK(run("ingest " + dumps.string() + " --out " + archive.string()) != 0);
        std::string contents = slurp(archive);
        CHECK(std::count(contents.begin(), contents.end(), '\n') > 1);
    }

    SUBCASE("a pipeline over an archive without video clicks stops at labeling") {
        std::ofstream cfg(base / "novideo.json");
        cfg << R"({"n_users": 15, "n_days": 1, "video_session_fraction": 0.0, "seed": 3})";
        cfg.close();
        fs::path dumps = base / "novideo_dumps";
        REQUIRE(run("synth --config " + (base / "novideo.json").string() + " --out " +
                    dumps.string()) == 0);
        fs::path archive = base / "novideo.tsv";
        REQUIRE(run("ingest " + dumps.string() + " --out " + archive.string()) == 0);
        fs::path out = base / "novideo_out";
        CHECK(run("pipeline --archive " + archive.string() + " --out-dir " +
                  out.string()) != 0);
        CHECK(fs::exists(out / "sessions.jsonl"));  // earlier stages retained
        CHECK(slurp(out / "run.json").find("incomplete_stage") != std::string::npos);
    }

    SUBCASE("invalid synth config reports the field") {
        fs::path cfg_path = base / "bad.json";
        std::ofstream cfg(cfg_path);
        cfg << R"({"categories": [{"name": "X", "survival": [1.0, 0.5, 0.9, 0.2, 0.1]}]})";
        cfg.close();
        CHECK(run("synth --config " + cfg_path.string() + " --out " +
                  (base / "out").string()) != 0);
    }

    fs::remove_all(base);
}

TEST_CASE("seed changes synth bytes but keeps the schema") {
    fs::path base = fresh_dir("clicklab_cli_seed");
    fs::path a = base / "a";
    fs::path b = base / "b";
    std::ofstream cfg(base / "cfg.json");
    cfg << R"({"n_users": 20, "n_days": 1, "seed": 1})";
    cfg.close();
    REQUIRE(run("synth --config " + (base / "cfg.json").string() + " --out " +
                a.string()) == 0);
    REQUIRE(run("--seed 2 synth --config " + (base / "cfg.json").string() + " --out " +
                b.string()) == 0);
    std::string file_a = slurp(a / "day_000.tsv");
    std::string file_b = slurp(b / "day_000.tsv");
    CHECK(file_a != file_b);
    CHECK(file_a.substr(0, file_a.find('\n')) == file_b.substr(0, file_b.find('\n')));
    fs::remove_all(base);
}
