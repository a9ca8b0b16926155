#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_name() { return fs::temp_directory_path() / ("hem_cli_" + std::to_string(::getpid())); }

const fs::path& scratch() {
    static const fs::path dir = [] {
        auto d = scratch_name();
        fs::create_directories(d);
        std::atexit([] {
            std::error_code ec;
            fs::remove_all(scratch_name(), ec);
        });
        return d;
    }();
    return dir;
}

Run hem(const std::string& args) {
    const char* exe = std::getenv("HEM_CLI");
    REQUIRE_MESSAGE(exe != nullptr, "HEM_CLI must point at the hem binary");
    const auto errf = scratch() / "stderr.txt";
    const std::string cmd = std::string("\"") + exe + "\" " + args + " 2>\"" + errf.string() + "\"";
    Run r;
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(errf);
    return r;
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

bool has_line_prefix(const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (line.rfind(prefix, 0) == 0) return true;
    return false;
}

std::string table(const std::string& name) { return std::string(HEM_DATA_DIR) + "/tables/" + name; }

} // namespace

TEST_CASE("catalog list") {
    const auto r = hem("catalog list");
    CHECK(r.code == 0);
    CHECK(has_line_prefix(r.out, "name\tell\tbkk"));
    CHECK(has_line_prefix(r.out, "flag-A2\t3\t4\t"));
    CHECK(has_line_prefix(r.out, "flag-B2\t4\t12\t"));
    CHECK(has_line_prefix(r.out, "flag-A3\t6\t80\t"));
    CHECK(has_line_prefix(r.out, "wallach-row15\t3\t4\t"));
    CHECK(has_line_prefix(r.out, "berger-h-1\t4\t14\t"));
}

TEST_CASE("catalog export feeds --params") {
    const auto e = hem("catalog export flag-B2 -o " + path("b2.json"));
    CHECK(e.code == 0);
    const auto j = nlohmann::json::parse(slurp(path("b2.json")));
    CHECK(j.at("tool") == "hem");
    CHECK(j.contains("seed"));
    CHECK(j.contains("input_hash"));
    CHECK(j.at("space").at("params").at("ell") == 4);

    const auto b = hem("bkk --params " + path("b2.json"));
    CHECK(b.code == 0);
    CHECK(b.out.find("MV=12") != std::string::npos);
}

TEST_CASE("build") {
    const auto r = hem("build --space flag-A2 --form raw");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("form") == "raw");
    CHECK(j.at("system").at("ell") == 3);
    CHECK(j.at("system").at("equations").size() == 3);
}

TEST_CASE("bkk") {
    CHECK(hem("bkk --space flag-A3").out == "flag-A3: MV=80\n");
    CHECK(hem("bkk --space wallach-row15").out == "wallach-row15: MV=4\n");

    // generic parameters for four summands: every L_ijk nonzero
    nlohmann::json p{{"ell", 4}, {"b", {1, 1, 1, 1}}, {"d", {2, 3, 4, 5}}, {"L", nlohmann::json::array()}};
    for (int i = 1; i <= 4; ++i)
        for (int j = i; j <= 4; ++j)
            for (int k = j; k <= 4; ++k) p["L"].push_back({{"ijk", {i, j, k}}, {"value", std::to_string(1 + i + j + k)}});
    std::ofstream(path("generic4.json")) << p.dump();
    const auto g = hem("bkk --params " + path("generic4.json"));
    CHECK(g.code == 0);
    CHECK(g.out == "generic4: MV=63, Delannoy D_3=63, agree\n");
}

TEST_CASE("solve and classify B2") {
    const auto a = hem("solve --space flag-B2 --seed 7 -o " + path("b2a.json") + " --tsv " + path("b2a.tsv"));
    CHECK(a.code == 0);
    const auto b = hem("solve --space flag-B2 --seed 7 --threads 4 -o " + path("b2b.json"));
    CHECK(b.code == 0);
    CHECK(slurp(path("b2a.json")) == slurp(path("b2b.json")));

    const auto j = nlohmann::json::parse(slurp(path("b2a.json")));
    CHECK(j.at("seed") == 7);
    CHECK(j.at("version") == HEM_VERSION);
    long torus = 0, real = 0, positive = 0;
    for (const auto& s : j.at("report").at("solutions")) {
        torus += s.at("in_torus").get<bool>();
        real += s.at("real").get<bool>();
        positive += s.at("positive").get<bool>();
    }
    CHECK(torus == 10);
    CHECK(real == 6);
    CHECK(positive == 6);
    CHECK(slurp(path("b2a.tsv")).rfind("# hem ", 0) == 0);

    const auto c = hem("classify --report " + path("b2a.json"));
    CHECK(c.code == 0);
    CHECK(c.out.find("seed=7") != std::string::npos);
    CHECK(c.out.find("flag-B2: 2 classes") != std::string::npos);
    CHECK(c.out.find("class\torbit_size\tvolume\trepresentative\n") != std::string::npos);
}

TEST_CASE("classify from a space") {
    const auto c = hem("classify --space flag-A2");
    CHECK(c.code == 0);
    CHECK(c.out.find("flag-A2: 2 classes, group order 6") != std::string::npos);
    CHECK(hem("classify --space flag-A2").out == c.out);
}

TEST_CASE("discriminant") {
    const auto r = hem("discriminant --space wallach-row6");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("linear_factors_nonzero") == true);
    CHECK(j.at("space") == "wallach-row6");
}

TEST_CASE("verify") {
    const auto r = hem("verify --space flag-C3 --table " + table("c3.csv"));
    CHECK(r.code == 0);
    int rows = 0;
    std::istringstream in(r.out);
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#' || line.rfind("row", 0) == 0) continue;
        ++rows;
        CHECK(line.find("\t1\t") != std::string::npos);
    }
    CHECK(rows == 4);

    // a perturbed row is rejected
    std::istringstream src(slurp(table("c3.csv")));
    std::ofstream bad(path("c3_bad.csv"));
    int data = 0;
    for (std::string line; std::getline(src, line);) {
        if (!line.empty() && line[0] != '#' && line[0] != 'e' && ++data == 2) line = "0.6" + line.substr(line.find(','));
        bad << line << '\n';
    }
    bad.close();
    CHECK(hem("verify --space flag-C3 --table " + path("c3_bad.csv")).code == 1);
}

TEST_CASE("errors and exit codes") {
    auto r = hem("bkk --params " + path("missing.json"));
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error:", 0) == 0);

    std::ofstream(path("broken.json")) << "{ not json";
    r = hem("bkk --params " + path("broken.json"));
    CHECK(r.code == 1);
    CHECK(r.err.find("malformed") != std::string::npos);

    r = hem("solve --space no-such-space");
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error:", 0) == 0);

    r = hem("verify --space flag-A3 --table " + table("c3.csv"));
    CHECK(r.code == 1);

    // long targets need the flag
    r = hem("solve --space flag-B3");
    CHECK(r.code == 1);
    CHECK(r.err.find("--allow-long") != std::string::npos);

    // failed paths: partial report written, exit 2
    r = hem("solve --space flag-A3 --min-step 0.02 -o " + path("starved.json"));
    CHECK(r.code == 2);
    CHECK(fs::exists(path("starved.json")));
}
