#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(RAXCODE_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Minimal CSV split (fields never contain commas).
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        rows.push_back(std::move(fields));
    }
    return rows;
}

struct Workspace {
    fs::path dir;

    Workspace() {
        dir = fs::temp_directory_path() /
              ("raxcode_cli_test_" + std::to_string(::getpid()) + "_" +
               std::to_string(counter()++));
        fs::create_directories(dir);
    }
    ~Workspace() { std::error_code ec; fs::remove_all(dir, ec); }

    static int& counter() {
        static int c = 0;
        return c;
    }

    fs::path write(const std::string& name, const std::string& text) {
        const fs::path p = dir / name;
        std::ofstream f(p, std::ios::binary);
        f << text;
        return p;
    }
};

const char* kIdentityChannel = "dmc 1 2 2\n1 0\n0 1\n";

std::string identity_config(const fs::path& channel, const char* extra = "") {
    std::ostringstream ss;
    ss << "{\n"
       << "  \"channel\": \"" << channel.string() << "\",\n"
       << "  \"profile\": [ { \"points\": [ {\"rate\": 0.2, \"dist\": [0.5, 0.5]},\n"
       << "                                  {\"rate\": 0.9, \"dist\": [0.5, 0.5]} ] } ],\n"
       << "  \"region\": [[0]],\n"
       << "  \"bound\": {\"n_list\": [10, 20]},\n"
       << "  \"simulation\": {\"n_list\": [6], \"trials\": 1500, \"seed\": 21},\n"
       << "  \"sweep\": {\"rates\": [0.1, 0.2], \"n_list\": [10, 100, 1000],\n"
       << "              \"out_rates\": [0.9], \"dist\": [0.5, 0.5]}\n"
       << extra << "}\n";
    return ss.str();
}

}  // namespace

TEST_CASE("cli region: verdicts and schema") {
    Workspace ws;
    const auto ch = ws.write("id.dmc", kIdentityChannel);
    const auto cfg = ws.write("cfg.json", identity_config(ch));
    const auto r = run_cli("region --config " + cfg.string());
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"rates", "indices", "in_region", "achievable",
                                              "violated_subsets"});
    CHECK(rows[1][2] == "true");   // 0.2 in region
    CHECK(rows[1][3] == "true");   // 0.2 achievable
    CHECK(rows[2][2] == "false");  // 0.9 out of region
    CHECK(rows[2][3] == "false");  // 0.9 above capacity
    CHECK(rows[2][4] == "{}");     // violated at the empty subset
}

TEST_CASE("cli: malformed channel file exits 2 naming the row") {
    Workspace ws;
    const auto ch = ws.write("bad.dmc", "dmc 1 2 2\n0.9 0.08\n0 1\n");
    const auto cfg = ws.write("cfg.json", identity_config(ch));
    const auto r = run_cli("region --config " + cfg.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("row 1") != std::string::npos);
}

TEST_CASE("cli: missing config exits 2") {
    const auto r = run_cli("region --config /nonexistent/cfg.json");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli bound: identity channel value and sweep consistency") {
    Workspace ws;
    const auto ch = ws.write("id.dmc", kIdentityChannel);
    const auto cfg = ws.write("cfg.json", identity_config(ch));

    const auto b = run_cli("bound --config " + cfg.string());
    CHECK(b.exit_code == 0);
    const auto brows = parse_csv(b.output);
    REQUIRE(brows.size() == 3);
    CHECK(brows[0] == std::vector<std::string>{"n", "log_p_es_upper", "p_es_upper", "trivial",
                                               "dominant_branch"});
    const double p10 = std::stod(brows[1][2]);
    CHECK(p10 == doctest::Approx(2.0 * std::exp(-10.0 * (std::log(2.0) - 0.2))).epsilon(1e-6));

    const auto s = run_cli("sweep --config " + cfg.string());
    CHECK(s.exit_code == 0);
    const auto srows = parse_csv(s.output);
    REQUIRE(srows.size() == 7);  // header + 2 rates x 3 lengths
    // The rate-0.2 sweep rows reproduce the bound table at matching lengths.
    for (size_t i = 1; i < srows.size(); ++i) {
        if (srows[i][1] != srows[4][1]) continue;  // rate 0.2 block starts at row 4
        if (srows[i][0] == "10") CHECK(std::stod(srows[i][3]) == std::stod(brows[1][1]));
    }
    // Log bound decreases along each rate block.
    CHECK(std::stod(srows[2][3]) < std::stod(srows[1][3]));
    CHECK(std::stod(srows[3][3]) < std::stod(srows[2][3]));
}

TEST_CASE("cli simulate: byte-identical reruns and thread independence") {
    Workspace ws;
    const auto ch = ws.write("id.dmc", kIdentityChannel);
    const auto cfg = ws.write("cfg.json", identity_config(ch));
    const auto out1 = ws.dir / "a.csv";
    const auto out2 = ws.dir / "b.csv";
    const auto out4 = ws.dir / "c.csv";

    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + out1.string() +
                  " --threads 1").exit_code == 0);
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + out2.string() +
                  " --threads 1").exit_code == 0);
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + out4.string() +
                  " --threads 4").exit_code == 0);
    const std::string a = slurp(out1);
    CHECK(a == slurp(out2));
    CHECK(a == slurp(out4));
    CHECK(parse_csv(a)[0] ==
          std::vector<std::string>{"n", "condition", "messages", "in_region", "trials", "errors",
                                   "freq", "wilson_radius_95", "empirical_p_es", "bound_log_p",
                                   "bound_p", "pass", "exact_prob"});

    // A different seed produces different counts somewhere in the table.
    const auto out5 = ws.dir / "d.csv";
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + out5.string() +
                  " --seed 987").exit_code == 0);
    CHECK(a != slurp(out5));
}

TEST_CASE("cli: csv and json encode identical values") {
    Workspace ws;
    const auto ch = ws.write("id.dmc", kIdentityChannel);
    const auto cfg = ws.write("cfg.json", identity_config(ch));

    const auto csv = run_cli("bound --config " + cfg.string() + " --format csv");
    const auto js = run_cli("bound --config " + cfg.string() + " --format json");
    CHECK(csv.exit_code == 0);
    CHECK(js.exit_code == 0);

    const auto rows = parse_csv(csv.output);
    const auto arr = nlohmann::json::parse(js.output);
    REQUIRE(arr.size() == rows.size() - 1);
    for (size_t i = 0; i < arr.size(); ++i) {
        CHECK(arr[i]["n"].get<uint64_t>() == std::stoull(rows[i + 1][0]));
        CHECK(arr[i]["log_p_es_upper"].get<double>() ==
              doctest::Approx(std::stod(rows[i + 1][1])).epsilon(1e-12));
        CHECK(arr[i]["p_es_upper"].get<double>() ==
              doctest::Approx(std::stod(rows[i + 1][2])).epsilon(1e-12));
    }
}

TEST_CASE("cli simulate: exact oracle column and budget exit code") {
    Workspace ws;
    const auto ch = ws.write("id.dmc", kIdentityChannel);
    // Region covers the whole grid: no threshold needed, enumeration tiny.
    std::ostringstream cfg1;
    cfg1 << "{ \"channel\": \"" << ch.string() << "\",\n"
         << "  \"profile\": [ { \"points\": [ {\"rate\": 0.75, \"dist\": [0.5, 0.5]} ] } ],\n"
         << "  \"region\": [[0]],\n"
         << "  \"simulation\": {\"n_list\": [1], \"trials\": 4000, \"seed\": 3,\n"
         << "                   \"exact_oracle\": true} }\n";
    const auto p1 = ws.write("tiny.json", cfg1.str());
    const auto r1 = run_cli("simulate --config " + p1.string());
    CHECK(r1.exit_code == 0);
    const auto rows = parse_csv(r1.output);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][12]) == 0.5);  // two uniform codewords collide half the time
    const double freq = std::stod(rows[1][6]);
    const double radius = std::stod(rows[1][7]);
    CHECK(std::fabs(freq - 0.5) <= 3.0 * radius);

    std::ostringstream cfg2;
    cfg2 << "{ \"channel\": \"" << ch.string() << "\",\n"
         << "  \"profile\": [ { \"points\": [ {\"rate\": 0.75, \"dist\": [0.5, 0.5]} ] } ],\n"
         << "  \"region\": [[0]],\n"
         << "  \"simulation\": {\"n_list\": [1], \"trials\": 10, \"seed\": 3,\n"
         << "                   \"exact_oracle\": true, \"max_enumeration\": 2} }\n";
    const auto p2 = ws.write("huge.json", cfg2.str());
    CHECK(run_cli("simulate --config " + p2.string()).exit_code == 3);
}

TEST_CASE("cli bound: trivial flag, vacuous collision branch, standard grid") {
    Workspace ws;
    const auto ch = ws.write("id.dmc", kIdentityChannel);

    // Everything in region: the collision side is vacuous.
    std::ostringstream full;
    full << "{ \"channel\": \"" << ch.string() << "\",\n"
         << "  \"profile\": [ { \"points\": [ {\"rate\": 0.2, \"dist\": [0.5, 0.5]},\n"
         << "                                  {\"rate\": 0.5, \"dist\": [0.5, 0.5]} ] } ],\n"
         << "  \"region\": [[0], [1]],\n"
         << "  \"bound\": {\"n_list\": [1, 30]} }\n";
    const auto p1 = ws.write("full.json", full.str());
    const auto r1 = run_cli("bound --config " + p1.string());
    CHECK(r1.exit_code == 0);
    const auto rows = parse_csv(r1.output);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][3] == "true");        // N=1 cannot beat probability one
    CHECK(rows[2][3] == "false");
    CHECK(rows[1][4] == "decode");      // no out-of-region rates anywhere
    CHECK(rows[2][4] == "decode");

    // Grid-rate bound through the config's standard_grid block.
    std::ostringstream grid;
    grid << "{ \"channel\": \"" << ch.string() << "\",\n"
         << "  \"standard_grid\": { \"users\": [ { \"edges\": [0.3, 0.9],\n"
         << "      \"cells\": [ [ {\"rate\": 0.2, \"dist\": [0.5, 0.5]} ],\n"
         << "                   [ {\"rate\": 0.85, \"dist\": [0.5, 0.5]} ] ] } ],\n"
         << "    \"region\": [[0]] },\n"
         << "  \"bound\": {\"n_list\": [12]} }\n";
    const auto p2 = ws.write("grid.json", grid.str());
    const auto r2 = run_cli("bound --config " + p2.string());
    CHECK(r2.exit_code == 0);
    const auto grows = parse_csv(r2.output);
    REQUIRE(grows.size() == 2);
    CHECK(std::stod(grows[1][2]) > 0.0);
    CHECK(std::stod(grows[1][2]) < 1.0);
}

TEST_CASE("cli exponent: deterministic table with the witness row last") {
    Workspace ws;
    const auto ch = ws.write("id.dmc", kIdentityChannel);
    const auto cfg = ws.write("cfg.json", identity_config(ch));
    const auto r = run_cli("exponent --config " + cfg.string());
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 4);  // header, Em, Ei, EsLower
    CHECK(rows[0] == std::vector<std::string>{"kind", "subset", "sent", "competitor", "value",
                                              "rho_star", "s_star"});
    CHECK(rows[1][0] == "Em");
    CHECK(rows[2][0] == "Ei");
    CHECK(rows[3][0] == "EsLower");
    CHECK(std::stod(rows[1][4]) == doctest::Approx(std::log(2.0) - 0.2).epsilon(1e-9));
    const auto again = run_cli("exponent --config " + cfg.string());
    CHECK(again.output == r.output);
}
