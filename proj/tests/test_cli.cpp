#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "support/fixtures.hpp"
#include "veckg/config.hpp"
#include "veckg/consistency.hpp"
#include "veckg/fusion.hpp"
#include "veckg/rdf_io.hpp"

using namespace veckg;
using namespace veckg::testing;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

// A scratch workspace seeded with the shipped fixtures. Every test gets its
// own copy so write-backs cannot leak between cases.
struct CliWorkspace {
    fs::path dir;

    CliWorkspace() {
        std::string tmpl = (fs::temp_directory_path() / "veckg-cli-XXXXXX").string();
        REQUIRE(mkdtemp(tmpl.data()) != nullptr);
        dir = tmpl;
        fs::copy_file(fs::path(VECKG_DATA_DIR) / "war.taxonomy", dir / "war.taxonomy");
        fs::copy_file(fs::path(VECKG_DATA_DIR) / "blocs.hierarchy", dir / "blocs.hierarchy");
        fs::copy_file(fs::path(VECKG_DATA_DIR) / "war.vkg", dir / "war.vkg");
    }
    ~CliWorkspace() { fs::remove_all(dir); }

    std::string graph_path() const { return (dir / "war.vkg").string(); }

    std::string graph_bytes() const {
        std::ifstream in(graph_path(), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    void write_graph(const std::string& text) const {
        std::ofstream out(graph_path(), std::ios::binary | std::ios::trunc);
        out << text;
    }

    RunResult run(const std::string& args, const std::string& env = "") const {
        std::string cmd = env + " " + std::string(VECKG_CLI_PATH) + " --taxonomy '" +
                          (dir / "war.taxonomy").string() + "' --hierarchy '" +
                          (dir / "blocs.hierarchy").string() + "' --graph '" + graph_path() +
                          "' " + args + " 2>&1";
        FILE* pipe = popen(cmd.c_str(), "r");
        REQUIRE(pipe != nullptr);
        RunResult r;
        std::array<char, 4096> chunk{};
        std::size_t n;
        while ((n = fread(chunk.data(), 1, chunk.size(), pipe)) > 0) r.out.append(chunk.data(), n);
        int status = pclose(pipe);
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        return r;
    }

    Graph load() const {
        auto tax = load_taxonomy_file((dir / "war.taxonomy").string());
        auto h = load_hierarchy_file((dir / "blocs.hierarchy").string());
        return parse(graph_bytes(), tax, h);
    }
};

} // namespace

TEST_CASE("cli check") {
    CliWorkspace ws;

    SUBCASE("text report") {
        auto r = ws.run("check");
        CHECK(r.code == 0);
        CHECK(r.out.find("viewpoint-consistent: yes") != std::string::npos);
        CHECK(r.out.find("\033[") == std::string::npos);
    }

    SUBCASE("VECKG_COLOR=1 adds ANSI styling") {
        auto r = ws.run("check", "VECKG_COLOR=1");
        CHECK(r.code == 0);
        CHECK(r.out.find("\033[32m") != std::string::npos);
        CHECK(ws.run("check", "VECKG_COLOR=0").out.find("\033[") == std::string::npos);
    }

    SUBCASE("json report matches the library") {
        auto r = ws.run("check --json");
        CHECK(r.code == 0);
        auto j = nlohmann::json::parse(r.out);
        CHECK(j["schema"] == "veckg.report/1");
        CHECK(j["consistent"] == true);
        CHECK(j["viewpoints"].size() == 8);

        auto expected = nlohmann::json::parse(check_graph(ws.load()).to_json());
        CHECK(j == expected);
    }

    SUBCASE("--lint reports advisory findings") {
        auto r = ws.run("check --lint --json");
        CHECK(r.code == 0);
        auto j = nlohmann::json::parse(r.out);
        CHECK(j["incomplete_events"] == nlohmann::json::array({"RUvsUKR"}));
        CHECK(j["lint"].is_array());

        auto text = ws.run("check --lint");
        CHECK(text.code == 0);
        CHECK(text.out.find("missing a time or location") != std::string::npos);
    }

    SUBCASE("an inconsistent graph file checks false with exit 1") {
        ws.write_graph(
            "RUvsUKR event_type war .\n"
            "RUvsUKR attacker#1 Russia .\n"
            "RUvsUKR defender#1 Russia .\n"
            "attacker#1 acc_to_vp RU .\n"
            "attacker#1 singleton_property_of attacker .\n"
            "defender#1 acc_to_vp RU .\n"
            "defender#1 singleton_property_of defender .\n");
        auto r = ws.run("check");
        CHECK(r.code == 1);
        CHECK(r.out.find("viewpoint-consistent: NO") != std::string::npos);
        // ... and such a graph refuses to materialize.
        CHECK(ws.run("materialize").code == 1);
    }
}

TEST_CASE("cli insert") {
    CliWorkspace ws;

    SUBCASE("an admissible claim is committed and written back") {
        std::string before = ws.graph_bytes();
        auto r = ws.run("insert --triple 'RUvsUKR liberator Ukraine' --viewpoint GB --json");
        CHECK(r.code == 0);
        auto j = nlohmann::json::parse(r.out);
        CHECK(j["schema"] == "veckg.mutation/1");
        CHECK(j["status"] == "ok");
        CHECK(ws.graph_bytes() != before);

        Graph g = ws.load();
        CHECK(g.contains(make_claim(g, "RUvsUKR", "liberator", Term::entity("Ukraine"), "GB")));
    }

    SUBCASE("a conflicting claim is rejected, exit 1, file untouched") {
        std::string before = ws.graph_bytes();
        auto r = ws.run("insert --triple 'RUvsUKR attacker Russia' --viewpoint RU");
        CHECK(r.code == 1);
        CHECK(r.out.find("defender_RU") != std::string::npos);
        CHECK(ws.graph_bytes() == before);

        auto j = nlohmann::json::parse(
            ws.run("insert --triple 'RUvsUKR attacker Russia' --viewpoint RU --json").out);
        CHECK(j["status"] == "incompatible");
        REQUIRE_FALSE(j["evidence"].empty());
        CHECK(j["evidence"][0]["kind"] == "mutual_exclusion");
    }

    SUBCASE("facts take no viewpoint") {
        auto r = ws.run("insert --triple 'RUvsUKR participant Belarus' --viewpoint RU");
        CHECK(r.code == 2);
        CHECK(r.out.find("not an attribution") != std::string::npos);
        CHECK(ws.run("insert --triple 'RUvsUKR participant Belarus'").code == 0);
    }

    SUBCASE("a quoted object inserts as a literal fact") {
        auto r = ws.run("insert --triple 'RUvsUKR location \"Donbas\"'");
        CHECK(r.code == 0);
        CHECK(ws.graph_bytes().find("RUvsUKR location \"Donbas\" .") != std::string::npos);
        // The completeness lint clears once the event has a location.
        auto lint = nlohmann::json::parse(ws.run("check --lint --json").out);
        CHECK(lint["incomplete_events"].empty());
    }

    SUBCASE("event registration via event_type") {
        auto r = ws.run("insert --triple 'drill event_type military_operation'");
        CHECK(r.code == 0);
        CHECK(ws.graph_bytes().find("drill event_type military_operation .") !=
              std::string::npos);
        // Unknown event types are usage errors.
        CHECK(ws.run("insert --triple 'x event_type mystery'").code == 2);
    }

    SUBCASE("cascade deletes conflicting descendants only on request") {
        ws.write_graph(
            "RUvsUKR event_type war .\n"
            "RUvsUKR occupier#1 Russia .\n"
            "occupier#1 acc_to_vp US .\n"
            "occupier#1 singleton_property_of occupier .\n");
        auto blocked = ws.run("insert --triple 'RUvsUKR liberator Russia' --viewpoint NATO --json");
        CHECK(blocked.code == 1);
        auto jb = nlohmann::json::parse(blocked.out);
        CHECK(jb["status"] == "cascade_required");
        CHECK(jb["victims"] == nlohmann::json::array({"RUvsUKR occupier_US Russia"}));

        auto r = ws.run(
            "insert --triple 'RUvsUKR liberator Russia' --viewpoint NATO --cascade --json");
        CHECK(r.code == 0);
        auto j = nlohmann::json::parse(r.out);
        CHECK(j["status"] == "ok");
        CHECK(j["victims"] == nlohmann::json::array({"RUvsUKR occupier_US Russia"}));
        CHECK(ws.graph_bytes().find("occupier") == std::string::npos);
        CHECK(ws.graph_bytes().find("liberator#1") != std::string::npos);
    }

    SUBCASE("usage errors exit 2") {
        CHECK(ws.run("insert").code == 2);                              // missing --triple
        CHECK(ws.run("insert --triple 'too few'").code == 2);           // not 3 tokens
        CHECK(ws.run("insert --triple 'a bogus c'").code == 2);         // unknown predicate
        CHECK(ws.run("insert --triple 'RUvsUKR occupier x' --viewpoint Mars").code == 2);
    }
}

TEST_CASE("cli delete") {
    CliWorkspace ws;

    auto r = ws.run("delete --triple 'RUvsUKR occupier Russia' --viewpoint NATO");
    CHECK(r.code == 0);
    CHECK(ws.graph_bytes().find("occupier") == std::string::npos);
    Graph g = ws.load();
    CHECK(g.claims().size() == 2);

    SUBCASE("deleting the same claim again is not found") {
        auto again = ws.run("delete --triple 'RUvsUKR occupier Russia' --viewpoint NATO --json");
        CHECK(again.code == 1);
        CHECK(nlohmann::json::parse(again.out)["status"] == "not_found");
    }

    SUBCASE("facts delete without a viewpoint") {
        CHECK(ws.run("delete --triple 'RUvsUKR participant Ukraine'").code == 0);
        CHECK(ws.graph_bytes().find("Ukraine") == std::string::npos);
    }
}

TEST_CASE("cli query") {
    CliWorkspace ws;

    SUBCASE("matches and verdict, paired with the library") {
        auto r = ws.run("query 'RUvsUKR participant ?o @ GB'");
        CHECK(r.code == 0);
        CHECK(r.out.find("3 match(es) at GB") != std::string::npos);
        CHECK(r.out.find("verdict: CONSISTENT") != std::string::npos);

        auto j = nlohmann::json::parse(ws.run("query 'RUvsUKR participant ?o @ GB' --json").out);
        CHECK(j["schema"] == "veckg.query/1");
        CHECK(j == nlohmann::json::parse(
                       query(ws.load(), parse_pattern("RUvsUKR participant ?o @ GB"))
                           .to_json(ws.load())));

        // The distinct object bindings are exactly Ukraine and Russia.
        std::set<std::string> objects;
        for (const auto& m : j["matches"]) objects.insert(m["object"].get<std::string>());
        CHECK(objects == std::set<std::string>{"Ukraine", "Russia"});
    }

    SUBCASE("--no-refine narrows to the exact predicate") {
        auto j = nlohmann::json::parse(
            ws.run("query 'RUvsUKR participant ?o @ GB' --no-refine --json").out);
        CHECK(j["matches"].size() == 2);
    }

    SUBCASE("--no-shortcut agrees on a consistent graph") {
        auto a = ws.run("query '?s ?p ?o @ US' --json").out;
        auto b = ws.run("query '?s ?p ?o @ US' --no-shortcut --json").out;
        CHECK(nlohmann::json::parse(a) == nlohmann::json::parse(b));
    }

    SUBCASE("non-consistent fusion exits 1") {
        ws.write_graph(
            "RUvsUKR event_type war .\n"
            "RUvsUKR attacker#1 Russia .\n"
            "RUvsUKR defender#1 Russia .\n"
            "attacker#1 acc_to_vp RU .\n"
            "attacker#1 singleton_property_of attacker .\n"
            "defender#1 acc_to_vp RU .\n"
            "defender#1 singleton_property_of defender .\n");
        auto r = ws.run("query 'RUvsUKR participant ?o @ RU'");
        CHECK(r.code == 1);
        CHECK(r.out.find("INCOMPATIBLE") != std::string::npos);
    }

    SUBCASE("usage errors exit 2") {
        CHECK(ws.run("query 'RUvsUKR participant ?o'").code == 2);        // no @ viewpoint
        CHECK(ws.run("query 'RUvsUKR participant ?o @ Mars'").code == 2); // unknown node
        CHECK(ws.run("query 'RUvsUKR bogus ?o @ GB'").code == 2);         // unknown predicate
    }
}

TEST_CASE("cli stance") {
    CliWorkspace ws;
    {
        std::ofstream out(ws.dir / "ballot.txt");
        out << "# two in favour, one against, one silent\n"
               "NATO valid\nGB valid\nRU invalid\nGER neutral\n";
    }
    std::string ballot = (ws.dir / "ballot.txt").string();

    auto r = ws.run("stance --ballot '" + ballot + "'");
    CHECK(r.code == 0);
    CHECK(r.out.find("VALID") != std::string::npos);

    // No weights configured: uniform over the four voters, the neutral one
    // staying in the denominator. phi = 2/4 = theta, and the boundary counts
    // as VALID.
    auto j = nlohmann::json::parse(ws.run("stance --ballot '" + ballot + "' --json").out);
    CHECK(j["schema"] == "veckg.stance/1");
    CHECK(j["node"] == "ALL");
    CHECK(j["stance"] == "valid");
    CHECK(j["measure"].get<double>() == doctest::Approx(0.5));
    CHECK(j["theta"].get<double>() == doctest::Approx(0.5));

    SUBCASE("--node selects that node's consensus config") {
        auto at_us = nlohmann::json::parse(
            ws.run("stance --ballot '" + ballot + "' --node US --json").out);
        CHECK(at_us["node"] == "US");
        CHECK(at_us["stance"] == "valid");
    }

    SUBCASE("bad ballots are usage errors") {
        std::ofstream(ws.dir / "bad.txt") << "NATO maybe\n";
        CHECK(ws.run("stance --ballot '" + (ws.dir / "bad.txt").string() + "'").code == 2);
        CHECK(ws.run("stance --ballot /nonexistent").code == 2);
    }
}

TEST_CASE("cli materialize") {
    CliWorkspace ws;

    SUBCASE("stdout equals the canonical file") {
        auto r = ws.run("materialize");
        CHECK(r.code == 0);
        CHECK(r.out == ws.graph_bytes());
    }

    SUBCASE("--out writes a byte-identical copy") {
        std::string out_path = (ws.dir / "copy.vkg").string();
        auto r = ws.run("materialize --out '" + out_path + "'");
        CHECK(r.code == 0);
        std::ifstream in(out_path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str() == ws.graph_bytes());
    }

    SUBCASE("--json carries the text") {
        auto j = nlohmann::json::parse(ws.run("materialize --json").out);
        CHECK(j["schema"] == "veckg.materialize/1");
        CHECK(j["text"] == ws.graph_bytes());
    }
}

TEST_CASE("cli explain") {
    CliWorkspace ws;
    // liberator@RU conflicts with occupier@NATO by constraint, though the
    // two are never co-valid; admission allows it, explain still reports it.
    REQUIRE(ws.run("insert --triple 'RUvsUKR liberator Russia' --viewpoint RU").code == 0);

    auto r = ws.run("explain liberator#1 occupier#1");
    CHECK(r.code == 1);
    CHECK(r.out.find("contradiction:") != std::string::npos);

    auto j = nlohmann::json::parse(ws.run("explain liberator#1 occupier#1 --json").out);
    CHECK(j["schema"] == "veckg.explain/1");
    CHECK(j["compatible"] == false);
    CHECK(j["evidence"]["kind"] == "mutual_exclusion");
    CHECK(j["evidence"]["constraint"] == "XOR(liberator,occupier)");

    SUBCASE("compatible pairs exit 0") {
        auto ok = ws.run("explain occupier#1 defender#1 --json");
        CHECK(ok.code == 0);
        auto jj = nlohmann::json::parse(ok.out);
        CHECK(jj["compatible"] == true);
        CHECK(jj["evidence"].is_null());
    }

    SUBCASE("unknown claim ids are usage errors") {
        CHECK(ws.run("explain occupier#1 ghost#9").code == 2);
    }
}

TEST_CASE("cli viewpoints") {
    CliWorkspace ws;

    auto j = nlohmann::json::parse(ws.run("viewpoints --claim occupier#1 --json").out);
    CHECK(j["schema"] == "veckg.viewpoints/1");
    CHECK(j["claim"] == "RUvsUKR occupier_NATO Russia");
    CHECK(j["attributed_to"] == "NATO");
    CHECK(j["valid_at"] ==
          nlohmann::json::array({"NATO", "GB", "GER", "US", "Congress", "POTUS"}));

    auto r = ws.run("viewpoints --claim defender#1");
    CHECK(r.code == 0);
    CHECK(r.out.find("valid at: RU") != std::string::npos);
}

TEST_CASE("cli workspace validation") {
    CliWorkspace ws;

    SUBCASE("no subcommand is a usage error") { CHECK(ws.run("").code == 2); }

    SUBCASE("a missing graph file is a usage error") {
        fs::remove(ws.graph_path());
        CHECK(ws.run("check").code == 2);
    }

    SUBCASE("a malformed graph file is a parse error") {
        ws.write_graph("not a triple\n");
        auto r = ws.run("check");
        CHECK(r.code == 2);
        CHECK(r.out.find("line 1") != std::string::npos);
    }

    SUBCASE("--help exits 0") {
        RunResult r = ws.run("--help");
        CHECK(r.code == 0);
        CHECK(r.out.find("check") != std::string::npos);
    }
}
