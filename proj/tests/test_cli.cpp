#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

const std::string kCli = CLIQUENASH_CLI_PATH;
const std::string kDir = "/tmp/cliquenash-cli-tests";

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Setup {
  Setup() {
    if (std::system(("mkdir -p " + kDir).c_str()) != 0) std::abort();
  }
};
const Setup setup_once;

}  // namespace

TEST_CASE("unknown flags and missing subcommands exit 1") {
  CHECK(run("--nonsense") == 1);
  CHECK(run("") == 1);
  CHECK(run("solve --algorithm dmp --game /does/not/exist.json") == 1);
}

TEST_CASE("gen-graph emits loadable graph JSON") {
  const std::string path = kDir + "/g.json";
  REQUIRE(run("gen-graph --n 50 --k 12 --seed 7 --out " + path) == 0);
  const auto j = nlohmann::json::parse(slurp(path));
  CHECK(j["n"] == 50);
  CHECK(j["planted"].size() == 12);
}

TEST_CASE("build, solve, verify round trip with exit codes") {
  const std::string graph = kDir + "/graph.json";
  const std::string art = kDir + "/artifact.json";
  const std::string game = kDir + "/game.json";
  const std::string profile = kDir + "/profile.json";
  const std::string cert = kDir + "/cert.json";

  REQUIRE(run("gen-graph --n 24 --k 8 --seed 3 --out " + graph) == 0);
  REQUIRE(run("build-game --variant hk --graph " + graph + " --eta 0.07 --n-big 20 "
              "--seed 3 --out " + art + " --emit-game " + game) == 0);

  REQUIRE(run("solve --algorithm dmp --game " + game + " --start-row 0 --out " +
              profile) == 0);
  // A DMP profile always verifies at eps = 1/2 and prints a certificate.
  CHECK(run("verify --game " + game + " --profile " + profile + " --eps 0.5 --out " +
            cert) == 0);
  const auto c = nlohmann::json::parse(slurp(cert));
  CHECK(c["regret_row"].get<double>() <= 0.5 + 1e-9);
  // At eps = 0 the same profile generally fails verification.
  CHECK(run("verify --game " + game + " --profile " + profile + " --eps 0 --out " +
            cert) == 2);
}

TEST_CASE("small-support search maps outcomes to exit codes") {
  const std::string game = kDir + "/mp.json";
  {
    std::ofstream out(game);
    out << R"({"rows":2,"cols":2,"m_row":[[1,0],[0,1]],"m_col":[[0,1],[1,0]]})";
  }
  const std::string profile = kDir + "/mp-profile.json";
  CHECK(run("solve --algorithm small-support-search --game " + game +
            " --eps 0 --k 2 --out " + profile) == 0);
  CHECK(run("solve --algorithm small-support-search --game " + game +
            " --eps 0.4 --k 1 --out " + profile) == 2);
  CHECK(run("solve --algorithm small-support-search --game " + game +
            " --eps 0 --k 2 --budget 2 --out " + profile) == 4);
}

TEST_CASE("recover exits 0 on planted instances and 3 on failures") {
  const std::string graph = kDir + "/rg.json";
  const std::string art = kDir + "/rart.json";
  REQUIRE(run("gen-graph --n 60 --k 12 --seed 11 --out " + graph) == 0);
  REQUIRE(run("build-game --variant hk --graph " + graph +
              " --eta 0.07 --n-big 40 --seed 11 --out " + art) == 0);

  // Uniform profile over the planted clique, embedded in the game space.
  const auto gj = nlohmann::json::parse(slurp(graph));
  const auto aj = nlohmann::json::parse(slurp(art));
  const int total = aj["layout"]["total"].get<int>();
  std::vector<double> x(total, 0.0);
  for (const auto& v : gj["planted"]) x[v.get<int>()] = 1.0 / gj["planted"].size();
  nlohmann::json pj;
  pj["x"] = x;
  pj["y"] = x;
  const std::string profile = kDir + "/rprofile.json";
  {
    std::ofstream out(profile);
    out << pj.dump();
  }
  const std::string report = kDir + "/report.json";
  CHECK(run("recover --graph " + graph + " --artifact " + art + " --profile " + profile +
            " --s 0.01 --t 0.06 --target-size 12 --clique-size 12 --out " + report) == 0);
  const auto rj = nlohmann::json::parse(slurp(report));
  CHECK(rj["status"] == "recovered");
  CHECK(rj["clique"] == gj["planted"]);

  // Demanding a clique bigger than the planted one must fail with 3.
  CHECK(run("recover --graph " + graph + " --artifact " + art + " --profile " + profile +
            " --s 0.01 --t 0.06 --target-size 12 --clique-size 20 --out " + report) == 3);
}

TEST_CASE("bayesian subcommands: gadget build, brute force, qp, lift") {
  const std::string graph = kDir + "/oct.json";
  const std::string gadget = kDir + "/gadget.json";
  const std::string bprofile = kDir + "/bprofile.json";

  REQUIRE(run("gen-graph --model octahedron --out " + graph) == 0);
  REQUIRE(run("build-game --variant bne-gadget --graph " + graph + " --out " + gadget) == 0);

  // The octahedron gadget has an exact pure BNE (a proper coloring).
  CHECK(run("solve --algorithm brute-bne --bgame " + gadget + " --eps 0 --budget "
            "10000000000 --out " + bprofile) == 0);
  CHECK(run("verify --bgame " + gadget + " --bprofile " + bprofile + " --eps 0") == 0);

  // K5 admits no exact pure BNE: definitive NotFound exits 2.
  const std::string k5graph = kDir + "/k5.json";
  const std::string k5gadget = kDir + "/k5gadget.json";
  REQUIRE(run("gen-graph --model k5 --out " + k5graph) == 0);
  REQUIRE(run("build-game --variant bne-gadget --graph " + k5graph + " --out " + k5gadget) == 0);
  CHECK(run("solve --algorithm brute-bne --bgame " + k5gadget + " --eps 0 --budget "
            "100000000 --out " + bprofile) == 2);

  // The K5 gadget happens to have uniform types, so the qp solver
  // accepts it; with few types it takes the exhaustive path.
  CHECK(run("solve --algorithm qp-bne --bgame " + k5gadget + " --eps 0.25 --seed 4 "
            "--guess-budget 100 --out " + bprofile) == 0);

  // Lift a small reduction game and exhaust a tiny budget: exit 4.
  const std::string small = kDir + "/small-graph.json";
  const std::string art = kDir + "/small-art.json";
  const std::string lifted = kDir + "/lifted.json";
  REQUIRE(run("gen-graph --n 10 --k 4 --seed 2 --out " + small) == 0);
  REQUIRE(run("build-game --variant small-support --graph " + small +
              " --eta 0.3 --n1 4 --n2 2 --seed 2 --out " + art) == 0);
  REQUIRE(run("build-game --variant bne-lift --artifact " + art +
              " --num-types 3 --out " + lifted) == 0);
  CHECK(run("solve --algorithm brute-bne --bgame " + lifted + " --eps 0 --budget 1000 "
            "--out " + bprofile) == 4);
}

TEST_CASE("experiment subcommand writes results and replays them") {
  const std::string out = kDir + "/exp.json";
  REQUIRE(run("experiment --experiment soundness-eps --n 40 --k 10 --n-big 40 "
              "--trials 2 --seed 5 --subset-size 10 --out " + out) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["trials"].size() == 2);
  CHECK(j["summary"]["success_count"].is_number());

  CHECK(run("experiment --replay " + out + " --trial 1") == 0);

  const std::string csv = kDir + "/exp.csv";
  REQUIRE(run("experiment --experiment bne-gadget --gadget k5 --trials 3 --seed 2 "
              "--format csv --out " + csv) == 0);
  CHECK(slurp(csv).rfind("trial,seed,experiment,", 0) == 0);
}

TEST_CASE("experiment config file and environment output directory") {
  const std::string cfg_path = kDir + "/config.json";
  {
    std::ofstream out(cfg_path);
    out << R"({"experiment":"bne-gadget","gadget":"octahedron","trials":2,"seed":9})";
  }
  ::setenv("CLIQUENASH_OUT_DIR", kDir.c_str(), 1);
  CHECK(run("experiment --config " + cfg_path) == 0);
  CHECK(nlohmann::json::parse(slurp(kDir + "/bne-gadget-9.json"))["trials"].size() == 2);
  ::unsetenv("CLIQUENASH_OUT_DIR");
}
