#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "netsample/cli.hpp"
#include "netsample/experiments.hpp"

using namespace netsample;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(NETSAMPLE_TEST_DATA) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("generate") {
  CHECK(lines(run({"generate", "--family", "clique", "--n", "4"}).out) == 6);
  CHECK(lines(run({"generate", "--family", "hypercube", "--d", "3"}).out) == 12);
  const Run ba = run({"generate", "--family", "ba", "--n", "100", "--attach", "2", "--seed", "1"});
  CHECK(ba.code == cli::kExitOk);
  CHECK(lines(ba.out) == 197);
  CHECK(ba.out == slurp(data("ba_n100_attach2_seed1.txt")));
}

TEST_CASE("solve") {
  const Run tri = run({"solve", "--family", "clique", "--n", "3", "--alpha", "1", "--format", "json"});
  REQUIRE(tri.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(tri.out);
  CHECK(doc["objective"].get<double>() == doctest::Approx(1.125).epsilon(1e-12));
  CHECK(doc["status"] == "closed_form");
  CHECK(doc["kkt"]["passed"] == true);
  CHECK_FALSE(doc["metadata"].contains("timestamp"));

  const Run single = run({"solve", "--family", "clique", "--n", "1", "--alpha", "1", "--format", "json"});
  CHECK(nlohmann::json::parse(single.out)["objective"].get<double>() == doctest::Approx(1.0));

  const Run k10 = run({"solve", "--family", "clique", "--n", "10", "--alpha", "1", "--format", "json"});
  CHECK(nlohmann::json::parse(k10.out)["objective"].get<double>() == doctest::Approx(1.07438016529).epsilon(1e-10));

  const Run file = run({"solve", "--graph", data("triangle_weighted.txt"), "--m-eps", "100"});
  CHECK(file.code == cli::kExitOk);
  CHECK(file.out == "agent,degree,m,lambda,m_int\n0,2,0.375,0.375,38\n1,2,0.375,0.375,38\n2,2,0.375,0.375,38\n");
}

TEST_CASE("json mirrors csv values") {
  const std::vector<std::string> base{"solve", "--family", "star", "--n", "6", "--alpha", "0.7"};
  auto csv_args = base;
  auto json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const Run csv = run(csv_args);
  const auto doc = nlohmann::json::parse(run(json_args).out);
  std::istringstream in(csv.out);
  std::string line;
  std::getline(in, line);
  for (std::size_t i = 0; std::getline(in, line); ++i) {
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    const auto third = line.find(',', second + 1);
    CHECK(std::stod(line.substr(second + 1, third - second - 1)) == doc["m"][i].get<double>());
  }
}

TEST_CASE("bounds and alpha sweep") {
  const Run b = run({"bounds", "--family", "star", "--n", "5", "--alpha", "1", "--with-optimum"});
  CHECK(b.code == cli::kExitOk);
  CHECK(b.out.find("degree_lower,1.04,false") != std::string::npos);
  CHECK(b.out.find("degree_upper,4.4,true,degree") != std::string::npos);

  const Run sweep = run({"alpha-sweep", "--family", "clique", "--n", "5", "--alphas", "0,0.1,1,10", "--format", "json"});
  REQUIRE(sweep.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(sweep.out);
  CHECK(doc["records"][0]["optimum"].get<double>() == doctest::Approx(5.0));
  for (std::size_t i = 1; i < 4; ++i)
    CHECK(doc["records"][i]["optimum"].get<double>() < doc["records"][i - 1]["optimum"].get<double>());

  const auto star_sweep =
      nlohmann::json::parse(run({"alpha-sweep", "--family", "star", "--n", "5", "--alphas", "0.01,10", "--format", "json"}).out);
  CHECK(star_sweep["records"][1]["optimum"].get<double>() < star_sweep["records"][0]["optimum"].get<double>());
}

TEST_CASE("tightness with decoupled agents") {
  const Run t = run({"tightness", "--family", "ba", "--sizes", "30,40", "--repeats", "2", "--weights-range", "0",
                     "--format", "json"});
  REQUIRE(t.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(t.out);
  CHECK(doc["max_err_u"].get<double>() == 0.0);
  CHECK(doc["max_err_l"].get<double>() == 0.0);
  CHECK(doc["records"].size() == 4);
}

TEST_CASE("degree profile") {
  const Run clique = run({"degree-profile", "--family", "clique", "--sizes", "8", "--format", "json"});
  REQUIRE(clique.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(clique.out);
  REQUIRE(doc["buckets"].size() == 1);
  CHECK(doc["buckets"][0]["variance"].get<double>() <= 1e-24);

  const Run ba = run({"degree-profile", "--family", "ba", "--sizes", "100,200", "--format", "json"});
  const auto bdoc = nlohmann::json::parse(ba.out);
  for (const auto& r : bdoc["spearman"]) CHECK(r["spearman"].get<double>() < 0.0);
}

TEST_CASE("validate") {
  const Run ok = run({"validate", "--family", "clique", "--n", "3", "--alpha", "1", "--eps", "0.01", "--trials", "4000"});
  CHECK(ok.code == cli::kExitOk);
  CHECK(ok.out.find(",38,") != std::string::npos);
  const Run halved =
      run({"validate", "--family", "clique", "--n", "3", "--alpha", "1", "--eps", "0.01", "--scale", "0.5"});
  CHECK(halved.code == cli::kExitInvariant);
}

TEST_CASE("reruns are byte-identical") {
  const std::vector<std::string> args{"tightness", "--family", "er", "--sizes", "40", "--repeats", "3",
                                      "--seed", "9", "--format", "json", "--threads", "3"};
  const Run a = run(args);
  auto single = args;
  single.back() = "1";
  const Run b = run(single);
  CHECK(a.out == b.out);
  const std::vector<std::string> v{"validate", "--family", "star", "--n", "5", "--alpha", "1", "--trials", "2000"};
  CHECK(run(v).out == run(v).out);

  const auto path = std::filesystem::temp_directory_path() / "netsample_cli_out.csv";
  run({"solve", "--family", "rr", "--n", "20", "--d", "3", "--weights-range", "1", "--out", path.string()});
  const std::string first = slurp(path.string());
  run({"solve", "--family", "rr", "--n", "20", "--d", "3", "--weights-range", "1", "--out", path.string()});
  CHECK(first == slurp(path.string()));
  CHECK_FALSE(first.empty());
  std::filesystem::remove(path);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"solve", "--family", "clique", "--n", "3"}).code == cli::kExitUsage);
  CHECK(run({"solve", "--family", "clique", "--n", "3", "--alpha", "-1"}).code == cli::kExitUsage);
  CHECK(run({"solve", "--family", "clique", "--n", "3", "--alpha", "1", "--format", "xml"}).code == cli::kExitUsage);
  CHECK(run({"solve", "--graph", "/nonexistent/file"}).code == cli::kExitUsage);
  const Run disconnected = run({"solve", "--graph", data("isolated_node.txt"), "--alpha", "1"});
  CHECK(disconnected.code == cli::kExitUsage);
  CHECK(disconnected.err.find("disconnected") != std::string::npos);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("experiment helpers") {
  CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(spearman({1, 2, 2, 3}, {1, 2, 2, 3}) == doctest::Approx(1.0));
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));

  const Graph s = star(5);
  CHECK_THROWS_AS(analyze(s, InfluenceFactors::uniform(-1.0)), std::invalid_argument);
  const auto r = analyze(s, InfluenceFactors::uniform(1.0));
  CHECK(r.err_u >= 0.0);
  CHECK(r.err_l >= 0.0);
  CHECK_FALSE(r.closed_form_valid);
}
