#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = oprime::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json js(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("linkage report") {
  auto r = run({"linkage", "--cartan", "A1", "--mu", "[-4]", "--lam", "[2]"});
  REQUIRE(r.code == 0);
  CHECK(js(r)["chain"] == nlohmann::json::parse(R"([["a1", ["-4"]]])"));
  CHECK(js(r)["linked"] == true);
}

TEST_CASE("singular report") {
  auto r = run({"singular", "--cartan", "A1", "--radical", "[[0]]", "--g", "[3]", "--lam", "[2]", "--mu", "[-4]",
                "--depth", "6"});
  REQUIRE(r.code == 0);
  CHECK(js(r)["dim"] == 1);
  CHECK(js(r)["vectors"][0] == "f^3 w");
}

TEST_CASE("witness report rechecks") {
  auto r = run({"witness", "--cartan", "A1", "--radical", "[[0]]", "--g", "[3]", "--lam", "[2]", "--recheck"});
  REQUIRE(r.code == 0);
  CHECK(js(r)["full_system"] == "inconsistent");
  CHECK(js(r)["g0_system"] == "liftable");
  CHECK(r.err.find("recheck: ok") != std::string::npos);
}

TEST_CASE("output is byte-identical across runs") {
  const std::vector<std::string> args = {"filtration", "--cartan", "A1", "--radical", "[[0]]", "--g", "[\"3\"]",
                                         "--lam", "[-1]", "--tensor", "[1]"};
  auto a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("spec files and inline spec JSON") {
  auto r = run({"reciprocity", "--spec", R"({"cartan": "A1", "radical": [[0]], "g": {"0": ["3"]}})", "--lam", "[0]"});
  REQUIRE(r.code == 0);
  CHECK(js(r)["equal"] == true);
  auto m = run({"verma-dim", "--spec", R"({"cartan": [[2,-1],[-1,2]]})", "--lam", R"(["1/2", 0])", "--depth", "3"});
  REQUIRE(m.code == 0);
  CHECK(js(m)["kostant_agrees"] == true);
  CHECK(js(m)["dims"]["(-1/2,-1)"] == 2);
}

TEST_CASE("every subcommand runs") {
  const std::vector<std::string> base = {"--cartan", "A1", "--radical", "[[0]]", "--g", "[3]", "--lam", "[1]", "--mu", "[-3]"};
  for (const std::string cmd : {"roots", "linkage", "verma-dim", "singular", "embed", "nilpotency", "axioms", "witness",
                                "tower", "filtration", "reciprocity"}) {
    std::vector<std::string> args = {cmd};
    args.insert(args.end(), base.begin(), base.end());
    auto r = run(args);
    CHECK_MESSAGE(r.code == 0, cmd << ": " << r.err);
    auto t = run([&] { auto x = args; x.push_back("--output"); x.push_back("table"); return x; }());
    CHECK(t.code == 0);
  }
}

TEST_CASE("input errors exit with 2 and name the fault") {
  auto a = run({"linkage", "--cartan", "A1", "--lam", "[2, 1]", "--mu", "[0]"});
  CHECK(a.code == 2);
  CHECK(a.err.find("--lam") != std::string::npos);
  auto b = run({"linkage", "--cartan", "A1", "--lam", "[2.5]", "--mu", "[0]"});
  CHECK(b.code == 2);
  auto c = run({"singular", "--spec", R"({"cartan": "A1", "radical": [[0]], "g": {"0": ["x"]}})", "--lam", "[1]"});
  CHECK(c.code == 2);
  CHECK(c.err.find("spec.g.0[0]") != std::string::npos);
  auto d = run({"singular", "--spec", R"({"cartan": "A1", "radical": [[2]], "g": {"0": ["1", "0", "0"]}})", "--lam", "[1]"});
  CHECK(d.code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"linkage", "--cartan", "Q7", "--lam", "[0]", "--mu", "[0]"}).code == 2);
  CHECK(run({"verma-dim", "--cartan", "A1", "--lam", "[0]", "--depth", "0"}).code == 2);
  CHECK(run({"verma-dim", "--cartan", "A1", "--lam", "[0]", "--depth", "65"}).code == 2);
  CHECK(run({"reciprocity", "--cartan", "A1", "--radical", "[[0]]", "--lam", "[-1]"}).code == 2);
}
