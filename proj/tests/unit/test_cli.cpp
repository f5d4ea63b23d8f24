#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lindchain/cli.hpp"

using namespace lindchain;
using namespace lindchain::cli;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "lindchain");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lindchain_test_" + name);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("range parsing") {
  CHECK(parse_real_range("0.25") == RealRange{0.25, 0.25, 1});
  CHECK(parse_real_range("0.1:0.3:3") == RealRange{0.1, 0.3, 3});
  const auto xs = expand(parse_real_range("0.1:0.3:3"));
  REQUIRE(xs.size() == 3);
  CHECK(xs.back() == 0.3);
  CHECK(expand(parse_int_range("2:6:3")) == std::vector<int>{2, 4, 6});
  CHECK_THROWS_AS(expand(parse_real_range("0.1:0.3:0")), DomainError);
  CHECK_THROWS_AS(parse_real_range("abc"), DomainError);
  CHECK_THROWS_AS(expand(parse_int_range("2:3:5")), DomainError);
}

TEST_CASE("real formatting") {
  CHECK(format_real(0.1) == "1.0000000000000001e-01");
  CHECK(format_real(-0.0) == "0.0000000000000000e+00");
  CHECK(format_real(-2.5) == "-2.5000000000000000e+00");
}

TEST_CASE("csv rendering") {
  Table t{{"a", "b", "c"}, {{Cell{1.0}, Cell{7LL}, Cell{std::string("x")}}}};
  const std::string csv = render_csv(t, {"head"}, true);
  CHECK(csv == "# head\n# columns: 1:a 2:b 3:c\na,b,c\n1.0000000000000000e+00,7,x\n");
}

TEST_CASE("params prints derived couplings as JSON") {
  const Outcome o = invoke({"params", "--lambda", "0.2", "--eta", "0.3"});
  REQUIRE(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["t1"].get<double>() == doctest::Approx(0.56));
  CHECK(j["t2p"].get<double>() == doctest::Approx(-0.06));
  CHECK(j["mu"].get<double>() == doctest::Approx(-0.3));
}

TEST_CASE("config round trip") {
  const Outcome o = invoke({"entropy", "--lambda", "0.1:0.3:3", "--cells", "20", "--t-max", "4", "--log-time",
                            "--sizes", "4,8", "--format", "json", "--dump-config"});
  REQUIRE(o.code == 0);
  const RunConfig parsed = config_from_json(nlohmann::json::parse(o.out));
  CHECK(parsed.command == Command::entropy);
  CHECK(parsed.lambda == RealRange{0.1, 0.3, 3});
  CHECK(parsed.t_max == 4.0);
  CHECK(parsed.log_time);
  CHECK(parsed.format == Format::json);
  CHECK(config_from_json(config_to_json(parsed)) == parsed);

  const auto path = temp_path("config.json");
  std::ofstream(path) << o.out;
  const Outcome again = invoke({"entropy", "--config", path.string(), "--dump-config"});
  CHECK(again.out == o.out);
  const Outcome over = invoke({"entropy", "--config", path.string(), "--cells", "30", "--dump-config"});
  CHECK(config_from_json(nlohmann::json::parse(over.out)).cells == IntRange{30, 30, 1});
  std::filesystem::remove(path);
}

TEST_CASE("sweep produces one row per point") {
  const Outcome o = invoke({"params", "--lambda", "0.1:0.3:3", "--eta", "0.2:0.4:2"});
  REQUIRE(o.code == 0);
  CHECK(data_lines(o.out).size() == 1 + 6);
  CHECK(o.out.rfind("# lindchain 0.1.0\n", 0) == 0);
}

TEST_CASE("thread count does not change the rows") {
  const std::vector<std::string> base = {"spectrum", "--lambda", "0.1:0.4:4", "--eta", "0.2:0.6:3", "--cells", "6"};
  auto one = base;
  one.insert(one.end(), {"--threads", "1"});
  auto three = base;
  three.insert(three.end(), {"--threads", "3"});
  CHECK(data_lines(invoke(one).out) == data_lines(invoke(three).out));
}

TEST_CASE("usage errors exit with 1") {
  CHECK(invoke({"params", "--lambda", "0.1:0.3:0"}).code == 1);
  CHECK(invoke({"params", "--bogus", "3"}).code == 1);
  CHECK(invoke({}).code == 1);
  const Outcome bad = invoke({"params", "--lambda", "1.5"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("lambda") != std::string::npos);
  CHECK(invoke({"spectrum", "--lambda", "0.1:0.2:2", "--eta", "0.1:0.2:2", "--cells", "2:4:2"}).code == 1);
}

TEST_CASE("phase diagram marks the Hermitian line") {
  const Outcome o = invoke({"phase-diagram", "--grid", "11"});
  REQUIRE(o.code == 0);
  const auto lines = data_lines(o.out);
  CHECK(lines.size() == 1 + 121);
  bool found = false;
  for (const auto& l : lines) {
    if (l.rfind("5.0000000000000000e-01,2.9999999999999999e-01,", 0) == 0) {
      found = true;
      CHECK(l.find("hermitian") != std::string::npos);
    }
  }
  CHECK(found);
}

TEST_CASE("oracle command passes on two cells") {
  const Outcome o = invoke({"oracle", "--cells", "2", "--lambda", "0.2", "--eta", "0.3", "--t-max", "10"});
  CHECK(o.code == 0);
  CHECK(o.out.find("fail") == std::string::npos);
}

TEST_CASE("output file written whole or not at all") {
  const auto path = temp_path("out.csv");
  std::filesystem::remove(path);
  CHECK(invoke({"params", "--lambda", "0.1:0.2:2", "--out", path.string()}).code == 0);
  CHECK(std::filesystem::exists(path));
  std::filesystem::remove(path);

  const auto dir = temp_path("no_such_dir") / "out.csv";
  const Outcome o = invoke({"params", "--lambda", "0.1:0.2:2", "--out", dir.string()});
  CHECK(o.code == 1);
  CHECK_FALSE(std::filesystem::exists(dir));
}

TEST_CASE("rejected parameters leave no file") {
  // Rejected before any output is produced.
  const auto path = temp_path("fail.csv");
  std::filesystem::remove(path);
  const Outcome o = invoke({"evolve", "--lambda", "1.2", "--out", path.string()});
  CHECK(o.code == 1);
  CHECK_FALSE(std::filesystem::exists(path));
}

}  // TEST_SUITE
