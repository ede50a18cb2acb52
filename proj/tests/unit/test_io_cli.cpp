#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../oracles.hpp"
#include "mvdeg/cli.hpp"
#include "mvdeg/error.hpp"
#include "mvdeg/io.hpp"
#include "mvdeg/synth.hpp"

using namespace mvdeg;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("mvdeg_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

void write_text(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST(SignalCsv, RoundTripProperty) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t p = 1 + trial % 5;
    auto s = trial % 2 ? gen_wgn(p, 10 + trial, rng()) : gen_one_over_f(p, 10 + trial, rng());
    if (trial == 3) s.at(0, 0) = 1e-300;
    if (trial == 5) s.at(0, 1) = -123456789.125;
    std::stringstream buf;
    io::write_signal_csv(buf, s);
    EXPECT_EQ(io::parse_signal_csv(buf), s);
  }
}

TEST(SignalCsv, ParsesLabelsAndWhitespace) {
  std::istringstream in("a, b\n1,2\n3 ,4\r\n5,6\n");
  const auto s = io::parse_signal_csv(in);
  EXPECT_EQ(s.channels(), 2u);
  EXPECT_EQ(s.samples(), 3u);
  EXPECT_EQ(s.labels(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(s.at(1, 2), 6.0);
}

TEST(SignalCsv, ErrorsCarryLineAndColumn) {
  const auto expect_parse = [](const std::string& text, std::size_t line, const std::string& needle) {
    std::istringstream in(text);
    try {
      io::parse_signal_csv(in, "sig.csv");
      FAIL() << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Parse);
      EXPECT_EQ(e.line(), line) << e.what();
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_parse("1,2\n3,4\n", 1, "header");
  expect_parse("a,b\n1,2\n3\n", 3, "field");
  expect_parse("a,b\n1,2\n3,x\n", 3, "sig.csv:3:3");
  expect_parse("a,b\n1,2\n3,nan\n", 3, "sig.csv:3");
  expect_parse("", 1, "sig.csv");
}

TEST(StationCsv, ParseAndErrors) {
  std::istringstream ok("station_id,x,y\nA,0,0\nB,3,4\n");
  const auto layout = io::parse_station_csv(ok);
  ASSERT_EQ(layout.ids.size(), 2u);
  EXPECT_EQ(layout.ids[1], "B");
  std::istringstream bad("id,x,y\nA,0,0\n");
  EXPECT_THROW(io::parse_station_csv(bad), ParseError);
}

TEST(GraphJson, RoundTripAndErrors) {
  std::mt19937_64 rng(2);
  const WeightedGraph g(oracle::random_nonnegative(4, rng, false), true);
  const auto back = io::graph_from_json(io::graph_to_json(g));
  EXPECT_EQ(back.weights(), g.weights());
  EXPECT_TRUE(back.directed());
  nlohmann::json j = io::graph_to_json(g);
  j["n"] = 5;
  EXPECT_THROW(io::graph_from_json(j), Error);
  std::istringstream broken("{\n  \"n\": 2,\n  \"weights\": [[0, 1], [1 0]]\n}");
  try {
    io::parse_json(broken, "g.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(CurvesCsv, UndefinedScalesSpelledOut) {
  const auto curve = mvdeg_curve(gen_wgn(2, 12, 3), build_zero_graph(2), {3, 3, 4});
  std::ostringstream out;
  io::write_curves_csv(out, {curve});
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "method,tau,mean,sd,n_realizations");
  EXPECT_NE(text.find("mvDEG,4,undefined,undefined,"), std::string::npos) << text;
}

TEST(Cli, EntropyGoldenValue) {
  TempDir dir;
  write_text(dir / "x.csv", "x\n1\n2\n3\n4\n5\n");
  const auto r = run_cli({"entropy", "--signal", dir / "x.csv", "--m", "2", "--c", "2", "--max-scale", "1", "--graph",
                          "zero", "--out", dir / "curve"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(read_text(dir / "curve.csv").find("mvDEG,1,0.75,0,1"), std::string::npos) << read_text(dir / "curve.csv");
  const auto j = io::read_json(dir / "curve.json");
  EXPECT_EQ(j["records"][0]["mean"].get<double>(), 0.75);
  EXPECT_EQ(j["config"]["m"].get<int>(), 2);

  const auto mde = run_cli({"entropy", "--signal", dir / "x.csv", "--method", "mde", "--m", "2", "--c", "2",
                            "--max-scale", "3", "--out", dir / "mde"});
  ASSERT_EQ(mde.code, 0) << mde.err;
  EXPECT_NE(read_text(dir / "mde.csv").find("MDE,1,0.75"), std::string::npos);
  EXPECT_NE(read_text(dir / "mde.csv").find("MDE,2,undefined"), std::string::npos);
}

TEST(Cli, EntropyErrorExitCodes) {
  TempDir dir;
  write_text(dir / "nohdr.csv", "1\n2\n3\n4\n5\n");
  EXPECT_EQ(run_cli({"entropy", "--signal", dir / "nohdr.csv", "--out", dir / "o"}).code, 2);
  write_text(dir / "bad.csv", "a,b\n1,2\n3,oops\n");
  const auto bad = run_cli({"entropy", "--signal", dir / "bad.csv", "--out", dir / "o"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find(":3:3"), std::string::npos) << bad.err;

  io::write_signal_csv(fs::path(dir / "s3.csv"), gen_wgn(3, 50, 1));
  io::write_graph_json(dir / "g4.json", build_complete_graph(4));
  EXPECT_EQ(run_cli({"entropy", "--signal", dir / "s3.csv", "--graph", "file", "--graph-file", dir / "g4.json", "--out",
                     dir / "o"})
                .code,
            3);
  EXPECT_EQ(run_cli({"entropy", "--signal", dir / "missing.csv", "--out", dir / "o"}).code, 1);
  EXPECT_EQ(run_cli({"entropy", "--signal", dir / "s3.csv", "--m", "1", "--out", dir / "o"}).code, 1);
  EXPECT_EQ(run_cli({"entropy", "--out", dir / "o"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);

  write_text(dir / "flat.csv", "a,b\n1,2\n1,3\n1,4\n");
  EXPECT_EQ(run_cli({"entropy", "--signal", dir / "flat.csv", "--graph", "correlation", "--m", "2", "--out", dir / "o"})
                .code,
            4);
  // A refused classical scale is data, not a failure: it is reported as undefined with the count.
  ASSERT_EQ(run_cli({"entropy", "--signal", dir / "s3.csv", "--method", "mvde", "--m", "4", "--cap", "10", "--out",
                     dir / "o"})
                .code,
            0);
  const auto refused = io::read_json(dir / "o.json")["records"][0];
  EXPECT_FALSE(refused["defined"].get<bool>());
  EXPECT_NE(refused["note"].get<std::string>().find("23265"), std::string::npos) << refused.dump();
}

TEST(Cli, GenerateDeterministicAndShaped) {
  TempDir dir;
  const std::vector<std::string> mix{"generate", "--kind", "mixture", "--q", "2", "--n", "15000", "--seed", "7", "--out"};
  auto a = mix, b = mix;
  a.push_back(dir / "a.csv");
  b.push_back(dir / "b.csv");
  ASSERT_EQ(run_cli(a).code, 0);
  ASSERT_EQ(run_cli(b).code, 0);
  EXPECT_EQ(read_text(dir / "a.csv"), read_text(dir / "b.csv"));
  EXPECT_EQ(read_text(dir / "a.csv.spec.json"), read_text(dir / "b.csv.spec.json"));
  const auto spec = io::read_json(dir / "a.csv.spec.json");
  EXPECT_EQ(spec["kind"], "mixture");
  EXPECT_EQ(spec["q"], 2);
  EXPECT_FALSE(spec["generator_version"].get<std::string>().empty());
  EXPECT_EQ(io::read_signal_csv(dir / "a.csv"), gen_mixture_F(2, 15000, 7));

  ASSERT_EQ(run_cli({"generate", "--kind", "one_over_f", "--p", "3", "--n", "744", "--out", dir / "pink.csv"}).code, 0);
  const std::string pink = read_text(dir / "pink.csv");
  EXPECT_EQ(line_count(pink), 745u);
  const auto header = pink.substr(0, pink.find('\n'));
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 2);
}

TEST(Cli, GenerateCorrelated) {
  TempDir dir;
  write_text(dir / "bad.json", "[[1, 0.9, -0.9], [0.9, 1, 0.9], [-0.9, 0.9, 1]]");
  const auto r = run_cli({"generate", "--kind", "correlated", "--corr", dir / "bad.json", "--n", "100", "--out", dir / "c.csv"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("minor 3"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir / "c.csv"));

  write_text(dir / "ok.json", "{\"corr\": [[1, 0.5], [0.5, 1]]}");
  ASSERT_EQ(run_cli({"generate", "--kind", "correlated", "--corr", dir / "ok.json", "--n", "100", "--out", dir / "c.csv"}).code, 0);
  EXPECT_EQ(io::read_signal_csv(dir / "c.csv").channels(), 2u);
  write_text(dir / "broken.json", "[[1, 0.5],\n [0.5 1]]");
  EXPECT_EQ(run_cli({"generate", "--kind", "correlated", "--corr", dir / "broken.json", "--out", dir / "c.csv"}).code, 2);
}

TEST(Cli, GraphCommandAndGaussianStations) {
  TempDir dir;
  std::string stations = "station_id,x,y\n";
  for (int i = 0; i < 37; ++i) stations += "S" + std::to_string(i) + "," + std::to_string(i % 7) + "," + std::to_string(i / 7) + "\n";
  write_text(dir / "stations.csv", stations);
  ASSERT_EQ(run_cli({"graph", "--kind", "gaussian", "--coords", dir / "stations.csv", "--sigma1-sq", "2", "--sigma2",
                     "1.5", "--out", dir / "g.json"})
                .code,
            0);
  const auto g = io::read_graph_json(dir / "g.json");
  EXPECT_EQ(g.size(), 37u);
  EXPECT_NEAR(g(0, 1), std::exp(-0.25), 1e-15);
  EXPECT_EQ(g(0, 2), 0.0);

  io::write_signal_csv(fs::path(dir / "s.csv"), gen_wgn(37, 744, 3));
  const auto r = run_cli({"entropy", "--signal", dir / "s.csv", "--graph", "gaussian", "--coords", dir / "stations.csv",
                          "--sigma1-sq", "2", "--sigma2", "1.5", "--m", "4", "--c", "6", "--max-scale", "3", "--out",
                          dir / "e"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(io::read_json(dir / "e.json")["records"][2]["defined"].get<bool>());

  ASSERT_EQ(run_cli({"graph", "--kind", "complete", "--p", "3", "--out", dir / "k.json"}).code, 0);
  EXPECT_EQ(io::read_graph_json(dir / "k.json").edge_count(), 6u);
  ASSERT_EQ(run_cli({"graph", "--kind", "correlation", "--signal", dir / "s.csv", "--out", dir / "r.json"}).code, 0);
  EXPECT_EQ(run_cli({"graph", "--kind", "zero", "--out", dir / "z.json"}).code, 1);
}

TEST(Cli, BenchRowsAndUsage) {
  TempDir dir;
  EXPECT_EQ(run_cli({"bench", "--N", "", "--out", dir / "b"}).code, 1);
  EXPECT_EQ(run_cli({"bench", "--N", "100,abc", "--out", dir / "b"}).code, 1);
  const auto r = run_cli({"bench", "--methods", "classical", "--N", "2000", "--p", "8", "--m", "5", "--out", dir / "b"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = read_text(dir / "b.csv");
  EXPECT_NE(csv.find("classical,2000,8,5,6,refused-capacity,,1313383968,15960"), std::string::npos) << csv;
  const auto j = io::read_json(dir / "b.json");
  EXPECT_EQ(j["records"].size(), 1u);
  EXPECT_FALSE(j["environment"]["cpu"].get<std::string>().empty());
}

TEST(Cli, SmallEnsembles) {
  TempDir dir;
  const auto r = run_cli({"ensemble", "--preset", "mixture", "--realizations", "2", "--n", "400", "--max-scale", "2",
                          "--seed", "5", "--out", dir / "mix"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::read_json(dir / "mix.json");
  EXPECT_EQ(j["curves"].size(), 4u);

  write_text(dir / "experiment.json", R"({
  "experiment": "noise", "graph_policy": "theoretical", "m": 3, "c": 4, "max_scale": 2,
  "realizations": 3, "seed": 11,
  "conditions": [
    {"label": "pair", "kind": "correlated", "n": 300, "blocks": [2, 1], "rho": 0.8},
    {"label": "white", "kind": "wgn", "p": 3, "n": 300}
  ]
})");
  ASSERT_EQ(run_cli({"ensemble", "--config", dir / "experiment.json", "--out", dir / "cfg"}).code, 0);
  const std::string csv = read_text(dir / "cfg.csv");
  EXPECT_NE(csv.find("pair,1,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("white,2,"), std::string::npos) << csv;
  // Same config, same bytes.
  ASSERT_EQ(run_cli({"ensemble", "--config", dir / "experiment.json", "--out", dir / "cfg2"}).code, 0);
  EXPECT_EQ(read_text(dir / "cfg2.csv"), csv);

  write_text(dir / "broken.json", "{\"conditions\": [}");
  EXPECT_EQ(run_cli({"ensemble", "--config", dir / "broken.json", "--out", dir / "x"}).code, 2);
  EXPECT_EQ(run_cli({"ensemble", "--out", dir / "x"}).code, 1);
}
