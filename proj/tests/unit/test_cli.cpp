#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "cli.hpp"
#include "plot.hpp"
#include "superosc/error.hpp"
#include "superosc/io.hpp"

using namespace superosc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag) {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() / "superosc-cli-tests" / (std::string(info->name()) + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(Cli, HelpAndUsage) {
  EXPECT_EQ(run({"--help"}), cli::kExitOk);
  EXPECT_EQ(run({}), cli::kExitValidation);
  EXPECT_EQ(run({"frobnicate"}), cli::kExitValidation);
  EXPECT_EQ(run({"figure", "fig9"}), cli::kExitValidation);
}

TEST(Cli, ValidationExitCode) {
  const auto dir = scratch("");
  std::string err;
  EXPECT_EQ(run({"--out", dir.string(), "--quiet", "respond", "--omega", "1"}, &err),
            cli::kExitValidation);
  EXPECT_NE(err.find("inputs.signal"), std::string::npos) << err;
  EXPECT_EQ(run({"--out", dir.string(), "--config", (dir / "absent.json").string(), "synthesize"}),
            cli::kExitValidation);
}

TEST(Cli, NumericalExitCode) {
  const auto dir = scratch("");
  io::write_file(dir / "m.json", io::json::parse(R"({
    "inputs": {"signal": {"bandlimit": 1.5, "centers": [0.0], "weights": [1.0]}},
    "grid": "0:10:1"})"));
  std::string err;
  EXPECT_EQ(run({"--out", dir.string(), "--quiet", "--config", (dir / "m.json").string(),
                 "dispersive", "--k", "1", "--Lambda", "10"},
                &err),
            cli::kExitNumerical);
  EXPECT_NE(err.find("ResonanceInBand"), std::string::npos) << err;
}

TEST(Cli, SynthesizeWritesBundle) {
  const auto dir = scratch("");
  io::write_file(dir / "spec.json", io::json::parse(
      R"({"bandlimit": 1.0, "times": [-1, 0, 1], "amplitudes": [0.5, 1.0, 0.5]})"));
  EXPECT_EQ(run({"--quiet", "--out", dir.string(), "--config", (dir / "spec.json").string(), "synthesize"}),
            cli::kExitOk);
  EXPECT_TRUE(fs::exists(dir / "signal.json"));
  EXPECT_TRUE(fs::exists(dir / "signal.csv"));
}

TEST(Figures, RerunsAreByteIdentical) {
  for (const std::string which : {"fig1", "fig2", "fig3"}) {
    const auto a = scratch(which + "a"), b = scratch(which + "b");
    ASSERT_EQ(run({"--quiet", "--out", a.string(), "figure", which}), cli::kExitOk);
    ASSERT_EQ(run({"--quiet", "--out", b.string(), "figure", which}), cli::kExitOk);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      const auto other = b / entry.path().filename();
      ASSERT_TRUE(fs::exists(other)) << other;
      EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path();
      ++files;
    }
    EXPECT_GE(files, 2u) << which;
  }
}

TEST(Figures, ResponsePlotHasOneDenseCurve) {
  const auto dir = scratch("");
  ASSERT_EQ(run({"--quiet", "--out", dir.string(), "figure", "fig2"}), cli::kExitOk);
  const std::string svg = slurp(dir / "fig2.svg");
  EXPECT_EQ(count(svg, "<polyline"), 1u);
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, std::regex("points=\"([^\"]*)\"")));
  EXPECT_GE(count(m[1].str(), ","), 200u);
}

TEST(Plot, ConstantSeriesRenders) {
  plot::PlotSpec spec;
  plot::Series s;
  s.x_column = "x";
  s.y_column = "y";
  s.table.add("x", {0.0, 1.0, 2.0});
  s.table.add("y", {3.0, 3.0, 3.0});
  spec.series.push_back(s);
  const std::string svg = plot::render_svg(spec);
  EXPECT_EQ(count(svg, "<polyline"), 1u);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
}

TEST(Plot, LogAxisLabelsDecades) {
  plot::PlotSpec spec;
  spec.log_y = true;
  plot::Series s;
  s.x_column = "x";
  s.y_column = "y";
  s.table.add("x", {0.0, 1.0, 2.0, 3.0});
  s.table.add("y", {1e-3, 1e-1, 10.0, 1e3});
  spec.series.push_back(s);
  const std::string svg = plot::render_svg(spec);
  for (const char* label : {">1e-3<", ">1e0<", ">1e3<"}) EXPECT_NE(svg.find(label), std::string::npos) << label;
}

TEST(Plot, MissingColumn) {
  const auto dir = scratch("");
  std::ofstream(dir / "d.csv") << "t,v\n0,1\n1,2\n";
  plot::PlotSpec spec;
  plot::Series s;
  s.csv = dir / "d.csv";
  s.x_column = "t";
  s.y_column = "w";
  spec.series.push_back(s);
  spec.output = dir / "p.svg";
  try {
    plot::emit_plot(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingColumn);
  }
  io::write_file(dir / "plot.json", io::json::parse(R"({"series": [{"csv": "d.csv", "x": "t", "y": "w"}]})"));
  EXPECT_EQ(run({"--quiet", "--out", dir.string(), "--config", (dir / "plot.json").string(), "plot"}),
            cli::kExitValidation);
}
