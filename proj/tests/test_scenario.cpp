#include <gtest/gtest.h>

#include <cstdio>

#include "ultraglab/scenario.hpp"
#include "ultraglab/selftest.hpp"

using namespace ultraglab;

TEST(ScenarioParse, MissingNetsIsAValidationError) {
  const json doc = json::parse(R"({"sigma": 2.0, "dim": 1})");
  const auto rr = run_scenario_doc(doc, 1);
  EXPECT_EQ(rr.exit_code, 2);
}

TEST(ScenarioParse, BadSigmaRejected) {
  const json doc = json::parse(R"({"sigma": 0.5, "nets": []})");
  const auto rr = run_scenario_doc(doc, 1);
  EXPECT_EQ(rr.exit_code, 2);
}

TEST(ScenarioRun, EmptyAnalysesYieldsEchoOnlyReport) {
  const json doc = json::parse(R"({
    "sigma": 2.0, "dim": 1,
    "box": {"lo": [-2.0], "hi": [2.0], "n": [512]},
    "mollifier": {"halfwidth": 8.0, "n": 1024},
    "nets": [{"id": "g", "builtin": "gaussian"}],
    "analyses": []
  })");
  const auto rr = run_scenario_doc(doc, 1);
  EXPECT_EQ(rr.exit_code, 0);
  EXPECT_EQ(rr.report.at("scenario"), doc);
  EXPECT_TRUE(rr.report.at("analyses").empty());
}

TEST(ScenarioRun, ScenarioEchoRoundTripsThroughSerialization) {
  const json doc = delta_battery_scenario();
  const json reparsed = json::parse(doc.dump());
  EXPECT_EQ(doc, reparsed);
  const Scenario sc = parse_scenario(doc);
  EXPECT_EQ(sc.raw, doc);
}

TEST(ScenarioRun, FailedAnalysisIsReportedAndOthersContinue) {
  const json doc = json::parse(R"({
    "sigma": 2.0, "dim": 1,
    "box": {"lo": [-2.0], "hi": [2.0], "n": [512]},
    "mollifier": {"halfwidth": 8.0, "n": 1024},
    "nets": [{"id": "g", "builtin": "gaussian"}],
    "analyses": [
      {"type": "classify", "net": "g", "max_order": 1},
      {"type": "regularity", "net": "g"},
      {"type": "classify", "net": "g", "max_order": 1}
    ]
  })");
  const auto rr = run_scenario_doc(doc, 1);
  EXPECT_EQ(rr.exit_code, 3);  // the regularity of an unsupported net fails
  const auto& recs = rr.report.at("analyses");
  EXPECT_EQ(recs[0].at("status"), "ok");
  EXPECT_EQ(recs[1].at("status"), "error");
  EXPECT_EQ(recs[2].at("status"), "ok");
}

TEST(ScenarioRun, ThreadCountDoesNotChangeTheReport) {
  const json doc = json::parse(R"({
    "sigma": 2.0, "dim": 1,
    "box": {"lo": [-2.0], "hi": [2.0], "n": [1024]},
    "mollifier": {"halfwidth": 8.0, "n": 2048},
    "nets": [
      {"id": "d", "builtin": "mollified_delta"},
      {"id": "g", "builtin": "gaussian"},
      {"id": "p", "polynomial": {"of": "g", "coeffs": [0.0, 1.0, 0.5]}}
    ],
    "analyses": [
      {"type": "classify", "net": "d", "max_order": 1},
      {"type": "classify", "net": "p", "max_order": 1},
      {"type": "point_value", "net": "g", "point": {"kind": "classical", "x": [0.25]}},
      {"type": "sigma_cone", "net": "d"}
    ]
  })");
  const auto a = run_scenario_doc(doc, 1);
  const auto b = run_scenario_doc(doc, 2);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.report.dump(), b.report.dump());
  EXPECT_EQ(a.fits_csv, b.fits_csv);
}

TEST(ScenarioRun, FitCsvHasTheContractColumns) {
  const json doc = json::parse(R"({
    "sigma": 2.0, "dim": 1,
    "box": {"lo": [-2.0], "hi": [2.0], "n": [512]},
    "mollifier": {"halfwidth": 8.0, "n": 1024},
    "nets": [{"id": "g", "builtin": "gaussian"}],
    "analyses": [{"type": "classify", "net": "g", "max_order": 1}]
  })");
  const auto rr = run_scenario_doc(doc, 1);
  ASSERT_EQ(rr.exit_code, 0);
  EXPECT_EQ(rr.fits_csv.substr(0, rr.fits_csv.find('\n')),
            "net_id,alpha,sigma,log_c,k,sign,residual,saturated_count");
  EXPECT_NE(rr.fits_csv.find("g,(0),2"), std::string::npos);
}

TEST(ScenarioRun, SpectraCsvHasTheContractColumns) {
  const json doc = json::parse(R"({
    "sigma": 2.0, "dim": 1,
    "box": {"lo": [-2.0], "hi": [2.0], "n": [1024]},
    "mollifier": {"halfwidth": 8.0, "n": 2048},
    "nets": [{"id": "d", "builtin": "mollified_delta"}],
    "analyses": [{"type": "spectrum", "net": "d"}]
  })");
  const auto rr = run_scenario_doc(doc, 1);
  ASSERT_EQ(rr.exit_code, 0);
  EXPECT_EQ(rr.spectra_csv.substr(0, rr.spectra_csv.find('\n')),
            "net_id,x0,bin,eps,xi_shell,magnitude,saturated");
}

TEST(BinaryNetFormat, RoundTripIsBitExact) {
  const Box box = Box::make1d(-1.0, 1.0, 256);
  SampledNetData data;
  data.box = box;
  data.eps_values = {0.1, 0.01};
  for (double eps : data.eps_values) {
    std::vector<cplx> arr(box.total_samples());
    for (long j = 0; j < box.total_samples(); ++j) {
      const double x = box.coord(0, int(j));
      arr[j] = cplx(std::sin(x / eps) * std::exp(-x * x), std::cos(3 * x));
    }
    data.arrays.push_back(std::move(arr));
  }
  const std::string path = "/tmp/ultraglab_net_test.bin";
  write_net_binary(path, data);
  const auto back = read_net_binary(path);
  EXPECT_EQ(back.box.n[0], box.n[0]);
  EXPECT_EQ(back.eps_values, data.eps_values);
  for (size_t i = 0; i < data.arrays.size(); ++i)
    for (size_t j = 0; j < data.arrays[i].size(); ++j)
      EXPECT_EQ(back.arrays[i][j], data.arrays[i][j]);

  const Net net = sampled_net("imported", back);
  EXPECT_EQ(net.eval(0.1, {box.coord(0, 17), 0.0}), data.arrays[0][17]);
  EXPECT_THROW(net.eval(0.5, {0.0, 0.0}), OutOfDomain);
  std::remove(path.c_str());
}

TEST(BinaryNetFormat, ImportedNetsWorkInScenarios) {
  const Box box = Box::make1d(-2.0, 2.0, 1024);
  BuiltinParams p;
  p.width = 0.5;
  const Net g = builtin_net("gaussian", p);
  EpsGrid grid = EpsGrid::standard();
  write_net_binary("/tmp/ultraglab_scn_import.bin", sample_net_data(g, box, grid));
  const json doc = json::parse(R"({
    "sigma": 2.0, "dim": 1,
    "box": {"lo": [-2.0], "hi": [2.0], "n": [1024]},
    "mollifier": {"halfwidth": 8.0, "n": 1024},
    "nets": [{"id": "ext", "import": {"path": "/tmp/ultraglab_scn_import.bin"}}],
    "analyses": [{"type": "classify", "net": "ext", "max_order": 1}]
  })");
  const auto rr = run_scenario_doc(doc, 1);
  EXPECT_EQ(rr.exit_code, 0);
  EXPECT_EQ(rr.report.at("analyses")[0].at("analysis").at("result").at("verdict"), "Moderate");
  std::remove("/tmp/ultraglab_scn_import.bin");
}
