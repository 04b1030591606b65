#include <functional>
#include <random>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "scq/device.hpp"

using namespace scq;
using nlohmann::json;

namespace {

std::string edited(const std::function<void(json&)>& edit) {
  json doc = json::parse(default_device_document());
  edit(doc);
  return doc.dump();
}

}  // namespace

TEST(DeviceSpec, DefaultDocumentShape) {
  const DeviceSpec& d = default_device();
  EXPECT_EQ(d.name, "scq10");
  ASSERT_EQ(d.num_qubits(), 10);
  ASSERT_EQ(d.couplers.size(), 9u);
  ASSERT_EQ(d.crosstalk.size(), 10);
  EXPECT_EQ(d.single_gate_duration.text(), "30");
  EXPECT_DOUBLE_EQ(d.avg_single_gate_fidelity, 0.997);
  EXPECT_DOUBLE_EQ(d.avg_cz_fidelity, 0.955);
}

TEST(DeviceSpec, TableValues) {
  const DeviceSpec& d = default_device();
  EXPECT_EQ(d.qubits[0].f0.text(), "0.9850");
  EXPECT_EQ(d.qubits[0].f1.text(), "0.9420");
  EXPECT_DOUBLE_EQ(d.qubits[0].f0, 0.985);
  EXPECT_DOUBLE_EQ(d.qubits[0].f1, 0.942);
  EXPECT_DOUBLE_EQ(d.couplers[0].cz_process_fidelity, 0.9682);
  EXPECT_DOUBLE_EQ(d.couplers[0].cz_duration, 48.9);
  EXPECT_DOUBLE_EQ(d.crosstalk.m(1, 2), -0.019);
  EXPECT_EQ(d.crosstalk.records[1 * 10 + 2], "-0.019");
  EXPECT_DOUBLE_EQ(d.crosstalk.m(9, 8), -0.03);
}

TEST(DeviceSpec, CouplerLookup) {
  const DeviceSpec& d = default_device();
  ASSERT_NE(d.coupler(3, 4), nullptr);
  EXPECT_EQ(d.coupler(4, 3), d.coupler(3, 4));
  EXPECT_EQ(d.coupler(3, 4)->pair, std::make_pair(3, 4));
  EXPECT_EQ(d.coupler(0, 2), nullptr);
  EXPECT_EQ(d.coupler(9, 10), nullptr);
}

TEST(DeviceSpec, RoundTripIsTextExact) {
  const DeviceSpec& d = default_device();
  const std::string text = serialize_device_spec(d);
  const DeviceSpec again = load_device_spec(text);
  EXPECT_EQ(again, d);
  EXPECT_EQ(serialize_device_spec(again), text);
  for (std::size_t i = 0; i < d.qubits.size(); ++i) {
    EXPECT_EQ(again.qubits[i].t2_star.text(), d.qubits[i].t2_star.text());
  }
}

TEST(DeviceSpec, RejectsInsensibleReadoutFidelity) {
  const auto doc = edited([](json& j) { j["qubits"][3]["f0"] = "0.4"; });
  try {
    load_device_spec(doc);
    FAIL() << "expected DeviceSpecError";
  } catch (const DeviceSpecError& e) {
    EXPECT_EQ(e.path(), "qubits[3].f0");
    EXPECT_NE(std::string(e.what()).find("confusion matrix not invertible/sensible"), std::string::npos);
  }
}

TEST(DeviceSpec, RejectsBadDocuments) {
  EXPECT_THROW(load_device_spec("{not json"), DeviceSpecError);
  EXPECT_THROW(load_device_spec(edited([](json& j) { j["qubits"][0]["t1_us"] = "0"; })), DeviceSpecError);
  EXPECT_THROW(load_device_spec(edited([](json& j) { j["qubits"][2]["index"] = 5; })), DeviceSpecError);
  EXPECT_THROW(load_device_spec(edited([](json& j) { j["couplers"].erase(4); })), DeviceSpecError);
  EXPECT_THROW(load_device_spec(edited([](json& j) { j["couplers"][1]["g_mhz"] = "40"; })), DeviceSpecError);
  EXPECT_THROW(load_device_spec(edited([](json& j) { j["crosstalk"][4][4] = "0.9"; })), DeviceSpecError);
  EXPECT_THROW(load_device_spec(edited([](json& j) { j["qubits"][0]["f1"] = "abc"; })), DeviceSpecError);
  EXPECT_THROW(load_device_spec(edited([](json& j) { j["qubits"] = json::array(); })), DeviceSpecError);
}

TEST(Crosstalk, IdentityIsNoOp) {
  CrosstalkMatrix ct;
  ct.m = Eigen::MatrixXd::Identity(10, 10);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(10);
  z(0) = 1;
  EXPECT_TRUE(crosstalk_compensate(ct, z).isApprox(z, 0.0));
}

TEST(Crosstalk, MatchesGaussianEliminationOracle) {
  const CrosstalkMatrix& ct = default_device().crosstalk;
  std::vector<std::vector<double>> rows(10, std::vector<double>(10));
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = ct.m(i, j);
  for (int unit = 0; unit < 10; ++unit) {
    std::vector<double> e(10, 0.0);
    e[static_cast<std::size_t>(unit)] = 1.0;
    const auto expected = oracle::gauss_solve(rows, e);
    Eigen::VectorXd z = Eigen::VectorXd::Unit(10, unit);
    const Eigen::VectorXd got = crosstalk_compensate(ct, z);
    for (int i = 0; i < 10; ++i) EXPECT_NEAR(got(i), expected[static_cast<std::size_t>(i)], 1e-13);
  }
}

TEST(Crosstalk, RoundTripOnRandomVectors) {
  const CrosstalkMatrix& ct = default_device().crosstalk;
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd z(10);
    for (int i = 0; i < 10; ++i) z(i) = nd(gen);
    const Eigen::VectorXd back = ct.m * crosstalk_compensate(ct, z);
    EXPECT_LE((back - z).norm(), 1e-10 * z.norm());
  }
}

TEST(Crosstalk, Errors) {
  const CrosstalkMatrix& ct = default_device().crosstalk;
  EXPECT_THROW(crosstalk_compensate(ct, Eigen::VectorXd::Zero(3)), std::invalid_argument);
  CrosstalkMatrix singular;
  singular.m = Eigen::MatrixXd::Ones(3, 3);
  EXPECT_THROW(crosstalk_compensate(singular, Eigen::VectorXd::Ones(3)), std::domain_error);
}
