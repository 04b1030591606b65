#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "scq/qasm.hpp"

using namespace scq;
using std::numbers::pi;

namespace {

qasm::SourceError single_error(std::string_view text) {
  const auto r = qasm::parse(text);
  EXPECT_FALSE(r.ok()) << text;
  EXPECT_EQ(r.errors.size(), 1u) << text;
  return r.errors.empty() ? qasm::SourceError{} : r.errors.front();
}

}  // namespace

TEST(Parse, SingleRotation) {
  const auto r = qasm::parse("qubits 1\nrx 0 1.5707963\nmeasure 0");
  ASSERT_TRUE(r.ok());
  Circuit want(1);
  want.rx(0, 1.5707963).measure({0});
  EXPECT_EQ(*r.circuit, want);
}

TEST(Parse, ScannedRotation) {
  const auto r = qasm::parse(
      "qubits 10\nscan linspace -1.5707963 1.5707963 51\nrz 0 s*-1\nrx 0 1.5707963\nmeasure 0");
  ASSERT_TRUE(r.ok());
  const Circuit& c = *r.circuit;
  EXPECT_EQ(c.gates()[0], Gate::rotation(GateKind::RZ, 0, Scanned{-1}));
  EXPECT_EQ(*c.scan(), (ScanSpec{-1.5707963, 1.5707963, 51}));
  EXPECT_EQ(c.measured(), std::vector<int>{0});
}

TEST(Parse, CaseCommentsAndBlankLines) {
  const auto r = qasm::parse("# header\n\nQUBITS 2   # two\n  H 0\nCnOt 0 1\n\nMeasure 0 1 # done\n");
  ASSERT_TRUE(r.ok());
  Circuit want(2);
  want.h(0).cnot(0, 1).measure({0, 1});
  EXPECT_EQ(*r.circuit, want);
}

TEST(ParseErrors, QubitOutOfRange) {
  const auto e = single_error("qubits 2\ncnot 0 5\nmeasure 0 1");
  EXPECT_EQ(e.line, 2);
  EXPECT_EQ(e.column, 8);
  EXPECT_EQ(e.message, "qubit index 5 out of range");
}

TEST(ParseErrors, EachKindIsLocated) {
  EXPECT_EQ(single_error("qubits 1\nfoo 0\nmeasure 0").line, 2);
  EXPECT_NE(single_error("qubits 1\nfoo 0\nmeasure 0").message.find("unknown mnemonic"), std::string::npos);
  EXPECT_NE(single_error("qubits 2\ncnot 0\nmeasure 0").message.find("expects 2 operands"), std::string::npos);
  EXPECT_NE(single_error("qubits 1\nrz 0 s*2\nmeasure 0").message.find("without a scan"), std::string::npos);
  EXPECT_EQ(single_error("qubits 1\nmeasure 0\nh 0").line, 3);
  EXPECT_NE(single_error("qubits 1\nscan linspace 0 1 3\nscan linspace 0 1 3\nmeasure 0").message.find("duplicate scan"),
            std::string::npos);
  const auto missing = single_error("h 0\nmeasure 0");
  EXPECT_EQ(missing.line, 1);
  EXPECT_NE(missing.message.find("missing qubits header"), std::string::npos);
  EXPECT_EQ(single_error("").line, 1);
  EXPECT_EQ(single_error("qubits 1\nrx 0 abc\nmeasure 0").column, 6);
}

TEST(ParseErrors, GarbageIsLineOne) {
  const auto r = qasm::parse("%%% this is not a program");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.errors.front().line, 1);
}

TEST(ParseErrors, OneBadLineGivesOneError) {
  const std::string good = "qubits 3\nh 1\ncnot 1 0\ncnot 1 2\n";
  const std::vector<std::string> bad = {"rx 0", "cnot 0 0", "bogus 1", "rz 1 s*", "h 9", "ry 0 1..2"};
  for (const auto& line : bad) {
    const auto r = qasm::parse(good + line + "\nmeasure 0 1 2");
    ASSERT_EQ(r.errors.size(), 1u) << line;
    EXPECT_EQ(r.errors[0].line, 5) << line;
  }
}

TEST(Serialize, CanonicalGhz) {
  EXPECT_EQ(qasm::serialize(build_ghz(2)), "qubits 2\nh 1\ncnot 1 0\nmeasure 0 1");
}

TEST(Serialize, ScannedMultiplier) {
  Circuit c(1);
  c.set_scan(ScanSpec{-1, 1, 3});
  c.rz(0, Scanned{-1}).measure({0});
  EXPECT_EQ(qasm::serialize(c), "qubits 1\nscan linspace -1 1 3\nrz 0 s*-1\nmeasure 0");
}

TEST(Serialize, ParityCircuitsRoundTrip) {
  for (int n = 1; n <= 10; ++n) {
    for (int offset = 0; offset + n <= 10; ++offset) {
      const Circuit c = append_parity_stage(build_ghz(n, offset, 10), default_parity_scan());
      const auto r = qasm::parse(qasm::serialize(c));
      ASSERT_TRUE(r.ok());
      EXPECT_EQ(*r.circuit, c);
    }
  }
}

TEST(Property, RandomCircuitsRoundTrip) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    const Circuit c = gen::random_circuit(rng);
    const std::string text = qasm::serialize(c);
    const auto r = qasm::parse(text);
    ASSERT_TRUE(r.ok()) << text << "\n" << (r.errors.empty() ? "" : r.errors[0].to_string());
    ASSERT_EQ(*r.circuit, c) << text;
    ASSERT_EQ(qasm::serialize(*r.circuit), text);
  }
}

TEST(Property, ParserIsTotal) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 2000; ++i) {
    const std::string text = gen::random_text(rng);
    const auto r = qasm::parse(text);
    EXPECT_EQ(r.ok(), r.circuit.has_value());
    if (!r.ok()) {
      for (const auto& e : r.errors) {
        EXPECT_GE(e.line, 1);
        EXPECT_GE(e.column, 1);
        EXPECT_FALSE(e.message.empty());
      }
    }
  }
}
