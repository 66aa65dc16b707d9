#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rvdsp/perf_model.hpp"
#include "support/oracle.hpp"

using namespace rvdsp;
using namespace rvdsp::perf;

TEST_SUITE("perf-model") {

TEST_CASE("worked example N=1024 K=16") {
  const ConvWorkload w{1024, 16};
  CHECK(w.outputs() == 1009);
  CHECK(sw_conv_cycles(w) == 166485);
  CHECK(dsp_conv_busy_cycles(w) == 49441);
  CHECK(dsp_conv_cycles(w) == 49451);
  CHECK(speedup(w) == doctest::Approx(3.3667).epsilon(0.0003));
  CHECK(latency_seconds(166485, 100e6) == doctest::Approx(1.66485e-3));
  CHECK(latency_seconds(49451, 100e6) == doctest::Approx(0.49451e-3));
}

TEST_CASE("formulas agree with the oracle over a grid") {
  for (std::uint64_t n = 1; n <= 300; n += 7) {
    for (std::uint64_t k = 1; k <= n; k += 3) {
      const ConvWorkload w{n, k};
      REQUIRE(sw_conv_cycles(w) == oracle::conv_sw(n, k));
      REQUIRE(dsp_conv_busy_cycles(w) == oracle::conv_busy(n, k));
      REQUIRE(dsp_conv_cycles(w, 10, 3) == oracle::conv_busy(n, k) + 13);
    }
  }
}

TEST_CASE("configuration and interrupt overheads") {
  const ConvWorkload w{64, 8};
  CHECK(dsp_conv_cycles(w, 0, 0) == dsp_conv_busy_cycles(w));
  CHECK(dsp_conv_cycles(w, 25, 7) == dsp_conv_busy_cycles(w) + 32);
  CHECK(speedup(w, 0, 0) > speedup(w, 100, 0));
}

TEST_CASE("invalid workloads") {
  CHECK_THROWS_AS(validate(ConvWorkload{8, 0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(ConvWorkload{3, 4}), std::invalid_argument);
  CHECK_THROWS_AS(sw_conv_cycles({3, 4}), std::invalid_argument);
  CHECK_THROWS_AS(latency_seconds(1, 0), std::invalid_argument);
  CHECK_NOTHROW(validate(ConvWorkload{1, 1}));
}

TEST_CASE("cycle counts strictly increase in N") {
  for (std::uint64_t k = 1; k <= 64; k += 9) {
    for (std::uint64_t n = k; n < 4096; ++n) {
      REQUIRE(sw_conv_cycles({n + 1, k}) > sw_conv_cycles({n, k}));
      REQUIRE(dsp_conv_cycles({n + 1, k}) > dsp_conv_cycles({n, k}));
    }
  }
}

// With a product of (N-K+1) and a per-output cost growing in K, the count
// rises with K exactly while the per-output growth beats the lost output.
TEST_CASE("growth in K: exact characterization") {
  for (std::uint64_t n = 2; n <= 4096; n = n < 64 ? n + 1 : n * 2 - 1) {
    for (std::uint64_t k = 1; k < n; ++k) {
      const bool sw_up = sw_conv_cycles({n, k + 1}) > sw_conv_cycles({n, k});
      const bool busy_up = dsp_conv_busy_cycles({n, k + 1}) > dsp_conv_busy_cycles({n, k});
      CAPTURE(n);
      CAPTURE(k);
      REQUIRE(sw_up == (20 * k + 5 < 10 * n));
      REQUIRE(busy_up == (6 * k + 1 < 3 * n));
    }
  }
  // Strictly increasing over the whole range K <= N/2 - 1.
  for (std::uint64_t k = 1; k + 1 <= 1024 / 2 - 1; ++k) {
    REQUIRE(sw_conv_cycles({1024, k + 1}) > sw_conv_cycles({1024, k}));
  }
}

TEST_CASE("speedup bounds") {
  for (std::uint64_t n = 1; n <= 2048; n = n * 3 + 1) {
    for (std::uint64_t k = 1; k <= n; k = k * 2 + 1) {
      const double s = speedup({n, k});
      const double tap_bound = 10.0 / 3.0 + (5.0 / 3.0) / (3.0 * double(k) + 1.0);
      CAPTURE(n);
      CAPTURE(k);
      REQUIRE(s > 1.0);
      REQUIRE(s <= 15.0 / 4.0);
      REQUIRE(s <= tap_bound);
      if (k >= 56) REQUIRE(s < 10.0 / 3.0 + 0.01);
    }
  }
}

TEST_CASE("dot product") {
  CHECK(sw_dot_cycles(8192) == 81925);
  CHECK(dsp_dot_cycles(8192) == 24577);
  CHECK(sw_dot_cycles_rounded(8192) == 81920);
  CHECK(dsp_dot_cycles_rounded(8192) == 24576);
  CHECK(dsp_dot_cycles(3) == 10);
  CHECK(std::abs(dot_speedup(1'000'000) - 10.0 / 3.0) < 0.01);
  for (std::uint64_t l = 1; l < 5000; l += 13) {
    REQUIRE(dsp_dot_cycles(l) == oracle::dot_busy(l));
    REQUIRE(sw_dot_cycles(l) == 10 * l + 5);
  }
}

TEST_CASE("CNN layer arithmetic") {
  const CnnLayerShape s{256, 16, 4, 8};
  CHECK(cnn_layer_macs(s) == 131072);
  const LayerCycles c = cnn_layer_cycles(s);
  CHECK(c.macs == 131072);
  CHECK(c.sw == 1310720);
  CHECK(c.dsp == 393216);
  CHECK(cnn_layer_macs({1, 1, 1, 1}) == 1);
  CHECK(cnn_layer_cycles({1, 1, 1, 1}, 7, 2).sw == 7);
  CHECK(cnn_layer_macs({10, 3, 2, 5, 4}) == 10 * 3 * 2 * 5 * 4);
  CHECK_THROWS_AS(validate(CnnLayerShape{0, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(CnnLayerShape{4, 1, 0, 1}), std::invalid_argument);
}

TEST_CASE("dense layer arithmetic") {
  const DenseLayerShape s{128, 64};
  CHECK(dense_layer_macs(s) == 8192);
  const LayerCycles r = dense_layer_cycles_rounded(s);
  CHECK(r.sw == 81920);
  CHECK(r.dsp == 24576);
  const LayerCycles e = dense_layer_cycles(s);
  CHECK(e.sw == 64 * (10 * 128 + 5));
  CHECK(e.dsp == 64 * (3 * 128 + 1));
  CHECK_THROWS_AS(validate(DenseLayerShape{0, 4}), std::invalid_argument);
}

TEST_CASE("energy per tap") {
  struct Row {
    EnergyParams p;
    double acc, sw;
  };
  const Row rows[] = {
      {{3.1, 0.5, 5.0, 0.0, 0.0}, 13.6, 13.6},
      {{1, 2, 3, 4, 5}, 9, 65},
      {{0.25, 0.125, 10, 2.5, 0.75}, 20.375, 36.375},
  };
  for (const Row& r : rows) {
    CHECK(energy_per_tap(r.p, ExecutionMode::Accelerator) == doctest::Approx(r.acc));
    CHECK(energy_per_tap(r.p, ExecutionMode::Software) == doctest::Approx(r.sw));
  }
  EnergyParams p{1, 1, 1, 1, 1};
  p.regfile_accesses_per_tap = 2;
  CHECK(energy_per_tap(p, ExecutionMode::Software) == doctest::Approx(4 + 4 + 2));
  p.e_mul = -1;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
}

}  // TEST_SUITE
