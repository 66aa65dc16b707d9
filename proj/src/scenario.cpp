#include "rvdsp/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <filesystem>
#include <limits>

#include "rvdsp/hexwords.hpp"
#include "rvdsp/kernels.hpp"
#include "rvdsp/prng.hpp"
#include "rvdsp/reference.hpp"

namespace rvdsp {

std::string_view to_string(ScenarioMode m) {
  return m == ScenarioMode::Testbench ? "testbench" : "full_system";
}

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Conv: return "conv";
    case ScenarioKind::Dot: return "dot";
    case ScenarioKind::CnnLayer: return "cnn";
    case ScenarioKind::DenseLayer: return "dense";
  }
  return "?";
}

std::string_view to_string(Placement p) { return p == Placement::Default ? "default" : "packed"; }

bool ScenarioResult::outputs_match() const noexcept {
  if (dot_result || dot_reference) return dot_result == dot_reference;
  return mismatches == 0 && output.size() == reference.size();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

const std::map<std::string, std::vector<std::string>> kKnownKeys = {
    {"scenario", {"name", "mode", "kind", "seed", "placement", "int_en"}},
    {"conv", {"n", "k", "x_addr", "h_addr", "y_addr", "x", "h", "x_file", "h_file"}},
    {"dot", {"len", "a_addr", "b_addr", "a", "b", "a_file", "b_file"}},
    {"cnn", {"n", "k", "c", "k_out"}},
    {"dense", {"inputs", "outputs"}},
    {"sim", {"truncation", "max_cycles", "frequency_hz", "trace"}},
    {"costs",
     {"alu", "mul", "load", "store", "branch_not_taken", "branch_taken", "jump", "system"}},
};

template <typename T>
T bounded(const KvFile& f, const std::string& sec, const std::string& key, T fallback,
          std::int64_t lo, std::int64_t hi) {
  const auto v = f.integer(sec, key);
  if (!v) return fallback;
  if (*v < lo || *v > hi) {
    throw ConfigError("[" + sec + "] " + key + " = " + std::to_string(*v) + " is out of range");
  }
  return static_cast<T>(*v);
}

std::optional<Address> address(const KvFile& f, const std::string& sec, const std::string& key) {
  if (!f.has(sec, key)) return std::nullopt;
  return bounded<Address>(f, sec, key, 0, 0, std::numeric_limits<Address>::max());
}

std::vector<std::int32_t> data(const KvFile& f, const std::string& sec, const std::string& key,
                               const std::string& base_dir) {
  const bool inline_data = f.has(sec, key);
  const bool file_data = f.has(sec, key + "_file");
  if (inline_data && file_data) {
    throw ConfigError("[" + sec + "] sets both " + key + " and " + key + "_file");
  }
  std::vector<std::int32_t> out;
  if (inline_data) {
    const std::vector<std::int64_t> values = *f.integers(sec, key);
    for (const std::int64_t v : values) {
      if (v < INT32_MIN || v > static_cast<std::int64_t>(UINT32_MAX)) {
        throw ConfigError("[" + sec + "] " + key + ": element " + std::to_string(v) +
                          " does not fit in 32 bits");
      }
      out.push_back(static_cast<std::int32_t>(static_cast<Word>(v)));
    }
  } else if (file_data) {
    std::filesystem::path p = *f.string(sec, key + "_file");
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    try {
      for (const ImageWord& w : read_hexwords_file(p)) {
        out.push_back(static_cast<std::int32_t>(w.value));
      }
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

TraceLevel parse_trace_level(const std::string& s) {
  if (s == "off") return TraceLevel::Off;
  if (s == "events") return TraceLevel::Events;
  if (s == "verbose") return TraceLevel::Verbose;
  throw ConfigError("[sim] trace must be off, events or verbose");
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& base_dir) {
  try {
    const KvFile f = KvFile::parse(text);
    f.require_known(kKnownKeys);
    Scenario s;

    s.name = f.string("scenario", "name").value_or(s.name);
    const std::string mode = f.string("scenario", "mode").value_or("testbench");
    if (mode == "testbench") s.mode = ScenarioMode::Testbench;
    else if (mode == "full_system") s.mode = ScenarioMode::FullSystem;
    else throw ConfigError("[scenario] mode must be testbench or full_system");

    const auto kind = f.string("scenario", "kind");
    if (!kind) throw ConfigError("[scenario] kind is required");
    if (*kind == "conv") s.kind = ScenarioKind::Conv;
    else if (*kind == "dot") s.kind = ScenarioKind::Dot;
    else if (*kind == "cnn") s.kind = ScenarioKind::CnnLayer;
    else if (*kind == "dense") s.kind = ScenarioKind::DenseLayer;
    else throw ConfigError("[scenario] kind must be conv, dot, cnn or dense");

    if (const auto p = f.string("scenario", "placement")) {
      if (*p == "default") s.placement = Placement::Default;
      else if (*p == "packed") s.placement = Placement::Packed;
      else throw ConfigError("[scenario] placement must be default or packed");
    }
    if (const auto seed = f.integer("scenario", "seed")) s.seed = static_cast<std::uint64_t>(*seed);
    s.int_en = f.boolean("scenario", "int_en").value_or(false);

    constexpr std::int64_t kU32 = std::numeric_limits<std::uint32_t>::max();
    s.x = data(f, "conv", "x", base_dir);
    s.h = data(f, "conv", "h", base_dir);
    s.n = bounded<std::uint32_t>(f, "conv", "n", static_cast<std::uint32_t>(s.x.size()), 0, kU32);
    s.k = bounded<std::uint32_t>(f, "conv", "k", static_cast<std::uint32_t>(s.h.size()), 0, kU32);
    s.x_addr = address(f, "conv", "x_addr");
    s.h_addr = address(f, "conv", "h_addr");
    s.y_addr = address(f, "conv", "y_addr");

    s.a = data(f, "dot", "a", base_dir);
    s.b = data(f, "dot", "b", base_dir);
    s.len = bounded<std::uint32_t>(f, "dot", "len", static_cast<std::uint32_t>(s.a.size()), 0, kU32);
    s.a_addr = address(f, "dot", "a_addr");
    s.b_addr = address(f, "dot", "b_addr");

    s.cnn.n = bounded<std::uint64_t>(f, "cnn", "n", 0, 0, kU32);
    s.cnn.k = bounded<std::uint64_t>(f, "cnn", "k", 0, 0, kU32);
    s.cnn.c = bounded<std::uint64_t>(f, "cnn", "c", 0, 0, kU32);
    s.cnn.k_out = bounded<std::uint64_t>(f, "cnn", "k_out", 0, 0, kU32);
    s.dense.inputs = bounded<std::uint64_t>(f, "dense", "inputs", 0, 0, kU32);
    s.dense.outputs = bounded<std::uint64_t>(f, "dense", "outputs", 0, 0, kU32);

    if (const auto t = f.string("sim", "truncation")) {
      if (*t == "wrap") s.sim.truncation = TruncationPolicy::Wrap;
      else if (*t == "saturate") s.sim.truncation = TruncationPolicy::Saturate;
      else throw ConfigError("[sim] truncation must be wrap or saturate");
    }
    s.sim.max_cycles = bounded<std::uint64_t>(f, "sim", "max_cycles", s.sim.max_cycles, 1,
                                              std::numeric_limits<std::int64_t>::max());
    s.sim.frequency_hz = f.number("sim", "frequency_hz").value_or(s.sim.frequency_hz);
    if (!(s.sim.frequency_hz > 0)) throw ConfigError("[sim] frequency_hz must be positive");
    if (const auto t = f.string("sim", "trace")) s.sim.trace_level = parse_trace_level(*t);

    const std::pair<const char*, CostClass> costs[] = {
        {"alu", CostClass::Alu},
        {"mul", CostClass::Mul},
        {"load", CostClass::Load},
        {"store", CostClass::Store},
        {"branch_not_taken", CostClass::BranchNotTaken},
        {"branch_taken", CostClass::BranchTaken},
        {"jump", CostClass::Jump},
        {"system", CostClass::System},
    };
    for (const auto& [key, cls] : costs) {
      if (f.has("costs", key)) s.sim.costs.set(cls, bounded<std::uint32_t>(f, "costs", key, 1, 1, 1000));
    }
    return s;
  } catch (const KvError& e) {
    throw ConfigError(e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  try {
    return parse_scenario(ss.str(), dir.empty() ? "." : dir.string());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Layout and validation

namespace {

std::string hex(Address a) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08X", a);
  return buf;
}

Placement effective_placement(const Scenario& s) {
  if (s.placement) return *s.placement;
  return (s.kind == ScenarioKind::Conv || s.kind == ScenarioKind::Dot) ? Placement::Default
                                                                       : Placement::Packed;
}

constexpr std::uint64_t kDataWords = map::kMemoryWords;

void check_sizes(const Scenario& s) {
  switch (s.kind) {
    case ScenarioKind::Conv:
      if (s.k == 0) throw ScenarioError("conv: K must be at least 1");
      if (s.n < s.k) throw ScenarioError("conv: N must be at least K");
      if (!s.x.empty() && s.x.size() != s.n) throw ScenarioError("conv: x has the wrong length");
      if (!s.h.empty() && s.h.size() != s.k) throw ScenarioError("conv: h has the wrong length");
      break;
    case ScenarioKind::Dot:
      if (!s.a.empty() && s.a.size() != s.len) throw ScenarioError("dot: a has the wrong length");
      if (!s.b.empty() && s.b.size() != s.len) throw ScenarioError("dot: b has the wrong length");
      break;
    case ScenarioKind::CnnLayer:
      try {
        perf::validate(s.cnn);
      } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string("cnn: ") + e.what());
      }
      if (s.cnn.batch != 1) throw ScenarioError("cnn: only batch 1 is supported");
      break;
    case ScenarioKind::DenseLayer:
      try {
        perf::validate(s.dense);
      } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string("dense: ") + e.what());
      }
      break;
  }
}

}  // namespace

std::vector<Buffer> plan_buffers(const Scenario& s) {
  check_sizes(s);
  struct Want {
    std::string name;
    std::uint64_t words;
    std::optional<Address> fixed;
    Address fallback;
  };
  std::vector<Want> want;
  switch (s.kind) {
    case ScenarioKind::Conv:
      want = {{"x", s.n, s.x_addr, 0x8000},
              {"h", s.k, s.h_addr, 0x8100},
              {"y", std::uint64_t{s.n} - s.k + 1, s.y_addr, 0x8200}};
      break;
    case ScenarioKind::Dot:
      want = {{"a", s.len, s.a_addr, 0x8000}, {"b", s.len, s.b_addr, 0x8100}};
      break;
    case ScenarioKind::CnnLayer: {
      const auto& c = s.cnn;
      for (std::uint64_t ch = 0; ch < c.c; ++ch) {
        want.push_back({"input[" + std::to_string(ch) + "]", c.n + c.k - 1, std::nullopt, 0});
      }
      for (std::uint64_t k = 0; k < c.k_out; ++k) {
        for (std::uint64_t ch = 0; ch < c.c; ++ch) {
          want.push_back({"weight[" + std::to_string(k) + "][" + std::to_string(ch) + "]", c.k,
                          std::nullopt, 0});
        }
      }
      for (std::uint64_t k = 0; k < c.k_out; ++k) {
        want.push_back({"output[" + std::to_string(k) + "]", c.n, std::nullopt, 0});
      }
      if (c.c > 1) want.push_back({"partial", c.n, std::nullopt, 0});
      break;
    }
    case ScenarioKind::DenseLayer: {
      const auto& d = s.dense;
      want.push_back({"x", d.inputs, std::nullopt, 0});
      if (s.mode == ScenarioMode::Testbench) want.push_back({"row", d.inputs, std::nullopt, 0});
      else want.push_back({"weights", d.inputs * d.outputs, std::nullopt, 0});
      want.push_back({"y", d.outputs, std::nullopt, 0});
      break;
    }
  }

  const Placement placement = effective_placement(s);
  std::uint64_t cursor = map::kDataBase;
  std::vector<Buffer> out;
  for (const Want& w : want) {
    std::uint64_t addr = w.fixed ? *w.fixed : placement == Placement::Default ? w.fallback : cursor;
    if (!w.fixed && placement == Placement::Packed) cursor += 4 * w.words;
    if (w.words > kDataWords || !data_range_ok(static_cast<Address>(addr), w.words) ||
        addr > std::numeric_limits<Address>::max()) {
      throw ScenarioError("buffer " + w.name + " (" + std::to_string(w.words) + " words at " +
                          hex(static_cast<Address>(addr)) + ") does not fit in DataMem");
    }
    out.push_back({w.name, static_cast<Address>(addr), w.words});
  }

  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      const Buffer& p = out[i];
      const Buffer& q = out[j];
      if (p.words == 0 || q.words == 0) continue;
      if (p.addr < q.end() && q.addr < p.end()) {
        throw ScenarioError("buffers " + p.name + " [" + hex(p.addr) + ", " + hex(p.end()) +
                            ") and " + q.name + " [" + hex(q.addr) + ", " + hex(q.end()) +
                            ") overlap");
      }
    }
  }
  return out;
}

void validate(const Scenario& s) {
  s.sim.validate();
  static_cast<void>(plan_buffers(s));
}

// ---------------------------------------------------------------------------
// Data and model

ScenarioData make_data(const Scenario& s) {
  SplitMix64 rng(s.seed);
  ScenarioData d;
  auto draw = [&](const std::vector<std::int32_t>& given, std::size_t count) {
    return given.empty() ? rng.fill(count) : given;
  };
  switch (s.kind) {
    case ScenarioKind::Conv:
      d.x = draw(s.x, s.n);
      d.h = draw(s.h, s.k);
      break;
    case ScenarioKind::Dot:
      d.a = draw(s.a, s.len);
      d.b = draw(s.b, s.len);
      break;
    case ScenarioKind::CnnLayer: {
      const auto& c = s.cnn;
      d.inputs.resize(c.c);
      for (auto& ch : d.inputs) ch = rng.fill(c.n);
      d.weights.assign(c.k_out, std::vector<std::vector<std::int32_t>>(c.c));
      for (auto& k : d.weights) {
        for (auto& ch : k) ch = rng.fill(c.k);
      }
      break;
    }
    case ScenarioKind::DenseLayer:
      d.dense_w.resize(s.dense.outputs);
      for (auto& row : d.dense_w) row = rng.fill(s.dense.inputs);
      d.dense_x = rng.fill(s.dense.inputs);
      break;
  }
  return d;
}

ModelFigures model_for(const Scenario& s) {
  check_sizes(s);
  ModelFigures m;
  const double f = s.sim.frequency_hz;
  switch (s.kind) {
    case ScenarioKind::Conv: {
      const perf::ConvWorkload w{s.n, s.k};
      m.sw_cycles = perf::sw_conv_cycles(w);
      m.busy_cycles = perf::dsp_conv_busy_cycles(w);
      m.dsp_cycles = perf::dsp_conv_cycles(w);
      m.macs = w.outputs() * w.k;
      break;
    }
    case ScenarioKind::Dot:
      m.sw_cycles = perf::sw_dot_cycles(s.len);
      m.dsp_cycles = m.busy_cycles = perf::dsp_dot_cycles(s.len);
      m.sw_cycles_rounded = perf::sw_dot_cycles_rounded(s.len);
      m.dsp_cycles_rounded = perf::dsp_dot_cycles_rounded(s.len);
      m.macs = s.len;
      break;
    case ScenarioKind::CnnLayer: {
      const auto c = perf::cnn_layer_cycles(s.cnn);
      m.macs = c.macs;
      m.sw_cycles = c.sw;
      m.dsp_cycles = c.dsp;
      m.sw_cycles_rounded = c.sw;
      m.dsp_cycles_rounded = c.dsp;
      m.busy_cycles = s.cnn.c * s.cnn.k_out * s.cnn.n * (3 * s.cnn.k + 1);
      break;
    }
    case ScenarioKind::DenseLayer: {
      const auto exact = perf::dense_layer_cycles(s.dense);
      const auto rounded = perf::dense_layer_cycles_rounded(s.dense);
      m.macs = exact.macs;
      m.sw_cycles = exact.sw;
      m.dsp_cycles = m.busy_cycles = exact.dsp;
      m.sw_cycles_rounded = rounded.sw;
      m.dsp_cycles_rounded = rounded.dsp;
      break;
    }
  }
  m.speedup = m.dsp_cycles ? static_cast<double>(m.sw_cycles) / static_cast<double>(m.dsp_cycles) : 0;
  m.sw_latency_s = perf::latency_seconds(m.sw_cycles, f);
  m.dsp_latency_s = perf::latency_seconds(m.dsp_cycles, f);
  return m;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

const Buffer& buffer(const std::vector<Buffer>& bufs, const std::string& name) {
  for (const Buffer& b : bufs) {
    if (b.name == name) return b;
  }
  throw std::logic_error("no buffer named " + name);
}

/// Register sequence for one conv call driven by the testbench host.
/// Returns false when the unit reported an error.
bool host_conv(Soc& soc, const ConvConfig& cfg, bool int_en) {
  const Address b = map::kConvBase;
  soc.host_write(b + conv_reg::kInAddr, cfg.in_addr);
  soc.host_write(b + conv_reg::kKernAddr, cfg.kern_addr);
  soc.host_write(b + conv_reg::kOutAddr, cfg.out_addr);
  soc.host_write(b + conv_reg::kInLen, cfg.in_len);
  soc.host_write(b + conv_reg::kKernLen, cfg.kern_len);
  soc.host_write(b + conv_reg::kControl, control_bits::kStart | (int_en ? control_bits::kIntEn : 0));
  const Word status = soc.host_poll(b + conv_reg::kStatus, status_bits::kDone);
  soc.host_write(b + conv_reg::kIrqClear, 1);
  return (status & status_bits::kError) == 0;
}

struct DotOutcome {
  bool ok = false;
  std::int64_t result = 0;
};

DotOutcome host_dot(Soc& soc, const DotConfig& cfg, bool int_en) {
  const Address b = map::kDotBase;
  soc.host_write(b + dot_reg::kVaAddr, cfg.va_addr);
  soc.host_write(b + dot_reg::kVbAddr, cfg.vb_addr);
  soc.host_write(b + dot_reg::kLen, cfg.len);
  soc.host_write(b + dot_reg::kControl, control_bits::kStart | (int_en ? control_bits::kIntEn : 0));
  const Word status = soc.host_poll(b + dot_reg::kStatus, status_bits::kDone);
  const Word lo = soc.host_read(b + dot_reg::kResultLo);
  const Word hi = soc.host_read(b + dot_reg::kResultHi);
  soc.host_write(b + dot_reg::kIrqClear, 1);
  return {(status & status_bits::kError) == 0,
          static_cast<std::int64_t>((std::uint64_t{hi} << 32) | lo)};
}

void load_cpu_program(Soc& soc, const std::vector<Word>& program) {
  if (program.size() > map::kMemoryWords) {
    throw ScenarioError("generated program (" + std::to_string(program.size()) +
                        " words) does not fit in InstMem");
  }
  soc.load_program(program);
  soc.enable_cpu();
}

void finish_cpu_run(Soc& soc, ScenarioResult& r) {
  r.stop = soc.run();
  r.timed_out = r.stop == StopReason::Timeout;
}

std::vector<Word> cnn_reference(const ScenarioData& d, const perf::CnnLayerShape& c,
                                TruncationPolicy policy) {
  std::vector<Word> out;
  for (std::uint64_t k = 0; k < c.k_out; ++k) {
    std::vector<Word> acc(c.n, 0);
    for (std::uint64_t ch = 0; ch < c.c; ++ch) {
      std::vector<std::int32_t> padded = d.inputs[ch];
      padded.resize(c.n + c.k - 1, 0);
      const auto y = reference::conv1d(padded, d.weights[k][ch], policy);
      for (std::uint64_t i = 0; i < c.n; ++i) acc[i] += y[i];
    }
    out.insert(out.end(), acc.begin(), acc.end());
  }
  return out;
}

}  // namespace

ScenarioResult run_scenario(const Scenario& s, TraceSink* trace) {
  ScenarioResult r;
  r.scenario = s;
  validate(s);
  r.buffers = plan_buffers(s);
  r.model = model_for(s);
  const ScenarioData d = make_data(s);

  Soc soc(s.sim);
  if (trace != nullptr) soc.set_trace(trace);
  const bool tb = s.mode == ScenarioMode::Testbench;
  const TruncationPolicy policy = s.sim.truncation;

  try {
    switch (s.kind) {
      case ScenarioKind::Conv: {
        const ConvConfig cfg{buffer(r.buffers, "x").addr, buffer(r.buffers, "h").addr,
                             buffer(r.buffers, "y").addr, s.n, s.k};
        soc.write_data(cfg.in_addr, std::span<const std::int32_t>(d.x));
        soc.write_data(cfg.kern_addr, std::span<const std::int32_t>(d.h));
        r.rom_digest_before = soc.rom().digest();
        r.calls = 1;
        if (tb) {
          r.dsp_error = !host_conv(soc, cfg, s.int_en);
        } else {
          load_cpu_program(soc, kernels::accel_conv(cfg, s.int_en));
          r.rom_digest_before = soc.rom().digest();
          finish_cpu_run(soc, r);
        }
        r.output = soc.read_data(cfg.out_addr, cfg.outputs());
        r.reference = reference::conv1d(d.x, d.h, policy);
        r.expected_busy_cycles = perf::dsp_conv_busy_cycles({s.n, s.k});
        r.expected_macs = cfg.outputs() * s.k;
        break;
      }
      case ScenarioKind::Dot: {
        const DotConfig cfg{buffer(r.buffers, "a").addr, buffer(r.buffers, "b").addr, s.len};
        soc.write_data(cfg.va_addr, std::span<const std::int32_t>(d.a));
        soc.write_data(cfg.vb_addr, std::span<const std::int32_t>(d.b));
        r.rom_digest_before = soc.rom().digest();
        r.calls = 1;
        if (tb) {
          const DotOutcome o = host_dot(soc, cfg, s.int_en);
          r.dsp_error = !o.ok;
          r.dot_result = o.result;
        } else {
          load_cpu_program(soc, kernels::accel_dot(cfg, s.int_en));
          r.rom_digest_before = soc.rom().digest();
          finish_cpu_run(soc, r);
          const auto& regs = soc.cpu().state().regs;
          r.dot_result = static_cast<std::int64_t>((std::uint64_t{regs.read(reg::a1)} << 32) |
                                                   regs.read(reg::a0));
        }
        r.dot_reference = reference::dot(d.a, d.b);
        r.expected_busy_cycles = perf::dsp_dot_cycles(s.len);
        r.expected_macs = s.len;
        break;
      }
      case ScenarioKind::CnnLayer: {
        const auto& c = s.cnn;
        const auto n_call = static_cast<std::uint32_t>(c.n + c.k - 1);
        const auto kk = static_cast<std::uint32_t>(c.k);
        for (std::uint64_t ch = 0; ch < c.c; ++ch) {
          soc.write_data(buffer(r.buffers, "input[" + std::to_string(ch) + "]").addr,
                         std::span<const std::int32_t>(d.inputs[ch]));
        }
        auto weight = [&](std::uint64_t k, std::uint64_t ch) {
          return buffer(r.buffers, "weight[" + std::to_string(k) + "][" + std::to_string(ch) + "]");
        };
        for (std::uint64_t k = 0; k < c.k_out; ++k) {
          for (std::uint64_t ch = 0; ch < c.c; ++ch) {
            soc.write_data(weight(k, ch).addr, std::span<const std::int32_t>(d.weights[k][ch]));
          }
        }
        const Address partial = c.c > 1 ? buffer(r.buffers, "partial").addr : 0;

        ProgramBuilder prog;
        kernels::emit_driver_prologue(prog);
        for (std::uint64_t k = 0; k < c.k_out && !r.dsp_error; ++k) {
          const Address out = buffer(r.buffers, "output[" + std::to_string(k) + "]").addr;
          for (std::uint64_t ch = 0; ch < c.c && !r.dsp_error; ++ch) {
            const ConvConfig cfg{buffer(r.buffers, "input[" + std::to_string(ch) + "]").addr,
                                 weight(k, ch).addr, ch == 0 ? out : partial, n_call, kk};
            ++r.calls;
            const std::string tag = "call" + std::to_string(r.calls);
            if (tb) {
              r.dsp_error = !host_conv(soc, cfg, s.int_en);
              if (ch > 0) {
                for (std::uint64_t i = 0; i < c.n; ++i) {
                  const Address a = out + static_cast<Address>(4 * i);
                  soc.sram().poke(a, soc.sram().peek(a) +
                                         soc.sram().peek(partial + static_cast<Address>(4 * i)));
                }
              }
            } else {
              kernels::emit_conv_call(prog, cfg, s.int_en, tag);
              if (ch > 0) kernels::emit_accumulate(prog, out, partial, static_cast<std::uint32_t>(c.n), tag);
            }
          }
        }
        if (!tb) {
          prog.ebreak();
          load_cpu_program(soc, prog.assemble());
          r.rom_digest_before = soc.rom().digest();
          finish_cpu_run(soc, r);
        } else {
          r.rom_digest_before = soc.rom().digest();
        }
        r.output = soc.read_data(buffer(r.buffers, "output[0]").addr, c.k_out * c.n);
        r.reference = cnn_reference(d, c, policy);
        r.expected_busy_cycles = c.c * c.k_out * c.n * (3 * c.k + 1);
        r.expected_macs = perf::cnn_layer_macs(c);
        break;
      }
      case ScenarioKind::DenseLayer: {
        const auto& dl = s.dense;
        const auto len = static_cast<std::uint32_t>(dl.inputs);
        const Address x = buffer(r.buffers, "x").addr;
        const Address y = buffer(r.buffers, "y").addr;
        soc.write_data(x, std::span<const std::int32_t>(d.dense_x));
        if (tb) {
          r.rom_digest_before = soc.rom().digest();
          const Address row = buffer(r.buffers, "row").addr;
          for (std::uint64_t k = 0; k < dl.outputs && !r.dsp_error; ++k) {
            soc.write_data(row, std::span<const std::int32_t>(d.dense_w[k]));
            const DotOutcome o = host_dot(soc, {row, x, len}, s.int_en);
            ++r.calls;
            r.dsp_error = !o.ok;
            soc.sram().poke(y + static_cast<Address>(4 * k), static_cast<Word>(o.result));
          }
        } else {
          const Address w = buffer(r.buffers, "weights").addr;
          ProgramBuilder prog;
          kernels::emit_driver_prologue(prog);
          for (std::uint64_t k = 0; k < dl.outputs; ++k) {
            const Address row = w + static_cast<Address>(4 * k * dl.inputs);
            soc.write_data(row, std::span<const std::int32_t>(d.dense_w[k]));
            kernels::emit_dot_call(prog, {row, x, len}, s.int_en, "row" + std::to_string(k));
            prog.li(reg::t2, y + static_cast<Address>(4 * k));
            prog.store(Op::Sw, reg::a0, 0, reg::t2);
            ++r.calls;
          }
          prog.ebreak();
          load_cpu_program(soc, prog.assemble());
          r.rom_digest_before = soc.rom().digest();
          finish_cpu_run(soc, r);
        }
        r.output = soc.read_data(y, dl.outputs);
        for (const auto& row : d.dense_w) {
          r.reference.push_back(static_cast<Word>(reference::dot(row, d.dense_x)));
        }
        r.expected_busy_cycles = dl.outputs * perf::dsp_dot_cycles(dl.inputs);
        r.expected_macs = dl.outputs * dl.inputs;
        break;
      }
    }
  } catch (const SimulationTimeout&) {
    r.timed_out = true;
    r.stop = StopReason::Timeout;
  } catch (const HostAccessError&) {
    r.dsp_error = true;
    r.stop = StopReason::Faulted;
  }

  r.report = soc.report();
  const bool uses_conv = s.kind == ScenarioKind::Conv || s.kind == ScenarioKind::CnnLayer;
  const DspCounters& used = uses_conv ? r.report.conv.counters : r.report.dot.counters;
  r.busy_cycles = used.busy_cycles;
  r.mac_count = used.mac_count;
  r.config_write_cycles = used.config_write_cycles;
  if (used.errors > 0) r.dsp_error = true;

  for (std::size_t i = 0; i < r.output.size() && i < r.reference.size(); ++i) {
    if (r.output[i] != r.reference[i]) ++r.mismatches;
  }
  if (r.output.size() != r.reference.size()) {
    r.mismatches += r.output.size() > r.reference.size() ? r.output.size() - r.reference.size()
                                                         : r.reference.size() - r.output.size();
  }
  r.sram.assign(soc.sram().words().begin(), soc.sram().words().end());
  r.rom_digest_after = soc.rom().digest();
  return r;
}

}  // namespace rvdsp
