#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rvdsp/isa.hpp"
#include "rvdsp/perf_model.hpp"
#include "rvdsp/report.hpp"
#include "rvdsp/scenario.hpp"
#include "rvdsp/table3.hpp"

namespace py = pybind11;
using namespace rvdsp;

namespace {

py::dict to_dict(const Instruction& in) {
  py::dict d;
  d["op"] = std::string(mnemonic(in.op));
  d["rd"] = in.rd;
  d["rs1"] = in.rs1;
  d["rs2"] = in.rs2;
  d["imm"] = in.imm;
  return d;
}

Instruction from_fields(const std::string& op, int rd, int rs1, int rs2, std::int32_t imm) {
  const auto o = op_from_mnemonic(op);
  if (!o) throw std::invalid_argument("unknown mnemonic '" + op + "'");
  return {*o, static_cast<std::uint8_t>(rd), static_cast<std::uint8_t>(rs1),
          static_cast<std::uint8_t>(rs2), imm};
}

Instruction decode_or_throw(Word w) {
  IllegalInstruction why{};
  const auto in = decode(w, &why);
  if (!in) throw std::invalid_argument("illegal instruction: " + why.reason);
  return *in;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the rvdsp simulator core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);

  m.def("sw_conv_cycles", [](std::uint64_t n, std::uint64_t k) { return perf::sw_conv_cycles({n, k}); },
        py::arg("n"), py::arg("k"));
  m.def("dsp_conv_busy_cycles",
        [](std::uint64_t n, std::uint64_t k) { return perf::dsp_conv_busy_cycles({n, k}); },
        py::arg("n"), py::arg("k"));
  m.def("dsp_conv_cycles",
        [](std::uint64_t n, std::uint64_t k, std::uint64_t c_cfg, std::uint64_t c_int) {
          return perf::dsp_conv_cycles({n, k}, c_cfg, c_int);
        },
        py::arg("n"), py::arg("k"), py::arg("c_cfg") = perf::kDefaultConfigCycles, py::arg("c_int") = 0);
  m.def("speedup",
        [](std::uint64_t n, std::uint64_t k, std::uint64_t c_cfg, std::uint64_t c_int) {
          return perf::speedup({n, k}, c_cfg, c_int);
        },
        py::arg("n"), py::arg("k"), py::arg("c_cfg") = perf::kDefaultConfigCycles, py::arg("c_int") = 0);
  m.def("latency_seconds", &perf::latency_seconds, py::arg("cycles"), py::arg("f_hz"));
  m.def("sw_dot_cycles", &perf::sw_dot_cycles, py::arg("length"));
  m.def("dsp_dot_cycles", &perf::dsp_dot_cycles, py::arg("length"));
  m.def("dot_speedup", &perf::dot_speedup, py::arg("length"));
  m.def("cnn_layer_macs",
        [](std::uint64_t n, std::uint64_t k, std::uint64_t c_in, std::uint64_t c_out) {
          return perf::cnn_layer_macs({n, k, c_in, c_out});
        },
        py::arg("n"), py::arg("k"), py::arg("c_in"), py::arg("c_out"));
  m.def("energy_per_tap",
        [](double e_mul, double e_add, double e_mem_rd, double e_instr_fetch, double e_regfile,
           const std::string& mode) {
          const perf::EnergyParams p{e_mul, e_add, e_mem_rd, e_instr_fetch, e_regfile};
          perf::validate(p);
          if (mode == "accelerator") return perf::energy_per_tap(p, perf::ExecutionMode::Accelerator);
          if (mode == "software") return perf::energy_per_tap(p, perf::ExecutionMode::Software);
          throw std::invalid_argument("mode must be 'accelerator' or 'software'");
        },
        py::arg("e_mul"), py::arg("e_add"), py::arg("e_mem_rd"), py::arg("e_instr_fetch") = 0.0,
        py::arg("e_regfile") = 0.0, py::arg("mode") = "accelerator");

  m.def("run_scenario",
        [](const std::string& text, const std::string& base_dir) {
          const Scenario s = parse_scenario(text, base_dir);
          py::gil_scoped_release release;
          return scenario_report_json(run_scenario(s));
        },
        py::arg("text"), py::arg("base_dir") = ".",
        "Parse scenario text, run it, and return the JSON report.");
  m.def("table3",
        [](std::uint32_t k, double frequency_hz, std::uint64_t seed) {
          py::gil_scoped_release release;
          return table3_json(run_table3(k, frequency_hz, seed));
        },
        py::arg("k") = 16, py::arg("frequency_hz") = 100e6, py::arg("seed") = 7);

  m.def("decode", [](Word w) { return to_dict(decode_or_throw(w)); }, py::arg("word"));
  m.def("encode", [](const std::string& op, int rd, int rs1, int rs2, std::int32_t imm) {
          return encode(from_fields(op, rd, rs1, rs2, imm));
        },
        py::arg("op"), py::arg("rd") = 0, py::arg("rs1") = 0, py::arg("rs2") = 0, py::arg("imm") = 0);
  m.def("disassemble", [](Word w) { return disassemble(decode_or_throw(w)); }, py::arg("word"));
  m.def("listing_line", &listing_line, py::arg("addr"), py::arg("word"));
}
