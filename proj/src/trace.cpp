#include "rvdsp/trace.hpp"

#include <ostream>

namespace rvdsp {

std::string format_trace_line(const TraceRecord& r) {
  std::string line = "cycle " + std::to_string(r.cycle) + " | ";
  line += r.component;
  line += " | ";
  line += r.event;
  return line;
}

void StreamTrace::record(std::uint64_t cycle, std::string_view component, std::string_view event) {
  out_ << "cycle " << cycle << " | " << component << " | " << event << '\n';
}

}  // namespace rvdsp
