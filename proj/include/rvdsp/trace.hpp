#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rvdsp {

/// 0 = off, 1 = component events (start, MAC, done, retire of halting
/// instructions), 2 = adds every bus transaction and retired instruction.
enum class TraceLevel : std::uint8_t { Off = 0, Events = 1, Verbose = 2 };

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void record(std::uint64_t cycle, std::string_view component, std::string_view event) = 0;

  TraceLevel level() const noexcept { return level_; }
  void set_level(TraceLevel level) noexcept { level_ = level; }
  bool wants(TraceLevel l) const noexcept { return level_ >= l && l != TraceLevel::Off; }

 private:
  TraceLevel level_ = TraceLevel::Events;
};

/// Writes `cycle N | component | event` lines.
class StreamTrace final : public TraceSink {
 public:
  explicit StreamTrace(std::ostream& out) : out_(out) {}
  void record(std::uint64_t cycle, std::string_view component, std::string_view event) override;

 private:
  std::ostream& out_;
};

struct TraceRecord {
  std::uint64_t cycle;
  std::string component;
  std::string event;
};

class MemoryTrace final : public TraceSink {
 public:
  void record(std::uint64_t cycle, std::string_view component, std::string_view event) override {
    records_.push_back({cycle, std::string(component), std::string(event)});
  }
  const std::vector<TraceRecord>& records() const noexcept { return records_; }
  void clear() { records_.clear(); }

 private:
  std::vector<TraceRecord> records_;
};

std::string format_trace_line(const TraceRecord& r);

}  // namespace rvdsp
