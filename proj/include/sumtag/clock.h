#pragma once

#include <atomic>
#include <chrono>

namespace sumtag {

using Nanos = std::chrono::nanoseconds;

// Monotonic time source. Rate math never touches the wall clock.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Nanos now() const = 0;
};

class SteadyClock final : public Clock {
 public:
  Nanos now() const override {
    return std::chrono::duration_cast<Nanos>(
        std::chrono::steady_clock::now().time_since_epoch());
  }
  static const SteadyClock& instance() {
    static const SteadyClock clock;
    return clock;
  }
};

// Virtual time that only moves when advanced; used by simulated backends.
class SimulatedClock final : public Clock {
 public:
  Nanos now() const override { return Nanos(ticks_.load()); }
  void advance(Nanos by) { ticks_.fetch_add(by.count()); }

 private:
  std::atomic<Nanos::rep> ticks_{0};
};

inline double to_seconds(Nanos d) {
  return std::chrono::duration<double>(d).count();
}

}  // namespace sumtag
