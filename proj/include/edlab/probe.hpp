#pragma once

// Probe: the comparison channel between a running algorithm coroutine and
// whoever answers its comparisons. Execution: drives one algorithm one
// comparison at a time. run(): drives it to completion against an oracle.

#include <coroutine>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>

#include "edlab/core.hpp"
#include "edlab/task.hpp"

namespace edlab {

/// Which EQ answers count as a witness and end the computation.
struct WitnessPolicy {
  enum class Kind { Any, Cross, None };
  Kind kind = Kind::Any;
  Index split = 0;  // Cross: indices below split form A, the rest form B

  static WitnessPolicy any() { return {Kind::Any, 0}; }
  static WitnessPolicy none() { return {Kind::None, 0}; }
  static WitnessPolicy cross(Index split) { return {Kind::Cross, split}; }

  bool accepts(Index x, Index y) const noexcept {
    switch (kind) {
      case Kind::Any: return true;
      case Kind::Cross: return (x < split) != (y < split);
      case Kind::None: return false;
    }
    return false;
  }
};

struct Request {
  Index x = 0;
  Index y = 0;
};

class Probe {
 public:
  static constexpr std::uint32_t kNoMemo = std::numeric_limits<std::uint32_t>::max();

  class Awaiter {
   public:
    Awaiter(Probe& probe, Index x, Index y, std::uint32_t level, std::optional<Order> cached)
        : probe_(probe), x_(x), y_(y), level_(level), cached_(cached) {}

    // Replayed answers also suspend, so chains of synchronously completing
    // subtasks unwind to the driver instead of nesting on the stack.
    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> h) noexcept {
      if (cached_) {
        probe_.park(h);
      } else {
        probe_.post(Request{x_, y_}, level_, h);
      }
    }
    Order await_resume() noexcept { return cached_ ? *cached_ : probe_.answer_; }

   private:
    Probe& probe_;
    Index x_, y_;
    std::uint32_t level_;
    std::optional<Order> cached_;
  };

  /// Three-way comparison of elements x and y. `level` tags the recursion depth
  /// for memoization; outcomes recorded at levels below the memo limit are
  /// replayed without reaching the oracle.
  Awaiter compare(Index x, Index y, std::uint32_t level = kNoMemo) {
    return Awaiter(*this, x, y, level, lookup(x, y));
  }

  Diagnostics& diagnostics() noexcept { return diag_; }
  const Diagnostics& diagnostics() const noexcept { return diag_; }
  std::uint64_t charged() const noexcept { return charged_; }

  void set_memo_limit(std::uint32_t limit) noexcept { memo_limit_ = limit; }
  std::uint32_t memo_limit() const noexcept { return memo_limit_; }
  std::size_t memo_size() const noexcept { return memo_.size(); }

  // Driver side.
  const std::optional<Request>& pending() const noexcept { return pending_; }
  /// A coroutine waiting on a replayed answer, if any; resuming it is free.
  std::coroutine_handle<> take_parked() noexcept { return std::exchange(parked_, {}); }

  std::coroutine_handle<> deliver(Order o) {
    answer_ = o;
    if (memo_limit_ != 0 && pending_level_ < memo_limit_) {
      const auto [key, swapped] = memo_key(pending_->x, pending_->y);
      memo_[key] = MemoEntry{swapped ? flip(o) : o, pending_level_};
    }
    pending_.reset();
    ++charged_;
    return std::exchange(leaf_, {});
  }

 private:
  struct MemoEntry {
    Order order;
    std::uint32_t level;
  };

  static std::pair<std::uint64_t, bool> memo_key(Index x, Index y) noexcept {
    const bool swapped = x > y;
    if (swapped) std::swap(x, y);
    return {(static_cast<std::uint64_t>(x) << 32) | y, swapped};
  }

  std::optional<Order> lookup(Index x, Index y) const {
    if (memo_.empty()) return std::nullopt;
    const auto [key, swapped] = memo_key(x, y);
    auto it = memo_.find(key);
    if (it == memo_.end() || it->second.level >= memo_limit_) return std::nullopt;
    return swapped ? flip(it->second.order) : it->second.order;
  }

  void park(std::coroutine_handle<> h) noexcept { parked_ = h; }

  void post(Request r, std::uint32_t level, std::coroutine_handle<> h) noexcept {
    pending_ = r;
    pending_level_ = level;
    leaf_ = h;
  }

  std::optional<Request> pending_;
  std::uint32_t pending_level_ = kNoMemo;
  std::coroutine_handle<> leaf_;
  std::coroutine_handle<> parked_;
  Order answer_ = Order::Equal;
  std::uint64_t charged_ = 0;
  std::uint32_t memo_limit_ = 0;
  std::unordered_map<std::uint64_t, MemoEntry> memo_;
  Diagnostics diag_;
};

using Algorithm = std::function<Task<Outcome>(Probe&)>;

/// One algorithm run, advanced one comparison at a time.
class Execution {
 public:
  Execution(std::string label, const Algorithm& algorithm, WitnessPolicy policy = WitnessPolicy::any())
      : label_(std::move(label)), policy_(policy), probe_(std::make_unique<Probe>()) {
    task_ = algorithm(*probe_);
  }

  /// Runs until the next comparison request and returns it, or returns nullopt
  /// once the computation has finished (by witness or by returning).
  std::optional<Request> next() {
    if (finished()) return std::nullopt;
    if (probe_->pending()) return probe_->pending();
    if (!started_) {
      started_ = true;
      task_.resume();
    } else {
      resume_.resume();
    }
    while (auto parked = probe_->take_parked()) parked.resume();
    if (task_.done()) {
      done_ = true;
      outcome_ = task_.take();
      return std::nullopt;
    }
    if (!probe_->pending()) throw InternalError("algorithm suspended without a comparison request");
    return probe_->pending();
  }

  /// Answers the pending request. Returns true when the answer is a witness.
  bool answer(Order o) {
    const Request r = *probe_->pending();
    resume_ = probe_->deliver(o);
    if (o == Order::Equal && policy_.accepts(r.x, r.y)) {
      witness_ = Witness{std::min(r.x, r.y), std::max(r.x, r.y)};
      outcome_ = Outcome::Duplicate;
      return true;
    }
    return false;
  }

  bool finished() const noexcept { return done_ || witness_.has_value(); }
  Outcome outcome() const noexcept { return outcome_; }
  const std::optional<Witness>& witness() const noexcept { return witness_; }
  std::uint64_t charged() const noexcept { return probe_->charged(); }
  Probe& probe() noexcept { return *probe_; }
  const Probe& probe() const noexcept { return *probe_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
  WitnessPolicy policy_;
  std::unique_ptr<Probe> probe_;
  Task<Outcome> task_;
  std::coroutine_handle<> resume_;
  bool started_ = false;
  bool done_ = false;
  Outcome outcome_ = Outcome::GaveUp;
  std::optional<Witness> witness_;
};

/// Runs `algorithm` to completion against `oracle`.
inline RunReport run(CountingOracle& oracle, const Algorithm& algorithm,
                     WitnessPolicy policy = WitnessPolicy::any()) {
  const auto before = oracle.count();
  Execution exec("run", algorithm, policy);
  while (auto req = exec.next()) exec.answer(oracle.compare(req->x, req->y));
  RunReport report;
  report.outcome = exec.outcome();
  report.witness = exec.witness();
  report.comparisons = oracle.count() - before;
  report.diagnostics = exec.probe().diagnostics();
  report.branch_costs = report.diagnostics.branch_costs;
  return report;
}

}  // namespace edlab
