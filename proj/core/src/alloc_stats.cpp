#include "rcurc/alloc_stats.hpp"

namespace rcurc::alloc {

namespace {
std::atomic<std::size_t> g_live{0};
std::atomic<std::size_t> g_window_base{0};
std::atomic<std::size_t> g_window_peak{0};
std::atomic<std::size_t> g_window_max_single{0};

void raise_to(std::atomic<std::size_t>& slot, std::size_t candidate) {
  std::size_t cur = slot.load(std::memory_order_relaxed);
  while (cur < candidate &&
         !slot.compare_exchange_weak(cur, candidate, std::memory_order_relaxed)) {
  }
}
}  // namespace

std::size_t live_bytes() { return g_live.load(std::memory_order_relaxed); }

void watch_begin() {
  const std::size_t now = g_live.load(std::memory_order_relaxed);
  g_window_base.store(now, std::memory_order_relaxed);
  g_window_peak.store(now, std::memory_order_relaxed);
  g_window_max_single.store(0, std::memory_order_relaxed);
}

WatchReport watch_report() {
  WatchReport r;
  const std::size_t base = g_window_base.load(std::memory_order_relaxed);
  const std::size_t peak = g_window_peak.load(std::memory_order_relaxed);
  r.high_water_bytes = peak > base ? peak - base : 0;
  r.max_single_alloc_bytes = g_window_max_single.load(std::memory_order_relaxed);
  return r;
}

namespace detail {

void on_allocate(std::size_t bytes) {
  const std::size_t now = g_live.fetch_add(bytes, std::memory_order_relaxed) + bytes;
  raise_to(g_window_peak, now);
  raise_to(g_window_max_single, bytes);
}

void on_deallocate(std::size_t bytes) {
  g_live.fetch_sub(bytes, std::memory_order_relaxed);
}

}  // namespace detail

}  // namespace rcurc::alloc
