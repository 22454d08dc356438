#pragma once

#include <atomic>
#include <cstddef>
#include <vector>

namespace rcurc::alloc {

/// Byte-accounting hook for the library's own heap buffers.
///
/// Every container the library owns (matrix payloads, mask/value arrays,
/// solver scratch) allocates through TrackingAllocator, which maintains a
/// global live-byte counter. Tests open a watch window around an operation
/// and then assert on two quantities:
///   * high_water_bytes  - peak live bytes allocated above the baseline that
///                         was live when the window opened,
///   * max_single_alloc_bytes - largest single buffer allocated inside the
///                         window (catches any attempt to materialize a
///                         full n1 x n2 matrix).
///
/// Third-party internals (e.g. LAPACK-style workspace inside the SVD kernel)
/// do not route through this hook; the hook accounts for buffers whose
/// lifetime the library controls. Windows must not overlap across threads;
/// the solver itself is single threaded.

std::size_t live_bytes();

void watch_begin();

struct WatchReport {
  std::size_t high_water_bytes = 0;        ///< peak(live) - live-at-begin
  std::size_t max_single_alloc_bytes = 0;  ///< largest single allocation
};

WatchReport watch_report();

namespace detail {
void on_allocate(std::size_t bytes);
void on_deallocate(std::size_t bytes);
}  // namespace detail

template <class T>
struct TrackingAllocator {
  using value_type = T;

  TrackingAllocator() noexcept = default;
  template <class U>
  TrackingAllocator(const TrackingAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    detail::on_allocate(n * sizeof(T));
    return static_cast<T*>(::operator new(n * sizeof(T)));
  }
  void deallocate(T* p, std::size_t n) noexcept {
    detail::on_deallocate(n * sizeof(T));
    ::operator delete(p);
  }

  template <class U>
  bool operator==(const TrackingAllocator<U>&) const noexcept {
    return true;
  }
};

template <class T>
using TrackedVec = std::vector<T, TrackingAllocator<T>>;

}  // namespace rcurc::alloc
