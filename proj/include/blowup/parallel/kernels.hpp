#pragma once

// Data-parallel building blocks. Every kernel has a serial reference path and
// an OpenMP path; both must produce bit-identical results (max reductions are
// order independent and ties resolve to the lowest index).

#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace blowup::par {

enum class Exec { serial, parallel };

inline int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

struct ArgMax {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = std::numeric_limits<std::size_t>::max();

  bool found() const { return index != std::numeric_limits<std::size_t>::max(); }
};

namespace detail {

inline double sanitize(double v) {
  return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

inline void absorb(ArgMax& best, double v, std::size_t i) {
  if (v > best.value || (v == best.value && i < best.index)) {
    best.value = v;
    best.index = i;
  }
}

// First (lowest index) exception thrown inside a parallel loop.
class ExceptionSlot {
 public:
  void capture(std::size_t i) {
    std::lock_guard lock(mutex_);
    if (!error_ || i < index_) {
      error_ = std::current_exception();
      index_ = i;
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
  std::size_t index_ = 0;
};

}  // namespace detail

/// Maximum of value_at(i), i in [0, count). NaN counts as +inf so failures surface.
template <class F>
ArgMax argmax_serial(std::size_t count, F&& value_at) {
  ArgMax best;
  for (std::size_t i = 0; i < count; ++i) detail::absorb(best, detail::sanitize(value_at(i)), i);
  return best;
}

template <class F>
ArgMax argmax_omp(std::size_t count, F&& value_at) {
#ifdef _OPENMP
  ArgMax best;
  detail::ExceptionSlot slot;
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel
  {
    ArgMax local;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        detail::absorb(local, detail::sanitize(value_at(static_cast<std::size_t>(i))),
                       static_cast<std::size_t>(i));
      } catch (...) {
        slot.capture(static_cast<std::size_t>(i));
      }
    }
#pragma omp critical(blowup_argmax)
    {
      if (local.found()) detail::absorb(best, local.value, local.index);
    }
  }
  slot.rethrow();
  return best;
#else
  return argmax_serial(count, std::forward<F>(value_at));
#endif
}

template <class F>
ArgMax argmax(std::size_t count, F&& value_at, Exec exec = Exec::parallel) {
  return exec == Exec::serial ? argmax_serial(count, value_at) : argmax_omp(count, value_at);
}

template <class F>
void for_each_index(std::size_t count, F&& body, Exec exec = Exec::parallel) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
#ifdef _OPENMP
  detail::ExceptionSlot slot;
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      slot.capture(static_cast<std::size_t>(i));
    }
  }
  slot.rethrow();
#else
  for (std::size_t i = 0; i < count; ++i) body(i);
#endif
}

/// out[i] = f(i); slots are filled independently so the result is schedule independent.
template <class T, class F>
std::vector<T> map_index(std::size_t count, F&& f, Exec exec = Exec::parallel) {
  std::vector<T> out(count);
  for_each_index(count, [&](std::size_t i) { out[i] = f(i); }, exec);
  return out;
}

}  // namespace blowup::par
