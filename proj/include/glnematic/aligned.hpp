#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace glnematic {

inline constexpr std::size_t kBufferAlignment = 64;

/// Allocator handing out 64-byte aligned storage, so FFT plans and AVX loads
/// see the same alignment on every buffer.
template <typename T>
struct AlignedAllocator {
  using value_type = T;

  AlignedAllocator() noexcept = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t count) {
    return static_cast<T*>(::operator new(count * sizeof(T), std::align_val_t{kBufferAlignment}));
  }
  void deallocate(T* p, std::size_t) noexcept {
    ::operator delete(p, std::align_val_t{kBufferAlignment});
  }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

template <typename T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

using Complex = std::complex<double>;

}  // namespace glnematic
