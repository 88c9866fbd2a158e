#pragma once

// Shared error types, the ambient-variable context, size guards and the
// thread budget used by the parallel sweeps.

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace csm {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input violates a documented precondition or type invariant.
struct value_error : error {
    using error::error;
};

// A substitution produced an identically vanishing denominator factor.
struct pole_error : error {
    using error::error;
};

// Divisor is not a rational times a product of linear forms.
struct shape_error : error {
    using error::error;
};

// A size guard was exceeded.
struct guard_error : error {
    using error::error;
};

// Ambient variable ranges: x_1..x_k and y_1..y_n.
struct Context {
    int num_x = 0;
    int num_y = 0;
};

namespace limits {

// Guards can be bypassed with csm --unsafe-limits; set once at startup.
inline std::atomic<bool> unsafe{false};

// A user-requested bound below the module limit (csm --guard N).  It is
// enforced even under --unsafe-limits: guards may be lowered freely, but
// raising them needs the explicit override.
inline std::atomic<long long> requested_cap{-1};

inline void check_size(long long size, long long module_limit,
                       const std::string& what) {
    long long cap = requested_cap.load(std::memory_order_relaxed);
    if (cap >= 0 && size > cap)
        throw guard_error("size guard exceeded: " + what + " (" +
                          std::to_string(size) + " > requested bound " +
                          std::to_string(cap) + ")");
    if (size > module_limit && !unsafe.load(std::memory_order_relaxed))
        throw guard_error("size guard exceeded: " + what + " (" +
                          std::to_string(size) + " > " +
                          std::to_string(module_limit) +
                          "; pass --unsafe-limits to override)");
}

}  // namespace limits

// Worker count for parallel sweeps, capped by the CSM_THREADS variable.
inline int thread_budget() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("CSM_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && v < 1024) hw = std::min<long>(hw, v);
    }
    return hw;
}

}  // namespace csm
