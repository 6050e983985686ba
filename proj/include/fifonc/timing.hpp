#pragma once

#include <ctime>

namespace fifonc {

// CPU time consumed by the calling thread, in microseconds. Per-thread so that
// parallel experiment workers do not inflate each other's measurements.
inline double thread_cpu_us() {
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) * 1e6 + static_cast<double>(ts.tv_nsec) * 1e-3;
}

class CpuStopwatch {
public:
    CpuStopwatch() : start_(thread_cpu_us()) {}
    [[nodiscard]] double elapsed_us() const { return thread_cpu_us() - start_; }

private:
    double start_;
};

}  // namespace fifonc
