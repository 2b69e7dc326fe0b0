#include "hicrit/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace hicrit {

namespace {
std::atomic<int> g_threads{0};
}

void set_num_threads(int threads) { g_threads.store(threads < 1 ? 0 : threads); }

int num_threads() {
    const int t = g_threads.load();
    return t > 0 ? t : omp_get_max_threads();
}

int threads_from_env() {
    const char* raw = std::getenv("HICRIT_THREADS");
    if (raw == nullptr) return 0;
    try {
        const int v = std::stoi(raw);
        return v > 0 ? v : 0;
    } catch (...) {
        return 0;
    }
}

}  // namespace hicrit
