#include <atomic>
#include <cstdlib>
#include <string_view>

#include "nwlab/simd/kernels.hpp"

namespace nwlab::simd {

namespace {

std::atomic<const KernelBackend*> g_active{nullptr};
std::atomic<unsigned> g_threads{1};

const KernelBackend* pick_default() {
    if (const char* env = std::getenv("NWLAB_KERNELS")) {
        const std::string_view want(env);
        if (want == "scalar") return &scalar_backend();
        if (want == "avx2" && avx2_backend() != nullptr) return avx2_backend();
        // fall through to auto on anything else
    }
    if (const KernelBackend* avx2 = avx2_backend()) return avx2;
    return &scalar_backend();
}

}  // namespace

const KernelBackend& active_backend() {
    const KernelBackend* b = g_active.load(std::memory_order_acquire);
    if (b == nullptr) {
        b = pick_default();
        g_active.store(b, std::memory_order_release);
    }
    return *b;
}

bool set_active_backend(std::string_view name) {
    if (name == "scalar") {
        g_active.store(&scalar_backend(), std::memory_order_release);
        return true;
    }
    if (name == "avx2") {
        if (const KernelBackend* b = avx2_backend()) {
            g_active.store(b, std::memory_order_release);
            return true;
        }
        return false;
    }
    if (name == "auto") {
        g_active.store(nullptr, std::memory_order_release);
        return true;
    }
    return false;
}

void set_threads(unsigned n) { g_threads.store(n == 0 ? 1 : n, std::memory_order_release); }

unsigned threads() { return g_threads.load(std::memory_order_acquire); }

}  // namespace nwlab::simd
