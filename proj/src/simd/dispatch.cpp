#include <atomic>
#include <cstdlib>
#include <string>

#include "lspp/error.hpp"
#include "lspp/simd/kernels.hpp"

namespace lspp::simd {

#if defined(LSPP_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif

std::string_view to_string(Backend backend) {
    switch (backend) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

bool backend_available(Backend backend) {
    switch (backend) {
        case Backend::Scalar: return true;
        case Backend::Avx2:
#if defined(LSPP_HAVE_AVX2)
            __builtin_cpu_init();
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& kernels_for(Backend backend) {
    require(backend_available(backend), ErrorCode::InvalidArgument,
            "SIMD backend '" + std::string(to_string(backend)) + "' is not available on this machine");
#if defined(LSPP_HAVE_AVX2)
    if (backend == Backend::Avx2) return avx2_kernels();
#endif
    return scalar_kernels();
}

namespace {

const KernelTable* initial_table() {
    if (const char* env = std::getenv("LSPP_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return &scalar_kernels();
        if (v == "avx2" && backend_available(Backend::Avx2)) return &kernels_for(Backend::Avx2);
    }
    if (backend_available(Backend::Avx2)) return &kernels_for(Backend::Avx2);
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() {
    static std::atomic<const KernelTable*> slot{initial_table()};
    return slot;
}

}  // namespace

const KernelTable& kernels() { return *active_slot().load(std::memory_order_acquire); }

Backend active_backend() { return kernels().backend; }

void set_backend(Backend backend) { active_slot().store(&kernels_for(backend), std::memory_order_release); }

}  // namespace lspp::simd
