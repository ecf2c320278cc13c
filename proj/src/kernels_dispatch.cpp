#include "hwm/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace hwm::kernels {

#if HWM_HAVE_AVX2
const Ops* avx2_ops_impl();
#endif

const Ops* avx2_ops() {
#if HWM_HAVE_AVX2
    if (__builtin_cpu_supports("avx2")) return avx2_ops_impl();
#endif
    return nullptr;
}

namespace {

struct Selection {
    const Ops* ops;
    const char* name;
};

Selection select() {
    const char* req = std::getenv("HWMLAB_KERNELS");
    const Ops* avx2 = avx2_ops();
    if (req != nullptr && std::strcmp(req, "scalar") == 0) return {&scalar_ops(), "scalar"};
    if (req != nullptr && std::strcmp(req, "avx2") == 0 && avx2 != nullptr) return {avx2, "avx2"};
    if (req == nullptr && avx2 != nullptr) return {avx2, "avx2"};
    return {&scalar_ops(), "scalar"};
}

const Selection& selection() {
    static const Selection s = select();
    return s;
}

} // namespace

const Ops& active() { return *selection().ops; }

const char* active_name() { return selection().name; }

} // namespace hwm::kernels
