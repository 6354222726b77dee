#include <cstdlib>
#include <string_view>

#include "qnet/kernels.hpp"

namespace qnet::kernels {

const KernelTable& active() {
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* forced = std::getenv("QNET_SIMD");
        if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_table();
        if (const KernelTable* t = avx2_table()) return *t;
        return scalar_table();
    }();
    return chosen;
}

std::vector<const KernelTable*> available() {
    std::vector<const KernelTable*> tables{&scalar_table()};
    if (const KernelTable* t = avx2_table()) tables.push_back(t);
    return tables;
}

}  // namespace qnet::kernels
