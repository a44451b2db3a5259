#include "kernels_impl.hpp"

namespace plb::kern::detail {

const KernelTable& scalar_table() noexcept {
    static const KernelTable t = make_table<ScalarLane>();
    return t;
}

} // namespace plb::kern::detail
