#include "homlab/guards.hpp"

#include <cstdlib>

namespace homlab {

Guards& default_guards() {
    static Guards g = [] {
        Guards init;
        if (const char* env = std::getenv("HOMLAB_GUARD")) {
            int n = std::atoi(env);
            if (n > 0) {
                init.structure_size = n;
                init.graph_size = n;
            }
        }
        return init;
    }();
    return g;
}

} // namespace homlab
