#include "bcp/parallel.hpp"

#include <cstdlib>
#include <string>

namespace bcp {

unsigned default_threads() {
    if (const char* env = std::getenv("BCP_THREADS")) {
        try {
            const long value = std::stol(env);
            if (value > 0) return static_cast<unsigned>(value);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace bcp
