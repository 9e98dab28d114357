#include "modcomm/types.hpp"

namespace modcomm {

const char* version() noexcept { return MODCOMM_VERSION_STRING; }

}  // namespace modcomm
