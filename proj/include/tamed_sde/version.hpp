#ifndef TAMED_SDE_VERSION_HPP
#define TAMED_SDE_VERSION_HPP

namespace tamed_sde {

inline constexpr const char* kToolVersion = "1.0.0";

}

#endif
