#pragma once

namespace dispatchsim {

inline constexpr const char* version_string = "v0.1.0";

}
