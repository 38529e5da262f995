#ifndef FRACQM_VERSION_HPP
#define FRACQM_VERSION_HPP

namespace fracqm {

inline constexpr const char* version_string = "0.1.0";

} // namespace fracqm

#endif
