#pragma once

namespace noclick {

inline constexpr const char* kVersion = "0.1.0";

// Covariance normalization used everywhere in this library: the vacuum
// state has covariance equal to the identity matrix. Serialized states
// carry this string so files are self-describing.
inline constexpr const char* kConvention = "vacuum=identity";

}  // namespace noclick
