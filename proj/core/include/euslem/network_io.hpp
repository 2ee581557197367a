#pragma once

// Binary form of a compiled MorphNetwork.

#include <cstdint>
#include <iosfwd>

#include "euslem/lexicon.hpp"

namespace euslem::lexicon {

inline constexpr char kNetworkMagic[8] = {'E', 'U', 'S', 'L', 'N', 'E', 'T', '\0'};
inline constexpr std::uint32_t kNetworkVersion = 1;

/// The rule text travels with the network and is recompiled on load.
void save_network(const MorphNetwork& net, std::ostream& out);

/// Throws DataError on a bad magic, another format version or truncation.
MorphNetwork load_network(std::istream& in);

}  // namespace euslem::lexicon
