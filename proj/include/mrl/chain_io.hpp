#ifndef MRL_CHAIN_IO_HPP
#define MRL_CHAIN_IO_HPP

#include <string>

#include "mrl/state.hpp"

namespace mrl {

// JSON-lines chain file: first line is the run metadata, each following line
// one recorded posterior draw.  Doubles round-trip bit-exactly.
void write_chain(const std::string& path, const ChainOutput& chain);
ChainOutput read_chain(const std::string& path);

}  // namespace mrl

#endif
