#pragma once

// Small helpers shared by the protocol implementations: fixed-width integer
// messages whose contents are read back from the transcript, so that every
// decision a party takes depends only on bits it actually received.

#include <cstdint>
#include <utility>
#include <vector>

#include "fairdiv/comm.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv::wire {

/// Each entry: a sender and the integers it sends, all `width` bits wide.
using Outgoing = std::vector<std::pair<PartyId, std::vector<std::int64_t>>>;

/// One round; returns the decoded integers of each sender, in the order given.
std::vector<std::vector<std::int64_t>> exchange_ints(Channel& channel, const Outgoing& messages, int width);

/// One round of raw bit masks; returns each sender's bits in the order given.
std::vector<std::vector<bool>> exchange_masks(Channel& channel,
                                              const std::vector<std::pair<PartyId, std::vector<bool>>>& messages);

/// next_pow2(ceil(scale / eps)), at least 2.
std::int64_t grid_for(const Rational& scale, const Rational& eps);

}  // namespace fairdiv::wire
