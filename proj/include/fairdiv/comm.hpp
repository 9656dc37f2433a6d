#pragma once

// Synchronous message passing between parties with bit-exact accounting.
//
// A protocol run appends rounds to a Transcript; every party may speak at
// most once per round. The cost of a finished transcript is its
// (rounds, max bits by one party in one round, total bits) profile.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fairdiv/bits.hpp"

namespace fairdiv {

using PartyId = int;

struct Message {
    PartyId sender = 0;
    BitString payload;
};

struct CostProfile {
    std::int64_t rounds = 0;
    std::int64_t t = 0;
    std::int64_t total_bits = 0;

    friend bool operator==(const CostProfile&, const CostProfile&) = default;
};

class Transcript {
public:
    using Round = std::vector<Message>;

    /// Appends one synchronous round. Throws ProtocolError if the transcript
    /// is finished or a sender appears twice.
    void round_exchange(std::vector<Message> messages);
    void finish() { finished_ = true; }

    bool finished() const { return finished_; }
    const std::vector<Round>& rounds() const { return rounds_; }

    /// Throws ProtocolError when the transcript is still running.
    CostProfile cost() const;

    /// [[{"sender": i, "bits": "0101"}, ...], ...]
    nlohmann::json to_json() const;

private:
    std::vector<Round> rounds_;
    bool finished_ = false;
};

CostProfile cost(const Transcript& transcript);

/// Convenience front end used by the protocols: collects one message per
/// party and flushes them as one round.
class Channel {
public:
    explicit Channel(Transcript& transcript) : transcript_(&transcript) {}

    /// One round in which each listed party sends its payload.
    void exchange(std::vector<Message> messages) { transcript_->round_exchange(std::move(messages)); }
    /// Round where every party in 0..n-1 sends payloads[i].
    void exchange_all(const std::vector<BitString>& payloads);

    Transcript& transcript() { return *transcript_; }

private:
    Transcript* transcript_;
};

/// Public randomness visible to every party. Counter-mode generator: word i
/// of the stream is splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15), and
/// bits are consumed from each word most-significant first.
class PublicCoins {
public:
    explicit PublicCoins(std::uint64_t seed, std::uint64_t position = 0) : seed_(seed), position_(position) {}

    BitString draw_public_bits(std::int64_t count);
    /// `width` bits as an unsigned integer (width <= 64).
    std::uint64_t draw_uint(int width);
    /// Uniform integer in [0, n) by rejection sampling (n >= 1).
    std::uint64_t draw_below(std::uint64_t n);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t position() const { return position_; }

private:
    bool next_bit();

    std::uint64_t seed_;
    std::uint64_t position_;
};

BitString draw_public_bits(PublicCoins& coins, std::int64_t count);

}  // namespace fairdiv
