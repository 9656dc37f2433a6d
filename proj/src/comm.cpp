#include "fairdiv/comm.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include <nlohmann/json.hpp>

#include "fairdiv/errors.hpp"

namespace fairdiv {

void Transcript::round_exchange(std::vector<Message> messages) {
    if (finished_) throw ProtocolError("round_exchange on a finished transcript");
    std::set<PartyId> seen;
    for (const auto& msg : messages) {
        if (msg.sender < 0) throw ProtocolError("negative party id");
        if (!seen.insert(msg.sender).second)
            throw ProtocolError("party " + std::to_string(msg.sender) + " sent twice in one round");
    }
    rounds_.push_back(std::move(messages));
}

CostProfile Transcript::cost() const {
    if (!finished_) throw ProtocolError("cost of an unfinished transcript");
    CostProfile c;
    c.rounds = static_cast<std::int64_t>(rounds_.size());
    for (const auto& round : rounds_) {
        for (const auto& msg : round) {
            auto len = static_cast<std::int64_t>(msg.payload.size());
            c.t = std::max(c.t, len);
            c.total_bits += len;
        }
    }
    return c;
}

nlohmann::json Transcript::to_json() const {
    auto out = nlohmann::json::array();
    for (const auto& round : rounds_) {
        auto r = nlohmann::json::array();
        for (const auto& msg : round) r.push_back({{"sender", msg.sender}, {"bits", msg.payload.to_string()}});
        out.push_back(std::move(r));
    }
    return out;
}

CostProfile cost(const Transcript& transcript) { return transcript.cost(); }

void Channel::exchange_all(const std::vector<BitString>& payloads) {
    std::vector<Message> msgs;
    msgs.reserve(payloads.size());
    for (std::size_t i = 0; i < payloads.size(); ++i) msgs.push_back({static_cast<PartyId>(i), payloads[i]});
    transcript_->round_exchange(std::move(msgs));
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

bool PublicCoins::next_bit() {
    std::uint64_t word_index = position_ / 64;
    std::uint64_t word = splitmix64(seed_ + (word_index + 1) * 0x9E3779B97F4A7C15ULL);
    int bit = 63 - static_cast<int>(position_ % 64);
    ++position_;
    return ((word >> bit) & 1U) != 0;
}

BitString PublicCoins::draw_public_bits(std::int64_t count) {
    if (count < 0) throw PreconditionError("negative coin count");
    BitString out;
    for (std::int64_t i = 0; i < count; ++i) out.push_back(next_bit());
    return out;
}

std::uint64_t PublicCoins::draw_uint(int width) {
    if (width < 0 || width > 64) throw PreconditionError("coin width out of range");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>(next_bit());
    return v;
}

std::uint64_t PublicCoins::draw_below(std::uint64_t n) {
    if (n == 0) throw PreconditionError("draw_below(0)");
    if (n == 1) return 0;
    int width = static_cast<int>(std::bit_width(n - 1));
    for (;;) {
        std::uint64_t v = draw_uint(width);
        if (v < n) return v;
    }
}

BitString draw_public_bits(PublicCoins& coins, std::int64_t count) { return coins.draw_public_bits(count); }

}  // namespace fairdiv
