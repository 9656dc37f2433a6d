#include "wire.hpp"

#include <algorithm>

#include "fairdiv/errors.hpp"

namespace fairdiv::wire {

std::vector<std::vector<std::int64_t>> exchange_ints(Channel& channel, const Outgoing& messages, int width) {
    std::vector<Message> round;
    for (const auto& [sender, values] : messages) {
        BitString payload;
        for (auto v : values) payload.append_uint(static_cast<std::uint64_t>(v), width);
        round.push_back({sender, std::move(payload)});
    }
    channel.exchange(std::move(round));
    std::vector<std::vector<std::int64_t>> out;
    for (const auto& msg : channel.transcript().rounds().back()) {
        BitReader in(msg.payload);
        std::vector<std::int64_t> values;
        while (in.remaining() > 0) values.push_back(static_cast<std::int64_t>(in.read_uint(width)));
        out.push_back(std::move(values));
    }
    return out;
}

std::vector<std::vector<bool>> exchange_masks(Channel& channel,
                                              const std::vector<std::pair<PartyId, std::vector<bool>>>& messages) {
    std::vector<Message> round;
    for (const auto& [sender, bits] : messages) {
        BitString payload;
        for (bool b : bits) payload.push_back(b);
        round.push_back({sender, std::move(payload)});
    }
    channel.exchange(std::move(round));
    std::vector<std::vector<bool>> out;
    for (const auto& msg : channel.transcript().rounds().back()) {
        std::vector<bool> bits;
        for (std::size_t i = 0; i < msg.payload.size(); ++i) bits.push_back(msg.payload[i]);
        out.push_back(std::move(bits));
    }
    return out;
}

std::int64_t grid_for(const Rational& scale, const Rational& eps) {
    if (eps <= 0) throw PreconditionError("eps must be positive");
    Rational ratio = scale / eps;
    auto cells = to_int64(ceil_of(ratio));
    return static_cast<std::int64_t>(next_pow2(static_cast<std::uint64_t>(std::max<std::int64_t>(2, cells))));
}

}  // namespace fairdiv::wire
