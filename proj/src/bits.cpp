#include "fairdiv/bits.hpp"

#include <stdexcept>

namespace fairdiv {

BitString BitString::from_string(std::string_view zeros_and_ones) {
    BitString out;
    for (char c : zeros_and_ones) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit string may only contain 0 and 1");
        out.push_back(c == '1');
    }
    return out;
}

void BitString::append_uint(std::uint64_t value, int width) {
    if (width < 0 || width > 64) throw std::invalid_argument("bit width out of range");
    if (width < 64 && (value >> width) != 0)
        throw std::invalid_argument("value " + std::to_string(value) + " does not fit in " + std::to_string(width) +
                                    " bits");
    for (int i = width - 1; i >= 0; --i) bits_.push_back(((value >> i) & 1U) != 0);
}

void BitString::append(const BitString& other) { bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end()); }

std::string BitString::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (bool b : bits_) s.push_back(b ? '1' : '0');
    return s;
}

bool BitReader::read_bit() {
    if (pos_ >= bits_->size()) throw std::out_of_range("read past end of message");
    return (*bits_)[pos_++];
}

std::uint64_t BitReader::read_uint(int width) {
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>(read_bit());
    return v;
}

}  // namespace fairdiv
