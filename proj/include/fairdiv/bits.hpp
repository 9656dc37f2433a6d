#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fairdiv {

/// An owned, append-only string of bits. Message payloads are BitStrings,
/// and their length is exactly what cost accounting charges.
class BitString {
public:
    BitString() = default;

    static BitString from_string(std::string_view zeros_and_ones);

    void push_back(bool bit) { bits_.push_back(bit); }
    /// Appends `value` big-endian in exactly `width` bits.
    void append_uint(std::uint64_t value, int width);
    void append(const BitString& other);

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    bool operator[](std::size_t i) const { return bits_[i]; }

    std::string to_string() const;

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    std::vector<bool> bits_;
};

/// Sequential decoder over a BitString. Reading past the end throws.
class BitReader {
public:
    explicit BitReader(const BitString& bits) : bits_(&bits) {}

    bool read_bit();
    std::uint64_t read_uint(int width);
    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bits_->size() - pos_; }

private:
    const BitString* bits_;
    std::size_t pos_ = 0;
};

}  // namespace fairdiv
