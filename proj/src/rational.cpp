#include "fairdiv/rational.hpp"

#include <bit>
#include <stdexcept>

namespace fairdiv {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

Integer parse_integer(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    Integer v(std::string(s), 10);
    return neg ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty rational");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(text.substr(0, slash));
        std::string_view den_text = text.substr(slash + 1);
        if (!all_digits(den_text)) throw std::invalid_argument("bad denominator in '" + std::string(text) + "'");
        Integer den(std::string(den_text), 10);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        bool neg = !whole.empty() && whole.front() == '-';
        if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
            (!frac.empty() && !all_digits(frac)))
            throw std::invalid_argument("bad decimal '" + std::string(text) + "'");
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        Integer num = (whole.empty() ? Integer(0) : Integer(std::string(whole), 10)) * scale +
                      (frac.empty() ? Integer(0) : Integer(std::string(frac), 10));
        Rational r(neg ? Integer(-num) : num, scale);
        r.canonicalize();
        return r;
    }
    return Rational(parse_integer(text));
}

std::string to_string(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Integer floor_of(const Rational& value) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return q;
}

Integer ceil_of(const Rational& value) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return q;
}

std::int64_t to_int64(const Integer& value) {
    if (!value.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits: " + value.get_str());
    return value.get_si();
}

int ceil_log2(std::uint64_t n) {
    if (n <= 1) return 0;
    return static_cast<int>(std::bit_width(n - 1));
}

int width_for(std::uint64_t max_value) { return std::max(1, static_cast<int>(std::bit_width(max_value))); }

std::uint64_t next_pow2(std::uint64_t n) { return n <= 1 ? 1 : std::bit_ceil(n); }

}  // namespace fairdiv
