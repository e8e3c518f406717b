// Exact arbitrary-precision integers and rationals. Everything in the
// library is integer arithmetic; comparisons are cross-multiplications and
// there is no floating point on any code path.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace lrc {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_gcd(const BigInt& a, const BigInt& b) {
    return boost::multiprecision::gcd(a, b);
}

inline BigInt big_lcm(const BigInt& a, const BigInt& b) {
    return boost::multiprecision::lcm(a, b);
}

inline BigInt big_pow(const BigInt& base, unsigned exp) {
    return boost::multiprecision::pow(base, exp);
}

// Signed rational, always reduced, denominator always positive.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rational(long long n) : num_(n), den_(1) {}          // NOLINT(google-explicit-constructor)
    Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
        normalize();
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_integer() const { return den_ == 1; }

    // "a/b" or a bare integer.
    static Rational parse(std::string_view text);

    std::string str() const { return num_.str() + "/" + den_.str(); }

    // Truncated decimal expansion, computed by integer long division.
    std::string decimal(int digits) const;

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;  // canonical form
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        BigInt g = big_gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    BigInt num_;
    BigInt den_;
};

inline Rational pow(const Rational& base, unsigned exp) {
    // base is already reduced, so numerator/denominator powers stay coprime
    return Rational(big_pow(base.num(), exp), big_pow(base.den(), exp));
}

inline Rational abs(const Rational& x) {
    return x.num() < 0 ? Rational(-x.num(), x.den()) : x;
}

// Distance from a/b to the nearest integer: min(r, b-r)/b with r = a mod b.
// Always in [0, 1/2].
inline Rational fractional_distance(const BigInt& a, const BigInt& b) {
    if (b < 1) throw std::invalid_argument("fractional_distance: modulus must be >= 1");
    BigInt r = a % b;
    if (r < 0) r += b;
    BigInt mirror = b - r;
    return Rational(r <= mirror ? r : mirror, b);
}

inline Rational Rational::parse(std::string_view text) {
    try {
        auto slash = text.find('/');
        if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
        BigInt n{std::string(text.substr(0, slash))};
        BigInt d{std::string(text.substr(slash + 1))};
        return Rational(std::move(n), std::move(d));
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("Rational: cannot parse '" + std::string(text) + "'");
    }
}

inline std::string Rational::decimal(int digits) const {
    BigInt n = num_ < 0 ? BigInt(-num_) : num_;
    std::string s = num_ < 0 ? "-" : "";
    s += BigInt(n / den_).str();
    BigInt r = n % den_;
    if (digits > 0) {
        s += '.';
        for (int i = 0; i < digits; ++i) {
            r *= 10;
            s += static_cast<char>('0' + static_cast<int>(r / den_));
            r %= den_;
        }
    }
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const Rational& x) {
    return os << x.num() << '/' << x.den();
}

}  // namespace lrc
