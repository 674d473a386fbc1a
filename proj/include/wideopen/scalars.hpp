#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>

#include "wideopen/error.hpp"

namespace wideopen {

using Rational = mpq_class;

class PContext {
public:
    explicit PContext(long p);
    long p() const { return p_; }
    bool operator==(const PContext&) const = default;

private:
    long p_;
};

// Exponent e of a norm |x| = p^e; bottom stands for |0|, i.e. -infinity.
class NormExp {
public:
    NormExp() = default;
    NormExp(Rational e) : e_(std::move(e)) {}
    NormExp(long e) : e_(Rational(e)) {}
    static NormExp bottom() { return NormExp(); }

    bool is_bottom() const { return !e_.has_value(); }
    const Rational& value() const;

    friend NormExp operator+(const NormExp& a, const NormExp& b);
    friend NormExp operator-(const NormExp& a, const Rational& b);
    friend bool operator==(const NormExp& a, const NormExp& b);
    friend std::strong_ordering operator<=>(const NormExp& a, const NormExp& b);

    std::string str() const;

private:
    std::optional<Rational> e_;
};

NormExp max(const NormExp& a, const NormExp& b);

// nullopt is +infinity (x = 0).
std::optional<long> valuation(const PContext& ctx, const Rational& x);
NormExp norm_exp(const PContext& ctx, const Rational& x);

Rational checked_div(const Rational& x, const Rational& y);

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& x);

// Largest integer <= x, smallest integer >= x.
long floor_long(const Rational& x);
long ceil_long(const Rational& x);

} // namespace wideopen
