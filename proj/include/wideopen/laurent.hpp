#pragma once

#include <map>
#include <optional>
#include <string>

#include "wideopen/scalars.hpp"

namespace wideopen {

struct Window {
    long lo;
    long hi;
};

enum class TailSide { Lower, Upper };

// Certificate for the omitted part of a series.  Lower: exponents < edge are
// omitted; Upper: exponents > edge.  Every omitted coefficient c_j satisfies
// norm_exp(c_j) + q0*j <= bound, so the Gauss norm of the omitted part is
// monotone away from q0 (upwards for Lower, downwards for Upper).
struct TailBound {
    TailSide side = TailSide::Lower;
    long edge = 0;
    Rational q0;
    NormExp bound;
    long p = 2;

    bool covers(long j) const { return side == TailSide::Lower ? j < edge : j > edge; }
    NormExp term_bound(long j) const { return bound - q0 * j; }
    // Gauss-norm bound of the omitted part at radius exponent q.
    NormExp at(const Rational& q) const;
    // Same certificate restated at another radius on the valid side.
    TailBound restated(const Rational& q) const;

    bool operator==(const TailBound& o) const;
};

class LaurentChunk {
public:
    using Map = std::map<long, Rational>;

    LaurentChunk() = default;
    explicit LaurentChunk(Map coeffs, std::optional<TailBound> tail = std::nullopt);
    static LaurentChunk monomial(const Rational& c, long e);

    const Map& coeffs() const { return coeffs_; }
    const std::optional<TailBound>& tail() const { return tail_; }

    // Explicit coefficient; throws WindowNotCertifiable if e lies in the tail.
    Rational coeff(long e) const;
    bool known_at(long e) const { return !tail_ || !tail_->covers(e); }
    bool is_polynomial() const { return !tail_; }
    bool empty() const { return coeffs_.empty() && !tail_; }
    std::optional<long> min_exp() const;
    std::optional<long> max_exp() const;

    // Explicit coefficients with exponent in [w.lo, w.hi]; the tail is dropped.
    LaurentChunk restrict_to(Window w) const;
    LaurentChunk without_tail() const { return LaurentChunk(coeffs_); }
    LaurentChunk shifted(long k) const;
    LaurentChunk scaled(const Rational& c) const;

    LaurentChunk& operator+=(const LaurentChunk& o);
    LaurentChunk& operator-=(const LaurentChunk& o);
    friend LaurentChunk operator+(LaurentChunk a, const LaurentChunk& b) { return a += b; }
    friend LaurentChunk operator-(LaurentChunk a, const LaurentChunk& b) { return a -= b; }
    friend LaurentChunk operator-(const LaurentChunk& a) { return a.scaled(-1); }
    friend LaurentChunk operator*(const LaurentChunk& a, const LaurentChunk& b);

    bool operator==(const LaurentChunk& o) const;
    std::string str() const;

private:
    void normalize();

    Map coeffs_;
    std::optional<TailBound> tail_;
};

// Combine two certificates of the same side; radii are reconciled by restating.
TailBound merge_tails(const TailBound& a, const TailBound& b);

LaurentChunk derivative(const LaurentChunk& f);

NormExp gauss_norm_exp(const PContext& ctx, const LaurentChunk::Map& f, const Rational& q);
NormExp gauss_norm_exp(const PContext& ctx, const LaurentChunk& f, const Rational& q);

struct DominantTerm {
    long n;
    Rational lead;
};

DominantTerm dominant_term(const PContext& ctx, const LaurentChunk& f, const Rational& q1,
                           const Rational& q2);

enum class Orientation { Preserving, Reversing };

struct MapClass {
    long degree;
    Orientation orientation;
};

MapClass classify_map(const PContext& ctx, const LaurentChunk& f, const Rational& q1,
                      const Rational& q2);

LaurentChunk invert_unit(const PContext& ctx, const LaurentChunk& f, const Rational& q1,
                         const Rational& q2, Window window);

LaurentChunk compose(const PContext& ctx, const LaurentChunk& g, const LaurentChunk& f,
                     const Rational& q1, const Rational& q2, Window window);

} // namespace wideopen
