#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wideopen/laurent.hpp"

namespace wideopen {

// A point of the projective line with rational or infinite coordinate.
struct Point {
    bool inf = false;
    Rational a;

    static Point finite(const Rational& a) { return {false, a}; }
    static Point infinity() { return {true, Rational(0)}; }

    bool operator==(const Point& o) const { return inf == o.inf && (inf || a == o.a); }
    bool operator<(const Point& o) const {
        if (inf != o.inf) return !inf;
        return !inf && a < o.a;
    }
    std::string str() const { return inf ? "inf" : to_string(a); }
};

// Closed disc |t - a| <= p^radius_q, or |t| >= p^{-radius_q} when centered at infinity.
struct Disc {
    Point center;
    Rational radius_q;
};

struct End {
    std::size_t index;
    Point center;
};

enum class Toward { Inner, Outer };

// A(0; p^q1, p^q2) in the coordinate t - a (or 1/t at infinity).
struct OrientedAnnulus {
    End end;
    Rational q1;
    Rational q2;
    Toward toward = Toward::Inner;
};

class WideOpenDomain {
public:
    WideOpenDomain(PContext ctx, std::vector<Disc> discs);

    const PContext& ctx() const { return ctx_; }
    std::size_t num_ends() const { return discs_.size(); }
    const std::vector<Disc>& discs() const { return discs_; }
    const Disc& disc(std::size_t i) const { return discs_.at(i); }
    End end(std::size_t i) const { return {i, discs_.at(i).center}; }
    std::vector<Point> centers() const;

    // Supremum of radius exponents q such that the annulus of radius q around
    // end i stays in the domain; nullopt when unbounded (single disc).
    std::optional<Rational> separation(std::size_t i) const;

    // Is the point inside removed disc i?
    bool in_disc(std::size_t i, const Point& x) const;
    std::optional<std::size_t> disc_containing(const Point& x) const;

private:
    PContext ctx_;
    std::vector<Disc> discs_;
};

WideOpenDomain build_domain(const PContext& ctx, const std::vector<Disc>& discs);

OrientedAnnulus boundary_annulus(const WideOpenDomain& d, std::size_t end, const Rational& q_outer);

struct AffinoidSlice {
    WideOpenDomain domain;
    std::vector<Rational> trims;

    AffinoidSlice(WideOpenDomain d, std::vector<Rational> t);
};

NormExp spectral_norm_exp(const AffinoidSlice& X, const std::vector<LaurentChunk>& per_end);

// Norm exponent of (local coordinate at `from`) expanded in the coordinate at
// `to`, at radius q: the Gauss norm of t - a, or of 1/t, in t_to.
Rational factor_gauss(const PContext& ctx, const Point& from, const Point& to, const Rational& q);

} // namespace wideopen
