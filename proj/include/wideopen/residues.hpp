#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wideopen/classical.hpp"

namespace wideopen {

// sum alpha_j t^j dt in the annulus coordinate
struct AnnularDifferential {
    OrientedAnnulus annulus;
    LaurentChunk series;
};

Rational residue(const AnnularDifferential& w);
Rational flip_end(const AnnularDifferential& w);

// Pull back w (written in s) along s = f(t) on p^q1 < |t| < p^q2.
AnnularDifferential pullback(const PContext& ctx, const AnnularDifferential& w, const LaurentChunk& f,
                             const Rational& q1, const Rational& q2, Window window);

bool end_stability_check(const AnnularDifferential& a1, const AnnularDifferential& a2);

struct DiscLemmaResult {
    Rational lhs;
    Rational rhs;
    bool equal;
};

// Principal parts are given in t - a at finite points a inside the disc bounded by A.
DiscLemmaResult disc_lemma_check(const PContext& ctx, const std::vector<std::pair<Point, LaurentChunk>>& poles,
                                 const OrientedAnnulus& A);

struct ResidueTheoremResult {
    std::vector<Rational> per_end;
    Rational sum;
};

// Throws PoleInsideDomain unless every pole lies in a removed disc.
void check_poles_removed(const WideOpenDomain& W, const RationalDiff& w);
// Residue at end i read on a boundary annulus, INNER orientation.
Rational end_residue(const WideOpenDomain& W, std::size_t i, const RationalDiff& w);
ResidueTheoremResult residue_theorem_check(const WideOpenDomain& W, const RationalDiff& w);

// X inside W: ends with a trim are closed off at that radius, the others kept.
struct Subcurve {
    WideOpenDomain domain;
    std::vector<std::optional<Rational>> trims;
};

struct InsideOutsideResult {
    Rational inner_sum; // over the ends of X that are ends of W
    Rational outer_sum; // over the ends of the discs cut away at the trims
    bool equal;
};

InsideOutsideResult inside_outside_check(const Subcurve& X, const RationalDiff& w);

// W split along p^r1 < |t - c| < p^r2: U = W n {|t-c| < p^r2}, V = W n {|t-c| > p^r1}.
struct SplittingResult {
    std::vector<std::size_t> u_ends;
    std::vector<std::size_t> v_ends;
    Rational sum_u;
    Rational sum_v;
    Rational cut_residue; // on the overlap, INNER toward c
    bool antisymmetric;
};

SplittingResult splitting_check(const WideOpenDomain& W, const Rational& c, const Rational& r1, const Rational& r2,
                                const RationalDiff& w);

} // namespace wideopen
