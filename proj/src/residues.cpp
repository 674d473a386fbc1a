#include "wideopen/residues.hpp"

namespace wideopen {

static Rational alpha_minus_one(const LaurentChunk& s) {
    if (!s.known_at(-1)) throw Error(ErrorCode::TailObscuresResidue, "tail covers exponent -1");
    return s.coeff(-1);
}

Rational residue(const AnnularDifferential& w) {
    Rational a = alpha_minus_one(w.series);
    return w.annulus.toward == Toward::Inner ? a : Rational(-a);
}

Rational flip_end(const AnnularDifferential& w) {
    // s = 1/t: alpha_j t^j dt = -alpha_j s^{-j-2} ds; the s-coordinate is
    // orientation preserving for the opposite end.
    alpha_minus_one(w.series);
    LaurentChunk::Map m;
    for (auto& [j, a] : w.series.coeffs()) m[-j - 2] = -a;
    Rational s = LaurentChunk(std::move(m)).coeff(-1);
    return w.annulus.toward == Toward::Inner ? s : Rational(-s);
}

AnnularDifferential pullback(const PContext& ctx, const AnnularDifferential& w, const LaurentChunk& f,
                             const Rational& q1, const Rational& q2, Window window) {
    MapClass mc = classify_map(ctx, f, q1, q2);
    LaurentChunk df = derivative(f);
    long dmin = *df.min_exp(), dmax = *df.max_exp();
    LaurentChunk g = compose(ctx, w.series, f, q1, q2, Window{window.lo - dmax, window.hi - dmin});
    AnnularDifferential out{w.annulus, g * df};
    out.annulus.q1 = q1;
    out.annulus.q2 = q2;
    if (mc.orientation == Orientation::Reversing)
        out.annulus.toward = w.annulus.toward == Toward::Inner ? Toward::Outer : Toward::Inner;
    return out;
}

bool end_stability_check(const AnnularDifferential& a1, const AnnularDifferential& a2) {
    return residue(a1) == residue(a2);
}

DiscLemmaResult disc_lemma_check(const PContext& ctx, const std::vector<std::pair<Point, LaurentChunk>>& poles,
                                 const OrientedAnnulus& A) {
    const Point& c = A.end.center;
    RationalFn f;
    Rational lhs = 0;
    for (auto& [x, part] : poles) {
        if (x.inf || part.tail()) throw Error(ErrorCode::SchemaError, "finite points with finite principal parts expected");
        bool inside = c.inf ? NormExp(Rational(-A.q1)) <= norm_exp(ctx, x.a) : norm_exp(ctx, x.a - c.a) <= NormExp(A.q1);
        if (!inside) throw Error(ErrorCode::PoleOnAnnulus, "pole " + x.str() + " not inside the disc");
        for (auto& [e, v] : part.coeffs()) {
            if (e >= 0) throw Error(ErrorCode::SchemaError, "principal part with nonnegative exponent");
            f.add_pole(x.a, -e, v);
        }
        lhs += part.coeff(-1);
    }
    AnnularDifferential on_a{A, annulus_expansion(ctx, RationalDiff{f}, c, A.q1, A.q2, Window{-1, -1})};
    Rational rhs = residue(on_a);
    return {lhs, rhs, lhs == rhs};
}

void check_poles_removed(const WideOpenDomain& W, const RationalDiff& w) {
    std::vector<Point> pts;
    Rational res_sum = 0;
    for (auto& [a, part] : w.fn.poles()) {
        pts.push_back(Point::finite(a));
        auto it = part.find(1);
        if (it != part.end()) res_sum += it->second;
    }
    if (!w.fn.entire().empty() || res_sum != 0) pts.push_back(Point::infinity());
    for (auto& x : pts)
        if (!W.disc_containing(x)) throw Error(ErrorCode::PoleInsideDomain, "pole at " + x.str() + " lies in the domain");
}

static Rational default_outer(const WideOpenDomain& W, std::size_t i) {
    auto sep = W.separation(i);
    const Rational& r = W.disc(i).radius_q;
    return sep ? Rational((r + *sep) / 2) : Rational(r + 1);
}

static Rational annulus_residue(const WideOpenDomain& W, std::size_t i, const Rational& q2, const RationalDiff& w) {
    const Disc& d = W.disc(i);
    return annulus_expansion(W.ctx(), w, d.center, d.radius_q, q2, Window{-1, -1}).coeff(-1);
}

Rational end_residue(const WideOpenDomain& W, std::size_t i, const RationalDiff& w) {
    return annulus_residue(W, i, default_outer(W, i), w);
}

ResidueTheoremResult residue_theorem_check(const WideOpenDomain& W, const RationalDiff& w) {
    check_poles_removed(W, w);
    ResidueTheoremResult r;
    r.sum = 0;
    for (std::size_t i = 0; i < W.num_ends(); ++i) {
        r.per_end.push_back(end_residue(W, i, w));
        r.sum += r.per_end.back();
    }
    return r;
}

InsideOutsideResult inside_outside_check(const Subcurve& X, const RationalDiff& w) {
    const WideOpenDomain& W = X.domain;
    check_poles_removed(W, w);
    if (X.trims.size() != W.num_ends()) throw Error(ErrorCode::SchemaError, "one optional trim per end required");
    InsideOutsideResult r{0, 0, false};
    for (std::size_t i = 0; i < W.num_ends(); ++i) {
        if (X.trims[i]) {
            const Rational& q = *X.trims[i];
            auto sep = W.separation(i);
            if (!(W.disc(i).radius_q < q) || (sep && !(q < *sep)))
                throw Error(ErrorCode::RadiusOutOfRange, "trim " + to_string(q));
            // the cut-away disc's end faces outward: reversed orientation
            r.outer_sum -= annulus_residue(W, i, q, w);
        } else {
            r.inner_sum += end_residue(W, i, w);
        }
    }
    r.equal = r.inner_sum == r.outer_sum;
    return r;
}

SplittingResult splitting_check(const WideOpenDomain& W, const Rational& c, const Rational& r1, const Rational& r2,
                                const RationalDiff& w) {
    if (!(r1 < r2)) throw Error(ErrorCode::NotAnAnnularOverlap, "empty overlap");
    const PContext& ctx = W.ctx();
    check_poles_removed(W, w);
    SplittingResult r;
    r.sum_u = 0;
    r.sum_v = 0;
    for (std::size_t k = 0; k < W.num_ends(); ++k) {
        const Disc& d = W.disc(k);
        bool inner = false, outer = false;
        if (!d.center.inf) {
            NormExp dist = norm_exp(ctx, d.center.a - c);
            inner = max(dist, NormExp(d.radius_q)) <= NormExp(r1);
            outer = NormExp(r2) <= dist && NormExp(d.radius_q) < dist;
        } else {
            NormExp nc = norm_exp(ctx, c);
            NormExp lim(Rational(-d.radius_q));
            outer = nc < NormExp(r2) ? NormExp(r2) <= lim : nc < lim;
        }
        if (!inner && !outer)
            throw Error(ErrorCode::NotAnAnnularOverlap, "disc at " + d.center.str() + " meets the overlap");
        Rational res = end_residue(W, k, w);
        if (inner) {
            r.u_ends.push_back(k);
            r.sum_u += res;
        } else {
            r.v_ends.push_back(k);
            r.sum_v += res;
        }
    }
    r.cut_residue = annulus_expansion(ctx, w, Point::finite(c), r1, r2, Window{-1, -1}).coeff(-1);
    // U's new end faces outward (reversed), V's faces c (INNER)
    r.antisymmetric = r.sum_u == -r.sum_v && r.sum_u - r.cut_residue == 0 && r.sum_v + r.cut_residue == 0;
    return r;
}

} // namespace wideopen
