#include <cstdlib>
#include <limits>

#include "wideopen/solver.hpp"

// Coefficient matching against the global partial-fraction parametrization.
// Expansions are closed-form binomials; nothing here goes through bases,
// pairings or local_expansion.

namespace wideopen {

namespace {

Rational choose(long n, long k) {
    if (k < 0) return 0;
    Rational r = 1;
    for (long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

Rational power(const Rational& x, long k) {
    Rational r = 1;
    for (long i = 0; i < std::labs(k); ++i) r *= x;
    return k < 0 ? Rational(1 / r) : r;
}

struct Unknown {
    bool constant;
    std::size_t point;
    long e;
};

struct Equation {
    bool inf_residue;
    std::size_t point;
    long u;
};

class Oracle {
public:
    Oracle(const MLProblem& pb) : pb_(pb), pts_(pb.points()), diff_(pb.mode == Mode::Differentials) {}

    long pure_top(std::size_t i) const { return diff_ && pts_[i].inf ? -2 : -1; }

    // coefficient of t_k^u in the expansion at point k of the unknown's object
    Rational coeff(const Unknown& x, std::size_t k, long u) const {
        if (x.constant) return u == 0 ? Rational(1) : Rational(0);
        long e = x.e;
        if (x.point == k) return u == e ? Rational(1) : Rational(0);
        const Point& from = pts_[x.point];
        const Point& to = pts_[k];
        if (!from.inf && !to.inf) {
            if (u < 0) return 0;
            return choose(e, u) * power(Rational(to.a - from.a), e - u);
        }
        if (!from.inf && to.inf) {
            long m = diff_ ? u + e + 2 : u + e;
            if (m < 0) return 0;
            Rational v = choose(e, m) * power(Rational(-from.a), m);
            return diff_ ? Rational(-v) : v;
        }
        // from infinity to a finite point: a polynomial in t
        long d = diff_ ? -e - 2 : -e;
        if (u < 0 || u > d) return 0;
        Rational v = choose(d, u) * power(to.a, d - u);
        return diff_ ? Rational(-v) : v;
    }

    Rational residue_at_infinity(const Unknown& x) const {
        if (x.constant || pts_[x.point].inf) return 0;
        return x.e == -1 ? Rational(-1) : Rational(0);
    }

    RationalFn object(const Unknown& x) const {
        RationalFn f;
        if (x.constant) {
            f.add_entire(0, 1);
        } else if (!pts_[x.point].inf) {
            f.add_pole(pts_[x.point].a, -x.e, 1);
        } else if (diff_) {
            f.add_entire(-x.e - 2, -1);
        } else {
            f.add_entire(-x.e, 1);
        }
        return f;
    }

    // The Laurent polynomial data at point i as a global object.
    RationalFn as_global(std::size_t i, const LaurentChunk& d) const {
        RationalFn f;
        const Point& x = pts_[i];
        for (auto& [e, v] : d.coeffs()) {
            if (x.inf) {
                long m = diff_ ? -e - 2 : -e;
                Rational c = diff_ ? Rational(-v) : v;
                if (m >= 0)
                    f.add_entire(m, c);
                else
                    f.add_pole(0, -m, c);
            } else if (e < 0) {
                f.add_pole(x.a, -e, v);
            } else {
                for (long m = 0; m <= e; ++m) f.add_entire(m, v * choose(e, m) * power(Rational(-x.a), e - m));
            }
        }
        return f;
    }

    OracleReport run(long depth) const {
        OracleReport rep;
        rep.semantics = pb_.semantics;
        std::vector<Unknown> xs;
        if (!diff_) xs.push_back({true, 0, 0});
        std::vector<long> lo(pts_.size());
        bool has_inf = false;
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            if (pts_[i].inf) has_inf = true;
            const BoundaryDatum& b = pb_.ends[i];
            lo[i] = b.top + 1;
            if (auto mn = b.data.min_exp()) lo[i] = std::min(lo[i], *mn);
            for (long e = lo[i]; e <= pure_top(i); ++e) xs.push_back({false, i, e});
        }
        long extra = pb_.semantics == Semantics::Exact ? std::max(depth, 0L) : 0;
        std::vector<Equation> eqs;
        for (std::size_t k = 0; k < pts_.size(); ++k)
            // objects attached elsewhere start at pure_top + 1 at k; zeros below the data are prescribed
            for (long u = std::min(lo[k], pure_top(k) + 1); u <= pb_.ends[k].top + extra; ++u) eqs.push_back({false, k, u});
        if (diff_ && !has_inf) eqs.push_back({true, 0, -1});

        Matrix A(eqs.size(), Vec(xs.size(), Rational(0)));
        Vec b(eqs.size(), Rational(0));
        for (std::size_t r = 0; r < eqs.size(); ++r) {
            const Equation& q = eqs[r];
            for (std::size_t c = 0; c < xs.size(); ++c)
                A[r][c] = q.inf_residue ? residue_at_infinity(xs[c]) : coeff(xs[c], q.point, q.u);
            if (!q.inf_residue && q.u <= pb_.ends[q.point].top) {
                const LaurentChunk& d = pb_.ends[q.point].data;
                auto it = d.coeffs().find(q.u);
                if (it != d.coeffs().end()) b[r] = it->second;
            }
        }
        rep.unknowns = xs.size();
        rep.equations = eqs.size();
        LinearOutcome lo_ = solve_system_bareiss(A, b, xs.size());
        if (!lo_.consistent) {
            rep.verdict = Verdict::Unsolvable;
            rep.reason = "inconsistent rows";
            for (std::size_t r = 0; r < eqs.size(); ++r)
                if (lo_.witness[r] != 0)
                    rep.witness.push_back({eqs[r].inf_residue ? std::numeric_limits<std::size_t>::max() : eqs[r].point,
                                           eqs[r].u, lo_.witness[r]});
            return rep;
        }
        RationalFn f;
        for (std::size_t c = 0; c < xs.size(); ++c)
            if (lo_.solution[c] != 0) f += object(xs[c]).scaled(lo_.solution[c]);
        if (pb_.semantics == Semantics::Exact) {
            for (std::size_t i = 0; i < pts_.size(); ++i) {
                if (pb_.ends[i].data.tail()) {
                    rep.verdict = Verdict::Inconclusive;
                    rep.reason = "exact restriction cannot be checked against a tail";
                    return rep;
                }
                if (!(as_global(i, pb_.ends[i].data) == f)) {
                    rep.verdict = Verdict::Unsolvable;
                    rep.reason = "datum at end " + std::to_string(i) + " is not the restriction of a global object";
                    return rep;
                }
            }
        }
        rep.verdict = Verdict::Solvable;
        rep.solution = f;
        return rep;
    }

private:
    const MLProblem& pb_;
    std::vector<Point> pts_;
    bool diff_;
};

} // namespace

OracleReport oracle_solve(const MLProblem& pb, long depth) {
    pb.validate();
    return Oracle(pb).run(depth);
}

} // namespace wideopen
