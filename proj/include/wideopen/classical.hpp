#pragma once

#include <map>
#include <string>
#include <vector>

#include "wideopen/geometry.hpp"
#include "wideopen/linalg.hpp"

namespace wideopen {

// Dense polynomial, index = degree.
using Poly = std::vector<Rational>;

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_pow(const Poly& a, long k);
Poly poly_taylor_shift(const Poly& a, const Rational& c); // a(x + c)
NormExp poly_gauss(const PContext& ctx, const Poly& a, const Rational& q);
// Taylor coefficients 0..K of num/den, den(0) != 0.
Vec series_divide(const Poly& num, const Poly& den, long K);

// Generalized binomial coefficient C(n, k) for integer n, k >= 0.
Rational binomial(long n, long k);

// Partial-fraction normal form: entire(t) + sum_a sum_k poles[a][k] (t-a)^{-k}.
// The pole at infinity is carried by the entire part.
class RationalFn {
public:
    using Map = std::map<long, Rational>;

    RationalFn() = default;
    static RationalFn constant(const Rational& c);
    // (t - a)^e at a finite point, t^{-e} at infinity (the local coordinate to the e).
    static RationalFn monomial(const Point& c, long e);

    const Map& entire() const { return entire_; }
    const std::map<Rational, Map>& poles() const { return poles_; }

    void add_entire(long m, const Rational& c);
    void add_pole(const Rational& a, long k, const Rational& c);

    RationalFn& operator+=(const RationalFn& o);
    RationalFn& operator-=(const RationalFn& o);
    friend RationalFn operator+(RationalFn a, const RationalFn& b) { return a += b; }
    friend RationalFn operator-(RationalFn a, const RationalFn& b) { return a -= b; }
    RationalFn scaled(const Rational& c) const;
    bool operator==(const RationalFn& o) const { return entire_ == o.entire_ && poles_ == o.poles_; }
    bool is_zero() const { return entire_.empty() && poles_.empty(); }

    std::vector<Point> pole_points() const;
    std::string str() const;

private:
    Map entire_;
    std::map<Rational, Map> poles_;
};

// fn * dt
struct RationalDiff {
    RationalFn fn;
    bool operator==(const RationalDiff& o) const { return fn == o.fn; }
    std::string str() const { return "(" + fn.str() + ") dt"; }
};

enum class Mode { Functions, Differentials };

// Principal part plus regular part num/den in the local coordinate at a point.
struct LocalForm {
    RationalFn::Map principal;
    Poly num;
    Poly den;
};

LocalForm split_at(const RationalFn& f, const Point& c);

// Exact coefficients on the window in the local coordinate at c; for
// differentials the Jacobian of dt -> dt_c is applied (dt = -t_c^{-2} dt_c at infinity).
LaurentChunk local_expansion(const RationalFn& f, const Point& c, Window w);
LaurentChunk local_expansion(const RationalDiff& w, const Point& c, Window win);

// Gauss norm exponent at radius q in the coordinate at c (point expansion).
NormExp local_gauss(const PContext& ctx, const RationalFn& f, const Point& c, const Rational& q);
NormExp local_gauss(const PContext& ctx, const RationalDiff& w, const Point& c, const Rational& q);

NormExp spectral_norm_exp(const AffinoidSlice& X, const RationalFn& f);
NormExp spectral_norm_exp(const AffinoidSlice& X, const RationalDiff& w);
NormExp spectral_norm_exp(const AffinoidSlice& X, const RationalFn& f, Mode mode);

// Expansion on the annulus p^q1 < |t_c| < p^q2: poles inside the inner disc
// expand in negative powers, the others in positive powers.
LaurentChunk annulus_expansion(const PContext& ctx, const RationalFn& f, const Point& c, const Rational& q1,
                               const Rational& q2, Window w);
LaurentChunk annulus_expansion(const PContext& ctx, const RationalDiff& f, const Point& c, const Rational& q1,
                               const Rational& q2, Window w);

using Divisor = std::map<Point, long>;
long degree(const Divisor& d);

std::vector<RationalDiff> l1_basis(const Divisor& d);
std::vector<RationalFn> ld_basis(const Divisor& d);

// Sum over points of Res(data_i * dual) in the local coordinates; dual is a
// differential for function data and a function for differential data.
Rational pairing(const std::vector<Point>& points, const std::vector<LaurentChunk>& data, Mode mode,
                 const RationalFn& dual);

enum class DiffMode { Principal, Generalized };

struct JetCertificate {
    std::size_t index = 0;   // position in the basis
    RationalFn element;      // dual element (times dt for function data)
    Rational value;          // nonzero pairing
};

struct JetSolveResult {
    bool solvable = false;
    RationalFn solution;     // times dt in differentials mode
    std::optional<JetCertificate> certificate;
};

// Linear system behind the classical jet problem: prescribed principal parts
// plus a finite free space; canonical solution sets free variables to zero.
class JetSystem {
public:
    struct Var {
        bool constant;
        std::size_t point;
        long e;
    };
    struct Row {
        bool infinity_residue; // differentials with infinity not declared
        std::size_t point;
        long u;
    };

    JetSystem(std::vector<Point> points, std::vector<long> tops, Mode mode);

    const std::vector<Point>& points() const { return points_; }
    const std::vector<long>& tops() const { return tops_; }
    Mode mode() const { return mode_; }
    long pure_max(std::size_t i) const;
    const std::vector<Var>& vars() const { return vars_; }
    const std::vector<Row>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivot_rows() const { return pivot_rows_; }
    // w_p: canonical solution for a unit residual at pivot row p.
    const std::vector<RationalFn>& pivot_solutions() const { return pivot_solutions_; }

    // Global object whose local expansion at point i is t_i^e (times dt_i).
    RationalFn monomial(std::size_t i, long e) const;
    Rational row_coeff(const Row& r, const RationalFn& obj) const;

    JetSolveResult solve(const std::vector<LaurentChunk>& data) const;
    // Does obj reproduce the data on every prescribed exponent >= lo?
    bool verify(const RationalFn& obj, const std::vector<LaurentChunk>& data) const;

private:
    std::vector<Point> points_;
    std::vector<long> tops_;
    Mode mode_;
    std::vector<Var> vars_;
    std::vector<Row> rows_;
    std::vector<std::size_t> pivot_rows_;
    std::vector<RationalFn> pivot_solutions_;
    Matrix A_;
    Matrix response_; // row coefficients of each w_p
};

Divisor jet_divisor(const std::vector<Point>& points, const std::vector<long>& tops);

JetSolveResult classical_jet_solve_functions(const std::vector<Point>& points, const std::vector<long>& tops,
                                             const std::vector<LaurentChunk>& data);
JetSolveResult classical_jet_solve_differentials(const std::vector<Point>& points, const std::vector<long>& tops,
                                                 const std::vector<LaurentChunk>& data, DiffMode mode);

struct MLDecomposition {
    LaurentChunk plus;
    LaurentChunk minus;
};

MLDecomposition ml_decomposition(const LaurentChunk& f);

struct RungeResult {
    RationalFn approximant;
    NormExp certified_error; // a priori truncation bound
};

RungeResult runge_approximate(const RationalFn& f, const AffinoidSlice& X, const std::vector<Point>& allowed_poles,
                              const Rational& eps_exp);

} // namespace wideopen
