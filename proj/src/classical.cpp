#include <stdexcept>

#include "wideopen/classical.hpp"

namespace wideopen {

long degree(const Divisor& d) {
    long s = 0;
    for (auto& [p, m] : d) s += m;
    return s;
}

namespace {

// Coefficient rows forcing ord_x(obj) >= -D(x) at points where candidates
// could violate it.  Candidates are evaluated through local expansions.
void add_order_rows(Matrix& rows, const std::vector<RationalFn>& cands, const Point& x, Window w, Mode mode) {
    if (w.lo > w.hi) return;
    std::vector<LaurentChunk> ex;
    for (auto& c : cands)
        ex.push_back(mode == Mode::Functions ? local_expansion(c, x, w) : local_expansion(RationalDiff{c}, x, w));
    for (long e = w.lo; e <= w.hi; ++e) {
        Vec r;
        for (auto& x_ : ex) r.push_back(x_.coeff(e));
        rows.push_back(std::move(r));
    }
}

std::vector<RationalFn> canonical_span(const std::vector<RationalFn>& cands, const Matrix& rows) {
    std::size_t n = cands.size();
    auto ns = nullspace(rows, n);
    Rref e = rref(ns, n);
    std::vector<RationalFn> out;
    for (auto& v : e.rows) {
        RationalFn f;
        for (std::size_t k = 0; k < n; ++k)
            if (v[k] != 0) f += cands[k].scaled(v[k]);
        out.push_back(f);
    }
    return out;
}

} // namespace

std::vector<RationalDiff> l1_basis(const Divisor& d) {
    std::vector<RationalFn> cands;
    for (auto& [x, m] : d) {
        if (!x.inf)
            for (long k = m; k >= 1; --k) cands.push_back(RationalFn::monomial(x, -k));
        else
            for (long e = m - 2; e >= 0; --e) cands.push_back(RationalFn::monomial(x, -e)); // t^e dt
    }
    Matrix rows;
    bool inf_seen = false;
    for (auto& [x, m] : d) {
        if (x.inf) inf_seen = true;
        if (m >= 0 && !(x.inf && m == 0)) continue;
        // need ord >= -m, i.e. coefficients at exponents < -m vanish
        add_order_rows(rows, cands, x, Window{x.inf ? -1 : 0, -m - 1}, Mode::Differentials);
    }
    if (!inf_seen) add_order_rows(rows, cands, Point::infinity(), Window{-1, -1}, Mode::Differentials);
    std::vector<RationalDiff> out;
    if (cands.empty()) return out;
    for (auto& f : canonical_span(cands, rows)) out.push_back(RationalDiff{f});
    return out;
}

std::vector<RationalFn> ld_basis(const Divisor& d) {
    std::vector<RationalFn> cands{RationalFn::constant(1)};
    for (auto& [x, m] : d)
        for (long k = 1; k <= m; ++k) cands.push_back(RationalFn::monomial(x, -k));
    Matrix rows;
    for (auto& [x, m] : d)
        if (m < 0) add_order_rows(rows, cands, x, Window{0, -m - 1}, Mode::Functions);
    return canonical_span(cands, rows);
}

Rational pairing(const std::vector<Point>& points, const std::vector<LaurentChunk>& data, Mode mode,
                 const RationalFn& dual) {
    Rational s = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& c = data.at(i).coeffs();
        if (c.empty()) continue;
        Window w{-c.rbegin()->first - 1, -c.begin()->first - 1};
        LaurentChunk a = mode == Mode::Functions ? local_expansion(RationalDiff{dual}, points[i], w)
                                                 : local_expansion(dual, points[i], w);
        for (auto& [e, v] : c) s += v * a.coeff(-e - 1);
    }
    return s;
}

Divisor jet_divisor(const std::vector<Point>& points, const std::vector<long>& tops) {
    Divisor d;
    for (std::size_t i = 0; i < points.size(); ++i) d[points[i]] = tops[i] + 1;
    return d;
}

JetSystem::JetSystem(std::vector<Point> points, std::vector<long> tops, Mode mode)
    : points_(std::move(points)), tops_(std::move(tops)), mode_(mode) {
    if (mode_ == Mode::Functions) vars_.push_back({true, 0, 0});
    bool has_inf = false;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].inf) has_inf = true;
        for (long e = tops_[i] + 1; e <= pure_max(i); ++e) vars_.push_back({false, i, e});
    }
    for (std::size_t k = 0; k < points_.size(); ++k)
        for (long u = pure_max(k) + 1; u <= tops_[k]; ++u) rows_.push_back({false, k, u});
    if (mode_ == Mode::Differentials && !has_inf) rows_.push_back({true, 0, -1});

    std::vector<RationalFn> vobj;
    for (auto& v : vars_) vobj.push_back(v.constant ? RationalFn::constant(1) : monomial(v.point, v.e));
    A_.assign(rows_.size(), Vec(vars_.size(), Rational(0)));
    for (std::size_t c = 0; c < vars_.size(); ++c)
        for (std::size_t r = 0; r < rows_.size(); ++r) A_[r][c] = row_coeff(rows_[r], vobj[c]);

    Matrix kept;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        kept.push_back(A_[r]);
        if (rank(kept, vars_.size()) == kept.size())
            pivot_rows_.push_back(r);
        else
            kept.pop_back();
    }
    std::size_t rk = pivot_rows_.size();
    if (rk == 0) return;
    Rref e = rref(kept, vars_.size());
    const auto& cols = e.pivots;
    // [M | I] -> [I | M^{-1}]
    Matrix aug(rk, Vec(2 * rk, Rational(0)));
    for (std::size_t i = 0; i < rk; ++i) {
        for (std::size_t j = 0; j < rk; ++j) aug[i][j] = kept[i][cols[j]];
        aug[i][rk + i] = 1;
    }
    Rref inv = rref(aug, 2 * rk);
    for (std::size_t p = 0; p < rk; ++p) {
        RationalFn w;
        for (std::size_t q = 0; q < rk; ++q) {
            const Rational& coef = inv.rows[q][rk + p];
            if (coef != 0) w += vobj[cols[q]].scaled(coef);
        }
        pivot_solutions_.push_back(w);
    }
    response_.assign(rows_.size(), Vec(rk, Rational(0)));
    for (std::size_t r = 0; r < rows_.size(); ++r)
        for (std::size_t p = 0; p < rk; ++p) response_[r][p] = row_coeff(rows_[r], pivot_solutions_[p]);
}

long JetSystem::pure_max(std::size_t i) const { return (mode_ == Mode::Differentials && points_[i].inf) ? -2 : -1; }

RationalFn JetSystem::monomial(std::size_t i, long e) const {
    const Point& x = points_[i];
    if (mode_ == Mode::Differentials && x.inf) return RationalFn::monomial(x, e + 2).scaled(-1);
    return RationalFn::monomial(x, e);
}

Rational JetSystem::row_coeff(const Row& r, const RationalFn& obj) const {
    if (r.infinity_residue) return local_expansion(RationalDiff{obj}, Point::infinity(), Window{-1, -1}).coeff(-1);
    const Point& x = points_[r.point];
    Window w{r.u, r.u};
    return (mode_ == Mode::Functions ? local_expansion(obj, x, w) : local_expansion(RationalDiff{obj}, x, w)).coeff(r.u);
}

JetSolveResult JetSystem::solve(const std::vector<LaurentChunk>& data) const {
    if (data.size() != points_.size()) throw Error(ErrorCode::SchemaError, "one datum per point required");
    RationalFn pp;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (data[i].tail()) throw Error(ErrorCode::SchemaError, "classical data must be finite");
        auto mx = data[i].max_exp();
        if (mx && *mx > tops_[i]) throw Error(ErrorCode::SchemaError, "datum above its top exponent");
        for (auto& [e, v] : data[i].coeffs())
            if (e <= pure_max(i)) pp += monomial(i, e).scaled(v);
    }
    // residuals per row, via one expansion per point
    std::vector<LaurentChunk> ex(points_.size());
    for (std::size_t k = 0; k < points_.size(); ++k) {
        Window w{pure_max(k) + 1, tops_[k]};
        if (w.lo <= w.hi) ex[k] = mode_ == Mode::Functions ? local_expansion(pp, points_[k], w)
                                                          : local_expansion(RationalDiff{pp}, points_[k], w);
    }
    auto target = [&](const Row& r) { return r.infinity_residue ? Rational(0) : data[r.point].coeff(r.u); };
    auto current = [&](const Row& r) { return r.infinity_residue ? row_coeff(r, pp) : ex[r.point].coeff(r.u); };
    Vec resid(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) resid[r] = target(rows_[r]) - current(rows_[r]);

    JetSolveResult out;
    RationalFn f = pp;
    for (std::size_t p = 0; p < pivot_rows_.size(); ++p) {
        const Rational& rv = resid[pivot_rows_[p]];
        if (rv != 0) f += pivot_solutions_[p].scaled(rv);
    }
    // consistency on all rows: A * (solution coordinates) == resid
    out.solvable = true;
    for (std::size_t r = 0; r < rows_.size() && out.solvable; ++r) {
        Rational got = 0;
        for (std::size_t p = 0; p < pivot_rows_.size(); ++p) {
            const Rational& rv = resid[pivot_rows_[p]];
            if (rv != 0) got += rv * response_[r][p];
        }
        if (got != resid[r]) out.solvable = false;
    }
    if (out.solvable) out.solution = f;
    return out;
}

bool JetSystem::verify(const RationalFn& obj, const std::vector<LaurentChunk>& data) const {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        LocalForm lf = split_at(obj, points_[i]);
        long lo = tops_[i];
        if (!lf.principal.empty()) lo = std::min(lo, lf.principal.begin()->first);
        if (mode_ == Mode::Differentials && points_[i].inf) lo -= 2;
        if (auto mn = data[i].min_exp()) lo = std::min(lo, *mn);
        Window w{lo, tops_[i]};
        LaurentChunk ex = mode_ == Mode::Functions ? local_expansion(obj, points_[i], w)
                                                   : local_expansion(RationalDiff{obj}, points_[i], w);
        if (!(ex == data[i].restrict_to(w))) return false;
    }
    return true;
}

namespace {

JetSolveResult finish(const JetSystem& sys, const std::vector<LaurentChunk>& data, const std::vector<RationalFn>& basis) {
    JetSolveResult r = sys.solve(data);
    if (r.solvable) {
        if (!sys.verify(r.solution, data)) throw std::logic_error("jet solution failed re-expansion");
        return r;
    }
    for (std::size_t j = 0; j < basis.size(); ++j) {
        Rational v = pairing(sys.points(), data, sys.mode(), basis[j]);
        if (v != 0) {
            r.certificate = JetCertificate{j, basis[j], v};
            return r;
        }
    }
    throw std::logic_error("unsolvable jet problem without a dual certificate");
}

} // namespace

JetSolveResult classical_jet_solve_functions(const std::vector<Point>& points, const std::vector<long>& tops,
                                             const std::vector<LaurentChunk>& data) {
    JetSystem sys(points, tops, Mode::Functions);
    std::vector<RationalFn> basis;
    for (auto& w : l1_basis(jet_divisor(points, tops))) basis.push_back(w.fn);
    return finish(sys, data, basis);
}

JetSolveResult classical_jet_solve_differentials(const std::vector<Point>& points, const std::vector<long>& tops,
                                                 const std::vector<LaurentChunk>& data, DiffMode mode) {
    if (mode == DiffMode::Principal)
        for (long j : tops)
            if (j >= 0) throw Error(ErrorCode::ModeViolation, "principal mode needs every top exponent <= -1");
    JetSystem sys(points, tops, Mode::Differentials);
    return finish(sys, data, ld_basis(jet_divisor(points, tops)));
}

MLDecomposition ml_decomposition(const LaurentChunk& f) {
    LaurentChunk::Map plus, minus;
    for (auto& [e, v] : f.coeffs()) (e >= 0 ? plus : minus)[e] = v;
    std::optional<TailBound> tp, tm;
    if (f.tail()) {
        const TailBound& t = *f.tail();
        if (t.side == TailSide::Lower) {
            if (t.edge > 0) throw Error(ErrorCode::WindowNotCertifiable, "tail reaches nonnegative exponents");
            tm = t;
        } else {
            if (t.edge < -1) throw Error(ErrorCode::WindowNotCertifiable, "tail reaches negative exponents");
            tp = t;
        }
    }
    return {LaurentChunk(std::move(plus), tp), LaurentChunk(std::move(minus), tm)};
}

RungeResult runge_approximate(const RationalFn& f, const AffinoidSlice& X, const std::vector<Point>& allowed,
                              const Rational& eps) {
    const WideOpenDomain& W = X.domain;
    const PContext& ctx = W.ctx();
    if (allowed.size() != W.num_ends()) throw Error(ErrorCode::SchemaError, "one allowed pole per removed disc");
    std::optional<std::size_t> inf_end;
    for (std::size_t i = 0; i < W.num_ends(); ++i) {
        const Point& c = W.disc(i).center;
        if (c.inf) {
            inf_end = i;
            if (!allowed[i].inf) throw Error(ErrorCode::SchemaError, "allowed pole in the disc at infinity must be inf");
        } else if (allowed[i].inf || !(norm_exp(ctx, allowed[i].a - c.a) < NormExp(X.trims[i]))) {
            throw Error(ErrorCode::SchemaError, "allowed pole " + allowed[i].str() + " outside its disc");
        }
    }
    RungeResult out;
    out.certified_error = NormExp::bottom();
    RationalFn g;
    for (auto& [m, v] : f.entire()) g.add_entire(m, v);
    if (!f.entire().empty() && f.entire().rbegin()->first >= 1 && !inf_end)
        throw Error(ErrorCode::PoleInsideAffinoid, "pole at infinity");

    auto steps_needed = [&](const Rational& start, const Rational& slope) -> long {
        // smallest M >= 0 with start + slope*M <= eps, slope < 0
        if (start <= eps) return 0;
        return ceil_long(Rational((eps - start) / slope));
    };

    for (auto& [b, part] : f.poles()) {
        std::optional<std::size_t> end;
        for (std::size_t i = 0; i < W.num_ends() && !end; ++i) {
            const Point& c = W.disc(i).center;
            if (c.inf ? NormExp(Rational(-X.trims[i])) < norm_exp(ctx, b)
                      : norm_exp(ctx, b - c.a) < NormExp(X.trims[i]))
                end = i;
        }
        if (!end) throw Error(ErrorCode::PoleInsideAffinoid, "pole at " + to_string(b));
        const Rational& trim = X.trims[*end];
        const Point& c = allowed[*end];
        if (!c.inf) {
            Rational d = b - c.a;
            if (d == 0) {
                for (auto& [k, v] : part) g.add_pole(b, k, v);
                continue;
            }
            Rational nd = norm_exp(ctx, d).value();
            for (auto& [k, v] : part) {
                // (t_c - d)^{-k} = sum_m C(-k,m)(-d)^m t_c^{-k-m}; term m bound ne(v) + m*nd - trim*(k+m)
                Rational start = norm_exp(ctx, v).value() - trim * k;
                long M = steps_needed(start, Rational(nd - trim));
                Rational pw = 1;
                for (long mm = 0; mm < M; ++mm) {
                    g.add_pole(c.a, k + mm, v * binomial(-k, mm) * pw);
                    pw *= -d;
                }
                out.certified_error = max(out.certified_error, NormExp(Rational(start + (nd - trim) * M)));
            }
        } else {
            Rational nb = norm_exp(ctx, b).value();
            for (auto& [k, v] : part) {
                // (t - b)^{-k} = (-b)^{-k} sum_m C(-k,m) (-1/b)^m t^m; term m bound ne(v) - (k+m) nb - m*trim
                Rational start = norm_exp(ctx, v).value() - nb * k;
                Rational slope = -nb - trim;
                long M = steps_needed(start, slope);
                Rational base = 1;
                for (long i = 0; i < k; ++i) base /= -b;
                Rational pw = 1;
                for (long mm = 0; mm < M; ++mm) {
                    g.add_entire(mm, v * base * binomial(-k, mm) * pw);
                    pw *= -1 / b;
                }
                out.certified_error = max(out.certified_error, NormExp(Rational(start + slope * M)));
            }
        }
    }
    out.approximant = g;
    if (!(spectral_norm_exp(X, f - g) <= out.certified_error)) throw std::logic_error("runge bound violated");
    return out;
}

} // namespace wideopen
