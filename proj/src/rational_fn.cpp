#include <sstream>

#include "wideopen/classical.hpp"

namespace wideopen {

static void trim_poly(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim_poly(r);
    return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim_poly(r);
    return r;
}

Poly poly_pow(const Poly& a, long k) {
    Poly r{Rational(1)};
    for (long i = 0; i < k; ++i) r = poly_mul(r, a);
    return r;
}

Poly poly_taylor_shift(const Poly& a, const Rational& c) {
    // Horner in x + c
    Poly r;
    Poly lin{c, Rational(1)};
    for (std::size_t i = a.size(); i-- > 0;) r = poly_add(poly_mul(r, lin), Poly{a[i]});
    trim_poly(r);
    return r;
}

NormExp poly_gauss(const PContext& ctx, const Poly& a, const Rational& q) {
    NormExp r = NormExp::bottom();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0) r = max(r, norm_exp(ctx, a[i]) + NormExp(Rational(q * static_cast<long>(i))));
    return r;
}

Vec series_divide(const Poly& num, const Poly& den, long K) {
    Vec c(K + 1 > 0 ? K + 1 : 0, Rational(0));
    for (long k = 0; k <= K; ++k) {
        Rational s = k < static_cast<long>(num.size()) ? num[k] : Rational(0);
        for (long i = 1; i <= k && i < static_cast<long>(den.size()); ++i) s -= den[i] * c[k - i];
        c[k] = s / den[0];
    }
    return c;
}

Rational binomial(long n, long k) {
    if (k < 0) return 0;
    Rational r = 1;
    for (long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

RationalFn RationalFn::constant(const Rational& c) {
    RationalFn f;
    f.add_entire(0, c);
    return f;
}

RationalFn RationalFn::monomial(const Point& c, long e) {
    RationalFn f;
    if (c.inf) {
        if (e <= 0)
            f.add_entire(-e, 1);
        else
            f.add_pole(0, e, 1);
    } else if (e < 0) {
        f.add_pole(c.a, -e, 1);
    } else {
        Rational pw = 1;
        for (long m = e; m >= 0; --m) {
            f.add_entire(m, binomial(e, m) * pw);
            pw *= -c.a;
        }
    }
    return f;
}

void RationalFn::add_entire(long m, const Rational& c) {
    if (c == 0) return;
    Rational& v = entire_[m];
    v += c;
    if (v == 0) entire_.erase(m);
}

void RationalFn::add_pole(const Rational& a, long k, const Rational& c) {
    if (c == 0) return;
    auto& part = poles_[a];
    Rational& v = part[k];
    v += c;
    if (v == 0) part.erase(k);
    if (part.empty()) poles_.erase(a);
}

RationalFn& RationalFn::operator+=(const RationalFn& o) {
    for (auto& [m, c] : o.entire_) add_entire(m, c);
    for (auto& [a, part] : o.poles_)
        for (auto& [k, c] : part) add_pole(a, k, c);
    return *this;
}

RationalFn& RationalFn::operator-=(const RationalFn& o) { return *this += o.scaled(-1); }

RationalFn RationalFn::scaled(const Rational& c) const {
    RationalFn r;
    if (c == 0) return r;
    for (auto& [m, v] : entire_) r.add_entire(m, v * c);
    for (auto& [a, part] : poles_)
        for (auto& [k, v] : part) r.add_pole(a, k, v * c);
    return r;
}

std::vector<Point> RationalFn::pole_points() const {
    std::vector<Point> r;
    for (auto& [a, part] : poles_) r.push_back(Point::finite(a));
    if (!entire_.empty() && entire_.rbegin()->first >= 1) r.push_back(Point::infinity());
    return r;
}

std::string RationalFn::str() const {
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
        if (!first) os << " + ";
        first = false;
    };
    for (auto& [m, c] : entire_) {
        sep();
        os << to_string(c);
        if (m > 0) os << "*t^" << m;
    }
    for (auto& [a, part] : poles_)
        for (auto& [k, c] : part) {
            sep();
            os << to_string(c) << "*(t";
            if (a != 0) os << (a > 0 ? "-" : "+") << to_string(abs(a));
            os << ")^-" << k;
        }
    if (first) os << "0";
    return os.str();
}

LocalForm split_at(const RationalFn& f, const Point& c) {
    LocalForm out;
    Poly regular_entire;
    struct Other {
        Poly lin;
        long order;
        const RationalFn::Map* part;
    };
    std::vector<Other> others;
    if (!c.inf) {
        auto it = f.poles().find(c.a);
        if (it != f.poles().end())
            for (auto& [k, v] : it->second) out.principal[-k] = v;
        Poly e;
        for (auto& [m, v] : f.entire()) {
            if (static_cast<long>(e.size()) <= m) e.resize(m + 1, Rational(0));
            e[m] = v;
        }
        regular_entire = poly_taylor_shift(e, c.a);
        for (auto& [b, part] : f.poles()) {
            if (b == c.a) continue;
            others.push_back({Poly{Rational(c.a - b), Rational(1)}, part.rbegin()->first, &part});
        }
    } else {
        for (auto& [m, v] : f.entire()) {
            if (m >= 1)
                out.principal[-m] = v;
            else
                regular_entire = Poly{v};
        }
        for (auto& [b, part] : f.poles()) others.push_back({Poly{Rational(1), Rational(-b)}, part.rbegin()->first, &part});
    }
    std::vector<Poly> powers;
    Poly den{Rational(1)};
    for (auto& o : others) {
        powers.push_back(poly_pow(o.lin, o.order));
        den = poly_mul(den, powers.back());
    }
    Poly num = poly_mul(regular_entire, den);
    for (std::size_t i = 0; i < others.size(); ++i) {
        Poly rest{Rational(1)};
        for (std::size_t j = 0; j < others.size(); ++j)
            if (j != i) rest = poly_mul(rest, powers[j]);
        for (auto& [k, v] : *others[i].part) {
            Poly term = poly_mul(rest, poly_pow(others[i].lin, others[i].order - k));
            if (c.inf) {
                Poly xk(k + 1, Rational(0));
                xk[k] = 1;
                term = poly_mul(term, xk);
            }
            for (auto& x : term) x *= v;
            num = poly_add(num, term);
        }
    }
    out.num = std::move(num);
    out.den = std::move(den);
    return out;
}

LaurentChunk local_expansion(const RationalFn& f, const Point& c, Window w) {
    LocalForm lf = split_at(f, c);
    LaurentChunk::Map m;
    for (auto& [e, v] : lf.principal)
        if (e >= w.lo && e <= w.hi) m[e] = v;
    if (w.hi >= 0) {
        Vec s = series_divide(lf.num, lf.den, w.hi);
        for (long k = std::max(0L, w.lo); k <= w.hi; ++k) m[k] = s[k];
    }
    return LaurentChunk(std::move(m));
}

LaurentChunk local_expansion(const RationalDiff& w, const Point& c, Window win) {
    if (!c.inf) return local_expansion(w.fn, c, win);
    return local_expansion(w.fn, c, Window{win.lo + 2, win.hi + 2}).shifted(-2).scaled(-1);
}

NormExp local_gauss(const PContext& ctx, const RationalFn& f, const Point& c, const Rational& q) {
    LocalForm lf = split_at(f, c);
    long k = lf.principal.empty() ? 0 : -lf.principal.begin()->first;
    Poly p(k + 1, Rational(0));
    for (auto& [e, v] : lf.principal) p[e + k] = v;
    Poly xk(k + 1, Rational(0));
    xk[k] = 1;
    Poly num = poly_add(poly_mul(p, lf.den), poly_mul(xk, lf.num));
    Poly den = poly_mul(xk, lf.den);
    NormExp n = poly_gauss(ctx, num, q);
    if (n.is_bottom()) return n;
    return n - poly_gauss(ctx, den, q).value();
}

NormExp local_gauss(const PContext& ctx, const RationalDiff& w, const Point& c, const Rational& q) {
    NormExp g = local_gauss(ctx, w.fn, c, q);
    if (c.inf) g = g + NormExp(Rational(-2 * q));
    return g;
}

NormExp spectral_norm_exp(const AffinoidSlice& X, const RationalFn& f) {
    NormExp r = NormExp::bottom();
    for (std::size_t i = 0; i < X.trims.size(); ++i)
        r = max(r, local_gauss(X.domain.ctx(), f, X.domain.disc(i).center, X.trims[i]));
    return r;
}

NormExp spectral_norm_exp(const AffinoidSlice& X, const RationalDiff& w) {
    NormExp r = NormExp::bottom();
    for (std::size_t i = 0; i < X.trims.size(); ++i)
        r = max(r, local_gauss(X.domain.ctx(), w, X.domain.disc(i).center, X.trims[i]));
    return r;
}

NormExp spectral_norm_exp(const AffinoidSlice& X, const RationalFn& f, Mode mode) {
    return mode == Mode::Functions ? spectral_norm_exp(X, f) : spectral_norm_exp(X, RationalDiff{f});
}

LaurentChunk annulus_expansion(const PContext& ctx, const RationalFn& f, const Point& c, const Rational& q1,
                               const Rational& q2, Window w) {
    LaurentChunk::Map m;
    auto put = [&](long e, const Rational& v) {
        if (e >= w.lo && e <= w.hi) m[e] += v;
    };
    if (!c.inf) {
        Poly e;
        for (auto& [k, v] : f.entire()) {
            if (static_cast<long>(e.size()) <= k) e.resize(k + 1, Rational(0));
            e[k] = v;
        }
        Poly s = poly_taylor_shift(e, c.a);
        for (std::size_t k = 0; k < s.size(); ++k) put(static_cast<long>(k), s[k]);
    } else {
        for (auto& [k, v] : f.entire()) put(-k, v);
    }
    for (auto& [b, part] : f.poles()) {
        // pole at t_c = d in the local coordinate
        Rational d = c.inf ? Rational(0) : Rational(b - c.a);
        NormExp dist = c.inf ? norm_exp(ctx, b) : norm_exp(ctx, d);
        bool inside, outside;
        if (!c.inf) {
            inside = dist <= NormExp(q1);
            outside = NormExp(q2) <= dist;
        } else {
            inside = NormExp(Rational(-q1)) <= dist;
            outside = b == 0 || dist <= NormExp(Rational(-q2));
        }
        if (!inside && !outside)
            throw Error(ErrorCode::PoleOnAnnulus, "pole at " + to_string(b) + " lies on the annulus");
        for (auto& [k, v] : part) {
            if (!c.inf && inside) {
                // (t_c - d)^{-k} = sum_m C(-k,m) (-d)^m t_c^{-k-m}
                Rational pw = 1;
                for (long mm = 0; -k - mm >= w.lo; ++mm) {
                    put(-k - mm, v * binomial(-k, mm) * pw);
                    pw *= -d;
                    if (d == 0) break;
                }
            } else if (!c.inf) {
                // (-d)^{-k} sum_m C(-k,m) (-1/d)^m t_c^m
                Rational base = 1;
                for (long i = 0; i < k; ++i) base /= -d;
                Rational pw = 1;
                for (long mm = 0; mm <= w.hi; ++mm) {
                    put(mm, v * base * binomial(-k, mm) * pw);
                    pw *= -1 / d;
                }
            } else if (inside) {
                // (1/t_c - b)^{-k} = (-b)^{-k} sum_m C(-k,m) (-1/b)^m t_c^{-m}
                Rational base = 1;
                for (long i = 0; i < k; ++i) base /= -b;
                Rational pw = 1;
                for (long mm = 0; -mm >= w.lo; ++mm) {
                    put(-mm, v * base * binomial(-k, mm) * pw);
                    pw *= -1 / b;
                }
            } else {
                // t_c^k (1 - b t_c)^{-k}
                Rational pw = 1;
                for (long mm = 0; k + mm <= w.hi; ++mm) {
                    put(k + mm, v * binomial(-k, mm) * pw);
                    pw *= -b;
                    if (b == 0) break;
                }
            }
        }
    }
    return LaurentChunk(std::move(m));
}

LaurentChunk annulus_expansion(const PContext& ctx, const RationalDiff& f, const Point& c, const Rational& q1,
                               const Rational& q2, Window w) {
    if (!c.inf) return annulus_expansion(ctx, f.fn, c, q1, q2, w);
    return annulus_expansion(ctx, f.fn, c, q1, q2, Window{w.lo + 2, w.hi + 2}).shifted(-2).scaled(-1);
}

} // namespace wideopen
