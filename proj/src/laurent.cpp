#include "wideopen/laurent.hpp"

#include <sstream>
#include <vector>

namespace wideopen {

NormExp TailBound::at(const Rational& q) const {
    if (side == TailSide::Lower && q < q0)
        throw Error(ErrorCode::RadiusBelowTailCertificate,
                    "radius " + to_string(q) + " below certified " + to_string(q0));
    if (side == TailSide::Upper && q > q0)
        throw Error(ErrorCode::RadiusBelowTailCertificate,
                    "radius " + to_string(q) + " above certified " + to_string(q0));
    long j = side == TailSide::Lower ? edge - 1 : edge + 1;
    return bound + NormExp(Rational((q - q0) * j));
}

TailBound TailBound::restated(const Rational& q) const {
    TailBound t = *this;
    t.bound = at(q);
    t.q0 = q;
    return t;
}

bool TailBound::operator==(const TailBound& o) const {
    return side == o.side && edge == o.edge && q0 == o.q0 && bound == o.bound && p == o.p;
}

TailBound merge_tails(const TailBound& a, const TailBound& b) {
    if (a.side != b.side || a.p != b.p)
        throw Error(ErrorCode::IncompatibleTails, "tails on different sides or primes");
    TailBound r = a;
    if (a.side == TailSide::Lower) {
        r.q0 = a.q0 < b.q0 ? b.q0 : a.q0;
        r.edge = std::max(a.edge, b.edge);
    } else {
        r.q0 = a.q0 < b.q0 ? a.q0 : b.q0;
        r.edge = std::min(a.edge, b.edge);
    }
    r.bound = max(a.at(r.q0), b.at(r.q0));
    return r;
}

LaurentChunk::LaurentChunk(Map coeffs, std::optional<TailBound> tail)
    : coeffs_(std::move(coeffs)), tail_(std::move(tail)) {
    normalize();
}

LaurentChunk LaurentChunk::monomial(const Rational& c, long e) {
    Map m;
    m[e] = c;
    return LaurentChunk(std::move(m));
}

void LaurentChunk::normalize() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->second == 0) {
            it = coeffs_.erase(it);
        } else if (tail_ && tail_->covers(it->first)) {
            PContext ctx(tail_->p);
            tail_->bound = max(tail_->bound, norm_exp(ctx, it->second) + NormExp(Rational(tail_->q0 * it->first)));
            it = coeffs_.erase(it);
        } else {
            ++it;
        }
    }
}

Rational LaurentChunk::coeff(long e) const {
    if (tail_ && tail_->covers(e))
        throw Error(ErrorCode::WindowNotCertifiable, "exponent " + std::to_string(e) + " lies in the tail");
    auto it = coeffs_.find(e);
    return it == coeffs_.end() ? Rational(0) : it->second;
}

std::optional<long> LaurentChunk::min_exp() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.begin()->first;
}

std::optional<long> LaurentChunk::max_exp() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.rbegin()->first;
}

LaurentChunk LaurentChunk::restrict_to(Window w) const {
    Map m;
    for (auto it = coeffs_.lower_bound(w.lo); it != coeffs_.end() && it->first <= w.hi; ++it)
        m.insert(*it);
    return LaurentChunk(std::move(m));
}

LaurentChunk LaurentChunk::shifted(long k) const {
    Map m;
    for (auto& [e, c] : coeffs_) m[e + k] = c;
    auto t = tail_;
    if (t) {
        t->edge += k;
        t->bound = t->bound + NormExp(Rational(t->q0 * k));
    }
    return LaurentChunk(std::move(m), t);
}

LaurentChunk LaurentChunk::scaled(const Rational& c) const {
    Map m;
    if (c != 0)
        for (auto& [e, v] : coeffs_) m[e] = v * c;
    auto t = tail_;
    if (t) t->bound = t->bound + norm_exp(PContext(t->p), c);
    return LaurentChunk(std::move(m), t);
}

static std::optional<TailBound> sum_tails(const std::optional<TailBound>& a, const std::optional<TailBound>& b) {
    if (!a) return b;
    if (!b) return a;
    if (a->side != b->side || a->q0 != b->q0 || a->p != b->p)
        throw Error(ErrorCode::IncompatibleTails, "tail certificates disagree");
    TailBound r = *a;
    r.edge = a->side == TailSide::Lower ? std::max(a->edge, b->edge) : std::min(a->edge, b->edge);
    r.bound = max(a->bound, b->bound);
    return r;
}

LaurentChunk& LaurentChunk::operator+=(const LaurentChunk& o) {
    tail_ = sum_tails(tail_, o.tail_);
    for (auto& [e, c] : o.coeffs_) coeffs_[e] += c;
    normalize();
    return *this;
}

LaurentChunk& LaurentChunk::operator-=(const LaurentChunk& o) { return *this += o.scaled(-1); }

LaurentChunk operator*(const LaurentChunk& a, const LaurentChunk& b) {
    LaurentChunk::Map m;
    for (auto& [ea, ca] : a.coeffs_)
        for (auto& [eb, cb] : b.coeffs_) m[ea + eb] += ca * cb;

    std::optional<TailBound> t;
    if (a.tail_ || b.tail_) {
        const TailBound& ref = a.tail_ ? *a.tail_ : *b.tail_;
        if (a.tail_ && b.tail_ && (a.tail_->side != b.tail_->side || a.tail_->q0 != b.tail_->q0 || a.tail_->p != b.tail_->p))
            throw Error(ErrorCode::IncompatibleTails, "tail certificates disagree");
        PContext ctx(ref.p);
        bool lower = ref.side == TailSide::Lower;
        auto extreme = [&](const LaurentChunk& x) { return lower ? *x.max_exp() : *x.min_exp(); };
        auto step = lower ? -1 : 1;
        std::optional<long> edge;
        NormExp bound = NormExp::bottom();
        auto add_part = [&](long e, const NormExp& bd) {
            edge = !edge ? e : (lower ? std::max(*edge, e) : std::min(*edge, e));
            bound = max(bound, bd);
        };
        // explicit(a) * tail(b) lives beyond edge(b) + extreme(a), etc.
        if (b.tail_ && !a.coeffs_.empty())
            add_part(b.tail_->edge + extreme(a), gauss_norm_exp(ctx, a.coeffs_, ref.q0) + b.tail_->bound);
        if (a.tail_ && !b.coeffs_.empty())
            add_part(a.tail_->edge + extreme(b), gauss_norm_exp(ctx, b.coeffs_, ref.q0) + a.tail_->bound);
        if (a.tail_ && b.tail_) add_part(a.tail_->edge + b.tail_->edge + step, a.tail_->bound + b.tail_->bound);
        if (edge) t = TailBound{ref.side, *edge, ref.q0, bound, ref.p};
    }
    return LaurentChunk(std::move(m), t);
}

bool LaurentChunk::operator==(const LaurentChunk& o) const { return coeffs_ == o.coeffs_ && tail_ == o.tail_; }

std::string LaurentChunk::str() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << to_string(c) << "*t^" << e;
    }
    if (first) os << "0";
    if (tail_)
        os << " + O(" << (tail_->side == TailSide::Lower ? "<" : ">") << tail_->edge << " @" << to_string(tail_->q0)
           << ":" << tail_->bound.str() << ")";
    return os.str();
}

LaurentChunk derivative(const LaurentChunk& f) {
    LaurentChunk::Map m;
    for (auto& [e, c] : f.coeffs())
        if (e != 0) m[e - 1] = c * e;
    auto t = f.tail();
    if (t) {
        t->edge -= 1;
        t->bound = t->bound - t->q0;
    }
    return LaurentChunk(std::move(m), t);
}

NormExp gauss_norm_exp(const PContext& ctx, const LaurentChunk::Map& f, const Rational& q) {
    NormExp r = NormExp::bottom();
    for (auto& [e, c] : f) r = max(r, norm_exp(ctx, c) + NormExp(Rational(q * e)));
    return r;
}

NormExp gauss_norm_exp(const PContext& ctx, const LaurentChunk& f, const Rational& q) {
    NormExp r = gauss_norm_exp(ctx, f.coeffs(), q);
    if (f.tail()) r = max(r, f.tail()->at(q));
    return r;
}

DominantTerm dominant_term(const PContext& ctx, const LaurentChunk& f, const Rational& q1, const Rational& q2) {
    if (!(q1 < q2)) throw Error(ErrorCode::NotAUnit, "empty radius interval");
    Rational mid = (q1 + q2) / 2;
    auto line = [&](long e, const Rational& c, const Rational& q) { return norm_exp(ctx, c) + NormExp(Rational(q * e)); };
    for (auto& [n, c] : f.coeffs()) {
        bool ok = true;
        for (auto& [i, ci] : f.coeffs()) {
            if (i == n) continue;
            if (line(n, c, q1) < line(i, ci, q1) || line(n, c, q2) < line(i, ci, q2) || !(line(i, ci, mid) < line(n, c, mid))) {
                ok = false;
                break;
            }
        }
        if (ok && f.tail()) {
            const auto& t = *f.tail();
            if (line(n, c, q1) < t.at(q1) || line(n, c, q2) < t.at(q2) || !(t.at(mid) < line(n, c, mid))) ok = false;
        }
        if (ok) return {n, c};
    }
    throw Error(ErrorCode::NotAUnit, "no dominant term on (" + to_string(q1) + ", " + to_string(q2) + ")");
}

MapClass classify_map(const PContext& ctx, const LaurentChunk& f, const Rational& q1, const Rational& q2) {
    auto d = dominant_term(ctx, f, q1, q2);
    if (d.n == 0) throw Error(ErrorCode::DegreeZero, "dominant exponent is 0");
    return {std::abs(d.n), d.n > 0 ? Orientation::Preserving : Orientation::Reversing};
}

namespace {

// f = lead * t^n * (1 + h), h supported on dir*k, k >= 1.  hv[k] is the
// coefficient at exponent dir*k.
struct UnitSplit {
    DominantTerm dom;
    int dir = 0;
    std::vector<Rational> hv;
};

UnitSplit split_unit(const PContext& ctx, const LaurentChunk& f, const Rational& q1, const Rational& q2) {
    if (f.tail()) throw Error(ErrorCode::WindowNotCertifiable, "inner map must be a Laurent polynomial");
    UnitSplit u;
    u.dom = dominant_term(ctx, f, q1, q2);
    bool pos = false, neg = false;
    for (auto& [e, c] : f.coeffs()) {
        if (e > u.dom.n) pos = true;
        if (e < u.dom.n) neg = true;
    }
    if (pos && neg) throw Error(ErrorCode::WindowNotCertifiable, "unit part has exponents of both signs");
    u.dir = pos ? 1 : (neg ? -1 : 0);
    if (u.dir != 0) {
        long span = std::abs(*(pos ? f.max_exp() : f.min_exp()) - u.dom.n);
        u.hv.assign(span + 1, Rational(0));
        for (auto& [e, c] : f.coeffs())
            if (e != u.dom.n) u.hv[std::abs(e - u.dom.n)] = c / u.dom.lead;
    }
    return u;
}

using Series = std::vector<Rational>;

Series mul_trunc(const Series& a, const Series& b, long K) {
    Series r(std::max<long>(K + 1, 0), Rational(0));
    for (std::size_t i = 0; i < a.size() && static_cast<long>(i) <= K; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size() && static_cast<long>(i + j) <= K; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

// (1 + h)^i truncated at index K; exact flag tells whether nothing was dropped.
Series unit_power(const UnitSplit& u, long i, long K, bool& exact) {
    exact = true;
    if (K < 0) {
        exact = false;
        return {};
    }
    Series one{Rational(1)};
    if (u.dir == 0 || i == 0) return one;
    Series base(u.hv.size(), Rational(0));
    base[0] = 1;
    for (std::size_t k = 1; k < u.hv.size(); ++k) base[k] = u.hv[k];
    long deg = static_cast<long>(u.hv.size()) - 1;
    if (i < 0) {
        Series inv(K + 1, Rational(0));
        inv[0] = 1;
        for (long k = 1; k <= K; ++k) {
            Rational s = 0;
            for (long m = 1; m <= std::min(k, deg); ++m) s += u.hv[m] * inv[k - m];
            inv[k] = -s;
        }
        base = inv;
        exact = false;
    } else if (deg * i > K) {
        exact = false;
    }
    Series r = one;
    for (long m = 0; m < std::abs(i); ++m) r = mul_trunc(r, base, K);
    return r;
}

Rational pow_rat(const Rational& x, long i) {
    Rational r = 1;
    Rational b = i < 0 ? checked_div(Rational(1), x) : x;
    for (long m = 0; m < std::abs(i); ++m) r *= b;
    return r;
}

} // namespace

LaurentChunk invert_unit(const PContext& ctx, const LaurentChunk& f, const Rational& q1, const Rational& q2, Window window) {
    UnitSplit u = split_unit(ctx, f, q1, q2);
    long n = u.dom.n;
    Rational inv_lead = checked_div(Rational(1), u.dom.lead);
    if (u.dir == 0) return LaurentChunk::monomial(inv_lead, -n);
    long K = u.dir > 0 ? window.hi + n : -(window.lo + n);
    bool exact;
    Series c = unit_power(u, -1, K, exact);
    LaurentChunk::Map m;
    for (long k = 0; k < static_cast<long>(c.size()); ++k) m[u.dir * k - n] = c[k] * inv_lead;
    const Rational& qe = u.dir > 0 ? q2 : q1;
    TailBound t{u.dir > 0 ? TailSide::Upper : TailSide::Lower, u.dir > 0 ? window.hi : window.lo, qe,
                NormExp(Rational(0)) - Rational(norm_exp(ctx, u.dom.lead).value() + qe * n), ctx.p()};
    return LaurentChunk(std::move(m), t);
}

LaurentChunk compose(const PContext& ctx, const LaurentChunk& g, const LaurentChunk& f, const Rational& q1, const Rational& q2,
                     Window window) {
    UnitSplit u = split_unit(ctx, f, q1, q2);
    long n = u.dom.n;
    if (n == 0) {
        // polynomial substitution needs no expansion of a unit
        bool poly = !g.tail() && (g.coeffs().empty() || g.coeffs().begin()->first >= 0);
        if (!poly) throw Error(ErrorCode::DegreeZero, "inner map has dominant exponent 0");
        LaurentChunk r, pw = LaurentChunk::monomial(1, 0);
        long at = 0;
        for (auto& [i, gi] : g.coeffs()) {
            for (; at < i; ++at) pw = pw * f;
            r += pw.scaled(gi);
        }
        return r;
    }

    TailSide side = TailSide::Upper;
    if (u.dir < 0) side = TailSide::Lower;
    if (u.dir == 0 && g.tail()) {
        bool up = (g.tail()->side == TailSide::Upper) == (n > 0);
        side = up ? TailSide::Upper : TailSide::Lower;
    }
    int s = side == TailSide::Upper ? 1 : -1;
    long limit = s > 0 ? window.hi : -window.lo;
    const Rational& qe = s > 0 ? q2 : q1;
    Rational sigma = norm_exp(ctx, u.dom.lead).value() + qe * n;

    LaurentChunk::Map m;
    NormExp dropped = NormExp::bottom();
    for (auto& [i, gi] : g.coeffs()) {
        long base = n * i;
        long K = limit - s * base;
        bool exact;
        Series P = unit_power(u, i, K, exact);
        Rational scale = gi * pow_rat(u.dom.lead, i);
        int step = u.dir == 0 ? s : u.dir;
        for (long k = 0; k < static_cast<long>(P.size()); ++k)
            if (P[k] != 0) m[base + step * k] += scale * P[k];
        if (!exact) dropped = max(dropped, norm_exp(ctx, gi) + NormExp(Rational(sigma * i)));
    }

    std::optional<TailBound> tail;
    if (!dropped.is_bottom()) tail = TailBound{side, s > 0 ? window.hi : window.lo, qe, dropped, ctx.p()};

    if (g.tail()) {
        const TailBound& gt = *g.tail();
        int gdir = (gt.side == TailSide::Upper ? 1 : -1) * (n > 0 ? 1 : -1);
        if (gdir != s) throw Error(ErrorCode::WindowNotCertifiable, "outer tail runs against the inner unit's expansion");
        Rational qstar = (gt.q0 - norm_exp(ctx, u.dom.lead).value()) / n;
        if (u.dir != 0 && (qstar < q1 || qstar > q2))
            throw Error(ErrorCode::WindowNotCertifiable, "outer tail radius maps outside the annulus");
        long i0 = gt.side == TailSide::Upper ? gt.edge + 1 : gt.edge - 1;
        TailBound gtail{side, s > 0 ? n * i0 - 1 : n * i0 + 1, qstar, gt.bound, ctx.p()};
        tail = tail ? merge_tails(*tail, gtail) : gtail;
    }
    return LaurentChunk(std::move(m), tail);
}

} // namespace wideopen
