#include "wideopen/geometry.hpp"

namespace wideopen {

WideOpenDomain::WideOpenDomain(PContext ctx, std::vector<Disc> discs) : ctx_(ctx), discs_(std::move(discs)) {
    if (discs_.empty()) throw Error(ErrorCode::SchemaError, "a domain needs at least one removed disc");
    for (std::size_t i = 0; i < discs_.size(); ++i) {
        for (std::size_t j = i + 1; j < discs_.size(); ++j) {
            const Disc& a = discs_[i];
            const Disc& b = discs_[j];
            if (a.center == b.center) throw Error(ErrorCode::DuplicateCenters, "center " + a.center.str() + " repeated");
            bool ok;
            if (!a.center.inf && !b.center.inf) {
                NormExp d = norm_exp(ctx_, a.center.a - b.center.a);
                ok = NormExp(a.radius_q) < d && NormExp(b.radius_q) < d;
            } else {
                const Disc& fin = a.center.inf ? b : a;
                const Disc& inf = a.center.inf ? a : b;
                ok = max(norm_exp(ctx_, fin.center.a), NormExp(fin.radius_q)) < NormExp(Rational(-inf.radius_q));
            }
            if (!ok)
                throw Error(ErrorCode::OverlappingDiscs, "discs at " + a.center.str() + " and " + b.center.str() + " meet");
        }
    }
}

std::vector<Point> WideOpenDomain::centers() const {
    std::vector<Point> r;
    for (auto& d : discs_) r.push_back(d.center);
    return r;
}

std::optional<Rational> WideOpenDomain::separation(std::size_t i) const {
    const Disc& di = discs_.at(i);
    std::optional<Rational> best;
    auto take = [&](const Rational& v) {
        if (!best || v < *best) best = v;
    };
    for (std::size_t k = 0; k < discs_.size(); ++k) {
        if (k == i) continue;
        const Disc& dk = discs_[k];
        if (!di.center.inf) {
            if (dk.center.inf)
                take(-dk.radius_q);
            else
                take(norm_exp(ctx_, di.center.a - dk.center.a).value());
        } else {
            take(-max(norm_exp(ctx_, dk.center.a), NormExp(dk.radius_q)).value());
        }
    }
    return best;
}

bool WideOpenDomain::in_disc(std::size_t i, const Point& x) const {
    const Disc& d = discs_.at(i);
    if (d.center.inf) return x.inf || NormExp(Rational(-d.radius_q)) <= norm_exp(ctx_, x.a);
    if (x.inf) return false;
    return norm_exp(ctx_, x.a - d.center.a) <= NormExp(d.radius_q);
}

std::optional<std::size_t> WideOpenDomain::disc_containing(const Point& x) const {
    for (std::size_t i = 0; i < discs_.size(); ++i)
        if (in_disc(i, x)) return i;
    return std::nullopt;
}

WideOpenDomain build_domain(const PContext& ctx, const std::vector<Disc>& discs) { return WideOpenDomain(ctx, discs); }

OrientedAnnulus boundary_annulus(const WideOpenDomain& d, std::size_t end, const Rational& q_outer) {
    if (end >= d.num_ends()) throw Error(ErrorCode::SchemaError, "no end " + std::to_string(end));
    const Rational& r = d.disc(end).radius_q;
    auto sep = d.separation(end);
    if (!(r < q_outer) || (sep && !(q_outer < *sep)))
        throw Error(ErrorCode::RadiusOutOfRange, "outer radius exponent " + to_string(q_outer) + " not in (" + to_string(r) +
                                                     ", " + (sep ? to_string(*sep) : std::string("inf")) + ")");
    return {d.end(end), r, q_outer, Toward::Inner};
}

AffinoidSlice::AffinoidSlice(WideOpenDomain d, std::vector<Rational> t) : domain(std::move(d)), trims(std::move(t)) {
    if (trims.size() != domain.num_ends()) throw Error(ErrorCode::SchemaError, "one trim per end required");
    for (std::size_t i = 0; i < trims.size(); ++i) {
        auto sep = domain.separation(i);
        if (!(domain.disc(i).radius_q < trims[i]) || (sep && !(trims[i] < *sep)))
            throw Error(ErrorCode::RadiusOutOfRange, "trim " + to_string(trims[i]) + " at end " + std::to_string(i));
    }
    // the trimmed circles must not cross, otherwise the slice is empty
    for (std::size_t k = 0; k < trims.size(); ++k) {
        if (!domain.disc(k).center.inf) continue;
        for (std::size_t i = 0; i < trims.size(); ++i) {
            if (i == k) continue;
            NormExp reach = max(norm_exp(domain.ctx(), domain.disc(i).center.a), NormExp(trims[i]));
            if (!(reach < NormExp(Rational(-trims[k]))))
                throw Error(ErrorCode::RadiusOutOfRange, "trims at ends " + std::to_string(i) + " and " +
                                                             std::to_string(k) + " cross");
        }
    }
}

NormExp spectral_norm_exp(const AffinoidSlice& X, const std::vector<LaurentChunk>& per_end) {
    NormExp r = NormExp::bottom();
    for (std::size_t i = 0; i < per_end.size(); ++i)
        r = max(r, gauss_norm_exp(X.domain.ctx(), per_end[i], X.trims.at(i)));
    return r;
}

Rational factor_gauss(const PContext& ctx, const Point& from, const Point& to, const Rational& q) {
    if (!from.inf && !to.inf) {
        NormExp d = norm_exp(ctx, to.a - from.a);
        return max(NormExp(q), d).value();
    }
    if (!from.inf && to.inf) {
        NormExp s = norm_exp(ctx, from.a) + NormExp(q);
        return -q + max(NormExp(Rational(0)), s).value();
    }
    if (from.inf && !to.inf) return -max(NormExp(q), norm_exp(ctx, to.a)).value();
    return q;
}

} // namespace wideopen
