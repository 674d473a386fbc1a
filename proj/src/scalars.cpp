#include "wideopen/scalars.hpp"

#include <cctype>

namespace wideopen {

const char* error_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::BadRational: return "BadRational";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::IncompatibleTails: return "IncompatibleTails";
    case ErrorCode::RadiusBelowTailCertificate: return "RadiusBelowTailCertificate";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::WindowNotCertifiable: return "WindowNotCertifiable";
    case ErrorCode::OverlappingDiscs: return "OverlappingDiscs";
    case ErrorCode::DuplicateCenters: return "DuplicateCenters";
    case ErrorCode::RadiusOutOfRange: return "RadiusOutOfRange";
    case ErrorCode::TailObscuresResidue: return "TailObscuresResidue";
    case ErrorCode::PoleOnAnnulus: return "PoleOnAnnulus";
    case ErrorCode::PoleInsideDomain: return "PoleInsideDomain";
    case ErrorCode::PoleInsideAffinoid: return "PoleInsideAffinoid";
    case ErrorCode::NotAnAnnularOverlap: return "NotAnAnnularOverlap";
    case ErrorCode::ModeViolation: return "ModeViolation";
    case ErrorCode::NoInvertibleMinor: return "NoInvertibleMinor";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SchemaError: return "SchemaError";
    }
    return "Error";
}

PContext::PContext(long p) : p_(p) {
    bool prime = p >= 2;
    for (long d = 2; prime && d * d <= p; ++d)
        if (p % d == 0) prime = false;
    if (!prime) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
}

const Rational& NormExp::value() const {
    if (!e_) throw std::logic_error("NormExp::value on BOTTOM");
    return *e_;
}

NormExp operator+(const NormExp& a, const NormExp& b) {
    if (a.is_bottom() || b.is_bottom()) return NormExp::bottom();
    return NormExp(Rational(*a.e_ + *b.e_));
}

NormExp operator-(const NormExp& a, const Rational& b) {
    if (a.is_bottom()) return a;
    return NormExp(Rational(*a.e_ - b));
}

bool operator==(const NormExp& a, const NormExp& b) {
    if (a.is_bottom() || b.is_bottom()) return a.is_bottom() == b.is_bottom();
    return *a.e_ == *b.e_;
}

std::strong_ordering operator<=>(const NormExp& a, const NormExp& b) {
    if (a.is_bottom() && b.is_bottom()) return std::strong_ordering::equal;
    if (a.is_bottom()) return std::strong_ordering::less;
    if (b.is_bottom()) return std::strong_ordering::greater;
    int c = cmp(*a.e_, *b.e_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string NormExp::str() const { return e_ ? to_string(*e_) : "BOTTOM"; }

NormExp max(const NormExp& a, const NormExp& b) { return a < b ? b : a; }

static long remove_p(mpz_class z, long p) {
    mpz_class pp(p);
    return static_cast<long>(mpz_remove(z.get_mpz_t(), z.get_mpz_t(), pp.get_mpz_t()));
}

std::optional<long> valuation(const PContext& ctx, const Rational& x) {
    if (x == 0) return std::nullopt;
    return remove_p(x.get_num(), ctx.p()) - remove_p(x.get_den(), ctx.p());
}

NormExp norm_exp(const PContext& ctx, const Rational& x) {
    auto v = valuation(ctx, x);
    if (!v) return NormExp::bottom();
    return NormExp(Rational(-*v));
}

Rational checked_div(const Rational& x, const Rational& y) {
    if (y == 0) throw Error(ErrorCode::DivisionByZero, "divide by zero");
    return x / y;
}

Rational parse_rational(const std::string& s) {
    auto bad = [&] { return Error(ErrorCode::BadRational, "cannot parse \"" + s + "\""); };
    if (s.empty()) throw bad();
    auto slash = s.find('/');
    auto integer_ok = [](const std::string& t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!integer_ok(num) || !integer_ok(den) || den[0] == '-' || den[0] == '+') throw bad();
    if (num[0] == '+') num = num.substr(1);
    mpz_class n(num), d(den);
    if (d == 0) throw bad();
    Rational r(n, d);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& x) { return x.get_str(); }

long floor_long(const Rational& x) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q.get_si();
}

long ceil_long(const Rational& x) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q.get_si();
}

} // namespace wideopen
