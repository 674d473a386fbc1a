#include "wideopen/linalg.hpp"

namespace wideopen {

Rref rref(Matrix a, std::size_t ncols) {
    Rref out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < a.size(); ++c) {
        std::size_t piv = r;
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[r], a[piv]);
        Rational inv = 1 / a[r][c];
        for (auto& x : a[r]) x *= inv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (std::size_t k = 0; k < ncols; ++k) a[i][k] -= f * a[r][k];
        }
        out.pivots.push_back(c);
        ++r;
    }
    a.resize(r);
    out.rows = std::move(a);
    return out;
}

std::vector<Vec> nullspace(const Matrix& a, std::size_t ncols) {
    Rref e = rref(a, ncols);
    std::vector<bool> is_piv(ncols, false);
    for (auto c : e.pivots) is_piv[c] = true;
    std::vector<Vec> basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_piv[f]) continue;
        Vec v(ncols, Rational(0));
        v[f] = 1;
        for (std::size_t r = 0; r < e.rows.size(); ++r) v[e.pivots[r]] = -e.rows[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::size_t rank(const Matrix& a, std::size_t ncols) { return rref(a, ncols).pivots.size(); }

Rational det_bareiss(Matrix a) {
    std::size_t n = a.size();
    if (n == 0) return 1;
    Rational prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t s = k + 1;
            while (s < n && a[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(a[k], a[s]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

Vec solve_bareiss(Matrix a, Vec b) {
    std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
    Rational prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t s = k + 1;
            while (s < n && a[s][k] == 0) ++s;
            if (s == n) throw Error(ErrorCode::SingularMatrix, "correction matrix is singular");
            std::swap(a[k], a[s]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j <= n; ++j) a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Vec x(n, Rational(0));
    for (std::size_t ii = n; ii-- > 0;) {
        Rational s = a[ii][n];
        for (std::size_t j = ii + 1; j < n; ++j) s -= a[ii][j] * x[j];
        x[ii] = s / a[ii][ii];
    }
    return x;
}

LinearOutcome solve_system_bareiss(const Matrix& a, const Vec& b, std::size_t ncols) {
    std::size_t m = a.size();
    std::size_t width = ncols + 1 + m;
    Matrix w(m, Vec(width, Rational(0)));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < ncols; ++j) w[i][j] = a[i][j];
        w[i][ncols] = b[i];
        w[i][ncols + 1 + i] = 1;
    }
    LinearOutcome out;
    std::size_t r = 0;
    Rational prev = 1;
    for (std::size_t c = 0; c < ncols && r < m; ++c) {
        std::size_t piv = r;
        while (piv < m && w[piv][c] == 0) ++piv;
        if (piv == m) continue;
        std::swap(w[r], w[piv]);
        for (std::size_t i = r + 1; i < m; ++i) {
            Rational f = w[i][c];
            for (std::size_t j = 0; j < width; ++j) w[i][j] = (w[r][c] * w[i][j] - f * w[r][j]) / prev;
        }
        prev = w[r][c];
        out.pivots.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < m; ++i) {
        if (w[i][ncols] != 0) {
            out.consistent = false;
            out.witness.assign(w[i].begin() + ncols + 1, w[i].end());
            return out;
        }
    }
    out.consistent = true;
    out.solution.assign(ncols, Rational(0));
    for (std::size_t k = r; k-- > 0;) {
        std::size_t c = out.pivots[k];
        Rational s = w[k][ncols];
        for (std::size_t j = c + 1; j < ncols; ++j) s -= w[k][j] * out.solution[j];
        out.solution[c] = s / w[k][c];
    }
    return out;
}

} // namespace wideopen
