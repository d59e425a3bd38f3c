#include "gmtk/linalg.hpp"

#include "gmtk/error.hpp"

#include <utility>

namespace gmtk {

namespace {

void require_square(std::size_t rows, std::size_t cols, const char* what) {
    if (rows != cols) throw InputError(std::string(what) + ": matrix is not square");
}

void swap_rows(IntMatrix& a, std::size_t i, std::size_t k) {
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(i, j), a(k, j));
}

void swap_cols(IntMatrix& a, std::size_t i, std::size_t k) {
    for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, k));
}

// Replace rows (p, q) by (s*p + t*q, (b/g)*p - (a/g)*q) where a = p[col], b = q[col].
void gcd_combine_rows(IntMatrix& m, std::size_t p, std::size_t q, std::size_t col) {
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m(p, col).get_mpz_t(), m(q, col).get_mpz_t());
    Integer a = m(p, col) / g;
    Integer b = m(q, col) / g;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        Integer x = m(p, j);
        Integer y = m(q, j);
        m(p, j) = s * x + t * y;
        m(q, j) = b * x - a * y;
    }
}

// Unimodular row echelon form. Returns the number of nonzero rows.
std::size_t echelonize(IntMatrix& m, std::size_t pivot_cols) {
    std::size_t row = 0;
    for (std::size_t col = 0; col < pivot_cols && row < m.rows(); ++col) {
        for (std::size_t i = row + 1; i < m.rows(); ++i) {
            if (m(i, col) != 0) gcd_combine_rows(m, row, i, col);
        }
        if (m(row, col) != 0) {
            if (m(row, col) < 0)
                for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) = -m(row, j);
            ++row;
        }
    }
    return row;
}

}  // namespace

RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

Integer determinant(const IntMatrix& m) {
    require_square(m.rows(), m.cols(), "determinant");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Integer prev = 1;
    int s = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            swap_rows(a, k, p);
            s = -s;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j));
                mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return s * a(n - 1, n - 1);
}

Rational determinant(const RatMatrix& m) {
    require_square(m.rows(), m.cols(), "determinant");
    const std::size_t n = m.rows();
    RatMatrix a = m;
    Rational det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k) == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rational f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

Integer cofactor(const IntMatrix& m, std::size_t i, std::size_t j) {
    require_square(m.rows(), m.cols(), "cofactor");
    std::vector<std::size_t> rows, cols;
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (r != i) rows.push_back(r);
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (c != j) cols.push_back(c);
    Integer minor = determinant(m.submatrix(rows, cols));
    return ((i + j) % 2 == 0) ? minor : Integer(-minor);
}

HomologySummary smith_invariants(const IntMatrix& m) {
    IntMatrix a = m;
    const std::size_t r = a.rows();
    const std::size_t c = a.cols();
    const std::size_t t_max = std::min(r, c);
    std::vector<Integer> diag;
    for (std::size_t t = 0; t < t_max; ++t) {
        bool any = false;
        for (std::size_t i = t; i < r && !any; ++i)
            for (std::size_t j = t; j < c && !any; ++j) any = a(i, j) != 0;
        if (!any) break;
        for (;;) {
            std::size_t bi = t, bj = t;
            Integer best = 0;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < c; ++j)
                    if (a(i, j) != 0 && (best == 0 || abs(a(i, j)) < best)) {
                        best = abs(a(i, j));
                        bi = i;
                        bj = j;
                    }
            swap_rows(a, t, bi);
            swap_cols(a, t, bj);
            bool clean = true;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (a(i, t) == 0) continue;
                Integer q = a(i, t) / a(t, t);
                for (std::size_t j = t; j < c; ++j) a(i, j) -= q * a(t, j);
                if (a(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                if (a(t, j) == 0) continue;
                Integer q = a(t, j) / a(t, t);
                for (std::size_t i = t; i < r; ++i) a(i, j) -= q * a(i, t);
                if (a(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            std::size_t bad = r;
            for (std::size_t i = t + 1; i < r && bad == r; ++i)
                for (std::size_t j = t + 1; j < c; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == r) break;
            for (std::size_t j = t; j < c; ++j) a(t, j) += a(bad, j);
        }
        diag.push_back(abs(a(t, t)));
    }
    HomologySummary h;
    h.invariant_factors = diag;
    h.invariant_factors.resize(r, Integer(0));
    h.order = 1;
    for (const auto& d : h.invariant_factors) h.order *= d;
    return h;
}

IntMatrix left_kernel(const IntMatrix& m) {
    const std::size_t r = m.rows();
    const std::size_t c = m.cols();
    IntMatrix aug(r, c + r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) aug(i, j) = m(i, j);
        aug(i, c + i) = 1;
    }
    std::size_t rank = echelonize(aug, c);
    IntMatrix k(r - rank, r);
    for (std::size_t i = rank; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) k(i - rank, j) = aug(i, c + j);
    return k;
}

IntMatrix row_lattice_basis(const IntMatrix& m) {
    IntMatrix a = m;
    std::size_t rank = echelonize(a, a.cols());
    IntMatrix b(rank, a.cols());
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) b(i, j) = a(i, j);
    return b;
}

Rational ContinuedFraction::value() const {
    if (empty()) throw InputError("value of the empty continued fraction");
    return make_rational(num_, den_);
}

Rational ContinuedFraction::reciprocal() const {
    if (empty()) return 0;
    if (num_ == 0) throw InputError("continued fraction evaluates to zero");
    return make_rational(den_, num_);
}

ContinuedFraction cf_eval(const std::vector<Integer>& terms) {
    if (terms.empty()) return {};
    Integer num = terms.back();
    Integer den = 1;
    for (std::size_t k = terms.size() - 1; k-- > 0;) {
        if (num == 0) throw InputError("continued fraction divides by zero");
        Integer next = terms[k] * num - den;
        den = num;
        num = next;
    }
    Integer g = gcd(num, den);
    if (g != 1 && g != 0) {
        num /= g;
        den /= g;
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return {terms, num, den};
}

std::vector<Integer> leading_principal_minors(const IntMatrix& m) {
    require_square(m.rows(), m.cols(), "leading_principal_minors");
    const std::size_t n = m.rows();
    std::vector<Integer> minors;
    IntMatrix a = m;
    Integer prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        minors.push_back(a(k, k));
        if (a(k, k) == 0) {
            // Elimination without pivoting stalls; fall back to direct minors.
            for (std::size_t j = k + 1; j < n; ++j) {
                std::vector<std::size_t> idx(j + 1);
                for (std::size_t t = 0; t <= j; ++t) idx[t] = t;
                minors.push_back(determinant(m.principal(idx)));
            }
            return minors;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a(k, k);
    }
    return minors;
}

bool is_positive_definite(const IntMatrix& m) {
    require_square(m.rows(), m.cols(), "is_positive_definite");
    if (m.transposed() != m) throw InputError("is_positive_definite: matrix is not symmetric");
    for (const auto& minor : leading_principal_minors(m))
        if (minor <= 0) return false;
    return true;
}

bool is_positive_definite(const RatMatrix& m) {
    require_square(m.rows(), m.cols(), "is_positive_definite");
    if (m.transposed() != m) throw InputError("is_positive_definite: matrix is not symmetric");
    Integer scale = 1;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) scale = lcm(scale, m(i, j).get_den());
    IntMatrix a(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = Rational(m(i, j) * scale).get_num();
    for (const auto& minor : leading_principal_minors(a))
        if (minor <= 0) return false;
    return true;
}

}  // namespace gmtk
