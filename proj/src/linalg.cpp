#include "fermirdm/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "fermirdm/errors.hpp"

namespace fermirdm::linalg {

namespace {

void check_info(lapack_int info, const char* routine) {
    if (info != 0) {
        throw NumericalError(std::string(routine) + " failed with info = " + std::to_string(info));
    }
}

}  // namespace

EigenResult eigh_descending(Matrix a, std::size_t n_vectors) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw ValidationError("eigh_descending needs a square matrix");
    EigenResult out;
    if (n == 0) return out;
    n_vectors = std::min(n_vectors, n);

    const auto ln = static_cast<lapack_int>(n);
    std::vector<double> d(n), e(n), tau(n);
    check_info(LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'L', ln, a.data(), ln, d.data(), e.data(), tau.data()),
               "dsytrd");

    std::vector<double> dall = d;
    std::vector<double> eall(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(n - 1));
    check_info(LAPACKE_dsterf(ln, dall.data(), eall.data()), "dsterf");
    out.values.assign(dall.rbegin(), dall.rend());

    out.vectors = Matrix(n, n_vectors);
    if (n_vectors == 0) return out;

    lapack_int found = 0;
    std::vector<double> w(n);
    std::vector<lapack_int> isuppz(2 * n_vectors);
    lapack_logical tryrac = 1;
    Matrix z(n, n_vectors);
    const auto il = static_cast<lapack_int>(n - n_vectors + 1);
    check_info(LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'I', ln, d.data(), e.data(), 0.0, 0.0, il, ln, &found,
                              w.data(), z.data(), ln, static_cast<lapack_int>(n_vectors), isuppz.data(),
                              &tryrac),
               "dstemr");
    if (static_cast<std::size_t>(found) != n_vectors) throw NumericalError("dstemr returned too few pairs");

    check_info(LAPACKE_dormtr(LAPACK_COL_MAJOR, 'L', 'L', 'N', ln, static_cast<lapack_int>(n_vectors), a.data(),
                              ln, tau.data(), z.data(), ln),
               "dormtr");

    // dstemr returns ascending order; flip to match values.
    for (std::size_t k = 0; k < n_vectors; ++k) {
        auto src = z.column(n_vectors - 1 - k);
        std::copy(src.begin(), src.end(), out.vectors.column(k).begin());
    }
    return out;
}

EigenResult tridiagonal_lowest(std::span<const double> diag, std::span<const double> offdiag,
                               std::size_t count) {
    const std::size_t n = diag.size();
    if (n == 0 || offdiag.size() + 1 != n) throw ValidationError("tridiagonal sizes inconsistent");
    count = std::min(count, n);
    EigenResult out;
    if (count == 0) return out;

    std::vector<double> d(diag.begin(), diag.end());
    std::vector<double> e(n, 0.0);
    std::copy(offdiag.begin(), offdiag.end(), e.begin());
    std::vector<double> w(n);
    std::vector<lapack_int> isuppz(2 * count);
    lapack_logical tryrac = 1;
    lapack_int found = 0;
    const auto ln = static_cast<lapack_int>(n);
    out.vectors = Matrix(n, count);
    check_info(LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'I', ln, d.data(), e.data(), 0.0, 0.0, 1,
                              static_cast<lapack_int>(count), &found, w.data(), out.vectors.data(), ln,
                              static_cast<lapack_int>(count), isuppz.data(), &tryrac),
               "dstemr");
    if (static_cast<std::size_t>(found) != count) throw NumericalError("dstemr returned too few pairs");
    out.values.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(count));
    return out;
}

TridiagonalSpectrum tridiagonal_ql(std::vector<double> d, std::vector<double> e) {
    const std::size_t n = d.size();
    if (n == 0 || e.size() + 1 != n) throw ValidationError("tridiagonal sizes inconsistent");
    e.push_back(0.0);
    // z holds the first row of the accumulated rotations.
    std::vector<double> z(n, 0.0);
    z[0] = 1.0;

    for (std::size_t l = 0; l < n; ++l) {
        int iterations = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 1e-300 || std::fabs(e[m]) <= 0.5e-16 * dd) break;
            }
            if (m != l) {
                if (++iterations > 60) throw NumericalError("implicit QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                std::size_t i = m;
                bool underflow = false;
                while (i-- > l) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
    TridiagonalSpectrum out;
    out.values.reserve(n);
    out.first_components.reserve(n);
    for (auto i : order) {
        out.values.push_back(d[i]);
        out.first_components.push_back(z[i]);
    }
    return out;
}

}  // namespace fermirdm::linalg
