#include "qbatch/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qbatch/errors.hpp"

namespace qbatch {

void jacobi_eigh(int n, std::vector<double> a, std::vector<double>& values,
                 std::vector<double>& vecs) {
    if (n == 0) {
        values.clear();
        vecs.clear();
        return;
    }
    vecs.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) vecs[static_cast<std::size_t>(i) * n + i] = 1.0;

    auto off_norm = [&] {
        double s = 0.0;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double v = a[static_cast<std::size_t>(p) * n + q];
                s += 2.0 * v * v;
            }
        }
        return std::sqrt(s);
    };

    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        scale = std::max(scale, std::abs(a[static_cast<std::size_t>(i) * n + i]));
    }
    scale = std::max(scale, off_norm());
    const double tol = 1e-13 * std::max(scale, 1.0);

    const int max_sweeps = 64;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= tol) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[static_cast<std::size_t>(p) * n + q];
                if (std::abs(apq) <= tol * 1e-3) continue;
                const double app = a[static_cast<std::size_t>(p) * n + p];
                const double aqq = a[static_cast<std::size_t>(q) * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                // Rutishauser's stable rotation.
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a[static_cast<std::size_t>(k) * n + p];
                    const double akq = a[static_cast<std::size_t>(k) * n + q];
                    a[static_cast<std::size_t>(k) * n + p] = c * akp - s * akq;
                    a[static_cast<std::size_t>(k) * n + q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[static_cast<std::size_t>(p) * n + k];
                    const double aqk = a[static_cast<std::size_t>(q) * n + k];
                    a[static_cast<std::size_t>(p) * n + k] = c * apk - s * aqk;
                    a[static_cast<std::size_t>(q) * n + k] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = vecs[static_cast<std::size_t>(k) * n + p];
                    const double vkq = vecs[static_cast<std::size_t>(k) * n + q];
                    vecs[static_cast<std::size_t>(k) * n + p] = c * vkp - s * vkq;
                    vecs[static_cast<std::size_t>(k) * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == max_sweeps && off_norm() > tol) {
        throw NumericError("jacobi_eigh: no convergence after 64 sweeps");
    }

    values.resize(n);
    for (int i = 0; i < n; ++i) values[i] = a[static_cast<std::size_t>(i) * n + i];

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return values[i] < values[j]; });

    std::vector<double> sorted_values(n);
    std::vector<double> sorted_vecs(static_cast<std::size_t>(n) * n);
    for (int col = 0; col < n; ++col) {
        const int src = order[col];
        sorted_values[col] = values[src];
        // Pin the sign: largest-magnitude entry positive, first index on ties.
        int pivot = 0;
        double best = -1.0;
        for (int k = 0; k < n; ++k) {
            const double mag = std::abs(vecs[static_cast<std::size_t>(k) * n + src]);
            if (mag > best + 1e-15) {
                best = mag;
                pivot = k;
            }
        }
        const double sign =
            vecs[static_cast<std::size_t>(pivot) * n + src] < 0.0 ? -1.0 : 1.0;
        for (int k = 0; k < n; ++k) {
            sorted_vecs[static_cast<std::size_t>(k) * n + col] =
                sign * vecs[static_cast<std::size_t>(k) * n + src];
        }
    }
    values = std::move(sorted_values);
    vecs = std::move(sorted_vecs);
}

void svd(int m, int n, const std::vector<std::complex<double>>& a,
         std::vector<std::complex<double>>& u, std::vector<double>& s,
         std::vector<std::complex<double>>& vh) {
    const int k = std::min(m, n);
    u.assign(static_cast<std::size_t>(m) * k, {});
    s.assign(k, 0.0);
    vh.assign(static_cast<std::size_t>(k) * n, {});
    if (k == 0) return;

    std::vector<std::complex<double>> work = a;
    const int info = LAPACKE_zgesdd(
        LAPACK_ROW_MAJOR, 'S', m, n,
        reinterpret_cast<lapack_complex_double*>(work.data()), n, s.data(),
        reinterpret_cast<lapack_complex_double*>(u.data()), k,
        reinterpret_cast<lapack_complex_double*>(vh.data()), n);
    if (info != 0) {
        throw NumericError("zgesdd failed with info=" + std::to_string(info));
    }
}

}  // namespace qbatch
