#include "hem/solver.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hem {

namespace {

using Mat = std::vector<std::vector<long long>>;

// Column operations bringing C to lower-triangular L = C V with V unimodular.
void lower_hermite(Mat& L, Mat& V) {
    const std::size_t n = L.size();
    V.assign(n, std::vector<long long>(n, 0));
    for (std::size_t i = 0; i < n; ++i) V[i][i] = 1;
    auto col_op = [&](std::size_t a, std::size_t b, long long p, long long q, long long r, long long s) {
        // (col_a, col_b) <- (p col_a + q col_b, r col_a + s col_b)
        for (auto* M : {&L, &V})
            for (auto& row : *M) {
                const long long x = row[a], y = row[b];
                row[a] = p * x + q * y;
                row[b] = r * x + s * y;
            }
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (L[i][j] == 0) continue;
            // extended gcd on (L[i][i], L[i][j])
            long long a = L[i][i], b = L[i][j];
            long long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
            while (b != 0) {
                const long long q = a / b;
                std::tie(a, b) = std::make_pair(b, a - q * b);
                std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
                std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
            }
            // a = x0 L_ii + y0 L_ij; (x1, y1) spans the kernel direction
            col_op(i, j, x0, y0, x1, y1);
            (void)a;
        }
        if (L[i][i] == 0) throw std::invalid_argument("solve_binomial: singular exponent matrix");
    }
}

Complex int_pow(Complex z, long long k) {
    if (k < 0) {
        z = 1.0 / z;
        k = -k;
    }
    Complex acc(1.0);
    while (k) {
        if (k & 1) acc *= z;
        z *= z;
        k >>= 1;
    }
    return acc;
}

} // namespace

std::vector<std::vector<Complex>> solve_binomial(const Eigen::MatrixXi& C, const std::vector<Complex>& rhs) {
    const std::size_t n = static_cast<std::size_t>(C.rows());
    if (C.cols() != C.rows() || rhs.size() != n) throw std::invalid_argument("solve_binomial: shape mismatch");
    for (const auto& r : rhs)
        if (r == Complex(0.0)) throw std::invalid_argument("solve_binomial: zero right-hand side");
    Mat L(n, std::vector<long long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) L[i][j] = C(static_cast<int>(i), static_cast<int>(j));
    Mat V;
    lower_hermite(L, V);
    // x = y^V (x_j = prod_m y_m^{V_jm}) turns the system into prod_{m<=i} y_m^{L_im} = rhs_i.
    std::vector<std::vector<Complex>> ys{{}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::vector<Complex>> next;
        const long long d = L[i][i];
        const long long m = d < 0 ? -d : d;
        for (const auto& y : ys) {
            Complex v = rhs[i];
            for (std::size_t k = 0; k < i; ++k) v /= int_pow(y[k], L[i][k]);
            if (d < 0) v = 1.0 / v;
            const double r = std::pow(std::abs(v), 1.0 / static_cast<double>(m));
            const double th = std::arg(v);
            for (long long k = 0; k < m; ++k) {
                auto yy = y;
                yy.push_back(std::polar(r, (th + 2 * M_PI * static_cast<double>(k)) / static_cast<double>(m)));
                next.push_back(std::move(yy));
            }
        }
        ys = std::move(next);
    }
    std::vector<std::vector<Complex>> out;
    for (const auto& y : ys) {
        std::vector<Complex> x(n, Complex(1.0));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t m = 0; m < n; ++m) x[j] *= int_pow(y[m], V[j][m]);
        out.push_back(std::move(x));
    }
    return out;
}

} // namespace hem
