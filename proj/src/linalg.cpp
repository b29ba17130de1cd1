#include "mz/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mz {

int rank(QMatrix m) {
    int r = 0;
    const int rows = static_cast<int>(m.size());
    const int cols = rows ? static_cast<int>(m[0].size()) : 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pivot = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][c] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            continue;
        std::swap(m[r], m[pivot]);
        for (int i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0)
                continue;
            Q f = m[i][c] / m[r][c];
            for (int j = c; j < cols; ++j)
                m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

QMatrix identity_matrix(int n) {
    QMatrix m(n, std::vector<Q>(n, Q(0)));
    for (int i = 0; i < n; ++i)
        m[i][i] = 1;
    return m;
}

QMatrix multiply(const QMatrix& a, const QMatrix& b) {
    const std::size_t n = a.size(), inner = b.size(), p = inner ? b[0].size() : 0;
    QMatrix out(n, std::vector<Q>(p, Q(0)));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != inner)
            throw std::invalid_argument("matrix shapes do not match");
        for (std::size_t k = 0; k < inner; ++k)
            if (a[i][k] != 0)
                for (std::size_t j = 0; j < p; ++j)
                    out[i][j] += a[i][k] * b[k][j];
    }
    return out;
}

std::vector<Q> characteristic_polynomial(const QMatrix& m) {
    // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
    const int n = static_cast<int>(m.size());
    std::vector<Q> c(n + 1, Q(0));
    c[n] = 1;
    QMatrix mk(n, std::vector<Q>(n, Q(0)));
    for (int k = 1; k <= n; ++k) {
        QMatrix next = multiply(m, mk);
        for (int i = 0; i < n; ++i)
            next[i][i] += c[n - k + 1];
        QMatrix am = multiply(m, next);
        Q trace = 0;
        for (int i = 0; i < n; ++i)
            trace += am[i][i];
        c[n - k] = -trace / k;
        mk = std::move(next);
    }
    return c;
}

namespace {

using Poly = std::vector<Q>;

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

Poly derivative(const Poly& p) {
    Poly out;
    for (std::size_t i = 1; i < p.size(); ++i)
        out.push_back(p[i] * static_cast<int>(i));
    trim(out);
    return out;
}

// Remainder and quotient of a by b; b nonzero.
std::pair<Poly, Poly> divide(Poly a, const Poly& b) {
    trim(a);
    Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Q(0));
    while (a.size() >= b.size() && !a.empty()) {
        std::size_t shift = a.size() - b.size();
        Q f = a.back() / b.back();
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i)
            a[i + shift] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    return {q, a};
}

Poly gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = divide(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

Q evaluate(const Poly& p, const Q& x) {
    Q v = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        v = v * x + *it;
    return v;
}

int sign_changes(const std::vector<Poly>& chain, const Q& x) {
    int changes = 0, last = 0;
    for (auto& p : chain) {
        Q v = evaluate(p, x);
        int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++changes;
        last = s;
    }
    return changes;
}

}  // namespace

SpectralEstimate largest_real_root(const std::vector<Q>& poly, const Q& tol) {
    Poly p = poly;
    trim(p);
    if (p.size() < 2)
        throw std::invalid_argument("polynomial has no roots");
    // Square-free part, so the Sturm count is right-continuous everywhere.
    Poly g = gcd(p, derivative(p));
    Poly sq = divide(p, g).first;
    std::vector<Poly> chain{sq, derivative(sq)};
    while (chain.back().size() > 1) {
        Poly r = divide(chain[chain.size() - 2], chain.back()).second;
        if (r.empty())
            break;
        for (auto& x : r)
            x = -x;
        chain.push_back(std::move(r));
    }
    // Cauchy bound: every root lies in [-bound, bound].
    Q bound = 0;
    for (std::size_t i = 0; i + 1 < sq.size(); ++i) {
        Q r = sq[i] / sq.back();
        bound = std::max(bound, r < 0 ? Q(-r) : r);
    }
    bound += 1;
    Q lo = -bound, hi = bound;
    if (sign_changes(chain, lo) - sign_changes(chain, hi) == 0)
        throw std::invalid_argument("polynomial has no real root");
    // Invariant: the largest root lies in (lo, hi].
    const int at_hi = sign_changes(chain, hi);
    while (hi - lo > tol) {
        Q mid = (lo + hi) / 2;
        if (sign_changes(chain, mid) - at_hi > 0)
            lo = mid;
        else
            hi = mid;
    }
    SpectralEstimate out;
    out.method = "characteristic polynomial, Sturm isolation";
    // Integer matrices have monic integer characteristic polynomials, so rational roots are integers.
    Q mid = (lo + hi) / 2;
    Q half_up = mid + Q(1, 2);
    Z fl = numerator(half_up) / denominator(half_up);
    if (fl * denominator(half_up) > numerator(half_up))
        fl -= 1;
    Q nearest(fl);
    for (const Q& c : {hi, nearest})
        if (lo < c && c <= hi && evaluate(sq, c) == 0) {
            out.value = to_double(c);
            out.exact = true;
            return out;
        }
    out.value = to_double(mid);
    out.error = to_double((hi - lo) / 2);
    return out;
}

SpectralEstimate spectral_radius(const QMatrix& m) {
    const int n = static_cast<int>(m.size());
    if (n == 0)
        return {0, 0, "empty matrix", true};
    for (auto& row : m)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("spectral radius needs a square matrix");
    for (auto& row : m)
        for (auto& x : row)
            if (x < 0)
                throw std::invalid_argument("spectral radius needs a nonnegative matrix");
    if (n <= 30) {
        return largest_real_root(characteristic_polynomial(m), Q(1, 1u << 30) / (1u << 10));
    }
    // Power iteration on m + I, which is primitive-friendly and shifts the radius by one.
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a[i][j] = to_double(m[i][j]) + (i == j ? 1.0 : 0.0);
    std::vector<double> x(n, 1.0 / std::sqrt(n)), y(n);
    double lambda = 0;
    for (int it = 0; it < 20000; ++it) {
        for (int i = 0; i < n; ++i) {
            y[i] = 0;
            for (int j = 0; j < n; ++j)
                y[i] += a[i][j] * x[j];
        }
        double norm = 0;
        for (double v : y)
            norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0)
            break;
        double delta = std::abs(norm - lambda);
        lambda = norm;
        for (int i = 0; i < n; ++i)
            x[i] = y[i] / norm;
        if (delta < 1e-14 * std::max(1.0, lambda))
            break;
    }
    double residual = 0;
    for (int i = 0; i < n; ++i) {
        double r = -lambda * x[i];
        for (int j = 0; j < n; ++j)
            r += a[i][j] * x[j];
        residual += r * r;
    }
    return {lambda - 1.0, std::sqrt(residual), "power iteration", false};
}

}  // namespace mz
