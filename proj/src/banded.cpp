#include "beamreg/banded.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "beamreg/errors.hpp"

namespace beamreg {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), data_(n * (kl + ku + 1), 0.0) {}

BandedMatrix BandedMatrix::identity(std::size_t n, std::size_t kl, std::size_t ku) {
    BandedMatrix m(n, kl, ku);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const noexcept {
    if (!in_band(i, j)) return 0.0;
    return data_[i * (kl_ + ku_ + 1) + (j + kl_ - i)];
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_ || !in_band(i, j))
        throw std::out_of_range("BandedMatrix: (" + std::to_string(i) + "," + std::to_string(j) +
                                ") outside the band");
    return data_[i * (kl_ + ku_ + 1) + (j + kl_ - i)];
}

void BandedMatrix::axpy(double s, const BandedMatrix& other) {
    if (other.n_ != n_ || other.kl_ != kl_ || other.ku_ != ku_)
        throw std::invalid_argument("BandedMatrix::axpy: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * other.data_[k];
}

void BandedMatrix::scale(double s) {
    for (double& v : data_) v *= s;
}

std::vector<double> BandedMatrix::matvec(std::span<const double> x) const {
    if (x.size() != n_)
        throw std::invalid_argument("band_matvec: dimension mismatch (" + std::to_string(x.size()) +
                                    " vs " + std::to_string(n_) + ")");
    std::vector<double> y(n_, 0.0);
    const std::size_t w = kl_ + ku_ + 1;
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (std::size_t j = j0; j <= j1; ++j) s += data_[i * w + (j + kl_ - i)] * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> BandedMatrix::transpose_matvec(std::span<const double> x) const {
    if (x.size() != n_) throw std::invalid_argument("transpose_matvec: dimension mismatch");
    std::vector<double> y(n_, 0.0);
    const std::size_t w = kl_ + ku_ + 1;
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        for (std::size_t j = j0; j <= j1; ++j) y[j] += data_[i * w + (j + kl_ - i)] * x[i];
    }
    return y;
}

std::vector<double> BandedMatrix::to_dense() const {
    std::vector<double> d(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) d[i * n_ + j] = (*this)(i, j);
    return d;
}

std::vector<double> band_matvec(const BandedMatrix& a, std::span<const double> x) {
    return a.matvec(x);
}

BandedLU band_lu(const BandedMatrix& a) {
    const std::size_t n = a.size();
    const std::size_t kl = a.kl();
    const std::size_t ku = a.ku();
    BandedLU f;
    f.n_ = n;
    f.kl_ = kl;
    f.width_ = 2 * kl + ku + 1;
    f.lu_.assign(n * f.width_, 0.0);
    f.lower_.assign(n * std::max<std::size_t>(kl, 1), 0.0);
    f.pivots_.resize(n);

    const std::size_t w = f.width_;
    auto cell = [&](std::size_t i, std::size_t j) -> double& { return f.lu_[i * w + (j + kl - i)]; };
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i >= kl ? i - kl : 0;
        const std::size_t j1 = std::min(n - 1, i + ku);
        for (std::size_t j = j0; j <= j1; ++j) cell(i, j) = a(i, j);
    }

    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t last_row = std::min(n - 1, k + kl);
        const std::size_t last_col = std::min(n - 1, k + kl + ku);
        std::size_t p = k;
        double best = std::abs(cell(k, k));
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            const double v = std::abs(cell(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0)
            throw SingularMatrixError("band_lu: zero pivot in column " + std::to_string(k));
        f.pivots_[k] = p;
        if (p != k)
            for (std::size_t j = k; j <= last_col; ++j) std::swap(cell(k, j), cell(p, j));
        const double piv = cell(k, k);
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            const double m = cell(i, k) / piv;
            f.lower_[k * std::max<std::size_t>(kl, 1) + (i - k - 1)] = m;
            cell(i, k) = 0.0;
            if (m == 0.0) continue;
            for (std::size_t j = k + 1; j <= last_col; ++j) cell(i, j) -= m * cell(k, j);
        }
    }
    return f;
}

std::vector<double> BandedLU::solve(std::span<const double> b) const {
    if (b.size() != n_) throw std::invalid_argument("band_solve: dimension mismatch");
    std::vector<double> x(b.begin(), b.end());
    const std::size_t kls = std::max<std::size_t>(kl_, 1);
    for (std::size_t k = 0; k < n_; ++k) {
        const std::size_t p = pivots_[k];
        if (p != k) std::swap(x[k], x[p]);
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        for (std::size_t i = k + 1; i <= last_row; ++i) x[i] -= lower_[k * kls + (i - k - 1)] * x[k];
    }
    const std::size_t span_u = width_ - kl_ - 1;  // kl + ku
    for (std::size_t kk = n_; kk-- > 0;) {
        const std::size_t last_col = std::min(n_ - 1, kk + span_u);
        double s = x[kk];
        for (std::size_t j = kk + 1; j <= last_col; ++j) s -= lu_[kk * width_ + (j + kl_ - kk)] * x[j];
        x[kk] = s / lu_[kk * width_ + kl_];
    }
    return x;
}

std::vector<double> band_solve(const BandedLU& lu, std::span<const double> b) { return lu.solve(b); }

}  // namespace beamreg
