#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace beamreg {

/// Square band matrix with kl sub- and ku super-diagonals, stored row by row:
/// row i keeps columns i-kl .. i+ku.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

    static BandedMatrix identity(std::size_t n, std::size_t kl = 0, std::size_t ku = 0);

    std::size_t size() const noexcept { return n_; }
    std::size_t kl() const noexcept { return kl_; }
    std::size_t ku() const noexcept { return ku_; }

    bool in_band(std::size_t i, std::size_t j) const noexcept {
        return j + kl_ >= i && j <= i + ku_;
    }
    /// Entry (i,j); zero outside the band.
    double operator()(std::size_t i, std::size_t j) const noexcept;
    /// Mutable entry; (i,j) must lie inside the band.
    double& at(std::size_t i, std::size_t j);

    void add(std::size_t i, std::size_t j, double v) { at(i, j) += v; }

    /// this += s * other (same shape).
    void axpy(double s, const BandedMatrix& other);
    void scale(double s);

    std::vector<double> matvec(std::span<const double> x) const;
    std::vector<double> transpose_matvec(std::span<const double> x) const;

    /// Dense row-major copy (tests, small debugging).
    std::vector<double> to_dense() const;

private:
    std::size_t n_ = 0, kl_ = 0, ku_ = 0;
    std::vector<double> data_;
};

std::vector<double> band_matvec(const BandedMatrix& a, std::span<const double> x);

/// LU factors of a band matrix with row partial pivoting; U has bandwidth kl+ku.
class BandedLU {
public:
    std::size_t size() const noexcept { return n_; }
    std::vector<double> solve(std::span<const double> b) const;

private:
    friend BandedLU band_lu(const BandedMatrix& a);
    std::size_t n_ = 0, kl_ = 0, width_ = 0;  // width_ = 2 kl + ku + 1
    std::vector<double> lu_;                    // row i: columns i-kl .. i+kl+ku
    std::vector<double> lower_;                 // multipliers, kl per column
    std::vector<std::size_t> pivots_;
};

/// Throws SingularMatrixError on an exact zero pivot.
BandedLU band_lu(const BandedMatrix& a);

std::vector<double> band_solve(const BandedLU& lu, std::span<const double> b);

}  // namespace beamreg
