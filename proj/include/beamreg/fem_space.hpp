#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace beamreg {

using Vector = std::vector<double>;

/// Coefficients of a function in the clamped Hermite space, one per interior DOF.
using CoefVector = Vector;

enum class DofKind { Value = 0, Slope = 1 };

enum class NormKind { L2, H1, H2 };

/// Gauss-Legendre rule on the reference interval [0,1].
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre(int n_points);

/// Hermite-cubic C1 elements on a uniform mesh of [0,1] with clamped ends.
///
/// Interior node i (1 <= i <= n-1) owns global DOFs 2(i-1) (value) and
/// 2(i-1)+1 (slope). The value and slope DOFs at x = 0 and x = 1 do not
/// exist, so every represented function satisfies u = u' = 0 there.
class FemSpace {
public:
    FemSpace(int n_elements, int q_pts);

    int n_elements() const noexcept { return n_elements_; }
    int q_pts() const noexcept { return static_cast<int>(rule_.points.size()); }
    double h() const noexcept { return h_; }
    std::size_t n_dofs() const noexcept { return 2 * static_cast<std::size_t>(n_elements_ - 1); }
    double node(int i) const noexcept { return nodes_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const QuadratureRule& rule() const noexcept { return rule_; }

    /// Global index of a node DOF, or -1 if the DOF is clamped.
    int dof(int node, DofKind kind) const noexcept;

    /// Global indices of the four local DOFs (v_left, s_left, v_right, s_right); -1 if clamped.
    std::array<int, 4> element_dofs(int element) const noexcept;

    /// Element containing x; nodes belong to the element on their right, x = 1 to the last.
    int locate(double x) const noexcept;

    /// Shape functions (or their deriv-th x-derivative) at local coordinate xi in [0,1].
    static std::array<double, 4> shape(double xi, int deriv, double h);

    bool operator==(const FemSpace& other) const noexcept {
        return n_elements_ == other.n_elements_ && q_pts() == other.q_pts();
    }

private:
    int n_elements_;
    double h_;
    std::vector<double> nodes_;
    QuadratureRule rule_;
};

/// Throws std::invalid_argument for n_elements < 2 or q_pts < 4.
FemSpace build_space(int n_elements, int q_pts);

/// Hermite interpolant matching f and f' at the interior nodes.
CoefVector interpolate(const FemSpace& space, const std::function<double(double)>& f,
                       const std::function<double(double)>& df);

/// deriv-th x-derivative of the represented function at x (deriv <= 2).
double eval(const FemSpace& space, std::span<const double> u, double x, int deriv);

double norm(const FemSpace& space, std::span<const double> u, NormKind kind);

/// Squared L2 norms of u, u', u'' in one pass.
std::array<double, 3> derivative_norms_sq(const FemSpace& space, std::span<const double> u);

}  // namespace beamreg
