#pragma once

#include <span>
#include <vector>

#include "beamreg/banded.hpp"
#include "beamreg/fem_space.hpp"
#include "beamreg/regularization.hpp"

namespace beamreg {

/// Quadrature point in element-local coordinates; weight already includes the Jacobian h.
struct QuadPoint {
    double xi;
    double weight;
};

/// Sub-interval [begin, end] of an element, in x.
struct Panel {
    double begin;
    double end;
};

/// Element split at window edges; pieces inside a window are no wider than
/// 1/32 of its half-width.
std::vector<Panel> element_panels(const FemSpace& space, int element, std::span<const Window> windows);

/// Element rule: the space's Gauss rule composited over element_panels.
std::vector<QuadPoint> element_quadrature(const FemSpace& space, int element,
                                          std::span<const Window> windows);

BandedMatrix mass_matrix(const FemSpace& space);

/// (K_c)_ij = int c phi_i'' phi_j''.
BandedMatrix bending_matrix(const FemSpace& space, const RegularizedField& c);

/// (K_b)_ij = int d_t^t_order b(x,t) phi_j''(x) phi_i(x); row = test, column = trial.
BandedMatrix axial_matrix(const FemSpace& space, const RegularizedField& b, double t, int t_order = 0);

/// F_i = int d_t^t_order g(x,t) phi_i(x).
Vector load_vector(const FemSpace& space, const RegularizedField& g, double t, int t_order = 0);

/// F_i = sum_atoms mass * phi_i(location): unmollified point loads.
Vector point_load_vector(const FemSpace& space, std::span<const DiracAtom> atoms);

/// a0(u,v) = <c u'', v''>.
double apply_form_a0(const FemSpace& space, const RegularizedField& c, std::span<const double> u,
                     std::span<const double> v);
/// a1(t,u,v) = <b(t) u'', v>.
double apply_form_a1(const FemSpace& space, const RegularizedField& b, double t,
                     std::span<const double> u, std::span<const double> v);

/// Galerkin matrices of M u'' + (K_c + K_b(t) + W) u = F(t) for one regularized problem.
///
/// W = c_w M realizes the Winkler forcing g = -c_w u on the left-hand side.
/// K_c, M and W are assembled once; K_b(t) and F(t) on demand (cached when
/// the corresponding field does not depend on t).
class SystemMatrices {
public:
    SystemMatrices(const FemSpace& space, RegularizedField stiffness, RegularizedField axial,
                   RegularizedField load, double winkler = 0.0,
                   std::vector<DiracAtom> point_loads = {});

    const FemSpace& space() const noexcept { return space_; }
    const RegularizedField& stiffness_field() const noexcept { return c_; }
    const RegularizedField& axial_field() const noexcept { return b_; }
    const RegularizedField& load_field() const noexcept { return g_; }
    double winkler_coefficient() const noexcept { return winkler_; }
    const std::vector<DiracAtom>& point_loads() const noexcept { return point_loads_; }

    const BandedMatrix& mass() const noexcept { return mass_; }
    const BandedMatrix& bending() const noexcept { return bending_; }
    const BandedMatrix& winkler() const noexcept { return winkler_matrix_; }

    BandedMatrix axial(double t, int t_order = 0) const;
    /// K_c + K_b(t) + W.
    BandedMatrix operator_matrix(double t) const;
    Vector load(double t, int t_order = 0) const;

    bool operator_time_dependent() const noexcept { return b_.time_dependent(); }
    bool load_time_dependent() const noexcept { return g_.time_dependent(); }

private:
    FemSpace space_;
    RegularizedField c_, b_, g_;
    double winkler_;
    std::vector<DiracAtom> point_loads_;
    BandedMatrix mass_, bending_, winkler_matrix_;
    BandedMatrix static_axial_;
    Vector static_load_;
};

}  // namespace beamreg
