#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "swt/stable.hpp"

namespace swt {

/// Pair of kernels (f, g) over one shared atomic control measure, together
/// with the stability index. The substrate for all dependence computations.
struct KernelPair {
    DiscreteKernel f;
    DiscreteKernel g;
    double alpha = 1.5;

    /// Validates shared atoms, alpha in (0,2), and nonzero norms.
    void validate() const;

    double norm_f() const;     // ||f||_alpha
    double norm_g() const;     // ||g||_alpha
    double norm_f_pow() const; // ||f||_alpha^alpha
    double norm_g_pow() const; // ||g||_alpha^alpha
};

/// The asymmetric first dependence measure: sum_i m_i |f_i|^(alpha-1) |g_i|.
/// Requires alpha in (1,2).
double m1_star(const KernelPair& p);

/// Symmetric first measure m1_star(f,g) + m1_star(g,f). Requires alpha in (1,2).
double m1(const KernelPair& p);

/// Second measure: sum_i m_i |f_i g_i|^(alpha/2). Defined for alpha in (0,2).
double m2(const KernelPair& p);

/// U(u,v) = E e^{i(u xi + v eta)} - E e^{iu xi} E e^{iv eta}
///        = exp(-||uf+vg||^alpha) - exp(-||uf||^alpha - ||vg||^alpha).
double u_measure(const KernelPair& p, double u, double v);

/// I(u,v) = ||uf+vg||^alpha - ||uf||^alpha - ||vg||^alpha. |U| <= |I| pointwise.
double i_measure(const KernelPair& p, double u, double v);

/// Codifference -I(1,-1).
double codifference(const KernelPair& p);

/// Exact partial derivative dU/du on finite kernels. Requires alpha in (1,2).
double du_measure(const KernelPair& p, double u, double v);

/// Exact mixed derivative d2U/du dv. Requires alpha in (1,2) and that no atom
/// with f_i g_i != 0 has u f_i + v g_i = 0 (throws SingularityError naming
/// the atom otherwise). Atoms where f_i or g_i vanishes contribute zero to
/// the singular term.
double dudv_measure(const KernelPair& p, double u, double v);

/// Selects one of the three envelope bounds on |U|.
enum class UBound {
    Plain,     // 2|uv|^{a/2} m2
    Gaussian,  // ... * exp(-(|u|^{a/2}||f||^{a/2} - |v|^{a/2}||g||^{a/2})^2)
    Coercive,  // ... * exp(-2(||f||^{a/2}||g||^{a/2} - m2)|uv|^{a/2})
};

/// max over the grid of |U(u,v)| / bound(u,v); ratios 0/0 count as 0.
double u_envelope_ratio(const KernelPair& p, const std::vector<std::pair<double, double>>& grid,
                     UBound bound);

/// Relative Hoelder gap: 1 - m2 / (||f||^{a/2} ||g||^{a/2}). The
/// non-degeneracy constant eps1; positive iff |f|, |g| are not proportional
/// on the shared support.
double estimate_eps1(const KernelPair& p);

/// Joint-norm coercivity constant: the infimum of ||uf+vg||^alpha over the
/// set { |u|^a ||f||^a + |v|^a ||g||^a = 1 }, located by a dense angular grid
/// plus golden-section refinement. Positive iff the pair is jointly
/// non-degenerate in every direction.
double estimate_eps2(const KernelPair& p, std::size_t grid_points = 512,
                     double refine_tol = 1e-8);

/// Change of representation: f_i -> f_i/h_i, g_i -> g_i/h_i,
/// m_i -> |h_i|^alpha m_i, atoms reordered by the permutation. All dependence
/// quantities are invariant under this map.
KernelPair representation_transform(const KernelPair& p, const std::vector<double>& h,
                                    const std::vector<std::size_t>& relabel);

/// Summary of every dependence quantity of a pair.
struct DependenceReport {
    double m1_star_fg = 0.0;
    double m1_star_gf = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double codifference = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double alpha = 0.0;
};

DependenceReport dependence_report(const KernelPair& p);

} // namespace swt
