//! Gaussian quadrature: Gauss-Hermite on the line, tensor rules on slice
//! planes with the Gaussian weight, product rules on the sphere of imaginary
//! units, and the inner products built from them.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::series::{PolySliceSeries, SliceSeries};

pub const MAX_LINE_NODES: usize = 200;
pub const MAX_SPHERE_ORDER: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    /// `e^{-t²}` on the real line.
    Gaussian,
    /// Unit weight on `[-1, 1]`.
    Legendre,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub weight_kind: WeightKind,
}

impl QuadratureRule1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    /// `Σ w_i f(t_i)`; the weight function is implicit.
    pub fn integrate(&self, f: impl Fn(f64) -> Quaternion) -> Quaternion {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Quaternion::zero(), |acc, (&t, &w)| acc + f(t).scale(w))
    }

    pub fn integrate_real(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// `∫ f(t) dt` for an integrand carrying its own Gaussian decay centred
    /// near `center`: nodes are shifted to `center + s` and the weight `e^{-s²}`
    /// is divided out.
    pub fn integrate_unweighted(&self, center: f64, f: impl Fn(f64) -> Quaternion) -> Quaternion {
        debug_assert_eq!(self.weight_kind, WeightKind::Gaussian);
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Quaternion::zero(), |acc, (&s, &w)| {
                acc + f(center + s).scale(libm::exp(s * s + libm::log(w)))
            })
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson
/// shifts. `off[i]` couples rows `i` and `i + 1`.
fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&off[..n - 1]);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
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
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d
}

/// Orthonormal Hermite values `φ_0..φ_{n}` at `t` (weight `e^{-t²}`).
fn orthonormal_hermite(n: usize, t: f64) -> Vec<f64> {
    let mut v = Vec::with_capacity(n + 1);
    v.push(libm::pow(PI, -0.25));
    if n >= 1 {
        v.push(libm::sqrt(2.0) * t * v[0]);
    }
    for k in 1..n {
        let a_next = libm::sqrt((k + 1) as f64 / 2.0);
        let a_k = libm::sqrt(k as f64 / 2.0);
        let next = (t * v[k] - a_k * v[k - 1]) / a_next;
        v.push(next);
    }
    v
}

/// Gauss-Hermite rule with `n` nodes for the weight `e^{-t²}`.
///
/// Nodes are the eigenvalues of the Jacobi matrix (Golub-Welsch), polished by
/// Newton steps; weights come from the Christoffel function
/// `1 / Σ_{k<n} φ_k(t)²`, which keeps the tiny outer weights accurate to
/// relative precision.
pub fn gauss_hermite(n: usize) -> Result<QuadratureRule1D> {
    if n == 0 || n > MAX_LINE_NODES {
        return Err(Error::OutOfRange {
            what: "gauss_hermite nodes",
            value: n,
            min: 1,
            max: MAX_LINE_NODES,
        });
    }
    let off: Vec<f64> = (1..n).map(|k| libm::sqrt(k as f64 / 2.0)).collect();
    let mut nodes = tridiagonal_eigenvalues(&vec![0.0; n], &off);
    for t in nodes.iter_mut() {
        for _ in 0..3 {
            let phi = orthonormal_hermite(n, *t);
            let deriv = libm::sqrt(2.0 * n as f64) * phi[n - 1];
            if deriv == 0.0 {
                break;
            }
            *t -= phi[n] / deriv;
        }
    }
    // exact symmetry
    for i in 0..n / 2 {
        let m = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -m;
        nodes[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let weights = nodes
        .iter()
        .map(|&t| {
            let phi = orthonormal_hermite(n - 1, t);
            1.0 / phi.iter().map(|v| v * v).sum::<f64>()
        })
        .collect();
    Ok(QuadratureRule1D {
        nodes,
        weights,
        weight_kind: WeightKind::Gaussian,
    })
}

/// Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule1D> {
    if n == 0 || n > MAX_LINE_NODES {
        return Err(Error::OutOfRange {
            what: "gauss_legendre nodes",
            value: n,
            min: 1,
            max: MAX_LINE_NODES,
        });
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule1D {
        nodes,
        weights,
        weight_kind: WeightKind::Legendre,
    })
}

/// Something that can be evaluated at a quaternion, optionally declaring the
/// total polynomial degree in `(x, y)` so quadrature exactness can be checked.
pub trait SliceFunction {
    fn eval_at(&self, q: Quaternion) -> Quaternion;

    fn poly_degree(&self) -> Option<usize> {
        None
    }
}

impl SliceFunction for PolySliceSeries<f64> {
    fn eval_at(&self, q: Quaternion) -> Quaternion {
        self.eval(q)
    }
    fn poly_degree(&self) -> Option<usize> {
        Some(self.level() + self.degree())
    }
}

impl SliceFunction for SliceSeries<f64> {
    fn eval_at(&self, q: Quaternion) -> Quaternion {
        self.eval(q)
    }
    fn poly_degree(&self) -> Option<usize> {
        Some(self.degree())
    }
}

impl<F: Fn(Quaternion) -> Quaternion> SliceFunction for F {
    fn eval_at(&self, q: Quaternion) -> Quaternion {
        self(q)
    }
}

/// A declared-degree wrapper for closures that are polynomials.
pub struct Polynomial<F> {
    pub f: F,
    pub degree: usize,
}

impl<F: Fn(Quaternion) -> Quaternion> SliceFunction for Polynomial<F> {
    fn eval_at(&self, q: Quaternion) -> Quaternion {
        (self.f)(q)
    }
    fn poly_degree(&self) -> Option<usize> {
        Some(self.degree)
    }
}

/// Tensor Gauss-Hermite rule on the slice `C_I`; the weight `e^{-|q|²}` is
/// built into the weights.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceQuadrature {
    pub rule_x: QuadratureRule1D,
    pub rule_y: QuadratureRule1D,
    pub unit: ImaginaryUnit,
}

impl SliceQuadrature {
    pub fn new(n: usize, unit: ImaginaryUnit) -> Result<Self> {
        let rule = gauss_hermite(n)?;
        Ok(Self {
            rule_x: rule.clone(),
            rule_y: rule,
            unit,
        })
    }

    pub fn with_unit(&self, unit: ImaginaryUnit) -> Self {
        Self {
            unit,
            ..self.clone()
        }
    }

    pub fn exact_degree(&self) -> usize {
        self.rule_x.exact_degree().min(self.rule_y.exact_degree())
    }

    /// Nodes `x + I y` with their tensor weights.
    pub fn points(&self) -> impl Iterator<Item = (Quaternion, f64)> + '_ {
        self.rule_x
            .nodes
            .iter()
            .zip(&self.rule_x.weights)
            .flat_map(move |(&x, &wx)| {
                self.rule_y
                    .nodes
                    .iter()
                    .zip(&self.rule_y.weights)
                    .map(move |(&y, &wy)| (Quaternion::on_slice(x, y, self.unit), wx * wy))
            })
    }

    pub fn integrate(&self, f: impl Fn(Quaternion) -> Quaternion) -> Quaternion {
        self.points()
            .fold(Quaternion::zero(), |acc, (q, w)| acc + f(q).scale(w))
    }

    fn check_degree(&self, needed: Option<usize>) -> Result<()> {
        match needed {
            Some(d) if d > self.exact_degree() => Err(Error::QuadratureDegree {
                needed: d,
                exact_to: self.exact_degree(),
            }),
            _ => Ok(()),
        }
    }
}

/// `⟨f, g⟩_{C_I} = ∫_{C_I} conj(f) g e^{-|q|²} dλ_I`, conjugate on the left slot.
pub fn inner_slice<F, G>(f: &F, g: &G, quad: &SliceQuadrature) -> Result<Quaternion>
where
    F: SliceFunction + ?Sized,
    G: SliceFunction + ?Sized,
{
    let needed = f.poly_degree().zip(g.poly_degree()).map(|(a, b)| a + b);
    quad.check_degree(needed)?;
    Ok(quad.integrate(|q| f.eval_at(q).conj() * g.eval_at(q)))
}

/// `⟨φ, ψ⟩_R = ∫ conj(φ) ψ dt` for integrands with Gaussian decay about `center`.
pub fn inner_real(
    phi: impl Fn(f64) -> Quaternion,
    psi: impl Fn(f64) -> Quaternion,
    rule: &QuadratureRule1D,
    center: f64,
) -> Quaternion {
    rule.integrate_unweighted(center, |t| phi(t).conj() * psi(t))
}

/// `⟨h_j, h_k⟩_R` through the `e^{-t²}` rule applied to `H_j H_k`.
pub fn hermite_fn_inner(j: usize, k: usize, rule: &QuadratureRule1D) -> Result<f64> {
    if j + k > rule.exact_degree() {
        return Err(Error::QuadratureDegree {
            needed: j + k,
            exact_to: rule.exact_degree(),
        });
    }
    Ok(rule.integrate_real(|t| {
        crate::poly::hermite_h_unchecked(j, t) * crate::poly::hermite_h_unchecked(k, t)
    }))
}

/// Product rule on the unit sphere of imaginary units.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereQuadrature {
    pub nodes: Vec<ImaginaryUnit>,
    pub weights: Vec<f64>,
    pub order: usize,
}

/// Gauss-Legendre in the polar cosine times uniform azimuth; exact for
/// spherical polynomials of degree `<= order`, weights summing to `4π`. The
/// azimuth count is even, so the node set is closed under `I ↦ -I`.
pub fn sphere_rule(order: usize) -> Result<SphereQuadrature> {
    if order > MAX_SPHERE_ORDER {
        return Err(Error::OutOfRange {
            what: "sphere order",
            value: order,
            min: 0,
            max: MAX_SPHERE_ORDER,
        });
    }
    let polar = gauss_legendre(order / 2 + 1)?;
    let n_phi = (order + 2) & !1;
    let mut nodes = Vec::with_capacity(polar.len() * n_phi);
    let mut weights = Vec::with_capacity(polar.len() * n_phi);
    for (&c, &w) in polar.nodes.iter().zip(&polar.weights) {
        let theta = libm::acos(c);
        for m in 0..n_phi {
            let phi = 2.0 * PI * (m as f64 + 0.5) / n_phi as f64;
            nodes.push(ImaginaryUnit::from_angles(theta, phi));
            weights.push(w * 2.0 * PI / n_phi as f64);
        }
    }
    Ok(SphereQuadrature {
        nodes,
        weights,
        order,
    })
}

impl SphereQuadrature {
    pub fn integrate(&self, f: impl Fn(ImaginaryUnit) -> Quaternion) -> Quaternion {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Quaternion::zero(), |acc, (u, &w)| acc + f(*u).scale(w))
    }
}

/// `⟨f, g⟩_H = ∫_S ⟨f, g⟩_{C_I} dσ(I)`.
pub fn inner_full<F, G>(
    f: &F,
    g: &G,
    sphere: &SphereQuadrature,
    template: &SliceQuadrature,
) -> Result<Quaternion>
where
    F: SliceFunction + ?Sized,
    G: SliceFunction + ?Sized,
{
    let needed = f.poly_degree().zip(g.poly_degree()).map(|(a, b)| a + b);
    template.check_degree(needed)?;
    let mut acc = Quaternion::zero();
    for (u, &w) in sphere.nodes.iter().zip(&sphere.weights) {
        let slice = template.with_unit(*u);
        acc += slice
            .integrate(|q| f.eval_at(q).conj() * g.eval_at(q))
            .scale(w);
    }
    Ok(acc)
}
