//! Segal-Bargmann kernels `B_{2,k}` and `B_{1,n}` and the transforms from
//! `L²(ℝ; dt)` into the S-polyregular Bargmann spaces.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::poly::{factorial, HermiteTable};
use crate::quad::{QuadratureRule1D, SliceQuadrature};
use crate::quat::{ImaginaryUnit, Quaternion};

pub const DEFAULT_LINE_NODES: usize = 80;

/// `H_k(x) / sqrt(2^k k!)` by the normalized recurrence.
fn hermite_normalized(k: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for n in 0..k {
        let next = (SQRT_2 * x * cur - libm::sqrt(n as f64) * prev) / libm::sqrt((n + 1) as f64);
        prev = cur;
        cur = next;
    }
    cur
}

/// `π^{-3/4} (2^k k!)^{-1/2} exp(-(t² + q̄²)/2 + √2 q̄ t) H_k(√2 Re q - t)`.
pub fn b2_kernel(k: usize, t: f64, q: Quaternion) -> Quaternion {
    let qb = q.conj();
    let exponent = (qb * qb + Quaternion::from_real(t * t)).scale(-0.5) + qb.scale(SQRT_2 * t);
    exponent
        .exp()
        .scale(libm::pow(PI, -0.75) * hermite_normalized(k, SQRT_2 * q.w - t))
}

/// `Σ_{k ≤ n} B_{2,k}(t; q)`.
pub fn b1_kernel(n: usize, t: f64, q: Quaternion) -> Quaternion {
    (0..=n).fold(Quaternion::zero(), |acc, k| acc + b2_kernel(k, t, q))
}

/// The integrand factor of the explicit transform display,
/// `π^{-3/4} (2^k k!)^{-1/2} exp(-(t² + q²)/2 + √2 q t) H_k(√2 Re q - t)`;
/// it equals `conj(B_{2,k}(t; q))`.
pub fn transform_factor(k: usize, t: f64, q: Quaternion) -> Quaternion {
    let exponent = (q * q + Quaternion::from_real(t * t)).scale(-0.5) + q.scale(SQRT_2 * t);
    exponent
        .exp()
        .scale(libm::pow(PI, -0.75) * hermite_normalized(k, SQRT_2 * q.w - t))
}

/// A function on the line: a closure, a Hermite function `h_j`, or samples on
/// the nodes of a Gauss-Hermite rule.
pub enum LineFunction {
    Callable(Box<dyn Fn(f64) -> Quaternion + Send + Sync>),
    /// `h_j(t) α = e^{-t²/2} H_j(t) α`.
    Hermite { j: usize, coeff: Quaternion },
    /// `values[i] = φ(nodes[i])`.
    Sampled {
        nodes: Vec<f64>,
        values: Vec<Quaternion>,
    },
}

impl LineFunction {
    pub fn hermite(j: usize) -> Self {
        LineFunction::Hermite {
            j,
            coeff: Quaternion::one(),
        }
    }

    pub fn callable(f: impl Fn(f64) -> Quaternion + Send + Sync + 'static) -> Self {
        LineFunction::Callable(Box::new(f))
    }

    /// Samples taken on the rule's nodes.
    pub fn sampled(rule: &QuadratureRule1D, values: Vec<Quaternion>) -> Result<Self> {
        if values.len() != rule.len() {
            return Err(Error::MisalignedSamples {
                expected: rule.len(),
                found: values.len(),
            });
        }
        Ok(LineFunction::Sampled {
            nodes: rule.nodes.clone(),
            values,
        })
    }

    /// Evaluation away from sample nodes is only defined for the analytic forms.
    pub fn eval(&self, t: f64) -> Option<Quaternion> {
        match self {
            LineFunction::Callable(f) => Some(f(t)),
            LineFunction::Hermite { j, coeff } => {
                Some(coeff.scale(libm::exp(-t * t / 2.0) * crate::poly::hermite_h_unchecked(*j, t)))
            }
            LineFunction::Sampled { .. } => None,
        }
    }

    /// `φ α`.
    pub fn mul_right(self, a: Quaternion) -> Self {
        match self {
            LineFunction::Callable(f) => LineFunction::Callable(Box::new(move |t| f(t) * a)),
            LineFunction::Hermite { j, coeff } => LineFunction::Hermite { j, coeff: coeff * a },
            LineFunction::Sampled { nodes, values } => LineFunction::Sampled {
                nodes,
                values: values.into_iter().map(|v| v * a).collect(),
            },
        }
    }
}

/// `[B_{2,k} φ](q) = ∫ conj(B_{2,k}(t; q)) φ(t) dt`.
///
/// Analytic `φ` is integrated on the rule shifted to `Re(q)/√2`, where the
/// Gaussian envelope of the integrand peaks. Sampled `φ` must sit on the
/// rule's nodes and is integrated unshifted. For `φ = h_j` the rule must have
/// at least `2 (j + k)` nodes.
pub fn transform(k: usize, phi: &LineFunction, q: Quaternion, rule: &QuadratureRule1D) -> Result<Quaternion> {
    transform_with(|t| transform_factor(k, t, q), k, phi, q, rule)
}

/// `[B_{1,n} φ](q)`, the transform against `Σ_{k ≤ n} B_{2,k}`.
pub fn transform_first(n: usize, phi: &LineFunction, q: Quaternion, rule: &QuadratureRule1D) -> Result<Quaternion> {
    transform_with(|t| b1_kernel(n, t, q).conj(), n, phi, q, rule)
}

fn transform_with(
    factor: impl Fn(f64) -> Quaternion,
    k: usize,
    phi: &LineFunction,
    q: Quaternion,
    rule: &QuadratureRule1D,
) -> Result<Quaternion> {
    match phi {
        LineFunction::Sampled { nodes, values } => {
            if nodes.len() != rule.len() || nodes.iter().zip(&rule.nodes).any(|(a, b)| a != b) {
                return Err(Error::MisalignedSamples {
                    expected: rule.len(),
                    found: nodes.len(),
                });
            }
            Ok(nodes
                .iter()
                .zip(values)
                .zip(&rule.weights)
                .fold(Quaternion::zero(), |acc, ((&t, v), &w)| {
                    acc + (factor(t) * *v).scale(w * libm::exp(t * t))
                }))
        }
        LineFunction::Hermite { j, .. } if 2 * (j + k) > rule.len() => Err(Error::QuadratureDegree {
            needed: j + k,
            exact_to: rule.len() / 2,
        }),
        _ => {
            let center = q.w / SQRT_2;
            Ok(rule.integrate_unweighted(center, |t| factor(t) * phi.eval(t).unwrap()))
        }
    }
}

/// `‖B_{2,k}(·; q)‖_ℝ` by quadrature centred on the kernel's envelope at `√2 Re q`.
pub fn kernel_norm(k: usize, q: Quaternion, rule: &QuadratureRule1D) -> f64 {
    let v = rule.integrate_unweighted(SQRT_2 * q.w, |t| Quaternion::from_real(b2_kernel(k, t, q).norm_sqr()));
    libm::sqrt(v.w)
}

/// `e^{|q|²/2} / √π`.
pub fn kernel_norm_closed_form(q: Quaternion) -> f64 {
    libm::exp(q.norm_sqr() / 2.0) / libm::sqrt(PI)
}

/// `π^{-1/4} √(2^j / k!) H^Q_{j,k}(q)`, the image of `h_j` under `B_{2,k}`.
pub fn basis_image(j: usize, k: usize, q: Quaternion) -> Quaternion {
    let table = HermiteTable::new(j, k, q);
    // H^Q_{j,k} = Ĥ_{j,k} sqrt(j! k!)
    table
        .get(j, k)
        .scale(libm::pow(PI, -0.25) * libm::sqrt(libm::pow(2.0, j as f64) * factorial(j)))
}

/// Gram matrices of `{h_j}` on the line and of `{B_{2,k} h_j}` on one slice.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometryReport {
    pub level: usize,
    pub jmax: usize,
    /// Row-major `(jmax+1)²` Gram matrix of the images under `⟨·,·⟩_{C_I}`.
    pub slice_gram: Vec<Quaternion>,
    /// `‖h_j‖²_ℝ = √π 2^j j!`.
    pub line_gram_diagonal: Vec<f64>,
    /// Largest entry of `|G_slice - G_line| / sqrt(G_line[j] G_line[j'])`.
    pub max_deviation: f64,
}

/// Compares the two Gram matrices. Images are computed by `transform` on
/// `line_rule`; the slice rule is sized to integrate their products exactly.
pub fn isometry_check(k: usize, jmax: usize, unit: ImaginaryUnit, line_rule: &QuadratureRule1D) -> Result<IsometryReport> {
    let slice = SliceQuadrature::new(jmax + k + 1, unit)?;
    let phis: Vec<LineFunction> = (0..=jmax).map(LineFunction::hermite).collect();
    let mut images: Vec<(f64, Vec<Quaternion>)> = Vec::new();
    for (q, w) in slice.points() {
        let row = phis
            .iter()
            .map(|phi| transform(k, phi, q, line_rule))
            .collect::<Result<Vec<_>>>()?;
        images.push((w, row));
    }
    let n = jmax + 1;
    let line: Vec<f64> = (0..n)
        .map(|j| libm::sqrt(PI) * libm::pow(2.0, j as f64) * factorial(j))
        .collect();
    let mut gram = alloc::vec![Quaternion::zero(); n * n];
    let mut max_deviation: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let g = images
                .iter()
                .fold(Quaternion::zero(), |acc, (w, row)| acc + (row[a].conj() * row[b]).scale(*w));
            gram[a * n + b] = g;
            let expect = if a == b { line[a] } else { 0.0 };
            let dev = (g - Quaternion::from_real(expect)).modulus() / libm::sqrt(line[a] * line[b]);
            max_deviation = max_deviation.max(dev);
        }
    }
    Ok(IsometryReport {
        level: k,
        jmax,
        slice_gram: gram,
        line_gram_diagonal: line,
        max_deviation,
    })
}

/// `‖φ‖_ℝ` for an analytic line function.
pub fn line_norm(phi: &LineFunction, rule: &QuadratureRule1D) -> f64 {
    match phi {
        LineFunction::Sampled { nodes, values } => libm::sqrt(
            nodes
                .iter()
                .zip(values)
                .zip(&rule.weights)
                .map(|((&t, v), &w)| w * libm::exp(t * t) * v.norm_sqr())
                .sum(),
        ),
        _ => libm::sqrt(rule.integrate_unweighted(0.0, |t| Quaternion::from_real(phi.eval(t).unwrap().norm_sqr())).w),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{hermite_h, hermite_quat};
    use crate::quad::gauss_hermite;
    use crate::testutil::{quat, rng};

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        a.max_abs_diff(&b) <= tol * (1.0 + b.modulus())
    }

    #[test]
    fn kernel_values() {
        let c = libm::pow(PI, -0.75);
        assert!((b2_kernel(0, 0.0, Quaternion::zero()).w - c).abs() < 1e-15);
        for k in 0..6 {
            for t in [-1.3, 0.0, 0.4, 2.2] {
                let expect = c / libm::sqrt(libm::pow(2.0, k as f64) * factorial(k))
                    * libm::exp(-t * t / 2.0)
                    * hermite_h(k, -t).unwrap();
                assert!((b2_kernel(k, t, Quaternion::zero()).w - expect).abs() < 1e-13);
            }
        }
        assert!((b1_kernel(1, 0.0, Quaternion::zero()).w - c).abs() < 1e-15);
        let q = Quaternion::new(0.3, -0.5, 0.2, 0.9);
        assert_eq!(b1_kernel(0, 0.7, q), b2_kernel(0, 0.7, q));
        let sum = (0..=3).fold(Quaternion::zero(), |a, k| a + b2_kernel(k, 0.7, q));
        assert!(close(b1_kernel(3, 0.7, q), sum, 1e-15));
    }

    #[test]
    fn both_transform_displays_agree() {
        let mut r = rng(40);
        for _ in 0..20 {
            let q = quat(&mut r, 2.0);
            let t = quat(&mut r, 3.0).w;
            for k in 0..5 {
                assert!(close(b2_kernel(k, t, q).conj(), transform_factor(k, t, q), 1e-13));
            }
        }
    }

    #[test]
    fn norm_identity() {
        let rule = gauss_hermite(40).unwrap();
        let mut r = rng(41);
        for _ in 0..10 {
            let q = quat(&mut r, 2.0);
            for k in 0..=6 {
                let n = kernel_norm(k, q, &rule);
                let expect = kernel_norm_closed_form(q);
                assert!((n - expect).abs() < 1e-12 * expect);
                let diag = crate::kernels::k2_series(k, q, q, 200).value.w;
                assert!((n * n - diag).abs() < 1e-12 * diag);
            }
        }
    }

    #[test]
    fn basis_mapping() {
        let rule = gauss_hermite(DEFAULT_LINE_NODES).unwrap();
        assert!((transform(0, &LineFunction::hermite(0), Quaternion::zero(), &rule).unwrap().w - libm::pow(PI, -0.25)).abs() < 1e-14);
        let mut r = rng(42);
        for _ in 0..5 {
            let q = quat(&mut r, 2.0);
            for j in 0..=6 {
                for k in 0..=6 {
                    let v = transform(k, &LineFunction::hermite(j), q, &rule).unwrap();
                    let expect = hermite_quat(j, k, q)
                        .unwrap()
                        .scale(libm::pow(PI, -0.25) * libm::sqrt(libm::pow(2.0, j as f64) / factorial(k)));
                    assert!(close(v, expect, 1e-10), "j={j} k={k}");
                    assert!(close(basis_image(j, k, q), expect, 1e-10));
                }
            }
        }
    }

    #[test]
    fn transform_is_right_linear_and_bounded() {
        let rule = gauss_hermite(DEFAULT_LINE_NODES).unwrap();
        let mut r = rng(43);
        for _ in 0..10 {
            let a = quat(&mut r, 2.0);
            let b = quat(&mut r, 1.0);
            let phi = move |t: f64| (Quaternion::one() + b.scale(t)).scale(libm::exp(-t * t / 2.0));
            let q = quat(&mut r, 2.0);
            let plain = transform(2, &LineFunction::callable(phi), q, &rule).unwrap();
            let scaled = transform(2, &LineFunction::callable(phi).mul_right(a), q, &rule).unwrap();
            assert!(close(scaled, plain * a, 1e-12));
            let norm = line_norm(&LineFunction::callable(phi), &rule);
            assert!(plain.modulus() <= kernel_norm_closed_form(q) * norm * (1.0 + 1e-12));
        }
    }

    #[test]
    fn first_kind_transform_is_sum_of_levels() {
        let rule = gauss_hermite(DEFAULT_LINE_NODES).unwrap();
        let q = Quaternion::new(0.4, 0.1, -0.7, 0.3);
        for j in 0..4 {
            let phi = LineFunction::hermite(j);
            let first = transform_first(3, &phi, q, &rule).unwrap();
            let sum = (0..=3).fold(Quaternion::zero(), |acc, k| acc + transform(k, &phi, q, &rule).unwrap());
            assert!(close(first, sum, 1e-12));
        }
    }

    #[test]
    fn sampled_functions() {
        let rule = gauss_hermite(60).unwrap();
        let values = rule.nodes.iter().map(|&t| LineFunction::hermite(2).eval(t).unwrap()).collect();
        let phi = LineFunction::sampled(&rule, values).unwrap();
        let q = Quaternion::new(0.2, 0.3, 0.0, -0.4);
        let a = transform(1, &phi, q, &rule).unwrap();
        let b = transform(1, &LineFunction::hermite(2), q, &rule).unwrap();
        assert!(close(a, b, 1e-10));
        let other = gauss_hermite(50).unwrap();
        assert!(matches!(transform(1, &phi, q, &other), Err(Error::MisalignedSamples { .. })));
        assert!(LineFunction::sampled(&rule, alloc::vec![Quaternion::zero(); 3]).is_err());
        let small = gauss_hermite(4).unwrap();
        assert!(transform(3, &LineFunction::hermite(3), q, &small).is_err());
    }

    #[test]
    fn isometry() {
        let rule = gauss_hermite(DEFAULT_LINE_NODES).unwrap();
        let r = isometry_check(0, 0, ImaginaryUnit::I, &rule).unwrap();
        assert!(r.max_deviation < 1e-14);
        for k in [1, 3] {
            let r = isometry_check(k, 5, ImaginaryUnit::J, &rule).unwrap();
            assert!(r.max_deviation < 1e-9, "k={k}: {}", r.max_deviation);
        }
    }
}
