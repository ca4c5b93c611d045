//! Reproducing kernels `K_{2,k}` (exact level `k`) and `K_{1,n}` (levels
//! `0..=n`), evaluated either by the bilinear Hermite series or by the star
//! closed form, and the extended projection `P_k`.
//!
//! `K(p, q)` is S-polyregular in `p`; the reproducing pairing is
//! `f(p) = ⟨K(p, ·), f⟩_{C_I}` with the conjugate on the kernel.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::Result;
use crate::poly::HermiteTable;
use crate::quad::{SliceFunction, SliceQuadrature};
use crate::quat::Quaternion;
use crate::series::{exp_star, laguerre_star, laguerre_star_weights, PolySliceSeries};

pub const DEFAULT_SERIES_TERMS: usize = 200;
pub const DEFAULT_STAR_TERMS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    /// `K_{1,n}`: the space of all levels up to `n`.
    First,
    /// `K_{2,k}`: the space of exact level `k`.
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Series,
    Star,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub level: usize,
    pub series_terms: usize,
    pub star_terms: usize,
    pub method: Method,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, level: usize, method: Method) -> Self {
        Self {
            kind,
            level,
            series_terms: DEFAULT_SERIES_TERMS,
            star_terms: DEFAULT_STAR_TERMS,
            method,
        }
    }
}

/// A kernel value with an a-posteriori bound on the truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue {
    pub value: Quaternion,
    pub tail: f64,
}

/// `e^{|q|²} - Σ_{j ≤ J} |Ĥ_{j,k}(q)|²`, the unsummed part of the identity
/// `Σ_j |H^Q_{j,k}(q)|² / (j! k!) = e^{|q|²}`.
fn series_remainder(table: &HermiteTable, k: usize, q: Quaternion, transpose: bool) -> f64 {
    let partial: f64 = (0..=table_len(table, transpose))
        .map(|j| {
            let h = if transpose { table.get(k, j) } else { table.get(j, k) };
            h.norm_sqr()
        })
        .sum();
    (libm::exp(q.norm_sqr()) - partial).max(0.0)
}

fn table_len(table: &HermiteTable, transpose: bool) -> usize {
    if transpose {
        table.kmax()
    } else {
        table.jmax()
    }
}

/// `K_{2,k}(p, q) = (1/(π k!)) Σ_{j ≤ J} H^Q_{j,k}(q) H^Q_{k,j}(p) / j!`, in that
/// factor order.
pub fn k2_series(k: usize, p: Quaternion, q: Quaternion, terms: usize) -> KernelValue {
    let tq = HermiteTable::new(terms, k, q);
    let tp = HermiteTable::new(k, terms, p);
    k2_series_tables(k, &tp, &tq, p, q)
}

fn k2_series_tables(
    k: usize,
    tp: &HermiteTable,
    tq: &HermiteTable,
    p: Quaternion,
    q: Quaternion,
) -> KernelValue {
    let terms = tq.jmax();
    let mut sum = Quaternion::zero();
    for j in 0..=terms {
        sum += tq.get(j, k) * tp.get(k, j);
    }
    let tail = libm::sqrt(series_remainder(tq, k, q, false) * series_remainder(tp, k, p, true)) / PI;
    KernelValue {
        value: sum.scale(1.0 / PI),
        tail,
    }
}

/// The star closed form `(1/π) e_*^{[p̄,q]} ⋆ L^{(γ)}_{⋆n}(|p - q|²_⋆)` assembled
/// once for a fixed `q` as a series in `p`.
#[derive(Clone, Debug)]
pub struct StarKernel {
    series: PolySliceSeries,
    q: Quaternion,
    terms: usize,
    weights: alloc::vec::Vec<f64>,
}

impl StarKernel {
    /// `K_{2,k}(·, q)`.
    pub fn second(k: usize, q: Quaternion, terms: usize) -> Self {
        Self::build(k, 0.0, q, terms)
    }

    /// `K_{1,n}(·, q)`.
    pub fn first(n: usize, q: Quaternion, terms: usize) -> Self {
        Self::build(n, 1.0, q, terms)
    }

    fn build(n: usize, gamma: f64, q: Quaternion, terms: usize) -> Self {
        let series = exp_star(q, terms).star_l(&laguerre_star(n, gamma, q)).scale(1.0 / PI);
        Self {
            series,
            q,
            terms,
            weights: laguerre_star_weights(n, gamma),
        }
    }

    pub fn series(&self) -> &PolySliceSeries {
        &self.series
    }

    /// Evaluates at `p`; the tail bounds the dropped exponential terms times
    /// the size of the Laguerre factor.
    pub fn eval(&self, p: Quaternion) -> KernelValue {
        let x = p.modulus() * self.q.modulus();
        let m = self.terms + 1;
        let exp_tail = libm::exp(m as f64 * libm::log(x.max(f64::MIN_POSITIVE)) - libm::lgamma(m as f64 + 1.0) + x);
        let s = libm::pow(p.modulus() + self.q.modulus(), 2.0);
        let lag: f64 = self
            .weights
            .iter()
            .enumerate()
            .map(|(k, w)| w.abs() * libm::pow(s, k as f64))
            .sum();
        KernelValue {
            value: self.series.eval(p),
            tail: exp_tail * lag / PI,
        }
    }
}

/// `K_{2,k}(p, q)` through the star closed form.
pub fn k2_star(k: usize, p: Quaternion, q: Quaternion, terms: usize) -> KernelValue {
    StarKernel::second(k, q, terms).eval(p)
}

/// `K_{1,n}(p, q)`: the sum of `K_{2,k}` over `k <= n` on the series path, the
/// `L^{(1)}` closed form on the star path.
pub fn k1(n: usize, p: Quaternion, q: Quaternion, spec: &KernelSpec) -> KernelValue {
    match spec.method {
        Method::Series => (0..=n).fold(
            KernelValue {
                value: Quaternion::zero(),
                tail: 0.0,
            },
            |acc, k| {
                let v = k2_series(k, p, q, spec.series_terms);
                KernelValue {
                    value: acc.value + v.value,
                    tail: acc.tail + v.tail,
                }
            },
        ),
        Method::Star => StarKernel::first(n, q, spec.star_terms).eval(p),
    }
}

/// Dispatches on kind and method.
pub fn kernel(spec: &KernelSpec, p: Quaternion, q: Quaternion) -> KernelValue {
    match (spec.kind, spec.method) {
        (KernelKind::First, _) => k1(spec.level, p, q, spec),
        (KernelKind::Second, Method::Series) => k2_series(spec.level, p, q, spec.series_terms),
        (KernelKind::Second, Method::Star) => k2_star(spec.level, p, q, spec.star_terms),
    }
}

/// `P_k f(p) = ⟨K_{2,k}(p, ·), f⟩_{C_I}` by slice quadrature, with the series
/// kernel truncated at `terms`.
pub fn project<F>(k: usize, f: &F, p: Quaternion, quad: &SliceQuadrature, terms: usize) -> Result<Quaternion>
where
    F: SliceFunction + ?Sized,
{
    Projector::new(k, quad, terms).apply(f, p)
}

/// `P_k` on a fixed slice rule; the node-side Hermite columns
/// `Ĥ_{j,k}(q_i)`, `j <= terms`, are computed once.
#[derive(Clone, Debug)]
pub struct Projector {
    level: usize,
    terms: usize,
    exact_degree: usize,
    nodes: Vec<(Quaternion, f64)>,
    columns: Vec<Quaternion>,
}

impl Projector {
    pub fn new(k: usize, quad: &SliceQuadrature, terms: usize) -> Self {
        let nodes: Vec<(Quaternion, f64)> = quad.points().collect();
        let mut columns = Vec::with_capacity(nodes.len() * (terms + 1));
        for (q, _) in &nodes {
            let t = HermiteTable::new(terms, k, *q);
            columns.extend((0..=terms).map(|j| t.get(j, k)));
        }
        Self {
            level: k,
            terms,
            exact_degree: quad.exact_degree(),
            nodes,
            columns,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn apply<F: SliceFunction + ?Sized>(&self, f: &F, p: Quaternion) -> Result<Quaternion> {
        if let Some(d) = f.poly_degree() {
            // conj(H_{j,k}) f is only exact while 2 deg f fits the rule
            let needed = 2 * d.max(self.level);
            if needed > self.exact_degree {
                return Err(crate::Error::QuadratureDegree {
                    needed,
                    exact_to: self.exact_degree,
                });
            }
        }
        let k = self.level;
        let n = self.terms + 1;
        let tp = HermiteTable::new(k, self.terms, p);
        // conj(K(p, q)) = (1/π) Σ_j conj(Ĥ_{k,j}(p)) conj(Ĥ_{j,k}(q))
        let left: Vec<Quaternion> = (0..n).map(|j| tp.get(k, j).conj()).collect();
        let mut acc = Quaternion::zero();
        for (i, (q, w)) in self.nodes.iter().enumerate() {
            let col = &self.columns[i * n..(i + 1) * n];
            let mut kc = Quaternion::zero();
            for j in 0..n {
                kc += left[j] * col[j].conj();
            }
            acc += (kc * f.eval_at(*q)).scale(*w / PI);
        }
        Ok(acc)
    }
}

/// `e^{|q|²} / π`, the diagonal value of every `K_{2,k}`.
pub fn diagonal_value(q: Quaternion) -> f64 {
    libm::exp(q.norm_sqr()) / PI
}

/// `(1/π) e^{z̄ w} L_k^{(γ)}(|z - w|²)` for `z`, `w` on one slice.
pub fn same_slice_closed_form(k: usize, gamma: f64, z: Quaternion, w: Quaternion) -> Quaternion {
    let l = crate::poly::laguerre_unchecked(k, gamma, (z - w).norm_sqr());
    (z.conj() * w).exp().scale(l / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{factorial, hermite_quat, laguerre};
    use crate::quat::ImaginaryUnit;
    use crate::series::HermiteCoeffs;
    use crate::testutil::{quat, rng, unit};

    fn normalization(j: usize, k: usize) -> f64 {
        libm::sqrt(factorial(j) * factorial(k))
    }

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        a.max_abs_diff(&b) <= tol * (1.0 + b.modulus())
    }

    #[test]
    fn spec_values() {
        let z = Quaternion::on_slice(0.4, -0.7, ImaginaryUnit::J);
        let w = Quaternion::on_slice(-0.2, 1.1, ImaginaryUnit::J);
        let expect = (z.conj() * w).exp().scale(1.0 / PI);
        assert!(close(k2_series(0, z, w, 200).value, expect, 1e-13));
        assert!(close(k2_star(0, z, w, 40).value, expect, 1e-13));

        let mut r = rng(5);
        for _ in 0..10 {
            let q = quat(&mut r, 2.0);
            for k in 0..5 {
                let d = k2_series(k, q, q, 200);
                assert!(close(d.value, Quaternion::from_real(diagonal_value(q)), 1e-12));
                let s = k2_star(k, q, q, 40);
                assert!(close(s.value, Quaternion::from_real(diagonal_value(q)), 1e-12));
                let at0 = k2_series(k, Quaternion::zero(), q, 200).value;
                let lag = laguerre(k, 0.0, q.norm_sqr()).unwrap() / PI;
                assert!(close(at0, Quaternion::from_real(lag), 1e-12));
            }
        }
        assert!(close(k2_star(0, Quaternion::zero(), Quaternion::zero(), 40).value, Quaternion::from_real(1.0 / PI), 1e-15));
    }

    #[test]
    fn same_slice_paths_agree_with_closed_form() {
        let mut r = rng(6);
        for _ in 0..10 {
            let u = unit(&mut r);
            let z = Quaternion::on_slice(quat(&mut r, 1.0).w, quat(&mut r, 1.0).x, u);
            let w = Quaternion::on_slice(quat(&mut r, 1.0).w, quat(&mut r, 1.0).x, u);
            for k in 0..=4 {
                let c = same_slice_closed_form(k, 0.0, z, w);
                assert!(close(k2_series(k, z, w, 200).value, c, 1e-12));
                assert!(close(k2_star(k, z, w, 40).value, c, 1e-12));
            }
            let spec = KernelSpec::new(KernelKind::First, 1, Method::Series);
            let c = same_slice_closed_form(1, 1.0, z, w);
            assert!(close(k1(1, z, w, &spec).value, c, 1e-12));
            let star = KernelSpec { method: Method::Star, ..spec };
            assert!(close(k1(1, z, w, &star).value, c, 1e-12));
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let mut r = rng(7);
        for _ in 0..10 {
            let p = quat(&mut r, 1.5);
            let q = quat(&mut r, 1.5);
            for k in 0..=3 {
                let a = k2_series(k, p, q, 200).value.conj();
                let b = k2_series(k, q, p, 200).value;
                assert!(close(a, b, 1e-12));
                let a = k2_star(k, p, q, 40).value.conj();
                let b = k2_star(k, q, p, 40).value;
                assert!(close(a, b, 1e-12));
            }
        }
    }

    #[test]
    fn first_kind_is_sum_of_second_kind() {
        let mut r = rng(8);
        for _ in 0..10 {
            let p = quat(&mut r, 1.5);
            let q = quat(&mut r, 1.5);
            for method in [Method::Series, Method::Star] {
                let spec = KernelSpec::new(KernelKind::First, 0, method);
                assert_eq!(k1(0, p, q, &spec).value, kernel(&KernelSpec::new(KernelKind::Second, 0, method), p, q).value);
                for n in 1..=3 {
                    let diff = k1(n, p, q, &spec).value - k1(n - 1, p, q, &spec).value;
                    let single = kernel(&KernelSpec::new(KernelKind::Second, n, method), p, q).value;
                    assert!(close(diff, single, 1e-11));
                }
            }
            let spec = KernelSpec::new(KernelKind::First, 2, Method::Series);
            let d = k1(2, q, q, &spec).value;
            assert!(close(d, Quaternion::from_real(3.0 * diagonal_value(q)), 1e-12));
        }
    }

    #[test]
    fn tail_estimates_shrink() {
        let p = Quaternion::new(0.5, 0.3, -0.8, 0.1);
        let q = Quaternion::new(-0.4, 1.0, 0.2, 0.6);
        assert!(k2_series(2, p, q, 10).tail > k2_series(2, p, q, 30).tail);
        assert!(k2_series(2, p, q, 200).tail < 1e-12);
        assert!(k2_star(2, p, q, 10).tail > k2_star(2, p, q, 30).tail);
        assert!(k2_star(2, p, q, 40).tail < 1e-20);
    }

    #[test]
    fn generating_identity_on_a_slice() {
        let mut r = rng(9);
        let u = unit(&mut r);
        for _ in 0..5 {
            let z = Quaternion::on_slice(quat(&mut r, 1.0).w, quat(&mut r, 1.0).x, u);
            let w = Quaternion::on_slice(quat(&mut r, 1.0).w, quat(&mut r, 1.0).x, u);
            let theta: f64 = quat(&mut r, 3.0).w;
            let t = Quaternion::on_slice(libm::cos(theta), libm::sin(theta), u);
            for (k, k2) in [(0, 0), (1, 2), (3, 1), (2, 2)] {
                let tz = HermiteTable::new(k, 200, z);
                let tw = HermiteTable::new(200, k2, w);
                let mut lhs = Quaternion::zero();
                let mut tj = Quaternion::one();
                for j in 0..=200 {
                    lhs += tj * tz.get(k, j) * tw.get(j, k2);
                    tj *= t;
                }
                lhs = lhs.scale(normalization(k, k2));
                let rhs = (-t).powi(k2 as u32)
                    * hermite_quat(k, k2, z - t * w).unwrap()
                    * (t * z.conj() * w).exp();
                assert!(close(lhs, rhs, 1e-8), "{k},{k2}");
            }
        }
    }

    #[test]
    fn projection_reproduces_and_separates_levels() {
        let quad = SliceQuadrature::new(40, ImaginaryUnit::K).unwrap();
        let mut r = rng(10);
        let k = 2;
        let mut coeffs = HermiteCoeffs::zeros(4, 3);
        for j in 0..=4 {
            coeffs.set(j, k, quat(&mut r, 1.0));
        }
        coeffs.set(1, 0, quat(&mut r, 1.0));
        coeffs.set(2, 3, quat(&mut r, 1.0));
        let f = PolySliceSeries::from_hermite_basis(&coeffs);
        let mut level_k = HermiteCoeffs::zeros(4, 3);
        for j in 0..=4 {
            level_k.set(j, k, coeffs.get(j, k));
        }
        let fk = PolySliceSeries::from_hermite_basis(&level_k);
        for _ in 0..5 {
            let p = quat(&mut r, 1.5);
            let v = project(k, &f, p, &quad, 200).unwrap();
            assert!(close(v, fk.eval(p), 1e-9));
        }
        let qbar = PolySliceSeries::<f64>::hermite_q(0, 1);
        let v = project(0, &qbar, Quaternion::new(0.3, 0.2, 0.1, 0.5), &quad, 200).unwrap();
        assert!(v.modulus() < 1e-12);
        let small = SliceQuadrature::new(4, ImaginaryUnit::I).unwrap();
        assert!(project(0, &f, Quaternion::zero(), &small, 50).is_err());
    }
}
