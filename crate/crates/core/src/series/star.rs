//! Star products and the star-kernel building blocks.

use alloc::vec;
use alloc::vec::Vec;

use super::{Grid, PolySliceSeries, RightPolySeries, SliceSeries};
use crate::quat::Quaternion;
use crate::scalar::Scalar;

impl<T: Scalar> SliceSeries<T> {
    /// Left star product: Cauchy convolution `c_n = Σ_k a_k b_{n-k}`,
    /// truncated at the sum of the degrees.
    pub fn star(&self, other: &Self) -> Self {
        let mut out = vec![Quaternion::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (m, b) in other.coeffs.iter().enumerate() {
                out[k + m] += *a * *b;
            }
        }
        Self::new(out)
    }

    /// `n`-fold star power by repeated squaring.
    pub fn star_pow(&self, n: usize) -> Self {
        let mut acc = Self::constant(Quaternion::one());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.star(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.star(&base);
            }
        }
        acc
    }
}

/// Coefficient convolution shared by the left and right products; only the
/// meaning of the grid differs.
fn convolve<T: Scalar>(a: &Grid<T>, b: &Grid<T>) -> Grid<T> {
    let mut out = Grid::zeros(a.levels + b.levels - 2, a.width + b.width - 2);
    for k in 0..a.levels {
        for j in 0..a.width {
            let x = a.get(k, j);
            if x.is_zero() {
                continue;
            }
            for kk in 0..b.levels {
                for jj in 0..b.width {
                    *out.slot(k + kk, j + jj) += x * b.get(kk, jj);
                }
            }
        }
    }
    out
}

impl<T: Scalar> PolySliceSeries<T> {
    /// `f ⋆_L g = Σ_{j,k} q̄^{j+k} (φ_j ⋆ ψ_k)`.
    pub fn star_l(&self, other: &Self) -> Self {
        Self {
            grid: convolve(&self.grid, &other.grid),
        }
    }

    /// Pointwise conjugate, which lands in the right form:
    /// `conj(q̄^k q^j c) = conj(c) q^k q̄^j`.
    pub fn conj(&self) -> RightPolySeries<T> {
        let mut out = RightPolySeries::zeros(self.degree(), self.level());
        for k in 0..self.grid.levels {
            for j in 0..self.grid.width {
                *out.grid.slot(j, k) = self.grid.get(k, j).conj();
            }
        }
        out
    }
}

impl<T: Scalar> RightPolySeries<T> {
    /// `f ⋆_R g = Σ_{j,k} (φ_j ⋆_R ψ_k) q̄^{j+k}`.
    pub fn star_r(&self, other: &Self) -> Self {
        Self {
            grid: convolve(&self.grid, &other.grid),
        }
    }

    pub fn conj(&self) -> PolySliceSeries<T> {
        let mut out = PolySliceSeries::zeros(self.degree(), self.level());
        for k in 0..self.grid.levels {
            for j in 0..self.grid.width {
                *out.grid.slot(j, k) = self.grid.get(k, j).conj();
            }
        }
        out
    }
}

/// One summand `coeff · p̄^{m-j} h_q^{m⋆}(p) q̄^j` of `S_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StarKernelTerm {
    pub m: usize,
    pub j: usize,
    pub coeff: i64,
}

/// `S_k = Σ_j (-1)^j C(k,j) p̄^{k-j} h_q^{k⋆}(p) q̄^j` as a term list.
pub fn s_k_terms(k: usize) -> Vec<StarKernelTerm> {
    let mut c: i64 = 1;
    (0..=k)
        .map(|j| {
            if j > 0 {
                c = c * (k - j + 1) as i64 / j as i64;
            }
            StarKernelTerm {
                m: k,
                j,
                coeff: if j % 2 == 0 { c } else { -c },
            }
        })
        .collect()
}

/// `S_k(p̄, p; q, q̄)` as a series in `p`, with `h_q(p) = p - q`.
pub fn s_k_build<T: Scalar>(k: usize, q: Quaternion<T>) -> PolySliceSeries<T> {
    let h = SliceSeries::new(vec![-q, Quaternion::one()]).star_pow(k);
    let qb = q.conj();
    let mut out = PolySliceSeries::zeros(k, k);
    for term in s_k_terms(k) {
        let right = qb.powi(term.j as u32).scale(T::from_i64(term.coeff));
        for (n, a) in h.coeffs().iter().enumerate() {
            out.add_at(term.m - term.j, n, *a * right);
        }
    }
    out
}

/// Real weights `w_k` with `L_{⋆n}^{(γ)} = Σ_k w_k S_k`:
/// `w_k = Γ(γ+n+1) / (Γ(n-k+1) Γ(γ+k+1)) · (-1)^k / k!`.
pub fn laguerre_star_weights<T: Scalar>(n: usize, gamma: T) -> Vec<T> {
    (0..=n)
        .map(|k| {
            // Γ(γ+n+1)/Γ(γ+k+1) / (n-k)! = Π_{i=1}^{n-k} (γ+k+i)/i
            let mut w = T::one();
            for i in 1..=(n - k) {
                w = w * (gamma + T::from_i64((k + i) as i64)) / T::from_i64(i as i64);
            }
            let mut k_fact = T::one();
            for i in 1..=k {
                k_fact = k_fact * T::from_i64(i as i64);
            }
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            sign * w / k_fact
        })
        .collect()
}

/// `L_{⋆n}^{(γ)}(|p - q|²_⋆)` as a series in `p`.
pub fn laguerre_star<T: Scalar>(n: usize, gamma: T, q: Quaternion<T>) -> PolySliceSeries<T> {
    laguerre_star_weights(n, gamma)
        .into_iter()
        .enumerate()
        .fold(PolySliceSeries::zeros(n, n), |acc, (k, w)| {
            acc.add(&s_k_build(k, q).scale(w))
        })
}

/// `e_*^{[p̄, q]} = Σ_{k ≤ K} p̄^k q^k / k!` as a series in `p`.
pub fn exp_star<T: Scalar>(q: Quaternion<T>, terms: usize) -> PolySliceSeries<T> {
    let mut out = PolySliceSeries::zeros(terms, 0);
    let mut c = Quaternion::one();
    for k in 0..=terms {
        if k > 0 {
            c = (c * q).scale(T::one() / T::from_i64(k as i64));
        }
        out.set(k, 0, c);
    }
    out
}
