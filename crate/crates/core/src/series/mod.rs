//! Truncated slice-regular and S-polyregular series.
//!
//! A [`PolySliceSeries`] stores `f(q) = Σ_{k,j} q̄^k q^j c[k][j]` with the
//! quaternion coefficient on the right. Row `k` is the coefficient sequence of
//! the slice-regular component `φ_k`, so `f = Σ_k q̄^k φ_k(q)`. Since `q` and
//! `q̄` commute, evaluation is unambiguous; only the coefficient position
//! matters. [`RightPolySeries`] is the mirror form `Σ c q^j q̄^k` used by the
//! right star product, and is never converted implicitly.

mod basis;
mod star;

pub use basis::HermiteCoeffs;
pub use star::{exp_star, laguerre_star, laguerre_star_weights, s_k_build, s_k_terms, StarKernelTerm};

use alloc::vec;
use alloc::vec::Vec;

use crate::quat::Quaternion;
use crate::scalar::Scalar;

/// `Σ_j q^j a_j`.
#[derive(Clone, Debug)]
pub struct SliceSeries<T: Scalar = f64> {
    coeffs: Vec<Quaternion<T>>,
}

impl<T: Scalar> SliceSeries<T> {
    pub fn new(coeffs: Vec<Quaternion<T>>) -> Self {
        let coeffs = if coeffs.is_empty() {
            vec![Quaternion::zero()]
        } else {
            coeffs
        };
        Self { coeffs }
    }

    pub fn constant(c: Quaternion<T>) -> Self {
        Self::new(vec![c])
    }

    /// `q^j c`.
    pub fn monomial(j: usize, c: Quaternion<T>) -> Self {
        let mut coeffs = vec![Quaternion::zero(); j + 1];
        coeffs[j] = c;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Quaternion<T>] {
        &self.coeffs
    }

    /// Truncation degree `D` (length of the stored sequence minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> Quaternion<T> {
        self.coeffs.get(j).copied().unwrap_or_else(Quaternion::zero)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(Quaternion::zero());
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(j, c)| c.scale(T::from_i64(j as i64 + 1)))
                .collect(),
        )
    }

    /// As a level-0 [`PolySliceSeries`].
    pub fn to_poly(&self) -> PolySliceSeries<T> {
        PolySliceSeries::from_rows(vec![self.coeffs.clone()])
    }
}

impl SliceSeries<f64> {
    pub fn eval(&self, q: Quaternion) -> Quaternion {
        // Horner; q^j commutes with q, coefficients stay on the right.
        self.coeffs
            .iter()
            .rev()
            .fold(Quaternion::zero(), |acc, c| q * acc + *c)
    }
}

impl<T: Scalar> PartialEq for SliceSeries<T> {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|j| self.coeff(j) == other.coeff(j))
    }
}

/// Dense `(level + 1) × (degree + 1)` coefficient matrix shared by both
/// orientations.
#[derive(Clone, Debug)]
struct Grid<T: Scalar> {
    levels: usize,
    width: usize,
    data: Vec<Quaternion<T>>,
}

impl<T: Scalar> Grid<T> {
    fn zeros(level: usize, degree: usize) -> Self {
        Self {
            levels: level + 1,
            width: degree + 1,
            data: vec![Quaternion::zero(); (level + 1) * (degree + 1)],
        }
    }

    fn from_rows(rows: Vec<Vec<Quaternion<T>>>) -> Self {
        let levels = rows.len().max(1);
        let width = rows.iter().map(Vec::len).max().unwrap_or(1).max(1);
        let mut g = Self::zeros(levels - 1, width - 1);
        for (k, row) in rows.into_iter().enumerate() {
            for (j, c) in row.into_iter().enumerate() {
                g.data[k * width + j] = c;
            }
        }
        g
    }

    fn get(&self, k: usize, j: usize) -> Quaternion<T> {
        if k < self.levels && j < self.width {
            self.data[k * self.width + j]
        } else {
            Quaternion::zero()
        }
    }

    fn slot(&mut self, k: usize, j: usize) -> &mut Quaternion<T> {
        &mut self.data[k * self.width + j]
    }

    fn map(&self, f: impl Fn(Quaternion<T>) -> Quaternion<T>) -> Self {
        Self {
            levels: self.levels,
            width: self.width,
            data: self.data.iter().map(|c| f(*c)).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(Quaternion<T>, Quaternion<T>) -> Quaternion<T>) -> Self {
        let mut out = Self::zeros(
            self.levels.max(other.levels) - 1,
            self.width.max(other.width) - 1,
        );
        for k in 0..out.levels {
            for j in 0..out.width {
                *out.slot(k, j) = f(self.get(k, j), other.get(k, j));
            }
        }
        out
    }

    fn eq_padded(&self, other: &Self) -> bool {
        let (l, w) = (self.levels.max(other.levels), self.width.max(other.width));
        (0..l).all(|k| (0..w).all(|j| self.get(k, j) == other.get(k, j)))
    }

    /// Highest row index holding a nonzero coefficient.
    fn effective_level(&self) -> Option<usize> {
        (0..self.levels)
            .rev()
            .find(|&k| (0..self.width).any(|j| !self.get(k, j).is_zero()))
    }
}

impl Grid<f64> {
    fn max_coeff(&self) -> f64 {
        self.data.iter().map(|c| c.modulus()).fold(0.0, f64::max)
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.max_coeff().max(other.max_coeff()).max(1.0);
        let (l, w) = (self.levels.max(other.levels), self.width.max(other.width));
        (0..l).all(|k| (0..w).all(|j| self.get(k, j).max_abs_diff(&other.get(k, j)) <= tol * scale))
    }
}

/// `Σ_{k ≤ n} Σ_{j ≤ D} q̄^k q^j c[k][j]`, coefficients on the right.
#[derive(Clone, Debug)]
pub struct PolySliceSeries<T: Scalar = f64> {
    grid: Grid<T>,
}

impl<T: Scalar> PolySliceSeries<T> {
    pub fn zeros(level: usize, degree: usize) -> Self {
        Self {
            grid: Grid::zeros(level, degree),
        }
    }

    /// `rows[k][j]` is the coefficient of `q̄^k q^j`.
    pub fn from_rows(rows: Vec<Vec<Quaternion<T>>>) -> Self {
        Self {
            grid: Grid::from_rows(rows),
        }
    }

    pub fn constant(c: Quaternion<T>) -> Self {
        Self::monomial(0, 0, c)
    }

    /// `q̄^k q^j c`.
    pub fn monomial(k: usize, j: usize, c: Quaternion<T>) -> Self {
        let mut s = Self::zeros(k, j);
        *s.grid.slot(k, j) = c;
        s
    }

    /// Stored level `n` (maximum `q̄` power).
    pub fn level(&self) -> usize {
        self.grid.levels - 1
    }

    /// Stored truncation degree `D` in `q`.
    pub fn degree(&self) -> usize {
        self.grid.width - 1
    }

    /// Level ignoring zero rows; `None` for the zero series.
    pub fn effective_level(&self) -> Option<usize> {
        self.grid.effective_level()
    }

    pub fn coeff(&self, k: usize, j: usize) -> Quaternion<T> {
        self.grid.get(k, j)
    }

    pub fn set(&mut self, k: usize, j: usize, c: Quaternion<T>) {
        if k >= self.grid.levels || j >= self.grid.width {
            let mut bigger = Self::zeros(
                k.max(self.level()),
                j.max(self.degree()),
            );
            for kk in 0..self.grid.levels {
                for jj in 0..self.grid.width {
                    *bigger.grid.slot(kk, jj) = self.grid.get(kk, jj);
                }
            }
            *self = bigger;
        }
        *self.grid.slot(k, j) = c;
    }

    /// Adds `c` to the coefficient of `q̄^k q^j`, growing the grid if needed.
    pub fn add_at(&mut self, k: usize, j: usize, c: Quaternion<T>) {
        let cur = self.coeff(k, j);
        self.set(k, j, cur + c);
    }

    /// Row `k` as the slice-regular component `φ_k`.
    pub fn row(&self, k: usize) -> SliceSeries<T> {
        SliceSeries::new((0..self.grid.width).map(|j| self.grid.get(k, j)).collect())
    }

    pub fn rows(&self) -> Vec<SliceSeries<T>> {
        (0..self.grid.levels).map(|k| self.row(k)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            grid: self.grid.zip(&other.grid, |a, b| a + b),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            grid: self.grid.zip(&other.grid, |a, b| a - b),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            grid: self.grid.map(|c| c.scale(s)),
        }
    }

    /// `f · a`: every coefficient multiplied on the right.
    pub fn mul_right(&self, a: Quaternion<T>) -> Self {
        Self {
            grid: self.grid.map(|c| c * a),
        }
    }

    /// `q̄ · f`.
    pub fn mul_qbar(&self) -> Self {
        let mut out = Self::zeros(self.level() + 1, self.degree());
        for k in 0..self.grid.levels {
            for j in 0..self.grid.width {
                *out.grid.slot(k + 1, j) = self.grid.get(k, j);
            }
        }
        out
    }

    /// Conjugate slice derivative `∂̄_s`: `q̄^k q^j c ↦ k q̄^{k-1} q^j c`.
    pub fn slice_dbar(&self) -> Self {
        if self.level() == 0 {
            return Self::zeros(0, self.degree());
        }
        let mut out = Self::zeros(self.level() - 1, self.degree());
        for k in 1..self.grid.levels {
            for j in 0..self.grid.width {
                *out.grid.slot(k - 1, j) = self.grid.get(k, j).scale(T::from_i64(k as i64));
            }
        }
        out
    }

    /// Slice derivative `∂_s`: `q̄^k q^j c ↦ j q̄^k q^{j-1} c`.
    pub fn slice_d(&self) -> Self {
        if self.degree() == 0 {
            return Self::zeros(self.level(), 0);
        }
        let mut out = Self::zeros(self.level(), self.degree() - 1);
        for k in 0..self.grid.levels {
            for j in 1..self.grid.width {
                *out.grid.slot(k, j - 1) = self.grid.get(k, j).scale(T::from_i64(j as i64));
            }
        }
        out
    }

    pub fn dbar_pow(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |f, _| f.slice_dbar())
    }

    /// Slice-regular components `φ_j` recovered through derivatives:
    /// `φ_j = (1/j!) Σ_s (-1)^s q̄^s / s! ∂̄^{j+s} f` for `j >= 1` and
    /// `φ_0 = f - Σ_{j>=1} q̄^j φ_j`.
    ///
    /// Each component is returned as a full [`PolySliceSeries`]; rows above
    /// zero cancel identically.
    pub fn component_series(&self) -> Vec<PolySliceSeries<T>> {
        let n = self.level();
        let mut comps = Vec::with_capacity(n + 1);
        comps.push(Self::zeros(0, self.degree()));
        let mut j_fact = T::one();
        for j in 1..=n {
            j_fact = j_fact * T::from_i64(j as i64);
            let mut acc = Self::zeros(0, self.degree());
            let mut s_fact = T::one();
            for s in 0..=(n - j) {
                if s > 0 {
                    s_fact = s_fact * T::from_i64(s as i64);
                }
                let mut term = self.dbar_pow(j + s);
                for _ in 0..s {
                    term = term.mul_qbar();
                }
                let sign = if s % 2 == 0 { T::one() } else { -T::one() };
                acc = acc.add(&term.scale(sign / s_fact));
            }
            comps.push(acc.scale(T::one() / j_fact));
        }
        let mut phi0 = self.clone();
        for (j, comp) in comps.iter().enumerate().skip(1) {
            let mut shifted = comp.clone();
            for _ in 0..j {
                shifted = shifted.mul_qbar();
            }
            phi0 = phi0.sub(&shifted);
        }
        comps[0] = phi0;
        comps
    }

    /// Components `φ_0..φ_n` computed by [`Self::component_series`], each
    /// read off its zeroth row.
    pub fn extract_components(&self) -> Vec<SliceSeries<T>> {
        self.component_series().iter().map(|c| c.row(0)).collect()
    }

    /// `H_n(F) = (∂_s - q̄)^n F = Σ_j (-1)^j C(n,j) q̄^j ∂_s^{n-j} F`.
    pub fn hermite_op(f: &SliceSeries<T>, n: usize) -> Self {
        let base = f.to_poly();
        let mut out = Self::zeros(n, f.degree());
        let mut binom = T::one();
        for j in 0..=n {
            if j > 0 {
                binom = binom * T::from_i64((n - j + 1) as i64) / T::from_i64(j as i64);
            }
            let mut d = base.clone();
            for _ in 0..(n - j) {
                d = d.slice_d();
            }
            for _ in 0..j {
                d = d.mul_qbar();
            }
            let sign = if j % 2 == 0 { T::one() } else { -T::one() };
            out = out.add(&d.scale(sign * binom));
        }
        out
    }

    /// `H^Q_{m,n}` as a series: `Σ_i (-1)^i C(m,i) C(n,i) i! q̄^{n-i} q^{m-i}`.
    pub fn hermite_q(m: usize, n: usize) -> Self {
        let mut out = Self::zeros(n, m);
        let mut c = T::one();
        for i in 0..=m.min(n) {
            if i > 0 {
                // C(m,i)C(n,i)i! from the previous index
                c = c * T::from_i64(((m - i + 1) * (n - i + 1)) as i64) / T::from_i64(i as i64);
            }
            let sign = if i % 2 == 0 { T::one() } else { -T::one() };
            *out.grid.slot(n - i, m - i) = Quaternion::from_real(sign * c);
        }
        out
    }

    pub fn to_f64(&self) -> PolySliceSeries<f64> {
        PolySliceSeries {
            grid: Grid {
                levels: self.grid.levels,
                width: self.grid.width,
                data: self.grid.data.iter().map(|c| c.to_f64()).collect(),
            },
        }
    }
}

impl PolySliceSeries<f64> {
    /// `f(q) = Σ q̄^k q^j c[k][j]`.
    pub fn eval(&self, q: Quaternion) -> Quaternion {
        let qb = q.conj();
        let mut qbar_pow = Quaternion::one();
        let mut sum = Quaternion::zero();
        for k in 0..self.grid.levels {
            let row = (0..self.grid.width)
                .rev()
                .fold(Quaternion::zero(), |acc, j| q * acc + self.grid.get(k, j));
            sum += qbar_pow * row;
            qbar_pow *= qb;
        }
        sum
    }

    /// Equality up to `tol` times the largest coefficient modulus (at least 1).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.grid.approx_eq(&other.grid, tol)
    }

    pub fn max_coeff(&self) -> f64 {
        self.grid.max_coeff()
    }
}

impl<T: Scalar> PartialEq for PolySliceSeries<T> {
    fn eq(&self, other: &Self) -> bool {
        self.grid.eq_padded(&other.grid)
    }
}

/// Right form `Σ_{k,j} c[k][j] q^j q̄^k`: coefficient on the left, `q̄` power
/// on the right.
#[derive(Clone, Debug)]
pub struct RightPolySeries<T: Scalar = f64> {
    grid: Grid<T>,
}

impl<T: Scalar> RightPolySeries<T> {
    pub fn zeros(level: usize, degree: usize) -> Self {
        Self {
            grid: Grid::zeros(level, degree),
        }
    }

    /// `rows[k][j]` is the coefficient `c` of `c q^j q̄^k`.
    pub fn from_rows(rows: Vec<Vec<Quaternion<T>>>) -> Self {
        Self {
            grid: Grid::from_rows(rows),
        }
    }

    /// `c q^j q̄^k`.
    pub fn monomial(k: usize, j: usize, c: Quaternion<T>) -> Self {
        let mut s = Self::zeros(k, j);
        *s.grid.slot(k, j) = c;
        s
    }

    pub fn level(&self) -> usize {
        self.grid.levels - 1
    }

    pub fn degree(&self) -> usize {
        self.grid.width - 1
    }

    pub fn coeff(&self, k: usize, j: usize) -> Quaternion<T> {
        self.grid.get(k, j)
    }
}

impl RightPolySeries<f64> {
    pub fn eval(&self, q: Quaternion) -> Quaternion {
        let qb = q.conj();
        let mut qbar_pow = Quaternion::one();
        let mut sum = Quaternion::zero();
        for k in 0..self.grid.levels {
            let row = (0..self.grid.width)
                .rev()
                .fold(Quaternion::zero(), |acc, j| acc * q + self.grid.get(k, j));
            sum += row * qbar_pow;
            qbar_pow *= qb;
        }
        sum
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.grid.approx_eq(&other.grid, tol)
    }
}

impl<T: Scalar> PartialEq for RightPolySeries<T> {
    fn eq(&self, other: &Self) -> bool {
        self.grid.eq_padded(&other.grid)
    }
}

#[cfg(test)]
mod tests;
