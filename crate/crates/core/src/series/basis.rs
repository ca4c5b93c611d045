//! Conversion between the monomial basis `q̄^k q^j` and the quaternionic
//! Hermite basis `H^Q_{j,k}`.

use alloc::vec;
use alloc::vec::Vec;

use super::PolySliceSeries;
use crate::quat::Quaternion;
use crate::scalar::Scalar;

/// `f = Σ_{j,k} H^Q_{j,k} α_{j,k}`; `j` is the `q` index, `k` the `q̄` index.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteCoeffs<T: Scalar = f64> {
    jmax: usize,
    kmax: usize,
    alpha: Vec<Quaternion<T>>,
}

impl<T: Scalar> HermiteCoeffs<T> {
    pub fn zeros(jmax: usize, kmax: usize) -> Self {
        Self {
            jmax,
            kmax,
            alpha: vec![Quaternion::zero(); (jmax + 1) * (kmax + 1)],
        }
    }

    pub fn jmax(&self) -> usize {
        self.jmax
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn get(&self, j: usize, k: usize) -> Quaternion<T> {
        if j <= self.jmax && k <= self.kmax {
            self.alpha[j * (self.kmax + 1) + k]
        } else {
            Quaternion::zero()
        }
    }

    pub fn set(&mut self, j: usize, k: usize, c: Quaternion<T>) {
        self.alpha[j * (self.kmax + 1) + k] = c;
    }

    /// Nonzero entries as `(j, k, α)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Quaternion<T>)> + '_ {
        (0..=self.jmax)
            .flat_map(move |j| (0..=self.kmax).map(move |k| (j, k, self.get(j, k))))
            .filter(|(_, _, c)| !c.is_zero())
    }

    /// Reassembles `Σ H^Q_{j,k} α_{j,k}` in monomial form.
    pub fn to_series(&self) -> PolySliceSeries<T> {
        let mut out = PolySliceSeries::zeros(self.kmax, self.jmax);
        for (j, k, a) in self.entries() {
            out = out.add(&PolySliceSeries::hermite_q(j, k).mul_right(a));
        }
        out
    }
}

impl<T: Scalar> PolySliceSeries<T> {
    /// Hermite-basis coefficients via
    /// `q^m q̄^n = Σ_i m! n! / (i! (m-i)! (n-i)!) H^Q_{m-i,n-i}`.
    pub fn to_hermite_basis(&self) -> HermiteCoeffs<T> {
        let mut out = HermiteCoeffs::zeros(self.degree(), self.level());
        for n in 0..=self.level() {
            for m in 0..=self.degree() {
                let c = self.coeff(n, m);
                if c.is_zero() {
                    continue;
                }
                let mut w = T::one();
                for i in 0..=m.min(n) {
                    if i > 0 {
                        w = w * T::from_i64(((m - i + 1) * (n - i + 1)) as i64)
                            / T::from_i64(i as i64);
                    }
                    let cur = out.get(m - i, n - i);
                    out.set(m - i, n - i, cur + c.scale(w));
                }
            }
        }
        out
    }

    pub fn from_hermite_basis(coeffs: &HermiteCoeffs<T>) -> Self {
        coeffs.to_series()
    }
}
