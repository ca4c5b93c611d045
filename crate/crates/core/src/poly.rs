//! Scalar special functions: real Hermite polynomials and functions,
//! generalized Laguerre polynomials, Pochhammer symbols, Kummer's function
//! with a quaternionic upper parameter, and the quaternionic Hermite
//! polynomials `H^Q_{m,n}(q, q̄)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Default cap on polynomial degrees; `30!` still fits a double exactly enough.
pub const DEGREE_CAP: usize = 30;

fn check_cap(what: &'static str, degree: usize) -> Result<()> {
    if degree > DEGREE_CAP {
        Err(Error::DegreeCap {
            what,
            degree,
            cap: DEGREE_CAP,
        })
    } else {
        Ok(())
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Physicists' Hermite polynomial `H_j(t)`.
pub fn hermite_h(j: usize, t: f64) -> Result<f64> {
    check_cap("hermite_h", j)?;
    Ok(hermite_h_unchecked(j, t))
}

pub(crate) fn hermite_h_unchecked(j: usize, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * t);
    if j == 0 {
        return prev;
    }
    for n in 1..j {
        let next = 2.0 * t * cur - 2.0 * n as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Hermite function `h_j(t) = e^{-t²/2} H_j(t)`.
pub fn hermite_fn(j: usize, t: f64) -> Result<f64> {
    Ok(libm::exp(-0.5 * t * t) * hermite_h(j, t)?)
}

/// Generalized Laguerre polynomial `L_n^{(γ)}(x)`.
pub fn laguerre(n: usize, gamma: f64, x: f64) -> Result<f64> {
    check_cap("laguerre", n)?;
    Ok(laguerre_unchecked(n, gamma, x))
}

pub(crate) fn laguerre_unchecked(n: usize, gamma: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + gamma - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + gamma - x) * cur - (kf + gamma) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Rising factorial `(a)_j = a (a+1) ⋯ (a+j-1)`; every factor lies in the
/// slice of `a`, so the product order is immaterial.
pub fn pochhammer(a: Quaternion, j: usize) -> Quaternion {
    (0..j).fold(Quaternion::one(), |acc, i| acc * (a + Quaternion::from_real(i as f64)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    pub abs_tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            max_terms: 2000,
            abs_tol: 1e-17,
        }
    }
}

/// Value of a truncated series together with the number of terms summed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesSum {
    pub value: Quaternion,
    pub terms: usize,
}

/// If `a` is real and equal to a non-positive integer `-n`, returns `n`.
fn terminating_degree(a: &Quaternion) -> Option<usize> {
    if a.im().norm_sqr() != 0.0 || a.w > 0.0 || libm::trunc(a.w) != a.w {
        return None;
    }
    Some((-a.w) as usize)
}

/// Kummer's function `M(a; c | x) = Σ (a)_j / (c)_j · x^j / j!`.
///
/// Terminates exactly after `n + 1` terms when `a = -n`. Otherwise terms are
/// summed until one drops below `policy.abs_tol` once the ratio of successive
/// terms has started to shrink.
pub fn kummer_m(a: Quaternion, c: f64, x: f64, policy: &TruncationPolicy) -> Result<SeriesSum> {
    if c <= 0.0 && libm::trunc(c) == c {
        return Err(Error::InadmissibleKummer { c });
    }
    let mut term = Quaternion::one();
    let mut sum = term;
    if let Some(n) = terminating_degree(&a) {
        for j in 0..n {
            let jf = j as f64;
            term *= (a + Quaternion::from_real(jf)).scale(x / ((c + jf) * (jf + 1.0)));
            sum += term;
        }
        return Ok(SeriesSum {
            value: sum,
            terms: n + 1,
        });
    }
    for j in 0..policy.max_terms.saturating_sub(1) {
        let jf = j as f64;
        let factor = (a + Quaternion::from_real(jf)).scale(x / ((c + jf) * (jf + 1.0)));
        term *= factor;
        sum += term;
        // Past the peak the term ratio is below one; only then is a small term final.
        if term.modulus() < policy.abs_tol.max(f64::EPSILON * sum.modulus() * 1e-3)
            && factor.modulus() < 1.0
        {
            return Ok(SeriesSum {
                value: sum,
                terms: j + 2,
            });
        }
    }
    Err(Error::KummerNoConvergence {
        terms: policy.max_terms,
        last_term: term.modulus(),
    })
}

/// `H^Q_{m,n}(q, q̄) = m! n! Σ_j (-1)^j / j! · q^{m-j} q̄^{n-j} / ((m-j)! (n-j)!)`.
pub fn hermite_quat(m: usize, n: usize, q: Quaternion) -> Result<Quaternion> {
    check_cap("hermite_quat", m.max(n))?;
    let qb = q.conj();
    let mut sum = Quaternion::zero();
    let mf = factorial(m) * factorial(n);
    for j in 0..=m.min(n) {
        let c = mf / (factorial(j) * factorial(m - j) * factorial(n - j));
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += (q.powi((m - j) as u32) * qb.powi((n - j) as u32)).scale(sign * c);
    }
    Ok(sum)
}

/// Normalized quaternionic Hermite values `H^Q_{j,k}(q) / sqrt(j! k!)` for
/// `j <= jmax`, `k <= kmax`, from the recurrence
/// `H_{j+1,k} = q H_{j,k} - k H_{j,k-1}`. Free of factorial overflow, so it
/// reaches the hundreds of terms needed by the kernel series.
#[derive(Clone, Debug)]
pub struct HermiteTable {
    kmax: usize,
    values: Vec<Quaternion>,
}

impl HermiteTable {
    pub fn new(jmax: usize, kmax: usize, q: Quaternion) -> Self {
        let width = kmax + 1;
        let mut values = vec![Quaternion::zero(); (jmax + 1) * width];
        let qb = q.conj();
        let mut col = Quaternion::one();
        for (k, v) in values.iter_mut().take(width).enumerate() {
            *v = col;
            col = (col * qb).scale(1.0 / libm::sqrt((k + 1) as f64));
        }
        for j in 0..jmax {
            let s = 1.0 / libm::sqrt((j + 1) as f64);
            for k in 0..=kmax {
                let mut v = q * values[j * width + k];
                if k > 0 {
                    v -= values[j * width + k - 1].scale(libm::sqrt(k as f64));
                }
                values[(j + 1) * width + k] = v.scale(s);
            }
        }
        Self { kmax, values }
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn jmax(&self) -> usize {
        self.values.len() / (self.kmax + 1) - 1
    }

    /// `H^Q_{j,k}(q) / sqrt(j! k!)`.
    pub fn get(&self, j: usize, k: usize) -> Quaternion {
        self.values[j * (self.kmax + 1) + k]
    }
}
