//! The slice operator `□ = -∂_s ∂̄_s + q̄ ∂̄_s`, its Kummer eigenfunctions
//! `ψ_{μ,j}`, their norms, and the numerical witness that square-integrable
//! eigenfunctions exist only for integer eigenvalues.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::poly::{factorial, kummer_m, TruncationPolicy};
use crate::quad::{gauss_legendre, SliceFunction, SphereQuadrature};
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::scalar::Scalar;
use crate::series::PolySliceSeries;

/// `□ f = -∂_s ∂̄_s f + q̄ ∂̄_s f`; on `q̄^k q^j` it gives `k q̄^k q^j - jk q̄^{k-1} q^{j-1}`.
pub fn box_symbolic<T: Scalar>(f: &PolySliceSeries<T>) -> PolySliceSeries<T> {
    let dbar = f.slice_dbar();
    dbar.mul_qbar().sub(&dbar.slice_d())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralConfig {
    pub fd_step: f64,
    pub fd_tol: f64,
    pub grid: Vec<Quaternion>,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            fd_step: 1e-3,
            fd_tol: 1e-4,
            grid: Vec::new(),
        }
    }
}

/// `□ f (q)` by central differences in the slice coordinates of `q`:
/// `-(∂²_x + ∂²_y)/4 + (x∂_x + y∂_y)/2 + I_q (x∂_y - y∂_x)/2`. On the real
/// axis the unified form reduces to `-∂²_x + x∂_x` along ℝ.
pub fn box_fd<F: SliceFunction + ?Sized>(f: &F, q: Quaternion, cfg: &SpectralConfig) -> Result<Quaternion> {
    let h = cfg.fd_step;
    let s = q.to_slice();
    let (x, y) = (s.x, s.y);
    if y == 0.0 {
        let g = |t: f64| f.eval_at(Quaternion::from_real(t));
        let c = g(x);
        let dxx = (g(x + h) - c.scale(2.0) + g(x - h)).scale(1.0 / (h * h));
        let dx = (g(x + h) - g(x - h)).scale(0.5 / h);
        return Ok(dx.scale(x) - dxx);
    }
    if y <= 2.0 * h {
        return Err(Error::NearRealAxis { imag: y, step: h });
    }
    let g = |a: f64, b: f64| f.eval_at(Quaternion::on_slice(a, b, s.unit));
    let c = g(x, y);
    let (xp, xm, yp, ym) = (g(x + h, y), g(x - h, y), g(x, y + h), g(x, y - h));
    let dxx = (xp - c.scale(2.0) + xm).scale(1.0 / (h * h));
    let dyy = (yp - c.scale(2.0) + ym).scale(1.0 / (h * h));
    let dx = (xp - xm).scale(0.5 / h);
    let dy = (yp - ym).scale(0.5 / h);
    let rotation = s.unit.as_quaternion() * (dy.scale(x) - dx.scale(y)).scale(0.5);
    Ok((dxx + dyy).scale(-0.25) + (dx.scale(x) + dy.scale(y)).scale(0.5) + rotation)
}

/// `ψ_{μ,j}(q) = q^j M(-μ; j+1 | |q|²)` for `j >= 0` and
/// `q̄^{|j|} M(-μ + |j|; |j|+1 | |q|²)` for `j < 0`.
pub fn psi(mu: Quaternion, j: i64, q: Quaternion, policy: &TruncationPolicy) -> Result<Quaternion> {
    let m = j.unsigned_abs() as usize;
    let (mono, a) = if j >= 0 {
        (q.powi(m as u32), -mu)
    } else {
        (q.conj().powi(m as u32), Quaternion::from_real(m as f64) - mu)
    };
    let k = kummer_m(a, (m + 1) as f64, q.norm_sqr(), policy)?;
    Ok(mono * k.value)
}

/// `‖ψ_{n,j}‖²_H = 4π · π n! (j!)² / (n+j)!` for `j >= 0` and
/// `4π · π (n+j)! (|j|!)² / n!` for `-n <= j < 0`.
pub fn psi_norm_sq(n: usize, j: i64) -> Result<f64> {
    if j < -(n as i64) {
        return Err(Error::IndexBelowBound { n, j });
    }
    let m = j.unsigned_abs() as usize;
    let slice = if j >= 0 {
        PI * factorial(n) * factorial(m) * factorial(m) / factorial(n + m)
    } else {
        PI * factorial(n - m) * factorial(m) * factorial(m) / factorial(n)
    };
    Ok(4.0 * PI * slice)
}

/// `κ_j` with `ψ_{n,j} = (-1)^{n+j} κ_j H^Q_{n+j,n}`: `(-1)^j j!/(n+j)!` for
/// `j >= 0`, `|j|!/n!` for `j < 0`.
pub fn hermite_weight(n: usize, j: i64) -> f64 {
    if j >= 0 {
        let j = j as usize;
        let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * factorial(j) / factorial(n + j)
    } else {
        factorial(j.unsigned_abs() as usize) / factorial(n)
    }
}

/// Coefficients `C_j`, `j >= -n`, of `f = Σ_j κ_j H^Q_{n+j,n} C_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenExpansion {
    pub level: usize,
    /// `coeffs[i]` is `C_{i - level}`.
    pub coeffs: Vec<Quaternion>,
    /// `Σ_j ‖ψ_{n,j}‖²_H |C_j|²`, equal to `‖f‖²_H` for constant coefficients.
    pub growth: f64,
}

impl EigenExpansion {
    pub fn get(&self, j: i64) -> Quaternion {
        let i = j + self.level as i64;
        if i < 0 {
            return Quaternion::zero();
        }
        self.coeffs.get(i as usize).copied().unwrap_or_else(Quaternion::zero)
    }
}

/// Reads `C_j` off the Hermite-basis coefficients of `f`, which must lie in
/// the span of `H^Q_{·,n}`.
pub fn expand_eigen(f: &PolySliceSeries, n: usize) -> Result<EigenExpansion> {
    let basis = f.to_hermite_basis();
    let scale = f.max_coeff().max(1.0);
    for (m, k, a) in basis.entries() {
        if k != n && a.modulus() > 1e-12 * scale {
            let _ = m;
            return Err(Error::LevelMismatch { expected: n, found: k });
        }
    }
    let top = basis.jmax().max(n);
    let mut coeffs = Vec::with_capacity(top + 1);
    let mut growth = 0.0;
    for m in 0..=top {
        let j = m as i64 - n as i64;
        let alpha = if n <= basis.kmax() && m <= basis.jmax() {
            basis.get(m, n)
        } else {
            Quaternion::zero()
        };
        let c = alpha.scale(1.0 / hermite_weight(n, j));
        growth += psi_norm_sq(n, j)? * c.norm_sqr();
        coeffs.push(c);
    }
    Ok(EigenExpansion {
        level: n,
        coeffs,
        growth,
    })
}

/// Coefficient field `γ(I)` of an eigenfunction.
#[derive(Clone, Debug, PartialEq)]
pub enum CoefficientField {
    Constant(Quaternion),
    /// `values[i] = γ(nodes[i])` on a sphere rule; lookup takes the nearest node.
    Tabulated {
        nodes: Vec<ImaginaryUnit>,
        values: Vec<Quaternion>,
    },
}

impl CoefficientField {
    pub fn at(&self, unit: &ImaginaryUnit) -> Quaternion {
        match self {
            CoefficientField::Constant(c) => *c,
            CoefficientField::Tabulated { nodes, values } => {
                let best = nodes
                    .iter()
                    .enumerate()
                    .max_by(|a, b| unit.dot(a.1).partial_cmp(&unit.dot(b.1)).unwrap())
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                values[best]
            }
        }
    }

    /// `∫_S |γ|² dσ` under the sphere rule.
    pub fn sphere_mass(&self, sphere: &SphereQuadrature) -> f64 {
        sphere
            .nodes
            .iter()
            .zip(&sphere.weights)
            .map(|(u, w)| w * self.at(u).norm_sqr())
            .sum()
    }

    fn values(&self) -> Vec<Quaternion> {
        match self {
            CoefficientField::Constant(c) => alloc::vec![*c],
            CoefficientField::Tabulated { values, .. } => values.clone(),
        }
    }
}

/// `q ↦ ψ_{μ,j}(q) γ(I_q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenFunction {
    pub mu: Quaternion,
    pub j: i64,
    pub gamma: CoefficientField,
    pub policy: TruncationPolicy,
}

impl EigenFunction {
    /// Coefficients must commute with `μ`, i.e. lie in its slice when `μ` is
    /// not real.
    pub fn new(mu: Quaternion, j: i64, gamma: CoefficientField) -> Result<Self> {
        let im = mu.im();
        if im.norm_sqr() > 0.0 {
            for c in gamma.values() {
                let comm = mu * c - c * mu;
                if comm.modulus() > 1e-12 * (1.0 + c.modulus() * mu.modulus()) {
                    return Err(Error::NotInCommutant {
                        residual: comm.modulus(),
                    });
                }
            }
        }
        Ok(Self {
            mu,
            j,
            gamma,
            policy: TruncationPolicy::default(),
        })
    }

    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        let unit = q.to_slice().unit;
        Ok(psi(self.mu, self.j, q, &self.policy)? * self.gamma.at(&unit))
    }
}

impl SliceFunction for EigenFunction {
    /// Truncation failures evaluate to NaN so they surface in any integral.
    fn eval_at(&self, q: Quaternion) -> Quaternion {
        self.eval(q)
            .unwrap_or_else(|_| Quaternion::from_real(f64::NAN))
    }
}

/// Evidence for or against square integrability of `ψ_{μ,j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumProbe {
    pub mu: Quaternion,
    pub j: i64,
    pub radius: f64,
    pub converged: bool,
    /// Share of `∫_0^{R_m}` contributed by the last shell `[R_{m-1}, R_m]`,
    /// for `R_m = m R / SHELLS`.
    pub tail_ratios: Vec<f64>,
    /// `∫_0^R |ψ_{μ,j}(r)|² e^{-r²} r dr`.
    pub radial_integral: f64,
}

pub const PROBE_SHELLS: usize = 8;
/// Final shell share below which the radial integral counts as settled.
pub const PROBE_THRESHOLD: f64 = 1e-6;

/// Integrates `|ψ_{μ,j}|² e^{-r²} r` shell by shell over `[0, R]`. A convergent
/// integral leaves the outer shells with a vanishing share; a divergent one
/// (`e^{r²}` growth) keeps it near one.
pub fn spectrum_probe(mu: Quaternion, j: i64, radius: f64) -> Result<SpectrumProbe> {
    let rule = gauss_legendre(40)?;
    let policy = TruncationPolicy::default();
    let integrand = |r: f64| -> Result<f64> {
        let v = psi(mu, j, Quaternion::from_real(r), &policy)?;
        Ok(v.norm_sqr() * libm::exp(-r * r) * r)
    };
    let mut total = 0.0;
    let mut tail_ratios = Vec::with_capacity(PROBE_SHELLS);
    for m in 0..PROBE_SHELLS {
        let a = radius * m as f64 / PROBE_SHELLS as f64;
        let b = radius * (m + 1) as f64 / PROBE_SHELLS as f64;
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut shell = 0.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            shell += w * half * integrand(mid + half * x)?;
        }
        total += shell;
        tail_ratios.push(if total > 0.0 { shell / total } else { 0.0 });
    }
    let converged = tail_ratios.last().is_some_and(|&r| r < PROBE_THRESHOLD);
    Ok(SpectrumProbe {
        mu,
        j,
        radius,
        converged,
        tail_ratios,
        radial_integral: total,
    })
}
