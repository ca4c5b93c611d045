//! Quaternion arithmetic and slice/polar decompositions.
//!
//! Every non-real quaternion lies in exactly one slice `C_I = R + R I`, where
//! `I` is an imaginary unit (`I² = -1`). Inside a slice quaternions commute, so
//! the slice form `x + I y` is the working representation for every function in
//! this crate.

use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::scalar::{Exact, Scalar};

/// `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion<T = f64> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Quaternion<T> {
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::from_real(T::one())
    }

    pub fn from_real(w: T) -> Self {
        Self::new(w, T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    pub fn re(&self) -> T {
        self.w
    }

    /// Imaginary part as a pure quaternion.
    pub fn im(&self) -> Self {
        Self::new(T::zero(), self.x, self.y, self.z)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// `|q|²`, computed without a square root so it stays exact in [`Exact`].
    pub fn norm_sqr(&self) -> T {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_zero() && self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = *self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> Quaternion<f64> {
        Quaternion::new(self.w.to_f64(), self.x.to_f64(), self.y.to_f64(), self.z.to_f64())
    }
}

impl Quaternion<Exact> {
    pub fn from_ints(w: i64, x: i64, y: i64, z: i64) -> Self {
        Self::new(
            Exact::from_i64(w),
            Exact::from_i64(x),
            Exact::from_i64(y),
            Exact::from_i64(z),
        )
    }
}

impl Quaternion<f64> {
    pub fn modulus(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let d = *self - *other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }

    pub fn inv(&self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    /// `x + I y` for a slice point.
    pub fn on_slice(x: f64, y: f64, unit: ImaginaryUnit) -> Self {
        Self::from_real(x) + unit.as_quaternion().scale(y)
    }

    /// Slice form with `y >= 0`; real quaternions get the unit `i`.
    pub fn to_slice(&self) -> SliceForm {
        let im = self.im();
        let y = im.modulus();
        let unit = if y > 0.0 {
            ImaginaryUnit::new(im.x / y, im.y / y, im.z / y).unwrap_or(ImaginaryUnit::I)
        } else {
            ImaginaryUnit::I
        };
        SliceForm { x: self.w, y, unit }
    }

    pub fn from_slice(s: &SliceForm) -> Self {
        Self::on_slice(s.x, s.y, s.unit)
    }

    pub fn to_polar(&self) -> PolarForm {
        let s = self.to_slice();
        let r = libm::hypot(s.x, s.y);
        let mut theta = libm::atan2(s.y, s.x);
        if theta < 0.0 {
            theta += 2.0 * core::f64::consts::PI;
        }
        PolarForm {
            r,
            theta,
            unit: s.unit,
        }
    }

    pub fn from_polar(p: &PolarForm) -> Self {
        Self::on_slice(
            p.r * libm::cos(p.theta),
            p.r * libm::sin(p.theta),
            p.unit,
        )
    }

    /// `e^q = e^x (cos y + I sin y)` in the slice of `q`.
    pub fn exp(&self) -> Self {
        let s = self.to_slice();
        let ex = libm::exp(s.x);
        Self::on_slice(ex * libm::cos(s.y), ex * libm::sin(s.y), s.unit)
    }

    /// Splits `q = c1 + c2 J` with `c1, c2` in `C_I`, for `J ⟂ I`.
    pub fn split(&self, i: ImaginaryUnit, j: ImaginaryUnit) -> Result<(Self, Self)> {
        let dot = i.dot(&j);
        if dot.abs() > 1e-12 {
            return Err(Error::NotPerpendicular { dot });
        }
        let k = i.as_quaternion() * j.as_quaternion();
        let im = self.im();
        let along = |u: &Quaternion| im.x * u.x + im.y * u.y + im.z * u.z;
        let iq = i.as_quaternion();
        let b = along(&iq);
        let c = along(&j.as_quaternion());
        let d = along(&k);
        Ok((
            Self::from_real(self.w) + iq.scale(b),
            Self::from_real(c) + iq.scale(d),
        ))
    }
}

impl<T: Scalar> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Scalar> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl<T: Scalar> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl<T: Scalar> AddAssign for Quaternion<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> SubAssign for Quaternion<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Scalar> MulAssign for Quaternion<T> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl From<f64> for Quaternion<f64> {
    fn from(w: f64) -> Self {
        Self::from_real(w)
    }
}

/// `w+xi+yj+zk` with every term present, e.g. `1-0.5i+0j+2k`.
impl fmt::Display for Quaternion<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.w)?;
        for (v, s) in [(self.x, 'i'), (self.y, 'j'), (self.z, 'k')] {
            if v.is_sign_negative() && v != 0.0 {
                write!(f, "{v}{s}")?;
            } else {
                write!(f, "+{}{s}", v.abs())?;
            }
        }
        Ok(())
    }
}

/// Unit vector in the imaginary 3-space; squares to `-1` as a quaternion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImaginaryUnit {
    v: [f64; 3],
}

impl ImaginaryUnit {
    pub const I: Self = Self { v: [1.0, 0.0, 0.0] };
    pub const J: Self = Self { v: [0.0, 1.0, 0.0] };
    pub const K: Self = Self { v: [0.0, 0.0, 1.0] };

    /// Normalizes `(a, b, c)`; `None` for the zero vector.
    pub fn new(a: f64, b: f64, c: f64) -> Option<Self> {
        let n = libm::sqrt(a * a + b * b + c * c);
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        Some(Self {
            v: [a / n, b / n, c / n],
        })
    }

    /// Unit with spherical angles: polar `theta` from the `i` axis, azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let st = libm::sin(theta);
        Self {
            v: [libm::cos(theta), st * libm::cos(phi), st * libm::sin(phi)],
        }
    }

    pub fn components(&self) -> [f64; 3] {
        self.v
    }

    pub fn as_quaternion(&self) -> Quaternion {
        Quaternion::new(0.0, self.v[0], self.v[1], self.v[2])
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.v[0] * o.v[0] + self.v[1] * o.v[1] + self.v[2] * o.v[2]
    }

    /// Some unit perpendicular to `self`.
    pub fn orthogonal(&self) -> Self {
        let [a, b, c] = self.v;
        let (x, y, z) = if a.abs() < 0.9 {
            (0.0, c, -b)
        } else {
            (-c, 0.0, a)
        };
        Self::new(x, y, z).expect("nonzero cross product")
    }
}

impl Neg for ImaginaryUnit {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            v: [-self.v[0], -self.v[1], -self.v[2]],
        }
    }
}

/// `q = x + I y` with `y >= 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceForm {
    pub x: f64,
    pub y: f64,
    pub unit: ImaginaryUnit,
}

/// `q = r (cos θ + I sin θ)`, `θ ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarForm {
    pub r: f64,
    pub theta: f64,
    pub unit: ImaginaryUnit,
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    #[test]
    fn hamilton_rules() {
        let (i, j, k) = (Quaternion::i(), Quaternion::j(), Quaternion::k());
        assert_eq!(i * j, k);
        assert_eq!(k * i, j);
        assert_eq!(i * k, -j);
        assert_eq!(i * j * k, -Quaternion::one());
        let p = q(0.3, -1.0, 2.0, 0.5);
        assert_eq!(Quaternion::one() * p, p);
        assert_eq!(
            (Quaternion::one() + i) * (Quaternion::one() + j),
            q(1.0, 1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn conjugation() {
        assert_eq!(Quaternion::<f64>::i().conj(), -Quaternion::i());
        assert_eq!(q(3.0, 0.0, 0.0, 0.0).conj(), q(3.0, 0.0, 0.0, 0.0));
        let (i, j) = (Quaternion::<f64>::i(), Quaternion::j());
        assert_eq!((i * j).conj(), -Quaternion::k());
        assert_eq!((i * j).conj(), j.conj() * i.conj());
    }

    #[test]
    fn modulus_values() {
        assert_eq!(Quaternion::<f64>::zero().modulus(), 0.0);
        assert_eq!(Quaternion::<f64>::i().modulus(), 1.0);
        assert_eq!(q(1.0, 1.0, 1.0, 1.0).modulus(), 2.0);
    }

    #[test]
    fn slice_forms() {
        let s = Quaternion::<f64>::i().to_slice();
        assert_eq!((s.x, s.y, s.unit), (0.0, 1.0, ImaginaryUnit::I));
        let s = q(2.0, 0.0, 0.0, 0.0).to_slice();
        assert_eq!((s.x, s.y, s.unit), (2.0, 0.0, ImaginaryUnit::I));
        let s = q(1.0, 0.0, 0.0, -1.0).to_slice();
        assert_eq!((s.x, s.y), (1.0, 1.0));
        assert_eq!(s.unit, -ImaginaryUnit::K);
    }

    #[test]
    fn polar_round_trip() {
        let p = q(-1.0, 0.5, -2.0, 0.25);
        let back = Quaternion::from_polar(&p.to_polar());
        assert!(back.max_abs_diff(&p) < 1e-14);
        let pr = q(-3.0, 0.0, 0.0, 0.0).to_polar();
        assert!((pr.theta - PI).abs() < 1e-15);
    }

    #[test]
    fn exponentials() {
        assert_eq!(Quaternion::<f64>::zero().exp(), Quaternion::one());
        assert!(q(0.0, PI, 0.0, 0.0).exp().max_abs_diff(&-Quaternion::one()) < 1e-15);
        assert!(q(0.0, 0.0, 0.0, PI / 2.0).exp().max_abs_diff(&Quaternion::k()) < 1e-15);
        assert!((q(1.5, 0.0, 0.0, 0.0).exp().w - libm::exp(1.5)).abs() < 1e-15);
    }

    #[test]
    fn splitting() {
        let (i, j) = (ImaginaryUnit::I, ImaginaryUnit::J);
        assert_eq!(
            Quaternion::j().split(i, j).unwrap(),
            (Quaternion::zero(), Quaternion::one())
        );
        assert_eq!(
            Quaternion::k().split(i, j).unwrap(),
            (Quaternion::zero(), Quaternion::i())
        );
        assert_eq!(
            q(1.0, 1.0, 0.0, 0.0).split(i, j).unwrap(),
            (q(1.0, 1.0, 0.0, 0.0), Quaternion::zero())
        );
        let skew = ImaginaryUnit::new(1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            Quaternion::one().split(i, skew),
            Err(Error::NotPerpendicular { .. })
        ));
    }

    #[test]
    fn display_format() {
        extern crate alloc;
        use alloc::string::ToString;
        assert_eq!(q(1.0, -0.5, 0.0, 2.0).to_string(), "1-0.5i+0j+2k");
        assert_eq!(q(0.0, 0.0, -0.0, 0.0).to_string(), "0+0i+0j+0k");
    }

    #[test]
    fn exact_products() {
        let a = Quaternion::from_ints(1, 2, -3, 4);
        let b = Quaternion::from_ints(-2, 1, 0, 5);
        assert_eq!((a * b).conj(), b.conj() * a.conj());
        assert_eq!((a * b).norm_sqr(), a.norm_sqr() * b.norm_sqr());
    }
}
