//! Exact rational points for the 2D kernel. Coordinates enter the system
//! snapped to the dyadic grid 2^-40; every f64 produced later (scale
//! factors, linear maps) converts to a rational exactly, so all 2D
//! predicates downstream are error-free.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Grid exponent for input snapping.
pub const SNAP_BITS: u32 = 40;

/// Exact point in the plane.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatVec2 {
    pub x: BigRational,
    pub y: BigRational,
}

impl RatVec2 {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        RatVec2 { x, y }
    }

    /// Snap a float coordinate pair onto the 2^-40 grid.
    pub fn snapped(x: f64, y: f64) -> Result<Self> {
        Ok(RatVec2::new(snap(x)?, snap(y)?))
    }

    /// Exact embedding of f64 coordinates (used for values computed inside
    /// the library, e.g. scale factors, where the float is the datum).
    pub fn from_f64_exact(x: f64, y: f64) -> Result<Self> {
        Ok(RatVec2::new(rat_from_f64(x)?, rat_from_f64(y)?))
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [rat_to_f64(&self.x), rat_to_f64(&self.y)]
    }

    pub fn neg(&self) -> RatVec2 {
        RatVec2::new(-self.x.clone(), -self.y.clone())
    }

    pub fn sub(&self, other: &RatVec2) -> RatVec2 {
        RatVec2::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn dot(&self, other: &RatVec2) -> BigRational {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

/// 2D cross product of position vectors, `a.x * b.y - a.y * b.x`.
pub fn cross(a: &RatVec2, b: &RatVec2) -> BigRational {
    &a.x * &b.y - &a.y * &b.x
}

/// Orientation of the triangle (a, b, c): positive for a left turn.
pub fn orient(a: &RatVec2, b: &RatVec2, c: &RatVec2) -> BigRational {
    cross(&b.sub(a), &c.sub(a))
}

pub fn snap(value: f64) -> Result<BigRational> {
    if !value.is_finite() {
        return Err(Error::input(format!("non-finite coordinate {value}")));
    }
    let scaled = value * (1u64 << SNAP_BITS) as f64;
    if scaled.abs() >= 9.0e15 {
        return Err(Error::input(format!("coordinate {value} out of range")));
    }
    Ok(BigRational::new(
        BigInt::from(scaled.round() as i64),
        BigInt::from(1u64 << SNAP_BITS),
    ))
}

pub fn rat_from_f64(value: f64) -> Result<BigRational> {
    BigRational::from_float(value)
        .ok_or_else(|| Error::input(format!("non-finite value {value}")))
}

pub fn rat_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of float approximations for extreme
        // magnitudes; does not occur on sane inputs.
        let n = value.numer().to_f64().unwrap_or(f64::NAN);
        let d = value.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn rat_abs(value: &BigRational) -> BigRational {
    value.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snap_is_exact_on_grid_points() {
        let v = RatVec2::snapped(0.5, -0.25).unwrap();
        assert_eq!(v.to_f64(), [0.5, -0.25]);
    }

    #[test]
    fn snap_error_is_below_grid_step() {
        let x = 0.1234567890123;
        let v = snap(x).unwrap();
        assert!((rat_to_f64(&v) - x).abs() <= 0.5 / (1u64 << SNAP_BITS) as f64);
    }

    #[test]
    fn cross_sign_detects_orientation() {
        let a = RatVec2::snapped(1.0, 0.0).unwrap();
        let b = RatVec2::snapped(0.0, 1.0).unwrap();
        assert!(cross(&a, &b) > BigRational::zero());
        assert!(cross(&b, &a) < BigRational::zero());
    }
}
