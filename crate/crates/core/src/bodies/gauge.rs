//! Gauge-oracle bodies: symbolic descriptors whose Minkowski functional is
//! evaluated recursively. The descriptor tree bottoms out at lp balls or
//! exact polytopes.

use nalgebra::DMatrix;

use super::ConvexBody;
use crate::error::{Error, Result};

/// An lp exponent; infinity is a distinguished value, not a float, so that
/// constructors can dispatch to exact polytopes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LpExponent {
    Finite(f64),
    Infinity,
}

impl LpExponent {
    pub fn validate(self) -> Result<()> {
        match self {
            LpExponent::Finite(p) if p.is_finite() && p >= 1.0 => Ok(()),
            LpExponent::Finite(p) => Err(Error::input(format!(
                "lp exponent must satisfy 1 <= p <= inf, got {p}"
            ))),
            LpExponent::Infinity => Ok(()),
        }
    }

    /// 1/p, with 1/inf = 0.
    pub fn reciprocal(self) -> f64 {
        match self {
            LpExponent::Finite(p) => 1.0 / p,
            LpExponent::Infinity => 0.0,
        }
    }

    /// Conjugate exponent: 1/p + 1/q = 1.
    pub fn dual(self) -> LpExponent {
        match self {
            LpExponent::Infinity => LpExponent::Finite(1.0),
            LpExponent::Finite(p) if p <= 1.0 => LpExponent::Infinity,
            LpExponent::Finite(p) => LpExponent::Finite(p / (p - 1.0)),
        }
    }
}

pub fn lp_norm(x: &[f64], p: LpExponent) -> f64 {
    match p {
        LpExponent::Infinity => x.iter().fold(0.0, |m, v| m.max(v.abs())),
        LpExponent::Finite(p) if p == 1.0 => x.iter().map(|v| v.abs()).sum(),
        LpExponent::Finite(p) if p == 2.0 => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
        LpExponent::Finite(p) => x
            .iter()
            .map(|v| v.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
    }
}

/// Symbolic gauge body.
#[derive(Debug, Clone)]
pub enum GaugeBody {
    Lp {
        p: LpExponent,
        dim: usize,
    },
    Scaled {
        t: f64,
        of: Box<ConvexBody>,
    },
    LinearImage {
        map: DMatrix<f64>,
        inv: DMatrix<f64>,
        of: Box<ConvexBody>,
    },
    /// Unit ball is the intersection of the two bodies; the gauge is the
    /// pointwise maximum of the two gauges.
    Intersection(Box<ConvexBody>, Box<ConvexBody>),
    /// Unit ball is the convex hull of the union; the gauge is the
    /// inf-convolution of the two gauges.
    Hull(Box<ConvexBody>, Box<ConvexBody>),
}

impl GaugeBody {
    pub fn dim(&self) -> usize {
        match self {
            GaugeBody::Lp { dim, .. } => *dim,
            GaugeBody::Scaled { of, .. } => of.dim(),
            GaugeBody::LinearImage { of, .. } => of.dim(),
            GaugeBody::Intersection(a, _) => a.dim(),
            GaugeBody::Hull(a, _) => a.dim(),
        }
    }
}
