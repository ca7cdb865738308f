//! Fixed-position distortion, numeric Banach-Mazur distance over
//! invertible linear maps, and canonical positioning of body pairs.
//!
//! The optimizer returns certified upper bounds: every reported estimate
//! is the fixed-position distortion of an actual witness map.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bodies::{
    apply_matrix, apply_matrix_transpose, sup_over_directions, ConvexBody, LpExponent, Resolution,
};
use crate::error::{Error, Result};
use crate::numeric::{nelder_mead, NmOptions};

/// Configuration of the multi-start simplex search over witness matrices.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            starts: 32,
            max_iters: 2000,
            tol: 1e-6,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts < 1 {
            return Err(Error::input("optimizer needs at least one start"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::input("optimizer tolerance must be positive"));
        }
        Ok(())
    }
}

/// Result of a distance run. `witness` maps the second body onto the
/// (near-)optimal position relative to the first; `factor_in` is the
/// smallest `L` with `witness(B_F) ⊆ L * B_E`, `factor_out` the smallest
/// `L` with `B_E ⊆ L * witness(B_F)`, and `estimate = factor_in *
/// factor_out` is an upper bound on the distance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistanceReport {
    pub estimate: f64,
    pub witness: Vec<Vec<f64>>,
    pub factor_in: f64,
    pub factor_out: f64,
    pub converged: bool,
    pub starts_used: usize,
}

impl DistanceReport {
    pub fn witness_matrix(&self) -> DMatrix<f64> {
        let n = self.witness.len();
        DMatrix::from_fn(n, n, |i, j| self.witness[i][j])
    }
}

/// Two bodies in canonical position `B_E ⊆ B_F ⊆ d * B_E`, with both
/// inclusions tight, together with the positioned distance `d`.
#[derive(Debug, Clone)]
pub struct PositionedPair {
    pub ball_e: ConvexBody,
    pub ball_f: ConvexBody,
    pub d: f64,
}

impl PositionedPair {
    pub fn dim(&self) -> usize {
        self.ball_e.dim()
    }

    /// Check the canonical inclusions within 1e-9 relative slack.
    pub fn validate(&self) -> Result<()> {
        if self.d < 1.0 - 1e-9 {
            return Err(Error::verification(format!(
                "positioned distance must be >= 1, got {}",
                self.d
            )));
        }
        let inner = self.ball_f.enclosing_factor(&self.ball_e)?;
        if inner > 1.0 + 1e-9 {
            return Err(Error::verification(format!(
                "B_E is not inside B_F (enclosing factor {inner})"
            )));
        }
        let outer = self.ball_e.enclosing_factor(&self.ball_f)?;
        if outer > self.d * (1.0 + 1e-9) {
            return Err(Error::verification(format!(
                "B_F is not inside d * B_E (factor {outer} vs d {})",
                self.d
            )));
        }
        Ok(())
    }
}

/// Fixed-position distortion: `r * s` with `r` the smallest factor taking
/// `a` into `r * b` and `s` the smallest taking `b` into `s * a`. This is
/// the infimum over positive scalings `c` of the identity-map distortion
/// between `a` and `c * b`, and an upper bound on the distance.
pub fn fixed_position_distance(a: &ConvexBody, b: &ConvexBody) -> Result<f64> {
    let r = b.enclosing_factor(a)?;
    let s = a.enclosing_factor(b)?;
    Ok(r * s)
}

/// Both fixed-position factors of the pair `(a, u(b))` without
/// materializing the mapped body. Returns `(factor_in, factor_out)` where
/// `factor_in = sup over u(b) of gauge_a` and
/// `factor_out = sup over a of gauge_{u(b)}`.
fn map_factors(
    a: &ConvexBody,
    b: &ConvexBody,
    u: &DMatrix<f64>,
    u_inv: &DMatrix<f64>,
    res: Resolution,
) -> (f64, f64) {
    let dim = a.dim();
    let factor_in = if let Some(verts) = b.vertex_list() {
        verts
            .iter()
            .map(|v| a.gauge_unchecked(&apply_matrix(u, v)))
            .fold(0.0, f64::max)
    } else if let Some(facets) = a.facet_halfspaces() {
        facets
            .iter()
            .map(|(n, c)| b.support_unchecked(&apply_matrix_transpose(u, n), res) / c)
            .fold(0.0, f64::max)
    } else {
        sup_over_directions(
            |v| a.gauge_unchecked(v) / b.gauge_unchecked(&apply_matrix(u_inv, v)),
            dim,
            res,
        )
    };
    let factor_out = if let Some(verts) = a.vertex_list() {
        verts
            .iter()
            .map(|v| b.gauge_unchecked(&apply_matrix(u_inv, v)))
            .fold(0.0, f64::max)
    } else if let Some(facets) = b.facet_halfspaces() {
        facets
            .iter()
            .map(|(n, c)| a.support_unchecked(&apply_matrix_transpose(u_inv, n), res) / c)
            .fold(0.0, f64::max)
    } else {
        sup_over_directions(
            |v| b.gauge_unchecked(&apply_matrix(u_inv, v)) / a.gauge_unchecked(v),
            dim,
            res,
        )
    };
    (factor_in, factor_out)
}

/// Multi-start derivative-free minimization of the fixed-position
/// distortion over invertible witness maps applied to `b`. The returned
/// estimate is always achieved by the returned witness, hence a valid
/// upper bound on the distance.
pub fn bm_distance(a: &ConvexBody, b: &ConvexBody, cfg: &OptimizerConfig) -> Result<DistanceReport> {
    cfg.validate()?;
    let n = a.dim();
    if n != b.dim() {
        return Err(Error::Dimension {
            expected: n,
            got: b.dim(),
        });
    }

    let objective = |params: &[f64]| -> f64 {
        let u = DMatrix::from_row_slice(n, n, params);
        let det = u.determinant();
        if det.abs() < 1e-12 || !det.is_finite() {
            return f64::INFINITY;
        }
        match u.clone().try_inverse() {
            Some(u_inv) => {
                let (fi, fo) = map_factors(a, b, &u, &u_inv, Resolution::Fast);
                fi * fo
            }
            None => f64::INFINITY,
        }
    };

    let starts = seed_matrices(a, b, n, cfg);
    let starts_used = starts.len();
    let mut best: Option<(f64, Vec<f64>, bool)> = None;
    for start in &starts {
        let res = nelder_mead(
            objective,
            start.as_slice(),
            0.25,
            NmOptions {
                max_iters: cfg.max_iters,
                x_tol: cfg.tol,
                f_tol: 1e-13,
            },
        );
        let better = match &best {
            None => true,
            Some((v, _, _)) => res.fx < *v,
        };
        if better {
            best = Some((res.fx, res.x, res.converged));
        }
    }
    let (_, params, converged) = best.expect("at least one start");

    // Normalize the witness to unit determinant magnitude and recompute
    // the factors at full resolution.
    let mut u = DMatrix::from_row_slice(n, n, &params);
    let det = u.determinant().abs();
    if det < 1e-12 {
        return Err(Error::search("optimizer collapsed onto a singular matrix"));
    }
    u /= det.powf(1.0 / n as f64);
    let u_inv = u
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::search("witness is numerically singular"))?;
    let (factor_in, factor_out) = map_factors(a, b, &u, &u_inv, Resolution::Full);
    let witness: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| u[(i, j)]).collect())
        .collect();
    Ok(DistanceReport {
        estimate: factor_in * factor_out,
        witness,
        factor_in,
        factor_out,
        converged,
        starts_used,
    })
}

/// Start matrices: identity, axis rebalancing, fixed rotations, and seeded
/// random rotations with mild diagonal perturbations.
fn seed_matrices(
    a: &ConvexBody,
    b: &ConvexBody,
    n: usize,
    cfg: &OptimizerConfig,
) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(cfg.starts);

    let identity = DMatrix::<f64>::identity(n, n);
    starts.push(identity.as_slice().to_vec());

    // Axis rebalancing in the spirit of John positions: match the support
    // widths of the two bodies along the coordinate axes.
    if starts.len() < cfg.starts {
        let mut diag = DMatrix::<f64>::identity(n, n);
        let mut ok = true;
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            let wa = a.support_unchecked(&e, Resolution::Fast);
            let wb = b.support_unchecked(&e, Resolution::Fast);
            if wa <= 0.0 || wb <= 0.0 {
                ok = false;
                break;
            }
            diag[(i, i)] = wa / wb;
        }
        if ok {
            starts.push(diag.as_slice().to_vec());
        }
    }

    if n == 2 {
        for &theta in &[
            std::f64::consts::FRAC_PI_8,
            std::f64::consts::FRAC_PI_4,
            3.0 * std::f64::consts::FRAC_PI_8,
        ] {
            if starts.len() >= cfg.starts {
                break;
            }
            let (s, c) = theta.sin_cos();
            starts.push(vec![c, -s, s, c]);
        }
    }

    while starts.len() < cfg.starts {
        let q = random_rotation(n, &mut rng);
        let mut m = q;
        for i in 0..n {
            let factor = (rng.random_range(-0.5..0.5f64)).exp();
            for j in 0..n {
                m[(i, j)] *= factor;
            }
        }
        starts.push(m.as_slice().to_vec());
    }
    starts.truncate(cfg.starts);
    starts
}

fn random_rotation(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    if n == 2 {
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let (s, c) = theta.sin_cos();
        return DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
    }
    // QR of a Gaussian matrix.
    let g = DMatrix::from_fn(n, n, |_, _| {
        // Box-Muller from two uniforms.
        let u1: f64 = rng.random_range(1e-12..1.0);
        let u2: f64 = rng.random_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    });
    let qr = g.qr();
    let mut q = qr.q();
    if q.determinant() < 0.0 {
        for i in 0..n {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}

/// Apply the witness and the tight scaling so that
/// `B_E ⊆ B_F' ⊆ d * B_E` with both inclusions touching.
pub fn canonical_position(
    a: &ConvexBody,
    b: &ConvexBody,
    cfg: &OptimizerConfig,
) -> Result<(PositionedPair, DistanceReport)> {
    let report = bm_distance(a, b, cfg)?;
    let mapped = b.linear_image(&report.witness_matrix())?;
    let pair = position_pair(a, &mapped)?;
    Ok((pair, report))
}

/// Canonical position without the optimizer: keep both bodies as given and
/// only apply the tight scaling (identity witness).
pub fn canonical_position_fixed(a: &ConvexBody, b: &ConvexBody) -> Result<PositionedPair> {
    position_pair(a, b)
}

fn position_pair(a: &ConvexBody, mapped: &ConvexBody) -> Result<PositionedPair> {
    // Smallest c with a ⊆ c * mapped; scaling by it makes B_E touch B_F.
    let c = mapped.enclosing_factor(a)?;
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::verification("degenerate enclosing factor"));
    }
    let ball_f = mapped.scale(c)?;
    let d = a.enclosing_factor(&ball_f)?;
    let pair = PositionedPair {
        ball_e: a.clone(),
        ball_f,
        d,
    };
    pair.validate()?;
    Ok(pair)
}

/// Ground-truth distance `n^|1/p - 1/q|` between lp balls with both
/// exponents on the same side of 2 (Holder's inequality is sharp there).
pub fn known_lp_distance(p: LpExponent, q: LpExponent, n: usize) -> Result<f64> {
    p.validate()?;
    q.validate()?;
    let (rp, rq) = (p.reciprocal(), q.reciprocal());
    if (rp - 0.5) * (rq - 0.5) < 0.0 {
        return Err(Error::input(
            "exponents straddle 2: the sharp lp distance formula does not apply",
        ));
    }
    Ok((n as f64).powf((rp - rq).abs()))
}

/// Distortion of an explicit linear map applied to `b` against `a`,
/// at full resolution (used by verification layers and tests).
pub fn map_distortion(a: &ConvexBody, b: &ConvexBody, u: &DMatrix<f64>) -> Result<f64> {
    let u_inv = u
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::input("matrix is singular"))?;
    let (fi, fo) = map_factors(a, b, u, &u_inv, Resolution::Full);
    Ok(fi * fo)
}

/// Euclidean condition number of a matrix (largest over smallest singular
/// value); used by property tests to bound the random maps they draw.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let svd = m.clone().svd(false, false);
    let s: &DVector<f64> = &svd.singular_values;
    let max = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}
