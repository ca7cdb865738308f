//! The two extreme interpolating families between positioned bodies —
//! intersection-type and hull-type — together with the laws that certify
//! them: the inclusion chain, the extreme-space distance identities, the
//! multiplicative product law over partitions, path length, the
//! intermediate-space sandwich, and geodesic joining.
//!
//! Pairwise distances along these families are fixed-position distortions:
//! in canonical position the identity map is optimal along the family, so
//! the product law forces every factor to its exponent value.

use serde::Serialize;

use crate::bodies::{inf_convolution, ConvexBody};
use crate::distance::{fixed_position_distance, PositionedPair};
use crate::error::{Error, Result};

/// Which extreme family a simple path samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicKind {
    Intersection,
    Hull,
}

impl GeodesicKind {
    pub fn name(self) -> &'static str {
        match self {
            GeodesicKind::Intersection => "intersection",
            GeodesicKind::Hull => "hull",
        }
    }
}

/// Path structure: a single extreme family, or a concatenation of paths
/// re-parametrized proportionally to log-distance.
#[derive(Debug, Clone)]
pub enum PathKind {
    Simple(GeodesicKind),
    Concatenation(Vec<GeodesicPath>),
}

/// A sampled path of bodies from `ball_e` (at 0) to `ball_f` (at 1).
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    pub pair: PositionedPair,
    pub kind: PathKind,
    pub samples: Vec<(f64, ConvexBody)>,
}

/// Result of a product-law check over one partition.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionCheck {
    pub partition: Vec<f64>,
    pub pairwise: Vec<f64>,
    pub product: f64,
    pub target: f64,
}

/// Per-inclusion slack for the chain `B_E ⊆ C_λ ⊆ B_λ ⊆ B_F` plus the
/// canonical bound `B_F ⊆ d B_E`. Slack is `1 - factor`, nonnegative up
/// to 1e-9 when the inclusion holds.
#[derive(Debug, Clone, Serialize)]
pub struct ChainCheck {
    pub ok: bool,
    pub slacks: [f64; 4],
}

/// The four extreme-space distances at a given exponent.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremeDistances {
    pub e_to_elambda: f64,
    pub elambda_to_f: f64,
    pub e_to_flambda: f64,
    pub flambda_to_f: f64,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) || !lambda.is_finite() {
        return Err(Error::input(format!(
            "lambda must lie in [0, 1], got {lambda}"
        )));
    }
    Ok(())
}

/// Intersection-type interpolant: `(d^lambda B_E) ∩ B_F`.
pub fn b_lambda(pair: &PositionedPair, lambda: f64) -> Result<ConvexBody> {
    check_lambda(lambda)?;
    let scaled = pair.ball_e.scale(pair.d.powf(lambda))?;
    scaled.intersect(&pair.ball_f)
}

/// Hull-type interpolant: `conv(B_E ∪ d^(lambda-1) B_F)`.
pub fn c_lambda(pair: &PositionedPair, lambda: f64) -> Result<ConvexBody> {
    check_lambda(lambda)?;
    let scaled = pair.ball_f.scale(pair.d.powf(lambda - 1.0))?;
    pair.ball_e.hull_union(&scaled)
}

fn body_at_kind(pair: &PositionedPair, kind: GeodesicKind, lambda: f64) -> Result<ConvexBody> {
    match kind {
        GeodesicKind::Intersection => b_lambda(pair, lambda),
        GeodesicKind::Hull => c_lambda(pair, lambda),
    }
}

/// Verify the inclusion chain at `lambda`, returning per-inclusion slack.
pub fn inclusion_chain_check(pair: &PositionedPair, lambda: f64) -> Result<ChainCheck> {
    check_lambda(lambda)?;
    let b = b_lambda(pair, lambda)?;
    let c = c_lambda(pair, lambda)?;
    let factors = [
        c.enclosing_factor(&pair.ball_e)?,      // B_E ⊆ C_λ
        b.enclosing_factor(&c)?,                // C_λ ⊆ B_λ
        pair.ball_f.enclosing_factor(&b)?,      // B_λ ⊆ B_F
        pair.ball_e.enclosing_factor(&pair.ball_f)? / pair.d, // B_F ⊆ d B_E
    ];
    let slacks = factors.map(|f| 1.0 - f);
    let ok = slacks.iter().all(|s| *s >= -1e-9);
    Ok(ChainCheck { ok, slacks })
}

/// Compute the four distances (E, E_λ), (E_λ, F), (E, F_λ), (F_λ, F) and
/// assert they equal d^λ, d^(1-λ), d^λ, d^(1-λ) within 1e-6 relative.
pub fn extreme_distance_check(pair: &PositionedPair, lambda: f64) -> Result<ExtremeDistances> {
    check_lambda(lambda)?;
    let b = b_lambda(pair, lambda)?;
    let c = c_lambda(pair, lambda)?;
    let result = ExtremeDistances {
        e_to_elambda: fixed_position_distance(&pair.ball_e, &b)?,
        elambda_to_f: fixed_position_distance(&b, &pair.ball_f)?,
        e_to_flambda: fixed_position_distance(&pair.ball_e, &c)?,
        flambda_to_f: fixed_position_distance(&c, &pair.ball_f)?,
    };
    let d_lo = pair.d.powf(lambda);
    let d_hi = pair.d.powf(1.0 - lambda);
    let checks = [
        ("d(E, E_lambda) = d^lambda", result.e_to_elambda, d_lo),
        ("d(E_lambda, F) = d^(1-lambda)", result.elambda_to_f, d_hi),
        ("d(E, F_lambda) = d^lambda", result.e_to_flambda, d_lo),
        ("d(F_lambda, F) = d^(1-lambda)", result.flambda_to_f, d_hi),
    ];
    for (name, got, want) in checks {
        if (got - want).abs() > 1e-6 * want.max(1.0) {
            return Err(Error::verification(format!(
                "extreme-space identity violated: {name} (got {got}, want {want}, lambda {lambda})"
            )));
        }
    }
    Ok(result)
}

/// Sample one extreme family over a sorted grid with endpoints 0 and 1,
/// then validate the path invariants.
pub fn build_path(
    pair: &PositionedPair,
    kind: GeodesicKind,
    grid: &[f64],
) -> Result<GeodesicPath> {
    if grid.len() < 2 {
        return Err(Error::input("grid needs at least the endpoints 0 and 1"));
    }
    if grid[0] != 0.0 || *grid.last().unwrap() != 1.0 {
        return Err(Error::input("grid must start at 0 and end at 1"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input("grid must be strictly increasing"));
    }
    let mut samples = Vec::with_capacity(grid.len());
    for &lambda in grid {
        samples.push((lambda, body_at_kind(pair, kind, lambda)?));
    }
    let path = GeodesicPath {
        pair: pair.clone(),
        kind: PathKind::Simple(kind),
        samples,
    };
    path.validate()?;
    Ok(path)
}

impl GeodesicPath {
    /// Invariants: lambda strictly increasing from 0 to 1, and every
    /// sampled body sits between `ball_e` and `ball_f` (1e-9 slack).
    pub fn validate(&self) -> Result<()> {
        if self.samples.len() < 2 {
            return Err(Error::verification("path needs at least two samples"));
        }
        if self.samples[0].0 != 0.0 || self.samples.last().unwrap().0 != 1.0 {
            return Err(Error::verification("path must span lambda in [0, 1]"));
        }
        if self.samples.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::verification("path lambdas must strictly increase"));
        }
        for (lambda, body) in &self.samples {
            let contains_e = body.enclosing_factor(&self.pair.ball_e)?;
            if contains_e > 1.0 + 1e-9 {
                return Err(Error::verification(format!(
                    "sample at lambda {lambda} does not contain B_E (factor {contains_e})"
                )));
            }
            let inside_f = self.pair.ball_f.enclosing_factor(body)?;
            if inside_f > 1.0 + 1e-9 {
                return Err(Error::verification(format!(
                    "sample at lambda {lambda} is not inside B_F (factor {inside_f})"
                )));
            }
        }
        Ok(())
    }

    /// Body at parameter `t`: the stored sample when present, otherwise
    /// computed from the path structure.
    pub fn body_at(&self, t: f64) -> Result<ConvexBody> {
        if let Some((_, body)) = self
            .samples
            .iter()
            .find(|(lambda, _)| (lambda - t).abs() <= 1e-12)
        {
            return Ok(body.clone());
        }
        match &self.kind {
            PathKind::Simple(kind) => body_at_kind(&self.pair, *kind, t),
            PathKind::Concatenation(parts) => {
                check_lambda(t)?;
                let log_total: f64 = self.pair.d.ln();
                if log_total <= 0.0 {
                    return Ok(self.pair.ball_e.clone());
                }
                let mut offset = 0.0f64;
                for part in parts {
                    let span = part.pair.d.ln() / log_total;
                    if t <= offset + span + 1e-12 {
                        let local = ((t - offset) / span).clamp(0.0, 1.0);
                        return part.body_at(local);
                    }
                    offset += span;
                }
                parts
                    .last()
                    .expect("concatenation has parts")
                    .body_at(1.0)
            }
        }
    }
}

/// Check the multiplicative law over one partition of [0, 1]: every
/// consecutive fixed-position distance must equal `d^(t_i - t_(i-1))` and
/// the product must equal `d`, within 1e-6 relative.
pub fn geodesic_product_check(path: &GeodesicPath, partition: &[f64]) -> Result<PartitionCheck> {
    let mut cache = std::collections::HashMap::new();
    product_check_cached(path, partition, &mut cache)
}

/// Check many partitions of the same path; interval distances are shared
/// across partitions, so repeated sub-intervals are computed once.
pub fn geodesic_product_check_many(
    path: &GeodesicPath,
    partitions: &[Vec<f64>],
) -> Result<Vec<PartitionCheck>> {
    let mut cache = std::collections::HashMap::new();
    partitions
        .iter()
        .map(|p| product_check_cached(path, p, &mut cache))
        .collect()
}

fn product_check_cached(
    path: &GeodesicPath,
    partition: &[f64],
    cache: &mut std::collections::HashMap<(u64, u64), f64>,
) -> Result<PartitionCheck> {
    if partition.len() < 2 {
        return Err(Error::input("partition needs at least two points"));
    }
    if partition.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input("partition must be strictly increasing"));
    }
    let d = path.pair.d;
    let mut pairwise = Vec::with_capacity(partition.len() - 1);
    let mut product = 1.0f64;
    for i in 1..partition.len() {
        let (lo, hi) = (partition[i - 1], partition[i]);
        check_lambda(lo)?;
        check_lambda(hi)?;
        let key = (lo.to_bits(), hi.to_bits());
        let factor = match cache.get(&key) {
            Some(f) => *f,
            None => {
                let f =
                    fixed_position_distance(&path.body_at(lo)?, &path.body_at(hi)?)?;
                cache.insert(key, f);
                f
            }
        };
        let want = d.powf(hi - lo);
        if (factor - want).abs() > 1e-6 * want.max(1.0) {
            return Err(Error::verification(format!(
                "product law violated on [{lo}, {hi}]: factor {factor}, want {want}"
            )));
        }
        product *= factor;
        pairwise.push(factor);
    }
    if (product - d).abs() > 1e-6 * d.max(1.0) {
        return Err(Error::verification(format!(
            "product over partition is {product}, want {d}"
        )));
    }
    Ok(PartitionCheck {
        partition: partition.to_vec(),
        pairwise,
        product,
        target: d,
    })
}

/// Length of the path as the supremum over nested dyadic partitions up to
/// the given depth of the sum of log fixed-position distances.
pub fn path_length(path: &GeodesicPath, refinement: u32) -> Result<f64> {
    if refinement < 1 {
        return Err(Error::input("refinement must be at least 1"));
    }
    let mut best = 0.0f64;
    for depth in 1..=refinement {
        let n = 1usize << depth;
        let mut sum = 0.0f64;
        let mut prev = path.body_at(0.0)?;
        for i in 1..=n {
            let t = i as f64 / n as f64;
            let next = path.body_at(t)?;
            sum += fixed_position_distance(&prev, &next)?.ln();
            prev = next;
        }
        if sum > best {
            best = sum;
        }
    }
    Ok(best)
}

/// Sum of log distances over one dyadic partition at a fixed depth;
/// exposed so tests can observe per-depth values.
pub fn dyadic_length_at_depth(path: &GeodesicPath, depth: u32) -> Result<f64> {
    let n = 1usize << depth;
    let mut sum = 0.0f64;
    let mut prev = path.body_at(0.0)?;
    for i in 1..=n {
        let t = i as f64 / n as f64;
        let next = path.body_at(t)?;
        sum += fixed_position_distance(&prev, &next)?.ln();
        prev = next;
    }
    Ok(sum)
}

/// Sandwich test: `X` lies between the hull-type and intersection-type
/// interpolants at `lambda`. When the inclusions hold, the multiplicative
/// identity `d(E, X) * d(X, F) = d` is also asserted (1e-6 relative).
pub fn sandwich_check(x: &ConvexBody, pair: &PositionedPair, lambda: f64) -> Result<bool> {
    check_lambda(lambda)?;
    if x.dim() != pair.dim() {
        return Err(Error::Dimension {
            expected: pair.dim(),
            got: x.dim(),
        });
    }
    let b = b_lambda(pair, lambda)?;
    let c = c_lambda(pair, lambda)?;
    let lower = x.enclosing_factor(&c)?; // C_λ ⊆ X
    let upper = b.enclosing_factor(x)?; // X ⊆ B_λ
    if lower > 1.0 + 1e-9 || upper > 1.0 + 1e-9 {
        return Ok(false);
    }
    let to_e = fixed_position_distance(&pair.ball_e, x)?;
    let to_f = fixed_position_distance(x, &pair.ball_f)?;
    if (to_e * to_f - pair.d).abs() > 1e-6 * pair.d.max(1.0) {
        return Err(Error::verification(format!(
            "sandwiched body violates multiplicativity: d(E,X) d(X,F) = {} vs d = {}",
            to_e * to_f,
            pair.d
        )));
    }
    Ok(true)
}

/// Join two paths at a shared junction body, re-parametrizing
/// proportionally to log-distance. The junction must be an intermediate
/// body between the outer endpoints.
pub fn join_geodesics(first: &GeodesicPath, second: &GeodesicPath) -> Result<GeodesicPath> {
    // A constant piece contributes nothing.
    if second.pair.d <= 1.0 + 1e-12 {
        if !first
            .pair
            .ball_f
            .gauge_equal(&second.pair.ball_e, 1e-9)?
        {
            return Err(Error::input("junction bodies are not gauge-equal"));
        }
        return Ok(first.clone());
    }
    if first.pair.d <= 1.0 + 1e-12 {
        if !first
            .pair
            .ball_f
            .gauge_equal(&second.pair.ball_e, 1e-9)?
        {
            return Err(Error::input("junction bodies are not gauge-equal"));
        }
        return Ok(second.clone());
    }

    if !first.pair.ball_f.gauge_equal(&second.pair.ball_e, 1e-9)? {
        return Err(Error::input("junction bodies are not gauge-equal"));
    }
    let d1 = first.pair.d;
    let d2 = second.pair.d;
    let total = fixed_position_distance(&first.pair.ball_e, &second.pair.ball_f)?;
    if (total - d1 * d2).abs() > 1e-6 * (d1 * d2) {
        return Err(Error::input(format!(
            "junction is not an intermediate body: d(E,F) = {total} vs d(E,X) d(X,F) = {}",
            d1 * d2
        )));
    }

    let pair = PositionedPair {
        ball_e: first.pair.ball_e.clone(),
        ball_f: second.pair.ball_f.clone(),
        d: d1 * d2,
    };
    pair.validate()?;

    let split = d1.ln() / (d1 * d2).ln();
    let mut samples: Vec<(f64, ConvexBody)> = Vec::new();
    for (lambda, body) in &first.samples {
        samples.push((lambda * split, body.clone()));
    }
    for (lambda, body) in &second.samples {
        if *lambda == 0.0 {
            continue; // junction already present from the first path
        }
        samples.push((split + lambda * (1.0 - split), body.clone()));
    }
    let path = GeodesicPath {
        pair,
        kind: PathKind::Concatenation(vec![first.clone(), second.clone()]),
        samples,
    };
    path.validate()?;
    Ok(path)
}

/// The interpolated gauges at `x` by their closed forms: the
/// intersection-type gauge `max(d^-λ gauge_E, gauge_F)` and the hull-type
/// gauge as the inf-convolution of `gauge_E` with `d^(1-λ) gauge_F`. Both
/// are checked against the constructed bodies' gauges (1e-6 relative).
pub fn kj_gauges(pair: &PositionedPair, lambda: f64, x: &[f64]) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    let ge = pair.ball_e.gauge(x)?;
    let gf = pair.ball_f.gauge(x)?;
    let k_value = (pair.d.powf(-lambda) * ge).max(gf);

    let scaled_f = pair.ball_f.scale(pair.d.powf(lambda - 1.0))?;
    let j_value = inf_convolution(&pair.ball_e, &scaled_f, x);

    let b = b_lambda(pair, lambda)?;
    let c = c_lambda(pair, lambda)?;
    let gb = b.gauge(x)?;
    let gc = c.gauge(x)?;
    if (k_value - gb).abs() > 1e-6 * gb.max(1.0) {
        return Err(Error::verification(format!(
            "intersection-type gauge mismatch: closed form {k_value} vs body {gb}"
        )));
    }
    if (j_value - gc).abs() > 1e-6 * gc.max(1.0) {
        return Err(Error::verification(format!(
            "hull-type gauge mismatch: closed form {j_value} vs body {gc}"
        )));
    }
    Ok((k_value, j_value))
}
