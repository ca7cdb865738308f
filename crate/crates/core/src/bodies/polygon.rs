//! Exact kernel for origin-symmetric convex polygons. All predicates and
//! constructions (hull, halfplane clipping, gauges) run in rational
//! arithmetic; floats are derived views. This keeps the face structure of
//! iterated intersections and hulls stable, which the family
//! constructions depend on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{cross, orient, rat_from_f64, rat_to_f64, RatVec2};
use crate::error::{Error, Result};

/// Relative tolerance for merging near-collinear vertices (heights are
/// compared against `MERGE_EPS * diameter`).
pub const MERGE_EPS: f64 = 1e-9;

/// One edge's supporting line `normal . x <= offset`, with the outward
/// normal; `offset > 0` because the origin is interior.
#[derive(Debug, Clone)]
pub struct EdgeLine {
    pub normal: RatVec2,
    pub offset: BigRational,
}

/// Origin-symmetric convex polygon with counterclockwise exact vertices.
#[derive(Debug, Clone)]
pub struct Polygon2 {
    verts: Vec<RatVec2>,
    edges: Vec<EdgeLine>,
    verts_f64: Vec<[f64; 2]>,
    edges_f64: Vec<([f64; 2], f64)>,
}

impl Polygon2 {
    /// Build from float vertices: snap to the dyadic grid, apply the
    /// symmetric closure (a no-op for already-symmetric input), hull, and
    /// normalize.
    pub fn from_f64_vertices(points: &[[f64; 2]]) -> Result<Self> {
        let mut verts = Vec::with_capacity(points.len() * 2);
        for p in points {
            verts.push(RatVec2::snapped(p[0], p[1])?);
        }
        let negated: Vec<RatVec2> = verts.iter().map(RatVec2::neg).collect();
        verts.extend(negated);
        Self::from_rat_vertices(verts)
    }

    /// Build from exact vertices (hulls the set, merges slivers, checks
    /// all invariants). The vertex set must already be symmetric.
    pub fn from_rat_vertices(mut verts: Vec<RatVec2>) -> Result<Self> {
        verts.sort();
        verts.dedup();
        if verts.len() < 4 {
            return Err(Error::input(format!(
                "polygon needs at least 4 distinct symmetric vertices, got {}",
                verts.len()
            )));
        }
        let mut hull = convex_hull(&verts);
        merge_slivers(&mut hull)?;
        if hull.len() < 4 {
            return Err(Error::input(
                "polygon degenerates to fewer than 4 vertices after merging",
            ));
        }
        check_symmetry(&hull)?;

        let mut edges = Vec::with_capacity(hull.len());
        for i in 0..hull.len() {
            let a = &hull[i];
            let b = &hull[(i + 1) % hull.len()];
            let offset = cross(a, b);
            if offset <= BigRational::zero() {
                return Err(Error::input(
                    "origin is not strictly interior to the polygon",
                ));
            }
            let d = b.sub(a);
            edges.push(EdgeLine {
                normal: RatVec2::new(d.y.clone(), -d.x.clone()),
                offset,
            });
        }

        let verts_f64: Vec<[f64; 2]> = hull.iter().map(RatVec2::to_f64).collect();
        let edges_f64: Vec<([f64; 2], f64)> = edges
            .iter()
            .map(|e| (e.normal.to_f64(), rat_to_f64(&e.offset)))
            .collect();
        Ok(Polygon2 {
            verts: hull,
            edges,
            verts_f64,
            edges_f64,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn vertices(&self) -> &[RatVec2] {
        &self.verts
    }

    pub fn vertices_f64(&self) -> &[[f64; 2]] {
        &self.verts_f64
    }

    pub fn edge_lines(&self) -> &[EdgeLine] {
        &self.edges
    }

    /// Endpoints of edge `i` as floats.
    pub fn edge_f64(&self, i: usize) -> ([f64; 2], [f64; 2]) {
        (
            self.verts_f64[i],
            self.verts_f64[(i + 1) % self.verts_f64.len()],
        )
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self
            .verts_f64
            .iter()
            .map(|v| v[0].hypot(v[1]))
            .fold(0.0, f64::max)
    }

    /// Minkowski gauge, exact.
    pub fn gauge_rat(&self, x: &RatVec2) -> BigRational {
        let mut best = BigRational::zero();
        for e in &self.edges {
            let value = e.normal.dot(x) / &e.offset;
            if value > best {
                best = value;
            }
        }
        best
    }

    /// Minkowski gauge on the float cache.
    pub fn gauge_f64(&self, x: [f64; 2]) -> f64 {
        let mut best = 0.0f64;
        for (n, c) in &self.edges_f64 {
            let value = (n[0] * x[0] + n[1] * x[1]) / c;
            if value > best {
                best = value;
            }
        }
        best
    }

    /// Support function, exact maximum over vertices.
    pub fn support_rat(&self, u: &RatVec2) -> BigRational {
        self.verts
            .iter()
            .map(|v| u.dot(v))
            .max()
            .expect("polygon has vertices")
    }

    pub fn support_f64(&self, u: [f64; 2]) -> f64 {
        self.verts_f64
            .iter()
            .map(|v| u[0] * v[0] + u[1] * v[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains_rat(&self, x: &RatVec2) -> bool {
        self.edges.iter().all(|e| e.normal.dot(x) <= e.offset)
    }

    /// Smallest `L` with `outer ⊆ L * self`, exact.
    pub fn enclosing_factor_rat(&self, outer: &Polygon2) -> BigRational {
        outer
            .verts
            .iter()
            .map(|v| self.gauge_rat(v))
            .max()
            .expect("polygon has vertices")
    }

    /// Clip by the halfplane `normal . x <= offset`, exactly.
    pub fn clip_halfplane(&self, normal: &RatVec2, offset: &BigRational) -> Result<Polygon2> {
        let ring = clip_ring(&self.verts, normal, offset)?;
        Polygon2::from_rat_vertices(ring)
    }

    /// Exact intersection of two polygons.
    pub fn intersect(&self, other: &Polygon2) -> Result<Polygon2> {
        let mut ring = self.verts.clone();
        for e in &other.edges {
            ring = clip_ring(&ring, &e.normal, &e.offset)?;
        }
        Polygon2::from_rat_vertices(ring)
    }

    /// Exact convex hull of the union of the two vertex sets.
    pub fn hull_union(&self, other: &Polygon2) -> Result<Polygon2> {
        let mut verts = self.verts.clone();
        verts.extend(other.verts.iter().cloned());
        Polygon2::from_rat_vertices(verts)
    }

    /// Exact convex hull of this polygon together with extra symmetric
    /// points (used by the family constructions).
    pub fn hull_with_points(&self, extra: &[RatVec2]) -> Result<Polygon2> {
        let mut verts = self.verts.clone();
        for p in extra {
            verts.push(p.clone());
            verts.push(p.neg());
        }
        Polygon2::from_rat_vertices(verts)
    }

    pub fn scale_rat(&self, factor: &BigRational) -> Result<Polygon2> {
        if *factor <= BigRational::zero() {
            return Err(Error::input("scale factor must be positive"));
        }
        let verts = self
            .verts
            .iter()
            .map(|v| RatVec2::new(&v.x * factor, &v.y * factor))
            .collect();
        Polygon2::from_rat_vertices(verts)
    }

    pub fn scale(&self, factor: f64) -> Result<Polygon2> {
        if !(factor > 0.0) {
            return Err(Error::input(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        self.scale_rat(&rat_from_f64(factor)?)
    }

    /// Image under an invertible 2x2 matrix (row-major), exact.
    pub fn linear_image(&self, m: &[[f64; 2]; 2]) -> Result<Polygon2> {
        let a = rat_from_f64(m[0][0])?;
        let b = rat_from_f64(m[0][1])?;
        let c = rat_from_f64(m[1][0])?;
        let d = rat_from_f64(m[1][1])?;
        let det = &a * &d - &b * &c;
        if det.is_zero() {
            return Err(Error::input("linear image requires an invertible matrix"));
        }
        let verts = self
            .verts
            .iter()
            .map(|v| RatVec2::new(&a * &v.x + &b * &v.y, &c * &v.x + &d * &v.y))
            .collect();
        Polygon2::from_rat_vertices(verts)
    }

    /// Areas of the origin-anchored triangles over each edge, exact.
    /// The triangle over edge `(v_i, v_{i+1})` has area `offset_i / 2`.
    pub fn edge_triangle_areas(&self) -> Vec<BigRational> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        self.edges.iter().map(|e| &e.offset * &half).collect()
    }

    /// Exact vertex-set equality.
    pub fn same_vertex_set(&self, other: &Polygon2) -> bool {
        if self.verts.len() != other.verts.len() {
            return false;
        }
        let mut a = self.verts.clone();
        let mut b = other.verts.clone();
        a.sort();
        b.sort();
        a == b
    }
}

/// Monotone-chain convex hull with exact strict-turn predicates; collinear
/// boundary points are dropped. Input must be sorted and deduped.
fn convex_hull(points: &[RatVec2]) -> Vec<RatVec2> {
    let n = points.len();
    if n < 3 {
        return points.to_vec();
    }
    let mut lower: Vec<RatVec2> = Vec::with_capacity(n);
    for p in points {
        while lower.len() >= 2
            && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= BigRational::zero()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<RatVec2> = Vec::with_capacity(n);
    for p in points.iter().rev() {
        while upper.len() >= 2
            && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= BigRational::zero()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Drop vertices whose height over the chord of their neighbours is below
/// `MERGE_EPS * diameter`. Vertices are removed together with their
/// antipodes so symmetry is preserved.
fn merge_slivers(ring: &mut Vec<RatVec2>) -> Result<()> {
    loop {
        if ring.len() <= 4 {
            return Ok(());
        }
        let pts: Vec<[f64; 2]> = ring.iter().map(RatVec2::to_f64).collect();
        let diam = 2.0 * pts.iter().map(|v| v[0].hypot(v[1])).fold(0.0, f64::max);
        let mut worst: Option<(usize, f64)> = None;
        let n = ring.len();
        for i in 0..n {
            let prev = pts[(i + n - 1) % n];
            let next = pts[(i + 1) % n];
            let base = [next[0] - prev[0], next[1] - prev[1]];
            let base_len = base[0].hypot(base[1]);
            if base_len == 0.0 {
                continue;
            }
            let rel = [pts[i][0] - prev[0], pts[i][1] - prev[1]];
            let height = (base[0] * rel[1] - base[1] * rel[0]).abs() / base_len;
            if worst.is_none_or(|(_, h)| height < h) {
                worst = Some((i, height));
            }
        }
        match worst {
            Some((i, height)) if height <= MERGE_EPS * diam => {
                let v = ring[i].clone();
                let anti = v.neg();
                ring.retain(|p| *p != v && *p != anti);
                if ring.len() < 4 {
                    return Err(Error::input(
                        "polygon degenerates under collinear merging",
                    ));
                }
            }
            _ => return Ok(()),
        }
    }
}

fn check_symmetry(ring: &[RatVec2]) -> Result<()> {
    let mut plain = ring.to_vec();
    let mut negated: Vec<RatVec2> = ring.iter().map(RatVec2::neg).collect();
    plain.sort();
    negated.sort();
    if plain != negated {
        return Err(Error::input("polygon vertex set is not origin-symmetric"));
    }
    Ok(())
}

/// Sutherland-Hodgman step against `normal . x <= offset`, exact.
fn clip_ring(ring: &[RatVec2], normal: &RatVec2, offset: &BigRational) -> Result<Vec<RatVec2>> {
    let n = ring.len();
    let mut out = Vec::with_capacity(n + 2);
    let margins: Vec<BigRational> = ring.iter().map(|v| offset - normal.dot(v)).collect();
    for i in 0..n {
        let j = (i + 1) % n;
        let (fa, fb) = (&margins[i], &margins[j]);
        if !fa.is_negative() {
            out.push(ring[i].clone());
        }
        if (fa.is_positive() && fb.is_negative()) || (fa.is_negative() && fb.is_positive()) {
            let t = fa / (fa - fb);
            let d = ring[j].sub(&ring[i]);
            out.push(RatVec2::new(
                &ring[i].x + &d.x * &t,
                &ring[i].y + &d.y * &t,
            ));
        }
    }
    if out.len() < 3 {
        return Err(Error::input(
            "halfplane clipping emptied the polygon (no interior origin?)",
        ));
    }
    Ok(out)
}
