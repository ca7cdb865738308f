//! Sample-scale families of pairwise non-isometric intermediate bodies:
//! face enumeration, the triangle-area-ratio isometry invariant,
//! separation witnesses between the two extreme interpolants, the 2D
//! family built by attaching a vertex pair plus a movable point, and the
//! 3D family built by attaching a polygonal face.

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;
use std::collections::BTreeSet;

use crate::bodies::rational::{rat_to_f64, RatVec2};
use crate::bodies::{sample_directions, ConvexBody, Polygon2, Polytope3};
use crate::distance::{canonical_position_fixed, PositionedPair};
use crate::error::{Error, Result};
use crate::geodesics::{b_lambda, c_lambda, sandwich_check};

/// One edge of a polygon after collinear merging.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeFace {
    pub endpoints: ([f64; 2], [f64; 2]),
    pub index: usize,
}

/// All 1-faces (edges) of the polygon; for a polygon this is the complete
/// finite set.
pub fn faces_1d(poly: &Polygon2) -> Vec<EdgeFace> {
    (0..poly.vertex_count())
        .map(|i| {
            let (a, b) = poly.edge_f64(i);
            EdgeFace {
                endpoints: (a, b),
                index: i,
            }
        })
        .collect()
}

/// Sorted multiset of the ratios of areas of origin-anchored edge
/// triangles; invariant under invertible linear maps because the
/// determinant cancels in every ratio.
#[derive(Debug, Clone, Serialize)]
pub struct AreaRatioInvariant {
    pub ratios: Vec<f64>,
}

/// Compute the invariant exactly: all ordered pair ratios of edge-triangle
/// areas, deduplicated in rational arithmetic.
pub fn area_ratios(poly: &Polygon2) -> AreaRatioInvariant {
    let areas = poly.edge_triangle_areas();
    let mut set: BTreeSet<BigRational> = BTreeSet::new();
    for a in &areas {
        for b in &areas {
            set.insert(a / b);
        }
    }
    let ratios: Vec<f64> = set.iter().map(rat_to_f64).collect();
    AreaRatioInvariant { ratios }
}

impl AreaRatioInvariant {
    /// Membership at relative tolerance `tol`.
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        // ratios are sorted; a binary search narrows the window.
        let lo = self
            .ratios
            .partition_point(|r| *r < value * (1.0 - tol) - tol * 1e-12);
        self.ratios[lo..]
            .iter()
            .take_while(|r| **r <= value * (1.0 + tol) + tol * 1e-12)
            .any(|r| (r - value).abs() <= tol * r.abs().max(value.abs()).max(1e-12))
    }
}

/// Distinct invariants certify non-isometry; equality is inconclusive.
/// True iff the multisets differ beyond relative tolerance 1e-7 (one
/// missing element on either side suffices).
pub fn invariant_distinct(a: &AreaRatioInvariant, b: &AreaRatioInvariant) -> bool {
    const TOL: f64 = 1e-7;
    let a_in_b = a.ratios.iter().all(|r| b.contains(*r, TOL));
    if !a_in_b {
        return true;
    }
    let b_in_a = b.ratios.iter().all(|r| a.contains(*r, TOL));
    !b_in_a
}

/// A point strictly between the hull-type and intersection-type
/// interpolants, with a functional separating it from the hull-type body.
#[derive(Debug, Clone, Serialize)]
pub struct SeparationWitness {
    pub point: Vec<f64>,
    pub functional: Vec<f64>,
    pub margin_out: f64,
    pub margin_in: f64,
}

const WITNESS_BOUNDARY_SAMPLES: usize = 8192;
const WITNESS_PULLS: [f64; 5] = [1e-4, 1e-3, 1e-2, 0.03, 0.05];

/// Find a witness that `C_λ ⊊ B_λ`: scan the boundary of `B_F` away from
/// its contact set with `B_E`, pull candidates slightly inward, and keep
/// the one maximizing the smaller of the two margins.
pub fn separation_witness(pair: &PositionedPair, lambda: f64) -> Result<SeparationWitness> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::input(format!(
            "separation needs 0 < lambda < 1, got {lambda}"
        )));
    }
    if pair.d <= 1.0 + 1e-6 {
        return Err(Error::input(
            "separation requires a non-isometric pair (d > 1 + 1e-6)",
        ));
    }
    let dim = pair.dim();
    let d_lambda = pair.d.powf(lambda);
    let c_body = c_lambda(pair, lambda)?;
    let b_gauge = |x: &[f64]| -> f64 {
        (pair.ball_e.gauge_unchecked(x) / d_lambda).max(pair.ball_f.gauge_unchecked(x))
    };

    // Candidates ranked by the cheap inner margin; the outer margin
    // (against the hull-type body) is evaluated lazily in rank order.
    let mut candidates: Vec<(f64, Vec<f64>)> = Vec::new();
    for dir in sample_directions(dim, WITNESS_BOUNDARY_SAMPLES, 0x5EB1) {
        let gf = pair.ball_f.gauge_unchecked(&dir);
        if gf <= 0.0 {
            continue;
        }
        let x: Vec<f64> = dir.iter().map(|v| v / gf).collect();
        let phi = pair.ball_e.gauge_unchecked(&x);
        if phi <= 1.0 + 1e-9 || phi >= d_lambda * (1.0 - 1e-9) {
            continue;
        }
        for eta in WITNESS_PULLS {
            let pt: Vec<f64> = x.iter().map(|v| v * (1.0 - eta)).collect();
            let margin_in = 1.0 - b_gauge(&pt);
            if margin_in > 0.0 {
                candidates.push((margin_in, pt));
            }
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut best: Option<(f64, SeparationWitness)> = None;
    let mut evaluated = 0usize;
    for (margin_in, pt) in &candidates {
        if let Some((score, _)) = &best {
            if margin_in <= score {
                break; // no remaining candidate can improve the min-margin
            }
        }
        if evaluated >= 600 {
            break;
        }
        evaluated += 1;
        let margin_out = c_body.gauge_unchecked(pt) - 1.0;
        if margin_out <= 0.0 {
            continue;
        }
        let score = margin_in.min(margin_out);
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            let functional = separating_functional(&c_body, pt)?;
            best = Some((
                score,
                SeparationWitness {
                    point: pt.clone(),
                    functional,
                    margin_out,
                    margin_in: *margin_in,
                },
            ));
        }
    }
    best.map(|(_, w)| w).ok_or_else(|| {
        Error::search(format!(
            "no separation witness at resolution {WITNESS_BOUNDARY_SAMPLES} directions, \
             finest inward pull {:.0e}; the pair may be near-isometric or lambda too extreme",
            WITNESS_PULLS[0]
        ))
    })
}

/// A linear functional `f` with `sup over the body of f = 1` and
/// `f(point) = gauge(point) > 1`: the supporting direction of the gauge.
fn separating_functional(body: &ConvexBody, point: &[f64]) -> Result<Vec<f64>> {
    // Polytopes carry their facet lines: the one attaining the gauge is
    // the exact supporting functional.
    if let Some(facets) = body.facet_halfspaces() {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for (n, c) in facets {
            let value = n.iter().zip(point).map(|(a, b)| a * b).sum::<f64>() / c;
            if best.as_ref().is_none_or(|(v, _)| value > *v) {
                best = Some((value, n.iter().map(|a| a / c).collect()));
            }
        }
        return Ok(best.expect("polytope has facets").1);
    }
    // Dual search: maximize <u, point> / h_body(u) over directions.
    let dim = body.dim();
    let mut best_val = f64::NEG_INFINITY;
    let mut best_dir = vec![0.0; dim];
    for u in sample_directions(dim, 4096, 0xF0) {
        let h = body.support_unchecked(&u, crate::bodies::Resolution::Full);
        let dot: f64 = u.iter().zip(point).map(|(a, b)| a * b).sum();
        let v = dot / h;
        if v > best_val {
            best_val = v;
            best_dir = u;
        }
    }
    let h = body.support_unchecked(&best_dir, crate::bodies::Resolution::Full);
    Ok(best_dir.into_iter().map(|v| v / h).collect())
}

/// One member of the 2D family: the body plus the construction data that
/// certifies it.
#[derive(Debug, Clone)]
pub struct BqMember {
    pub body: ConvexBody,
    pub q: [f64; 2],
    pub ratio: f64,
    pub invariant: AreaRatioInvariant,
}

/// The 2D family, together with the shared construction geometry.
#[derive(Debug, Clone)]
pub struct BqFamily {
    pub members: Vec<BqMember>,
    pub pair: PositionedPair,
    pub lambda: f64,
    pub p1: [f64; 2],
    pub p2: [f64; 2],
    pub witness: SeparationWitness,
    pub b_invariant: AreaRatioInvariant,
    pub c_invariant: AreaRatioInvariant,
}

struct BqGeometry {
    c_poly: Polygon2,
    b_poly: Polygon2,
    p1: RatVec2,
    p2: RatVec2,
    x: [f64; 2],
    delta: f64,
    u_f: [f64; 2],
    w: [f64; 2],
}

/// Build `count` pairwise non-isometric bodies sandwiched between the two
/// extreme interpolants, each carrying a fresh pair of faces meeting at a
/// movable vertex whose triangle-area ratio is a chosen invariant value.
pub fn bq_family(pair: &PositionedPair, lambda: f64, count: usize) -> Result<BqFamily> {
    if pair.dim() != 2 {
        return Err(Error::input("the vertex-attachment family is 2-dimensional"));
    }
    if count < 1 {
        return Err(Error::input("family count must be at least 1"));
    }
    // Gauge bodies are replaced by inscribed polygons (with the
    // positioning recomputed) so all face structure is exact.
    let pair = polygonal_pair(pair)?;
    let witness = separation_witness(&pair, lambda)?;
    let geom = family_geometry(&pair, lambda, &witness)?;

    let ratio_at = |t: f64| -> Result<(RatVec2, f64)> {
        let qx = geom.x[0] + 0.5 * geom.delta * geom.u_f[0] + t * geom.w[0];
        let qy = geom.x[1] + 0.5 * geom.delta * geom.u_f[1] + t * geom.w[1];
        let q = RatVec2::snapped(qx, qy)?;
        let r = triangle_ratio(&geom.p1, &geom.p2, &q);
        Ok((q, r))
    };

    let t_max = 0.98 * geom.delta * 3f64.sqrt() / 2.0;
    let (_, r_lo) = ratio_at(-t_max)?;
    let (_, r_hi) = ratio_at(t_max)?;
    if (r_lo - r_hi).abs() < 1e-9 {
        return Err(Error::construction(
            "endpoint area ratios coincide; try a different lambda",
        ));
    }
    let (r_min, r_max) = (r_lo.min(r_hi), r_lo.max(r_hi));
    let span = r_max - r_min;
    const GAP: f64 = 1e-3;
    if span < (count + 1) as f64 * GAP {
        return Err(Error::construction(format!(
            "admissible ratio interval ({r_min:.6}, {r_max:.6}) is too narrow for {count} \
             members with gaps >= {GAP}; reduce the count or move lambda"
        )));
    }

    // Values the new ratio must avoid: everything already present in the
    // two extreme bodies' invariants (and reciprocals, which are present
    // by closure).
    let b_invariant = area_ratios(&geom.b_poly);
    let c_invariant = area_ratios(&geom.c_poly);
    let forbidden = |r: f64| -> bool {
        b_invariant.contains(r, 3e-7) || c_invariant.contains(r, 3e-7)
    };

    let mut targets: Vec<f64> = Vec::with_capacity(count);
    let step = span / (count + 1) as f64;
    for i in 1..=count {
        let mut r = r_min + step * i as f64;
        let mut nudge = 0;
        while forbidden(r) && nudge < 50 {
            r += GAP / 7.0;
            nudge += 1;
        }
        if forbidden(r) {
            return Err(Error::construction(
                "could not find an admissible ratio value clear of both invariants",
            ));
        }
        targets.push(r);
    }

    let increasing = r_lo < r_hi;
    let mut members: Vec<BqMember> = Vec::with_capacity(count);
    for &target in &targets {
        // The ratio is monotone along the chord (the two areas have a
        // constant sum), so bisection suffices.
        let (mut lo, mut hi) = (-t_max, t_max);
        if !increasing {
            std::mem::swap(&mut lo, &mut hi);
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let (_, r) = ratio_at(mid)?;
            if r < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (q, ratio) = ratio_at(0.5 * (lo + hi))?;
        let member = build_member(&pair, lambda, &geom, q, ratio)?;
        members.push(member);
    }

    // Pairwise distinctness of the full invariants; the construction makes
    // collisions essentially impossible, so surface any as an error.
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            if !invariant_distinct(&members[i].invariant, &members[j].invariant) {
                return Err(Error::construction(format!(
                    "members {i} and {j} have indistinguishable invariants"
                )));
            }
        }
    }

    Ok(BqFamily {
        members,
        pair: pair.clone(),
        lambda,
        p1: geom.p1.to_f64(),
        p2: geom.p2.to_f64(),
        witness,
        b_invariant,
        c_invariant,
    })
}

fn polygonal_pair(pair: &PositionedPair) -> Result<PositionedPair> {
    if pair.ball_e.as_polygon().is_some() && pair.ball_f.as_polygon().is_some() {
        return Ok(pair.clone());
    }
    let e = polygonal_approximation(&pair.ball_e, 32)?;
    let f = polygonal_approximation(&pair.ball_f, 32)?;
    canonical_position_fixed(&ConvexBody::Polygon(e), &ConvexBody::Polygon(f))
}

/// Inscribed polygon on `2 * half_vertices` boundary points (a regular
/// polygon when the body is a disk).
pub fn polygonal_approximation(body: &ConvexBody, half_vertices: usize) -> Result<Polygon2> {
    if body.dim() != 2 {
        return Err(Error::input("polygonal approximation is 2-dimensional"));
    }
    if let ConvexBody::Polygon(p) = body {
        return Ok(p.clone());
    }
    let mut pts = Vec::with_capacity(half_vertices);
    for k in 0..half_vertices {
        let theta = std::f64::consts::PI * k as f64 / half_vertices as f64;
        let dir = [theta.cos(), theta.sin()];
        let g = body.gauge_unchecked(&dir);
        pts.push([dir[0] / g, dir[1] / g]);
    }
    Polygon2::from_f64_vertices(&pts)
}

fn family_geometry(
    pair: &PositionedPair,
    lambda: f64,
    witness: &SeparationWitness,
) -> Result<BqGeometry> {
    let c_poly = match c_lambda(pair, lambda)? {
        ConvexBody::Polygon(p) => p,
        _ => return Err(Error::construction("hull-type body is not a polygon")),
    };
    let b_poly = match b_lambda(pair, lambda)? {
        ConvexBody::Polygon(p) => p,
        _ => return Err(Error::construction("intersection-type body is not a polygon")),
    };

    let x = [witness.point[0], witness.point[1]];
    let f = [witness.functional[0], witness.functional[1]];
    let f_norm = f[0].hypot(f[1]);
    let f_at_x = f[0] * x[0] + f[1] * x[1];
    let gap = f_at_x - 1.0;
    if gap <= 0.0 {
        return Err(Error::construction("witness functional does not separate"));
    }

    // Start at an eighth of the functional-measured distance to the
    // hull-type body and halve until the closed ball fits inside the
    // intersection-type body.
    let mut eps = gap / (8.0 * f_norm);
    let mut fits = false;
    for _ in 0..60 {
        if ball_inside_polygon(&b_poly, x, eps) {
            fits = true;
            break;
        }
        eps *= 0.5;
    }
    if !fits {
        return Err(Error::construction(
            "no ball around the witness fits inside the intersection-type body",
        ));
    }

    let u_f = [f[0] / f_norm, f[1] / f_norm];
    let w = [-u_f[1], u_f[0]];
    let p1 = RatVec2::snapped(x[0] - eps * w[0], x[1] - eps * w[1])?;
    let p2 = RatVec2::snapped(x[0] + eps * w[0], x[1] + eps * w[1])?;

    // Shrink the vertex chord until the attached faces verify on both
    // endpoints (the face criterion is re-checked per member anyway).
    let mut delta = 0.5 * eps;
    let mut ok = false;
    'outer: for _ in 0..40 {
        let t_max = 0.98 * delta * 3f64.sqrt() / 2.0;
        for t in [-t_max, t_max] {
            let qx = x[0] + 0.5 * delta * u_f[0] + t * w[0];
            let qy = x[1] + 0.5 * delta * u_f[1] + t * w[1];
            let q = RatVec2::snapped(qx, qy)?;
            let geom_probe = BqGeometry {
                c_poly: c_poly.clone(),
                b_poly: b_poly.clone(),
                p1: p1.clone(),
                p2: p2.clone(),
                x,
                delta,
                u_f,
                w,
            };
            if probe_member(&geom_probe, &q).is_err() {
                delta *= 0.5;
                continue 'outer;
            }
        }
        ok = true;
        break;
    }
    if !ok {
        return Err(Error::construction(
            "no chord height places both attached faces; lambda may be too extreme",
        ));
    }

    Ok(BqGeometry {
        c_poly,
        b_poly,
        p1,
        p2,
        x,
        delta,
        u_f,
        w,
    })
}

fn ball_inside_polygon(poly: &Polygon2, center: [f64; 2], radius: f64) -> bool {
    poly.edge_lines().iter().all(|e| {
        let n = e.normal.to_f64();
        let c = rat_to_f64(&e.offset);
        let n_len = n[0].hypot(n[1]);
        n[0] * center[0] + n[1] * center[1] + radius * n_len < c * (1.0 - 1e-12)
    })
}

fn triangle_ratio(p1: &RatVec2, p2: &RatVec2, q: &RatVec2) -> f64 {
    let a1 = crate::bodies::rational::cross(p1, q).abs();
    let a2 = crate::bodies::rational::cross(p2, q).abs();
    rat_to_f64(&(a1 / a2))
}

/// Check that both attached segments are genuine faces of the candidate
/// hull, cross-validating against the line criterion: `[p, q]` is a face
/// iff the line through `p` and `q` misses the hull-type body.
fn probe_member(geom: &BqGeometry, q: &RatVec2) -> Result<Polygon2> {
    let body = geom
        .c_poly
        .hull_with_points(&[geom.p1.clone(), geom.p2.clone(), q.clone()])?;

    for p in [&geom.p1, &geom.p2] {
        let edge_present = polygon_has_edge(&body, p, q);
        let line_clear = line_misses_polygon(&geom.c_poly, p, q);
        if edge_present != line_clear {
            return Err(Error::verification(format!(
                "face criterion mismatch: edge present = {edge_present}, line clear = {line_clear}"
            )));
        }
        if !edge_present {
            return Err(Error::construction(
                "attached segment is not a face of the hull",
            ));
        }
    }
    Ok(body)
}

fn build_member(
    pair: &PositionedPair,
    lambda: f64,
    geom: &BqGeometry,
    q: RatVec2,
    ratio: f64,
) -> Result<BqMember> {
    let poly = probe_member(geom, &q)?;
    let body = ConvexBody::Polygon(poly.clone());
    if !sandwich_check(&body, pair, lambda)? {
        return Err(Error::construction(
            "family member violates the sandwich inclusions",
        ));
    }
    let invariant = area_ratios(&poly);
    Ok(BqMember {
        body,
        q: q.to_f64(),
        ratio,
        invariant,
    })
}

fn polygon_has_edge(poly: &Polygon2, a: &RatVec2, b: &RatVec2) -> bool {
    let n = poly.vertex_count();
    let verts = poly.vertices();
    for i in 0..n {
        let (u, v) = (&verts[i], &verts[(i + 1) % n]);
        if (u == a && v == b) || (u == b && v == a) {
            return true;
        }
    }
    false
}

/// True when the full line through `a` and `b` does not meet the polygon:
/// all vertices lie strictly on one side.
fn line_misses_polygon(poly: &Polygon2, a: &RatVec2, b: &RatVec2) -> bool {
    let mut pos = false;
    let mut neg = false;
    for v in poly.vertices() {
        let side = crate::bodies::rational::orient(a, b, v);
        if side.is_positive() {
            pos = true;
        } else if side.is_negative() {
            neg = true;
        } else {
            return false; // vertex exactly on the line
        }
        if pos && neg {
            return false;
        }
    }
    true
}

/// A polygonal face to attach in 3D: vertices must be coplanar, strictly
/// inside the intersection-type body, and strictly separated from the
/// hull-type body by their own plane.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct FaceSpec3 {
    pub vertices: Vec<[f64; 3]>,
}

/// Where a face can be attached: a plane through `center` with the given
/// outward `normal`, and an in-plane placement radius.
#[derive(Debug, Clone)]
pub struct AttachmentSite {
    pub center: [f64; 3],
    pub normal: [f64; 3],
    pub radius: f64,
}

/// Attach a polygonal face (and its antipode) to the hull-type body:
/// `conv(C_λ ∪ K' ∪ -K')`. The face must appear as a 2-face of the
/// result, which is verified, along with the sandwich inclusions.
pub fn attach_face_3d(
    pair: &PositionedPair,
    lambda: f64,
    face: &FaceSpec3,
) -> Result<Polytope3> {
    if pair.dim() != 3 {
        return Err(Error::input("face attachment is 3-dimensional"));
    }
    let c_body = c_lambda(pair, lambda)?;
    let b_body = b_lambda(pair, lambda)?;
    let c_poly = c_body
        .as_polytope()
        .ok_or_else(|| Error::input("face attachment needs polytope bodies"))?;

    let verts = &face.vertices;
    if verts.len() < 3 {
        return Err(Error::input(
            "attached face must be 2-dimensional (>= 3 vertices)",
        ));
    }
    let (normal, offset) = face_plane(verts)?;

    // Inside the intersection-type body, strictly.
    for v in verts {
        let g = b_body.gauge(v)?;
        if g >= 1.0 - 1e-9 {
            return Err(Error::input(format!(
                "face vertex {v:?} is not strictly inside the intersection-type body (gauge {g})"
            )));
        }
    }
    // The face plane strictly separates the face from the hull-type body.
    let hc = c_body.support(normal.as_ref())?;
    if hc >= offset * (1.0 - 1e-9) {
        return Err(Error::input(format!(
            "face plane does not separate from the hull-type body (support {hc} vs offset {offset})"
        )));
    }

    let result = c_poly.hull_with_points(verts)?;

    if result.find_facet_with_vertices(verts).is_none() {
        return Err(Error::construction(
            "attached polygon is not a facet of the hull",
        ));
    }
    let body = ConvexBody::Polytope(result.clone());
    if !sandwich_check(&body, pair, lambda)? {
        return Err(Error::construction(
            "attached body violates the sandwich inclusions",
        ));
    }
    Ok(result)
}

fn face_plane(verts: &[[f64; 3]]) -> Result<([f64; 3], f64)> {
    let a = verts[0];
    let mut normal = None;
    for i in 1..verts.len() {
        for j in (i + 1)..verts.len() {
            let u = [
                verts[i][0] - a[0],
                verts[i][1] - a[1],
                verts[i][2] - a[2],
            ];
            let v = [
                verts[j][0] - a[0],
                verts[j][1] - a[1],
                verts[j][2] - a[2],
            ];
            let n = [
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ];
            let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            if len > 1e-12 {
                normal = Some([n[0] / len, n[1] / len, n[2] / len]);
                break;
            }
        }
        if normal.is_some() {
            break;
        }
    }
    let mut n = normal.ok_or_else(|| Error::input("face vertices are collinear"))?;
    let mut c = n[0] * a[0] + n[1] * a[1] + n[2] * a[2];
    if c < 0.0 {
        n = [-n[0], -n[1], -n[2]];
        c = -c;
    }
    let scale = verts
        .iter()
        .flat_map(|v| v.iter())
        .fold(1.0f64, |m, &x| m.max(x.abs()));
    for v in verts {
        let dev = (n[0] * v[0] + n[1] * v[1] + n[2] * v[2] - c).abs();
        if dev > 1e-9 * scale {
            return Err(Error::input(format!(
                "face vertices are not coplanar (deviation {dev:.3e})"
            )));
        }
    }
    Ok((n, c))
}

/// Locate a plane where faces can be attached: a witness point between
/// the two interpolants plus the supporting functional of the hull-type
/// body there.
pub fn face_attachment_site(pair: &PositionedPair, lambda: f64) -> Result<AttachmentSite> {
    if pair.dim() != 3 {
        return Err(Error::input("face attachment is 3-dimensional"));
    }
    let witness = separation_witness(pair, lambda)?;
    let x = [witness.point[0], witness.point[1], witness.point[2]];
    let f = [
        witness.functional[0],
        witness.functional[1],
        witness.functional[2],
    ];
    let f_norm = (f[0] * f[0] + f[1] * f[1] + f[2] * f[2]).sqrt();
    let f_at_x = f[0] * x[0] + f[1] * x[1] + f[2] * x[2];
    let gap = f_at_x - 1.0;
    if gap <= 0.0 {
        return Err(Error::construction("witness functional does not separate"));
    }
    let b_body = b_lambda(pair, lambda)?;
    let b_poly = b_body
        .as_polytope()
        .ok_or_else(|| Error::input("face attachment needs polytope bodies"))?;

    let mut radius = gap / (8.0 * f_norm);
    let mut fits = false;
    for _ in 0..60 {
        if ball_inside_polytope(b_poly, x, radius) {
            fits = true;
            break;
        }
        radius *= 0.5;
    }
    if !fits {
        return Err(Error::construction(
            "no ball around the witness fits inside the intersection-type body",
        ));
    }
    Ok(AttachmentSite {
        center: x,
        normal: [f[0] / f_norm, f[1] / f_norm, f[2] / f_norm],
        radius: 0.8 * radius,
    })
}

fn ball_inside_polytope(poly: &Polytope3, center: [f64; 3], radius: f64) -> bool {
    poly.facets().iter().all(|fc| {
        let n = fc.normal;
        let dot = n[0] * center[0] + n[1] * center[1] + n[2] * center[2];
        dot + radius < fc.offset * (1.0 - 1e-12)
    })
}

/// A regular `k`-gon centered at the site, lying in its plane.
pub fn regular_face_polygon(site: &AttachmentSite, k: usize) -> Result<FaceSpec3> {
    if k < 3 {
        return Err(Error::input("attached face needs at least 3 vertices"));
    }
    let n = site.normal;
    let seed = if n[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let mut u = [
        seed[1] * n[2] - seed[2] * n[1],
        seed[2] * n[0] - seed[0] * n[2],
        seed[0] * n[1] - seed[1] * n[0],
    ];
    let lu = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    u = [u[0] / lu, u[1] / lu, u[2] / lu];
    let v = [
        n[1] * u[2] - n[2] * u[1],
        n[2] * u[0] - n[0] * u[2],
        n[0] * u[1] - n[1] * u[0],
    ];
    let vertices = (0..k)
        .map(|i| {
            let phi = std::f64::consts::TAU * i as f64 / k as f64;
            let (s, c) = phi.sin_cos();
            [
                site.center[0] + site.radius * (c * u[0] + s * v[0]),
                site.center[1] + site.radius * (c * u[1] + s * v[1]),
                site.center[2] + site.radius * (c * u[2] + s * v[2]),
            ]
        })
        .collect();
    Ok(FaceSpec3 { vertices })
}
