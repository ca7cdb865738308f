//! Floating-point kernel for origin-symmetric convex polytopes in R^3.
//! Facets are recovered by supporting-plane enumeration over vertex
//! triples, which is robust to coplanar vertex groups (attached faces
//! stay single facets) at the small vertex counts this crate works with.
//! Tolerance is 1e-9 relative, with post-hoc invariant checks.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub const TOL_3D: f64 = 1e-9;

/// One facet: outward unit normal, offset (`normal . x <= offset`), and the
/// vertex cycle ordered counterclockwise seen from outside.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: [f64; 3],
    pub offset: f64,
    pub cycle: Vec<usize>,
}

/// Origin-symmetric convex polytope in R^3.
#[derive(Debug, Clone)]
pub struct Polytope3 {
    verts: Vec<[f64; 3]>,
    facets: Vec<Facet>,
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

impl Polytope3 {
    /// Convex hull of a symmetric point set.
    pub fn from_points(points: &[[f64; 3]]) -> Result<Self> {
        let mut pts: Vec<[f64; 3]> = Vec::new();
        let scale = points
            .iter()
            .flat_map(|p| p.iter())
            .fold(0.0f64, |m, &c| m.max(c.abs()));
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::input("polytope needs finite, non-zero points"));
        }
        let merge_tol = 1e-9 * scale;
        for &p in points {
            if !pts.iter().any(|q| norm(sub(p, *q)) <= merge_tol) {
                pts.push(p);
            }
        }
        if pts.len() < 4 {
            return Err(Error::input("polytope needs at least 4 distinct points"));
        }

        let planes = supporting_planes(&pts, scale)?;
        build_from_planes_and_points(&pts, &planes, scale)
    }

    /// Intersection of halfspaces `normal . x <= offset`. All offsets must
    /// be positive (origin interior).
    pub fn from_halfspaces(planes: &[([f64; 3], f64)]) -> Result<Self> {
        if planes.len() < 4 {
            return Err(Error::input("halfspace intersection needs >= 4 planes"));
        }
        let scale = planes
            .iter()
            .map(|&(_, c)| c.abs())
            .fold(0.0f64, f64::max);
        let mut candidates: Vec<[f64; 3]> = Vec::new();
        let m = planes.len();
        for i in 0..m {
            for j in (i + 1)..m {
                for k in (j + 1)..m {
                    let a = Matrix3::from_rows(&[
                        Vector3::from(planes[i].0).transpose(),
                        Vector3::from(planes[j].0).transpose(),
                        Vector3::from(planes[k].0).transpose(),
                    ]);
                    if a.determinant().abs() < 1e-9 {
                        continue;
                    }
                    let Some(inv) = a.try_inverse() else { continue };
                    let v = inv * Vector3::new(planes[i].1, planes[j].1, planes[k].1);
                    let p = [v[0], v[1], v[2]];
                    let feasible = planes
                        .iter()
                        .all(|&(n, c)| dot(n, p) <= c + 1e-9 * scale.max(1.0));
                    if feasible {
                        candidates.push(p);
                    }
                }
            }
        }
        if candidates.len() < 4 {
            return Err(Error::input(
                "halfspace intersection produced fewer than 4 vertices",
            ));
        }
        Polytope3::from_points(&candidates)
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.verts
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Facet halfspaces `(normal, offset)`.
    pub fn planes(&self) -> Vec<([f64; 3], f64)> {
        self.facets.iter().map(|f| (f.normal, f.offset)).collect()
    }

    /// Sorted facet vertex counts; a combinatorial fingerprint.
    pub fn facet_census(&self) -> Vec<usize> {
        let mut census: Vec<usize> = self.facets.iter().map(|f| f.cycle.len()).collect();
        census.sort_unstable();
        census
    }

    pub fn gauge(&self, x: [f64; 3]) -> f64 {
        let mut best = 0.0f64;
        for f in &self.facets {
            let v = dot(f.normal, x) / f.offset;
            if v > best {
                best = v;
            }
        }
        best
    }

    pub fn support(&self, u: [f64; 3]) -> f64 {
        self.verts
            .iter()
            .map(|&v| dot(u, v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn scale(&self, t: f64) -> Result<Polytope3> {
        if !(t > 0.0) {
            return Err(Error::input(format!("scale factor must be positive, got {t}")));
        }
        Ok(Polytope3 {
            verts: self.verts.iter().map(|v| [v[0] * t, v[1] * t, v[2] * t]).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal,
                    offset: f.offset * t,
                    cycle: f.cycle.clone(),
                })
                .collect(),
        })
    }

    pub fn linear_image(&self, m: &Matrix3<f64>) -> Result<Polytope3> {
        if m.determinant().abs() < 1e-12 {
            return Err(Error::input("linear image requires an invertible matrix"));
        }
        let pts: Vec<[f64; 3]> = self
            .verts
            .iter()
            .map(|v| {
                let w = m * Vector3::new(v[0], v[1], v[2]);
                [w[0], w[1], w[2]]
            })
            .collect();
        Polytope3::from_points(&pts)
    }

    pub fn intersect(&self, other: &Polytope3) -> Result<Polytope3> {
        let mut planes = self.planes();
        planes.extend(other.planes());
        Polytope3::from_halfspaces(&planes)
    }

    pub fn hull_union(&self, other: &Polytope3) -> Result<Polytope3> {
        let mut pts = self.verts.clone();
        pts.extend_from_slice(&other.verts);
        Polytope3::from_points(&pts)
    }

    pub fn hull_with_points(&self, extra: &[[f64; 3]]) -> Result<Polytope3> {
        let mut pts = self.verts.clone();
        for &p in extra {
            pts.push(p);
            pts.push([-p[0], -p[1], -p[2]]);
        }
        Polytope3::from_points(&pts)
    }

    /// Index of the facet whose vertex set matches `points` (any order),
    /// within tolerance.
    pub fn find_facet_with_vertices(&self, points: &[[f64; 3]]) -> Option<usize> {
        let scale = points
            .iter()
            .flat_map(|p| p.iter())
            .fold(1.0f64, |m, &c| m.max(c.abs()));
        let tol = 1e-7 * scale;
        'facet: for (i, f) in self.facets.iter().enumerate() {
            if f.cycle.len() != points.len() {
                continue;
            }
            for &vi in &f.cycle {
                if !points.iter().any(|&p| norm(sub(p, self.verts[vi])) <= tol) {
                    continue 'facet;
                }
            }
            return Some(i);
        }
        None
    }
}

/// Enumerate supporting planes over vertex triples: a plane is kept when
/// every point lies on its inner side within tolerance.
fn supporting_planes(pts: &[[f64; 3]], scale: f64) -> Result<Vec<([f64; 3], f64)>> {
    let eps = TOL_3D * scale;
    let n_pts = pts.len();
    let mut planes: Vec<([f64; 3], f64)> = Vec::new();
    for i in 0..n_pts {
        for j in (i + 1)..n_pts {
            for k in (j + 1)..n_pts {
                let mut n = cross(sub(pts[j], pts[i]), sub(pts[k], pts[i]));
                let len = norm(n);
                if len <= 1e-12 * scale * scale {
                    continue;
                }
                n = [n[0] / len, n[1] / len, n[2] / len];
                let c = dot(n, pts[i]);
                let mut above = false;
                let mut below = false;
                for p in pts {
                    let d = dot(n, *p) - c;
                    if d > eps {
                        above = true;
                    } else if d < -eps {
                        below = true;
                    }
                    if above && below {
                        break;
                    }
                }
                let (n, c) = if !above {
                    (n, c)
                } else if !below {
                    ([-n[0], -n[1], -n[2]], -c)
                } else {
                    continue;
                };
                let dup = planes.iter().any(|&(pn, pc)| {
                    dot(pn, n) > 1.0 - 1e-8 && (pc - c).abs() <= 1e-8 * scale.max(1.0)
                });
                if !dup {
                    planes.push((n, c));
                }
            }
        }
    }
    if planes.len() < 4 {
        return Err(Error::input(
            "points are degenerate (fewer than 4 supporting planes)",
        ));
    }
    Ok(planes)
}

/// Assemble facets: members of each plane, ordered by their 2D hull inside
/// the plane; prune points that end up on no facet cycle.
fn build_from_planes_and_points(
    pts: &[[f64; 3]],
    planes: &[([f64; 3], f64)],
    scale: f64,
) -> Result<Polytope3> {
    let eps = 2.0 * TOL_3D * scale;
    let mut facets_raw: Vec<(usize, Vec<usize>)> = Vec::new();
    for (pi, &(n, c)) in planes.iter().enumerate() {
        if c <= eps {
            return Err(Error::input(
                "origin is not strictly interior to the polytope",
            ));
        }
        let members: Vec<usize> = (0..pts.len())
            .filter(|&i| (dot(n, pts[i]) - c).abs() <= eps)
            .collect();
        if members.len() < 3 {
            continue;
        }
        let cycle = planar_hull_cycle(pts, &members, n);
        if cycle.len() >= 3 {
            facets_raw.push((pi, cycle));
        }
    }

    // Keep only points that are hull vertices of some facet.
    let mut used = vec![false; pts.len()];
    for (_, cycle) in &facets_raw {
        for &i in cycle {
            used[i] = true;
        }
    }
    let mut remap = vec![usize::MAX; pts.len()];
    let mut verts: Vec<[f64; 3]> = Vec::new();
    for (i, &u) in used.iter().enumerate() {
        if u {
            remap[i] = verts.len();
            verts.push(pts[i]);
        }
    }
    let facets: Vec<Facet> = facets_raw
        .into_iter()
        .map(|(pi, cycle)| Facet {
            normal: planes[pi].0,
            offset: planes[pi].1,
            cycle: cycle.into_iter().map(|i| remap[i]).collect(),
        })
        .collect();

    if verts.len() < 4 || facets.len() < 4 {
        return Err(Error::input("degenerate polytope"));
    }
    let edge_count: usize = facets.iter().map(|f| f.cycle.len()).sum::<usize>();
    if !edge_count.is_multiple_of(2)
        || verts.len() as i64 - (edge_count / 2) as i64 + facets.len() as i64 != 2
    {
        return Err(Error::construction(format!(
            "polytope facet structure violates the Euler relation (V={}, E={}, F={})",
            verts.len(),
            edge_count / 2,
            facets.len()
        )));
    }
    check_symmetry(&verts, scale)?;
    Ok(Polytope3 { verts, facets })
}

/// 2D convex hull of coplanar points, returned as an index cycle ordered
/// counterclockwise when seen from the outward normal side.
fn planar_hull_cycle(pts: &[[f64; 3]], members: &[usize], normal: [f64; 3]) -> Vec<usize> {
    // In-plane right-handed basis (u, v, normal).
    let seed = if normal[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let mut u = cross(seed, normal);
    let lu = norm(u);
    u = [u[0] / lu, u[1] / lu, u[2] / lu];
    let v = cross(normal, u);

    let mut proj: Vec<(f64, f64, usize)> = members
        .iter()
        .map(|&i| (dot(u, pts[i]), dot(v, pts[i]), i))
        .collect();
    proj.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let turn = |o: &(f64, f64, usize), a: &(f64, f64, usize), b: &(f64, f64, usize)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let span = proj
        .iter()
        .map(|p| p.0.abs().max(p.1.abs()))
        .fold(1.0f64, f64::max);
    let eps = 1e-12 * span * span;

    let mut lower: Vec<(f64, f64, usize)> = Vec::new();
    for p in &proj {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<(f64, f64, usize)> = Vec::new();
    for p in proj.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().map(|(_, _, i)| i).collect()
}

fn check_symmetry(verts: &[[f64; 3]], scale: f64) -> Result<()> {
    let tol = 1e-7 * scale;
    for &v in verts {
        let anti = [-v[0], -v[1], -v[2]];
        if !verts.iter().any(|&w| norm(sub(w, anti)) <= tol) {
            return Err(Error::input("polytope vertex set is not origin-symmetric"));
        }
    }
    Ok(())
}
