//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured quantities. Run with
//! `cargo test -p bmgeo --test acceptance -- --nocapture`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bmgeo::bodies::{
    inf_convolution, lp_ball, random_symmetric_polygon, ConvexBody, LpExponent,
};
use bmgeo::distance::{
    bm_distance, canonical_position_fixed, fixed_position_distance, known_lp_distance,
    OptimizerConfig, PositionedPair,
};
use bmgeo::families::{
    area_ratios, attach_face_3d, bq_family, face_attachment_site, invariant_distinct,
    regular_face_polygon, separation_witness,
};
use bmgeo::geodesics::{
    b_lambda, build_path, c_lambda, dyadic_length_at_depth, extreme_distance_check,
    geodesic_product_check_many, inclusion_chain_check, join_geodesics, path_length,
    sandwich_check,
    GeodesicKind,
};

fn ball(p: f64, dim: usize) -> ConvexBody {
    lp_ball(LpExponent::Finite(p), dim).unwrap()
}

fn ball_inf(dim: usize) -> ConvexBody {
    lp_ball(LpExponent::Infinity, dim).unwrap()
}

/// Seeded canonical polygon pair with a clearly non-isometric shape
/// difference (vertex counts differ and the positioned distance is
/// bounded away from 1).
fn seeded_pair(seed: u64) -> PositionedPair {
    let mut salt = 0u64;
    loop {
        let a = random_symmetric_polygon(seed.wrapping_mul(2654435761).wrapping_add(salt), 4)
            .unwrap();
        let b = random_symmetric_polygon(
            seed.wrapping_mul(97531).wrapping_add(1 + salt),
            7,
        )
        .unwrap();
        let pair =
            canonical_position_fixed(&ConvexBody::Polygon(a), &ConvexBody::Polygon(b)).unwrap();
        if pair.d > 1.05 {
            return pair;
        }
        salt += 1000;
    }
}

#[test]
fn criterion_01_lp_distances() {
    let start = Instant::now();
    let cfg = OptimizerConfig::default();

    let cases: Vec<(&str, ConvexBody, ConvexBody, f64)> = vec![
        ("d(l2^2, linf^2)", ball(2.0, 2), ball_inf(2), 2f64.sqrt()),
        ("d(l2^3, linf^3)", ball(2.0, 3), ball_inf(3), 3f64.sqrt()),
        ("d(l2^2, l4^2)", ball(2.0, 2), ball(4.0, 2), 2f64.powf(0.25)),
        ("d(l4^2, linf^2)", ball(4.0, 2), ball_inf(2), 2f64.powf(0.25)),
    ];
    for (name, a, b, want) in &cases {
        let report = bm_distance(a, b, &cfg).unwrap();
        let rel = (report.estimate - want).abs() / want;
        assert!(
            rel < 1e-3,
            "{name}: estimate {} vs {want} (rel {rel:.2e})",
            report.estimate
        );
    }

    // Fixed-position values in standard position are exact.
    let fixed: Vec<(&str, f64, f64)> = cases
        .iter()
        .map(|(name, a, b, want)| {
            (*name, fixed_position_distance(a, b).unwrap(), *want)
        })
        .collect();
    for (name, got, want) in &fixed {
        assert!(
            (got - want).abs() < 1e-9,
            "fixed-position {name}: {got} vs {want}"
        );
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "runtime {elapsed:?} exceeds 30 s"
    );
    println!(
        "ACCEPTANCE 1 (lp distances sqrt2/sqrt3/2^(1/4)): PASS in {:.2?}",
        elapsed
    );
}

#[test]
fn criterion_02_holder_chain_multiplicativity() {
    for n in [2usize, 3] {
        let left = fixed_position_distance(&ball(2.0, n), &ball(4.0, n)).unwrap();
        let right = fixed_position_distance(&ball(4.0, n), &ball_inf(n)).unwrap();
        let total = fixed_position_distance(&ball(2.0, n), &ball_inf(n)).unwrap();
        let rel = (left * right - total).abs() / total;
        assert!(
            rel < 1e-6,
            "n = {n}: {left} * {right} = {} vs {total}",
            left * right
        );
        // Sanity against the closed-form oracle.
        let truth = known_lp_distance(LpExponent::Finite(2.0), LpExponent::Infinity, n).unwrap();
        assert!((total - truth).abs() < 1e-9);
    }
    println!("ACCEPTANCE 2 (Holder chain d(l2,l4) d(l4,linf) = d(l2,linf), n in {{2,3}}): PASS");
}

#[test]
fn criterion_03_extreme_space_identities() {
    let lambdas = [0.1, 0.25, 0.5, 0.75, 0.9];
    for seed in 0..20u64 {
        let pair = seeded_pair(seed);
        for &lambda in &lambdas {
            // Errors name the violated identity; any violation fails here.
            extreme_distance_check(&pair, lambda).unwrap_or_else(|e| {
                panic!("pair seed {seed}, lambda {lambda}: {e}");
            });
        }
    }
    println!("ACCEPTANCE 3 (extreme-space identities on 20 pairs x 5 lambdas): PASS");
}

#[test]
fn criterion_04_geodesic_product_law() {
    let start = Instant::now();
    let grid: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAB5);
    for seed in 0..10u64 {
        let pair = seeded_pair(seed + 100);
        for kind in [GeodesicKind::Intersection, GeodesicKind::Hull] {
            let path = build_path(&pair, kind, &grid).unwrap();
            let mut partitions = Vec::with_capacity(64);
            for _ in 0..64 {
                let mut partition = vec![0.0];
                for &t in &grid[1..10] {
                    if rng.random_range(0.0..1.0) < 0.5 {
                        partition.push(t);
                    }
                }
                partition.push(1.0);
                partitions.push(partition);
            }
            geodesic_product_check_many(&path, &partitions).unwrap_or_else(|e| {
                panic!("seed {seed} {kind:?}: {e}");
            });
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "runtime {elapsed:?} exceeds 2 min"
    );
    println!(
        "ACCEPTANCE 4 (product law, 10 pairs x 2 kinds x 64 partitions): PASS in {:.2?}",
        elapsed
    );
}

#[test]
fn criterion_05_inclusion_chain_and_separation() {
    let lambdas = [0.25, 0.5, 0.75];
    for seed in 0..10u64 {
        let pair = seeded_pair(seed + 200);
        assert!(pair.d > 1.0 + 1e-6, "pair is non-isometric by construction");
        for &lambda in &lambdas {
            let chain = inclusion_chain_check(&pair, lambda).unwrap();
            assert!(
                chain.ok,
                "seed {seed} lambda {lambda}: slacks {:?}",
                chain.slacks
            );
            let witness = separation_witness(&pair, lambda).unwrap_or_else(|e| {
                panic!("seed {seed} lambda {lambda}: {e}");
            });
            assert!(
                witness.margin_in >= 1e-4 && witness.margin_out >= 1e-4,
                "seed {seed} lambda {lambda}: margins {} / {}",
                witness.margin_in,
                witness.margin_out
            );
        }
    }
    println!("ACCEPTANCE 5 (inclusion chain + separation margins >= 1e-4): PASS");
}

#[test]
fn criterion_06_sandwich_forward_direction() {
    // 2D: every family member passes the sandwich test including the
    // multiplicativity assertion (sandwich_check errors on violation).
    for seed in [300u64, 301] {
        let pair = seeded_pair(seed);
        let family = bq_family(&pair, 0.5, 5).unwrap();
        for m in &family.members {
            assert!(sandwich_check(&m.body, &family.pair, 0.5).unwrap());
        }
    }
    // 3D: attached bodies pass as well.
    let pair = canonical_position_fixed(&ball(1.0, 3), &ball_inf(3)).unwrap();
    let site = face_attachment_site(&pair, 0.5).unwrap();
    for k in [3usize, 4, 5] {
        let face = regular_face_polygon(&site, k).unwrap();
        let body = attach_face_3d(&pair, 0.5, &face).unwrap();
        assert!(sandwich_check(&ConvexBody::Polytope(body), &pair, 0.5).unwrap());
    }
    println!("ACCEPTANCE 6 (sandwich + multiplicativity for all constructed bodies): PASS");
}

#[test]
fn criterion_07_sample_scale_families() {
    // 2D: 25 members over the disk/square pair (the disk becomes its
    // inscribed 64-gon with the positioning recomputed).
    let pair = canonical_position_fixed(&ball(2.0, 2), &ball_inf(2)).unwrap();
    let family = bq_family(&pair, 0.5, 25).unwrap();
    assert_eq!(family.members.len(), 25);
    for i in 0..25 {
        assert!(
            invariant_distinct(&family.members[i].invariant, &family.b_invariant),
            "member {i} not distinct from the intersection-type body"
        );
        assert!(
            invariant_distinct(&family.members[i].invariant, &family.c_invariant),
            "member {i} not distinct from the hull-type body"
        );
        for j in (i + 1)..25 {
            assert!(
                invariant_distinct(
                    &family.members[i].invariant,
                    &family.members[j].invariant
                ),
                "members {i} and {j} not distinct"
            );
        }
    }

    // 3D: triangle/square/pentagon attachments have pairwise different
    // attachment-facet censuses.
    let pair3 = canonical_position_fixed(&ball(1.0, 3), &ball_inf(3)).unwrap();
    let site = face_attachment_site(&pair3, 0.5).unwrap();
    let mut censuses = Vec::new();
    for k in [3usize, 4, 5] {
        let face = regular_face_polygon(&site, k).unwrap();
        let body = attach_face_3d(&pair3, 0.5, &face).unwrap();
        let idx = body.find_facet_with_vertices(&face.vertices).unwrap();
        censuses.push((body.facets()[idx].cycle.len(), body.facet_census()));
    }
    for i in 0..censuses.len() {
        for j in (i + 1)..censuses.len() {
            assert_ne!(censuses[i].0, censuses[j].0, "attachment facets match");
        }
    }
    assert_eq!(
        censuses.iter().map(|c| c.0).collect::<Vec<_>>(),
        vec![3, 4, 5]
    );
    println!("ACCEPTANCE 7 (25 pairwise-distinct 2D members; 3/4/5-gon 3D attachments): PASS");
}

#[test]
fn criterion_08_invariant_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1BE1);
    for case in 0..100u64 {
        let poly = random_symmetric_polygon(7000 + case, 3 + (case % 5) as usize).unwrap();
        // Random invertible map with moderate conditioning.
        let m = loop {
            let m = [
                [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)],
                [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)],
            ];
            let det: f64 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det.abs() > 0.2 {
                break m;
            }
        };
        let image = poly.linear_image(&m).unwrap();
        let a = area_ratios(&poly);
        let b = area_ratios(&image);
        assert_eq!(
            a.ratios.len(),
            b.ratios.len(),
            "case {case}: invariant sizes differ"
        );
        for (x, y) in a.ratios.iter().zip(&b.ratios) {
            assert!(
                (x - y).abs() <= 1e-9 * x.abs().max(1.0),
                "case {case}: {x} vs {y}"
            );
        }
        assert!(
            !invariant_distinct(&a, &b),
            "case {case}: false distinct verdict on isometric copies"
        );
    }
    println!("ACCEPTANCE 8 (area-ratio invariance under 100 random linear maps): PASS");
}

#[test]
fn criterion_09_hull_inf_convolution_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9C0);
    let mut worst = 0.0f64;
    for case in 0..50u64 {
        let a = random_symmetric_polygon(9000 + case, 3 + (case % 4) as usize).unwrap();
        let b = random_symmetric_polygon(9500 + case, 3 + (case % 3) as usize).unwrap();
        let exact = a.hull_union(&b).unwrap();
        let body_a = ConvexBody::Polygon(a);
        let body_b = ConvexBody::Polygon(b);
        for _ in 0..1000 {
            let x = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
            let numeric = inf_convolution(&body_a, &body_b, &x);
            let reference = exact.gauge_f64(x);
            let err = (numeric - reference).abs() / reference.max(1.0);
            worst = worst.max(err);
            assert!(
                err <= 1e-6,
                "case {case} at {x:?}: inf-convolution {numeric} vs exact {reference}"
            );
        }
    }
    println!(
        "ACCEPTANCE 9 (inf-convolution vs exact hull gauge, 50 pairs x 1000 points, \
         worst {worst:.2e}): PASS"
    );
}

#[test]
fn criterion_10_path_length() {
    let grid: Vec<f64> = (0..5).map(|i| i as f64 / 4.0).collect();

    // Both kinds on a polygon pair and on the disk/square pair.
    let pairs = vec![
        seeded_pair(400),
        canonical_position_fixed(&ball(2.0, 2), &ball_inf(2)).unwrap(),
    ];
    for pair in &pairs {
        let want = pair.d.ln();
        for kind in [GeodesicKind::Intersection, GeodesicKind::Hull] {
            let path = build_path(pair, kind, &grid).unwrap();
            for depth in 1..=6u32 {
                let len = dyadic_length_at_depth(&path, depth).unwrap();
                assert!(
                    (len - want).abs() < 1e-6,
                    "{kind:?} depth {depth}: {len} vs {want}"
                );
            }
        }
    }

    // Concatenation through a sandwiched intermediate.
    let pair = seeded_pair(401);
    let x = c_lambda(&pair, 0.4).unwrap();
    let sub1 = canonical_position_fixed(&pair.ball_e, &x).unwrap();
    let sub2 = canonical_position_fixed(&x, &pair.ball_f).unwrap();
    let first = build_path(&sub1, GeodesicKind::Hull, &grid).unwrap();
    let second = build_path(&sub2, GeodesicKind::Intersection, &grid).unwrap();
    let joined = join_geodesics(&first, &second).unwrap();
    let len = path_length(&joined, 6).unwrap();
    let want = fixed_position_distance(&pair.ball_e, &x).unwrap().ln()
        + fixed_position_distance(&x, &pair.ball_f).unwrap().ln();
    assert!(
        (len - want).abs() < 1e-6,
        "concatenated length {len} vs {want}"
    );
    println!("ACCEPTANCE 10 (dyadic path length = log d at depths 1..6; concatenation adds): PASS");
}

#[test]
fn criterion_03_also_holds_for_gauge_pair() {
    // The disk/square pair exercises the numeric boundary searches in the
    // same identities (not required by the criterion, which draws polygon
    // pairs, but a useful hard case).
    let pair = canonical_position_fixed(&ball(2.0, 2), &ball_inf(2)).unwrap();
    for lambda in [0.25, 0.5, 0.75] {
        extreme_distance_check(&pair, lambda).unwrap();
        let chain = inclusion_chain_check(&pair, lambda).unwrap();
        assert!(chain.ok);
    }
    println!("ACCEPTANCE 3b (identities on the disk/square gauge pair): PASS");
}

#[test]
fn criterion_06_also_rejects_non_sandwiched_bodies() {
    // Negative control: the endpoint balls are not sandwiched at interior
    // exponents, and b_lambda at a different exponent fails the bounds.
    let pair = seeded_pair(402);
    assert!(!sandwich_check(&pair.ball_f, &pair, 0.5).unwrap());
    let late = b_lambda(&pair, 0.9).unwrap();
    assert!(!sandwich_check(&late, &pair, 0.1).unwrap());
    println!("ACCEPTANCE 6b (sandwich rejects non-intermediate bodies): PASS");
}
