//! Long-running sweeps over many random pair geometries. Ignored by
//! default; run with `cargo test -p bmgeo --test soak -- --ignored`.

use bmgeo::bodies::{random_symmetric_polygon, ConvexBody};
use bmgeo::distance::canonical_position_fixed;
use bmgeo::families::{bq_family, invariant_distinct, separation_witness};
use bmgeo::geodesics::{build_path, geodesic_product_check, GeodesicKind};

fn pair_from(seed: u64) -> Option<bmgeo::distance::PositionedPair> {
    let a = random_symmetric_polygon(seed * 31 + 5, 4 + (seed % 4) as usize).ok()?;
    let b = random_symmetric_polygon(seed * 57 + 11, 5 + (seed % 3) as usize).ok()?;
    let pair =
        canonical_position_fixed(&ConvexBody::Polygon(a), &ConvexBody::Polygon(b)).ok()?;
    (pair.d > 1.02).then_some(pair)
}

#[test]
#[ignore = "sweep over 40 pair geometries"]
fn family_construction_sweep() {
    let mut min_margin = f64::INFINITY;
    let mut built = 0usize;
    for seed in 0..40u64 {
        let Some(pair) = pair_from(seed) else { continue };
        for lambda in [0.3, 0.5, 0.7] {
            let witness = separation_witness(&pair, lambda)
                .unwrap_or_else(|e| panic!("seed {seed} lambda {lambda}: {e}"));
            min_margin = min_margin.min(witness.margin_in.min(witness.margin_out));
            let family = bq_family(&pair, lambda, 6)
                .unwrap_or_else(|e| panic!("seed {seed} lambda {lambda}: {e}"));
            assert_eq!(family.members.len(), 6);
            for i in 0..6 {
                for j in (i + 1)..6 {
                    assert!(invariant_distinct(
                        &family.members[i].invariant,
                        &family.members[j].invariant
                    ));
                }
            }
            built += 1;
        }
    }
    println!("built {built} families; min witness margin {min_margin:.3e}");
    assert!(built > 80, "too few valid pairs in the sweep");
}

#[test]
#[ignore = "sweep over 60 pair geometries"]
fn product_law_sweep() {
    let grid: Vec<f64> = (0..9).map(|i| i as f64 / 8.0).collect();
    let mut checked = 0usize;
    for seed in 40..100u64 {
        let Some(pair) = pair_from(seed) else { continue };
        for kind in [GeodesicKind::Intersection, GeodesicKind::Hull] {
            let path = build_path(&pair, kind, &grid)
                .unwrap_or_else(|e| panic!("seed {seed} {kind:?}: {e}"));
            geodesic_product_check(&path, &grid)
                .unwrap_or_else(|e| panic!("seed {seed} {kind:?}: {e}"));
            checked += 1;
        }
    }
    println!("checked {checked} paths");
    assert!(checked > 90);
}
