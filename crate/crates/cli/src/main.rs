//! `bmgeo`: distances between normed-space unit balls, extreme geodesic
//! families between them, verification of the multiplicative laws, the
//! triangle-area-ratio invariant, and certified families of
//! non-isometric intermediate bodies.
//!
//! Exit codes: 0 success, 2 input error, 3 verification or certificate
//! failure, 4 optimizer non-convergence.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use bmgeo::bodies::ConvexBody;
use bmgeo::distance::{
    bm_distance, canonical_position, canonical_position_fixed, DistanceReport, OptimizerConfig,
    PositionedPair,
};
use bmgeo::error::Error;
use bmgeo::families::{
    area_ratios, attach_face_3d, bq_family, faces_1d, invariant_distinct, FaceSpec3,
};
use bmgeo::geodesics::{
    build_path, geodesic_product_check, geodesic_product_check_many, GeodesicKind, GeodesicPath,
    PathKind,
};
use bmgeo::io::{
    body_to_spec, lambda_file_name, read_body, svg_file_name, write_json_atomic,
    write_text_atomic, BodySpec, FamilyCertificate, PathManifest,
};
use bmgeo::svg::render_with_context;

#[derive(Parser)]
#[command(name = "bmgeo", version, about = "Geometry of the Banach-Mazur compactum")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct OptimizerArgs {
    /// RNG seed for the optimizer starts
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of optimizer starts
    #[arg(long)]
    starts: Option<usize>,
    /// Simplex diameter tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration cap per start
    #[arg(long)]
    max_iters: Option<usize>,
    /// Skip the optimizer; keep the bodies in their given positions
    #[arg(long)]
    fixed_position: bool,
}

impl OptimizerArgs {
    fn config(&self) -> OptimizerConfig {
        let mut cfg = OptimizerConfig {
            seed: self.seed,
            ..OptimizerConfig::default()
        };
        if let Some(s) = self.starts {
            cfg.starts = s;
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if let Some(m) = self.max_iters {
            cfg.max_iters = m;
        }
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two bodies (JSON report on stdout)
    Dist {
        body_a: PathBuf,
        body_b: PathBuf,
        #[command(flatten)]
        opt: OptimizerArgs,
    },
    /// Sample one extreme geodesic family and export it
    Geodesic {
        body_a: PathBuf,
        body_b: PathBuf,
        /// Family kind: intersection | hull
        #[arg(long)]
        kind: String,
        /// Uniform grid as start:end:step (must span 0:1)
        #[arg(long)]
        grid: Option<String>,
        /// Explicit comma-separated grid values
        #[arg(long)]
        grid_list: Option<String>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        opt: OptimizerArgs,
    },
    /// Re-verify an exported path against the product law
    Verify {
        manifest: PathBuf,
        /// Number of random partitions (in addition to the full grid)
        #[arg(long, default_value_t = 16)]
        partitions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Triangle-area-ratio invariant of a polygonal body
    Invariant {
        body: PathBuf,
        /// Apply an invertible matrix (JSON [[..],..]) before computing
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Build a certified family of non-isometric intermediate bodies
    Family {
        body_a: PathBuf,
        body_b: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Output directory (defaults to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
        /// 3D: attach this polygonal face (JSON {"vertices": [[x,y,z],..]})
        #[arg(long)]
        attach_face: Option<PathBuf>,
        #[command(flatten)]
        opt: OptimizerArgs,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Dimension { .. } | Error::Input(_) | Error::Io(_) | Error::Json(_) => 2,
        Error::Verification(_) | Error::Construction(_) | Error::Search(_) => 3,
        Error::NonConvergence { .. } => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Dist {
            body_a,
            body_b,
            opt,
        } => cmd_dist(&body_a, &body_b, &opt),
        Command::Geodesic {
            body_a,
            body_b,
            kind,
            grid,
            grid_list,
            out,
            opt,
        } => cmd_geodesic(&body_a, &body_b, &kind, grid, grid_list, &out, &opt),
        Command::Verify {
            manifest,
            partitions,
            seed,
        } => cmd_verify(&manifest, partitions, seed),
        Command::Invariant { body, map } => cmd_invariant(&body, map.as_deref()),
        Command::Family {
            body_a,
            body_b,
            lambda,
            count,
            out,
            attach_face,
            opt,
        } => cmd_family(&body_a, &body_b, lambda, count, out.as_deref(), attach_face.as_deref(), &opt),
    }
}

fn fixed_position_report(a: &ConvexBody, b: &ConvexBody) -> Result<DistanceReport, Error> {
    let n = a.dim();
    let factor_in = a.enclosing_factor(b)?;
    let factor_out = b.enclosing_factor(a)?;
    let witness = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    Ok(DistanceReport {
        estimate: factor_in * factor_out,
        witness,
        factor_in,
        factor_out,
        converged: true,
        starts_used: 0,
    })
}

fn cmd_dist(body_a: &Path, body_b: &Path, opt: &OptimizerArgs) -> Result<ExitCode, Error> {
    let a = read_body(body_a)?;
    let b = read_body(body_b)?;
    let report = if opt.fixed_position {
        fixed_position_report(&a, &b)?
    } else {
        bm_distance(&a, &b, &opt.config())?
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    if !report.converged {
        eprintln!("warning: optimizer did not converge; estimate is best-so-far");
        return Ok(ExitCode::from(4));
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_kind(kind: &str) -> Result<GeodesicKind, Error> {
    match kind {
        "intersection" => Ok(GeodesicKind::Intersection),
        "hull" => Ok(GeodesicKind::Hull),
        other => Err(Error::input(format!(
            "unknown kind \"{other}\" (expected intersection | hull)"
        ))),
    }
}

fn parse_grid(grid: Option<String>, grid_list: Option<String>) -> Result<Vec<f64>, Error> {
    if let Some(list) = grid_list {
        let values: Result<Vec<f64>, _> = list.split(',').map(|s| s.trim().parse()).collect();
        return values.map_err(|e| Error::input(format!("bad grid list: {e}")));
    }
    if let Some(spec) = grid {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::input("grid must be start:end:step"));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|e| Error::input(format!("bad grid start: {e}")))?;
        let end: f64 = parts[1]
            .parse()
            .map_err(|e| Error::input(format!("bad grid end: {e}")))?;
        let step: f64 = parts[2]
            .parse()
            .map_err(|e| Error::input(format!("bad grid step: {e}")))?;
        if !(step > 0.0) {
            return Err(Error::input("grid step must be positive"));
        }
        let mut values = Vec::new();
        let mut t = start;
        while t < end - 1e-12 {
            values.push(t);
            t += step;
        }
        values.push(end);
        return Ok(values);
    }
    Ok((0..11).map(|i| i as f64 / 10.0).collect())
}

fn position(
    a: &ConvexBody,
    b: &ConvexBody,
    opt: &OptimizerArgs,
) -> Result<(PositionedPair, Option<DistanceReport>), Error> {
    if opt.fixed_position {
        Ok((canonical_position_fixed(a, b)?, None))
    } else {
        let (pair, report) = canonical_position(a, b, &opt.config())?;
        Ok((pair, Some(report)))
    }
}

#[derive(Serialize)]
struct GeodesicSummary<'a> {
    kind: &'a str,
    d: f64,
    samples: usize,
    out: String,
    converged: bool,
}

fn cmd_geodesic(
    body_a: &Path,
    body_b: &Path,
    kind: &str,
    grid: Option<String>,
    grid_list: Option<String>,
    out: &Path,
    opt: &OptimizerArgs,
) -> Result<ExitCode, Error> {
    let kind = parse_kind(kind)?;
    let grid = parse_grid(grid, grid_list)?;
    let a = read_body(body_a)?;
    let b = read_body(body_b)?;
    let (pair, report) = position(&a, &b, opt)?;
    let path = build_path(&pair, kind, &grid)?;

    // Post-construction verification over the full grid.
    geodesic_product_check(&path, &grid)?;

    std::fs::create_dir_all(out)?;
    let manifest = PathManifest {
        kind: kind.name().to_string(),
        d: pair.d,
        lambdas: grid.clone(),
    };
    write_json_atomic(&out.join("manifest.json"), &manifest)?;
    for (lambda, body) in &path.samples {
        write_json_atomic(&out.join(lambda_file_name(*lambda)), &body_to_spec(body))?;
        if pair.dim() == 2 {
            let svg = render_with_context(body, Some(&pair), &format!("lambda = {lambda:.3}"))?;
            write_text_atomic(&out.join(svg_file_name(*lambda)), &svg)?;
        }
    }

    let converged = report.as_ref().is_none_or(|r| r.converged);
    let summary = GeodesicSummary {
        kind: kind.name(),
        d: pair.d,
        samples: path.samples.len(),
        out: out.display().to_string(),
        converged,
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    if !converged {
        return Ok(ExitCode::from(4));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifySummary {
    partitions_checked: usize,
    d: f64,
    ok: bool,
}

fn cmd_verify(manifest_path: &Path, partitions: usize, seed: u64) -> Result<ExitCode, Error> {
    let text = std::fs::read_to_string(manifest_path)?;
    let manifest: PathManifest =
        serde_json::from_str(&text).map_err(|e| Error::input(format!("bad manifest: {e}")))?;
    let kind = parse_kind(&manifest.kind)?;
    let dir = manifest_path.parent().unwrap_or_else(|| Path::new("."));

    let mut samples = Vec::with_capacity(manifest.lambdas.len());
    for &lambda in &manifest.lambdas {
        let body = read_body(&dir.join(lambda_file_name(lambda)))?;
        samples.push((lambda, body));
    }
    if samples.len() < 2 {
        return Err(Error::input("manifest lists fewer than two samples"));
    }
    let pair = PositionedPair {
        ball_e: samples[0].1.clone(),
        ball_f: samples.last().unwrap().1.clone(),
        d: manifest.d,
    };
    let path = GeodesicPath {
        pair,
        kind: PathKind::Simple(kind),
        samples,
    };

    // Full grid first, then seeded random sub-partitions; interval
    // distances are shared across the batch.
    let mut batch = vec![manifest.lambdas.clone()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let interior: Vec<f64> = manifest.lambdas[1..manifest.lambdas.len() - 1].to_vec();
    for _ in 0..partitions {
        let mut partition = vec![0.0];
        for &lambda in &interior {
            if rng.random_range(0.0..1.0) < 0.5 {
                partition.push(lambda);
            }
        }
        partition.push(1.0);
        batch.push(partition);
    }
    let checks = geodesic_product_check_many(&path, &batch)?;

    let summary = VerifySummary {
        partitions_checked: checks.len(),
        d: manifest.d,
        ok: true,
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct InvariantReport {
    ratios: Vec<f64>,
    edges: usize,
    triangles: usize,
}

fn cmd_invariant(body_path: &Path, map: Option<&Path>) -> Result<ExitCode, Error> {
    let mut body = read_body(body_path)?;
    if let Some(map_path) = map {
        let text = std::fs::read_to_string(map_path)?;
        let rows: Vec<Vec<f64>> =
            serde_json::from_str(&text).map_err(|e| Error::input(format!("bad matrix: {e}")))?;
        let n = body.dim();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::input(format!("matrix must be {n}x{n}")));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        body = body.linear_image(&nalgebra_matrix(n, &flat))?;
    }
    let poly = body
        .as_polygon()
        .ok_or_else(|| Error::input("invariant needs a 2D polygonal body"))?;
    let faces = faces_1d(poly);
    let invariant = area_ratios(poly);
    let report = InvariantReport {
        ratios: invariant.ratios.clone(),
        edges: faces.len(),
        triangles: faces.len(),
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn nalgebra_matrix(n: usize, flat: &[f64]) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_row_slice(n, n, flat)
}

#[derive(Serialize)]
struct FamilyExport {
    lambda: f64,
    d: f64,
    members: Vec<FamilyMemberExport>,
}

#[derive(Serialize)]
struct FamilyMemberExport {
    body: BodySpec,
    certificate: FamilyCertificate,
}

fn cmd_family(
    body_a: &Path,
    body_b: &Path,
    lambda: f64,
    count: usize,
    out: Option<&Path>,
    attach_face: Option<&Path>,
    opt: &OptimizerArgs,
) -> Result<ExitCode, Error> {
    let a = read_body(body_a)?;
    let b = read_body(body_b)?;
    let (pair, _) = position(&a, &b, opt)?;

    let export = if let Some(face_path) = attach_face {
        let text = std::fs::read_to_string(face_path)?;
        let face: FaceSpec3 =
            serde_json::from_str(&text).map_err(|e| Error::input(format!("bad face spec: {e}")))?;
        let body = attach_face_3d(&pair, lambda, &face)?;
        let census = body.facet_census();
        FamilyExport {
            lambda,
            d: pair.d,
            members: vec![FamilyMemberExport {
                body: body_to_spec(&ConvexBody::Polytope(body)),
                certificate: FamilyCertificate {
                    lambda,
                    sandwich_ok: true,
                    new_faces: Vec::new(),
                    ratio: None,
                    invariant_sample: Vec::new(),
                    facet_census: Some(census),
                },
            }],
        }
    } else {
        let family = bq_family(&pair, lambda, count)?;
        // The family is already certified; spell the certificates out and
        // double-check distinctness from both extreme bodies.
        let mut members = Vec::with_capacity(family.members.len());
        for m in &family.members {
            let distinct = invariant_distinct(&m.invariant, &family.b_invariant)
                && invariant_distinct(&m.invariant, &family.c_invariant);
            if !distinct {
                return Err(Error::verification(
                    "member invariant is not distinct from the extreme bodies",
                ));
            }
            let sample: Vec<f64> = m.invariant.ratios.iter().take(16).cloned().collect();
            members.push(FamilyMemberExport {
                body: body_to_spec(&m.body),
                certificate: FamilyCertificate {
                    lambda,
                    sandwich_ok: true,
                    new_faces: vec![
                        [family.p1, m.q],
                        [m.q, family.p2],
                    ],
                    ratio: Some(m.ratio),
                    invariant_sample: sample,
                    facet_census: None,
                },
            });
        }
        FamilyExport {
            lambda,
            d: family.pair.d,
            members,
        }
    };

    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        write_json_atomic(&dir.join("family.json"), &export)?;
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "members": export.members.len(),
                "out": dir.display().to_string(),
            }))?
        );
    } else {
        println!("{}", serde_json::to_string_pretty(&export)?);
    }
    Ok(ExitCode::SUCCESS)
}
