//! Shared numeric machinery: a small Nelder-Mead simplex minimizer,
//! golden-section refinement, and direction-space maximizers used for
//! boundary searches on gauge bodies.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Result of a simplex minimization run.
#[derive(Debug, Clone)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iters: usize,
    pub converged: bool,
}

/// Options for [`nelder_mead`]. `x_tol` bounds the simplex diameter,
/// `f_tol` the spread of function values across the simplex.
#[derive(Debug, Clone, Copy)]
pub struct NmOptions {
    pub max_iters: usize,
    pub x_tol: f64,
    pub f_tol: f64,
}

impl Default for NmOptions {
    fn default() -> Self {
        NmOptions {
            max_iters: 400,
            x_tol: 1e-12,
            f_tol: 1e-14,
        }
    }
}

/// Downhill simplex minimization with standard reflection/expansion/
/// contraction/shrink coefficients. The initial simplex is `x0` plus
/// `radius`-sized steps along each coordinate axis.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], radius: f64, opts: NmOptions) -> NmResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    debug_assert!(n >= 1);
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += radius;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    let mut iters = 0;
    let mut converged = false;
    while iters < opts.max_iters {
        iters += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let diameter = simplex
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&simplex[best])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        let spread = values[worst] - values[best];
        if diameter < opts.x_tol || spread.abs() < opts.f_tol {
            converged = true;
            break;
        }

        // Centroid of all points except the worst.
        let mut centroid = vec![0.0; n];
        for (i, p) in simplex.iter().enumerate() {
            if i == worst {
                continue;
            }
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / n as f64;
            }
        }

        let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| x + t * (x - y)).collect()
        };

        let reflected = combine(&centroid, &simplex[worst], alpha);
        let f_r = f(&reflected);
        if f_r < values[best] {
            let expanded = combine(&centroid, &simplex[worst], gamma);
            let f_e = f(&expanded);
            if f_e < f_r {
                simplex[worst] = expanded;
                values[worst] = f_e;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_r;
            }
        } else if f_r < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = f_r;
        } else {
            let (base, f_base) = if f_r < values[worst] {
                (&reflected, f_r)
            } else {
                (&simplex[worst], values[worst])
            };
            let contracted: Vec<f64> = centroid
                .iter()
                .zip(base)
                .map(|(c, w)| c + rho * (w - c))
                .collect();
            let f_c = f(&contracted);
            if f_c < f_base {
                simplex[worst] = contracted;
                values[worst] = f_c;
            } else {
                // Shrink toward the best vertex.
                let best_point = simplex[best].clone();
                for (i, p) in simplex.iter_mut().enumerate() {
                    if i == best {
                        continue;
                    }
                    for (x, b) in p.iter_mut().zip(&best_point) {
                        *x = b + sigma * (*x - b);
                    }
                    values[i] = f(p);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    NmResult {
        x: simplex[best].clone(),
        fx: values[best],
        iters,
        converged,
    }
}

/// Golden-section search for the maximum of `f` on `[a, b]`, assuming the
/// bracket contains a single local maximum. Returns `(argmax, max)`.
pub fn golden_section_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

/// Maximum of a function of direction over the unit circle: a uniform
/// angular scan followed by golden-section refinement of the best brackets.
pub fn max_over_circle<F>(f: F, samples: usize) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let eval = |theta: f64| {
        let (s, c) = theta.sin_cos();
        f(c, s)
    };
    let step = std::f64::consts::TAU / samples as f64;
    let values: Vec<f64> = (0..samples).map(|k| eval(k as f64 * step)).collect();

    // Refine every local maximum of the scan that is within a hair of the
    // global one; distinct peaks can be numerically tied.
    let global = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut best = global;
    for k in 0..samples {
        let prev = values[(k + samples - 1) % samples];
        let next = values[(k + 1) % samples];
        if values[k] >= prev && values[k] >= next && values[k] >= global - 1e-3 * global.abs().max(1.0) {
            let theta = k as f64 * step;
            let (_, v) = golden_section_max(eval, theta - step, theta + step, 1e-13);
            if v > best {
                best = v;
            }
        }
    }
    best
}

/// Quasi-uniform directions on the unit sphere (Fibonacci lattice).
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|i| {
            let y = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - y * y).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), y, r * phi.sin()]
        })
        .collect()
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

/// Orthonormal basis of the tangent space at unit vector `u`.
fn tangent_basis(u: &[f64]) -> Vec<Vec<f64>> {
    let n = u.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    // Gram-Schmidt the coordinate axes against u and the accepted vectors.
    for axis in 0..n {
        if basis.len() == n - 1 {
            break;
        }
        let mut v = vec![0.0; n];
        v[axis] = 1.0;
        let dot_u: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
        for (x, uu) in v.iter_mut().zip(u) {
            *x -= dot_u * uu;
        }
        for b in &basis {
            let dot: f64 = v.iter().zip(b.iter()).map(|(a, c)| a * c).sum();
            for (x, bb) in v.iter_mut().zip(b) {
                *x -= dot * bb;
            }
        }
        if normalize(&mut v) > 1e-7 {
            basis.push(v);
        }
    }
    basis
}

/// Maximum of a function of direction over the unit sphere in `dim`
/// dimensions: multi-start local search in tangent charts, with starts
/// drawn from the given RNG plus a coarse Fibonacci sweep for `dim == 3`.
pub fn max_over_sphere<F>(f: F, dim: usize, starts: usize, rng: &mut ChaCha8Rng) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let mut seeds: Vec<Vec<f64>> = Vec::with_capacity(starts + 8);
    if dim == 3 {
        let sweep = fibonacci_sphere(512);
        let mut best_idx = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (i, d) in sweep.iter().enumerate() {
            let v = f(d);
            if v > best_val {
                best_val = v;
                best_idx = i;
            }
        }
        seeds.push(sweep[best_idx].to_vec());
    }
    for axis in 0..dim {
        let mut v = vec![0.0; dim];
        v[axis] = 1.0;
        seeds.push(v);
    }
    while seeds.len() < starts {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        if normalize(&mut v) > 1e-3 {
            seeds.push(v);
        }
    }

    let mut best = f64::NEG_INFINITY;
    for seed in seeds {
        let basis = tangent_basis(&seed);
        let chart = |p: &[f64]| -> f64 {
            let mut u = seed.clone();
            for (b, t) in basis.iter().zip(p) {
                for (x, bb) in u.iter_mut().zip(b) {
                    *x += t * bb;
                }
            }
            if normalize(&mut u) < 1e-9 {
                return f64::INFINITY;
            }
            -f(&u)
        };
        let res = nelder_mead(
            chart,
            &vec![0.0; dim - 1],
            0.4,
            NmOptions {
                max_iters: 250,
                x_tol: 1e-11,
                f_tol: 1e-13,
            },
        );
        // One polishing pass with a tight simplex around the minimizer.
        let polished = nelder_mead(
            chart,
            &res.x,
            1e-4,
            NmOptions {
                max_iters: 120,
                x_tol: 1e-12,
                f_tol: 1e-14,
            },
        );
        let v = (-res.fx).max(-polished.fx);
        if v > best {
            best = v;
        }
    }
    best
}

/// Convex minimization of `f` over R^dim via simplex descent from several
/// seeds, each followed by a tightened polishing pass.
pub fn minimize_convex<F>(f: F, seeds: &[Vec<f64>], scale: f64) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = f64::INFINITY;
    let mut best_x: Option<Vec<f64>> = None;
    for seed in seeds {
        let res = nelder_mead(
            &f,
            seed,
            (0.35 * scale).max(1e-9),
            NmOptions {
                max_iters: 160,
                x_tol: 1e-11,
                f_tol: 1e-14,
            },
        );
        if res.fx < best {
            best = res.fx;
            best_x = Some(res.x);
        }
    }
    // Restart around the incumbent with shrinking radii; simplex descent on
    // piecewise-linear objectives can stall on a non-optimal edge.
    if let Some(x) = best_x {
        let mut x = x;
        for k in 1..=4 {
            let radius = (scale * 10f64.powi(-(2 * k))).max(1e-11);
            let res = nelder_mead(
                &f,
                &x,
                radius,
                NmOptions {
                    max_iters: 120,
                    x_tol: 1e-13,
                    f_tol: 1e-16,
                },
            );
            let improvement = best - res.fx;
            if res.fx < best {
                best = res.fx;
                x = res.x;
            }
            if k >= 2 && improvement < 1e-12 * scale.max(1.0) {
                break;
            }
        }
    }
    best
}
