//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vsds_shared::geometry::{Point2, Vec2};
use vsds_shared::gp::{GpDataset, GpHyperParams};
use vsds_shared::motion::ModulationParams;
use vsds_shared::vsds::{AttractorChain, Tunnel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn gauss_jordan_inverse(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        let p = m[col][col];
        assert!(p.abs() > 1e-300, "singular matrix");
        for v in m[col].iter_mut() {
            *v /= p;
        }
        let pivot_row = m[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != col {
                let f = row[col];
                if f != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

fn se(a: Point2, b: Point2, h: &GpHyperParams) -> f64 {
    let d2 = (a.y - b.y).powi(2) + (a.z - b.z).powi(2);
    h.gamma_f * (-d2 / (2.0 * h.length_scale)).exp()
}

/// Textbook GP regression through an explicit inverse of `K + σ_n² I`.
pub struct NaiveGp {
    xs: Vec<Point2>,
    inv: Vec<Vec<f64>>,
    w_phi: Vec<f64>,
    w_kappa: Vec<f64>,
    h: GpHyperParams,
}

impl NaiveGp {
    pub fn new(xs: &[Point2], ys: &[ModulationParams], h: GpHyperParams) -> Self {
        let n = xs.len();
        let k: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| se(xs[i], xs[j], &h) + if i == j { h.noise_var } else { 0.0 })
                    .collect()
            })
            .collect();
        let inv = gauss_jordan_inverse(&k);
        let mul = |y: &dyn Fn(usize) -> f64| -> Vec<f64> {
            (0..n).map(|i| (0..n).map(|j| inv[i][j] * y(j)).sum()).collect()
        };
        let w_phi = mul(&|j| ys[j].phi);
        let w_kappa = mul(&|j| ys[j].kappa);
        Self { xs: xs.to_vec(), inv, w_phi, w_kappa, h }
    }

    /// `(φ, κ, σ²)` at `x`.
    pub fn predict(&self, x: Point2) -> (f64, f64, f64) {
        let ks: Vec<f64> = self.xs.iter().map(|&xi| se(x, xi, &self.h)).collect();
        let phi = ks.iter().zip(&self.w_phi).map(|(a, b)| a * b).sum();
        let kappa = ks.iter().zip(&self.w_kappa).map(|(a, b)| a * b).sum();
        let mut quad = 0.0;
        for i in 0..ks.len() {
            for j in 0..ks.len() {
                quad += ks[i] * self.inv[i][j] * ks[j];
            }
        }
        (phi, kappa, self.h.gamma_f - quad)
    }
}

/// Random dataset of `n` distinct points in a 0.2 m square.
pub fn random_dataset(r: &mut ChaCha8Rng, n: usize) -> (Vec<Point2>, Vec<ModulationParams>) {
    let mut xs: Vec<Point2> = Vec::with_capacity(n);
    while xs.len() < n {
        let x = Vec2::new(r.random_range(-0.1..0.1), r.random_range(-0.1..0.1));
        if xs.iter().all(|p| p.distance(x) > 1e-6) {
            xs.push(x);
        }
    }
    let ys = (0..n)
        .map(|_| ModulationParams {
            phi: r.random_range(-3.0..3.0),
            kappa: r.random_range(-0.9..3.0),
        })
        .collect();
    (xs, ys)
}

pub fn dataset(xs: &[Point2], ys: &[ModulationParams]) -> GpDataset {
    GpDataset::new(xs.to_vec(), ys.to_vec()).unwrap()
}

/// Largest perpendicular offset from `base` along `normal` that is still
/// inside the tunnel, by outward stepping then bisection.
pub fn inside_half_width(chain: &AttractorChain, threshold: f64, base: Point2, normal: Vec2) -> f64 {
    let inside = |d: f64| chain.tunnel_check(threshold, base + normal * d) == Tunnel::Inside;
    if !inside(0.0) {
        return 0.0;
    }
    let step = 1e-4;
    let mut d = 0.0;
    while inside(d + step) {
        d += step;
        assert!(d < 10.0, "tunnel does not close");
    }
    let (mut lo, mut hi) = (d, d + step);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
