//! Tensor-product quadrature on the unit sphere: Gauss–Legendre in cosθ
//! crossed with the uniform trapezoid rule in φ.
//!
//! An `n_theta × n_phi` grid integrates c^α polynomials exactly up to degree
//! `2·n_theta − 1` in cosθ and trigonometric degree `n_phi − 1` in φ, so the
//! degree-two integrands behind the scalar products are reproduced to
//! machine precision on tiny grids. Products over N spheres are iterated
//! lazily in lexicographic order, with the first party's node outermost.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::types::{CompensatedSum, Setting};

/// Upper bound on integrand evaluations for a product grid.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

pub const DEFAULT_N_THETA: usize = 4;
pub const DEFAULT_N_PHI: usize = 8;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Gauss–Legendre nodes and weights on [−1, 1], ascending nodes.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < NEWTON_TOL {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        out[n / 2].0 = 0.0;
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Quadrature nodes on one setting sphere. Polar weights are Gauss weights in
/// cosθ, so the sinθ Jacobian is already absorbed.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    theta_nodes: Vec<(f64, f64)>,
    phi_nodes: Vec<(f64, f64)>,
    nodes: Vec<(Setting, f64)>,
}

impl SphereGrid {
    pub fn theta_nodes(&self) -> &[(f64, f64)] {
        &self.theta_nodes
    }

    pub fn phi_nodes(&self) -> &[(f64, f64)] {
        &self.phi_nodes
    }

    /// Flattened (setting, weight) pairs, θ outer and φ inner.
    pub fn nodes(&self) -> &[(Setting, f64)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn n_theta(&self) -> usize {
        self.theta_nodes.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phi_nodes.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|(_, w)| w).sum()
    }
}

impl Default for SphereGrid {
    fn default() -> Self {
        build_grid(DEFAULT_N_THETA, DEFAULT_N_PHI).expect("default grid")
    }
}

pub fn build_grid(n_theta: usize, n_phi: usize) -> Result<SphereGrid> {
    if n_theta == 0 || n_phi == 0 {
        return Err(Error::domain(format!(
            "grid needs at least one node per axis, got {n_theta}x{n_phi}"
        )));
    }
    let theta_nodes: Vec<(f64, f64)> = gauss_legendre(n_theta)
        .into_iter()
        .rev()
        .map(|(x, w)| (x.clamp(-1.0, 1.0).acos(), w))
        .collect();
    let dphi = 2.0 * PI / n_phi as f64;
    let phi_nodes: Vec<(f64, f64)> = (0..n_phi).map(|m| (m as f64 * dphi, dphi)).collect();
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    for &(theta, wt) in &theta_nodes {
        for &(phi, wp) in &phi_nodes {
            nodes.push((Setting::new(theta, phi)?, wt * wp));
        }
    }
    Ok(SphereGrid {
        theta_nodes,
        phi_nodes,
        nodes,
    })
}

/// Weighted node sum of `f` over one sphere.
pub fn integrate_sphere<F>(f: F, grid: &SphereGrid) -> Result<f64>
where
    F: Fn(&Setting) -> f64,
{
    let mut acc = CompensatedSum::default();
    for (s, w) in grid.nodes() {
        let v = f(s);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                value: v,
                node: vec![(s.theta(), s.phi())],
            });
        }
        acc.add(w * v);
    }
    Ok(acc.value())
}

/// The nine integrals ∫ c^α c^β dΩ on `grid`.
pub fn direction_cosine_moments(grid: &SphereGrid) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for (a, row) in m.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = integrate_sphere(
                |s| {
                    let c = s.unit_vector();
                    c[a] * c[b]
                },
                grid,
            )
            .expect("bounded integrand");
        }
    }
    m
}

/// Largest deviation of ∫ c^α c^β dΩ from (4π/3) δ_{αβ}.
pub fn orthogonality_residual(grid: &SphereGrid) -> f64 {
    let m = direction_cosine_moments(grid);
    let mut worst = 0.0_f64;
    for (a, row) in m.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            let target = if a == b { 4.0 * PI / 3.0 } else { 0.0 };
            worst = worst.max((v - target).abs());
        }
    }
    worst
}

fn check_budget(grids: &[SphereGrid], budget: u64) -> Result<()> {
    if grids.is_empty() {
        return Err(Error::domain("integration needs at least one sphere"));
    }
    let required = grids
        .iter()
        .try_fold(1u128, |acc, g| acc.checked_mul(g.len() as u128))
        .unwrap_or(u128::MAX);
    if required > budget as u128 {
        return Err(Error::Budget { required, budget });
    }
    Ok(())
}

/// ∫⋯∫ f over the product of spheres, one grid per party.
pub fn integrate_product<F>(mut f: F, grids: &[SphereGrid], budget: u64) -> Result<f64>
where
    F: FnMut(&[Setting]) -> f64,
{
    let mut settings: Vec<Setting> = grids
        .iter()
        .filter_map(|g| g.nodes().first().map(|n| n.0))
        .collect();
    integrate_product_indexed(
        |idx| {
            for ((s, &i), g) in settings.iter_mut().zip(idx).zip(grids) {
                *s = g.nodes()[i].0;
            }
            f(&settings)
        },
        grids,
        budget,
    )
}

/// Like [`integrate_product`], but hands the integrand node indices into each
/// party's [`SphereGrid::nodes`] instead of settings.
pub fn integrate_product_indexed<F>(mut f: F, grids: &[SphereGrid], budget: u64) -> Result<f64>
where
    F: FnMut(&[usize]) -> f64,
{
    check_budget(grids, budget)?;
    let n = grids.len();
    let mut idx = vec![0usize; n];
    let mut acc = CompensatedSum::default();
    loop {
        let w: f64 = idx
            .iter()
            .zip(grids)
            .map(|(&i, g)| g.nodes()[i].1)
            .product();
        let v = f(&idx);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                value: v,
                node: idx
                    .iter()
                    .zip(grids)
                    .map(|(&i, g)| (g.nodes()[i].0.theta(), g.nodes()[i].0.phi()))
                    .collect(),
            });
        }
        acc.add(w * v);

        // odometer step, last party fastest
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(acc.value());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < grids[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// (E, E) = ∫⋯∫ E² with the default evaluation budget.
pub fn scalar_product_numeric<F>(e: F, grids: &[SphereGrid]) -> Result<f64>
where
    F: FnMut(&[Setting]) -> f64,
{
    scalar_product_numeric_with_budget(e, grids, DEFAULT_NODE_BUDGET)
}

pub fn scalar_product_numeric_with_budget<F>(
    mut e: F,
    grids: &[SphereGrid],
    budget: u64,
) -> Result<f64>
where
    F: FnMut(&[Setting]) -> f64,
{
    integrate_product(
        |s| {
            let v = e(s);
            v * v
        },
        grids,
        budget,
    )
}
