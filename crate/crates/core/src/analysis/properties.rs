//! Randomized invariant checks, one report per suite.

use std::time::Instant;

use rand::Rng;

use crate::error::Result;
use crate::lhv::{
    e_lr, lhv_upper_bound, scalar_product_lhv, scalar_product_lhv_pairwise, LhvModel,
};
use crate::quadrature::{
    direction_cosine_moments, integrate_product, integrate_sphere, orthogonality_residual,
    DEFAULT_NODE_BUDGET,
};
use crate::quantum::{
    bloch_norm_product, correlation_tensor, e_sep, e_sep_from_tensor, product_correlation_tensor,
    JointState,
};
use crate::types::{norm_sq, ProductState, QubitState, Setting};

use super::config::{MAX_CLOSED_FORM_PARTIES, MAX_DENSE_PARTIES};
use super::report::{relative_error, Provenance, Report};
use super::sampling::{
    random_density_matrix, random_ensemble_model, random_mixed_product, random_mixed_qubit,
    random_pure_product, random_pure_qubit, random_setting, random_unit_vector, rng_for,
};
use super::{violation_ratio, RunOptions};

type Suite = fn(&mut Report, &RunOptions) -> Result<()>;

pub const SUITES: [(&str, Suite); 12] = [
    ("property:unit-vector-norm", unit_vector_norm),
    ("property:bloch-constraint", bloch_constraint),
    ("property:bloch-linearity", bloch_linearity),
    ("property:oracle-equivalence", oracle_equivalence),
    ("property:tensor-bounds", tensor_bounds),
    ("property:purity-saturation", purity_saturation),
    ("property:damping", damping),
    ("property:grid-exactness", grid_exactness),
    (
        "property:quadrature-factorization",
        quadrature_factorization,
    ),
    ("property:lhv-bound", lhv_bound),
    ("property:lhv-convexity", lhv_convexity),
    ("property:violation-ratio", violation_ratio_suite),
];

// streams above the built-in scenarios
const STREAM_BASE: u64 = 100;

pub fn run_suite(index: usize, opts: &RunOptions) -> Result<Report> {
    let (name, suite) = SUITES[index];
    let start = Instant::now();
    let mut report = Report::new(name, Provenance::new(opts.grid, opts.tolerances, opts.seed));
    suite(&mut report, opts)?;
    report.duration = start.elapsed();
    Ok(report)
}

fn stream_of(name: &str) -> u64 {
    STREAM_BASE + SUITES.iter().position(|(n, _)| *n == name).expect("listed") as u64
}

fn unit_vector_norm(report: &mut Report, opts: &RunOptions) -> Result<()> {
    let mut rng = rng_for(opts.seed, stream_of("property:unit-vector-norm"));
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let theta = rng.random_range(0.0..=std::f64::consts::PI);
        let phi = rng.random_range(0.0..2.0 * std::f64::consts::PI);
        let n = Setting::new(theta, phi)?.unit_vector();
        worst = worst.max((norm_sq(&n).sqrt() - 1.0).abs());
    }
    report.compare_abs("max ||n| - 1|", worst, 0.0, "1", 1e-14);
    Ok(())
}

fn bloch_constraint(report: &mut Report, opts: &RunOptions) -> Result<()> {
    let tol = &opts.tolerances;
    let mut rng = rng_for(opts.seed, stream_of("property:bloch-constraint"));
    let mut worst_mixed = 0.0_f64;
    let mut purity_mismatch = 0usize;
    for _ in 0..1000 {
        let q = random_mixed_qubit(&mut rng);
        worst_mixed = worst_mixed.max(q.bloch_norm_sq());
        // |b|² = 1 iff the smallest eigenvalue vanishes
        let rank_one = q.rho().hermitian_eigenvalues()[0].abs() <= tol.bloch_abs;
        if rank_one != q.is_pure(tol.bloch_abs) {
            purity_mismatch += 1;
        }
    }
    report.quantity("max |b|² (1000 mixed)", worst_mixed);
    report.check(
        "mixed |b|² ≤ 1",
        worst_mixed <= 1.0 + tol.bloch_abs,
        format!("max |b|² = {worst_mixed:.17}"),
    );
    let worst_pure = (0..1000)
        .map(|_| (random_pure_qubit(&mut rng).bloch_norm_sq() - 1.0).abs())
        .fold(0.0, f64::max);
    report.compare_abs(
        "max ||b|² - 1| (1000 pure)",
        worst_pure,
        0.0,
        "|b|² = 1",
        tol.bloch_abs,
    );
    report.check(
        "pure iff rank one",
        purity_mismatch == 0,
        format!("{purity_mismatch} mismatches"),
    );
    Ok(())
}

fn bloch_linearity(report: &mut Report, opts: &RunOptions) -> Result<()> {
    let mut rng = rng_for(opts.seed, stream_of("property:bloch-linearity"));
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let p: f64 = rng.random();
        let a = random_mixed_qubit(&mut rng);
        let b = random_mixed_qubit(&mut rng);
        let mix = QubitState::new(a.rho().scale(p).add(&b.rho().scale(1.0 - p))?)?;
        for k in 0..3 {
            let lin = p * a.bloch()[k] + (1.0 - p) * b.bloch()[k];
            worst = worst.max((mix.bloch()[k] - lin).abs());
        }
    }
    report.compare_abs("max linearity defect", worst, 0.0, "p·b₁ + (1-p)·b₂", 1e-12);
    Ok(())
}

fn oracle_equivalence(report: &mut Report, opts: &RunOptions) -> Result<()> {
    let mut rng = rng_for(opts.seed, stream_of("property:oracle-equivalence"));
    let max_n = opts.max_parties.clamp(1, 4);
    let mut worst_e = 0.0_f64;
    let mut worst_t = 0.0_f64;
    for k in 0..100 {
        let n = 1 + k % max_n;
        let product = if k % 2 == 0 {
            random_pure_product(&mut rng, n)
        } else {
            random_mixed_product(&mut rng, n)
        };
        let fast = product_correlation_tensor(&product);
        let state = JointState::product(product);
        let t = correlation_tensor(&state);
        worst_t = worst_t.max(
            t.values()
                .iter()
                .zip(fast.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        );
        let settings: Vec<Setting> = (0..n).map(|_| random_setting(&mut rng)).collect();
        let direct = e_sep(&state, &settings)?;
        let contracted = e_sep_from_tensor(&t, &settings)?;
        worst_e = worst_e.max((direct - contracted).abs());
    }
    report.compare_abs("max |E_sep - T·c…c|", worst_e, 0.0, "dense trace", 1e-12);
    report.compare_abs("max |T - ⊗b_j|", worst_t, 0.0, "⊗ b_j", 1e-12);
    Ok(())
}

fn tensor_bounds(report: &mut Report, opts: &RunOptions) -> Result<()> {
    let tol = &opts.tolerances;
    let mut rng = rng_for(opts.seed, stream_of("property:tensor-bounds"));
    let max_n = opts.max_parties.clamp(1, 3);
    let mut worst = 0.0_f64;
    for k in 0..60 {
        let n = 1 + k % max_n;
        let rho = random_density_matrix(&mut rng, 1 << n);
        let state = JointState::general(n, rho)?;
        worst = worst.max(correlation_tensor(&state).max_abs());
    }
    for n in 2..=opts.max_parties.min(MAX_DENSE_PARTIES) {
        worst = worst.max(correlation_tensor(&JointState::ghz(n)?).max_abs());
    }
    report.quantity("max |T_i…|", worst);
    report.check(
        "entries within [-1, 1]",
        worst <= 1.0 + tol.bloch_abs,
        format!("max |T| = {worst:.17}"),
    );
    Ok(())
}

fn purity_saturation(report: &mut Report, opts: &RunOptions) -> Result<()> {
    let tol = &opts.tolerances;
    let mut rng = rng_for(opts.seed, stream_of("property:purity-saturation"));
    let short = 1.0 - 1e-3;
    let mut worst_mixed = 0.0_f64;
    let mut worst_pure = 0.0_f64;
    for n in 1..=opts.max_parties.min(MAX_DENSE_PARTIES) {
        for trial in 0..50 {
            let mut parties: Vec<QubitState> =
                (0..n).map(|_| random_pure_qubit(&mut rng)).collect();
            worst_pure = worst_pure
                .max((bloch_norm_product(&ProductState::new(parties.clone())?) - 1.0).abs());
            // one party pulled into the ball; radius exactly 1 - 1e-3 on the first trial
            let r = if trial == 0 {
                short
            } else {
                rng.random_range(0.0..=short)
            };
            let dir = random_unit_vector(&mut rng);
            let j = rng.random_range(0..n);
            parties[j] = QubitState::from_bloch(dir.map(|x| r * x))?;
            worst_mixed = worst_mixed.max(bloch_norm_product(&ProductState::new(parties)?));
        }
    }
    report.quantity("max Π|b_j|² with a mixed party", worst_mixed);
    report.check(
        "mixed party breaks saturation",
        worst_mixed < 1.0 - tol.purity_gap,
        format!("max = {worst_mixed:.17} < 1 - {:.0e}", tol.purity_gap),
    );
    report.compare_abs(
        "max |Π|b_j|² - 1| all pure",
        worst_pure,
        0.0,
        "1",
        tol.bloch_abs,
    );
    Ok(())
}

fn damping(report: &mut Report, opts: &RunOptions) -> Result<()> {
    let mut rng = rng_for(opts.seed, stream_of("property:damping"));
    let max_n = opts.max_parties.clamp(1, 4);
    let mut worst = 0.0_f64;
    for k in 0..100 {
        let n = 1 + k % max_n;
        let product = random_mixed_product(&mut rng, n);
        let before = correlation_tensor(&JointState::product(product.clone())).sum_of_squares();
        let p: f64 = rng.random();
        let j = rng.random_range(0..n);
        let mut parties = product.parties().to_vec();
        parties[j] = parties[j].depolarize(p)?;
        let after =
            correlation_tensor(&JointState::product(ProductState::new(parties)?)).sum_of_squares();
        worst = worst.max((after - (1.0 - p).powi(2) * before).abs());
    }
    report.compare_abs("max |ΣT²' - (1-p)²ΣT²|", worst, 0.0, "(1-p)²·ΣT²", 1e-12);
    Ok(())
}

fn grid_exactness(report: &mut Report, opts: &RunOptions) -> Result<()> {
    let tol = &opts.tolerances;
    let grid = opts.grid.build()?;
    report.compare_abs(
        "orthogonality residual",
        orthogonality_residual(&grid),
        0.0,
        "(4π/3)δ_αβ",
        tol.orthogonality_abs,
    );
    let m = direction_cosine_moments(&grid);
    report.quantity("∫ z² dΩ", m[2][2]);
    // degree ≤ 2 monomials; odd ones vanish, x², y², z² give 4π/3, 1 gives 4π
    let mut worst = 0.0_f64;
    for a in 0..=2i32 {
        for b in 0..=(2 - a) {
            for c in 0..=(2 - a - b) {
                let got = integrate_sphere(
                    |s| {
                        let n = s.unit_vector();
                        n[0].powi(a) * n[1].powi(b) * n[2].powi(c)
                    },
                    &grid,
                )?;
                let want = match (a, b, c) {
                    (0, 0, 0) => 4.0 * std::f64::consts::PI,
                    _ if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 => 0.0,
                    _ => 4.0 * std::f64::consts::PI / 3.0,
                };
                worst = worst.max((got - want).abs());
            }
        }
    }
    report.compare_abs(
        "max degree-2 monomial error",
        worst,
        0.0,
        "analytic",
        tol.orthogonality_abs,
    );
    Ok(())
}

fn quadrature_factorization(report: &mut Report, opts: &RunOptions) -> Result<()> {
    let mut rng = rng_for(opts.seed, stream_of("property:quadrature-factorization"));
    let grid = opts.grid.build()?;
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let a = random_mixed_qubit(&mut rng).bloch();
        let b = random_mixed_qubit(&mut rng).bloch();
        let f = |v: [f64; 3]| move |s: &Setting| 1.0 + crate::types::dot(&s.unit_vector(), &v);
        let i1 = integrate_sphere(f(a), &grid)?;
        let i2 = integrate_sphere(f(b), &grid)?;
        let joint = integrate_product(
            |s| f(a)(&s[0]) * f(b)(&s[1]),
            &[grid.clone(), grid.clone()],
            DEFAULT_NODE_BUDGET,
        )?;
        worst = worst.max(relative_error(joint, i1 * i2));
    }
    report.compare_abs(
        "max rel |∫∫fg - ∫f∫g|",
        worst,
        0.0,
        "product of integrals",
        1e-12,
    );
    Ok(())
}

fn lhv_bound(report: &mut Report, opts: &RunOptions) -> Result<()> {
    const MODELS: usize = 200;
    let tol = &opts.tolerances;
    let mut rng = rng_for(opts.seed, stream_of("property:lhv-bound"));
    let grid = opts.grid.build()?;
    let max_n = opts.max_parties.clamp(1, 3);
    let mut worst_ratio = 0.0_f64;
    let mut worst_route = 0.0_f64;
    for k in 0..MODELS {
        let n = 1 + k % max_n;
        let model = random_ensemble_model(&mut rng, n, 6, &grid);
        let grids = vec![grid.clone(); n];
        let sp = scalar_product_lhv(&model, &grids)?;
        worst_ratio = worst_ratio.max(sp / lhv_upper_bound(n)?);
        if k % 10 == 0 {
            let pairwise = scalar_product_lhv_pairwise(&model, &grids)?;
            worst_route = worst_route.max(relative_error(pairwise, sp));
        }
    }
    report.quantity("max (E_LR,E_LR)/(4π)^N", worst_ratio);
    report.check(
        "no model exceeds (4π)^N",
        worst_ratio <= 1.0 + tol.lhv_rel,
        format!("{MODELS} random ensembles, max ratio {worst_ratio:.17}"),
    );
    report.compare_abs(
        "max rel |pairwise - grid|",
        worst_route,
        0.0,
        "λ,λ' double sum",
        1e-10,
    );
    Ok(())
}

fn lhv_convexity(report: &mut Report, opts: &RunOptions) -> Result<()> {
    let mut rng = rng_for(opts.seed, stream_of("property:lhv-convexity"));
    let grid = opts.grid.build()?;
    let max_n = opts.max_parties.clamp(1, 3);
    let mut worst = 0.0_f64;
    for k in 0..50 {
        let n = 1 + k % max_n;
        let a = random_ensemble_model(&mut rng, n, 4, &grid);
        let b = random_ensemble_model(&mut rng, n, 4, &grid);
        let p: f64 = rng.random_range(0.01..0.99);
        let mix = LhvModel::mixture(&[(p, &a), (1.0 - p, &b)])?;
        for _ in 0..5 {
            let s: Vec<Setting> = (0..n).map(|_| random_setting(&mut rng)).collect();
            let lhs = e_lr(&mix, &s)?;
            let rhs = p * e_lr(&a, &s)? + (1.0 - p) * e_lr(&b, &s)?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    report.compare_abs(
        "max |E(mix) - mix(E)|",
        worst,
        0.0,
        "convex combination",
        1e-12,
    );
    Ok(())
}

fn violation_ratio_suite(report: &mut Report, opts: &RunOptions) -> Result<()> {
    let tol = &opts.tolerances;
    let max_n = opts.max_parties.min(MAX_CLOSED_FORM_PARTIES);
    for n in 1..=max_n {
        report.compare_rel(
            format!("ratio[N={n}]"),
            violation_ratio(n)?,
            3f64.powi(n as i32),
            "3^N",
            tol.ratio_rel,
        );
        if n >= 2 {
            report.compare_rel(
                format!("ratio-step[N={n}]"),
                violation_ratio(n)? / violation_ratio(n - 1)?,
                3.0,
                "3",
                tol.ratio_rel,
            );
        }
    }
    Ok(())
}
