//! One line per acceptance criterion. Reference values are computed here from
//! their closed forms or from direct traces, never read back from the library.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use sepcorr::analysis::sampling::{
    random_density_matrix, random_deterministic_model, random_ensemble_model, random_pure_product,
    random_pure_qubit, random_unit_vector, rng_for,
};
use sepcorr::analysis::{verify_all, violation_ratio, RunOptions};
use sepcorr::lhv::{e_lr, scalar_product_lhv, single_qubit_simulator_model};
use sepcorr::quadrature::SphereGrid;
use sepcorr::quantum::correlation_tensor_dense;
use sepcorr::{
    bloch_norm_product, correlation_tensor, e_sep, orthogonality_residual, scalar_product_exact,
    scalar_product_numeric, separability_check, ComplexMatrix, JointState, ProductState,
    QubitState, Separability,
};

const SEED: u64 = 0x5e9c_0441;

struct Ledger {
    failed: Vec<String>,
    documented: Vec<String>,
}

impl Ledger {
    fn new() -> Self {
        Self {
            failed: Vec::new(),
            documented: Vec::new(),
        }
    }

    fn record(&mut self, id: &str, pass: bool, detail: String) {
        println!(
            "criterion {id:<4} {}  {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            self.failed.push(id.to_string());
        }
    }

    /// A red line that is known and explained in the README; it is printed but
    /// does not fail the run.
    fn record_documented(&mut self, id: &str, pass: bool, detail: String) {
        let tag = if pass { "PASS" } else { "FAIL (documented)" };
        println!("criterion {id:<4} {tag}  {detail}");
        if !pass {
            self.documented.push(id.to_string());
        }
    }

    fn finish(self) -> ExitCode {
        if !self.documented.is_empty() {
            println!("documented deviations: {}", self.documented.join(", "));
        }
        if self.failed.is_empty() {
            println!("acceptance: all criteria pass");
            ExitCode::SUCCESS
        } else {
            println!("acceptance: failed criteria {:?}", self.failed);
            ExitCode::FAILURE
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn sep_max(n: usize) -> f64 {
    (4.0 * PI / 3.0).powi(n as i32)
}

fn lhv_max(n: usize) -> f64 {
    (4.0 * PI).powi(n as i32)
}

fn criterion_1(ledger: &mut Ledger) {
    let start = Instant::now();
    let mut rng = rng_for(SEED, 1);
    let grid = SphereGrid::default();
    let mut worst_exact = 0.0_f64;
    let mut worst_numeric = 0.0_f64;
    for n in 1..=6 {
        for _ in 0..50 {
            let state = JointState::product(random_pure_product(&mut rng, n));
            let exact = scalar_product_exact(&correlation_tensor(&state));
            worst_exact = worst_exact.max(rel(exact, sep_max(n)));
            if n <= 3 {
                let grids = vec![grid.clone(); n];
                let numeric =
                    scalar_product_numeric(|s| e_sep(&state, s).unwrap(), &grids).unwrap();
                worst_numeric = worst_numeric.max(rel(numeric, exact));
            }
        }
    }
    let t = start.elapsed();
    ledger.record(
        "1",
        worst_exact <= 1e-10 && worst_numeric <= 1e-9 && t <= Duration::from_secs(10),
        format!(
            "separable maximum: exact rel {worst_exact:.2e} (≤1e-10), quadrature rel {worst_numeric:.2e} (≤1e-9), {:.2} s (≤10 s)",
            t.as_secs_f64()
        ),
    );
}

fn criterion_2(ledger: &mut Ledger) {
    let start = Instant::now();
    let mut rng = rng_for(SEED, 2);
    let grid = SphereGrid::default();
    let mut worst_det = 0.0_f64;
    let mut distinct = true;
    for n in 1..=3 {
        let grids = vec![grid.clone(); n];
        let mut models = Vec::new();
        while models.len() < 10 {
            let m = random_deterministic_model(&mut rng, n, &grid);
            if !models.contains(&m) {
                models.push(m);
            }
        }
        distinct &= models.len() == 10;
        for m in &models {
            worst_det = worst_det.max(rel(scalar_product_lhv(m, &grids).unwrap(), lhv_max(n)));
        }
    }
    let mut worst_excess = f64::NEG_INFINITY;
    for k in 0..200 {
        let n = 1 + k % 3;
        let m = random_ensemble_model(&mut rng, n, 6, &grid);
        let sp = scalar_product_lhv(&m, &vec![grid.clone(); n]).unwrap();
        worst_excess = worst_excess.max(sp / lhv_max(n) - 1.0);
    }
    let t = start.elapsed();
    ledger.record(
        "2",
        distinct && worst_det <= 1e-9 && worst_excess <= 1e-9 && t <= Duration::from_secs(30),
        format!(
            "LHV maximum: deterministic rel {worst_det:.2e} (≤1e-9), max excess over (4π)^N {worst_excess:.2e} in 200 ensembles (≤1e-9), {:.2} s (≤30 s)",
            t.as_secs_f64()
        ),
    );
}

fn criterion_3(ledger: &mut Ledger) {
    let worst = (1..=8)
        .map(|n| rel(violation_ratio(n).unwrap(), 3f64.powi(n as i32)))
        .fold(0.0, f64::max);
    let n1 = violation_ratio(1).unwrap();
    ledger.record(
        "3",
        worst <= 1e-12 && rel(n1, 3.0) <= 1e-12,
        format!("violation ratio = 3^N for N=1..8: worst rel {worst:.2e} (≤1e-12), N=1 → {n1}"),
    );
}

/// b_k = tr(ρσ_k) read off the matrix entries.
fn trace_bloch(rho: &ComplexMatrix) -> [f64; 3] {
    let off = rho.get(0, 1);
    [
        2.0 * off.re,
        -2.0 * off.im,
        (rho.get(0, 0) - rho.get(1, 1)).re,
    ]
}

fn criterion_4(ledger: &mut Ledger) {
    let mut rng = rng_for(SEED, 4);
    let mut worst_mixed = 0.0_f64;
    for _ in 0..1000 {
        let b = trace_bloch(&random_density_matrix(&mut rng, 2));
        worst_mixed = worst_mixed.max(b.iter().map(|x| x * x).sum());
    }
    let mut worst_pure = 0.0_f64;
    for _ in 0..1000 {
        // pure state built from amplitudes, Bloch vector from the trace formula
        let q = random_pure_qubit(&mut rng);
        let b = trace_bloch(q.rho());
        worst_pure = worst_pure.max((b.iter().map(|x| x * x).sum::<f64>() - 1.0).abs());
    }
    ledger.record(
        "4",
        worst_mixed <= 1.0 + 1e-12 && worst_pure <= 1e-12,
        format!(
            "Bloch constraint: max |b|² mixed {worst_mixed:.15} (≤1+1e-12), max ||b|²-1| pure {worst_pure:.2e} (≤1e-12)"
        ),
    );
}

fn criterion_5(ledger: &mut Ledger) {
    let grid = SphereGrid::default();
    let residual = orthogonality_residual(&grid);
    // direct moment sum over the grid nodes
    let mut direct = 0.0_f64;
    for a in 0..3 {
        for b in 0..3 {
            let m: f64 = grid
                .nodes()
                .iter()
                .map(|(s, w)| {
                    let n = s.unit_vector();
                    w * n[a] * n[b]
                })
                .sum();
            let want = if a == b { 4.0 * PI / 3.0 } else { 0.0 };
            direct = direct.max((m - want).abs());
        }
    }
    ledger.record(
        "5",
        residual <= 1e-12 && direct <= 1e-12,
        format!("orthogonality on 4×8 grid: residual {residual:.2e}, direct moments {direct:.2e} (≤1e-12)"),
    );
}

fn criterion_6(ledger: &mut Ledger) {
    let mut rng = rng_for(SEED, 6);
    let mut worst_mixed = 0.0_f64;
    let mut worst_pure = 0.0_f64;
    for n in 1..=6 {
        for trial in 0..100 {
            let mut parties: Vec<QubitState> =
                (0..n).map(|_| random_pure_qubit(&mut rng)).collect();
            let pure = bloch_norm_product(&ProductState::new(parties.clone()).unwrap());
            worst_pure = worst_pure.max((pure - 1.0).abs());
            let r = if trial == 0 {
                1.0 - 1e-3
            } else {
                rng.random_range(0.0..=1.0 - 1e-3)
            };
            let dir = random_unit_vector(&mut rng);
            let j = rng.random_range(0..n);
            parties[j] = QubitState::from_bloch(dir.map(|x| r * x)).unwrap();
            let mixed = bloch_norm_product(&ProductState::new(parties).unwrap());
            worst_mixed = worst_mixed.max(mixed);
        }
    }
    ledger.record(
        "6",
        worst_mixed < 1.0 - 1e-6 && worst_pure <= 1e-12,
        format!(
            "saturation only for pure: max product with a mixed party {worst_mixed:.9} (<1-1e-6), all-pure |Π-1| {worst_pure:.2e} (≤1e-12)"
        ),
    );
}

/// ⟨σ_{i1}⊗…⊗σ_{iN}⟩ for the GHZ state by summing ρ_ab · (σ…σ)_ba directly.
fn ghz_sum_t2_by_trace(n: usize) -> f64 {
    let dim = 1usize << n;
    let amp = 1.0 / 2f64.sqrt();
    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    psi[0] = Complex64::new(amp, 0.0);
    psi[dim - 1] = Complex64::new(amp, 0.0);
    let i = Complex64::new(0.0, 1.0);
    // single-qubit Pauli entries σ_k[row][col]
    let pauli = |k: usize, r: usize, c: usize| -> Complex64 {
        match (k, r, c) {
            (0, 0, 1) | (0, 1, 0) => Complex64::new(1.0, 0.0),
            (1, 0, 1) => -i,
            (1, 1, 0) => i,
            (2, 0, 0) => Complex64::new(1.0, 0.0),
            (2, 1, 1) => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 0.0),
        }
    };
    let mut total = 0.0;
    for flat in 0..3usize.pow(n as u32) {
        let mut axes = vec![0; n];
        let mut rest = flat;
        for slot in axes.iter_mut().rev() {
            *slot = rest % 3;
            rest /= 3;
        }
        let mut expectation = Complex64::new(0.0, 0.0);
        for r in 0..dim {
            for c in 0..dim {
                let mut entry = Complex64::new(1.0, 0.0);
                for (q, &k) in axes.iter().enumerate() {
                    let bit = n - 1 - q;
                    entry *= pauli(k, (r >> bit) & 1, (c >> bit) & 1);
                }
                expectation += psi[r].conj() * entry * psi[c];
            }
        }
        total += expectation.re * expectation.re;
    }
    total
}

fn criterion_7(ledger: &mut Ledger) {
    let mut worst_oracle = 0.0_f64;
    let mut all_violated = true;
    let mut worst_literal = 0.0_f64;
    let mut values = Vec::new();
    for n in 2..=6 {
        let ghz = JointState::ghz(n).unwrap();
        let t = correlation_tensor(&ghz);
        let oracle = ghz_sum_t2_by_trace(n);
        let dense: f64 = correlation_tensor_dense(&ghz)
            .values()
            .iter()
            .map(|x| x * x)
            .sum();
        let verdict = separability_check(&t, 1e-9);
        worst_oracle = worst_oracle
            .max((verdict.sum_of_squares - oracle).abs())
            .max((dense - oracle).abs());
        all_violated &= verdict.status == Separability::Violated;
        worst_literal =
            worst_literal.max((verdict.sum_of_squares - ((1u64 << (n - 1)) as f64 + 1.0)).abs());
        values.push(format!("{}", verdict.sum_of_squares));
    }
    ledger.record(
        "7",
        worst_oracle <= 1e-12 && all_violated,
        format!(
            "GHZ witness N=2..6: ΣT² = [{}] matches direct trace within {worst_oracle:.2e} (≤1e-12), all violated",
            values.join(", ")
        ),
    );
    ledger.record_documented(
        "7b",
        worst_literal <= 1e-12,
        format!(
            "GHZ closed form 2^(N-1)+1: max deviation {worst_literal} (odd N give 2^(N-1); the trace has no Z…Z term)"
        ),
    );
}

fn criterion_8(ledger: &mut Ledger) {
    let mut rng = rng_for(SEED, 8);
    let grid = SphereGrid::default();
    let mut worst_e = 0.0_f64;
    let mut worst_sp = 0.0_f64;
    for _ in 0..20 {
        let b = trace_bloch(&random_density_matrix(&mut rng, 2));
        let model = single_qubit_simulator_model(b, 10_000).unwrap();
        for (s, _) in grid.nodes() {
            let n = s.unit_vector();
            let want = n[0] * b[0] + n[1] * b[1] + n[2] * b[2];
            worst_e = worst_e.max((e_lr(&model, &[*s]).unwrap() - want).abs());
        }
        let sp = scalar_product_lhv(&model, std::slice::from_ref(&grid)).unwrap();
        let quantum = 4.0 * PI / 3.0 * b.iter().map(|x| x * x).sum::<f64>();
        worst_sp = worst_sp.max(rel(sp, quantum));
    }
    ledger.record(
        "8",
        worst_e <= 1e-4 && worst_sp <= 1e-3,
        format!(
            "single-qubit simulator R=10⁴: max |E-n·b| {worst_e:.2e} (≤1e-4), scalar product rel {worst_sp:.2e} (≤1e-3)"
        ),
    );
}

fn criterion_9(ledger: &mut Ledger) {
    let opts = RunOptions::default();
    let start = Instant::now();
    let first = verify_all(&opts);
    let t = start.elapsed();
    let second = verify_all(&opts);
    let identical = first.numeric_fingerprint() == second.numeric_fingerprint();
    let failing: Vec<_> = first
        .reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.scenario.clone())
        .collect();
    ledger.record(
        "9",
        failing.is_empty() && identical && t <= Duration::from_secs(60),
        format!(
            "verify_all: {} reports, failing {failing:?}, {:.2} s (≤60 s), run-to-run identical: {identical}",
            first.reports.len(),
            t.as_secs_f64()
        ),
    );
}

fn main() -> ExitCode {
    let mut ledger = Ledger::new();
    criterion_1(&mut ledger);
    criterion_2(&mut ledger);
    criterion_3(&mut ledger);
    criterion_4(&mut ledger);
    criterion_5(&mut ledger);
    criterion_6(&mut ledger);
    criterion_7(&mut ledger);
    criterion_8(&mut ledger);
    criterion_9(&mut ledger);
    ledger.finish()
}
