use std::f64::consts::PI;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::lhv::{
    e_lr, hemispheric_disagreement_model, lhv_upper_bound, saturating_model, scalar_product_lhv,
    single_qubit_simulator_model, EnsembleMember, LhvModel, ModelSpec, Outcome, ResponseFunction,
    DEFAULT_SIMULATOR_RESOLUTION,
};
use crate::quadrature::{scalar_product_numeric, SphereGrid, DEFAULT_NODE_BUDGET};
use crate::quantum::{
    bloch_norm_product, correlation_tensor, correlation_tensor_dense, e_sep, e_sep_from_tensor,
    product_correlation_tensor, scalar_product_exact, separability_check, separable_maximum,
    JointKind, JointState,
};
use crate::types::{dot, norm_sq, CorrelationTensor, ProductState, QubitState, Vec3};

use super::config::{ScenarioConfig, StateSpec, ValidatedScenario, MAX_DENSE_PARTIES};
use super::report::{relative_error, Provenance, Report};
use super::sampling::{
    random_bloch_vector, random_deterministic_model, random_pure_product, rng_for,
};
use super::{violation_ratio, RunOptions};

const SEP_MAX: &str = "(4π/3)^N";
const LHV_MAX: &str = "(4π)^N";
const RATIO: &str = "3^N";

/// The scenario library run by `verify` without any configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinScenario {
    PaperMain,
    BlochSaturation,
    LhvSaturation,
    LhvMixingSlack,
    SingleQubitSimulator,
    GhzWitness,
    BellWitness,
}

impl BuiltinScenario {
    pub const ALL: [BuiltinScenario; 7] = [
        BuiltinScenario::PaperMain,
        BuiltinScenario::BlochSaturation,
        BuiltinScenario::LhvSaturation,
        BuiltinScenario::LhvMixingSlack,
        BuiltinScenario::SingleQubitSimulator,
        BuiltinScenario::GhzWitness,
        BuiltinScenario::BellWitness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinScenario::PaperMain => "paper-main",
            BuiltinScenario::BlochSaturation => "bloch-saturation",
            BuiltinScenario::LhvSaturation => "lhv-saturation",
            BuiltinScenario::LhvMixingSlack => "lhv-mixing-slack",
            BuiltinScenario::SingleQubitSimulator => "single-qubit-simulator",
            BuiltinScenario::GhzWitness => "ghz-witness",
            BuiltinScenario::BellWitness => "bell-witness",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    fn stream(self) -> u64 {
        Self::ALL.iter().position(|s| *s == self).expect("listed") as u64
    }

    pub fn run(self, opts: &RunOptions) -> Result<Report> {
        let start = Instant::now();
        let grid = opts.grid.build()?;
        let mut report = Report::new(
            self.name(),
            Provenance::new(opts.grid, opts.tolerances, opts.seed),
        );
        match self {
            BuiltinScenario::PaperMain => paper_main(&mut report, opts, &grid)?,
            BuiltinScenario::BlochSaturation => bloch_saturation(&mut report, opts, &grid)?,
            BuiltinScenario::LhvSaturation => lhv_saturation(&mut report, opts, &grid)?,
            BuiltinScenario::LhvMixingSlack => lhv_mixing_slack(&mut report, opts, &grid)?,
            BuiltinScenario::SingleQubitSimulator => {
                single_qubit_simulator(&mut report, opts, &grid)?
            }
            BuiltinScenario::GhzWitness => ghz_witness(&mut report, opts)?,
            BuiltinScenario::BellWitness => bell_witness(&mut report, opts, &grid)?,
        }
        report.duration = start.elapsed();
        Ok(report)
    }
}

fn grids(grid: &SphereGrid, n: usize) -> Vec<SphereGrid> {
    vec![grid.clone(); n]
}

fn paper_main(report: &mut Report, opts: &RunOptions, grid: &SphereGrid) -> Result<()> {
    let tol = &opts.tolerances;
    for n in 1..=opts.max_parties.min(5) {
        let lhv = lhv_upper_bound(n)?;
        let sep = separable_maximum(n);
        report.quantity(format!("lhv-max[N={n}]"), lhv);
        report.quantity(format!("sep-max[N={n}]"), sep);
        report.compare_rel(
            format!("ratio[N={n}]"),
            violation_ratio(n)?,
            3f64.powi(n as i32),
            RATIO,
            tol.ratio_rel,
        );
    }
    // numeric confirmation of both maxima where the product grid is small
    for n in 1..=opts.max_parties.min(3) {
        let g = grids(grid, n);
        let lhv = scalar_product_lhv(&saturating_model(n)?, &g)?;
        report.compare_rel(
            format!("lhv-numeric[N={n}]"),
            lhv,
            lhv_upper_bound(n)?,
            LHV_MAX,
            tol.lhv_rel,
        );
        let state = JointState::product(ProductState::new(vec![QubitState::zero(); n])?);
        let sep = scalar_product_numeric(|s| e_sep(&state, s).expect("N settings"), &g)?;
        report.compare_rel(
            format!("sep-numeric[N={n}]"),
            sep,
            separable_maximum(n),
            SEP_MAX,
            tol.quadrature_rel,
        );
        report.compare_rel(
            format!("ratio-numeric[N={n}]"),
            lhv / sep,
            3f64.powi(n as i32),
            RATIO,
            tol.quadrature_rel,
        );
    }
    Ok(())
}

fn bloch_saturation(report: &mut Report, opts: &RunOptions, grid: &SphereGrid) -> Result<()> {
    const STATES: usize = 50;
    let tol = &opts.tolerances;
    let mut rng = rng_for(opts.seed, BuiltinScenario::BlochSaturation.stream());
    for n in 1..=opts.max_parties.min(MAX_DENSE_PARTIES) {
        let target = separable_maximum(n);
        let mut worst_exact = target;
        let mut worst_numeric: Option<(f64, f64)> = None;
        let mut all_satisfied = true;
        for _ in 0..STATES {
            let state = JointState::product(random_pure_product(&mut rng, n));
            let t = correlation_tensor(&state);
            let exact = scalar_product_exact(&t);
            if relative_error(exact, target) > relative_error(worst_exact, target) {
                worst_exact = exact;
            }
            all_satisfied &= !separability_check(&t, tol.separability).is_violated();
            if n <= 3 {
                let numeric = scalar_product_numeric(
                    |s| e_sep_from_tensor(&t, s).expect("N settings"),
                    &grids(grid, n),
                )?;
                let worse = worst_numeric
                    .is_none_or(|(v, r)| relative_error(numeric, exact) > relative_error(v, r));
                if worse {
                    worst_numeric = Some((numeric, exact));
                }
            }
        }
        report.compare_rel(
            format!("exact-sp-worst[N={n}]"),
            worst_exact,
            target,
            SEP_MAX,
            tol.exact_rel,
        );
        if let Some((numeric, exact)) = worst_numeric {
            report.compare_rel(
                format!("numeric-vs-exact-worst[N={n}]"),
                numeric,
                exact,
                "(4π/3)^N·ΣT²",
                tol.quadrature_rel,
            );
        }
        report.check(
            format!("separability-satisfied[N={n}]"),
            all_satisfied,
            format!(
                "{STATES} random pure product states, ΣT² ≤ 1 + {:.0e}",
                tol.separability
            ),
        );
    }
    Ok(())
}

fn lhv_saturation(report: &mut Report, opts: &RunOptions, grid: &SphereGrid) -> Result<()> {
    const MODELS: usize = 10;
    let tol = &opts.tolerances;
    let mut rng = rng_for(opts.seed, BuiltinScenario::LhvSaturation.stream());
    for n in 1..=opts.max_parties.min(3) {
        let bound = lhv_upper_bound(n)?;
        let g = grids(grid, n);
        let mut worst = bound;
        let mut models: Vec<LhvModel> = Vec::new();
        while models.len() < MODELS {
            let m = random_deterministic_model(&mut rng, n, grid);
            if !models.contains(&m) {
                models.push(m);
            }
        }
        for m in &models {
            let v = scalar_product_lhv(m, &g)?;
            if relative_error(v, bound) > relative_error(worst, bound) {
                worst = v;
            }
        }
        report.compare_rel(
            format!("deterministic-sp-worst[N={n}]"),
            worst,
            bound,
            LHV_MAX,
            tol.lhv_rel,
        );
    }
    Ok(())
}

fn lhv_mixing_slack(report: &mut Report, opts: &RunOptions, grid: &SphereGrid) -> Result<()> {
    let tol = &opts.tolerances;
    for n in 1..=opts.max_parties.min(2) {
        let bound = lhv_upper_bound(n)?;
        let v = scalar_product_lhv(&hemispheric_disagreement_model(n)?, &grids(grid, n))?;
        let expected = 2.0 * PI * (4.0 * PI).powi(n as i32 - 1);
        report.compare_rel(
            format!("hemispheric-sp[N={n}]"),
            v,
            expected,
            "2π·(4π)^(N-1)",
            tol.lhv_rel,
        );
        report.check(
            format!("strict-slack[N={n}]"),
            v <= bound - 0.5 * (bound - expected),
            format!("bound − value = {:.6e}", bound - v),
        );
    }
    let mixing = LhvModel::new(
        1,
        [Outcome::Plus, Outcome::Minus]
            .into_iter()
            .map(|o| EnsembleMember {
                weight: 0.5,
                responses: vec![ResponseFunction::constant(o)],
            })
            .collect(),
    )?;
    let v = scalar_product_lhv(&mixing, &grids(grid, 1))?;
    report.compare_abs("perfect-mixing-sp", v, 0.0, "0", tol.bloch_abs);
    Ok(())
}

/// max over grid nodes of |E_LR − n·bloch| for a one-party model.
pub(crate) fn simulator_fidelity(model: &LhvModel, bloch: &Vec3, grid: &SphereGrid) -> f64 {
    grid.nodes()
        .iter()
        .map(|(s, _)| {
            let e = e_lr(model, std::slice::from_ref(s)).expect("one party");
            (e - dot(&s.unit_vector(), bloch)).abs()
        })
        .fold(0.0, f64::max)
}

fn single_qubit_simulator(report: &mut Report, opts: &RunOptions, grid: &SphereGrid) -> Result<()> {
    const VECTORS: usize = 20;
    let tol = &opts.tolerances;
    let resolution = DEFAULT_SIMULATOR_RESOLUTION;
    let mut rng = rng_for(opts.seed, BuiltinScenario::SingleQubitSimulator.stream());
    let mut blochs: Vec<Vec3> = vec![[0.0, 0.0, 1.0]];
    blochs.extend((0..VECTORS).map(|_| random_bloch_vector(&mut rng)));

    let mut worst_fid = 0.0_f64;
    let mut worst_sp: Option<(f64, f64)> = None;
    for b in &blochs {
        let model = single_qubit_simulator_model(*b, resolution)?;
        worst_fid = worst_fid.max(simulator_fidelity(&model, b, grid));
        let sp = scalar_product_lhv(&model, std::slice::from_ref(grid))?;
        let quantum = 4.0 * PI / 3.0 * norm_sq(b);
        if worst_sp.is_none_or(|(v, r)| relative_error(sp, quantum) > relative_error(v, r)) {
            worst_sp = Some((sp, quantum));
        }
    }
    report.compare_abs(
        "max |E_LR - n·b|",
        worst_fid,
        0.0,
        "n·bloch",
        tol.simulator_abs.min(1.0 / resolution as f64),
    );
    let (sp, quantum) = worst_sp.expect("at least one vector");
    report.compare_rel(
        "simulator-sp-worst",
        sp,
        quantum,
        "(4π/3)|b|²",
        tol.simulator_rel,
    );
    report.check(
        "simulator-below-lhv-max",
        sp <= lhv_upper_bound(1)? / 3.0 * (1.0 + tol.simulator_rel),
        format!("{sp:.6e} vs 4π/3 = {:.6e}", 4.0 * PI / 3.0),
    );
    report.note(format!(
        "{} Bloch vectors, resolution {resolution}",
        blochs.len()
    ));
    Ok(())
}

const GHZ_SUM: &str = "2^(N-1)+[N even]";

// X/Y strings with an even number of Y contribute 2^(N-1); Z…Z only survives
// for even N.
fn ghz_sum(n: usize) -> f64 {
    (1u64 << (n - 1)) as f64 + if n.is_multiple_of(2) { 1.0 } else { 0.0 }
}

fn ghz_witness(report: &mut Report, opts: &RunOptions) -> Result<()> {
    let tol = &opts.tolerances;
    for n in 2..=opts.max_parties.min(MAX_DENSE_PARTIES) {
        let ghz = JointState::ghz(n)?;
        let t = correlation_tensor(&ghz);
        let oracle = correlation_tensor_dense(&ghz).sum_of_squares();
        let verdict = separability_check(&t, tol.separability);
        report.compare_abs(
            format!("ghz-sum-t2[N={n}]"),
            verdict.sum_of_squares,
            ghz_sum(n),
            GHZ_SUM,
            tol.ghz_abs,
        );
        report.compare_abs(
            format!("ghz-sum-t2-vs-dense[N={n}]"),
            verdict.sum_of_squares,
            oracle,
            "dense trace",
            tol.ghz_abs,
        );
        report.check(
            format!("ghz-violates[N={n}]"),
            verdict.is_violated(),
            format!("ΣT² = {:.15}", verdict.sum_of_squares),
        );
        report.quantity(format!("ghz-exact-sp[N={n}]"), scalar_product_exact(&t));
    }
    Ok(())
}

fn bell_witness(report: &mut Report, opts: &RunOptions, grid: &SphereGrid) -> Result<()> {
    let tol = &opts.tolerances;
    if opts.max_parties < 2 {
        report.note("skipped: needs two parties");
        return Ok(());
    }
    let bell = JointState::bell();
    let t = correlation_tensor(&bell);
    for (label, idx, v) in [
        ("xx", [0, 0], 1.0),
        ("yy", [1, 1], -1.0),
        ("zz", [2, 2], 1.0),
    ] {
        report.compare_abs(
            format!("T_{label}"),
            t.get(&idx),
            v,
            "Bell state",
            tol.ghz_abs,
        );
    }
    let off_diag = (0..3)
        .flat_map(|a| (0..3).map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| t.get(&[a, b]).abs())
        .fold(0.0, f64::max);
    report.compare_abs("max |T_off-diagonal|", off_diag, 0.0, "0", tol.ghz_abs);
    let verdict = separability_check(&t, tol.separability);
    report.compare_abs("bell-sum-t2", verdict.sum_of_squares, 3.0, "3", tol.ghz_abs);
    report.check(
        "bell-violates",
        verdict.is_violated(),
        format!("ΣT² = {:.15}", verdict.sum_of_squares),
    );
    let exact = scalar_product_exact(&t);
    report.compare_rel(
        "bell-exact-sp",
        exact,
        3.0 * separable_maximum(2),
        "3·(4π/3)^2",
        tol.exact_rel,
    );
    let numeric =
        scalar_product_numeric(|s| e_sep(&bell, s).expect("2 settings"), &grids(grid, 2))?;
    report.compare_rel(
        "bell-numeric-sp",
        numeric,
        exact,
        "(4π/3)^N·ΣT²",
        tol.quadrature_rel,
    );
    Ok(())
}

fn numeric_affordable(grid: &SphereGrid, n: usize) -> bool {
    (grid.len() as u128)
        .checked_pow(n as u32)
        .is_some_and(|c| c <= DEFAULT_NODE_BUDGET as u128)
}

/// Runs a user-supplied scenario: tensor, closed-form and quadrature scalar
/// products, LHV scalar product, separability verdict and ratio.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Report> {
    let validated = config.validate()?;
    run_validated(&validated)
}

pub fn run_validated(v: &ValidatedScenario) -> Result<Report> {
    let start = Instant::now();
    let cfg = &v.config;
    let tol = &cfg.tolerances;
    let n = cfg.n_parties;
    let mut report = Report::new(cfg.name.clone(), Provenance::new(cfg.grid, *tol, 0));

    report.quantity("lhv-max", lhv_upper_bound(n)?);
    report.quantity("sep-max", separable_maximum(n));
    report.compare_rel(
        "ratio",
        violation_ratio(n)?,
        3f64.powi(n as i32),
        RATIO,
        tol.ratio_rel,
    );

    if let (Some(state), Some(spec)) = (&v.state, &cfg.state) {
        state_quantities(&mut report, state, spec, &v.grid, cfg)?;
    }
    if let (Some(model), Some(spec)) = (&v.model, &cfg.model) {
        model_quantities(&mut report, model, spec, &v.grid, cfg)?;
    }
    report.duration = start.elapsed();
    Ok(report)
}

fn state_quantities(
    report: &mut Report,
    state: &JointState,
    spec: &StateSpec,
    grid: &SphereGrid,
    cfg: &ScenarioConfig,
) -> Result<()> {
    let tol = &cfg.tolerances;
    let n = state.n_parties();
    let t = correlation_tensor(state);
    let dense = correlation_tensor_dense(state);
    report.compare_abs(
        "tensor-vs-dense-max-diff",
        max_diff(&t, &dense),
        0.0,
        "dense trace",
        1e-12,
    );
    for (k, v) in t.values().iter().enumerate() {
        report.quantity(format!("T[{}]", multi_index_label(k, n)), *v);
    }
    let exact = scalar_product_exact(&t);
    let verdict = separability_check(&t, tol.separability);
    report.quantity("sum-t2", verdict.sum_of_squares);

    if let Some(factors) = state.factors() {
        let fast = product_correlation_tensor(factors);
        report.compare_abs(
            "tensor-factorizes",
            max_diff(&t, &fast),
            0.0,
            "⊗ b_j",
            1e-12,
        );
        let bnp = bloch_norm_product(factors);
        report.quantity("bloch-norm-product", bnp);
        report.compare_rel(
            "exact-sp",
            exact,
            separable_maximum(n) * bnp,
            "(4π/3)^N·Π|b_j|²",
            tol.exact_rel,
        );
        if state.kind() == JointKind::ProductOfPure {
            report.compare_rel(
                "exact-sp-saturation",
                exact,
                separable_maximum(n),
                SEP_MAX,
                tol.exact_rel,
            );
        }
        report.check(
            "separability",
            !verdict.is_violated(),
            format!("ΣT² = {:.15}", verdict.sum_of_squares),
        );
    } else {
        report.quantity("exact-sp", exact);
        match spec {
            StateSpec::Ghz { .. } | StateSpec::Bell => {
                report.compare_abs(
                    "sum-t2-ghz",
                    verdict.sum_of_squares,
                    ghz_sum(n),
                    GHZ_SUM,
                    tol.ghz_abs,
                );
                report.check(
                    "separability-violated",
                    verdict.is_violated(),
                    format!("ΣT² = {:.15}", verdict.sum_of_squares),
                );
            }
            _ => report.note(format!(
                "general state: ΣT² = {:.15} ({:?}); not classified",
                verdict.sum_of_squares, verdict.status
            )),
        }
    }

    if numeric_affordable(grid, n) {
        let numeric =
            scalar_product_numeric(|s| e_sep(state, s).expect("N settings"), &grids(grid, n))?;
        report.compare_rel(
            "numeric-sp",
            numeric,
            exact,
            "(4π/3)^N·ΣT²",
            tol.quadrature_rel,
        );
    } else {
        report.note("numeric scalar product skipped: product grid exceeds the evaluation budget");
    }
    Ok(())
}

fn model_quantities(
    report: &mut Report,
    model: &LhvModel,
    spec: &ModelSpec,
    grid: &SphereGrid,
    cfg: &ScenarioConfig,
) -> Result<()> {
    let tol = &cfg.tolerances;
    let n = model.n_parties();
    let bound = lhv_upper_bound(n)?;
    let sp = scalar_product_lhv(model, &grids(grid, n))?;
    report.quantity("lhv-sp", sp);
    report.check(
        "lhv-bound",
        sp <= bound * (1.0 + tol.lhv_rel),
        format!("{sp:.15e} ≤ (4π)^N = {bound:.15e}"),
    );
    if model.is_deterministic() {
        report.compare_rel("lhv-sp-saturation", sp, bound, LHV_MAX, tol.lhv_rel);
    }
    if let ModelSpec::ThresholdSimulator { bloch, resolution } = spec {
        let fid = simulator_fidelity(model, bloch, grid);
        report.compare_abs(
            "max |E_LR - n·b|",
            fid,
            0.0,
            "n·bloch",
            1.0 / *resolution as f64,
        );
        report.compare_rel(
            "simulator-sp",
            sp,
            4.0 * PI / 3.0 * norm_sq(bloch),
            "(4π/3)|b|²",
            tol.simulator_rel,
        );
    }
    Ok(())
}

fn max_diff(a: &CorrelationTensor, b: &CorrelationTensor) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Pauli-axis label (`x`, `y`, `z` per party) of a flat tensor index.
pub fn multi_index_label(flat: usize, n: usize) -> String {
    let mut chars = vec!['x'; n];
    let mut rest = flat;
    for k in (0..n).rev() {
        chars[k] = ['x', 'y', 'z'][rest % 3];
        rest /= 3;
    }
    chars.into_iter().collect()
}

/// Looks a scenario up by built-in name; unknown names are configuration errors.
pub fn run_builtin(name: &str, opts: &RunOptions) -> Result<Report> {
    BuiltinScenario::from_name(name)
        .ok_or_else(|| {
            let names: Vec<_> = BuiltinScenario::ALL.iter().map(|s| s.name()).collect();
            Error::Config(format!(
                "unknown scenario '{name}'; built-ins are {}",
                names.join(", ")
            ))
        })?
        .run(opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(multi_index_label(0, 2), "xx");
        assert_eq!(multi_index_label(8, 2), "zz");
        assert_eq!(multi_index_label(5, 2), "yz");
    }

    #[test]
    fn names_round_trip() {
        for s in BuiltinScenario::ALL {
            assert_eq!(BuiltinScenario::from_name(s.name()), Some(s));
        }
        assert!(run_builtin("nope", &RunOptions::default()).is_err());
    }

    #[test]
    fn paper_main_ratio_column() {
        let r = BuiltinScenario::PaperMain
            .run(&RunOptions::default())
            .unwrap();
        assert!(r.passed(), "{}", r.to_table());
        let ratios: Vec<f64> = (1..=5)
            .map(|n| {
                r.quantities
                    .iter()
                    .find(|q| q.name == format!("ratio[N={n}]"))
                    .unwrap()
                    .value
            })
            .collect();
        for (got, want) in ratios.iter().zip([3.0, 9.0, 27.0, 81.0, 243.0]) {
            assert!((got - want).abs() / want < 1e-12);
        }
    }

    #[test]
    fn ghz_witness_n3() {
        let opts = RunOptions {
            max_parties: 3,
            ..RunOptions::default()
        };
        let r = BuiltinScenario::GhzWitness.run(&opts).unwrap();
        assert!(r.passed());
        let q = r
            .quantities
            .iter()
            .find(|q| q.name == "ghz-sum-t2[N=3]")
            .unwrap();
        assert!((q.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn custom_ghz_scenario() {
        let cfg = ScenarioConfig::from_toml(
            "name = \"ghz3\"\nn_parties = 3\n[state]\nkind = \"ghz\"\nn_parties = 3\n",
        )
        .unwrap();
        let r = run_scenario(&cfg).unwrap();
        assert!(r.passed(), "{}", r.to_table());
        assert!(r
            .checks
            .iter()
            .any(|c| c.name == "separability-violated" && c.passed));
    }

    #[test]
    fn custom_mixed_product_with_simulator() {
        let cfg = ScenarioConfig::from_toml(
            r#"
name = "mixed"
n_parties = 1
[state]
kind = "mixed-product"
bloch = [[0.0, 0.6, 0.0]]
[model]
kind = "threshold-simulator"
bloch = [0.0, 0.6, 0.0]
resolution = 10000
"#,
        )
        .unwrap();
        let r = run_scenario(&cfg).unwrap();
        assert!(r.passed(), "{}", r.to_table());
    }

    #[test]
    fn explicit_state_is_reported_not_classified() {
        let cfg = ScenarioConfig::from_toml(
            r#"
name = "werner-like"
n_parties = 2
[state]
kind = "explicit"
n_parties = 2
re = [0.4, 0, 0, 0.3,  0, 0.1, 0, 0,  0, 0, 0.1, 0,  0.3, 0, 0, 0.4]
"#,
        )
        .unwrap();
        let r = run_scenario(&cfg).unwrap();
        assert!(r.passed(), "{}", r.to_table());
        assert!(r.notes.iter().any(|n| n.contains("not classified")));
    }
}
