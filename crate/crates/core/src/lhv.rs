//! Local hidden-variable models as finite ensembles of deterministic ±1
//! response functions.
//!
//! The hidden-variable average ∫dλ ρ(λ) is a weighted sum over ensemble
//! members. A single-member model is deterministic, so every squared
//! correlation equals one and its scalar product is the full (4π)^N. Mixing
//! members whose outcomes disagree pulls correlations toward zero and the
//! scalar product strictly below that maximum.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_product_indexed, SphereGrid, DEFAULT_NODE_BUDGET};
use crate::types::{dot, norm_sq, CompensatedSum, Setting, Vec3};

/// Ensemble size for the single-qubit simulator unless configured otherwise.
pub const DEFAULT_SIMULATOR_RESOLUTION: usize = 10_000;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A dichotomic measurement result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Outcome {
    /// sign(x) with sign(0) = +1.
    pub fn sign_of(x: f64) -> Self {
        if x >= 0.0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

impl TryFrom<i64> for Outcome {
    type Error = Error;

    fn try_from(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            other => Err(Error::domain(format!(
                "outcome must be +1 or -1, got {other}"
            ))),
        }
    }
}

/// Outcomes sampled on the nodes of one grid. Lookups snap to the nearest
/// node, so a table is only meaningful on the grid it was sampled on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignTable {
    thetas: Vec<f64>,
    phis: Vec<f64>,
    signs: Vec<Outcome>,
}

impl SignTable {
    /// Samples `f` on every node of `grid`, θ outer and φ inner.
    pub fn sample<F>(grid: &SphereGrid, f: F) -> Self
    where
        F: FnMut(&Setting) -> Outcome,
    {
        let mut f = f;
        Self {
            thetas: grid.theta_nodes().iter().map(|p| p.0).collect(),
            phis: grid.phi_nodes().iter().map(|p| p.0).collect(),
            signs: grid.nodes().iter().map(|(s, _)| f(s)).collect(),
        }
    }

    pub fn from_signs(grid: &SphereGrid, signs: Vec<Outcome>) -> Result<Self> {
        if signs.len() != grid.len() {
            return Err(Error::domain(format!(
                "sign table needs {} entries, got {}",
                grid.len(),
                signs.len()
            )));
        }
        let mut it = signs.into_iter();
        Ok(Self::sample(grid, |_| it.next().expect("length checked")))
    }

    pub fn lookup(&self, s: &Setting) -> Outcome {
        let ti = nearest(&self.thetas, |t| (t - s.theta()).abs());
        let pi = nearest(&self.phis, |p| {
            let d = (p - s.phi()).abs();
            d.min(2.0 * std::f64::consts::PI - d)
        });
        self.signs[ti * self.phis.len() + pi]
    }
}

fn nearest(values: &[f64], dist: impl Fn(f64) -> f64) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, &v) in values.iter().enumerate() {
        let d = dist(v);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// Deterministic map from a setting to ±1 for one party and one λ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ResponseFunction {
    Constant {
        value: Outcome,
    },
    /// sign(cosθ).
    SignCosTheta,
    /// sign(n · vector).
    SignDot {
        vector: Vec3,
    },
    /// +1 iff λ < (1 + n·bloch)/2.
    Threshold {
        bloch: Vec3,
        lambda: f64,
    },
    SignTable {
        table: Arc<SignTable>,
    },
}

impl ResponseFunction {
    pub fn constant(value: Outcome) -> Self {
        ResponseFunction::Constant { value }
    }

    pub fn outcome(&self, s: &Setting) -> Outcome {
        match self {
            ResponseFunction::Constant { value } => *value,
            ResponseFunction::SignCosTheta => Outcome::sign_of(s.theta().cos()),
            ResponseFunction::SignDot { vector } => Outcome::sign_of(dot(&s.unit_vector(), vector)),
            ResponseFunction::Threshold { bloch, lambda } => {
                let p = 0.5 * (1.0 + dot(&s.unit_vector(), bloch));
                if *lambda < p {
                    Outcome::Plus
                } else {
                    Outcome::Minus
                }
            }
            ResponseFunction::SignTable { table } => table.lookup(s),
        }
    }

    pub fn value(&self, s: &Setting) -> f64 {
        self.outcome(s).value()
    }
}

/// One hidden-variable value: its probability and every party's response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMember {
    pub weight: f64,
    pub responses: Vec<ResponseFunction>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LhvModel {
    n_parties: usize,
    ensemble: Vec<EnsembleMember>,
}

impl LhvModel {
    pub fn new(n_parties: usize, ensemble: Vec<EnsembleMember>) -> Result<Self> {
        if n_parties == 0 {
            return Err(Error::domain("an LHV model needs at least one party"));
        }
        if ensemble.is_empty() {
            return Err(Error::domain(
                "an LHV model needs at least one ensemble member",
            ));
        }
        let mut total = CompensatedSum::default();
        for (k, m) in ensemble.iter().enumerate() {
            if !(m.weight > 0.0 && m.weight <= 1.0) {
                return Err(Error::domain(format!(
                    "member {k} has weight {} outside (0, 1]",
                    m.weight
                )));
            }
            if m.responses.len() != n_parties {
                return Err(Error::domain(format!(
                    "member {k} has {} responses for {n_parties} parties",
                    m.responses.len()
                )));
            }
            total.add(m.weight);
        }
        if (total.value() - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::domain(format!(
                "ensemble weights sum to {}, not 1",
                total.value()
            )));
        }
        Ok(Self {
            n_parties,
            ensemble,
        })
    }

    /// Single-λ model.
    pub fn deterministic(responses: Vec<ResponseFunction>) -> Result<Self> {
        let n = responses.len();
        Self::new(
            n,
            vec![EnsembleMember {
                weight: 1.0,
                responses,
            }],
        )
    }

    /// Convex combination of models over the same parties.
    pub fn mixture(parts: &[(f64, &LhvModel)]) -> Result<Self> {
        let n = parts
            .first()
            .map(|(_, m)| m.n_parties)
            .ok_or_else(|| Error::domain("mixture needs at least one model"))?;
        let mut ensemble = Vec::new();
        for (w, m) in parts {
            if m.n_parties != n {
                return Err(Error::domain("mixture components disagree on party count"));
            }
            for member in &m.ensemble {
                ensemble.push(EnsembleMember {
                    weight: w * member.weight,
                    responses: member.responses.clone(),
                });
            }
        }
        Self::new(n, ensemble)
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn ensemble(&self) -> &[EnsembleMember] {
        &self.ensemble
    }

    pub fn is_deterministic(&self) -> bool {
        self.ensemble.len() == 1
    }
}

/// E_LR = Σ_λ w(λ) Π_j I^(j)(n_j, λ).
pub fn e_lr(model: &LhvModel, settings: &[Setting]) -> Result<f64> {
    if settings.len() != model.n_parties {
        return Err(Error::domain(format!(
            "model has {} parties, got {} settings",
            model.n_parties,
            settings.len()
        )));
    }
    let mut acc = CompensatedSum::default();
    for m in &model.ensemble {
        let sign: f64 = m
            .responses
            .iter()
            .zip(settings)
            .map(|(r, s)| r.value(s))
            .product();
        acc.add(m.weight * sign);
    }
    Ok(acc.value())
}

/// Response values of every member and party on every node of that party's grid.
struct ResponseCache {
    // [member][party][node]
    values: Vec<Vec<Vec<f64>>>,
    weights: Vec<f64>,
}

impl ResponseCache {
    fn new(model: &LhvModel, grids: &[SphereGrid]) -> Self {
        let values = model
            .ensemble
            .iter()
            .map(|m| {
                m.responses
                    .iter()
                    .zip(grids)
                    .map(|(r, g)| g.nodes().iter().map(|(s, _)| r.value(s)).collect())
                    .collect()
            })
            .collect();
        Self {
            values,
            weights: model.ensemble.iter().map(|m| m.weight).collect(),
        }
    }
}

fn check_grids(model: &LhvModel, grids: &[SphereGrid]) -> Result<()> {
    if grids.len() != model.n_parties {
        return Err(Error::domain(format!(
            "model has {} parties, got {} grids",
            model.n_parties,
            grids.len()
        )));
    }
    Ok(())
}

/// (E_LR, E_LR) on the product grid with the default evaluation budget.
pub fn scalar_product_lhv(model: &LhvModel, grids: &[SphereGrid]) -> Result<f64> {
    scalar_product_lhv_with_budget(model, grids, DEFAULT_NODE_BUDGET)
}

pub fn scalar_product_lhv_with_budget(
    model: &LhvModel,
    grids: &[SphereGrid],
    budget: u64,
) -> Result<f64> {
    check_grids(model, grids)?;
    let cache = ResponseCache::new(model, grids);
    integrate_product_indexed(
        |idx| {
            let mut acc = CompensatedSum::default();
            for (m, w) in cache.values.iter().zip(&cache.weights) {
                let sign: f64 = m.iter().zip(idx).map(|(party, &i)| party[i]).product();
                acc.add(w * sign);
            }
            let e = acc.value();
            e * e
        },
        grids,
        budget,
    )
}

/// (E_LR, E_LR) through the λ, λ′ double sum: Σ w w′ Π_j ∫ I_j(λ) I_j(λ′) dΩ_j.
/// Cost is quadratic in the ensemble size but linear in the party count.
pub fn scalar_product_lhv_pairwise(model: &LhvModel, grids: &[SphereGrid]) -> Result<f64> {
    check_grids(model, grids)?;
    let cache = ResponseCache::new(model, grids);
    let node_weights: Vec<Vec<f64>> = grids
        .iter()
        .map(|g| g.nodes().iter().map(|(_, w)| *w).collect())
        .collect();
    let mut acc = CompensatedSum::default();
    for (a, wa) in cache.values.iter().zip(&cache.weights) {
        for (b, wb) in cache.values.iter().zip(&cache.weights) {
            let overlap: f64 = a
                .iter()
                .zip(b)
                .zip(&node_weights)
                .map(|((ra, rb), nw)| {
                    let mut s = CompensatedSum::default();
                    for ((x, y), w) in ra.iter().zip(rb).zip(nw) {
                        s.add(w * x * y);
                    }
                    s.value()
                })
                .product();
            acc.add(wa * wb * overlap);
        }
    }
    Ok(acc.value())
}

/// (4π)^N.
pub fn lhv_upper_bound(n_parties: usize) -> Result<f64> {
    if n_parties == 0 {
        return Err(Error::domain("party count must be at least 1"));
    }
    Ok((4.0 * std::f64::consts::PI).powi(n_parties as i32))
}

/// Deterministic model with I^(j) = sign(cosθ_j) for every party.
///
/// Equal level sets for λ and λ′ at every setting means the model is
/// effectively λ-independent, so a single ensemble member suffices.
pub fn saturating_model(n_parties: usize) -> Result<LhvModel> {
    if n_parties == 0 {
        return Err(Error::domain("party count must be at least 1"));
    }
    LhvModel::deterministic(vec![ResponseFunction::SignCosTheta; n_parties])
}

/// Two equally weighted λ on party 1, one always +1 and one sign(cosθ), so the
/// correlation vanishes on the southern hemisphere. Remaining parties answer +1.
pub fn hemispheric_disagreement_model(n_parties: usize) -> Result<LhvModel> {
    if n_parties == 0 {
        return Err(Error::domain("party count must be at least 1"));
    }
    let rest = vec![ResponseFunction::constant(Outcome::Plus); n_parties - 1];
    let mut a = vec![ResponseFunction::constant(Outcome::Plus)];
    a.extend(rest.iter().cloned());
    let mut b = vec![ResponseFunction::SignCosTheta];
    b.extend(rest);
    LhvModel::new(
        n_parties,
        vec![
            EnsembleMember {
                weight: 0.5,
                responses: a,
            },
            EnsembleMember {
                weight: 0.5,
                responses: b,
            },
        ],
    )
}

/// Realistic model reproducing single-qubit statistics n·bloch.
///
/// λ_k = (k + ½)/R for k < R, each with weight 1/R, answering
/// +1 iff λ_k < (1 + n·bloch)/2. The fraction of +1 answers is the
/// threshold rounded to a multiple of 1/R, so |E_LR − n·bloch| ≤ 1/R.
pub fn single_qubit_simulator_model(bloch: Vec3, resolution: usize) -> Result<LhvModel> {
    if resolution == 0 {
        return Err(Error::domain("resolution must be positive"));
    }
    if bloch.iter().any(|x| !x.is_finite()) || norm_sq(&bloch) > 1.0 + 1e-12 {
        return Err(Error::domain(format!(
            "Bloch vector {bloch:?} lies outside the Bloch ball"
        )));
    }
    let r = resolution as f64;
    let ensemble = (0..resolution)
        .map(|k| EnsembleMember {
            weight: 1.0 / r,
            responses: vec![ResponseFunction::Threshold {
                bloch,
                lambda: (k as f64 + 0.5) / r,
            }],
        })
        .collect();
    LhvModel::new(1, ensemble)
}

/// Declarative model description used in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSpec {
    Ensemble {
        n_parties: usize,
        #[serde(rename = "member")]
        members: Vec<MemberSpec>,
    },
    Saturating {
        n_parties: usize,
    },
    HemisphericDisagreement {
        n_parties: usize,
    },
    ThresholdSimulator {
        bloch: Vec3,
        #[serde(default = "default_resolution")]
        resolution: usize,
    },
}

fn default_resolution() -> usize {
    DEFAULT_SIMULATOR_RESOLUTION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberSpec {
    pub weight: f64,
    pub responses: Vec<ResponseSpec>,
}

/// Response predicates available in model files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ResponseSpec {
    SignOfCosTheta,
    SignOfDotProductWith { vector: Vec3 },
    Constant { value: i64 },
}

impl ResponseSpec {
    fn build(&self) -> Result<ResponseFunction> {
        Ok(match self {
            ResponseSpec::SignOfCosTheta => ResponseFunction::SignCosTheta,
            ResponseSpec::SignOfDotProductWith { vector } => {
                if vector.iter().any(|x| !x.is_finite()) {
                    return Err(Error::domain("response vector must be finite"));
                }
                ResponseFunction::SignDot { vector: *vector }
            }
            ResponseSpec::Constant { value } => ResponseFunction::constant((*value).try_into()?),
        })
    }
}

impl ModelSpec {
    pub fn n_parties(&self) -> usize {
        match self {
            ModelSpec::Ensemble { n_parties, .. }
            | ModelSpec::Saturating { n_parties }
            | ModelSpec::HemisphericDisagreement { n_parties } => *n_parties,
            ModelSpec::ThresholdSimulator { .. } => 1,
        }
    }

    pub fn build(&self) -> Result<LhvModel> {
        match self {
            ModelSpec::Ensemble { n_parties, members } => {
                let ensemble = members
                    .iter()
                    .map(|m| {
                        Ok(EnsembleMember {
                            weight: m.weight,
                            responses: m
                                .responses
                                .iter()
                                .map(ResponseSpec::build)
                                .collect::<Result<_>>()?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                LhvModel::new(*n_parties, ensemble)
            }
            ModelSpec::Saturating { n_parties } => saturating_model(*n_parties),
            ModelSpec::HemisphericDisagreement { n_parties } => {
                hemispheric_disagreement_model(*n_parties)
            }
            ModelSpec::ThresholdSimulator { bloch, resolution } => {
                single_qubit_simulator_model(*bloch, *resolution)
            }
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(e.to_string()))
    }
}
