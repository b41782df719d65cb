//! Scenario files (TOML) and the compact state strings used on the command line.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lhv::{LhvModel, ModelSpec};
use crate::quadrature::{build_grid, SphereGrid, DEFAULT_N_PHI, DEFAULT_N_THETA};
use crate::quantum::JointState;
use crate::types::{ComplexMatrix, ProductState, QubitState, Setting, Vec3};

/// Dense joint states are limited to this many qubits.
pub const MAX_DENSE_PARTIES: usize = 6;
/// Closed-form-only computations are limited to this many parties.
pub const MAX_CLOSED_FORM_PARTIES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub density: f64,
    pub separability: f64,
    /// Relative error of closed-form saturation values.
    pub exact_rel: f64,
    /// Relative agreement between quadrature and closed form.
    pub quadrature_rel: f64,
    pub lhv_rel: f64,
    pub ratio_rel: f64,
    /// Absolute slack on Bloch-norm and tensor-entry bounds.
    pub bloch_abs: f64,
    pub ghz_abs: f64,
    pub simulator_abs: f64,
    pub simulator_rel: f64,
    /// Margin by which a non-pure product must stay below a Bloch-norm product of one.
    pub purity_gap: f64,
    pub orthogonality_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            density: 1e-10,
            separability: 1e-9,
            exact_rel: 1e-10,
            quadrature_rel: 1e-9,
            lhv_rel: 1e-9,
            ratio_rel: 1e-12,
            bloch_abs: 1e-12,
            ghz_abs: 1e-12,
            simulator_abs: 1e-4,
            simulator_rel: 1e-3,
            purity_gap: 1e-6,
            orthogonality_abs: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_theta: DEFAULT_N_THETA,
            n_phi: DEFAULT_N_PHI,
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<SphereGrid> {
        build_grid(self.n_theta, self.n_phi).map_err(|e| Error::config(format!("grid: {e}")))
    }
}

/// Named joint-state constructions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StateSpec {
    /// Pure qubits along n(θ, φ), one `[theta, phi]` pair per party.
    PureProduct {
        angles: Vec<[f64; 2]>,
    },
    MixedProduct {
        bloch: Vec<Vec3>,
    },
    Ghz {
        n_parties: usize,
    },
    Bell,
    /// Row-major 2^N × 2^N density matrix.
    Explicit {
        n_parties: usize,
        re: Vec<f64>,
        #[serde(default)]
        im: Vec<f64>,
    },
}

impl StateSpec {
    pub fn n_parties(&self) -> usize {
        match self {
            StateSpec::PureProduct { angles } => angles.len(),
            StateSpec::MixedProduct { bloch } => bloch.len(),
            StateSpec::Ghz { n_parties } | StateSpec::Explicit { n_parties, .. } => *n_parties,
            StateSpec::Bell => 2,
        }
    }

    pub fn build(&self, density_tol: f64) -> Result<JointState> {
        let n = self.n_parties();
        if n == 0 || n > MAX_DENSE_PARTIES {
            return Err(Error::config(format!(
                "state: party count {n} outside 1..={MAX_DENSE_PARTIES}"
            )));
        }
        match self {
            StateSpec::PureProduct { angles } => {
                let parties = angles
                    .iter()
                    .enumerate()
                    .map(|(k, [t, p])| {
                        let s = Setting::new(*t, *p)
                            .map_err(|e| Error::config(format!("state.angles[{k}]: {e}")))?;
                        Ok(QubitState::pure_along(s.theta(), s.phi()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(JointState::product(ProductState::new(parties)?))
            }
            StateSpec::MixedProduct { bloch } => {
                let parties = bloch
                    .iter()
                    .enumerate()
                    .map(|(k, b)| {
                        QubitState::from_bloch(*b)
                            .map_err(|e| Error::config(format!("state.bloch[{k}]: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(JointState::product(ProductState::new(parties)?))
            }
            StateSpec::Ghz { n_parties } => JointState::ghz(*n_parties)
                .map_err(|e| Error::config(format!("state.n_parties: {e}"))),
            StateSpec::Bell => Ok(JointState::bell()),
            StateSpec::Explicit { n_parties, re, im } => {
                let dim = 1usize << n_parties;
                if re.len() != dim * dim {
                    return Err(Error::config(format!(
                        "state.re: expected {} entries, got {}",
                        dim * dim,
                        re.len()
                    )));
                }
                if !im.is_empty() && im.len() != dim * dim {
                    return Err(Error::config(format!(
                        "state.im: expected {} entries or none, got {}",
                        dim * dim,
                        im.len()
                    )));
                }
                let entries: Vec<Complex64> = (0..dim * dim)
                    .map(|k| Complex64::new(re[k], im.get(k).copied().unwrap_or(0.0)))
                    .collect();
                let rho = ComplexMatrix::from_row_major(dim, &entries)?;
                JointState::general_with_tolerance(*n_parties, rho, density_tol)
                    .map_err(|e| Error::config(format!("state: {e}")))
            }
        }
    }
}

impl std::str::FromStr for StateSpec {
    type Err = Error;

    /// `bell`, `ghz:N`, `zero:N`, `mixed-zero:N`, `pure:θ,φ;θ,φ…` or `mixed:x,y,z;…`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, body) = s.split_once(':').unwrap_or((s, ""));
        let parse_count = |b: &str| -> Result<usize> {
            b.trim()
                .parse::<usize>()
                .map_err(|_| Error::config(format!("'{s}': expected a party count")))
        };
        let parse_lists = |b: &str, width: usize| -> Result<Vec<Vec<f64>>> {
            b.split(';')
                .map(|part| {
                    let v = part
                        .split(',')
                        .map(|x| x.trim().parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| Error::config(format!("'{s}': {e}")))?;
                    if v.len() != width {
                        return Err(Error::config(format!(
                            "'{s}': expected {width} numbers per party, got {}",
                            v.len()
                        )));
                    }
                    Ok(v)
                })
                .collect()
        };
        match head {
            "bell" => Ok(StateSpec::Bell),
            "ghz" => Ok(StateSpec::Ghz {
                n_parties: parse_count(body)?,
            }),
            "zero" => Ok(StateSpec::PureProduct {
                angles: vec![[0.0, 0.0]; parse_count(body)?],
            }),
            "mixed-zero" => Ok(StateSpec::MixedProduct {
                bloch: vec![[0.0; 3]; parse_count(body)?],
            }),
            "pure" => Ok(StateSpec::PureProduct {
                angles: parse_lists(body, 2)?
                    .into_iter()
                    .map(|v| [v[0], v[1]])
                    .collect(),
            }),
            "mixed" => Ok(StateSpec::MixedProduct {
                bloch: parse_lists(body, 3)?
                    .into_iter()
                    .map(|v| [v[0], v[1], v[2]])
                    .collect(),
            }),
            other => Err(Error::config(format!("unknown state kind '{other}'"))),
        }
    }
}

/// One user-defined scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub n_parties: usize,
    #[serde(default)]
    pub state: Option<StateSpec>,
    #[serde(default)]
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// A config whose state, model and grid have all been constructed.
#[derive(Debug, Clone)]
pub struct ValidatedScenario {
    pub config: ScenarioConfig,
    pub state: Option<JointState>,
    pub model: Option<LhvModel>,
    pub grid: SphereGrid,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config(e.to_string()))
    }

    pub fn validate(&self) -> Result<ValidatedScenario> {
        let n = self.n_parties;
        if n == 0 || n > MAX_CLOSED_FORM_PARTIES {
            return Err(Error::config(format!(
                "n_parties: {n} outside 1..={MAX_CLOSED_FORM_PARTIES}"
            )));
        }
        let state = match &self.state {
            Some(spec) => {
                if spec.n_parties() != n {
                    return Err(Error::config(format!(
                        "state: describes {} parties but n_parties = {n}",
                        spec.n_parties()
                    )));
                }
                Some(spec.build(self.tolerances.density)?)
            }
            None => None,
        };
        let model = match &self.model {
            Some(spec) => {
                if spec.n_parties() != n {
                    return Err(Error::config(format!(
                        "model: describes {} parties but n_parties = {n}",
                        spec.n_parties()
                    )));
                }
                Some(
                    spec.build()
                        .map_err(|e| Error::config(format!("model: {e}")))?,
                )
            }
            None => None,
        };
        let grid = self.grid.build()?;
        Ok(ValidatedScenario {
            config: self.clone(),
            state,
            model,
            grid,
        })
    }
}
