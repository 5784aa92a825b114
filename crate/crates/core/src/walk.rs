//! Walk configuration, initial states and time-averaged populations.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{eigh, AmplitudeVector, PhaseSign, Propagator, SpectralDecomposition};

/// Which matrix drives the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    /// `exp(-iAt)`.
    Adjacency,
    /// `exp(+iLt)`.
    Laplacian,
}

impl Generator {
    pub fn phase_sign(self) -> PhaseSign {
        match self {
            Generator::Adjacency => PhaseSign::Negative,
            Generator::Laplacian => PhaseSign::Positive,
        }
    }

    pub fn matrix(self, g: &Graph) -> crate::matrix::Matrix {
        match self {
            Generator::Adjacency => g.adjacency_matrix(),
            Generator::Laplacian => g.laplacian_matrix(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::Adjacency => "adjacency",
            Generator::Laplacian => "laplacian",
        })
    }
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "adjacency" | "a" => Ok(Generator::Adjacency),
            "laplacian" | "l" => Ok(Generator::Laplacian),
            other => Err(format!("unknown generator '{other}' (expected adjacency or laplacian)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    /// Equal amplitude `1/√N` on every node.
    Uniform,
    /// The basis state of a 1-based node.
    Localized(usize),
}

impl InitialState {
    pub fn amplitudes(self, n: usize) -> Result<AmplitudeVector> {
        match self {
            InitialState::Uniform => uniform_state(n),
            InitialState::Localized(j) => localized_state(n, j),
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Uniform => f.write_str("uniform"),
            InitialState::Localized(j) => write!(f, "{j}"),
        }
    }
}

impl FromStr for InitialState {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("uniform") {
            return Ok(InitialState::Uniform);
        }
        let node = s.strip_prefix("node:").unwrap_or(s);
        node.parse::<usize>()
            .ok()
            .filter(|&j| j >= 1)
            .map(InitialState::Localized)
            .ok_or_else(|| format!("invalid initial state '{s}' (expected 'uniform' or a node number)"))
    }
}

/// Total time, sampling step, generator and initial state of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub generator: Generator,
    pub total_time: f64,
    pub dt: f64,
    pub initial: InitialState,
}

impl Default for WalkConfig {
    /// `T = 100π`, `dt = 10⁻³ T`, adjacency generator, uniform start.
    fn default() -> Self {
        let total_time = 100.0 * PI;
        WalkConfig {
            generator: Generator::Adjacency,
            total_time,
            dt: total_time * 1e-3,
            initial: InitialState::Uniform,
        }
    }
}

impl WalkConfig {
    pub fn with_generator(self, generator: Generator) -> Self {
        WalkConfig { generator, ..self }
    }

    pub fn with_initial(self, initial: InitialState) -> Self {
        WalkConfig { initial, ..self }
    }

    /// Keeps `dt` a fixed fraction of the new total time.
    pub fn with_total_time(self, total_time: f64) -> Self {
        let frac = self.dt / self.total_time;
        WalkConfig {
            total_time,
            dt: total_time * frac,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (t, dt) = (self.total_time, self.dt);
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidConfig(format!("total time must be positive, got {t}")));
        }
        if !(dt.is_finite() && dt > 0.0 && dt <= t) {
            return Err(Error::InvalidConfig(format!("dt must lie in (0, T], got {dt}")));
        }
        let steps = (t / dt).round();
        if (steps * dt - t).abs() > 1e-6 * t {
            return Err(Error::InvalidConfig(format!(
                "dt = {dt} does not divide T = {t} (within 1 part in 1e6)"
            )));
        }
        Ok(())
    }

    /// Number of intervals; the walk is sampled at `steps + 1` instants.
    pub fn steps(&self) -> usize {
        (self.total_time / self.dt).round() as usize
    }

    /// `0, dt, 2dt, …, T`, with the last instant pinned to `T`.
    pub fn sample_times(&self) -> impl Iterator<Item = f64> + '_ {
        let steps = self.steps();
        (0..=steps).map(move |k| if k == steps { self.total_time } else { k as f64 * self.dt })
    }
}

/// Time-averaged occupation probabilities, one per node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PopulationVector(pub Vec<f64>);

impl PopulationVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &PopulationVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `self - baseline`, elementwise.
    pub fn delta_from(&self, baseline: &PopulationVector) -> Vec<f64> {
        self.0.iter().zip(&baseline.0).map(|(a, b)| a - b).collect()
    }
}

pub fn uniform_state(n: usize) -> Result<AmplitudeVector> {
    if n == 0 {
        return Err(Error::TooFewNodes {
            required: 1,
            actual: 0,
        });
    }
    let c = 1.0 / (n as f64).sqrt();
    Ok(AmplitudeVector(vec![Complex64::new(c, 0.0); n]))
}

/// Basis state `|j>` for a 1-based node `j`.
pub fn localized_state(n: usize, j: usize) -> Result<AmplitudeVector> {
    if j == 0 || j > n {
        return Err(Error::NodeOutOfRange { label: j, n });
    }
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    c[j - 1] = Complex64::new(1.0, 0.0);
    Ok(AmplitudeVector(c))
}

/// `|c_j|²` per node.
pub fn probabilities(psi: &AmplitudeVector) -> Vec<f64> {
    psi.0.iter().map(|c| c.norm_sqr()).collect()
}

/// A walk on one graph with its generator already diagonalized.
#[derive(Debug, Clone)]
pub struct Walk {
    decomposition: SpectralDecomposition,
    psi0: AmplitudeVector,
    generator: Generator,
}

impl Walk {
    pub fn new(g: &Graph, generator: Generator, initial: InitialState) -> Result<Self> {
        let psi0 = initial.amplitudes(g.node_count())?;
        let decomposition = eigh(&generator.matrix(g))?;
        Ok(Walk {
            decomposition,
            psi0,
            generator,
        })
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    pub fn initial_state(&self) -> &AmplitudeVector {
        &self.psi0
    }

    pub fn propagator(&self) -> Propagator<'_> {
        Propagator::new(&self.decomposition, &self.psi0, self.generator.phase_sign())
            .expect("initial state matches graph size")
    }

    pub fn state_at(&self, t: f64) -> AmplitudeVector {
        self.propagator().state_at(t)
    }

    pub fn probabilities_at(&self, t: f64) -> Vec<f64> {
        probabilities(&self.state_at(t))
    }

    /// Instantaneous probabilities at every sample instant of `cfg`.
    pub fn sampled_probabilities(&self, cfg: &WalkConfig) -> Vec<Vec<f64>> {
        let prop = self.propagator();
        cfg.sample_times().map(|t| probabilities(&prop.state_at(t))).collect()
    }

    /// Composite trapezoid average of `P_j(t)` over the samples of `cfg`,
    /// accumulated in sample-index order.
    pub fn average(&self, cfg: &WalkConfig) -> PopulationVector {
        let prop = self.propagator();
        let n = prop.dim();
        let steps = cfg.steps();
        let mut acc = vec![0.0; n];
        let mut phased = Vec::with_capacity(n);
        let mut state = Vec::with_capacity(n);
        for (k, t) in cfg.sample_times().enumerate() {
            prop.state_into(t, &mut phased, &mut state);
            let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
            for (a, c) in acc.iter_mut().zip(&state) {
                *a += w * c.norm_sqr();
            }
        }
        let scale = cfg.dt / cfg.total_time;
        PopulationVector(acc.into_iter().map(|a| a * scale).collect())
    }
}

/// Time-averaged populations of the walk described by `cfg` on `g`.
pub fn average_populations(g: &Graph, cfg: &WalkConfig) -> Result<PopulationVector> {
    cfg.validate()?;
    if g.node_count() == 0 {
        return Err(Error::TooFewNodes {
            required: 1,
            actual: 0,
        });
    }
    Ok(Walk::new(g, cfg.generator, cfg.initial)?.average(cfg))
}
