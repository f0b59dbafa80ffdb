//! Peer health state machine and mean-field epidemic models.
//!
//! Peers move between four compartments: Susceptible (no infected files in
//! the shared folder), Exposed (an infected file was downloaded but not yet
//! executed), Infected (the file was executed and the worm planted its
//! copies), and Removed (recovered with re-infection disabled). The same
//! compartments drive the SIS/SIR/SEIR/SEIS mean-field ODEs used as analytic
//! oracles for the discrete-event engine.

use crate::error::{Error, Result};

/// Health compartment of a single peer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HealthState {
    Susceptible,
    Exposed,
    Infected,
    Removed,
}

/// Events that drive transitions of the health state machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransitionEvent {
    /// An infected file landed in the shared folder.
    DownloadInfected,
    /// The downloaded infected file was executed.
    Execute,
    /// The infected file was deleted before it ever ran.
    DeleteBeforeExecute,
    /// The peer cleaned its machine.
    Recover,
}

/// Rates governing the epidemic flows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpidemicParams {
    /// Per-contact infection/download effectiveness rate (1/time).
    pub beta: f64,
    /// Execution rate of a downloaded infected file (1/time).
    pub sigma: f64,
    /// Recovery/cleaning rate (1/time).
    pub delta: f64,
    /// Whether recovery restores susceptibility (true) or confers
    /// immunity (false).
    pub reinfection: bool,
    /// Fraction of peers capable of being infected, in [0, 1]. Scales the
    /// effective susceptible pool in the ODEs.
    pub vulnerability: f64,
}

impl EpidemicParams {
    pub fn new(beta: f64, sigma: f64, delta: f64, reinfection: bool) -> Self {
        Self {
            beta,
            sigma,
            delta,
            reinfection,
            vulnerability: 1.0,
        }
    }

    pub fn with_vulnerability(mut self, vulnerability: f64) -> Self {
        self.vulnerability = vulnerability;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("beta", self.beta),
            ("sigma", self.sigma),
            ("delta", self.delta),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::config(format!("rate {name} must be >= 0, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.vulnerability) {
            return Err(Error::config(format!(
                "vulnerability must lie in [0, 1], got {}",
                self.vulnerability
            )));
        }
        Ok(())
    }
}

/// Mean-field model family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Sis,
    Sir,
    Seir,
    /// Like SEIR but recovery feeds back into the susceptible pool; this is
    /// the native model of the discrete-event engine (exposed = infected
    /// file in the folder, not yet executed).
    Seis,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Sis,
        ModelKind::Sir,
        ModelKind::Seir,
        ModelKind::Seis,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Sis => "SIS",
            ModelKind::Sir => "SIR",
            ModelKind::Seir => "SEIR",
            ModelKind::Seis => "SEIS",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SIS" => Ok(ModelKind::Sis),
            "SIR" => Ok(ModelKind::Sir),
            "SEIR" => Ok(ModelKind::Seir),
            "SEIS" => Ok(ModelKind::Seis),
            other => Err(Error::config(format!(
                "unknown model '{other}' (expected SIS, SIR, SEIR or SEIS)"
            ))),
        }
    }
}

/// Population fractions of the four compartments; sums to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeState {
    pub s: f64,
    pub e: f64,
    pub i: f64,
    pub r: f64,
}

/// Tolerated deviation of `s + e + i + r` from 1.
pub const CONSERVATION_TOL: f64 = 1e-9;

impl OdeState {
    pub fn new(s: f64, e: f64, i: f64, r: f64) -> Result<Self> {
        let state = Self { s, e, i, r };
        state.validate()?;
        Ok(state)
    }

    /// Disease-free state: everyone susceptible.
    pub fn disease_free() -> Self {
        Self {
            s: 1.0,
            e: 0.0,
            i: 0.0,
            r: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let sum = self.s + self.e + self.i + self.r;
        if !sum.is_finite() || (sum - 1.0).abs() > CONSERVATION_TOL {
            return Err(Error::config(format!(
                "population fractions must sum to 1, got {sum}"
            )));
        }
        for (name, v) in [("s", self.s), ("e", self.e), ("i", self.i), ("r", self.r)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(format!(
                    "fraction {name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(())
    }

    fn to_array(self) -> [f64; 4] {
        [self.s, self.e, self.i, self.r]
    }

    fn from_array(v: [f64; 4]) -> Self {
        Self {
            s: v[0],
            e: v[1],
            i: v[2],
            r: v[3],
        }
    }
}

/// Time derivative of an [`OdeState`]; components sum to 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeDerivative {
    pub ds: f64,
    pub de: f64,
    pub di: f64,
    pub dr: f64,
}

/// Applies one legal state machine transition.
///
/// `Recover` maps Infected to Susceptible when `params.reinfection` holds,
/// to Removed otherwise. Every pair outside the legal table is an error.
pub fn transition(
    state: HealthState,
    event: TransitionEvent,
    params: &EpidemicParams,
) -> Result<HealthState> {
    use HealthState::*;
    use TransitionEvent::*;
    match (state, event) {
        (Susceptible, DownloadInfected) => Ok(Exposed),
        (Exposed, Execute) => Ok(Infected),
        (Exposed, DeleteBeforeExecute) => Ok(Susceptible),
        (Infected, Recover) => Ok(if params.reinfection {
            Susceptible
        } else {
            Removed
        }),
        _ => Err(Error::Transition { state, event }),
    }
}

/// Mean-field derivative of `x` under the given model.
///
/// Mass-action contact terms use the effective susceptible pool
/// `vulnerability * s`. The shared flow terms are computed once so the
/// component sum cancels to machine precision.
pub fn ode_derivative(x: &OdeState, params: &EpidemicParams, model: ModelKind) -> OdeDerivative {
    let s_eff = params.vulnerability * x.s;
    let infect = params.beta * s_eff * x.i;
    let incubate = params.sigma * x.e;
    let recover = params.delta * x.i;

    match model {
        ModelKind::Sis => OdeDerivative {
            ds: recover - infect,
            de: 0.0,
            di: infect - recover,
            dr: 0.0,
        },
        ModelKind::Sir => OdeDerivative {
            ds: -infect,
            de: 0.0,
            di: infect - recover,
            dr: recover,
        },
        ModelKind::Seir => OdeDerivative {
            ds: -infect,
            de: infect - incubate,
            di: incubate - recover,
            dr: recover,
        },
        ModelKind::Seis => OdeDerivative {
            ds: recover - infect,
            de: infect - incubate,
            di: incubate - recover,
            dr: 0.0,
        },
    }
}

fn derivative_array(x: [f64; 4], params: &EpidemicParams, model: ModelKind) -> [f64; 4] {
    let d = ode_derivative(&OdeState::from_array(x), params, model);
    [d.ds, d.de, d.di, d.dr]
}

/// Integrates the model with fixed-step RK4, sampling every `dt`.
///
/// The returned trajectory starts at `(0, x0)`. Conservation drift up to
/// [`CONSERVATION_TOL`] per step is renormalized away; anything larger, or
/// a NaN, aborts with a numeric error naming the offending time.
pub fn integrate_ode(
    x0: &OdeState,
    params: &EpidemicParams,
    model: ModelKind,
    horizon: f64,
    dt: f64,
) -> Result<Vec<(f64, OdeState)>> {
    params.validate()?;
    x0.validate()?;
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::config(format!("dt must be > 0, got {dt}")));
    }
    if !horizon.is_finite() || horizon < dt {
        return Err(Error::config(format!(
            "horizon must be >= dt, got horizon={horizon} dt={dt}"
        )));
    }

    let steps = (horizon / dt + 1e-9).floor() as usize;
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push((0.0, *x0));
    let mut x = x0.to_array();

    for step in 1..=steps {
        let t = step as f64 * dt;
        let k1 = derivative_array(x, params, model);
        let k2 = derivative_array(add_scaled(x, k1, dt / 2.0), params, model);
        let k3 = derivative_array(add_scaled(x, k2, dt / 2.0), params, model);
        let k4 = derivative_array(add_scaled(x, k3, dt), params, model);
        for c in 0..4 {
            x[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }

        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric {
                time: t,
                detail: "trajectory diverged (non-finite component)".into(),
            });
        }
        // Clamp roundoff-scale undershoot, then renormalize drift.
        for v in &mut x {
            if *v < 0.0 {
                if *v < -CONSERVATION_TOL {
                    return Err(Error::Numeric {
                        time: t,
                        detail: format!("component became negative ({v})"),
                    });
                }
                *v = 0.0;
            }
        }
        let sum: f64 = x.iter().sum();
        if (sum - 1.0).abs() > CONSERVATION_TOL {
            return Err(Error::Numeric {
                time: t,
                detail: format!("conservation drift {} exceeds tolerance", sum - 1.0),
            });
        }
        for v in &mut x {
            *v /= sum;
        }
        trajectory.push((t, OdeState::from_array(x)));
    }
    Ok(trajectory)
}

fn add_scaled(x: [f64; 4], k: [f64; 4], h: f64) -> [f64; 4] {
    [
        x[0] + h * k[0],
        x[1] + h * k[1],
        x[2] + h * k[2],
        x[3] + h * k[3],
    ]
}

/// Closed-form SIS infected fraction for `s + i = 1` initial states.
///
/// With growth rate `r = beta - delta` and carrying capacity
/// `k = 1 - delta/beta`, the logistic solution is
/// `i(t) = k i0 e^{rt} / (k + i0 (e^{rt} - 1))`. Used as an independent
/// oracle for the RK4 integrator.
pub fn sis_infected_closed_form(beta: f64, delta: f64, i0: f64, t: f64) -> f64 {
    if beta == 0.0 {
        return i0 * (-delta * t).exp();
    }
    let r = beta - delta;
    let k = 1.0 - delta / beta;
    if r == 0.0 {
        // Degenerate logistic: di/dt = -beta i^2.
        return i0 / (1.0 + beta * i0 * t);
    }
    let g = (r * t).exp();
    k * i0 * g / (k + i0 * (g - 1.0))
}
