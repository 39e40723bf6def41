use crate::diagnostics::record::{compute_record, BudgetQuadrature, DiagnosticsRecord};
use crate::dynamics::config::SolverConfig;
use crate::dynamics::state::MHDState;
use crate::dynamics::stepper::Stepper;
use crate::error::{Error, Result};
use crate::field::inverse_pair;

/// Fraction of the grid spacing a field may travel in one step.
pub const ADVECTIVE_LIMIT: f64 = 0.5;

#[derive(Clone, Debug)]
pub struct Sample {
    pub state: MHDState,
    pub record: DiagnosticsRecord,
}

/// A failed run: the error and the last state known to be valid.
#[derive(Debug)]
pub struct Abort {
    pub error: Error,
    pub last_valid: MHDState,
}

/// Stepping loop from `init.t` to the absolute time `config.t_end`, yielding
/// a [`Sample`] for the initial state, every `output_every` steps and at the
/// final time. The last step is shortened to land on `t_end`. After an
/// [`Abort`] the iterator is exhausted.
pub struct Run {
    config: SolverConfig,
    stepper: Stepper,
    quadrature: BudgetQuadrature,
    state: MHDState,
    t0: f64,
    steps: u64,
    index: u64,
    pending: Option<Abort>,
    done: bool,
}

impl Run {
    pub fn new(config: &SolverConfig, init: MHDState) -> Result<Run> {
        config.validate()?;
        if init.grid().n() != config.n {
            return Err(Error::GridMismatch { left: init.grid().n(), right: config.n });
        }
        let t0 = init.t;
        let span = config.t_end - t0;
        if span < 0.0 {
            return Err(Error::InvalidArgument(format!("t_end = {} precedes the state time {t0}", config.t_end)));
        }
        // tolerate t_end/dt landing a rounding error above an integer
        let steps = (span / config.dt * (1.0 - 1e-12)).ceil() as u64;
        Ok(Run {
            config: config.clone(),
            stepper: Stepper::new(init.grid(), config),
            quadrature: BudgetQuadrature::new(),
            state: init,
            t0,
            steps,
            index: 0,
            pending: None,
            done: false,
        })
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn state(&self) -> &MHDState {
        &self.state
    }

    fn abort(&mut self, error: Error) -> Abort {
        self.done = true;
        Abort { error, last_valid: self.state.clone() }
    }

    fn time_of(&self, k: u64) -> f64 {
        if k >= self.steps {
            self.config.t_end
        } else {
            self.t0 + k as f64 * self.config.dt
        }
    }

    fn check_advective_bound(&self) -> Result<()> {
        // collocation samples suffice for a step-size bound
        let [u1, u2] = self.state.velocity();
        let [b1, b2] = self.state.magnetic();
        let (u1, u2) = inverse_pair(&u1, &u2)?;
        let (b1, b2) = inverse_pair(&b1, &b2)?;
        let peak = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x.hypot(*y)).fold(0.0, f64::max);
        let speed = peak(u1.samples(), u2.samples()).max(peak(b1.samples(), b2.samples()));
        let h = self.state.grid().spacing();
        if self.config.dt * speed > ADVECTIVE_LIMIT * h {
            return Err(Error::Aborted {
                t: self.state.t,
                reason: format!(
                    "dt = {:e} exceeds the advective bound {:e} (max speed {speed:e})",
                    self.config.dt,
                    ADVECTIVE_LIMIT * h / speed
                ),
            });
        }
        Ok(())
    }

    fn advance(&mut self) -> std::result::Result<Option<Sample>, Abort> {
        let k1 = match self.stepper.nonlinear(&self.state) {
            Ok(k) => k,
            Err(e) => return Err(self.abort(e)),
        };
        self.quadrature.observe(&self.state, &k1, self.stepper.damping_rates(), &self.config);
        let last = self.index >= self.steps;
        let mut sample = None;
        if self.index % self.config.output_every as u64 == 0 || last {
            match compute_record(&self.state, &self.config, self.quadrature.totals()) {
                Ok(record) => sample = Some(Sample { state: self.state.clone(), record }),
                Err(e) => return Err(self.abort(e)),
            }
            if !last {
                if let Err(e) = self.check_advective_bound() {
                    self.pending = Some(self.abort(e));
                    return Ok(sample);
                }
            }
        }
        if last {
            self.done = true;
            return Ok(sample);
        }
        let h = self.time_of(self.index + 1) - self.state.t;
        match self.stepper.step_from(&self.state, &k1, h) {
            Ok(mut next) => {
                self.index += 1;
                next.t = self.time_of(self.index);
                self.state = next;
                Ok(sample)
            }
            Err(e) => Err(self.abort(e)),
        }
    }
}

impl Iterator for Run {
    type Item = std::result::Result<Sample, Abort>;

    fn next(&mut self) -> Option<Self::Item> {
        if let Some(a) = self.pending.take() {
            return Some(Err(a));
        }
        while !self.done {
            match self.advance() {
                Ok(Some(s)) => return Some(Ok(s)),
                Ok(None) => {}
                Err(a) => return Some(Err(a)),
            }
        }
        None
    }
}
