//! Subcommand implementations. Each one validates its request and returns a
//! [`Table`]; writing and exit codes are handled by the caller.

use std::fmt;

use clap::ValueEnum;
use gravent_core::chsh::{chsh_threshold, horodecki_at};
use gravent_core::entanglement::{lambda_closed, optimal_time, ENTANGLEMENT_TOL};
use gravent_core::fluctuations::{
    averaged_state, lambda_bar, max_time_jitter, monte_carlo_average,
};
use gravent_core::{evolve_closed, Error, FluctuationSpec, Matrix4, PhysicalParams, SimPoint};

use crate::table::{Cell, Table};

/// Threshold coupling for CHSH violation, as reported for this model.
pub const CHSH_OMEGA_STAR: f64 = 4.19135;

/// A failure with the exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Domain,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Input,
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Domain,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Input => 2,
            ErrorKind::Domain => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Input => "input",
            ErrorKind::Domain => "domain",
        };
        // single line, so the message is escaped as a JSON string
        let msg = serde_json::to_string(&self.message).expect("strings always serialize");
        write!(f, "error kind={kind} message={msg}")
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(m) => CliError::input(m),
            Error::Domain(m) => CliError::domain(m),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Quantity {
    Lambda,
    LambdaBar,
    OptimalTime,
    JitterBound,
    #[value(name = "horodecki_M", alias = "horodecki_m")]
    HorodeckiM,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    T,
    Omega,
}

/// Inclusive uniform grid `start..=stop` with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Range {
    pub fn from_args(values: &[f64]) -> CliResult<Self> {
        let [start, stop, steps] = values else {
            return Err(CliError::input("--range takes START STOP STEPS"));
        };
        if !(start.is_finite() && stop.is_finite()) {
            return Err(CliError::input("range endpoints must be finite"));
        }
        if steps.fract() != 0.0 || *steps < 2.0 || *steps > 1e8 {
            return Err(CliError::input(format!(
                "STEPS must be an integer >= 2, got {steps}"
            )));
        }
        if start >= stop {
            return Err(CliError::input(format!(
                "range start {start} must be below stop {stop}"
            )));
        }
        Ok(Self {
            start: *start,
            stop: *stop,
            steps: *steps as usize,
        })
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let span = self.stop - self.start;
        let last = self.steps - 1;
        (0..self.steps).map(move |k| {
            if k == last {
                self.stop
            } else {
                self.start + span * k as f64 / last as f64
            }
        })
    }
}

/// A sweep of one quantity over `t` or `ω`, other parameters held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub quantity: Quantity,
    pub over: Axis,
    pub range: Range,
    pub omega: Option<f64>,
    pub t: Option<f64>,
    pub jitter: FluctuationSpec,
}

impl SweepRequest {
    fn fixed(&self, name: &str, value: Option<f64>) -> CliResult<f64> {
        value.ok_or_else(|| {
            CliError::input(format!(
                "--{name} is required when sweeping over the other axis"
            ))
        })
    }

    fn point(&self, x: f64) -> CliResult<SimPoint> {
        let p = match self.over {
            Axis::T => SimPoint::new(self.fixed("omega", self.omega)?, x)?,
            Axis::Omega => SimPoint::new(x, self.fixed("t", self.t)?)?,
        };
        Ok(p)
    }

    fn validate(&self) -> CliResult<()> {
        match (self.quantity, self.over) {
            (Quantity::OptimalTime | Quantity::JitterBound, Axis::T) => {
                return Err(CliError::input(
                    "optimal_time and jitter_bound are functions of omega only",
                ));
            }
            (Quantity::OptimalTime, _) if self.range.start <= 1.0 => {
                return Err(CliError::domain(
                    "optimal_time needs omega > 1 over the whole range",
                ));
            }
            (Quantity::JitterBound, _) if self.range.start < 1.0 => {
                return Err(CliError::domain(
                    "jitter_bound needs omega >= 1 over the whole range",
                ));
            }
            _ => {}
        }
        if self.range.start < 0.0 {
            return Err(CliError::input("sweep range must be non-negative"));
        }
        if self.quantity == Quantity::LambdaBar && self.jitter.s_t > 0.0 {
            let shift = self.jitter.s_t * self.jitter.s_t;
            let t_min = match self.over {
                Axis::T => self.range.start,
                Axis::Omega => self.fixed("t", self.t)?,
            };
            if t_min <= shift {
                return Err(CliError::domain(format!(
                    "lambda_bar needs t > s_t^2 = {shift}, got t = {t_min}"
                )));
            }
        }
        Ok(())
    }
}

pub fn run_sweep(req: &SweepRequest) -> CliResult<Table> {
    req.validate()?;
    let mut table = match req.quantity {
        Quantity::Lambda => Table::new(vec!["t", "omega", "lambda", "entangled"]),
        Quantity::LambdaBar => Table::new(vec![
            "t",
            "omega",
            "s_t",
            "s_omega",
            "lambda_bar",
            "entangled",
            "small_jitter",
        ]),
        Quantity::OptimalTime => Table::new(vec!["omega", "t0", "lambda_at_t0"]),
        Quantity::JitterBound => Table::new(vec!["omega", "s_t_max_sq", "s_t_max"]),
        Quantity::HorodeckiM => Table::new(vec!["t", "omega", "M", "violates", "max_chsh"]),
    };
    for x in req.range.points() {
        let row: Vec<Cell> = match req.quantity {
            Quantity::Lambda => {
                let p = req.point(x)?;
                let lambda = lambda_closed(p);
                vec![
                    p.t.into(),
                    p.omega.into(),
                    lambda.into(),
                    (lambda < -ENTANGLEMENT_TOL).into(),
                ]
            }
            Quantity::LambdaBar => {
                let p = req.point(x)?;
                let lb = lambda_bar(p, req.jitter)?;
                vec![
                    p.t.into(),
                    p.omega.into(),
                    req.jitter.s_t.into(),
                    req.jitter.s_omega.into(),
                    lb.into(),
                    (lb < -ENTANGLEMENT_TOL).into(),
                    req.jitter.validity(p).all_ok().into(),
                ]
            }
            Quantity::OptimalTime => {
                let t0 = optimal_time(x)?;
                vec![
                    x.into(),
                    t0.into(),
                    lambda_closed(SimPoint { omega: x, t: t0 }).into(),
                ]
            }
            Quantity::JitterBound => {
                let sq = max_time_jitter(x)?;
                vec![x.into(), sq.into(), sq.sqrt().into()]
            }
            Quantity::HorodeckiM => {
                let p = req.point(x)?;
                let r = horodecki_at(p);
                vec![
                    p.t.into(),
                    p.omega.into(),
                    r.m.into(),
                    r.violates.into(),
                    r.max_chsh.into(),
                ]
            }
        };
        table.push(row);
    }
    Ok(table)
}

/// Physical design inputs. `t_decoherence` may be omitted when only the
/// decoherence time needed for `target_omega` is wanted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignRequest {
    pub m1: f64,
    pub m2: f64,
    pub d: f64,
    pub l: f64,
    pub t_decoherence: Option<f64>,
    pub target_omega: Option<f64>,
}

pub fn run_design(req: &DesignRequest) -> CliResult<Table> {
    if req.t_decoherence.is_none() && req.target_omega.is_none() {
        return Err(CliError::input("design needs --T, --target-omega, or both"));
    }
    let mut params = PhysicalParams::new(
        req.m1,
        req.m2,
        req.d,
        req.l,
        req.t_decoherence.unwrap_or(1.0),
    );
    params.validate()?;
    let delta = params.coupling_delta()?;

    let mut table = Table::new(vec!["quantity", "value", "unit"]);
    let mut row =
        |name: &str, value: Cell, unit: &str| table.push(vec![name.into(), value, unit.into()]);
    row("delta", delta.into(), "J");

    if let Some(t_dec) = req.t_decoherence {
        params.t_decoherence = t_dec;
        let omega = params.dimensionless_coupling()?;
        let entangles = omega > 1.0;
        row("decoherence_time", t_dec.into(), "s");
        row("omega", omega.into(), "1");
        row("entanglement_possible", entangles.into(), "bool");
        row(
            "chsh_violation_possible",
            (omega > CHSH_OMEGA_STAR).into(),
            "bool",
        );
        let t0 = entangles.then(|| optimal_time(omega)).transpose()?;
        row("optimal_time", t0.into(), "1");
        row("optimal_time_physical", t0.map(|t| t * t_dec).into(), "s");
        let bound = entangles.then(|| max_time_jitter(omega)).transpose()?;
        row("max_time_jitter", bound.map(f64::sqrt).into(), "1");
        row(
            "max_time_jitter_physical",
            bound.map(|b| b.sqrt() * t_dec).into(),
            "s",
        );
    }
    if let Some(target) = req.target_omega {
        let t_needed = params.decoherence_time_for(target)?;
        row("target_omega", target.into(), "1");
        row("required_decoherence_time", t_needed.into(), "s");
    }
    Ok(table)
}

fn matrix_table(m: &Matrix4) -> Table {
    let mut table = Table::new(vec!["row", "col", "re", "im"]);
    for i in 0..4 {
        for j in 0..4 {
            let z = m[(i, j)];
            table.push(vec![
                (i + 1).into(),
                (j + 1).into(),
                z.re.into(),
                z.im.into(),
            ]);
        }
    }
    table
}

/// State at one point; with jitter this is the first-order averaged matrix.
/// Returns any validity warnings alongside the table.
pub fn run_evolve(point: SimPoint, jitter: FluctuationSpec) -> CliResult<(Table, Vec<String>)> {
    if jitter == FluctuationSpec::default() {
        return Ok((matrix_table(evolve_closed(point).matrix()), Vec::new()));
    }
    let avg = averaged_state(point, jitter)?;
    let mut warnings = Vec::new();
    if !avg.psd {
        warnings.push(format!(
            "averaged matrix is not positive semidefinite (min eigenvalue {:e})",
            avg.min_eigenvalue
        ));
    }
    if !avg.small_jitter.time_ok {
        warnings
            .push("s_t >= t/3: first-order averaging is outside its small-jitter regime".into());
    }
    if !avg.small_jitter.coupling_ok {
        warnings.push(
            "s_omega >= omega/3: first-order averaging is outside its small-jitter regime".into(),
        );
    }
    Ok((matrix_table(&avg.matrix), warnings))
}

pub fn run_optimal_time(omega: f64) -> CliResult<Table> {
    let t0 = optimal_time(omega)?;
    let mut table = Table::new(vec!["omega", "t0", "lambda_at_t0", "t0_times_omega"]);
    table.push(vec![
        omega.into(),
        t0.into(),
        lambda_closed(SimPoint { omega, t: t0 }).into(),
        (t0 * omega).into(),
    ]);
    Ok(table)
}

pub fn run_jitter_bound(omega: f64) -> CliResult<Table> {
    let sq = max_time_jitter(omega)?;
    let mut table = Table::new(vec!["omega", "s_t_max_sq", "s_t_max"]);
    table.push(vec![omega.into(), sq.into(), sq.sqrt().into()]);
    Ok(table)
}

pub fn run_chsh_threshold() -> Table {
    let r = chsh_threshold();
    let mut table = Table::new(vec!["omega_star", "margin", "bracket_lo", "bracket_hi"]);
    table.push(vec![
        r.omega_star.into(),
        r.margin.into(),
        r.bracket.0.into(),
        r.bracket.1.into(),
    ]);
    table
}

/// Monte-Carlo average with the first-order prediction alongside. Returns the
/// number of clamped samples for reporting.
pub fn run_monte_carlo(
    point: SimPoint,
    jitter: FluctuationSpec,
    samples: u64,
    seed: u64,
) -> CliResult<(Table, u64)> {
    let est = monte_carlo_average(point, jitter, samples, seed)?;
    // the first-order formula is undefined for t <= s_t^2; leave it blank there
    let first_order = averaged_state(point, jitter).ok();
    let mut table = Table::new(vec![
        "row",
        "col",
        "mean_re",
        "mean_im",
        "se_re",
        "se_im",
        "first_order_re",
        "first_order_im",
    ]);
    for i in 0..4 {
        for j in 0..4 {
            let z = est.mean[(i, j)];
            let fo = first_order.as_ref().map(|a| a.matrix[(i, j)]);
            table.push(vec![
                (i + 1).into(),
                (j + 1).into(),
                z.re.into(),
                z.im.into(),
                est.std_error_re[i][j].into(),
                est.std_error_im[i][j].into(),
                fo.map(|z| z.re).into(),
                fo.map(|z| z.im).into(),
            ]);
        }
    }
    Ok((table, est.clamped))
}
