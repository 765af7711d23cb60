//! Angle and chirality sweeps over a [`LayerStack`], with Brewster-range and
//! total-reflection band detection.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::planar::{powers, scattering, Excitation, LayerStack};

/// Quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Incidence angle; grid values in degrees.
    ThetaI,
    Kappa1,
    Kappa2,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::ThetaI => "theta_i",
            SweepVariable::Kappa1 => "kappa1",
            SweepVariable::Kappa2 => "kappa2",
        }
    }
}

pub const MAX_SWEEP_KAPPA: f64 = 5.0;

#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub base_stack: LayerStack,
    /// For chirality sweeps `theta_i` is the fixed incidence angle.
    pub excitation: Excitation,
}

impl SweepSpec {
    pub fn new(
        variable: SweepVariable,
        grid: Vec<f64>,
        base_stack: LayerStack,
        excitation: Excitation,
    ) -> Result<Self> {
        let spec = Self {
            variable,
            grid,
            base_stack,
            excitation,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.base_stack.validate()?;
        self.excitation.validate()?;
        if self.grid.is_empty() {
            return Err(Error::InvalidParameter("sweep grid is empty".into()));
        }
        if self.grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "sweep grid contains non-finite values".into(),
            ));
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "sweep grid must be strictly increasing".into(),
            ));
        }
        let (lo, hi) = (self.grid[0], self.grid[self.grid.len() - 1]);
        match self.variable {
            SweepVariable::ThetaI if lo < 0.0 || hi >= 90.0 => Err(Error::InvalidParameter(
                format!("angle grid must lie in [0, 90) degrees, got [{lo}, {hi}]"),
            )),
            SweepVariable::Kappa1 | SweepVariable::Kappa2 if lo < 0.0 || hi > MAX_SWEEP_KAPPA => {
                Err(Error::InvalidParameter(format!(
                    "chirality grid must lie in [0, {MAX_SWEEP_KAPPA}], got [{lo}, {hi}]"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Stack and excitation at grid value `x`.
    pub fn point(&self, x: f64) -> (LayerStack, Excitation) {
        let mut stack = self.base_stack;
        let mut ex = self.excitation;
        match self.variable {
            SweepVariable::ThetaI => ex.theta_i = x.to_radians(),
            SweepVariable::Kappa1 => stack.layer1.kappa = x,
            SweepVariable::Kappa2 => stack.layer2.kappa = x,
        }
        (stack, ex)
    }
}

/// Uniform grid `start, start + step, ...` up to and including `stop`.
pub fn uniform_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::InvalidParameter(format!(
            "bad grid: start {start}, stop {stop}, step {step}"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// Default angle grid: 0 to 89 degrees in 0.25 degree steps.
pub fn default_theta_grid() -> Vec<f64> {
    uniform_grid(0.0, 89.0, 0.25).expect("static grid")
}

/// Default chirality grid: 0 to 5 in steps of 0.025.
pub fn default_kappa_grid() -> Vec<f64> {
    uniform_grid(0.0, MAX_SWEEP_KAPPA, 0.025).expect("static grid")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub x: f64,
    pub p_r_par: f64,
    pub p_r_perp: f64,
    pub p_t_par: f64,
    pub p_t_perp: f64,
    pub residual: f64,
    /// Set when the solver reported a degenerate configuration; powers are NaN.
    pub degenerate: bool,
}

impl SweepRow {
    pub fn reflected(&self) -> f64 {
        self.p_r_par + self.p_r_perp
    }

    pub fn transmitted(&self) -> f64 {
        self.p_t_par + self.p_t_perp
    }
}

fn sweep_point(spec: &SweepSpec, x: f64) -> SweepRow {
    let (stack, ex) = spec.point(x);
    match scattering(&stack, ex.theta_i) {
        Ok(s) => {
            let p = powers(&s, &ex);
            SweepRow {
                x,
                p_r_par: p.p_r_par,
                p_r_perp: p.p_r_perp,
                p_t_par: p.p_t_par,
                p_t_perp: p.p_t_perp,
                residual: (1.0 - p.total()).abs(),
                degenerate: false,
            }
        }
        Err(e) => {
            log::warn!("{} = {x}: {e}", spec.variable.name());
            SweepRow {
                x,
                p_r_par: f64::NAN,
                p_r_perp: f64::NAN,
                p_t_par: f64::NAN,
                p_t_perp: f64::NAN,
                residual: f64::NAN,
                degenerate: true,
            }
        }
    }
}

/// Evaluates every grid point (in parallel); rows come back in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec
        .grid
        .par_iter()
        .map(|&x| sweep_point(spec, x))
        .collect())
}

/// Closed interval of the swept variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.start <= x && x <= self.end
    }
}

fn crossing(x0: f64, v0: f64, x1: f64, v1: f64, threshold: f64) -> f64 {
    if v1 == v0 {
        return 0.5 * (x0 + x1);
    }
    x0 + (threshold - v0) / (v1 - v0) * (x1 - x0)
}

/// Maximal runs of rows where `inside(value)` holds. Interior endpoints are
/// placed at the linearly interpolated threshold crossing; grid ends are
/// kept as-is.
fn ranges_by(
    rows: &[SweepRow],
    threshold: f64,
    value: impl Fn(&SweepRow) -> f64,
    inside: impl Fn(f64) -> bool,
) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < rows.len() {
        if rows[i].degenerate || !inside(value(&rows[i])) {
            i += 1;
            continue;
        }
        let first = i;
        while i + 1 < rows.len() && !rows[i + 1].degenerate && inside(value(&rows[i + 1])) {
            i += 1;
        }
        let last = i;
        let start = if first > 0 && !rows[first - 1].degenerate {
            let (a, b) = (&rows[first - 1], &rows[first]);
            crossing(a.x, value(a), b.x, value(b), threshold)
        } else {
            rows[first].x
        };
        let end = if last + 1 < rows.len() && !rows[last + 1].degenerate {
            let (a, b) = (&rows[last], &rows[last + 1]);
            crossing(a.x, value(a), b.x, value(b), threshold)
        } else {
            rows[last].x
        };
        out.push(Interval { start, end });
        i += 1;
    }
    out
}

/// Intervals where the total reflected power stays below `threshold`.
pub fn brewster_ranges(rows: &[SweepRow], threshold: f64) -> Vec<Interval> {
    ranges_by(rows, threshold, SweepRow::reflected, |v| v < threshold)
}

/// Intervals where the total reflected power exceeds `threshold`.
pub fn total_reflection_ranges(rows: &[SweepRow], threshold: f64) -> Vec<Interval> {
    ranges_by(rows, threshold, SweepRow::reflected, |v| v > threshold)
}

/// Intervals where a single power component stays below `threshold`.
pub fn component_zero_ranges(
    rows: &[SweepRow],
    threshold: f64,
    component: impl Fn(&SweepRow) -> f64,
) -> Vec<Interval> {
    ranges_by(rows, threshold, component, |v| v < threshold)
}

/// Grid positions of local minima of `component`, with their values.
pub fn local_minima(rows: &[SweepRow], component: impl Fn(&SweepRow) -> f64) -> Vec<(f64, f64)> {
    let v: Vec<f64> = rows.iter().map(&component).collect();
    let n = v.len();
    (0..n)
        .filter(|&i| {
            let left = i == 0 || v[i] < v[i - 1];
            let right = i + 1 == n || v[i] <= v[i + 1];
            v[i].is_finite() && left && right && n > 1
        })
        .map(|i| (rows[i].x, v[i]))
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "x,p_r_par,p_r_perp,p_t_par,p_t_perp,residual";

pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> std::io::Result<()> {
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{:.12},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
            r.x, r.p_r_par, r.p_r_perp, r.p_t_par, r.p_t_perp, r.residual
        )?;
    }
    Ok(())
}
