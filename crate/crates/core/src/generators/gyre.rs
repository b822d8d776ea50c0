use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, PointCloud, Result};

/// Stream function `φ = C sin(π f(x, t)) sin(π y)` with
/// `f(x, t) = η sin(ωt) x² + (1 − 2η sin(ωt)) x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryConfig {
    pub c: f64,
    pub eta: f64,
    pub omega: f64,
    pub x0: f64,
    pub y0: f64,
    /// Horizon `T`.
    pub t_end: f64,
    /// Number of samples, at `t_i = i T / n`.
    pub n: usize,
    /// Largest integrator step.
    pub h: f64,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        Self {
            c: 0.1,
            eta: 0.1,
            omega: PI / 5.0,
            x0: 0.5,
            y0: 0.625,
            t_end: 10000.0,
            n: 20000,
            h: 0.01,
        }
    }
}

impl TrajectoryConfig {
    pub fn sample_spacing(&self) -> f64 {
        self.t_end / self.n as f64
    }

    /// Velocity `(−∂φ/∂y, ∂φ/∂x)`.
    pub fn velocity(&self, t: f64, x: f64, y: f64) -> (f64, f64) {
        let a = self.eta * (self.omega * t).sin();
        let f = a * x * x + (1.0 - 2.0 * a) * x;
        let df = 2.0 * a * x + 1.0 - 2.0 * a;
        let pc = PI * self.c;
        (
            -pc * (PI * f).sin() * (PI * y).cos(),
            pc * (PI * f).cos() * (PI * y).sin() * df,
        )
    }

    fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) || self.n < 2 || !(self.t_end > 0.0) {
            return Err(Error::Parameter(format!(
                "need h > 0, n ≥ 2, T > 0; got h = {}, n = {}, T = {}",
                self.h, self.n, self.t_end
            )));
        }
        if !(0.0..=2.0).contains(&self.x0) || !(0.0..=1.0).contains(&self.y0) {
            return Err(Error::Parameter(format!(
                "initial point ({}, {}) lies outside [0,2]×[0,1]",
                self.x0, self.y0
            )));
        }
        Ok(())
    }
}

/// First time the state left the box by more than `1e−6`. The flow is
/// tangent to the boundary, so an exit means the step is too large.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrationWarning {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub warning: Option<IntegrationWarning>,
}

fn box_excess(x: f64, y: f64) -> f64 {
    let ex = (-x).max(x - 2.0).max(0.0);
    let ey = (-y).max(y - 1.0).max(0.0);
    ex.max(ey)
}

/// Classical RK4. Between consecutive sample times the interval is split
/// into the fewest equal steps no longer than `h`.
pub fn double_gyre_trajectory(cfg: &TrajectoryConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let n = cfg.n;
    let mut out = Trajectory {
        t: Vec::with_capacity(n),
        x: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
        warning: None,
    };
    let (mut x, mut y) = (cfg.x0, cfg.y0);
    let sample_time = |i: usize| i as f64 * cfg.t_end / n as f64;
    for i in 0..n {
        let t0 = sample_time(i);
        out.t.push(t0);
        out.x.push(x);
        out.y.push(y);
        if i + 1 == n {
            break;
        }
        let span = sample_time(i + 1) - t0;
        let steps = (span / cfg.h - 1e-9).ceil().max(1.0) as usize;
        let dt = span / steps as f64;
        for s in 0..steps {
            let t = t0 + s as f64 * dt;
            let (k1x, k1y) = cfg.velocity(t, x, y);
            let (k2x, k2y) = cfg.velocity(t + dt / 2.0, x + dt / 2.0 * k1x, y + dt / 2.0 * k1y);
            let (k3x, k3y) = cfg.velocity(t + dt / 2.0, x + dt / 2.0 * k2x, y + dt / 2.0 * k2y);
            let (k4x, k4y) = cfg.velocity(t + dt, x + dt * k3x, y + dt * k3y);
            x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            let excess = box_excess(x, y);
            if excess > 1e-6 && out.warning.is_none() {
                out.warning = Some(IntegrationWarning {
                    t: t + dt,
                    x,
                    y,
                    excess,
                });
            }
        }
    }
    Ok(out)
}

/// Delay in samples for a delay given in time units.
pub fn delay_steps(tau: f64, sample_spacing: f64) -> Result<usize> {
    if !(tau > 0.0 && sample_spacing > 0.0) {
        return Err(Error::Parameter(format!(
            "delay and spacing must be positive, got {tau}, {sample_spacing}"
        )));
    }
    Ok(((tau / sample_spacing).round() as usize).max(1))
}

/// Sliding windows `(s_i, s_{i+τ}, …, s_{i+(m−1)τ})`.
pub fn delay_embed(series: &[f64], tau_steps: usize, m: usize, intrinsic_dim: usize) -> Result<PointCloud<f64>> {
    if tau_steps == 0 || m == 0 {
        return Err(Error::Parameter("delay and window length must be positive".into()));
    }
    let span = (m - 1) * tau_steps;
    if series.len() < span + 1 {
        return Err(Error::Parameter(format!(
            "series of length {} is shorter than (m − 1)τ + 1 = {}",
            series.len(),
            span + 1
        )));
    }
    let count = series.len() - span;
    let coords: Vec<f64> = (0..count)
        .flat_map(|i| (0..m).map(move |k| series[i + k * tau_steps]))
        .collect();
    PointCloud::new(m, intrinsic_dim.min(m), coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn autonomous_centerline_is_fixed() {
        let cfg = TrajectoryConfig {
            eta: 0.0,
            omega: 1.234,
            x0: 1.0,
            y0: 0.3,
            t_end: 20.0,
            n: 40,
            ..Default::default()
        };
        let tr = double_gyre_trajectory(&cfg).unwrap();
        assert!(tr.x.iter().all(|&x| (x - 1.0).abs() < 1e-12));
        assert!(tr.warning.is_none());
    }

    #[test]
    fn sample_times_are_uniform() {
        let cfg = TrajectoryConfig {
            t_end: 10.0,
            n: 20,
            ..Default::default()
        };
        let tr = double_gyre_trajectory(&cfg).unwrap();
        assert_eq!(tr.t.len(), 20);
        assert_eq!(tr.t[1], 0.5);
        assert_eq!(tr.t[19], 9.5);
    }

    #[test]
    fn delay_examples() {
        let c = delay_embed(&[1.0, 2.0, 3.0, 4.0, 5.0], 1, 3, 1).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.point(0), &[1.0, 2.0, 3.0]);
        assert_eq!(c.point(2), &[3.0, 4.0, 5.0]);
        let k = delay_embed(&[7.0; 10], 2, 3, 1).unwrap();
        assert!(k.points().all(|p| p == [7.0, 7.0, 7.0]));
        assert!(matches!(delay_embed(&[1.0, 2.0], 1, 3, 1), Err(Error::Parameter(_))));
        assert_eq!(delay_steps(5.0, 0.5).unwrap(), 10);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = TrajectoryConfig {
            x0: 2.5,
            ..Default::default()
        };
        assert!(double_gyre_trajectory(&bad).is_err());
        let bad = TrajectoryConfig {
            h: 0.0,
            ..Default::default()
        };
        assert!(double_gyre_trajectory(&bad).is_err());
    }
}
