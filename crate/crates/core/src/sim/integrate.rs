//! Adaptive Dormand–Prince 5(4) integrator with the fourth-order continuous
//! extension, so event times can be located inside accepted steps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: 1e-9,
            atol: 1e-9,
            h_init: 1e-3,
            h_max: 0.25,
            max_steps: 2_000_000,
        }
    }
}

/// One accepted step with its interpolation coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSegment {
    pub t0: f64,
    pub h: f64,
    rcont: [Vec<f64>; 5],
}

impl DenseSegment {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn start(&self) -> &[f64] {
        &self.rcont[0]
    }

    pub fn end(&self) -> Vec<f64> {
        self.rcont[0]
            .iter()
            .zip(&self.rcont[1])
            .map(|(a, b)| a + b)
            .collect()
    }

    /// Interpolated state at `t` within the step.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let th = ((t - self.t0) / self.h).clamp(0.0, 1.0);
        let th1 = 1.0 - th;
        let [r1, r2, r3, r4, r5] = &self.rcont;
        (0..r1.len())
            .map(|i| r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i]))))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationOutcome {
    pub t: f64,
    pub y: Vec<f64>,
    pub accepted: usize,
    pub rejected: usize,
    pub stopped_early: bool,
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Integrate the autonomous system `y' = f(y)` from `t = 0` to `t_end`,
/// handing every accepted step to `observer`, which may stop the run.
pub fn dopri5<F, O>(
    mut f: F,
    y0: &[f64],
    t_end: f64,
    cfg: &IntegratorConfig,
    mut observer: O,
) -> Result<IntegrationOutcome>
where
    F: FnMut(&[f64], &mut [f64]),
    O: FnMut(&DenseSegment) -> Control,
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = 0.0;
    let mut h = cfg.h_init.min(cfg.h_max).min(t_end.max(f64::MIN_POSITIVE));
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut y1 = vec![0.0; n];
    f(&y, &mut k1);
    let (mut accepted, mut rejected) = (0, 0);
    let mut last_reject = false;

    while t < t_end {
        if accepted + rejected >= cfg.max_steps {
            return Err(Error::Integration(format!("step limit reached at t = {t}")));
        }
        if t + h > t_end {
            h = t_end - t;
        }
        for i in 0..n {
            tmp[i] = y[i] + h * A21 * k1[i];
        }
        f(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(&tmp, &mut k4);
        for i in 0..n {
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(&tmp, &mut k5);
        for i in 0..n {
            tmp[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(&tmp, &mut k6);
        for i in 0..n {
            y1[i] = y[i]
                + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        f(&y1, &mut k7);

        let mut err = 0.0;
        for i in 0..n {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = cfg.atol + cfg.rtol * y[i].abs().max(y1[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / n.max(1) as f64).sqrt();
        if !err.is_finite() || y1.iter().any(|v| !v.is_finite()) {
            if h < 1e-14 {
                return Err(Error::Integration(format!("non-finite state at t = {t}")));
            }
            h *= 0.1;
            rejected += 1;
            last_reject = true;
            continue;
        }

        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, if last_reject { 1.0 } else { 10.0 });
        if err <= 1.0 {
            let mut r5 = vec![0.0; n];
            let mut r2 = vec![0.0; n];
            let mut r3 = vec![0.0; n];
            let mut r4 = vec![0.0; n];
            for i in 0..n {
                let ydiff = y1[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                r2[i] = ydiff;
                r3[i] = bspl;
                r4[i] = ydiff - h * k7[i] - bspl;
                r5[i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                        + D7 * k7[i]);
            }
            let seg = DenseSegment {
                t0: t,
                h,
                rcont: [y.clone(), r2, r3, r4, r5],
            };
            t += h;
            y.copy_from_slice(&y1);
            std::mem::swap(&mut k1, &mut k7);
            accepted += 1;
            last_reject = false;
            if observer(&seg) == Control::Stop {
                return Ok(IntegrationOutcome {
                    t,
                    y,
                    accepted,
                    rejected,
                    stopped_early: true,
                });
            }
        } else {
            rejected += 1;
            last_reject = true;
        }
        h = (h * fac).min(cfg.h_max);
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::Integration(format!("step size underflow at t = {t}")));
        }
    }
    Ok(IntegrationOutcome {
        t,
        y,
        accepted,
        rejected,
        stopped_early: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_is_accurate() {
        let cfg = IntegratorConfig {
            rtol: 1e-10,
            atol: 1e-12,
            ..Default::default()
        };
        let out = dopri5(|y, d| d[0] = -y[0], &[1.0], 5.0, &cfg, |_| Control::Continue).unwrap();
        assert!((out.y[0] - (-5.0f64).exp()).abs() < 1e-10);
        assert!((out.t - 5.0).abs() < 1e-12);
    }

    #[test]
    fn dense_output_matches_solution_inside_steps() {
        let cfg = IntegratorConfig {
            rtol: 1e-10,
            atol: 1e-12,
            h_max: 1.0,
            ..Default::default()
        };
        let mut worst: f64 = 0.0;
        dopri5(
            |y, d| {
                d[0] = y[1];
                d[1] = -y[0];
            },
            &[0.0, 1.0],
            6.0,
            &cfg,
            |seg| {
                for s in 1..10 {
                    let t = seg.t0 + seg.h * s as f64 / 10.0;
                    worst = worst.max((seg.eval(t)[0] - t.sin()).abs());
                }
                Control::Continue
            },
        )
        .unwrap();
        assert!(worst < 1e-7, "interpolation error {worst}");
    }

    #[test]
    fn observer_can_stop() {
        let out = dopri5(
            |_, d| d[0] = 1.0,
            &[0.0],
            10.0,
            &IntegratorConfig::default(),
            |seg| {
                if seg.t1() > 1.0 {
                    Control::Stop
                } else {
                    Control::Continue
                }
            },
        )
        .unwrap();
        assert!(out.stopped_early && out.t < 2.0);
    }
}
