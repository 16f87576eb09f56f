//! First-order baseline optimizers: SGD, Momentum, NAG, AdaGrad, RMSprop,
//! AdaDelta, and Adam.
//!
//! All methods apply element-wise updates from zero-initialized accumulators.
//! Conventions worth noting because implementations in the wild disagree:
//!
//! * AdaGrad, RMSprop and AdaDelta add epsilon *inside* the square root
//!   (`sqrt(v + eps)`); Adam adds it *outside* (`sqrt(v_hat) + eps`).
//! * AdaGrad and RMSprop divide by the *post-update* accumulator (the one
//!   that already includes the current gradient).
//! * NAG is expressed through the caller: the update rule is Momentum's, but
//!   the gradient must be evaluated at the lookahead point `w - gamma*m`
//!   (see [`nag_lookahead`]); [`minimize`] does this automatically.
//! * AdaDelta has no learning rate; `eta` is ignored for it.

use crate::error::{Error, Result};
use crate::trace::{Trace, TraceRecord};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradMethod {
    Sgd,
    Momentum,
    Nag,
    AdaGrad,
    RmsProp,
    AdaDelta,
    Adam,
}

impl GradMethod {
    pub fn all() -> &'static [GradMethod] {
        &[
            GradMethod::Sgd,
            GradMethod::Momentum,
            GradMethod::Nag,
            GradMethod::AdaGrad,
            GradMethod::RmsProp,
            GradMethod::AdaDelta,
            GradMethod::Adam,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            GradMethod::Sgd => "sgd",
            GradMethod::Momentum => "momentum",
            GradMethod::Nag => "nag",
            GradMethod::AdaGrad => "adagrad",
            GradMethod::RmsProp => "rmsprop",
            GradMethod::AdaDelta => "adadelta",
            GradMethod::Adam => "adam",
        }
    }

    pub fn from_name(name: &str) -> Option<GradMethod> {
        GradMethod::all().iter().copied().find(|m| m.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradConfig {
    pub method: GradMethod,
    /// Learning rate (ignored by AdaDelta).
    pub eta: f64,
    /// Momentum / decay factor for Momentum, NAG, RMSprop, AdaDelta.
    pub gamma: f64,
    /// Adam first-moment decay.
    pub beta1: f64,
    /// Adam second-moment decay.
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for GradConfig {
    fn default() -> Self {
        Self {
            method: GradMethod::Adam,
            eta: 0.001,
            gamma: 0.9,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

impl GradConfig {
    pub fn with_method(method: GradMethod) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bounded = |name: &str, v: f64, lo: f64, hi: f64| {
            if !v.is_finite() || v < lo || v >= hi {
                Err(Error::InvalidConfig(format!(
                    "{name} must be in [{lo}, {hi}), got {v}"
                )))
            } else {
                Ok(())
            }
        };
        if !self.eta.is_finite() || self.eta <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "eta must be positive, got {}",
                self.eta
            )));
        }
        bounded("gamma", self.gamma, 0.0, 1.0)?;
        bounded("beta1", self.beta1, 0.0, 1.0)?;
        bounded("beta2", self.beta2, 0.0, 1.0)?;
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Accumulator state. `m` is the momentum / first moment, `v` the squared
/// accumulator / second moment, `s` AdaDelta's squared-update average; all
/// start at zero. `t` counts completed steps from 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GradState {
    pub t: usize,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub s: Vec<f64>,
}

impl GradState {
    pub fn new(dim: usize) -> Self {
        Self {
            t: 0,
            m: vec![0.0; dim],
            v: vec![0.0; dim],
            s: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }
}

/// Adam's bias-correction denominators `(1 - beta1^t, 1 - beta2^t)` for a
/// given number of completed steps `t >= 1`.
fn bias_corrections(cfg: &GradConfig, steps_completed: usize) -> (f64, f64) {
    debug_assert!(steps_completed >= 1);
    (
        1.0 - cfg.beta1.powi(steps_completed as i32),
        1.0 - cfg.beta2.powi(steps_completed as i32),
    )
}

/// Bias-corrected moment estimates `(m_hat, v_hat)` for the most recent Adam
/// step. Only meaningful after at least one step (panics on a fresh state:
/// the correction divides by `1 - beta^0 = 0`).
pub fn adam_bias_corrected(state: &GradState, cfg: &GradConfig) -> (Vec<f64>, Vec<f64>) {
    assert!(state.t >= 1, "bias correction needs a completed step");
    let (bc1, bc2) = bias_corrections(cfg, state.t);
    (
        state.m.iter().map(|m| m / bc1).collect(),
        state.v.iter().map(|v| v / bc2).collect(),
    )
}

/// One Adam update: decayed moments, bias correction with exponent `t+1`
/// (so the first step uses `1 - beta^1` and `m_hat == g` exactly), then
/// `w -= eta * m_hat / (sqrt(v_hat) + eps)`.
pub fn adam_step(state: &mut GradState, w: &mut [f64], g: &[f64], cfg: &GradConfig) {
    assert_eq!(w.len(), g.len());
    assert_eq!(w.len(), state.dim());
    let t_next = state.t + 1;
    let (bc1, bc2) = bias_corrections(cfg, t_next);
    for i in 0..w.len() {
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g[i];
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
        let m_hat = state.m[i] / bc1;
        let v_hat = state.v[i] / bc2;
        w[i] -= cfg.eta * m_hat / (v_hat.sqrt() + cfg.epsilon);
    }
    state.t = t_next;
}

/// One update for the non-Adam methods. For NAG, `g` must be the gradient
/// evaluated at the lookahead point (see [`nag_lookahead`]); the rule itself
/// is Momentum's. Passing an Adam config delegates to [`adam_step`].
pub fn baseline_step(state: &mut GradState, w: &mut [f64], g: &[f64], cfg: &GradConfig) {
    assert_eq!(w.len(), g.len());
    assert_eq!(w.len(), state.dim());
    match cfg.method {
        GradMethod::Adam => {
            adam_step(state, w, g, cfg);
            return;
        }
        GradMethod::Sgd => {
            for i in 0..w.len() {
                w[i] -= cfg.eta * g[i];
            }
        }
        GradMethod::Momentum | GradMethod::Nag => {
            for i in 0..w.len() {
                state.m[i] = cfg.gamma * state.m[i] + cfg.eta * g[i];
                w[i] -= state.m[i];
            }
        }
        GradMethod::AdaGrad => {
            for i in 0..w.len() {
                state.v[i] += g[i] * g[i];
                w[i] -= cfg.eta * g[i] / (state.v[i] + cfg.epsilon).sqrt();
            }
        }
        GradMethod::RmsProp => {
            for i in 0..w.len() {
                state.v[i] = cfg.gamma * state.v[i] + (1.0 - cfg.gamma) * g[i] * g[i];
                w[i] -= cfg.eta * g[i] / (state.v[i] + cfg.epsilon).sqrt();
            }
        }
        GradMethod::AdaDelta => {
            // Pre-update s, post-update v; no learning rate.
            for i in 0..w.len() {
                state.v[i] = cfg.gamma * state.v[i] + (1.0 - cfg.gamma) * g[i] * g[i];
                let dw =
                    -((state.s[i] + cfg.epsilon).sqrt() / (state.v[i] + cfg.epsilon).sqrt()) * g[i];
                state.s[i] = cfg.gamma * state.s[i] + (1.0 - cfg.gamma) * dw * dw;
                w[i] += dw;
            }
        }
    }
    state.t += 1;
}

/// Dispatches to [`adam_step`] or [`baseline_step`].
pub fn step(state: &mut GradState, w: &mut [f64], g: &[f64], cfg: &GradConfig) {
    match cfg.method {
        GradMethod::Adam => adam_step(state, w, g, cfg),
        _ => baseline_step(state, w, g, cfg),
    }
}

/// The point where NAG evaluates its gradient: `w - gamma * m`.
pub fn nag_lookahead(state: &GradState, w: &[f64], cfg: &GradConfig) -> Vec<f64> {
    w.iter()
        .zip(&state.m)
        .map(|(&wi, &mi)| wi - cfg.gamma * mi)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradResult {
    pub weights: Vec<f64>,
    pub final_loss: f64,
    pub steps_run: usize,
    pub trace: Trace,
}

/// Full-batch first-order minimization. Records the loss before every step
/// (step indices from 0) and stops when the budget is exhausted or the loss
/// reaches `loss_tolerance`. Non-finite losses or gradient components abort
/// the run.
pub fn minimize(
    loss: impl Fn(&[f64]) -> f64,
    gradient: impl Fn(&[f64]) -> Vec<f64>,
    w0: &[f64],
    cfg: &GradConfig,
    max_steps: usize,
    loss_tolerance: f64,
) -> Result<GradResult> {
    cfg.validate()?;
    let started = Instant::now();
    let mut w = w0.to_vec();
    let mut state = GradState::new(w.len());
    let mut trace = Trace::new();

    let mut steps_run = 0;
    let final_loss = loop {
        let l = loss(&w);
        if !l.is_finite() {
            return Err(Error::NonFiniteLoss {
                value: l,
                step: steps_run,
            });
        }
        trace.push(TraceRecord {
            step: steps_run,
            estimate: w.clone(),
            value: l,
            widths: vec![],
            seconds: started.elapsed().as_secs_f64(),
        });
        if l <= loss_tolerance || steps_run == max_steps {
            break l;
        }

        let at = match cfg.method {
            GradMethod::Nag => nag_lookahead(&state, &w, cfg),
            _ => w.clone(),
        };
        let g = gradient(&at);
        assert_eq!(g.len(), w.len(), "gradient arity mismatch");
        if let Some((index, &value)) = g.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteGradient {
                value,
                index,
                step: steps_run,
            });
        }
        step(&mut state, &mut w, &g, cfg);
        steps_run += 1;
    };

    Ok(GradResult {
        weights: w,
        final_loss,
        steps_run,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(method: GradMethod) -> GradConfig {
        GradConfig::with_method(method)
    }

    #[test]
    fn config_validation() {
        assert!(GradConfig::default().validate().is_ok());
        for bad in [
            GradConfig {
                eta: 0.0,
                ..GradConfig::default()
            },
            GradConfig {
                gamma: 1.0,
                ..GradConfig::default()
            },
            GradConfig {
                beta1: -0.1,
                ..GradConfig::default()
            },
            GradConfig {
                beta2: f64::NAN,
                ..GradConfig::default()
            },
            GradConfig {
                epsilon: 0.0,
                ..GradConfig::default()
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn fresh_state_is_zeroed() {
        let s = GradState::new(3);
        assert_eq!(s.t, 0);
        assert_eq!(s.m, vec![0.0; 3]);
        assert_eq!(s.v, vec![0.0; 3]);
        assert_eq!(s.s, vec![0.0; 3]);
    }

    #[test]
    fn sgd_single_step() {
        let mut state = GradState::new(1);
        let mut w = [1.0];
        let c = GradConfig {
            eta: 0.1,
            ..cfg(GradMethod::Sgd)
        };
        baseline_step(&mut state, &mut w, &[2.0], &c);
        assert_eq!(w[0], 0.8, "w - eta*g must be exact here");
        assert_eq!(state.t, 1);
    }

    #[test]
    fn adagrad_first_step_uses_post_update_accumulator() {
        let mut state = GradState::new(1);
        let mut w = [1.0];
        let c = GradConfig {
            eta: 0.1,
            ..cfg(GradMethod::AdaGrad)
        };
        baseline_step(&mut state, &mut w, &[3.0], &c);
        assert_eq!(state.v[0], 9.0, "accumulator must include the current g^2");
        // Delta = -0.1 * 3 / sqrt(9 + 1e-8) ~ -0.1.
        assert!(
            (w[0] - 0.9).abs() < 1e-9,
            "expected ~0.9 (post-update accumulator), got {} — a pre-update \
             accumulator would have produced a huge step",
            w[0]
        );
    }

    #[test]
    fn adagrad_steps_shrink_under_constant_gradient() {
        let mut state = GradState::new(1);
        let mut w = [0.0];
        let c = cfg(GradMethod::AdaGrad);
        let mut last_delta = f64::INFINITY;
        for _ in 0..10 {
            let before = w[0];
            baseline_step(&mut state, &mut w, &[1.0], &c);
            let delta = (before - w[0]).abs();
            assert!(delta < last_delta, "AdaGrad step size must shrink");
            last_delta = delta;
        }
    }

    #[test]
    fn momentum_accumulates_toward_eta_over_one_minus_gamma() {
        let mut state = GradState::new(1);
        let mut w = [0.0];
        let c = GradConfig {
            eta: 0.1,
            gamma: 0.9,
            ..cfg(GradMethod::Momentum)
        };
        baseline_step(&mut state, &mut w, &[1.0], &c);
        assert!((state.m[0] - 0.1).abs() < 1e-15);
        baseline_step(&mut state, &mut w, &[1.0], &c);
        assert!((state.m[0] - 0.19).abs() < 1e-15);
        for _ in 0..200 {
            baseline_step(&mut state, &mut w, &[1.0], &c);
        }
        // Geometric limit eta/(1-gamma) = 1.
        assert!(
            (state.m[0] - 1.0).abs() < 1e-6,
            "momentum should approach 1, got {}",
            state.m[0]
        );
    }

    #[test]
    fn momentum_with_zero_gamma_is_sgd() {
        let c_momentum = GradConfig {
            gamma: 0.0,
            ..cfg(GradMethod::Momentum)
        };
        let c_sgd = cfg(GradMethod::Sgd);
        let mut sm = GradState::new(2);
        let mut ss = GradState::new(2);
        let mut wm = [0.7, -1.3];
        let mut ws = [0.7, -1.3];
        // A fixed pseudo-gradient schedule.
        for k in 0..25 {
            let g = [(k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()];
            baseline_step(&mut sm, &mut wm, &g, &c_momentum);
            baseline_step(&mut ss, &mut ws, &g, &c_sgd);
        }
        assert_eq!(wm, ws, "gamma=0 momentum must match SGD bit for bit");
    }

    #[test]
    fn rmsprop_with_zero_gamma_is_sign_sgd() {
        let c = GradConfig {
            gamma: 0.0,
            eta: 0.01,
            ..cfg(GradMethod::RmsProp)
        };
        let mut state = GradState::new(1);
        let mut w = [5.0];
        for k in 0..20 {
            let g = [if k % 3 == 0 { -0.5 } else { 1.7 }];
            let before = w[0];
            baseline_step(&mut state, &mut w, &g, &c);
            assert!((state.v[0] - g[0] * g[0]).abs() < 1e-15, "v must equal g^2");
            let delta = w[0] - before;
            let expected = -c.eta * g[0].signum();
            assert!(
                (delta - expected).abs() < 1e-6 * c.eta,
                "step {k}: delta {delta} vs sign-SGD {expected}"
            );
        }
    }

    #[test]
    fn nag_matches_momentum_under_constant_gradient_but_not_curvature() {
        // Constant gradient: the lookahead changes nothing.
        let run = |method: GradMethod, grad: fn(&[f64]) -> Vec<f64>| {
            minimize(
                |w| w[0] * w[0] / 2.0,
                grad,
                &[1.0],
                &GradConfig {
                    eta: 0.1,
                    ..cfg(method)
                },
                30,
                -1.0, // negative tolerance: never stop early
            )
            .unwrap()
            .weights
        };
        let constant: fn(&[f64]) -> Vec<f64> = |_| vec![0.25];
        assert_eq!(
            run(GradMethod::Nag, constant),
            run(GradMethod::Momentum, constant)
        );

        // Curved objective: the lookahead gradient differs from the local one.
        let linear: fn(&[f64]) -> Vec<f64> = |w| vec![w[0]];
        assert_ne!(
            run(GradMethod::Nag, linear),
            run(GradMethod::Momentum, linear)
        );
    }

    #[test]
    fn nag_lookahead_point() {
        let mut state = GradState::new(2);
        state.m = vec![0.5, -2.0];
        let c = cfg(GradMethod::Nag);
        let look = nag_lookahead(&state, &[1.0, 1.0], &c);
        assert_eq!(look, vec![1.0 - 0.9 * 0.5, 1.0 + 0.9 * 2.0]);
    }

    #[test]
    fn adadelta_ignores_eta() {
        let run = |eta: f64| {
            let c = GradConfig {
                eta,
                ..cfg(GradMethod::AdaDelta)
            };
            let mut state = GradState::new(1);
            let mut w = [2.0];
            for k in 0..40 {
                let g = [(0.3 * k as f64).sin() + 1.5];
                baseline_step(&mut state, &mut w, &g, &c);
            }
            w[0]
        };
        assert_eq!(run(0.001), run(77.0), "AdaDelta must not read eta");
    }

    #[test]
    fn adadelta_moves_despite_zero_initial_s() {
        let c = cfg(GradMethod::AdaDelta);
        let mut state = GradState::new(1);
        let mut w = [1.0];
        baseline_step(&mut state, &mut w, &[1.0], &c);
        // First delta = -sqrt(eps)/sqrt(0.1*1 + eps) * 1: tiny but nonzero.
        assert!(w[0] < 1.0, "AdaDelta must make progress from rest");
        assert!(state.s[0] > 0.0, "squared-update average must update");
    }

    #[test]
    fn adam_zero_gradient_is_a_noop() {
        let mut state = GradState::new(2);
        let mut w = [3.0, -4.0];
        adam_step(&mut state, &mut w, &[0.0, 0.0], &GradConfig::default());
        assert_eq!(w, [3.0, -4.0]);
        assert_eq!(state.m, vec![0.0, 0.0]);
        assert_eq!(state.v, vec![0.0, 0.0]);
        assert_eq!(state.t, 1);
    }

    #[test]
    fn adam_first_step_is_nearly_eta_times_sign() {
        for &g in &[1e-3, 1.0, 1e3, -42.0] {
            let mut state = GradState::new(1);
            let mut w = [0.0];
            let c = GradConfig::default();
            adam_step(&mut state, &mut w, &[g], &c);
            let expected = -c.eta * g.signum();
            assert!(
                (w[0] - expected).abs() <= c.eta * 1e-4,
                "g={g}: first step {} vs {expected}",
                w[0]
            );
        }
    }

    #[test]
    fn adam_first_step_bias_correction_recovers_raw_moments() {
        let g = [0.3, -2.7, 11.0];
        let mut state = GradState::new(3);
        let mut w = [0.0; 3];
        let c = GradConfig::default();
        adam_step(&mut state, &mut w, &g, &c);
        let (m_hat, v_hat) = adam_bias_corrected(&state, &c);
        for i in 0..3 {
            let rel_m = (m_hat[i] - g[i]).abs() / g[i].abs();
            let rel_v = (v_hat[i] - g[i] * g[i]).abs() / (g[i] * g[i]);
            assert!(rel_m <= 4.0 * f64::EPSILON, "m_hat[{i}] off by {rel_m}");
            assert!(rel_v <= 4.0 * f64::EPSILON, "v_hat[{i}] off by {rel_v}");
        }
    }

    #[test]
    fn adam_steps_stay_bounded_under_constant_gradient() {
        let c = GradConfig::default();
        for &g in &[0.01, 1.0, 250.0] {
            let mut state = GradState::new(1);
            let mut w = [0.0];
            for k in 0..200 {
                let before = w[0];
                adam_step(&mut state, &mut w, &[g], &c);
                let delta = (w[0] - before).abs();
                assert!(
                    delta <= 10.0 * c.eta,
                    "g={g} step {k}: |delta|={delta} exceeds 10*eta"
                );
            }
        }
    }

    #[test]
    fn minimize_adam_converges_on_the_sphere() {
        let result = minimize(
            |w| w.iter().map(|x| x * x).sum::<f64>(),
            |w| w.iter().map(|x| 2.0 * x).collect(),
            &[1.0, 1.0],
            &GradConfig::default(),
            5000,
            -1.0,
        )
        .unwrap();
        assert!(
            result.final_loss < 1e-4,
            "Adam on the 2-D sphere should reach <1e-4, got {}",
            result.final_loss
        );
        assert_eq!(result.steps_run, 5000);
        assert_eq!(
            result.trace.len(),
            5001,
            "one record per iteration plus start"
        );
    }

    #[test]
    fn minimize_stops_on_tolerance() {
        let result = minimize(
            |w| w.iter().map(|x| x * x).sum::<f64>(),
            |w| w.iter().map(|x| 2.0 * x).collect(),
            &[0.1, 0.1],
            &GradConfig::default(),
            1000,
            1.0,
        )
        .unwrap();
        assert_eq!(result.steps_run, 0, "already under tolerance at the start");
        assert_eq!(result.trace.len(), 1);
    }

    #[test]
    fn minimize_never_moves_on_zero_gradient() {
        for method in GradMethod::all() {
            let result = minimize(
                |_| 1.0,
                |w| vec![0.0; w.len()],
                &[0.4, -0.6],
                &cfg(*method),
                10,
                -1.0,
            )
            .unwrap();
            assert_eq!(
                result.weights,
                vec![0.4, -0.6],
                "{} moved under a zero gradient",
                method.name()
            );
        }
    }

    #[test]
    fn minimize_aborts_on_non_finite() {
        let err = minimize(
            |_| f64::NAN,
            |w| vec![0.0; w.len()],
            &[1.0],
            &GradConfig::default(),
            10,
            -1.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFiniteLoss { step: 0, .. }));

        let err = minimize(
            |w| w[0],
            |_| vec![f64::INFINITY],
            &[1.0],
            &GradConfig::default(),
            10,
            -1.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFiniteGradient { index: 0, .. }));
    }

    #[test]
    fn method_names_round_trip() {
        for m in GradMethod::all() {
            assert_eq!(GradMethod::from_name(m.name()), Some(*m));
        }
        assert_eq!(GradMethod::from_name("adamw"), None);
    }
}
