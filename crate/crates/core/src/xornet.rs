//! A fixed 2-2-1 network for the XOR-style truth-table task.
//!
//! Two inputs, two hidden units, one sigmoid output; hidden and output layers
//! each have a bias. Weights travel as a flat slice of nine values in
//! canonical order:
//!
//! ```text
//! [0] h1<-x1   [1] h1<-x2   [2] h1<-bias
//! [3] h2<-x1   [4] h2<-x2   [5] h2<-bias
//! [6] out<-h1  [7] out<-h2  [8] out<-bias
//! ```
//!
//! Two experiment conventions are provided: ReLU hidden units with
//! cross-entropy loss (the gradient-training setup) and sigmoid hidden units
//! with squared error (the black-box setup used by the derivative-free
//! optimizers). The default truth table is the inverted one — `(0,0)` and
//! `(1,1)` map to 1 — with the standard XOR table selectable.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::space::SearchSpace;
use crate::trace::fmt_f64;

/// Number of weights in the 2-2-1 network.
pub const WEIGHT_COUNT: usize = 9;

/// Per-weight training bound used by the derivative-free optimizers.
pub const WEIGHT_BOUND: f64 = 50.0;

/// Outputs are clamped into `[CLAMP, 1-CLAMP]` inside the cross-entropy loss
/// so saturated predictions cannot produce infinite loss values.
pub const CROSS_ENTROPY_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HiddenActivation {
    Relu,
    Sigmoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    CrossEntropy,
    SquaredError,
}

/// Activation/loss pairing for a training run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetConfig {
    pub hidden: HiddenActivation,
    pub loss: LossKind,
}

impl NetConfig {
    /// ReLU hidden units + cross-entropy: the gradient-training convention.
    pub fn relu_cross_entropy() -> Self {
        Self {
            hidden: HiddenActivation::Relu,
            loss: LossKind::CrossEntropy,
        }
    }

    /// Sigmoid hidden units + squared error: the black-box convention.
    pub fn sigmoid_squared_error() -> Self {
        Self {
            hidden: HiddenActivation::Sigmoid,
            loss: LossKind::SquaredError,
        }
    }
}

/// Which truth table to train against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetConvention {
    /// `(0,0) -> 1, (0,1) -> 0, (1,0) -> 0, (1,1) -> 1` (inverted XOR).
    Paper,
    /// Standard XOR: `(0,0) -> 0, (0,1) -> 1, (1,0) -> 1, (1,1) -> 0`.
    Standard,
}

impl TargetConvention {
    pub fn name(&self) -> &'static str {
        match self {
            TargetConvention::Paper => "paper",
            TargetConvention::Standard => "standard",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "paper" => Some(TargetConvention::Paper),
            "standard" => Some(TargetConvention::Standard),
            _ => None,
        }
    }
}

/// The four-row truth table, in fixed input order
/// `(0,0), (0,1), (1,0), (1,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct XorDataset {
    rows: [([f64; 2], f64); 4],
}

impl XorDataset {
    pub fn new(convention: TargetConvention) -> Self {
        let targets = match convention {
            TargetConvention::Paper => [1.0, 0.0, 0.0, 1.0],
            TargetConvention::Standard => [0.0, 1.0, 1.0, 0.0],
        };
        Self {
            rows: [
                ([0.0, 0.0], targets[0]),
                ([0.0, 1.0], targets[1]),
                ([1.0, 0.0], targets[2]),
                ([1.0, 1.0], targets[3]),
            ],
        }
    }

    pub fn paper() -> Self {
        Self::new(TargetConvention::Paper)
    }

    pub fn standard() -> Self {
        Self::new(TargetConvention::Standard)
    }

    pub fn rows(&self) -> &[([f64; 2], f64); 4] {
        &self.rows
    }
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn hidden_act(cfg: &NetConfig, a: f64) -> f64 {
    match cfg.hidden {
        HiddenActivation::Relu => a.max(0.0),
        HiddenActivation::Sigmoid => sigmoid(a),
    }
}

/// Derivative of the hidden activation with respect to its pre-activation.
/// ReLU's derivative at exactly zero is taken as 0.
fn hidden_act_prime(cfg: &NetConfig, a: f64, h: f64) -> f64 {
    match cfg.hidden {
        HiddenActivation::Relu => {
            if a > 0.0 {
                1.0
            } else {
                0.0
            }
        }
        HiddenActivation::Sigmoid => h * (1.0 - h),
    }
}

/// Network output for one input pair.
pub fn forward(w: &[f64], input: [f64; 2], cfg: &NetConfig) -> f64 {
    assert_eq!(w.len(), WEIGHT_COUNT, "expected 9 weights");
    let [x1, x2] = input;
    let h1 = hidden_act(cfg, w[0] * x1 + w[1] * x2 + w[2]);
    let h2 = hidden_act(cfg, w[3] * x1 + w[4] * x2 + w[5]);
    sigmoid(w[6] * h1 + w[7] * h2 + w[8])
}

/// Outputs over all four truth-table rows, in dataset order.
pub fn outputs(w: &[f64], data: &XorDataset, cfg: &NetConfig) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (slot, (input, _)) in out.iter_mut().zip(data.rows()) {
        *slot = forward(w, *input, cfg);
    }
    out
}

/// Full-batch loss over the four rows.
///
/// Squared error is `1/2 * sum (y - t)^2`. Cross-entropy is
/// `-sum [t*ln(y) + (1-t)*ln(1-y)]` with `y` clamped away from 0 and 1 by
/// [`CROSS_ENTROPY_CLAMP`], so the value is finite even for fully saturated
/// outputs.
pub fn loss(w: &[f64], data: &XorDataset, cfg: &NetConfig) -> f64 {
    let mut total = 0.0;
    for (input, t) in data.rows() {
        let y = forward(w, *input, cfg);
        match cfg.loss {
            LossKind::SquaredError => {
                total += 0.5 * (y - t) * (y - t);
            }
            LossKind::CrossEntropy => {
                let y = y.clamp(CROSS_ENTROPY_CLAMP, 1.0 - CROSS_ENTROPY_CLAMP);
                total -= t * y.ln() + (1.0 - t) * (1.0 - y).ln();
            }
        }
    }
    total
}

/// Analytic full-batch gradient of [`loss`] with respect to the nine
/// weights. This is the gradient of the unclamped cross-entropy; the clamp
/// in [`loss`] only guards the reported value in saturated regions.
pub fn gradient(w: &[f64], data: &XorDataset, cfg: &NetConfig) -> [f64; WEIGHT_COUNT] {
    assert_eq!(w.len(), WEIGHT_COUNT, "expected 9 weights");
    let mut g = [0.0; WEIGHT_COUNT];
    for ([x1, x2], t) in data.rows() {
        let a1 = w[0] * x1 + w[1] * x2 + w[2];
        let a2 = w[3] * x1 + w[4] * x2 + w[5];
        let h1 = hidden_act(cfg, a1);
        let h2 = hidden_act(cfg, a2);
        let y = sigmoid(w[6] * h1 + w[7] * h2 + w[8]);

        // dL/dz for the output pre-activation z. For cross-entropy the
        // sigmoid derivative cancels: d/dz = y - t. For squared error it
        // stays: (y - t) * y * (1 - y).
        let dz = match cfg.loss {
            LossKind::CrossEntropy => y - t,
            LossKind::SquaredError => (y - t) * y * (1.0 - y),
        };

        g[6] += dz * h1;
        g[7] += dz * h2;
        g[8] += dz;

        let da1 = dz * w[6] * hidden_act_prime(cfg, a1, h1);
        g[0] += da1 * x1;
        g[1] += da1 * x2;
        g[2] += da1;

        let da2 = dz * w[7] * hidden_act_prime(cfg, a2, h2);
        g[3] += da2 * x1;
        g[4] += da2 * x2;
        g[5] += da2;
    }
    g
}

/// The black-box training objective: loss as a function of the weight
/// vector. This is what MOST and the GA minimize.
#[derive(Debug, Clone)]
pub struct XorObjective {
    data: XorDataset,
    net: NetConfig,
}

impl XorObjective {
    pub fn new(data: XorDataset, net: NetConfig) -> Self {
        Self { data, net }
    }

    pub fn data(&self) -> &XorDataset {
        &self.data
    }

    pub fn net(&self) -> &NetConfig {
        &self.net
    }
}

impl Objective for XorObjective {
    fn dim(&self) -> usize {
        WEIGHT_COUNT
    }

    fn eval(&self, point: &[f64]) -> f64 {
        loss(point, &self.data, &self.net)
    }
}

/// The standard training box: `[-50, 50]` per weight.
pub fn weight_space() -> SearchSpace {
    SearchSpace::uniform(WEIGHT_COUNT, -WEIGHT_BOUND, WEIGHT_BOUND)
        .expect("static bounds are valid")
}

/// Writes weight vectors as 9-column CSV rows (header `w1..w9`), full f64
/// precision.
pub fn write_weights_csv<W: Write>(weights: &[Vec<f64>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record((1..=WEIGHT_COUNT).map(|i| format!("w{i}")))?;
    for row in weights {
        if row.len() != WEIGHT_COUNT {
            return Err(Error::InvalidConfig(format!(
                "weight row has {} values, expected {WEIGHT_COUNT}",
                row.len()
            )));
        }
        w.write_record(row.iter().map(|&v| fmt_f64(v)))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads weight vectors written by [`write_weights_csv`].
pub fn read_weights_csv<R: Read>(input: R) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::Reader::from_reader(input);
    if reader.headers()?.len() != WEIGHT_COUNT {
        return Err(Error::MalformedTrace(format!(
            "weight CSV must have {WEIGHT_COUNT} columns"
        )));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row = record
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::MalformedTrace(format!("bad weight field {s:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != WEIGHT_COUNT {
            return Err(Error::MalformedTrace(format!(
                "weight row has {} values, expected {WEIGHT_COUNT}",
                row.len()
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomSource;
    use crate::space::Interval;

    /// A hand-built sigmoid-hidden solution of the inverted truth table:
    /// h1 detects OR, h2 detects AND, and the output fires unless OR holds
    /// without AND. Saturation scale 20 pushes outputs within 5e-5 of the
    /// targets.
    const PAPER_SOLUTION: [f64; 9] = [20.0, 20.0, -10.0, 20.0, 20.0, -30.0, -20.0, 20.0, 10.0];

    /// Same hidden layer, negated output layer: solves standard XOR.
    const STANDARD_SOLUTION: [f64; 9] = [20.0, 20.0, -10.0, 20.0, 20.0, -30.0, 20.0, -20.0, -10.0];

    #[test]
    fn zero_weights_give_half_everywhere() {
        let w = [0.0; 9];
        for cfg in [
            NetConfig::relu_cross_entropy(),
            NetConfig::sigmoid_squared_error(),
        ] {
            for (input, _) in XorDataset::paper().rows() {
                assert_eq!(forward(&w, *input, &cfg), 0.5);
            }
        }
    }

    #[test]
    fn zero_weight_losses_have_known_values() {
        let w = [0.0; 9];
        let data = XorDataset::paper();
        let se = loss(&w, &data, &NetConfig::sigmoid_squared_error());
        assert_eq!(se, 0.5, "four rows at squared distance 0.25 each, halved");
        let ce = loss(&w, &data, &NetConfig::relu_cross_entropy());
        assert!(
            (ce - 4.0 * std::f64::consts::LN_2).abs() < 1e-12,
            "cross-entropy at y=1/2 is 4*ln2, got {ce}"
        );
    }

    #[test]
    fn zero_weights_relu_cross_entropy_gradient_vanishes() {
        // Hidden activations are relu(0)=0 and the output error sums to
        // zero across the balanced targets, so every component is zero.
        let g = gradient(
            &[0.0; 9],
            &XorDataset::paper(),
            &NetConfig::relu_cross_entropy(),
        );
        assert_eq!(g, [0.0; 9]);
    }

    #[test]
    fn hand_built_solutions_hit_their_truth_tables() {
        let cfg = NetConfig::sigmoid_squared_error();
        let pairs = [
            (PAPER_SOLUTION, XorDataset::paper()),
            (STANDARD_SOLUTION, XorDataset::standard()),
        ];
        for (w, data) in pairs {
            for (input, t) in data.rows() {
                let y = forward(&w, *input, &cfg);
                assert!(
                    (y - t).abs() < 0.05,
                    "input {input:?}: output {y} too far from target {t}"
                );
            }
            assert!(loss(&w, &data, &cfg) < 1e-7);
        }
    }

    #[test]
    fn near_saturated_solution_reaches_tiny_outputs() {
        // Scaling the hand solution's output layer to the weight bound
        // saturates the 0-target outputs to ~1e-9 territory, confirming the
        // box [-50, 50] contains essentially perfect solutions.
        let mut w = PAPER_SOLUTION;
        for slot in &mut w[6..9] {
            *slot *= 2.5; // -50/50/25
        }
        let y = outputs(
            &w,
            &XorDataset::paper(),
            &NetConfig::sigmoid_squared_error(),
        );
        assert!(y[1] < 1e-9 && y[2] < 1e-9, "0-target outputs: {y:?}");
        assert!(y[0] > 1.0 - 1e-9 && y[3] > 1.0 - 1e-9);
    }

    #[test]
    fn sigmoid_outputs_stay_in_the_unit_interval() {
        let cfg = NetConfig::sigmoid_squared_error();
        // At the corners of the weight box the output pre-activation hits
        // +/-150 and the sigmoid rounds to exactly 0.0 or 1.0 in f64, so
        // only the closed interval can be asserted there.
        let corners = [[50.0; WEIGHT_COUNT], [-50.0; WEIGHT_COUNT]];
        for w in corners {
            for (input, _) in XorDataset::paper().rows() {
                let y = forward(&w, *input, &cfg);
                assert!((0.0..=1.0).contains(&y), "output {y} left [0,1]");
            }
        }
        // For moderate weights (|w| <= 10 keeps every pre-activation within
        // +/-30, where 1 - sigmoid is still representable) the output is
        // strictly inside.
        let mut rng = RandomSource::new(11);
        let box10 = Interval::new(-10.0, 10.0).unwrap();
        for _ in 0..50 {
            let w: Vec<f64> = (0..WEIGHT_COUNT)
                .map(|_| rng.sample_uniform(box10))
                .collect();
            for (input, _) in XorDataset::paper().rows() {
                let y = forward(&w, *input, &cfg);
                assert!(y > 0.0 && y < 1.0, "output {y} left (0,1) at {w:?}");
            }
        }
    }

    #[test]
    fn hidden_unit_swap_is_a_symmetry() {
        let w = [0.3, -1.2, 0.7, 2.0, 0.1, -0.4, 1.5, -2.2, 0.9];
        let swapped = [2.0, 0.1, -0.4, 0.3, -1.2, 0.7, -2.2, 1.5, 0.9];
        for cfg in [
            NetConfig::relu_cross_entropy(),
            NetConfig::sigmoid_squared_error(),
        ] {
            for (input, _) in XorDataset::paper().rows() {
                assert_eq!(
                    forward(&w, *input, &cfg),
                    forward(&swapped, *input, &cfg),
                    "swapping hidden units must not change the output"
                );
            }
        }
    }

    #[test]
    fn losses_are_nonnegative() {
        let ws = [
            [0.0; 9],
            PAPER_SOLUTION,
            [1.0, -2.0, 3.0, -4.0, 5.0, -6.0, 7.0, -8.0, 9.0],
        ];
        for w in ws {
            for data in [XorDataset::paper(), XorDataset::standard()] {
                for cfg in [
                    NetConfig::relu_cross_entropy(),
                    NetConfig::sigmoid_squared_error(),
                ] {
                    assert!(loss(&w, &data, &cfg) >= 0.0);
                }
            }
        }
    }

    fn central_difference(w: &[f64], data: &XorDataset, cfg: &NetConfig) -> [f64; 9] {
        let h = 1e-6;
        let mut fd = [0.0; 9];
        let mut probe = w.to_vec();
        for i in 0..9 {
            probe[i] = w[i] + h;
            let plus = loss(&probe, data, cfg);
            probe[i] = w[i] - h;
            let minus = loss(&probe, data, cfg);
            probe[i] = w[i];
            fd[i] = (plus - minus) / (2.0 * h);
        }
        fd
    }

    fn relative_error(a: f64, b: f64) -> f64 {
        (a - b).abs() / (a.abs() + b.abs()).max(1e-8)
    }

    /// True if any hidden pre-activation sits within `margin` of the ReLU
    /// kink on any row, where finite differences are meaningless.
    fn near_relu_kink(w: &[f64], data: &XorDataset, margin: f64) -> bool {
        data.rows().iter().any(|([x1, x2], _)| {
            let a1 = w[0] * x1 + w[1] * x2 + w[2];
            let a2 = w[3] * x1 + w[4] * x2 + w[5];
            a1.abs() < margin || a2.abs() < margin
        })
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let data = XorDataset::paper();
        let draw_box = Interval::new(-2.0, 2.0).unwrap();
        for cfg in [
            NetConfig::sigmoid_squared_error(),
            NetConfig::relu_cross_entropy(),
        ] {
            let mut rng = RandomSource::new(2024);
            let mut checked = 0;
            while checked < 20 {
                let w: Vec<f64> = (0..9).map(|_| rng.sample_uniform(draw_box)).collect();
                if cfg.hidden == HiddenActivation::Relu && near_relu_kink(&w, &data, 1e-3) {
                    continue;
                }
                let analytic = gradient(&w, &data, &cfg);
                let numeric = central_difference(&w, &data, &cfg);
                for i in 0..9 {
                    let rel = relative_error(analytic[i], numeric[i]);
                    assert!(
                        rel < 1e-5,
                        "{cfg:?} weight {i}: analytic {} vs numeric {} (rel {rel})",
                        analytic[i],
                        numeric[i]
                    );
                }
                checked += 1;
            }
        }
    }

    #[test]
    fn objective_adapter_matches_loss() {
        let obj = XorObjective::new(XorDataset::paper(), NetConfig::sigmoid_squared_error());
        assert_eq!(obj.dim(), 9);
        let w = [0.0; 9];
        assert_eq!(obj.eval(&w), 0.5);
        let space = weight_space();
        assert_eq!(space.dim(), 9);
        assert!(space.contains(&PAPER_SOLUTION));
    }

    #[test]
    fn weights_csv_round_trips() {
        let rows = vec![PAPER_SOLUTION.to_vec(), vec![0.1; 9]];
        let mut buf = Vec::new();
        write_weights_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("w1,w2,w3,w4,w5,w6,w7,w8,w9"));
        let parsed = read_weights_csv(&buf[..]).unwrap();
        assert_eq!(parsed, rows);
    }

    #[test]
    fn weights_csv_rejects_bad_shapes() {
        assert!(write_weights_csv(&[vec![1.0; 8]], Vec::new()).is_err());
        assert!(read_weights_csv("a,b\n1,2\n".as_bytes()).is_err());
        assert!(
            read_weights_csv("w1,w2,w3,w4,w5,w6,w7,w8,w9\n1,2,x,4,5,6,7,8,9\n".as_bytes()).is_err()
        );
    }

    #[test]
    fn conventions_round_trip_names() {
        for tc in [TargetConvention::Paper, TargetConvention::Standard] {
            assert_eq!(TargetConvention::from_name(tc.name()), Some(tc));
        }
        assert_eq!(TargetConvention::from_name("xnor"), None);
        assert_eq!(
            XorDataset::paper().rows()[0],
            ([0.0, 0.0], 1.0),
            "inverted table: (0,0) maps to 1"
        );
        assert_eq!(XorDataset::standard().rows()[0], ([0.0, 0.0], 0.0));
    }
}
