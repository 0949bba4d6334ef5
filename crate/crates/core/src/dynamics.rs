//! Sampled input-additive coupled cell systems with one-dimensional cells.
//!
//! Cell `j` evolves by `x_j' = g(x_j) + sum_i w_ji h(x_j, x_i)`. Each system
//! class fixes the form of `h`, and the odd classes also require `g` odd.
//! Systems are integrated with fixed-step RK4 to certify flow invariance of
//! generalized polydiagonals, to compare full and quotient dynamics, and to
//! recover the linear members of each class.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariance::{classify, SystemClass};
use crate::matrix::Matrix;
use crate::network::{laplacian, Network};
use crate::partition::TaggedPartition;
use crate::quotient::{quotient, QuotientKind, QuotientNetwork};
use crate::rational::{to_f64, Rational};

/// Univariate polynomial, `coeffs[k]` multiplies `x^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Poly1 {
    pub coeffs: Vec<f64>,
}

impl Poly1 {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|c| *c == 0.0)
    }
}

/// Bivariate polynomial as `(a, b, c)` terms `c x^a y^b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Poly2 {
    pub terms: Vec<(u32, u32, f64)>,
}

impl Poly2 {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(a, b, c)| c * x.powi(a as i32) * y.powi(b as i32))
            .sum()
    }

    fn coefficient(&self, a: u32, b: u32) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.0 == a && t.1 == b)
            .map(|t| t.2)
            .sum()
    }
}

/// Coupling function in the form required by the class.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum HSpec {
    /// `h(x, y)`
    General { h: Poly2 },
    /// `(x - y) h1(x, y)`
    Difference { h1: Poly2 },
    /// `(x - y) m(x^2, y^2)`
    OddDifference { m: Poly2 },
    /// `beta (x - y)`
    Linear { beta: f64 },
    /// `y m(x^2, y^2)`
    EvenOdd { m: Poly2 },
}

impl HSpec {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            HSpec::General { h } => h.eval(x, y),
            HSpec::Difference { h1 } => (x - y) * h1.eval(x, y),
            HSpec::OddDifference { m } => (x - y) * m.eval(x * x, y * y),
            HSpec::Linear { beta } => beta * (x - y),
            HSpec::EvenOdd { m } => y * m.eval(x * x, y * y),
        }
    }

    /// A constant `K` with `|h_d(x, y)| <= K R^d` for `|x|, |y| <= R`, where
    /// `h_d` is the homogeneous part of degree `d`.
    fn top_degree_bound(&self, d: u32) -> f64 {
        let sum = |p: &Poly2, t: u32| -> f64 {
            p.terms
                .iter()
                .filter(|x| x.0 + x.1 == t)
                .map(|x| x.2.abs())
                .sum()
        };
        match self {
            HSpec::General { h } => sum(h, d),
            HSpec::Difference { h1 } => 2.0 * sum(h1, d - 1),
            HSpec::OddDifference { m } if d % 2 == 1 => 2.0 * sum(m, (d - 1) / 2),
            HSpec::EvenOdd { m } if d % 2 == 1 => sum(m, (d - 1) / 2),
            HSpec::Linear { beta } if d == 1 => 2.0 * beta.abs(),
            _ => 0.0,
        }
    }

    /// Partial derivatives at the origin.
    fn linear_part(&self) -> (f64, f64) {
        match self {
            HSpec::General { h } => (h.coefficient(1, 0), h.coefficient(0, 1)),
            HSpec::Difference { h1 } => {
                let c = h1.coefficient(0, 0);
                (c, -c)
            }
            HSpec::OddDifference { m } => {
                let c = m.coefficient(0, 0);
                (c, -c)
            }
            HSpec::Linear { beta } => (*beta, -beta),
            HSpec::EvenOdd { m } => (0.0, m.coefficient(0, 0)),
        }
    }
}

/// An admissible system of one class on a network.
#[derive(Clone, Debug, Serialize)]
pub struct SystemSpec {
    #[serde(skip)]
    pub network: Network,
    pub class: SystemClass,
    pub g: Poly1,
    pub h: HSpec,
    pub seed: u64,
    /// Amounts subtracted from the linear and leading odd coefficients of
    /// `g` by [`SystemSpec::stabilize`].
    pub linear_shift: f64,
    pub leading_shift: f64,
    #[serde(skip)]
    edges: Vec<(usize, usize, f64)>,
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-1.0..=1.0)
}

fn sample_poly2(rng: &mut ChaCha8Rng, max_total: i64) -> Poly2 {
    let mut terms = Vec::new();
    for total in 0..=max_total.max(0) as u32 {
        for a in 0..=total {
            terms.push((a, total - a, uniform(rng)));
        }
    }
    Poly2 { terms }
}

fn network_edges(net: &Network) -> Vec<(usize, usize, f64)> {
    let n = net.n();
    let mut edges = Vec::new();
    for to in 0..n {
        for from in 0..n {
            let w = net.weight(to, from);
            if !w.is_zero() {
                edges.push((to, from, to_f64(w)));
            }
        }
    }
    edges
}

/// Random system of `class` with coefficients uniform in [-1, 1] and total
/// degrees of `g` and `h` at most `degree_bound`. Deterministic in `seed`.
pub fn sample_system(
    net: &Network,
    class: SystemClass,
    seed: u64,
    degree_bound: u32,
) -> Result<SystemSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(net, class, &mut rng, seed, degree_bound)
}

fn sample_with(
    net: &Network,
    class: SystemClass,
    rng: &mut ChaCha8Rng,
    seed: u64,
    degree_bound: u32,
) -> Result<SystemSpec> {
    if degree_bound == 0 {
        return Err(Error::InvalidArgument(
            "degree bound must be at least 1".into(),
        ));
    }
    let d = degree_bound as i64;
    let g = Poly1 {
        coeffs: (0..=d)
            .map(|k| {
                if class.requires_odd_g() && k % 2 == 0 {
                    0.0
                } else {
                    uniform(rng)
                }
            })
            .collect(),
    };
    // m(x^2, y^2) terms of total degree t contribute degree 2t + 1
    let h = match class {
        SystemClass::G => HSpec::General {
            h: sample_poly2(rng, d),
        },
        SystemClass::G0 => HSpec::Difference {
            h1: sample_poly2(rng, d - 1),
        },
        SystemClass::Godd => HSpec::OddDifference {
            m: sample_poly2(rng, (d - 1) / 2),
        },
        SystemClass::Gl => HSpec::Linear { beta: uniform(rng) },
        SystemClass::Geo => HSpec::EvenOdd {
            m: sample_poly2(rng, (d - 1) / 2),
        },
    };
    Ok(SystemSpec {
        network: net.clone(),
        class,
        g,
        h,
        seed,
        linear_shift: 0.0,
        leading_shift: 0.0,
        edges: network_edges(net),
    })
}

impl SystemSpec {
    pub fn n(&self) -> usize {
        self.network.n()
    }

    /// Builds a system from explicit functions.
    pub fn new(net: &Network, class: SystemClass, g: Poly1, h: HSpec) -> Self {
        SystemSpec {
            network: net.clone(),
            class,
            g,
            h,
            seed: 0,
            linear_shift: 0.0,
            leading_shift: 0.0,
            edges: network_edges(net),
        }
    }

    /// Shifts two coefficients of `g` so that sampled systems stay bounded
    /// and contract near the origin. The linear coefficient is lowered until
    /// the linearization at 0 has logarithmic infinity-norm at most -1, so
    /// round-off transverse to an invariant subspace decays. When `g` has odd
    /// degree, its leading coefficient is lowered until it dominates the
    /// top-degree part of the coupling on the largest cell, which rules out
    /// finite-time blow-up. Both shifts are odd terms, so the class is kept.
    pub fn stabilize(&mut self) {
        let n = self.n();
        if self.g.coeffs.len() < 2 {
            self.g.coeffs.resize(2, 0.0);
        }
        let (hx, hy) = self.h.linear_part();
        let mut diag = vec![self.g.coeffs[1]; n];
        let mut off = vec![0.0; n];
        let mut abs_in = vec![0.0; n];
        for &(to, from, w) in &self.edges {
            diag[to] += hx * w;
            abs_in[to] += w.abs();
            if to == from {
                diag[to] += hy * w;
            } else {
                off[to] += (hy * w).abs();
            }
        }
        let mu = (0..n)
            .map(|i| diag[i] + off[i])
            .fold(f64::NEG_INFINITY, f64::max);
        if mu > -1.0 {
            self.g.coeffs[1] -= mu + 1.0;
            self.linear_shift += mu + 1.0;
        }
        let d = self.g.coeffs.len() - 1;
        if d >= 3 && d % 2 == 1 {
            let valency = abs_in.iter().cloned().fold(0.0, f64::max);
            let target = -(1.0 + valency * self.h.top_degree_bound(d as u32));
            let current = self.g.coeffs[d];
            if current > target {
                self.g.coeffs[d] = target;
                self.leading_shift += current - target;
            }
        }
    }

    pub fn coupling(&self, x: f64, y: f64) -> f64 {
        self.h.eval(x, y)
    }

    pub fn internal(&self, x: f64) -> f64 {
        self.g.eval(x)
    }

    pub fn vector_field_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, &xi) in out.iter_mut().zip(x) {
            *o = self.g.eval(xi);
        }
        for &(to, from, w) in &self.edges {
            out[to] += w * self.h.eval(x[to], x[from]);
        }
    }
}

/// `g(x_j) + sum_i w_ji h(x_j, x_i)` for every cell.
pub fn vector_field(sys: &SystemSpec, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != sys.n() {
        return Err(Error::LengthMismatch {
            expected: sys.n(),
            found: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite state".into()));
    }
    let mut out = vec![0.0; x.len()];
    sys.vector_field_into(x, &mut out);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub dt: f64,
    pub steps: usize,
    /// Set when the state left the blow-up bound; the trajectory stops there.
    pub blew_up: bool,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.states
            .last()
            .expect("trajectories hold the initial state")
    }
}

pub const DEFAULT_BLOWUP_BOUND: f64 = 1e6;

fn check_run(dt: f64, steps: usize, x0: &[f64]) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument("dt must be positive".into()));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite initial state".into()));
    }
    Ok(())
}

/// Classical fourth-order Runge-Kutta with a fixed step.
pub fn rk4(
    f: impl Fn(&[f64], &mut [f64]),
    x0: &[f64],
    dt: f64,
    steps: usize,
    blowup_bound: f64,
) -> Result<Trajectory> {
    check_run(dt, steps, x0)?;
    let n = x0.len();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x0.to_vec());
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
    );
    let mut x = x0.to_vec();
    let mut blew_up = false;
    for step in 1..=steps {
        f(&x, &mut k1);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * dt * k1[i];
        }
        f(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * dt * k2[i];
        }
        f(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = x[i] + dt * k3[i];
        }
        f(&tmp, &mut k4);
        for i in 0..n {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if x.iter().any(|v| !v.is_finite() || v.abs() > blowup_bound) {
            blew_up = true;
            break;
        }
        times.push(step as f64 * dt);
        states.push(x.clone());
    }
    Ok(Trajectory {
        times,
        states,
        dt,
        steps,
        blew_up,
    })
}

pub fn integrate(sys: &SystemSpec, x0: &[f64], dt: f64, steps: usize) -> Result<Trajectory> {
    integrate_bounded(sys, x0, dt, steps, DEFAULT_BLOWUP_BOUND)
}

pub fn integrate_bounded(
    sys: &SystemSpec,
    x0: &[f64],
    dt: f64,
    steps: usize,
    blowup_bound: f64,
) -> Result<Trajectory> {
    if x0.len() != sys.n() {
        return Err(Error::LengthMismatch {
            expected: sys.n(),
            found: x0.len(),
        });
    }
    rk4(
        |x, out| sys.vector_field_into(x, out),
        x0,
        dt,
        steps,
        blowup_bound,
    )
}

/// Settings shared by the simulation checks.
#[derive(Clone, Debug, Serialize)]
pub struct SimulationOptions {
    pub seed: u64,
    pub trials: usize,
    pub dt: f64,
    pub horizon: f64,
    pub tol: f64,
    pub degree_bound: u32,
    /// Largest Euclidean norm of an initial state.
    pub initial_norm: f64,
    pub blowup_bound: f64,
    /// Redraws with half the initial norm after a blow-up.
    pub max_retries: usize,
    /// Apply [`SystemSpec::stabilize`] to every sample.
    pub stabilize: bool,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions {
            seed: 1,
            trials: 5,
            dt: 1e-3,
            horizon: 10.0,
            tol: 1e-8,
            degree_bound: 3,
            initial_norm: 0.5,
            blowup_bound: DEFAULT_BLOWUP_BOUND,
            max_retries: 3,
            stabilize: true,
        }
    }
}

impl SimulationOptions {
    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round().max(1.0) as usize
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if !(self.dt > 0.0 && self.horizon > 0.0) {
            return Err(Error::InvalidArgument(
                "dt and horizon must be positive".into(),
            ));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidArgument(
                "tolerance must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Generator for trial `trial` of a run seeded with `seed`.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Random point of the subspace of `p` with Euclidean norm at most `norm`.
fn initial_state(rng: &mut ChaCha8Rng, p: &TaggedPartition, norm: f64) -> Vec<f64> {
    let y: Vec<f64> = (0..p.p()).map(|_| uniform(rng)).collect();
    let x = p.lift(&y);
    let len = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if len > norm {
        x.iter().map(|v| v * norm / len).collect()
    } else {
        x
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialResult {
    pub trial: usize,
    pub max_residual: f64,
    pub retries: usize,
    pub blew_up: bool,
    pub system: SystemSpec,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowInvarianceReport {
    pub partition: TaggedPartition,
    pub class: SystemClass,
    pub pass: bool,
    pub max_residual: f64,
    pub tol: f64,
    pub options: SimulationOptions,
    pub trials: Vec<TrialResult>,
}

fn run_trial(
    net: &Network,
    p: &TaggedPartition,
    class: SystemClass,
    opts: &SimulationOptions,
    trial: usize,
) -> Result<TrialResult> {
    let mut rng = trial_rng(opts.seed, trial);
    let mut sys = sample_with(net, class, &mut rng, opts.seed, opts.degree_bound)?;
    if opts.stabilize {
        sys.stabilize();
    }
    let mut norm = opts.initial_norm;
    let mut retries = 0;
    loop {
        let x0 = initial_state(&mut rng, p, norm);
        let traj = integrate_bounded(&sys, &x0, opts.dt, opts.steps(), opts.blowup_bound)?;
        let max_residual = traj
            .states
            .iter()
            .map(|x| p.residual(x))
            .fold(0.0, f64::max);
        if !traj.blew_up || retries == opts.max_retries {
            return Ok(TrialResult {
                trial,
                max_residual,
                retries,
                blew_up: traj.blew_up,
                system: sys,
            });
        }
        retries += 1;
        norm /= 2.0;
    }
}

/// Integrates sampled systems of `class` from points of the subspace of `p`
/// and records how far trajectories leave it. PASS when every trial stays
/// within `opts.tol` and none blew up.
pub fn certify_flow_invariance(
    net: &Network,
    p: &TaggedPartition,
    class: SystemClass,
    opts: &SimulationOptions,
) -> Result<FlowInvarianceReport> {
    opts.validate()?;
    if p.n() != net.n() {
        return Err(Error::LengthMismatch {
            expected: net.n(),
            found: p.n(),
        });
    }
    let trials: Vec<TrialResult> = (0..opts.trials)
        .into_par_iter()
        .map(|t| run_trial(net, p, class, opts, t))
        .collect::<Result<_>>()?;
    let max_residual = trials.iter().map(|t| t.max_residual).fold(0.0, f64::max);
    let pass = trials
        .iter()
        .all(|t| !t.blew_up && t.max_residual <= opts.tol);
    Ok(FlowInvarianceReport {
        partition: p.clone(),
        class,
        pass,
        max_residual,
        tol: opts.tol,
        options: opts.clone(),
        trials,
    })
}

/// Quotient whose dynamics the restriction of `class` systems follows.
pub fn quotient_kind_for(p: &TaggedPartition, class: SystemClass) -> Result<QuotientKind> {
    let kind = match (p.is_standard(), class) {
        (true, SystemClass::G | SystemClass::Geo) => QuotientKind::Balanced,
        (true, _) => QuotientKind::Exo,
        (false, SystemClass::Godd) => QuotientKind::OddSymbolic,
        (false, SystemClass::Gl) => QuotientKind::LinearSymbolic,
        (false, SystemClass::Geo) => QuotientKind::EoSymbolic,
        (false, _) => {
            return Err(Error::NotInClass {
                partition: p.to_string(),
                required: format!("a standard partition for {class}"),
            })
        }
    };
    Ok(kind)
}

/// Right-hand side of the restricted equations on the quotient.
pub fn reduced_vector_field(sys: &SystemSpec, q: &QuotientNetwork, y: &[f64], out: &mut [f64]) {
    use crate::quotient::CellTag;
    let p = q.p();
    let w = |i: usize, j: usize| to_f64(q.weight(i, j));
    // quotient rows follow the adapted order; y and out are indexed by class label
    let state = |col: usize| {
        let cell = &q.cells[col];
        match cell.tag {
            CellTag::State => y[cell.class - 1],
            CellTag::NegativeState => -y[cell.class - 1],
            CellTag::ZeroState => 0.0,
        }
    };
    for i in 0..p {
        let yi = state(i);
        let mut v = sys.internal(yi);
        match q.kind {
            QuotientKind::Balanced | QuotientKind::Exo | QuotientKind::EoSymbolic => {
                for j in 0..p {
                    v += w(i, j) * sys.coupling(yi, state(j));
                }
            }
            QuotientKind::OddSymbolic => {
                for col in 0..q.cells.len() {
                    v += w(i, col) * sys.coupling(yi, state(col));
                }
            }
            QuotientKind::LinearSymbolic => {
                for j in (0..p).filter(|&j| j != i) {
                    v += w(i, j) * sys.coupling(state(j), 0.0);
                }
                v += w(i, p) * sys.coupling(yi, 0.0);
            }
        }
        out[q.cells[i].class - 1] = v;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionReport {
    pub partition: TaggedPartition,
    pub class: SystemClass,
    pub quotient_kind: QuotientKind,
    pub pass: bool,
    /// Largest |x(t) - lift(y(t))| over all steps and cells.
    pub max_deviation: f64,
    pub tol: f64,
    pub steps: usize,
    pub system: SystemSpec,
}

/// Integrates the full system from a point of the subspace of `p` and the
/// quotient system from its projection, and compares them at every step.
pub fn restriction_consistency(
    net: &Network,
    p: &TaggedPartition,
    class: SystemClass,
    opts: &SimulationOptions,
) -> Result<RestrictionReport> {
    opts.validate()?;
    let kind = quotient_kind_for(p, class)?;
    let q = quotient(net, p, kind)?;
    let mut rng = trial_rng(opts.seed, 0);
    let mut sys = sample_with(net, class, &mut rng, opts.seed, opts.degree_bound)?;
    if opts.stabilize {
        sys.stabilize();
    }
    let x0 = initial_state(&mut rng, p, opts.initial_norm);
    let y0 = p.project(&x0);
    let steps = opts.steps();
    let full = integrate_bounded(&sys, &x0, opts.dt, steps, opts.blowup_bound)?;
    let reduced = rk4(
        |y, out| reduced_vector_field(&sys, &q, y, out),
        &y0,
        opts.dt,
        steps,
        opts.blowup_bound,
    )?;
    let blew_up = full.blew_up || reduced.blew_up;
    let max_deviation = full
        .states
        .iter()
        .zip(&reduced.states)
        .map(|(x, y)| {
            p.lift(y)
                .iter()
                .zip(x)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    Ok(RestrictionReport {
        partition: p.clone(),
        class,
        quotient_kind: kind,
        pass: !blew_up && full.states.len() == reduced.states.len() && max_deviation <= opts.tol,
        max_deviation,
        tol: opts.tol,
        steps,
        system: sys,
    })
}

/// Linear member of a class recovered as a combination of fixed matrices.
#[derive(Clone, Debug, Serialize)]
pub struct LinearSpanReport {
    pub class: SystemClass,
    /// Names of the spanning matrices, e.g. `["id", "L"]`.
    pub basis: Vec<String>,
    pub coefficients: Vec<f64>,
    /// Coefficients predicted from the sampled functions.
    pub expected: Vec<f64>,
    pub residual: f64,
    pub pass: bool,
    /// Whether span{id, L} equals span{id, W}.
    pub spans_coincide: bool,
    pub regular: bool,
}

/// Samples a linear member of `class` (degree one, no constant terms),
/// reads off its matrix and fits it by least squares.
pub fn linear_span_check(net: &Network, class: SystemClass, seed: u64) -> Result<LinearSpanReport> {
    let n = net.n();
    let mut sys = sample_system(net, class, seed, 1)?;
    sys.g.coeffs[0] = 0.0;
    if let HSpec::General { h } = &mut sys.h {
        h.terms.retain(|t| t.0 + t.1 > 0);
    }
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        let col = vector_field(&sys, &e)?;
        for i in 0..n {
            jac[(i, k)] = col[i];
        }
    }
    let w = net.adjacency().to_f64();
    let l = laplacian(net).to_f64();
    let id = DMatrix::<f64>::identity(n, n);
    let diag = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        net.valencies().iter().map(to_f64),
    ));
    let a = sys.g.coeffs[1];
    let (hx, hy) = sys.h.linear_part();
    let (basis, names, expected): (Vec<&DMatrix<f64>>, Vec<&str>, Vec<f64>) = match class {
        SystemClass::G => (vec![&id, &diag, &w], vec!["id", "D", "W"], vec![a, hx, hy]),
        SystemClass::Geo => (vec![&id, &w], vec!["id", "W"], vec![a, hy]),
        _ => (vec![&id, &l], vec!["id", "L"], vec![a, hx]),
    };
    let design = DMatrix::from_fn(n * n, basis.len(), |r, c| basis[c][(r % n, r / n)]);
    let target = DVector::from_fn(n * n, |r, _| jac[(r % n, r / n)]);
    let svd = design.clone().svd(true, true);
    let coef = svd
        .solve(&target, 1e-12)
        .map_err(|e| Error::Numerical(format!("least squares failed: {e}")))?;
    let residual = (&design * &coef - &target).amax();
    let regular = net.regular_valency().is_some();
    Ok(LinearSpanReport {
        class,
        basis: names.iter().map(|s| s.to_string()).collect(),
        coefficients: coef.iter().cloned().collect(),
        expected,
        residual,
        pass: residual < 1e-12,
        spans_coincide: spans_coincide(net),
        regular,
    })
}

/// Exact test that span{id, L} = span{id, W}.
pub fn spans_coincide(net: &Network) -> bool {
    let n = net.n();
    let flat = |m: &Matrix| m.entries().cloned().collect::<Vec<Rational>>();
    let id = flat(&Matrix::identity(n));
    let w = flat(net.adjacency());
    let l = flat(&laplacian(net));
    let r_il = rank(&[id.clone(), l.clone()]);
    rank(&[id.clone(), w.clone()]) == r_il && rank(&[id, l, w]) == r_il
}

fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Which classes to check for a partition, from the exact classification.
pub fn predicted_classes(
    net: &Network,
    p: &TaggedPartition,
) -> std::collections::BTreeSet<SystemClass> {
    crate::invariance::classes_from_flags(p, &classify(net, p))
}
