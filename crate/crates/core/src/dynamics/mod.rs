//! Projected primal-dual dynamics for standard-form LPs.
//!
//! With `c` the maximization-sense objective, the state `(X, Z)` evolves as
//!
//! ```text
//! dX/dt = c − Gᵀ(Z + k·dZ/dt)
//! dZ/dt = G(X + k·dX/dt) − p
//! ```
//!
//! where sign-constrained components of `X` and all of `Z` are kept
//! nonnegative. A coordinate sitting at zero whose derivative points outward
//! is clamped: its derivative is zero and it drops out of the coupling. The
//! implicit pair is resolved exactly by solving
//! `(I + k²G_RFᵀG_RF)·dX_F = rhs_F` for the free primal set `F` and free dual
//! set `R`; the Cholesky factor for each `(F, R)` pair is cached.
//!
//! Equilibria of this system are exactly primal-dual optimal pairs.

mod stability;
mod trace;

pub use stability::{analyze_stability, extreme_eigenvalues_iterative, recommend_k, KRecommendation, StabilityReport};
pub use trace::{ConvergenceTrace, TraceSpec};

use std::collections::HashMap;

use nalgebra::{Cholesky, DVector, Dyn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{check_kkt, KktReport, StandardFormLP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    Euler,
    Rk4,
    Rk45,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMode {
    Zeros,
    RandomUniform { low: f64, high: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    /// Coupling gain.
    pub k: f64,
    /// Fixed step for Euler/RK4, initial step for RK45.
    pub step_size: f64,
    pub integrator: Integrator,
    pub max_time: f64,
    /// Stop when both projected derivative ∞-norms fall below this.
    pub convergence_tol: f64,
    pub trace_stride: usize,
    pub rng_seed: u64,
    pub init_mode: InitMode,
    /// Local error tolerance (absolute and relative) for RK45.
    pub adaptive_tol: f64,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            k: 1.0,
            step_size: 1e-3,
            integrator: Integrator::Rk4,
            max_time: 1e4,
            convergence_tol: 1e-6,
            trace_stride: 100,
            rng_seed: 0,
            init_mode: InitMode::Zeros,
            adaptive_tol: 1e-9,
        }
    }
}

impl DynamicsConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("k", self.k),
            ("step_size", self.step_size),
            ("max_time", self.max_time),
            ("convergence_tol", self.convergence_tol),
            ("adaptive_tol", self.adaptive_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.trace_stride == 0 {
            return Err(Error::InvalidArgument("trace_stride must be at least 1".into()));
        }
        if let InitMode::RandomUniform { low, high } = self.init_mode {
            if !(low < high) {
                return Err(Error::InvalidArgument(format!("empty init range [{low}, {high})")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsState {
    pub x: DVector<f64>,
    pub z: DVector<f64>,
    /// Projected derivative at `(x, z)`.
    pub dx: DVector<f64>,
    pub dz: DVector<f64>,
    pub t: f64,
}

impl DynamicsState {
    fn is_finite(&self) -> bool {
        self.x.iter().chain(self.z.iter()).chain(self.dx.iter()).chain(self.dz.iter()).all(|v| v.is_finite())
    }

    pub fn derivative_norms(&self) -> (f64, f64) {
        (self.dx.amax(), self.dz.amax())
    }
}

/// Evaluates the projected derivative, caching one factorization per active set.
pub struct DerivativeEvaluator<'a> {
    lp: &'a StandardFormLP,
    c: DVector<f64>,
    k: f64,
    nonneg: Vec<bool>,
    free_x: Vec<bool>,
    free_z: Vec<bool>,
    cache: HashMap<Vec<u64>, Option<Cholesky<f64, Dyn>>>,
    factorizations: usize,
}

const CACHE_LIMIT: usize = 256;
const ACTIVE_SET_ITERS: usize = 64;

impl<'a> DerivativeEvaluator<'a> {
    pub fn new(lp: &'a StandardFormLP, k: f64) -> Self {
        Self {
            lp,
            c: lp.max_objective(),
            k,
            nonneg: lp.sign_mask().iter().map(|s| s.is_nonnegative()).collect(),
            free_x: vec![true; lp.n_vars()],
            free_z: vec![true; lp.n_cons()],
            cache: HashMap::new(),
            factorizations: 0,
        }
    }

    /// Number of distinct factorizations computed so far.
    pub fn factorizations(&self) -> usize {
        self.factorizations
    }

    fn key(fx: &[bool], fz: &[bool]) -> Vec<u64> {
        let mut key = vec![0u64; (fx.len() + fz.len()).div_ceil(64)];
        for (i, f) in fx.iter().chain(fz).enumerate() {
            if *f {
                key[i / 64] |= 1 << (i % 64);
            }
        }
        key
    }

    fn solve(&mut self, rhs: &DVector<f64>) -> DVector<f64> {
        let n = self.lp.n_vars();
        let cols: Vec<usize> = (0..n).filter(|&i| self.free_x[i]).collect();
        let mut out = DVector::zeros(n);
        if cols.is_empty() {
            return out;
        }
        let key = Self::key(&self.free_x, &self.free_z);
        if !self.cache.contains_key(&key) {
            if self.cache.len() >= CACHE_LIMIT {
                self.cache.clear();
            }
            let rows: Vec<usize> = (0..self.lp.n_cons()).filter(|&j| self.free_z[j]).collect();
            let sub = self.lp.constraint_matrix().select_rows(&rows).select_columns(&cols);
            let mut a = sub.tr_mul(&sub) * (self.k * self.k);
            for i in 0..cols.len() {
                a[(i, i)] += 1.0;
            }
            self.factorizations += 1;
            self.cache.insert(key.clone(), Cholesky::new(a));
        }
        let chol = self.cache[&key]
            .as_ref()
            .expect("I + k²GᵀG is symmetric positive definite");
        let rhs_f = DVector::from_iterator(cols.len(), cols.iter().map(|&i| rhs[i]));
        let sol = chol.solve(&rhs_f);
        for (v, &i) in sol.iter().zip(&cols) {
            out[i] = *v;
        }
        out
    }

    /// Projected derivative `(dX, dZ)` at `(x, z)`.
    pub fn eval(&mut self, x: &DVector<f64>, z: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        let g = self.lp.constraint_matrix();
        let k = self.k;
        let at_x: Vec<bool> = x.iter().zip(&self.nonneg).map(|(v, nn)| *nn && *v <= 0.0).collect();
        let at_z: Vec<bool> = z.iter().map(|v| *v <= 0.0).collect();
        for (f, a) in self.free_x.iter_mut().zip(&at_x) {
            *f |= !a;
        }
        for (f, a) in self.free_z.iter_mut().zip(&at_z) {
            *f |= !a;
        }

        let residual = g * x - self.lp.rhs();
        let base = &self.c - g.tr_mul(z);
        let mut dx = DVector::zeros(x.len());
        let mut dz = DVector::zeros(z.len());
        for _ in 0..ACTIVE_SET_ITERS {
            let masked = DVector::from_iterator(
                residual.len(),
                residual.iter().zip(&self.free_z).map(|(r, f)| if *f { *r } else { 0.0 }),
            );
            let rhs = &base - g.tr_mul(&masked) * k;
            dx = self.solve(&rhs);
            let raw_z = &residual + (g * &dx) * k;
            dz = DVector::from_iterator(
                raw_z.len(),
                raw_z.iter().zip(&self.free_z).map(|(r, f)| if *f { *r } else { 0.0 }),
            );
            let raw_x = &base - g.tr_mul(&dz) * k;

            let mut changed = false;
            for i in 0..x.len() {
                let f = !(at_x[i] && raw_x[i] < 0.0);
                changed |= f != self.free_x[i];
                self.free_x[i] = f;
            }
            for j in 0..z.len() {
                let f = !(at_z[j] && raw_z[j] < 0.0);
                changed |= f != self.free_z[j];
                self.free_z[j] = f;
            }
            if !changed {
                break;
            }
        }
        (dx, dz)
    }

    /// Clamps sign-constrained coordinates to zero.
    pub fn project(&self, x: &mut DVector<f64>, z: &mut DVector<f64>) {
        for (v, nn) in x.iter_mut().zip(&self.nonneg) {
            if *nn && *v < 0.0 {
                *v = 0.0;
            }
        }
        for v in z.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
    }
}

/// Projected derivative of the coupled system at `state`.
pub fn derivative(lp: &StandardFormLP, state: &DynamicsState, k: f64) -> Result<(DVector<f64>, DVector<f64>)> {
    lp.check_primal_len(state.x.len())?;
    lp.check_dual_len(state.z.len())?;
    if !(k > 0.0) {
        return Err(Error::InvalidArgument(format!("k must be positive, got {k}")));
    }
    Ok(DerivativeEvaluator::new(lp, k).eval(&state.x, &state.z))
}

// Dormand–Prince 5(4); the system is autonomous so the node times are unused
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Advances a [`DynamicsState`] one integrator step at a time.
pub struct Stepper<'a> {
    eval: DerivativeEvaluator<'a>,
    config: DynamicsConfig,
    h: f64,
}

impl<'a> Stepper<'a> {
    pub fn new(lp: &'a StandardFormLP, config: &DynamicsConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            eval: DerivativeEvaluator::new(lp, config.k),
            config: config.clone(),
            h: config.step_size,
        })
    }

    pub fn evaluator(&mut self) -> &mut DerivativeEvaluator<'a> {
        &mut self.eval
    }

    /// Builds the initial state (projected) per the configured init mode.
    pub fn initial_state(&mut self) -> DynamicsState {
        let n = self.eval.lp.n_vars();
        let m = self.eval.lp.n_cons();
        let (mut x, mut z) = match self.config.init_mode {
            InitMode::Zeros => (DVector::zeros(n), DVector::zeros(m)),
            InitMode::RandomUniform { low, high } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.config.rng_seed);
                let x = DVector::from_fn(n, |_, _| rng.random_range(low..high));
                let z = DVector::from_fn(m, |_, _| rng.random_range(low..high));
                (x, z)
            }
        };
        self.eval.project(&mut x, &mut z);
        let (dx, dz) = self.eval.eval(&x, &z);
        DynamicsState { x, z, dx, dz, t: 0.0 }
    }

    fn stage(
        &mut self,
        state: &DynamicsState,
        h: f64,
        ks: &[(DVector<f64>, DVector<f64>)],
        weights: &[f64],
    ) -> (DVector<f64>, DVector<f64>) {
        let mut x = state.x.clone();
        let mut z = state.z.clone();
        for ((kx, kz), w) in ks.iter().zip(weights) {
            if *w != 0.0 {
                x.axpy(h * w, kx, 1.0);
                z.axpy(h * w, kz, 1.0);
            }
        }
        self.eval.project(&mut x, &mut z);
        (x, z)
    }

    /// One step. `state.dx`/`state.dz` must hold the projected derivative at
    /// `state` (as produced by this stepper).
    pub fn step(&mut self, state: &DynamicsState) -> Result<DynamicsState> {
        let (x, z, t) = match self.config.integrator {
            Integrator::Euler => {
                let h = self.h;
                let ks = [(state.dx.clone(), state.dz.clone())];
                let (x, z) = self.stage(state, h, &ks, &[1.0]);
                (x, z, state.t + h)
            }
            Integrator::Rk4 => {
                let h = self.h;
                let k1 = (state.dx.clone(), state.dz.clone());
                let (x2, z2) = self.stage(state, h, std::slice::from_ref(&k1), &[0.5]);
                let k2 = self.eval.eval(&x2, &z2);
                let (x3, z3) = self.stage(state, h, std::slice::from_ref(&k2), &[0.5]);
                let k3 = self.eval.eval(&x3, &z3);
                let (x4, z4) = self.stage(state, h, std::slice::from_ref(&k3), &[1.0]);
                let k4 = self.eval.eval(&x4, &z4);
                let ks = [k1, k2, k3, k4];
                let (x, z) = self.stage(state, h, &ks, &[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0]);
                (x, z, state.t + h)
            }
            Integrator::Rk45 => self.dormand_prince(state)?,
        };
        let (dx, dz) = self.eval.eval(&x, &z);
        let next = DynamicsState { x, z, dx, dz, t };
        if !next.is_finite() {
            return Err(Error::Divergence {
                t: state.t,
                last_finite: Box::new(state.clone()),
            });
        }
        Ok(next)
    }

    fn dormand_prince(&mut self, state: &DynamicsState) -> Result<(DVector<f64>, DVector<f64>, f64)> {
        let tol = self.config.adaptive_tol;
        let remaining = self.config.max_time - state.t;
        loop {
            let h = self.h.min(remaining.max(f64::MIN_POSITIVE));
            if !(h > 1e-14 * (1.0 + state.t.abs())) {
                return Err(Error::Divergence {
                    t: state.t,
                    last_finite: Box::new(state.clone()),
                });
            }
            let mut ks: Vec<(DVector<f64>, DVector<f64>)> = vec![(state.dx.clone(), state.dz.clone())];
            for s in 1..7 {
                let (xs, zs) = self.stage(state, h, &ks, &DP_A[s][..s]);
                ks.push(self.eval.eval(&xs, &zs));
            }
            let (x5, z5) = self.stage(state, h, &ks, &DP_B5);
            let (x4, z4) = self.stage(state, h, &ks, &DP_B4);
            let mut err = 0.0f64;
            for (a, b) in x5.iter().zip(x4.iter()).chain(z5.iter().zip(z4.iter())) {
                let scale = tol + tol * a.abs().max(b.abs());
                err = err.max((a - b).abs() / scale);
            }
            if !err.is_finite() {
                self.h = h * 0.2;
                continue;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                self.h = h * factor;
                return Ok((x5, z5, state.t + h));
            }
            self.h = h * factor;
        }
    }
}

/// One integrator step from `state`.
pub fn step(lp: &StandardFormLP, state: &DynamicsState, config: &DynamicsConfig) -> Result<DynamicsState> {
    lp.check_primal_len(state.x.len())?;
    lp.check_dual_len(state.z.len())?;
    let mut stepper = Stepper::new(lp, config)?;
    // refresh the derivative so callers may pass states with stale dx/dz
    let (dx, dz) = stepper.eval.eval(&state.x, &state.z);
    let fresh = DynamicsState {
        dx,
        dz,
        ..state.clone()
    };
    stepper.step(&fresh)
}

#[derive(Debug, Clone)]
pub struct Integration {
    pub state: DynamicsState,
    pub trace: ConvergenceTrace,
    /// Checked at `10 · convergence_tol`.
    pub kkt: KktReport,
    pub converged: bool,
    pub steps: usize,
    pub factorizations: usize,
}

impl Integration {
    /// Final primal objective in the LP's own sense.
    pub fn objective(&self) -> f64 {
        self.kkt.primal_objective
    }
}

/// Integrates from the configured initial condition until the projected
/// derivative norms fall below `convergence_tol` or `max_time` is reached.
/// Every component is traced under default names.
pub fn integrate(lp: &StandardFormLP, config: &DynamicsConfig) -> Result<Integration> {
    integrate_traced(lp, config, &TraceSpec::all(lp.n_vars()))
}

pub fn integrate_traced(lp: &StandardFormLP, config: &DynamicsConfig, spec: &TraceSpec) -> Result<Integration> {
    spec.validate(lp.n_vars())?;
    let mut stepper = Stepper::new(lp, config)?;
    let mut state = stepper.initial_state();
    let mut trace = ConvergenceTrace::new(spec);
    let c = lp.max_objective();
    let p = lp.rhs().clone();
    let gap = |s: &DynamicsState| (p.dot(&s.z) - c.dot(&s.x)).abs();

    let tol = config.convergence_tol;
    let converged_at = |s: &DynamicsState| {
        let (nx, nz) = s.derivative_norms();
        nx < tol && nz < tol
    };

    trace.record(spec, &state, gap(&state));
    let mut steps = 0usize;
    let mut converged = converged_at(&state);
    let mut last_recorded = 0usize;
    while !converged && state.t < config.max_time {
        state = stepper.step(&state)?;
        steps += 1;
        converged = converged_at(&state);
        if steps % config.trace_stride == 0 {
            trace.record(spec, &state, gap(&state));
            last_recorded = steps;
        }
    }
    if last_recorded != steps {
        trace.record(spec, &state, gap(&state));
    }

    let kkt = check_kkt(lp, &state.x, &state.z, 10.0 * tol)?;
    Ok(Integration {
        state,
        trace,
        kkt,
        converged,
        steps,
        factorizations: stepper.eval.factorizations(),
    })
}
