//! Geometric entanglement through the maximal overlap with product states.
//!
//! The closest product state is found by alternating local updates: with all
//! sites but one frozen, the overlap is `<psi_i|v_i>` where `v_i` is the state
//! contracted against the frozen locals, so the optimal local is `v_i / |v_i|`
//! and the new overlap is `|v_i|`. Sites are visited `1, 2, ..., N, N-1, ..., 2`
//! per round (`2N - 2` steps) until the overlap stops changing.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::spin_model::{normalize_qubit, overlap, random_qubit, ProductState, Qubit, StateVector};

/// Iteration controls for [`max_overlap`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub max_rounds: usize,
    /// Stop once the overlap changes by less than this over a full round.
    pub tol: f64,
    pub restarts: usize,
    pub rng_seed: u64,
    /// Conditional vectors shorter than this re-randomize their site.
    pub degenerate_norm_floor: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            max_rounds: 200,
            tol: 1e-12,
            restarts: 8,
            rng_seed: 0,
            degenerate_norm_floor: 1e-14,
        }
    }
}

impl SweepOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_rounds < 1 {
            return domain("max_rounds must be at least 1");
        }
        if !(self.tol > 0.0) {
            return domain(format!("tol must be positive, got {}", self.tol));
        }
        if self.restarts < 1 {
            return domain("restarts must be at least 1");
        }
        if !(self.degenerate_norm_floor >= 0.0) {
            return domain("degenerate_norm_floor must be non-negative");
        }
        Ok(())
    }
}

/// Overlap after every local update of one run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTrace {
    pub lambda_per_step: Vec<f64>,
    pub rounds_used: usize,
    pub converged: bool,
}

impl SweepTrace {
    /// Overlap at the end of each round.
    pub fn round_lambdas(&self, n_sites: usize) -> Vec<f64> {
        let steps = steps_per_round(n_sites);
        self.lambda_per_step
            .chunks(steps)
            .filter(|c| c.len() == steps)
            .map(|c| c[steps - 1])
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct GeResult {
    pub lambda_max: f64,
    pub e_log2: f64,
    pub closest: ProductState,
    /// Trace of the restart that produced `lambda_max`.
    pub trace: SweepTrace,
}

impl GeResult {
    pub fn lambda_max_sq(&self) -> f64 {
        self.lambda_max * self.lambda_max
    }
}

pub fn steps_per_round(n_sites: usize) -> usize {
    sweep_schedule(n_sites).len()
}

/// 0-based site order of one round: `0, 1, ..., N-1, N-2, ..., 1`.
pub fn sweep_schedule(n_sites: usize) -> Vec<usize> {
    (0..n_sites).chain((1..n_sites.saturating_sub(1)).rev()).collect()
}

/// Contracts `g` with the conjugated locals of every site except `site`.
///
/// Returns the unnormalized vector `v` with
/// `v_q = sum_{b : b_site = q} (prod_{j != site} conj(psi_j[b_j])) g_b`.
/// Its direction is the best local state at `site`, its length the overlap
/// reached with it.
pub fn conditional_local(g: &StateVector, psi: &ProductState, site: usize) -> Result<Qubit> {
    let n = g.n_sites();
    if psi.n_sites() != n {
        return domain(format!("product state has {} sites, state has {n}", psi.n_sites()));
    }
    if site >= n {
        return domain(format!("site {site} out of range for {n} sites"));
    }
    let weights = |sites: &[Qubit]| {
        let mut w = vec![Complex64::new(1.0, 0.0)];
        for q in sites {
            w = w.iter().flat_map(|a| [a * q[0].conj(), a * q[1].conj()]).collect();
        }
        w
    };
    let high = weights(&psi.locals()[..site]);
    let low = weights(&psi.locals()[site + 1..]);
    let low_bits = n - 1 - site;
    let amps = g.amplitudes();

    let mut v = [Complex64::new(0.0, 0.0); 2];
    for (h, wh) in high.iter().enumerate() {
        for (q, vq) in v.iter_mut().enumerate() {
            let base = ((h << 1) | q) << low_bits;
            let partial: Complex64 = low
                .iter()
                .enumerate()
                .map(|(l, wl)| wl * amps[base | l])
                .sum();
            *vq += wh * partial;
        }
    }
    Ok(v)
}

/// Result of one full round of local updates.
#[derive(Debug, Clone)]
pub struct SweepRound {
    pub state: ProductState,
    /// `|<state|g>|` after the round.
    pub lambda: f64,
    pub step_lambdas: Vec<f64>,
}

/// One round over [`sweep_schedule`].
///
/// A site whose conditional vector is shorter than `norm_floor` is redrawn
/// at random from `rng` instead of being normalized.
pub fn sweep_round<R: Rng + ?Sized>(
    g: &StateVector,
    psi: &ProductState,
    norm_floor: f64,
    rng: &mut R,
) -> Result<SweepRound> {
    let mut state = psi.clone();
    let schedule = sweep_schedule(g.n_sites());
    let mut step_lambdas = Vec::with_capacity(schedule.len());
    for site in schedule {
        let v = conditional_local(g, &state, site)?;
        let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        let lambda = match normalize_qubit(v).filter(|_| norm >= norm_floor) {
            Some(q) => {
                state.set_local(site, q);
                norm
            }
            None => {
                let q = random_qubit(rng);
                let reached = (q[0].conj() * v[0] + q[1].conj() * v[1]).norm();
                state.set_local(site, q);
                reached
            }
        };
        step_lambdas.push(lambda.min(1.0));
    }
    let lambda = overlap(&state, g)?.norm().min(1.0);
    Ok(SweepRound {
        state,
        lambda,
        step_lambdas,
    })
}

/// Runs rounds from `initial` until the per-round change drops below `opts.tol`
/// or `opts.max_rounds` is reached.
pub fn sweep_from<R: Rng + ?Sized>(
    g: &StateVector,
    initial: ProductState,
    opts: &SweepOptions,
    rng: &mut R,
) -> Result<GeResult> {
    opts.validate()?;
    let mut psi = initial;
    let mut lambda = overlap(&psi, g)?.norm().min(1.0);
    let mut trace = SweepTrace::default();
    for round in 1..=opts.max_rounds {
        let r = sweep_round(g, &psi, opts.degenerate_norm_floor, rng)?;
        trace.lambda_per_step.extend_from_slice(&r.step_lambdas);
        trace.rounds_used = round;
        let change = (r.lambda - lambda).abs();
        psi = r.state;
        lambda = r.lambda;
        if change < opts.tol {
            trace.converged = true;
            break;
        }
    }
    let e_log2 = geometric_entanglement(lambda)?;
    Ok(GeResult {
        lambda_max: lambda,
        e_log2,
        closest: psi,
        trace,
    })
}

/// Maximal overlap of `g` with any product state, best of `opts.restarts`
/// seeded random starts.
///
/// Restart `r` draws from a ChaCha8 stream `r` keyed by `opts.rng_seed`, so the
/// result is identical for a fixed seed regardless of thread scheduling.
/// Ties between restarts go to the lowest restart index.
pub fn max_overlap(g: &StateVector, opts: &SweepOptions) -> Result<GeResult> {
    opts.validate()?;
    let runs = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
            rng.set_stream(r as u64);
            let start = ProductState::random(g.n_sites(), &mut rng)?;
            sweep_from(g, start, opts, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<GeResult> = None;
    for run in runs {
        if best.as_ref().is_none_or(|b| run.lambda_max > b.lambda_max) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// `E = -log2(lambda_max^2)`.
pub fn geometric_entanglement(lambda_max: f64) -> Result<f64> {
    if lambda_max.is_nan() || lambda_max > 1.0 + 1e-12 {
        return domain(format!("lambda_max must lie in (0, 1], got {lambda_max}"));
    }
    if lambda_max <= 0.0 {
        return Err(Error::InfiniteEntanglement);
    }
    let e = -2.0 * lambda_max.min(1.0).log2();
    Ok(if e > 0.0 { e } else { 0.0 })
}
