//! Parameter scans over the anisotropy and the product-state rotation angle,
//! signal-decay emulation, polynomial fits, and transition locators.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::geometric::{max_overlap, SweepOptions};
use crate::spin_model::{
    build_xxz, ground_state, named_product, overlap, rotate_product_y, GroundSolution,
    NamedProduct,
};

/// Zeeman field used below the ferromagnetic crossing to select `|11...1>`.
/// Shifts energies by at most `N * 1e-3`.
pub const ZEEMAN_TIE_BREAK: f64 = 1e-3;

/// Default scan range and step.
pub const DEFAULT_GAMMA_MIN: f64 = -2.0;
pub const DEFAULT_GAMMA_MAX: f64 = 3.0;
pub const DEFAULT_GAMMA_STEP: f64 = 0.05;

/// Default polynomial degree for crossing fits.
pub const DEFAULT_FIT_DEGREE: usize = 3;

/// Default `|delta e_log2|` that counts as a jump.
pub const DEFAULT_JUMP_THRESHOLD: f64 = 0.5;

/// Window in which the `|+-+->` and `|0101>` curves are fitted for the crossing.
pub const CROSSING_WINDOW: (f64, f64) = (0.5, 1.5);

/// Field applied at a given anisotropy.
pub fn zeeman_for(gamma: f64) -> f64 {
    if gamma < -1.0 {
        ZEEMAN_TIE_BREAK
    } else {
        0.0
    }
}

/// Ground state of the `n_sites` ring with the tie-break field where needed.
pub fn ground_for(n_sites: usize, gamma: f64) -> Result<GroundSolution> {
    if gamma == -1.0 {
        return Err(Error::BranchAmbiguity);
    }
    ground_state(&build_xxz(n_sites, gamma, zeeman_for(gamma))?)
}

/// Uniform grid on `[min, max]` with the crossing point moved off `-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaGrid {
    pub points: Vec<f64>,
    /// True when a point at `-1` was replaced by `-1 -+ step/2`.
    pub offset_applied: bool,
}

pub fn gamma_grid(min: f64, max: f64, step: f64) -> Result<GammaGrid> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) {
        return domain("grid bounds and step must be finite");
    }
    if !(step > 0.0) {
        return domain(format!("grid step must be positive, got {step}"));
    }
    if min > max {
        return domain(format!("empty grid: min {min} > max {max}"));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    let snap = |x: f64| (x * 1e12).round() / 1e12;
    let mut points = Vec::with_capacity(count + 1);
    let mut offset_applied = false;
    for k in 0..count {
        let x = snap(min + k as f64 * step);
        if (x + 1.0).abs() < 1e-9 {
            points.push(snap(-1.0 - step / 2.0));
            points.push(snap(-1.0 + step / 2.0));
            offset_applied = true;
        } else {
            points.push(x);
        }
    }
    Ok(GammaGrid {
        points,
        offset_applied,
    })
}

/// `[-2, 3]` in steps of 0.05, with `-1` split into `-1.025` and `-0.975`.
pub fn default_gamma_grid() -> GammaGrid {
    gamma_grid(DEFAULT_GAMMA_MIN, DEFAULT_GAMMA_MAX, DEFAULT_GAMMA_STEP)
        .expect("default grid is valid")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub gamma: f64,
    pub e_g: f64,
    pub lambda1_sq: f64,
    pub lambda2_sq: f64,
    pub lambda3_sq: f64,
    pub lambda_max_sq: f64,
    pub e_log2: f64,
}

impl ScanRow {
    pub fn candidate_max(&self) -> f64 {
        self.lambda1_sq.max(self.lambda2_sq).max(self.lambda3_sq)
    }
}

/// Rows strictly increasing in `gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn new(rows: Vec<ScanRow>) -> Result<Self> {
        if rows.windows(2).any(|w| !(w[1].gamma > w[0].gamma)) {
            return domain("scan rows must be strictly increasing in gamma");
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[ScanRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `(gamma, f(row))` for rows with `gamma` in `[lo, hi]`.
    pub fn curve(&self, lo: f64, hi: f64, f: impl Fn(&ScanRow) -> f64) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.gamma >= lo && r.gamma <= hi)
            .map(|r| (r.gamma, f(r)))
            .collect()
    }
}

/// Ground energy, candidate overlaps and geometric entanglement along `grid`.
///
/// Rows are computed in parallel; the table is ordered by `gamma`.
pub fn gamma_scan(grid: &[f64], n_sites: usize, opts: &SweepOptions) -> Result<ScanTable> {
    if grid.is_empty() {
        return domain("gamma grid is empty");
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("gamma grid must be strictly increasing");
    }
    if grid.contains(&-1.0) {
        return Err(Error::BranchAmbiguity);
    }
    opts.validate()?;
    let candidates = [
        named_product(NamedProduct::AllOnes, n_sites)?,
        named_product(NamedProduct::PlusMinus, n_sites)?,
        named_product(NamedProduct::Neel, n_sites)?,
    ];
    let rows = grid
        .par_iter()
        .map(|&gamma| {
            let gs = ground_for(n_sites, gamma)?;
            let mut sq = [0.0; 3];
            for (s, p) in sq.iter_mut().zip(&candidates) {
                *s = overlap(p, &gs.state)?.norm_sqr();
            }
            let ge = max_overlap(&gs.state, opts)?;
            Ok(ScanRow {
                gamma,
                e_g: gs.energy,
                lambda1_sq: sq[0],
                lambda2_sq: sq[1],
                lambda3_sq: sq[2],
                lambda_max_sq: ge.lambda_max_sq(),
                e_log2: ge.e_log2,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ScanTable::new(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaPoint {
    pub beta: f64,
    pub lambda_sq: f64,
}

/// Squared overlap of the ground state with the rotated Neel states.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaScan {
    pub gamma: f64,
    pub points: Vec<BetaPoint>,
}

impl BetaScan {
    /// First point within 1e-12 of the maximum. The curve has period `pi`, so
    /// on `[0, pi]` both ends can tie; this reports the lower one.
    pub fn argmax(&self) -> BetaPoint {
        let max = self.max();
        *self
            .points
            .iter()
            .find(|p| p.lambda_sq >= max - 1e-12)
            .expect("scan is non-empty")
    }

    pub fn max(&self) -> f64 {
        self.points.iter().map(|p| p.lambda_sq).fold(f64::MIN, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.points.iter().map(|p| p.lambda_sq).fold(f64::MAX, f64::min)
    }
}

/// `steps` equally spaced angles covering `[0, pi]` inclusive.
pub fn beta_grid(steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return domain(format!("beta grid needs at least 2 points, got {steps}"));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|k| PI * k as f64 / last).collect())
}

/// `|<U(beta) 0101...|g(gamma)>|^2` with `U(beta) = prod_j exp(-i beta Y_j / 2)`.
pub fn beta_scan(gamma: f64, betas: &[f64], n_sites: usize) -> Result<BetaScan> {
    if betas.is_empty() {
        return domain("beta grid is empty");
    }
    let neel = named_product(NamedProduct::Neel, n_sites)?;
    let gs = ground_for(n_sites, gamma)?;
    let points = betas
        .iter()
        .map(|&beta| {
            let lambda_sq = overlap(&rotate_product_y(&neel, beta), &gs.state)?
                .norm_sqr()
                .min(1.0);
            Ok(BetaPoint { beta, lambda_sq })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BetaScan { gamma, points })
}

/// Multiplicative attenuation of the `|+-+->` and `|0101>` overlap signals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayModel {
    pub alpha2: f64,
    pub alpha3: f64,
}

impl DecayModel {
    /// Factors fitted to the NMR measurements.
    pub const MEASURED: DecayModel = DecayModel {
        alpha2: 0.69,
        alpha3: 0.71,
    };

    pub fn new(alpha2: f64, alpha3: f64) -> Result<Self> {
        for a in [alpha2, alpha3] {
            if !(a > 0.0 && a <= 1.0) {
                return domain(format!("decay factors must lie in (0, 1], got {a}"));
            }
        }
        Ok(Self { alpha2, alpha3 })
    }
}

fn scale_overlaps(table: &ScanTable, s2: f64, s3: f64) -> ScanTable {
    ScanTable {
        rows: table
            .rows
            .iter()
            .map(|r| ScanRow {
                lambda2_sq: r.lambda2_sq * s2,
                lambda3_sq: r.lambda3_sq * s3,
                ..*r
            })
            .collect(),
    }
}

/// Multiplies `lambda2_sq` by `alpha2` and `lambda3_sq` by `alpha3`.
pub fn apply_decay(table: &ScanTable, model: &DecayModel) -> ScanTable {
    scale_overlaps(table, model.alpha2, model.alpha3)
}

/// Inverse of [`apply_decay`].
pub fn rescale(table: &ScanTable, model: &DecayModel) -> ScanTable {
    ScanTable {
        rows: table
            .rows
            .iter()
            .map(|r| ScanRow {
                lambda2_sq: r.lambda2_sq / model.alpha2,
                lambda3_sq: r.lambda3_sq / model.alpha3,
                ..*r
            })
            .collect(),
    }
}

/// Least-squares polynomial, coefficients in ascending powers of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFit {
    pub degree: usize,
    pub coefficients: Vec<f64>,
    /// Residual sum of squares.
    pub rss: f64,
}

impl PolyFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

pub fn fit_polynomial(points: &[(f64, f64)], degree: usize) -> Result<PolyFit> {
    if degree < 1 {
        return Err(Error::Fit("degree must be at least 1".into()));
    }
    let cols = degree + 1;
    if points.len() < cols {
        return Err(Error::Fit(format!(
            "{} points cannot determine a degree-{degree} polynomial",
            points.len()
        )));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::Fit("non-finite data".into()));
    }
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < cols {
        return Err(Error::Fit(format!(
            "only {} distinct abscissae for degree {degree}",
            xs.len()
        )));
    }

    let design = DMatrix::from_fn(points.len(), cols, |i, j| points[i].0.powi(j as i32));
    let rhs = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let qr = design.qr();
    let qty = qr.q().transpose() * &rhs;
    let coefficients = qr
        .r()
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::Fit("rank-deficient design matrix".into()))?;

    let mut fit = PolyFit {
        degree,
        coefficients: coefficients.iter().copied().collect(),
        rss: 0.0,
    };
    fit.rss = points.iter().map(|&(x, y)| (y - fit.eval(x)).powi(2)).sum();
    Ok(fit)
}

/// Root of the difference of two fitted curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub gamma: f64,
    /// Number of sign changes found in the common range.
    pub sign_changes: usize,
}

impl Crossing {
    pub fn is_multiple(&self) -> bool {
        self.sign_changes > 1
    }
}

const CROSSING_SAMPLES: usize = 2000;

/// Fits both curves at `degree` and returns the root of their difference in
/// the shared abscissa range, located by bisection. With several roots the one
/// nearest the middle of the range is returned.
pub fn detect_crossing(
    curve_a: &[(f64, f64)],
    curve_b: &[(f64, f64)],
    degree: usize,
) -> Result<Crossing> {
    let range = |c: &[(f64, f64)]| {
        c.iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)))
    };
    let (a_lo, a_hi) = range(curve_a);
    let (b_lo, b_hi) = range(curve_b);
    let (lo, hi) = (a_lo.max(b_lo), a_hi.min(b_hi));
    if !(lo < hi) {
        return domain("curves have no overlapping range");
    }
    let fa = fit_polynomial(curve_a, degree)?;
    let fb = fit_polynomial(curve_b, degree)?;
    let diff = |x: f64| fa.eval(x) - fb.eval(x);

    let xs: Vec<f64> = (0..=CROSSING_SAMPLES)
        .map(|k| lo + (hi - lo) * k as f64 / CROSSING_SAMPLES as f64)
        .collect();
    let mut roots = Vec::new();
    for w in xs.windows(2) {
        let (da, db) = (diff(w[0]), diff(w[1]));
        if da == 0.0 {
            roots.push(w[0]);
        } else if da.signum() != db.signum() && db != 0.0 {
            roots.push(bisect(&diff, w[0], w[1]));
        }
    }
    if diff(hi) == 0.0 {
        roots.push(hi);
    }
    let mid = 0.5 * (lo + hi);
    let gamma = roots
        .iter()
        .copied()
        .min_by(|a, b| (a - mid).abs().total_cmp(&(b - mid).abs()))
        .ok_or(Error::NoCrossing { lo, hi })?;
    Ok(Crossing {
        gamma,
        sign_changes: roots.len(),
    })
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if b - a <= 1e-15 * (1.0 + m.abs()) {
            return m;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Midpoint of the first adjacent pair of rows whose `e_log2` differs by more
/// than `threshold`.
pub fn detect_jump(table: &ScanTable, threshold: f64) -> Result<f64> {
    if !(threshold > 0.0) || !threshold.is_finite() {
        return domain(format!("jump threshold must be positive, got {threshold}"));
    }
    if table.len() < 2 {
        return domain("jump detection needs at least two rows");
    }
    table
        .rows
        .windows(2)
        .find(|w| (w[1].e_log2 - w[0].e_log2).abs() > threshold)
        .map(|w| 0.5 * (w[0].gamma + w[1].gamma))
        .ok_or(Error::NoJump { threshold })
}
