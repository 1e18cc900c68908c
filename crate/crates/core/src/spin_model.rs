//! XXZ Hamiltonians on a periodic ring, their ground states, and the
//! state types used everywhere else in the crate.
//!
//! Qubit `q_1` is the most significant bit of a basis index: for four sites
//! `|0101>` is index 5. Site arguments to the Rust API are 0-based.
//!
//! For `N = 2` the periodic sum visits the single bond twice (bond 1-2 and
//! bond 2-1), so every coupling is doubled relative to an open two-site chain.
//! This is kept on purpose; see [`build_xxz`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Error, Result};

/// Largest chain the dense solver accepts (`2^12 = 4096` basis states).
pub const MAX_SITES: usize = 12;

/// Two lowest eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Tolerance on unit norms of states and local qubit vectors.
pub const NORM_TOL: f64 = 1e-12;

/// Amplitudes of a single qubit in the `{|0>, |1>}` basis.
pub type Qubit = [Complex64; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
fn bit(index: usize, site: usize, n_sites: usize) -> usize {
    (index >> (n_sites - 1 - site)) & 1
}

#[inline]
fn site_mask(site: usize, n_sites: usize) -> usize {
    1 << (n_sites - 1 - site)
}

fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites == 0 {
        return domain("a state needs at least one site");
    }
    if n_sites >= usize::BITS as usize - 1 {
        return domain(format!("{n_sites} sites cannot be indexed"));
    }
    Ok(())
}

/// Normalized amplitude vector over the `2^N` computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps `amplitudes`, which must already have unit norm.
    pub fn new(n_sites: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_sites(n_sites)?;
        if amplitudes.len() != 1 << n_sites {
            return domain(format!(
                "{} amplitudes given for {} sites (expected {})",
                amplitudes.len(),
                n_sites,
                1usize << n_sites
            ));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return domain(format!("state norm^2 is {norm_sqr}, expected 1"));
        }
        Ok(Self {
            n_sites,
            amplitudes,
        })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(n_sites: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return domain("cannot normalize a zero or non-finite vector");
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(n_sites, amplitudes)
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_sites: usize, index: usize) -> Result<Self> {
        check_sites(n_sites)?;
        let dim = 1usize << n_sites;
        if index >= dim {
            return domain(format!("basis index {index} out of range for {n_sites} sites"));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self {
            n_sites,
            amplitudes,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_sites != other.n_sites {
            return domain(format!(
                "inner product of {}-site and {}-site states",
                self.n_sites, other.n_sites
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Rotates the global phase so the largest-magnitude amplitude is real
    /// and positive. Near-ties (within 1e-12) go to the lowest basis index.
    pub fn fix_global_phase(&mut self) {
        let max = self.amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return;
        }
        let pivot = self
            .amplitudes
            .iter()
            .position(|a| a.norm() >= max - 1e-12)
            .expect("maximum is attained");
        let phase = self.amplitudes[pivot].conj() / self.amplitudes[pivot].norm();
        for a in &mut self.amplitudes {
            *a *= phase;
        }
        self.amplitudes[pivot] = Complex64::new(self.amplitudes[pivot].re, 0.0);
    }

    /// Applies a 2x2 operator to one site (0-based).
    pub fn apply_local(&self, site: usize, op: &[[Complex64; 2]; 2]) -> Result<StateVector> {
        if site >= self.n_sites {
            return domain(format!("site {site} out of range for {} sites", self.n_sites));
        }
        let mask = site_mask(site, self.n_sites);
        let mut out = self.amplitudes.clone();
        for b in (0..self.dim()).filter(|b| b & mask == 0) {
            let (a0, a1) = (self.amplitudes[b], self.amplitudes[b | mask]);
            out[b] = op[0][0] * a0 + op[0][1] * a1;
            out[b | mask] = op[1][0] * a0 + op[1][1] * a1;
        }
        Ok(StateVector {
            n_sites: self.n_sites,
            amplitudes: out,
        })
    }
}

/// Tensor product of single-qubit unit vectors, one per site.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    locals: Vec<Qubit>,
}

impl ProductState {
    /// Wraps `locals`, each of which must have unit norm.
    pub fn new(locals: Vec<Qubit>) -> Result<Self> {
        check_sites(locals.len())?;
        for (i, q) in locals.iter().enumerate() {
            let n = q[0].norm_sqr() + q[1].norm_sqr();
            if (n - 1.0).abs() > NORM_TOL {
                return domain(format!("local state at site {i} has norm^2 {n}"));
            }
        }
        Ok(Self { locals })
    }

    /// Normalizes every local vector.
    pub fn normalized(locals: Vec<Qubit>) -> Result<Self> {
        let locals = locals
            .into_iter()
            .map(|q| normalize_qubit(q).ok_or_else(|| Error::Domain("zero local vector".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(locals)
    }

    /// Haar-random product state: each local is uniform on the Bloch sphere.
    pub fn random<R: Rng + ?Sized>(n_sites: usize, rng: &mut R) -> Result<Self> {
        check_sites(n_sites)?;
        Ok(Self {
            locals: (0..n_sites).map(|_| random_qubit(rng)).collect(),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.locals.len()
    }

    pub fn locals(&self) -> &[Qubit] {
        &self.locals
    }

    pub(crate) fn set_local(&mut self, site: usize, q: Qubit) {
        self.locals[site] = q;
    }

    pub fn to_state_vector(&self) -> StateVector {
        product_to_statevector(self)
    }
}

pub(crate) fn normalize_qubit(q: Qubit) -> Option<Qubit> {
    let norm = (q[0].norm_sqr() + q[1].norm_sqr()).sqrt();
    (norm > 0.0 && norm.is_finite()).then(|| [q[0] / norm, q[1] / norm])
}

pub(crate) fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> Qubit {
    loop {
        let mut draw = || Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let q = [draw(), draw()];
        if let Some(q) = normalize_qubit(q) {
            return q;
        }
    }
}

/// Dense XXZ Hamiltonian with its parameters.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    n_sites: usize,
    gamma: f64,
    b_z: f64,
    matrix: DMatrix<Complex64>,
}

impl HamiltonianMatrix {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn b_z(&self) -> f64 {
        self.b_z
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |H - H^dagger|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest imaginary part of any entry.
    pub fn max_imag(&self) -> f64 {
        self.matrix.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// `max |[H, sum_i Z_i]|` over all entries.
    pub fn sz_commutator_defect(&self) -> f64 {
        let n = self.n_sites;
        let sz = |b: usize| n as f64 - 2.0 * b.count_ones() as f64;
        let d = self.dim();
        let mut worst = 0.0f64;
        for j in 0..d {
            for i in 0..d {
                let h = self.matrix[(i, j)];
                worst = worst.max((h * (sz(j) - sz(i))).norm());
            }
        }
        worst
    }

    /// `max |[H, T]|` over all entries, with `T` the cyclic one-site shift
    /// `|q_1 q_2 ... q_N> -> |q_N q_1 ... q_{N-1}>`.
    pub fn shift_commutator_defect(&self) -> f64 {
        let n = self.n_sites;
        let d = self.dim();
        let shift = |b: usize| (b >> 1) | ((b & 1) << (n - 1));
        let unshift = |b: usize| ((b << 1) & (d - 1)) | (b >> (n - 1));
        let mut worst = 0.0f64;
        // (HT)_{ij} = H_{i, t(j)},  (TH)_{ij} = H_{t^-1(i), j}
        for j in 0..d {
            let tj = shift(j);
            for i in 0..d {
                let diff = self.matrix[(i, tj)] - self.matrix[(unshift(i), j)];
                worst = worst.max(diff.norm());
            }
        }
        worst
    }

    /// `H |state>`.
    pub fn apply(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        if state.n_sites != self.n_sites {
            return domain("state and Hamiltonian sizes differ");
        }
        let d = self.dim();
        Ok((0..d)
            .map(|i| {
                (0..d)
                    .map(|j| self.matrix[(i, j)] * state.amplitudes[j])
                    .sum()
            })
            .collect())
    }

    /// Rayleigh quotient `<state|H|state>` of a normalized state.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        let hv = self.apply(state)?;
        let e: Complex64 = state
            .amplitudes
            .iter()
            .zip(&hv)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(e.re)
    }
}

/// Builds `sum_i (X_i X_{i+1} + Y_i Y_{i+1} + gamma Z_i Z_{i+1}) + b_z sum_i Z_i`
/// on a ring of `n_sites` (site `N+1` is site 1).
///
/// For two sites the ring has bonds 1-2 and 2-1, which are the same pair, so
/// the coupling appears twice. The lowest level at `gamma = 0` is then `-4`
/// rather than `-2`.
pub fn build_xxz(n_sites: usize, gamma: f64, b_z: f64) -> Result<HamiltonianMatrix> {
    if n_sites < 2 {
        return domain(format!("a ring needs at least 2 sites, got {n_sites}"));
    }
    if n_sites > MAX_SITES {
        return Err(Error::Capacity {
            n_sites,
            max_sites: MAX_SITES,
        });
    }
    if !gamma.is_finite() {
        return domain(format!("gamma must be finite, got {gamma}"));
    }
    if !(b_z >= 0.0) || !b_z.is_finite() {
        return domain(format!("b_z must be finite and >= 0, got {b_z}"));
    }

    let dim = 1usize << n_sites;
    let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
    for b in 0..dim {
        let mut diag = 0.0;
        for i in 0..n_sites {
            let j = (i + 1) % n_sites;
            let (qi, qj) = (bit(b, i, n_sites), bit(b, j, n_sites));
            if qi == qj {
                diag += gamma;
            } else {
                diag -= gamma;
                // (XX + YY)|01> = 2|10>
                let flipped = b ^ site_mask(i, n_sites) ^ site_mask(j, n_sites);
                matrix[(flipped, b)] += Complex64::new(2.0, 0.0);
            }
            diag += b_z * (1.0 - 2.0 * qi as f64);
        }
        matrix[(b, b)] += Complex64::new(diag, 0.0);
    }
    Ok(HamiltonianMatrix {
        n_sites,
        gamma,
        b_z,
        matrix,
    })
}

/// Lowest eigenpair of a Hamiltonian.
#[derive(Debug, Clone)]
pub struct GroundSolution {
    pub energy: f64,
    pub state: StateVector,
    /// Distance to the first excited level.
    pub gap: f64,
}

/// All eigenvalues in ascending order together with their eigenvectors (as columns).
pub fn eigh(h: &HamiltonianMatrix) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = h.matrix.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(h.dim(), h.dim(), |i, k| eig.eigenvectors[(i, order[k])]);
    (values, vectors)
}

/// Ground state by dense Hermitian diagonalization.
///
/// Fails with [`Error::DegenerateGround`] when the two lowest levels are
/// within [`DEGENERACY_TOL`]: any vector in the ground space would be an
/// arbitrary, solver-dependent pick. At `b_z = 0` the usual fix is a small
/// Zeeman field.
pub fn ground_state(h: &HamiltonianMatrix) -> Result<GroundSolution> {
    let (values, vectors) = eigh(h);
    let gap = if values.len() > 1 {
        values[1] - values[0]
    } else {
        f64::INFINITY
    };
    if gap < DEGENERACY_TOL {
        return Err(Error::DegenerateGround {
            gap: gap.max(0.0),
            b_z: h.b_z,
        });
    }
    let column: Vec<Complex64> = vectors.column(0).iter().copied().collect();
    let mut state = StateVector::normalized(h.n_sites, column)?;
    state.fix_global_phase();
    let energy = h.expectation(&state)?;
    Ok(GroundSolution { energy, state, gap })
}

/// `<psi|g> = sum_b (prod_i conj(psi_i[b_i])) g_b`.
pub fn overlap(psi: &ProductState, g: &StateVector) -> Result<Complex64> {
    if psi.n_sites() != g.n_sites() {
        return domain(format!(
            "product state has {} sites, state vector has {}",
            psi.n_sites(),
            g.n_sites()
        ));
    }
    // contract from the least significant site inwards
    let mut buf = g.amplitudes.clone();
    for q in psi.locals.iter().rev() {
        let (c0, c1) = (q[0].conj(), q[1].conj());
        let half = buf.len() / 2;
        for k in 0..half {
            buf[k] = c0 * buf[2 * k] + c1 * buf[2 * k + 1];
        }
        buf.truncate(half);
    }
    Ok(buf[0])
}

/// Kronecker product of the locals in site order.
pub fn product_to_statevector(psi: &ProductState) -> StateVector {
    let mut amps = vec![ONE];
    for q in &psi.locals {
        amps = amps.iter().flat_map(|a| [a * q[0], a * q[1]]).collect();
    }
    StateVector {
        n_sites: psi.n_sites(),
        amplitudes: amps,
    }
}

/// Fixed product states used as phase-diagram candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedProduct {
    /// `|11...1>`
    AllOnes,
    /// `|+-+-...>` with `|+-> = (|0> +- |1>)/sqrt(2)`
    PlusMinus,
    /// `|0101...>`
    Neel,
}

/// Candidate product state on an even ring.
pub fn named_product(kind: NamedProduct, n_sites: usize) -> Result<ProductState> {
    if n_sites == 0 || !n_sites.is_multiple_of(2) {
        return domain(format!("named product states need an even site count, got {n_sites}"));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let locals = (0..n_sites)
        .map(|i| match kind {
            NamedProduct::AllOnes => [ZERO, ONE],
            NamedProduct::PlusMinus if i % 2 == 0 => [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            NamedProduct::PlusMinus => [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
            NamedProduct::Neel if i % 2 == 0 => [ONE, ZERO],
            NamedProduct::Neel => [ZERO, ONE],
        })
        .collect();
    ProductState::new(locals)
}

/// Matrix of `exp(-i beta Y / 2)`.
pub fn rotation_y(beta: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (beta / 2.0).sin_cos();
    let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
    [[c, -s], [s, c]]
}

/// Applies `exp(-i beta Y / 2)` to every site.
pub fn rotate_product_y(psi: &ProductState, beta: f64) -> ProductState {
    let r = rotation_y(beta);
    let locals = psi
        .locals
        .iter()
        .map(|q| [r[0][0] * q[0] + r[0][1] * q[1], r[1][0] * q[0] + r[1][1] * q[1]])
        .collect();
    ProductState { locals }
}

/// Diagonal element `<b|rho|b>` of `rho = U^dagger |g><g| U` with
/// `U = prod_j exp(-i beta Y_j / 2)`. Equals `|<b|U^dagger|g>|^2`, the
/// squared overlap of `g` with the rotated basis state `U|b>`.
pub fn diagonal_readout(g: &StateVector, basis_index: usize, beta: f64) -> Result<f64> {
    if basis_index >= g.dim() {
        return domain(format!("basis index {basis_index} out of range"));
    }
    let r_dag = rotation_y(-beta);
    let mut rotated = g.clone();
    for site in 0..g.n_sites() {
        rotated = rotated.apply_local(site, &r_dag)?;
    }
    Ok(rotated.amplitudes[basis_index].norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    // Independent construction from Kronecker products of Pauli matrices.
    fn pauli_hamiltonian(n: usize, gamma: f64, b_z: f64) -> DMatrix<Complex64> {
        let i = Complex64::i();
        let id = DMatrix::<Complex64>::identity(2, 2);
        let x = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let y = DMatrix::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)]);
        let z = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
        let embed = |ops: &[(usize, &DMatrix<Complex64>)]| {
            let mut m = DMatrix::<Complex64>::identity(1, 1);
            for site in 0..n {
                let op = ops.iter().find(|(s, _)| *s == site).map_or(&id, |(_, o)| *o);
                m = m.kronecker(op);
            }
            m
        };
        let dim = 1 << n;
        let mut h = DMatrix::<Complex64>::zeros(dim, dim);
        for s in 0..n {
            let t = (s + 1) % n;
            h += embed(&[(s, &x), (t, &x)]);
            h += embed(&[(s, &y), (t, &y)]);
            h += embed(&[(s, &z), (t, &z)]) * c(gamma);
            h += embed(&[(s, &z)]) * c(b_z);
        }
        h
    }

    #[test]
    fn matches_pauli_kronecker_construction() {
        for n in 2..=6 {
            for &(g, bz) in &[(-2.0, 1e-3), (0.0, 0.0), (0.7, 0.0), (3.0, 0.25)] {
                let h = build_xxz(n, g, bz).unwrap();
                let oracle = pauli_hamiltonian(n, g, bz);
                let diff = (h.matrix() - &oracle).iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(diff < 1e-14, "n={n} gamma={g}: {diff}");
            }
        }
    }

    #[test]
    fn neel_diagonal_entry() {
        let h = build_xxz(4, 1.0, 0.0).unwrap();
        assert_eq!(h.matrix()[(5, 5)], c(-4.0));
    }

    #[test]
    fn two_site_ring_double_counts_bond() {
        let h = build_xxz(2, 0.0, 0.0).unwrap();
        let gs = ground_state(&h).unwrap();
        assert_abs_diff_eq!(gs.energy, -4.0, epsilon = 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let amps = gs.state.amplitudes();
        assert_abs_diff_eq!(amps[1].re, s, epsilon = 1e-12);
        assert_abs_diff_eq!(amps[2].re, -s, epsilon = 1e-12);
        assert!(amps[0].norm() < 1e-12 && amps[3].norm() < 1e-12);
    }

    #[test]
    fn spin_flip_symmetry_without_field() {
        for &g in &[-2.0, -0.5, 0.0, 1.0, 2.5] {
            let h = build_xxz(4, g, 0.0).unwrap();
            let m = h.matrix();
            for i in 0..16 {
                for j in 0..16 {
                    assert_eq!(m[(i, j)], m[(15 - i, 15 - j)]);
                }
            }
        }
    }

    #[test]
    fn structural_invariants_all_sizes() {
        for n in 2..=MAX_SITES {
            for &g in &[-2.0, -1.0, 0.0, 1.0, 3.0] {
                for &bz in &[0.0, 1e-3] {
                    // the big matrices are slow to scan; sample gammas there
                    if n > 10 && g != 1.0 {
                        continue;
                    }
                    let h = build_xxz(n, g, bz).unwrap();
                    assert!(h.hermiticity_defect() < 1e-14);
                    assert_eq!(h.max_imag(), 0.0);
                    assert!(h.sz_commutator_defect() < 1e-12);
                    assert!(h.shift_commutator_defect() < 1e-12, "n={n}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(build_xxz(1, 0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(
            build_xxz(13, 0.0, 0.0),
            Err(Error::Capacity { n_sites: 13, .. })
        ));
        assert!(matches!(build_xxz(4, 0.0, -1e-3), Err(Error::Domain(_))));
    }

    #[test]
    fn ferromagnetic_ground_state_with_tie_break() {
        let gs = ground_state(&build_xxz(4, -2.0, 1e-3).unwrap()).unwrap();
        assert_abs_diff_eq!(gs.energy, -8.004, epsilon = 1e-12);
        assert_abs_diff_eq!(gs.state.amplitudes()[15].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_ferromagnet_without_field_is_an_error() {
        let err = ground_state(&build_xxz(4, -2.0, 0.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::DegenerateGround { .. }));
        assert!(err.to_string().contains("b_z > 0"));
    }

    #[test]
    fn known_energies() {
        let e0 = ground_state(&build_xxz(4, 0.0, 0.0).unwrap()).unwrap().energy;
        assert_abs_diff_eq!(e0, -4.0 * 2f64.sqrt(), epsilon = 1e-10);
        let e1 = ground_state(&build_xxz(4, 1.0, 0.0).unwrap()).unwrap().energy;
        assert_abs_diff_eq!(e1, -8.0, epsilon = 1e-10);
    }

    #[test]
    fn ground_solution_invariants() {
        for &g in &[-0.9, 0.0, 0.5, 1.0, 3.0] {
            let h = build_xxz(6, g, 0.0).unwrap();
            let gs = ground_state(&h).unwrap();
            assert_abs_diff_eq!(gs.energy, h.expectation(&gs.state).unwrap(), epsilon = 1e-10);
            assert!((gs.state.norm_sqr() - 1.0).abs() < 1e-12);
            let amps = gs.state.amplitudes();
            let max = amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
            let pivot = amps.iter().position(|a| a.norm() >= max - 1e-12).unwrap();
            assert!(amps[pivot].re > 0.0 && amps[pivot].im == 0.0);
            // residual of the eigen equation
            let hv = h.apply(&gs.state).unwrap();
            let res = hv
                .iter()
                .zip(amps)
                .map(|(a, b)| (a - b * gs.energy).norm())
                .fold(0.0, f64::max);
            assert!(res < 1e-10);
        }
    }

    #[test]
    fn variational_bound_over_random_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &g in &[-0.5, 1.0, 2.0] {
            let h = build_xxz(4, g, 0.0).unwrap();
            let e0 = ground_state(&h).unwrap().energy;
            for _ in 0..100 {
                let p = ProductState::random(4, &mut rng).unwrap();
                let e = h.expectation(&p.to_state_vector()).unwrap();
                assert!(e0 <= e + 1e-12);
            }
        }
    }

    #[test]
    fn energy_continuous_across_level_crossing() {
        let below = ground_state(&build_xxz(4, -1.0 - 1e-6, 1e-9).unwrap()).unwrap();
        let above = ground_state(&build_xxz(4, -1.0 + 1e-6, 0.0).unwrap()).unwrap();
        assert!((below.energy - above.energy).abs() < 1e-4);
        assert_abs_diff_eq!(above.energy, -4.0, epsilon = 1e-4);
    }

    #[test]
    fn overlap_examples() {
        let g = StateVector::basis(4, 15).unwrap();
        let pm = named_product(NamedProduct::PlusMinus, 4).unwrap();
        assert_abs_diff_eq!(overlap(&pm, &g).unwrap().re, 0.25, epsilon = 1e-15);

        let neel = named_product(NamedProduct::Neel, 4).unwrap();
        let v = StateVector::basis(4, 5).unwrap();
        assert_abs_diff_eq!(overlap(&neel, &v).unwrap().re, 1.0, epsilon = 1e-15);

        let mut amps = vec![c(0.0); 16];
        amps[5] = c(1.0);
        amps[10] = c(1.0);
        let phi1 = StateVector::normalized(4, amps).unwrap();
        assert_abs_diff_eq!(
            overlap(&neel, &phi1).unwrap().re,
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert!(overlap(&neel, &StateVector::basis(2, 0).unwrap()).is_err());
    }

    #[test]
    fn overlap_agrees_with_dense_inner_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            let p = ProductState::random(n, &mut rng).unwrap();
            let q = ProductState::random(n, &mut rng).unwrap();
            let g = q.to_state_vector();
            let direct = p.to_state_vector().inner(&g).unwrap();
            let fast = overlap(&p, &g).unwrap();
            assert!((direct - fast).norm() < 1e-14);
            assert!(fast.norm() <= 1.0 + 1e-14);
        }
    }

    #[test]
    fn kronecker_examples() {
        let neel = named_product(NamedProduct::Neel, 4).unwrap().to_state_vector();
        for (i, a) in neel.amplitudes().iter().enumerate() {
            assert_eq!(*a, if i == 5 { c(1.0) } else { c(0.0) });
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = ProductState::new(vec![[c(h), c(h)], [c(h), c(h)]]).unwrap();
        for a in plus.to_state_vector().amplitudes() {
            assert_abs_diff_eq!(a.re, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn named_products() {
        let ones = named_product(NamedProduct::AllOnes, 4).unwrap();
        assert_eq!(ones.to_state_vector().amplitudes()[15], c(1.0));
        let pm = named_product(NamedProduct::PlusMinus, 4).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (i, q) in pm.locals().iter().enumerate() {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(*q, [c(h), c(sign * h)]);
        }
        assert!(named_product(NamedProduct::Neel, 5).is_err());
        assert!(named_product(NamedProduct::Neel, 0).is_err());
    }

    #[test]
    fn rotation_of_neel_gives_plus_minus() {
        let neel = named_product(NamedProduct::Neel, 4).unwrap();
        assert_eq!(rotate_product_y(&neel, 0.0), neel);
        let rotated = rotate_product_y(&neel, std::f64::consts::FRAC_PI_2);
        let pm = named_product(NamedProduct::PlusMinus, 4).unwrap();
        let f = rotated
            .to_state_vector()
            .fidelity(&pm.to_state_vector())
            .unwrap();
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-14);
        let gs = ground_state(&build_xxz(4, -0.3, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(
            overlap(&rotated, &gs.state).unwrap().norm(),
            overlap(&pm, &gs.state).unwrap().norm(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn kt_point_overlap_independent_of_beta() {
        let gs = ground_state(&build_xxz(4, 1.0, 0.0).unwrap()).unwrap();
        let neel = named_product(NamedProduct::Neel, 4).unwrap();
        let vals: Vec<f64> = (0..50)
            .map(|k| {
                let beta = k as f64 * std::f64::consts::PI / 49.0;
                overlap(&rotate_product_y(&neel, beta), &gs.state).unwrap().norm()
            })
            .collect();
        let spread = vals.iter().cloned().fold(f64::MIN, f64::max)
            - vals.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-9);
    }

    #[test]
    fn diagonal_readout_matches_overlap() {
        let gs = ground_state(&build_xxz(4, -0.9, 0.0).unwrap()).unwrap();
        let neel = named_product(NamedProduct::Neel, 4).unwrap();
        for &beta in &[0.0, 0.4, std::f64::consts::FRAC_PI_2, 2.5] {
            let direct = overlap(&rotate_product_y(&neel, beta), &gs.state).unwrap().norm_sqr();
            let readout = diagonal_readout(&gs.state, 5, beta).unwrap();
            assert_abs_diff_eq!(direct, readout, epsilon = 1e-14);
        }
    }

    #[test]
    fn state_validation() {
        assert!(StateVector::new(2, vec![c(1.0); 4]).is_err());
        assert!(StateVector::new(2, vec![c(1.0); 3]).is_err());
        assert!(StateVector::normalized(2, vec![c(0.0); 4]).is_err());
        assert!(ProductState::new(vec![[c(1.0), c(1.0)]]).is_err());
        assert!(ProductState::new(vec![]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn qubit() -> impl Strategy<Value = Qubit> {
            prop::array::uniform4(-1.0f64..1.0)
                .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
                .prop_map(|v| {
                    normalize_qubit([Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])])
                        .unwrap()
                })
        }

        proptest! {
            #[test]
            fn kronecker_preserves_norm(locals in prop::collection::vec(qubit(), 1..8)) {
                let p = ProductState::new(locals).unwrap();
                prop_assert!((p.to_state_vector().norm_sqr() - 1.0).abs() < 1e-12);
            }

            #[test]
            fn rotations_compose(
                locals in prop::collection::vec(qubit(), 1..6),
                b1 in -7.0f64..7.0,
                b2 in -7.0f64..7.0,
            ) {
                let p = ProductState::new(locals).unwrap();
                let two_step = rotate_product_y(&rotate_product_y(&p, b1), b2);
                let one_step = rotate_product_y(&p, b1 + b2);
                for (a, b) in two_step.locals().iter().zip(one_step.locals()) {
                    prop_assert!((a[0] - b[0]).norm() < 1e-12 && (a[1] - b[1]).norm() < 1e-12);
                }
            }
        }
    }
}
