//! Dense density-matrix simulation for registers of one to four qubits.
//!
//! Qubit `0` is the leftmost tensor factor, so in a computational basis index
//! qubit `q` of an `n`-qubit register is bit `n - 1 - q` (big-endian, the
//! same way kets are written: `|q0 q1 q2 ...>`).

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::noise::{KrausChannel, Superop};

/// 2x2 complex matrix used for single-qubit operators.
pub type Mat2 = Matrix2<C64>;

/// Dense complex matrix used for register-wide operators.
pub type CMatrix = DMatrix<C64>;

pub const MAX_QUBITS: usize = 4;

const TRACE_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const POSITIVITY_FLOOR: f64 = -1e-9;
const UNITARY_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Mask selecting qubit `q` in a basis index of an `n`-qubit register.
#[inline]
pub(crate) fn qubit_mask(n_qubits: usize, q: usize) -> usize {
    1 << (n_qubits - 1 - q)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest elementwise deviation of `U^dag U` from the identity.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let prod = u.adjoint() * u;
    let id = CMatrix::identity(u.nrows(), u.ncols());
    max_abs(&(prod - id))
}

/// Quantum state of a small register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: CMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix after checking it is a valid state: unit trace and
    /// Hermitian to 1e-10, eigenvalues no lower than -1e-9.
    pub fn new(data: CMatrix) -> Result<Self> {
        let n_qubits = qubits_for_dim(data.nrows())?;
        if data.ncols() != data.nrows() {
            return Err(Error::DimensionMismatch { expected: data.nrows(), found: data.ncols() });
        }
        let rho = Self { n_qubits, data };
        rho.validate()?;
        Ok(rho)
    }

    /// Skips validation; used on the hot path where every operation is
    /// already known to be trace preserving.
    pub(crate) fn from_raw(n_qubits: usize, data: CMatrix) -> Self {
        debug_assert_eq!(data.nrows(), 1 << n_qubits);
        Self { n_qubits, data }
    }

    /// `|0...0><0...0|`.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1 << n_qubits;
        let mut data = CMatrix::zeros(dim, dim);
        data[(0, 0)] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, data })
    }

    /// `|b><b|` for the computational basis state with index `index`.
    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1 << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index });
        }
        let mut data = CMatrix::zeros(dim, dim);
        data[(index, index)] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, data })
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1 << n_qubits;
        let data = CMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
        Ok(Self { n_qubits, data })
    }

    /// `|psi><psi|` for a (not necessarily normalized) state vector.
    pub fn from_pure(amplitudes: &[C64]) -> Result<Self> {
        let n_qubits = qubits_for_dim(amplitudes.len())?;
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm2 <= 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let scale = 1.0 / norm2.sqrt();
        let psi = nalgebra::DVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|a| a * scale));
        let data = &psi * psi.adjoint();
        Ok(Self { n_qubits, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    /// `Tr[rho^2]`.
    pub fn purity(&self) -> f64 {
        // Tr[rho rho] = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho.
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        max_abs(&(&self.data - self.data.adjoint()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        // Symmetrize first so round-off in the anti-Hermitian part cannot
        // leak into the eigensolver.
        let herm = (&self.data + self.data.adjoint()) * C64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < POSITIVITY_FLOOR {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(())
    }

    /// Probability of reading `1` on qubit `q` in the computational basis.
    pub fn excited_population(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let mask = qubit_mask(self.n_qubits, q);
        let p1: f64 = (0..self.dim()).filter(|i| i & mask != 0).map(|i| self.data[(i, i)].re).sum();
        Ok(p1.clamp(0.0, 1.0))
    }

    /// Largest elementwise distance to another state.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        max_abs(&(&self.data - &other.data))
    }

    pub(crate) fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits: self.n_qubits });
        }
        Ok(())
    }

    /// `rho <- M rho M^dag` with `M` acting on qubit `q`. `M` need not be
    /// unitary; callers are responsible for trace preservation.
    pub(crate) fn conjugate_local(&mut self, q: usize, m: &Mat2) {
        conjugate_local_in_place(&mut self.data, qubit_mask(self.n_qubits, q), m);
    }

    /// `rho <- sum_k K_k rho K_k^dag` on qubit `q`.
    pub(crate) fn apply_channel_local(&mut self, q: usize, channel: &KrausChannel) {
        let ops = channel.operators();
        if ops.len() == 1 {
            self.conjugate_local(q, &ops[0]);
            return;
        }
        let mask = qubit_mask(self.n_qubits, q);
        let mut acc = CMatrix::zeros(self.dim(), self.dim());
        for k in ops {
            let mut term = self.data.clone();
            conjugate_local_in_place(&mut term, mask, k);
            acc += term;
        }
        self.data = acc;
    }

    /// Applies a single-qubit map in Liouville form to qubit `q`.
    pub(crate) fn apply_superop_local(&mut self, q: usize, s: &Superop) {
        let mask = qubit_mask(self.n_qubits, q);
        let dim = self.dim();
        for i0 in (0..dim).filter(|i| i & mask == 0) {
            let i1 = i0 | mask;
            for j0 in (0..dim).filter(|j| j & mask == 0) {
                let j1 = j0 | mask;
                let d = &mut self.data;
                let b = [d[(i0, j0)], d[(i0, j1)], d[(i1, j0)], d[(i1, j1)]];
                let out: [C64; 4] = std::array::from_fn(|r| (0..4).map(|k| s[(r, k)] * b[k]).sum());
                d[(i0, j0)] = out[0];
                d[(i0, j1)] = out[1];
                d[(i1, j0)] = out[2];
                d[(i1, j1)] = out[3];
            }
        }
    }

    /// `rho <- U rho U^dag` with a full-register matrix.
    pub(crate) fn conjugate_full(&mut self, u: &CMatrix) {
        self.data = u * &self.data * u.adjoint();
    }

    pub(crate) fn data_mut(&mut self) -> &mut CMatrix {
        &mut self.data
    }
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::UnsupportedQubitCount(n));
    }
    Ok(())
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!("dimension {dim} is not a power of two")));
    }
    let n = dim.trailing_zeros() as usize;
    check_qubit_count(n)?;
    Ok(n)
}

fn conjugate_local_in_place(data: &mut CMatrix, mask: usize, m: &Mat2) {
    let dim = data.nrows();
    let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    // Left multiplication mixes row pairs (i, i|mask).
    for i in (0..dim).filter(|i| i & mask == 0) {
        let j = i | mask;
        for col in 0..dim {
            let a = data[(i, col)];
            let b = data[(j, col)];
            data[(i, col)] = m00 * a + m01 * b;
            data[(j, col)] = m10 * a + m11 * b;
        }
    }
    // Right multiplication by M^dag mixes column pairs.
    let (a00, a01, a10, a11) = (m00.conj(), m01.conj(), m10.conj(), m11.conj());
    for i in (0..dim).filter(|i| i & mask == 0) {
        let j = i | mask;
        for row in 0..dim {
            let a = data[(row, i)];
            let b = data[(row, j)];
            data[(row, i)] = a * a00 + b * a01;
            data[(row, j)] = a * a10 + b * a11;
        }
    }
}

fn check_targets(n_qubits: usize, targets: &[usize]) -> Result<()> {
    for (k, &t) in targets.iter().enumerate() {
        if t >= n_qubits {
            return Err(Error::QubitOutOfRange { index: t, n_qubits });
        }
        if targets[..k].contains(&t) {
            return Err(Error::DuplicateTarget(t));
        }
    }
    Ok(())
}

/// Lifts a `2^k x 2^k` operator on `targets` to the full register, acting as
/// the identity elsewhere. The first target is the most significant bit of
/// the operator's own index.
pub fn embed_operator(u: &CMatrix, targets: &[usize], n_qubits: usize) -> Result<CMatrix> {
    check_targets(n_qubits, targets)?;
    let k = targets.len();
    if u.nrows() != 1 << k || u.ncols() != 1 << k {
        return Err(Error::DimensionMismatch { expected: 1 << k, found: u.nrows() });
    }
    let dim = 1 << n_qubits;
    let masks: Vec<usize> = targets.iter().map(|&t| qubit_mask(n_qubits, t)).collect();
    let target_bits: usize = masks.iter().sum();
    let local_index = |full: usize| -> usize {
        masks.iter().fold(0, |acc, &m| (acc << 1) | usize::from(full & m != 0))
    };
    let mut full = CMatrix::zeros(dim, dim);
    for row in 0..dim {
        for col in 0..dim {
            if row & !target_bits != col & !target_bits {
                continue;
            }
            full[(row, col)] = u[(local_index(row), local_index(col))];
        }
    }
    Ok(full)
}

/// Returns `U rho U^dag` with `U` embedded on `targets`.
pub fn apply_unitary(rho: &DensityMatrix, u: &CMatrix, targets: &[usize]) -> Result<DensityMatrix> {
    check_targets(rho.n_qubits, targets)?;
    if u.nrows() != 1 << targets.len() || u.ncols() != u.nrows() {
        return Err(Error::DimensionMismatch { expected: 1 << targets.len(), found: u.nrows() });
    }
    let deviation = unitarity_deviation(u);
    if deviation > UNITARY_TOL {
        return Err(Error::NonUnitary { deviation });
    }
    let mut out = rho.clone();
    if targets.len() == 1 {
        let m = Mat2::new(u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
        out.conjugate_local(targets[0], &m);
    } else {
        let full = embed_operator(u, targets, rho.n_qubits)?;
        out.conjugate_full(&full);
    }
    Ok(out)
}

/// Returns `sum_k K_k rho K_k^dag` with the channel acting on `target`.
pub fn apply_kraus_channel(rho: &DensityMatrix, channel: &KrausChannel, target: usize) -> Result<DensityMatrix> {
    rho.check_qubit(target)?;
    let deviation = channel.completeness_deviation();
    if deviation > crate::noise::KRAUS_TOL {
        return Err(Error::IncompleteKraus { deviation });
    }
    let mut out = rho.clone();
    out.apply_channel_local(target, channel);
    Ok(out)
}

/// Single-qubit Pauli operator.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Mat2 {
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        match self {
            Pauli::I => Mat2::new(l, o, o, l),
            Pauli::X => Mat2::new(o, l, l, o),
            Pauli::Y => Mat2::new(o, -i, i, o),
            Pauli::Z => Mat2::new(l, o, o, -l),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_symbol(ch: char) -> Option<Self> {
        match ch {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Tensor product of single-qubit Paulis, one letter per qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        check_qubit_count(letters.len())?;
        Ok(Self { letters })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; n_qubits])
    }

    /// Single `Z` on qubit `q`.
    pub fn z_on(n_qubits: usize, q: usize) -> Result<Self> {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        let mut letters = vec![Pauli::I; n_qubits];
        letters[q] = Pauli::Z;
        Self::new(letters)
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Dense `2^n x 2^n` matrix.
    pub fn matrix(&self) -> CMatrix {
        let mut m = CMatrix::from_element(1, 1, c(1.0, 0.0));
        for p in &self.letters {
            let pm = p.matrix();
            let pm = CMatrix::from_iterator(2, 2, pm.iter().copied());
            m = m.kronecker(&pm);
        }
        m
    }

    /// `P|j> = phase(j) |j ^ flip_mask>`.
    fn flip_mask(&self) -> usize {
        let n = self.n_qubits();
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p, Pauli::X | Pauli::Y))
            .map(|(q, _)| qubit_mask(n, q))
            .sum()
    }

    fn column_phase(&self, col: usize) -> C64 {
        let n = self.n_qubits();
        let mut phase = c(1.0, 0.0);
        for (q, p) in self.letters.iter().enumerate() {
            let bit = col & qubit_mask(n, q) != 0;
            phase *= match (p, bit) {
                (Pauli::I | Pauli::X, _) => c(1.0, 0.0),
                (Pauli::Y, false) => c(0.0, 1.0),
                (Pauli::Y, true) => c(0.0, -1.0),
                (Pauli::Z, false) => c(1.0, 0.0),
                (Pauli::Z, true) => c(-1.0, 0.0),
            };
        }
        phase
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|ch| Pauli::from_symbol(ch.to_ascii_uppercase()).ok_or_else(|| Error::Parse(format!("bad Pauli letter {ch:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }
}

/// `Tr[rho P]`, real for Hermitian `rho`.
pub fn expectation_pauli(rho: &DensityMatrix, p: &PauliString) -> Result<f64> {
    if p.n_qubits() != rho.n_qubits() {
        return Err(Error::DimensionMismatch { expected: rho.n_qubits(), found: p.n_qubits() });
    }
    let flip = p.flip_mask();
    let data = rho.data();
    // (rho P)_jj = rho_{j, j^flip} * phase(j)
    let value: C64 = (0..rho.dim()).map(|j| data[(j, j ^ flip)] * p.column_phase(j)).sum();
    debug_assert!(value.im.abs() < 1e-9, "non-real Pauli expectation {value}");
    Ok(value.re)
}

/// Outcome tally for repeated Z-basis readout of one qubit.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct MeasurementCounts {
    pub shots: u64,
    pub count0: u64,
    pub count1: u64,
}

impl MeasurementCounts {
    pub fn new(count0: u64, count1: u64) -> Result<Self> {
        let shots = count0 + count1;
        if shots == 0 {
            return Err(Error::InvalidConfig("measurement with zero shots".into()));
        }
        Ok(Self { shots, count0, count1 })
    }

    pub fn p0(&self) -> f64 {
        self.count0 as f64 / self.shots as f64
    }

    pub fn p1(&self) -> f64 {
        self.count1 as f64 / self.shots as f64
    }

    /// Estimated `<Z>` = p0 - p1.
    pub fn z_estimate(&self) -> f64 {
        self.p0() - self.p1()
    }

    /// Binomial variance of [`Self::z_estimate`], `(1 - <Z>^2) / shots`.
    pub fn z_variance(&self) -> f64 {
        let z = self.z_estimate();
        (1.0 - z * z).max(0.0) / self.shots as f64
    }
}

/// Samples `shots` Z-basis readouts of qubit `q`, each outcome flipped with
/// probability `readout_error`.
///
/// Draws are done on counts rather than shot by shot: the number of `1`s is
/// `Binomial(shots, p1)`, then the flips are two further binomial draws.
/// The distribution is identical to per-shot sampling.
pub fn sample_qubit_z<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    q: usize,
    shots: u64,
    readout_error: f64,
    rng: &mut R,
) -> Result<MeasurementCounts> {
    if shots == 0 {
        return Err(Error::InvalidConfig("shots must be at least 1".into()));
    }
    if !(0.0..=0.5).contains(&readout_error) {
        return Err(Error::InvalidConfig(format!("readout error {readout_error} outside [0, 0.5]")));
    }
    let p1 = rho.excited_population(q)?;
    let ones = binomial(shots, p1, rng);
    let zeros = shots - ones;
    let (ones, zeros) = if readout_error > 0.0 {
        let ones_kept = binomial(ones, 1.0 - readout_error, rng);
        let zeros_flipped = binomial(zeros, readout_error, rng);
        let observed_ones = ones_kept + zeros_flipped;
        (observed_ones, shots - observed_ones)
    } else {
        (ones, zeros)
    };
    MeasurementCounts::new(zeros, ones)
}

/// Random full-rank mixed state, `G G^dag / Tr(G G^dag)` with `G` a complex
/// Gaussian matrix.
pub fn random_density_matrix<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<DensityMatrix> {
    check_qubit_count(n_qubits)?;
    let dim = 1 << n_qubits;
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(re, im)
    });
    let mut rho = &g * g.adjoint();
    let tr = rho.trace();
    rho /= tr;
    Ok(DensityMatrix::from_raw(n_qubits, rho))
}

fn binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("probability clamped to (0, 1)").sample(rng)
}
