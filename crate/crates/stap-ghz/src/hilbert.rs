//! Finite-dimensional state space and dense complex operator algebra for
//! three three-level atoms coupled to a two-mode cavity.
//!
//! The product basis is |a1, a2, a3⟩ ⊗ |n_l, n_r⟩ where each atom draws its
//! level from its own three-element set and the two circularly polarized
//! cavity modes are truncated at `n_max` photons. Enumeration order is
//! lexicographic in (atom1, atom2, atom3, n_l, n_r) so that serialized states
//! are portable across runs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Atomic level labels. Atom 1 uses {f, g_l, e}, atom 2 {g_l, g_r, e},
/// atom 3 {f, g_r, e}.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    F,
    Gl,
    Gr,
    E,
}

impl Level {
    pub fn symbol(self) -> &'static str {
        match self {
            Level::F => "f",
            Level::Gl => "g_l",
            Level::Gr => "g_r",
            Level::E => "e",
        }
    }

    /// Number of quanta this level contributes to the conserved excitation
    /// count: both |e⟩ and |f⟩ sit one laser/cavity quantum above the g's.
    fn excitation(self) -> u32 {
        match self {
            Level::E | Level::F => 1,
            Level::Gl | Level::Gr => 0,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    One,
    Two,
    Three,
}

pub const ATOMS: [Atom; 3] = [Atom::One, Atom::Two, Atom::Three];

impl Atom {
    /// The ordered level set of this atom; the order fixes basis enumeration.
    pub fn levels(self) -> [Level; 3] {
        match self {
            Atom::One => [Level::F, Level::Gl, Level::E],
            Atom::Two => [Level::Gl, Level::Gr, Level::E],
            Atom::Three => [Level::F, Level::Gr, Level::E],
        }
    }

    pub fn allows(self, level: Level) -> bool {
        self.levels().contains(&level)
    }

    fn level_position(self, level: Level) -> Option<usize> {
        self.levels().iter().position(|&l| l == level)
    }
}

/// Which cavity mode an operator acts on.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Left,
    Right,
}

/// One product basis state.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub atom1: Level,
    pub atom2: Level,
    pub atom3: Level,
    pub n_l: u32,
    pub n_r: u32,
}

impl BasisState {
    pub fn new(atom1: Level, atom2: Level, atom3: Level, n_l: u32, n_r: u32) -> Result<Self> {
        for (atom, level) in ATOMS.iter().zip([atom1, atom2, atom3]) {
            if !atom.allows(level) {
                return Err(Error::Domain(format!(
                    "level {} is not in the level set of atom {:?}",
                    level.symbol(),
                    atom
                )));
            }
        }
        Ok(BasisState { atom1, atom2, atom3, n_l, n_r })
    }

    pub fn level(&self, atom: Atom) -> Level {
        match atom {
            Atom::One => self.atom1,
            Atom::Two => self.atom2,
            Atom::Three => self.atom3,
        }
    }

    fn with_level(mut self, atom: Atom, level: Level) -> Self {
        match atom {
            Atom::One => self.atom1 = level,
            Atom::Two => self.atom2 = level,
            Atom::Three => self.atom3 = level,
        }
        self
    }

    fn photons(&self, mode: Mode) -> u32 {
        match mode {
            Mode::Left => self.n_l,
            Mode::Right => self.n_r,
        }
    }

    fn with_photons(mut self, mode: Mode, n: u32) -> Self {
        match mode {
            Mode::Left => self.n_l = n,
            Mode::Right => self.n_r = n,
        }
        self
    }

    /// Conserved excitation count: Σ_atoms (|e⟩⟨e| + |f⟩⟨f|) + n_l + n_r.
    pub fn excitation(&self) -> u32 {
        self.atom1.excitation() + self.atom2.excitation() + self.atom3.excitation()
            + self.n_l
            + self.n_r
    }
}

/// Deterministic enumeration of the full product space at a given photon
/// truncation.
#[derive(Clone, Debug)]
pub struct StateSpace {
    n_max: u32,
    states: Vec<BasisState>,
}

impl StateSpace {
    /// Enumerate the basis. `n_max = 0` is rejected: the cavity couplings
    /// would vanish identically.
    pub fn new(n_max: u32) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Domain(
                "n_max must be >= 1 (cavity couplings vanish at n_max = 0)".into(),
            ));
        }
        let mut states = Vec::with_capacity(27 * ((n_max + 1) * (n_max + 1)) as usize);
        for a1 in Atom::One.levels() {
            for a2 in Atom::Two.levels() {
                for a3 in Atom::Three.levels() {
                    for n_l in 0..=n_max {
                        for n_r in 0..=n_max {
                            states.push(BasisState { atom1: a1, atom2: a2, atom3: a3, n_l, n_r });
                        }
                    }
                }
            }
        }
        Ok(StateSpace { n_max, states })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> &BasisState {
        &self.states[index]
    }

    /// Index of a basis state under the fixed lexicographic order.
    pub fn index_of(&self, s: &BasisState) -> Option<usize> {
        let p1 = Atom::One.level_position(s.atom1)?;
        let p2 = Atom::Two.level_position(s.atom2)?;
        let p3 = Atom::Three.level_position(s.atom3)?;
        if s.n_l > self.n_max || s.n_r > self.n_max {
            return None;
        }
        let np = (self.n_max + 1) as usize;
        Some((((p1 * 3 + p2) * 3 + p3) * np + s.n_l as usize) * np + s.n_r as usize)
    }

    /// Unit ket pointing along one basis state.
    pub fn basis_ket(&self, s: &BasisState) -> Result<Ket> {
        let i = self
            .index_of(s)
            .ok_or_else(|| Error::Domain(format!("state {s:?} not in this space")))?;
        let mut v = CVec::zeros(self.dim());
        v[i] = C64::new(1.0, 0.0);
        Ok(Ket { vec: v })
    }
}

/// Pure-state amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    pub vec: CVec,
}

impl Ket {
    pub fn from_vec(vec: CVec) -> Self {
        Ket { vec }
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn norm(&self) -> f64 {
        self.vec.norm()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.vec /= C64::new(n, 0.0);
        }
        self
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &Ket) -> C64 {
        self.vec.dotc(&other.vec)
    }
}

/// Density operator with the usual trace/Hermiticity/positivity contracts.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub mat: CMat,
}

impl DensityMatrix {
    pub fn from_ket(psi: &Ket) -> Self {
        let d = psi.dim();
        let mut mat = CMat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                mat[(i, j)] = psi.vec[i] * psi.vec[j].conj();
            }
        }
        DensityMatrix { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.mat.diagonal().sum()
    }

    /// max |ρ - ρ†| entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut m: f64 = 0.0;
        for i in 0..d {
            for j in 0..=i {
                m = m.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        m
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0);
        let eig = nalgebra::SymmetricEigen::new(herm);
        eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Check ρ = ρ† (1e-10), tr ρ = 1 (1e-8) and min eigenvalue ≥ -1e-8.
    pub fn validate(&self) -> Result<()> {
        let h = self.hermiticity_defect();
        if h > 1e-10 {
            return Err(Error::Tolerance(format!("density matrix not Hermitian: defect {h:.3e}")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
            return Err(Error::Tolerance(format!("density matrix trace {tr} != 1")));
        }
        let ev = self.min_eigenvalue();
        if ev < -1e-8 {
            return Err(Error::Tolerance(format!("density matrix not positive: min eig {ev:.3e}")));
        }
        Ok(())
    }
}

/// Dense complex operator; `hermitian` marks builders that guarantee
/// ‖A - A†‖_max < 1e-12.
#[derive(Clone, Debug)]
pub struct Operator {
    pub mat: CMat,
    pub hermitian: bool,
}

/// max |A_ij| over all entries.
pub fn norm_max(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A B - B A.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

impl Operator {
    pub fn new(mat: CMat) -> Self {
        Operator { mat, hermitian: false }
    }

    /// Wrap a matrix that is Hermitian by construction; checked.
    pub fn new_hermitian(mat: CMat) -> Result<Self> {
        let defect = {
            let adj = mat.adjoint();
            norm_max(&(&mat - adj))
        };
        if defect > 1e-12 {
            return Err(Error::Internal(format!(
                "operator flagged hermitian has defect {defect:.3e}"
            )));
        }
        Ok(Operator { mat, hermitian: true })
    }

    pub fn zeros(dim: usize) -> Self {
        Operator { mat: CMat::zeros(dim, dim), hermitian: true }
    }

    pub fn identity(dim: usize) -> Self {
        Operator { mat: CMat::identity(dim, dim), hermitian: true }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn adjoint(&self) -> Operator {
        Operator { mat: self.mat.adjoint(), hermitian: self.hermitian }
    }

    pub fn apply(&self, psi: &Ket) -> Result<Ket> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: psi.dim() });
        }
        Ok(Ket { vec: &self.mat * &psi.vec })
    }
}

/// States on which operator expectation values are defined.
pub trait QuantumState {
    fn dim(&self) -> usize;
    /// ⟨A⟩ in this state: ⟨ψ|A|ψ⟩ or tr(Aρ).
    fn expectation_of(&self, op: &Operator) -> C64;
    /// |⟨target|ψ⟩|² or |⟨target|ρ|target⟩|.
    fn population(&self, target: &Ket) -> f64;
}

impl QuantumState for Ket {
    fn dim(&self) -> usize {
        self.vec.len()
    }

    fn expectation_of(&self, op: &Operator) -> C64 {
        self.vec.dotc(&(&op.mat * &self.vec))
    }

    fn population(&self, target: &Ket) -> f64 {
        target.overlap(self).norm_sqr()
    }
}

impl QuantumState for DensityMatrix {
    fn dim(&self) -> usize {
        self.mat.nrows()
    }

    fn expectation_of(&self, op: &Operator) -> C64 {
        // tr(Aρ)
        let d = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for k in 0..d {
                acc += op.mat[(i, k)] * self.mat[(k, i)];
            }
        }
        acc
    }

    fn population(&self, target: &Ket) -> f64 {
        let v = &self.mat * &target.vec;
        target.vec.dotc(&v).norm()
    }
}

/// tr(Aρ) or ⟨ψ|A|ψ⟩.
pub fn expectation<S: QuantumState>(op: &Operator, state: &S) -> Result<C64> {
    if op.dim() != state.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), got: state.dim() });
    }
    Ok(state.expectation_of(op))
}

/// Annihilation operator of one cavity mode: a|…n…⟩ = √n|…n-1…⟩.
pub fn annihilator(space: &StateSpace, mode: Mode) -> Operator {
    let d = space.dim();
    let mut mat = CMat::zeros(d, d);
    for (col, s) in space.states().iter().enumerate() {
        let n = s.photons(mode);
        if n > 0 {
            let dst = s.with_photons(mode, n - 1);
            let row = space.index_of(&dst).expect("photon-lowered state is enumerable");
            mat[(row, col)] = C64::new((n as f64).sqrt(), 0.0);
        }
    }
    Operator::new(mat)
}

/// Photon-number operator a†a of one mode.
pub fn number_operator(space: &StateSpace, mode: Mode) -> Operator {
    let d = space.dim();
    let mut mat = CMat::zeros(d, d);
    for (i, s) in space.states().iter().enumerate() {
        mat[(i, i)] = C64::new(s.photons(mode) as f64, 0.0);
    }
    Operator { mat, hermitian: true }
}

/// |to⟩⟨from| on one atom, identity elsewhere.
pub fn atomic_transition(space: &StateSpace, atom: Atom, from: Level, to: Level) -> Result<Operator> {
    for level in [from, to] {
        if !atom.allows(level) {
            return Err(Error::Domain(format!(
                "level {} is not in the level set of atom {:?}",
                level.symbol(),
                atom
            )));
        }
    }
    let d = space.dim();
    let mut mat = CMat::zeros(d, d);
    for (col, s) in space.states().iter().enumerate() {
        if s.level(atom) == from {
            let dst = s.with_level(atom, to);
            let row = space.index_of(&dst).expect("level-substituted state is enumerable");
            mat[(row, col)] = C64::new(1.0, 0.0);
        }
    }
    Ok(Operator::new(mat))
}

/// The conserved excitation counter Σ_atoms (|e⟩⟨e| + |f⟩⟨f|) + n_l + n_r.
///
/// |f⟩ counts as one quantum: the laser converts f ↔ e freely and each
/// cavity emission e → g adds a photon, so this combination commutes with
/// both interaction Hamiltonians and never increases under the dissipators.
/// That is what makes the n_max = 1 truncation exact for single-excitation
/// initial states.
pub fn total_excitation(space: &StateSpace) -> Operator {
    let d = space.dim();
    let mut mat = CMat::zeros(d, d);
    for (i, s) in space.states().iter().enumerate() {
        mat[(i, i)] = C64::new(s.excitation() as f64, 0.0);
    }
    Operator { mat, hermitian: true }
}

/// Coordinate-list sparse matrix used by the integrators; column values are
/// stored as (row, col, value) triplets.
#[derive(Clone, Debug, Default)]
pub struct SparseOp {
    pub dim: usize,
    pub entries: Vec<(u32, u32, C64)>,
}

impl SparseOp {
    pub fn from_dense(m: &CMat) -> Self {
        let dim = m.nrows();
        let mut entries = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..dim {
                let v = m[(i, j)];
                if v != C64::new(0.0, 0.0) {
                    entries.push((i as u32, j as u32, v));
                }
            }
        }
        SparseOp { dim, entries }
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.entries {
            m[(i as usize, j as usize)] += v;
        }
        m
    }

    pub fn adjoint(&self) -> SparseOp {
        SparseOp {
            dim: self.dim,
            entries: self.entries.iter().map(|&(i, j, v)| (j, i, v.conj())).collect(),
        }
    }

    /// y (+)= A x.
    pub fn apply_into(&self, x: &CVec, y: &mut CVec, accumulate: bool) {
        if !accumulate {
            y.fill(C64::new(0.0, 0.0));
        }
        let xs = x.as_slice();
        let ys = y.as_mut_slice();
        for &(i, j, v) in &self.entries {
            ys[i as usize] += v * xs[j as usize];
        }
    }

    /// out (+)= B · A  (dense times self; cache-friendly column axpys).
    pub fn right_mul_into(&self, b: &CMat, out: &mut CMat, accumulate: bool) {
        if !accumulate {
            out.fill(C64::new(0.0, 0.0));
        }
        let d = self.dim;
        let bs = b.as_slice();
        let os = out.as_mut_slice();
        for &(i, j, v) in &self.entries {
            // column j of out += v * column i of b
            let src = &bs[i as usize * d..(i as usize + 1) * d];
            let dst = &mut os[j as usize * d..(j as usize + 1) * d];
            for (o, s) in dst.iter_mut().zip(src) {
                *o += v * s;
            }
        }
    }

    /// out (+)= A · B  (self times dense).
    pub fn left_mul_into(&self, b: &CMat, out: &mut CMat, accumulate: bool) {
        if !accumulate {
            out.fill(C64::new(0.0, 0.0));
        }
        let d = self.dim;
        let bs = b.as_slice();
        let os = out.as_mut_slice();
        for &(i, j, v) in &self.entries {
            // row i of out += v * row j of b
            for k in 0..d {
                os[k * d + i as usize] += v * bs[k * d + j as usize];
            }
        }
    }

    /// A · B as a new sparse operator (used once for Σ L†L).
    pub fn matmul(&self, other: &SparseOp) -> SparseOp {
        let dense = {
            let mut m = CMat::zeros(self.dim, self.dim);
            self.left_mul_into(&other.to_dense(), &mut m, false);
            m
        };
        SparseOp::from_dense(&dense)
    }
}

type CoeffFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;
type MatFn = Box<dyn Fn(f64) -> CMat + Send + Sync>;

struct Term {
    coeff: CoeffFn,
    op: SparseOp,
}

enum Rep {
    /// constant + Σ_j f_j(t) A_j with real coefficients and fixed parts.
    Terms { constant: SparseOp, terms: Vec<Term> },
    /// Values tabulated on a uniform grid, linearly interpolated.
    Tabulated { t0: f64, dt: f64, mats: Vec<CMat> },
    /// Arbitrary evaluation closure.
    Map(MatFn),
}

/// A pure map t ↦ dense complex matrix on a fixed domain; carrier of every
/// Hamiltonian in the crate. Evaluation at equal times yields equal
/// matrices.
pub struct TimeDependentOperator {
    dim: usize,
    rep: Rep,
}

impl TimeDependentOperator {
    pub fn constant(op: &CMat) -> Self {
        TimeDependentOperator {
            dim: op.nrows(),
            rep: Rep::Terms { constant: SparseOp::from_dense(op), terms: Vec::new() },
        }
    }

    /// Start from a constant part (possibly zero).
    pub fn from_parts(dim: usize) -> Self {
        TimeDependentOperator {
            dim,
            rep: Rep::Terms { constant: SparseOp { dim, entries: Vec::new() }, terms: Vec::new() },
        }
    }

    pub fn with_constant(mut self, op: &CMat) -> Self {
        if let Rep::Terms { constant, .. } = &mut self.rep {
            *constant = SparseOp::from_dense(op);
        }
        self
    }

    /// Add a term f(t) · A. Only meaningful on a `from_parts` value.
    pub fn with_term<F>(mut self, coeff: F, op: &CMat) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if let Rep::Terms { terms, .. } = &mut self.rep {
            terms.push(Term { coeff: Box::new(coeff), op: SparseOp::from_dense(op) });
        }
        self
    }

    pub fn from_fn<F>(dim: usize, f: F) -> Self
    where
        F: Fn(f64) -> CMat + Send + Sync + 'static,
    {
        TimeDependentOperator { dim, rep: Rep::Map(Box::new(f)) }
    }

    /// Tabulate on the uniform grid t0 + k·dt; evaluation interpolates
    /// linearly and clamps outside the grid.
    pub fn tabulated(t0: f64, dt: f64, mats: Vec<CMat>) -> Self {
        assert!(!mats.is_empty() && dt > 0.0);
        TimeDependentOperator { dim: mats[0].nrows(), rep: Rep::Tabulated { t0, dt, mats } }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, t: f64) -> CMat {
        match &self.rep {
            Rep::Terms { constant, terms } => {
                let mut m = constant.to_dense();
                for term in terms {
                    let c = (term.coeff)(t);
                    if c != 0.0 {
                        for &(i, j, v) in &term.op.entries {
                            m[(i as usize, j as usize)] += v * C64::new(c, 0.0);
                        }
                    }
                }
                m
            }
            Rep::Tabulated { t0, dt, mats } => {
                let n = mats.len();
                let x = (t - t0) / dt;
                if x <= 0.0 {
                    return mats[0].clone();
                }
                if x >= (n - 1) as f64 {
                    return mats[n - 1].clone();
                }
                let k = x.floor() as usize;
                let w = x - k as f64;
                &mats[k] * C64::new(1.0 - w, 0.0) + &mats[k + 1] * C64::new(w, 0.0)
            }
            Rep::Map(f) => f(t),
        }
    }

    /// Fill the integrator's scratch sparse matrix with the value at `t`.
    pub(crate) fn fill_sparse(&self, t: f64, out: &mut SparseOp) {
        out.dim = self.dim;
        out.entries.clear();
        match &self.rep {
            Rep::Terms { constant, terms } => {
                out.entries.extend_from_slice(&constant.entries);
                for term in terms {
                    let c = (term.coeff)(t);
                    if c != 0.0 {
                        let c = C64::new(c, 0.0);
                        out.entries.extend(term.op.entries.iter().map(|&(i, j, v)| (i, j, v * c)));
                    }
                }
            }
            _ => {
                let dense = self.eval(t);
                for j in 0..self.dim {
                    for i in 0..self.dim {
                        let v = dense[(i, j)];
                        if v != C64::new(0.0, 0.0) {
                            out.entries.push((i as u32, j as u32, v));
                        }
                    }
                }
            }
        }
    }

    /// max over sampled times of ‖H(t) - H(t)†‖_max.
    pub fn hermiticity_defect(&self, t_f: f64, samples: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..samples {
            let t = t_f * (k as f64) / ((samples - 1).max(1) as f64);
            let m = self.eval(t);
            let adj = m.adjoint();
            worst = worst.max(norm_max(&(m - adj)));
        }
        worst
    }
}
