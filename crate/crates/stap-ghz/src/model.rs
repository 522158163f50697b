//! The concrete three-atom/bimodal-cavity model: interaction Hamiltonians,
//! the single-excitation basis, the GHZ target and the dissipator set.
//!
//! Natural units ħ = 1, λ = 1 throughout: every rate and time is expressed
//! relative to the cavity coupling.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{
    annihilator, atomic_transition, Atom, BasisState, CMat, Ket, Level, Mode, Operator,
    StateSpace, TimeDependentOperator,
};
use crate::pulses::{ApfPulse, StirapPulseParams};

/// Couplings, detuning, laser phase and operation time (λ units).
#[derive(Copy, Clone, Debug)]
pub struct ModelParams {
    pub lambda_l: f64,
    pub lambda_r: f64,
    pub delta: f64,
    pub beta: f64,
    pub t_f: f64,
}

impl ModelParams {
    pub fn symmetric(delta: f64, beta: f64, t_f: f64) -> Self {
        ModelParams { lambda_l: 1.0, lambda_r: 1.0, delta, beta, t_f }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_l > 0.0 && self.lambda_r > 0.0) {
            return Err(Error::Domain("cavity couplings must be positive".into()));
        }
        if !(self.t_f > 0.0) {
            return Err(Error::Domain("operation time must be positive".into()));
        }
        Ok(())
    }
}

/// Cavity decay and atomic branch decay rates (λ units).
#[derive(Copy, Clone, Debug)]
pub struct NoiseParams {
    pub kappa_l: f64,
    pub kappa_r: f64,
    pub gammas: [f64; 6],
}

impl NoiseParams {
    pub fn none() -> Self {
        NoiseParams { kappa_l: 0.0, kappa_r: 0.0, gammas: [0.0; 6] }
    }

    /// κ_l = κ_r = κ and γ_n = γ/2 for every branch.
    pub fn symmetric(kappa: f64, gamma: f64) -> Self {
        NoiseParams { kappa_l: kappa, kappa_r: kappa, gammas: [gamma / 2.0; 6] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kappa_l < 0.0 || self.kappa_r < 0.0 || self.gammas.iter().any(|&g| g < 0.0) {
            return Err(Error::Domain("decay rates must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.kappa_l == 0.0 && self.kappa_r == 0.0 && self.gammas.iter().all(|&g| g == 0.0)
    }
}

/// The eight jump operators, √rate pre-multiplied.
#[derive(Clone, Debug)]
pub struct LindbladSet {
    pub ops: Vec<Operator>,
}

impl LindbladSet {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// The named single-excitation kets ψ₁…ψ₇ spanning the invariant subspace
/// reached from |f, g_l, g_r⟩|0,0⟩.
#[derive(Clone, Debug)]
pub struct SingleExcitation {
    pub indices: [usize; 7],
}

fn seven_states() -> [BasisState; 7] {
    use Level::{E, F, Gl, Gr};
    [
        BasisState { atom1: F, atom2: Gl, atom3: Gr, n_l: 0, n_r: 0 },
        BasisState { atom1: E, atom2: Gl, atom3: Gr, n_l: 0, n_r: 0 },
        BasisState { atom1: Gl, atom2: Gl, atom3: Gr, n_l: 1, n_r: 0 },
        BasisState { atom1: Gl, atom2: E, atom3: Gr, n_l: 0, n_r: 0 },
        BasisState { atom1: Gl, atom2: Gr, atom3: Gr, n_l: 0, n_r: 1 },
        BasisState { atom1: Gl, atom2: Gr, atom3: E, n_l: 0, n_r: 0 },
        BasisState { atom1: Gl, atom2: Gr, atom3: F, n_l: 0, n_r: 0 },
    ]
}

impl SingleExcitation {
    pub fn new(space: &StateSpace) -> Result<Self> {
        let mut indices = [0usize; 7];
        for (k, s) in seven_states().iter().enumerate() {
            indices[k] = space
                .index_of(s)
                .ok_or_else(|| Error::Internal("single-excitation state not enumerable".into()))?;
        }
        Ok(SingleExcitation { indices })
    }

    /// ψ_k as a full-space ket (`k` is 1-based to match the usual naming).
    pub fn ket(&self, space: &StateSpace, k: usize) -> Ket {
        let mut v = crate::hilbert::CVec::zeros(space.dim());
        v[self.indices[k - 1]] = C64::new(1.0, 0.0);
        Ket::from_vec(v)
    }
}

/// The ordered list |ψ₁⟩…|ψ₇⟩ as full-space kets.
pub fn single_excitation_basis(space: &StateSpace) -> Result<Vec<Ket>> {
    let sub = SingleExcitation::new(space)?;
    Ok((1..=7).map(|k| sub.ket(space, k)).collect())
}

/// The static atom-cavity exchange part: Σ_{m=1,2} λ_l a_l|e⟩_m⟨g_l| +
/// Σ_{n=2,3} λ_r a_r|e⟩_n⟨g_r| + H.c.
pub fn cavity_hamiltonian(space: &StateSpace, lambda_l: f64, lambda_r: f64) -> Result<Operator> {
    let a_l = annihilator(space, Mode::Left);
    let a_r = annihilator(space, Mode::Right);
    let mut h = CMat::zeros(space.dim(), space.dim());
    for (atom, mode, lambda) in [
        (Atom::One, &a_l, lambda_l),
        (Atom::Two, &a_l, lambda_l),
        (Atom::Two, &a_r, lambda_r),
        (Atom::Three, &a_r, lambda_r),
    ] {
        let g = match mode as *const _ == &a_l as *const _ {
            true => Level::Gl,
            false => Level::Gr,
        };
        let up = atomic_transition(space, atom, g, Level::E)?;
        let term = &mode.mat * &up.mat * C64::new(lambda, 0.0);
        h += &term + term.adjoint();
    }
    Operator::new_hermitian(h)
}

/// Σ_k |e⟩_k⟨e| embedded in the full space.
pub fn excited_projector(space: &StateSpace) -> Result<Operator> {
    let mut h = CMat::zeros(space.dim(), space.dim());
    for atom in crate::hilbert::ATOMS {
        let p = atomic_transition(space, atom, Level::E, Level::E)?;
        h += &p.mat;
    }
    Operator::new_hermitian(h)
}

fn laser_parts(space: &StateSpace, beta: f64) -> Result<(CMat, CMat)> {
    // Hermitian parts multiplying Ω₁(t) and Ω₃(t):
    //   Ω₁(t)(|e⟩₁⟨f| + |f⟩₁⟨e|) and Ω₃(t)(e^{iβ}|e⟩₃⟨f| + e^{-iβ}|f⟩₃⟨e|)
    let up1 = atomic_transition(space, Atom::One, Level::F, Level::E)?;
    let up3 = atomic_transition(space, Atom::Three, Level::F, Level::E)?;
    let part1 = &up1.mat + up1.mat.adjoint();
    let phase = C64::from_polar(1.0, beta);
    let m3 = &up3.mat * phase;
    let part3 = &m3 + m3.adjoint();
    Ok((part1, part3))
}

/// The resonant interaction Hamiltonian H_al + H_ac under the rotating-wave
/// approximation.
pub fn resonant_hamiltonian(
    space: &StateSpace,
    pulse: &StirapPulseParams,
    params: &ModelParams,
) -> Result<TimeDependentOperator> {
    params.validate()?;
    pulse.validate()?;
    let (part1, part3) = laser_parts(space, params.beta)?;
    let h_ac = cavity_hamiltonian(space, params.lambda_l, params.lambda_r)?;
    let p1 = *pulse;
    let p3 = *pulse;
    Ok(TimeDependentOperator::from_parts(space.dim())
        .with_constant(&h_ac.mat)
        .with_term(move |t| p1.omega1(t), &part1)
        .with_term(move |t| p3.omega3(t), &part3))
}

/// The detuned replacement Hamiltonian: both lasers driven by the
/// synthesized Ω̃(t) with relative phase β', all excited levels lifted by Δ.
/// The detuning entering the Hamiltonian comes from `params` so that design
/// and realization can be perturbed independently.
pub fn apf_hamiltonian(
    space: &StateSpace,
    apf: &ApfPulse,
    params: &ModelParams,
) -> Result<TimeDependentOperator> {
    params.validate()?;
    let (part1, part3) = laser_parts(space, apf.beta_prime)?;
    let h_ac = cavity_hamiltonian(space, params.lambda_l, params.lambda_r)?;
    let h_e = excited_projector(space)?;
    let constant = &h_ac.mat + &h_e.mat * C64::new(params.delta, 0.0);
    let a1 = *apf;
    let a3 = *apf;
    Ok(TimeDependentOperator::from_parts(space.dim())
        .with_constant(&constant)
        .with_term(move |t| a1.omega_tilde(t), &part1)
        .with_term(move |t| a3.omega_tilde(t), &part3))
}

/// The eight Lindblad operators of the dissipative model: two cavity decays
/// and six atomic branches, embedded in the full space with √rate folded in.
pub fn build_lindblad_set(space: &StateSpace, noise: &NoiseParams) -> Result<LindbladSet> {
    noise.validate()?;
    let mut ops = Vec::with_capacity(8);
    let scale = |op: Operator, rate: f64| Operator::new(op.mat * C64::new(rate.sqrt(), 0.0));
    ops.push(scale(annihilator(space, Mode::Left), noise.kappa_l));
    ops.push(scale(annihilator(space, Mode::Right), noise.kappa_r));
    let branches: [(Atom, Level); 6] = [
        (Atom::One, Level::F),
        (Atom::One, Level::Gl),
        (Atom::Two, Level::Gl),
        (Atom::Two, Level::Gr),
        (Atom::Three, Level::F),
        (Atom::Three, Level::Gr),
    ];
    for ((atom, target), &gamma) in branches.iter().zip(&noise.gammas) {
        ops.push(scale(atomic_transition(space, *atom, Level::E, *target)?, gamma));
    }
    Ok(LindbladSet { ops })
}

/// The target state (|ψ₁⟩ - e^{iβ}|ψ₇⟩)/√2.
pub fn ghz_state(space: &StateSpace, beta: f64) -> Result<Ket> {
    let sub = SingleExcitation::new(space)?;
    let mut v = crate::hilbert::CVec::zeros(space.dim());
    let inv = 1.0 / 2.0f64.sqrt();
    v[sub.indices[0]] = C64::new(inv, 0.0);
    v[sub.indices[6]] = -C64::from_polar(inv, beta);
    Ok(Ket::from_vec(v))
}
