//! The teleportation protocol over a Werner channel.
//!
//! Qubit ordering convention (fixed once, used everywhere): qubit 1 carries
//! the input state, qubits 2 and 3 hold the shared Werner pair. Alice
//! measures qubits (1,2), Bob holds qubit 3, and tensor products are ordered
//! 1 ⊗ 2 ⊗ 3. Index bugs in this layout are silent, hence the dense and
//! closed-form output paths below are cross-checked against each other in
//! the test suites.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, StateVector, STRUCTURAL_TOL};
use crate::qubit::{
    bell_basis, bloch_to_density, paulis, phi_plus, random_unitary, su2_to_so3,
    validate_measurement, BlochVector, Rotation3,
};

/// Werner channel with noise parameter p in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerChannel {
    p: f64,
}

impl WernerChannel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::arg(format!(
                "noise parameter p = {p} outside [0, 1]"
            )));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// The shared two-qubit state p |Φ+><Φ+| + (1 − p) I/4.
    pub fn state(&self) -> ComplexMatrix {
        werner_state(self)
    }
}

/// Werner state p |Φ+><Φ+| + (1 − p) I/4 on qubits (2,3).
pub fn werner_state(channel: &WernerChannel) -> ComplexMatrix {
    let entangled = phi_plus().projector().scale_re(channel.p);
    let noise = ComplexMatrix::identity(4).scale_re((1.0 - channel.p) / 4.0);
    &entangled + &noise
}

/// A teleportation strategy: four measurement unitaries U_α (defining the
/// Bell-type basis Alice measures in) and four correction unitaries V_α
/// (what Bob applies on outcome α).
///
/// The derived composites X_α = V_α U_α† and their rotation-matrix images
/// R_α determine every performance quantity, so they are computed once at
/// construction.
#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    u: [ComplexMatrix; 4],
    v: [ComplexMatrix; 4],
    x: [ComplexMatrix; 4],
    r: [Rotation3; 4],
}

impl ProtocolConfig {
    pub fn new(u: [ComplexMatrix; 4], v: [ComplexMatrix; 4]) -> Result<Self> {
        if !validate_measurement(&u)? {
            return Err(Error::config(
                "measurement unitaries do not form an orthonormal Bell-type basis",
            ));
        }
        for (i, m) in v.iter().enumerate() {
            if m.dim() != 2 || !m.is_unitary(STRUCTURAL_TOL) {
                return Err(Error::config(format!(
                    "correction unitary V[{i}] is not unitary"
                )));
            }
        }
        let x: [ComplexMatrix; 4] = std::array::from_fn(|a| &v[a] * &u[a].dagger());
        let mut r = [Rotation3::identity(); 4];
        for a in 0..4 {
            r[a] = su2_to_so3(&x[a])?;
        }
        Ok(Self { u, v, x, r })
    }

    /// The textbook optimum: U_α = V_α = σ_α, so every X_α is the identity.
    pub fn pauli_optimal() -> Self {
        Self::new(paulis(), paulis()).expect("Pauli set is orthonormal")
    }

    /// Pauli measurement with corrections keyed to permuted outcomes:
    /// V_α = σ_{perm\[α\]}. Models classical messages flipped in transit.
    pub fn pauli_permuted(perm: [usize; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &t in &perm {
            if t > 3 || seen[t] {
                return Err(Error::config(format!(
                    "{perm:?} is not a permutation of 0..=3"
                )));
            }
            seen[t] = true;
        }
        let s = paulis();
        let v: [ComplexMatrix; 4] = std::array::from_fn(|a| s[perm[a]].clone());
        Self::new(paulis(), v)
    }

    /// Random valid strategy: measurement W σ_α W' with random phases (an
    /// orthonormal family for any fixed W, W'), corrections Haar-random.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let w = random_unitary(rng);
        let wp = random_unitary(rng);
        let s = paulis();
        let u: [ComplexMatrix; 4] = std::array::from_fn(|a| {
            let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
            (&(&w * &s[a]) * &wp).scale(phase)
        });
        let v: [ComplexMatrix; 4] = std::array::from_fn(|_| random_unitary(rng));
        Self::new(u, v).expect("constructed family is orthonormal")
    }

    pub fn measurement(&self) -> &[ComplexMatrix; 4] {
        &self.u
    }

    pub fn correction(&self) -> &[ComplexMatrix; 4] {
        &self.v
    }

    /// X_α = V_α U_α†.
    pub fn composite(&self, alpha: usize) -> &ComplexMatrix {
        &self.x[alpha]
    }

    /// R_α = su2_to_so3(X_α).
    pub fn rotations(&self) -> &[Rotation3; 4] {
        &self.r
    }

    /// The four composites as stack 2x2 arrays, for sampling loops.
    pub(crate) fn composites_2x2(&self) -> [[[Complex64; 2]; 2]; 4] {
        std::array::from_fn(|a| self.x[a].as_2x2())
    }
}

/// Teleported output state via the explicit 8-dimensional simulation:
/// ρ̂ = |φ><φ| ⊗ ρ̂_W is projected onto each |Ψ_α> on qubits (1,2) by a
/// partial inner product, the branch is corrected with V_α, and the four
/// unnormalized branches are summed.
pub fn teleport_dense(
    input: &BlochVector,
    config: &ProtocolConfig,
    channel: &WernerChannel,
) -> Result<ComplexMatrix> {
    let rho_in = bloch_to_density(input);
    let rho8 = rho_in.kron(&werner_state(channel));
    let basis = bell_basis(&config.u)?;

    let mut out = ComplexMatrix::zeros(2);
    for (psi, v) in basis.iter().zip(&config.v) {
        let branch = project_first_two(&rho8, psi);
        let corrected = &(v * &branch) * &v.dagger();
        out = &out + &corrected;
    }
    Ok(out)
}

/// Partial inner product <ψ| ρ |ψ> over qubits (1,2) of a 3-qubit operator,
/// leaving a 2x2 operator on qubit 3.
fn project_first_two(rho8: &ComplexMatrix, psi: &StateVector) -> ComplexMatrix {
    debug_assert_eq!(rho8.dim(), 8);
    debug_assert_eq!(psi.dim(), 4);
    let mut entries = [Complex64::new(0.0, 0.0); 4];
    for i3 in 0..2 {
        for j3 in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..4 {
                for l in 0..4 {
                    acc += psi.get(k).conj() * rho8.get(k * 2 + i3, l * 2 + j3) * psi.get(l);
                }
            }
            entries[i3 * 2 + j3] = acc;
        }
    }
    ComplexMatrix::from_rows(2, &entries).expect("dim 2")
}

/// Teleported output state in reduced closed form:
/// (p/4) Σ_α X_α |φ><φ| X_α† + (1 − p)/2 I.
pub fn teleport_closed(
    input: &BlochVector,
    config: &ProtocolConfig,
    channel: &WernerChannel,
) -> ComplexMatrix {
    let rho_in = bloch_to_density(input);
    let mut sum = ComplexMatrix::zeros(2);
    for alpha in 0..4 {
        let x = &config.x[alpha];
        sum = &sum + &(&(x * &rho_in) * &x.dagger());
    }
    let noise = ComplexMatrix::identity(2).scale_re((1.0 - channel.p) / 2.0);
    &sum.scale_re(channel.p / 4.0) + &noise
}

/// Survival probability ξ = |<φ|X|φ>|² of the state |φ> under the unitary X.
pub fn xi(input: &BlochVector, x: &ComplexMatrix) -> Result<f64> {
    if x.dim() != 2 || !x.is_unitary(STRUCTURAL_TOL) {
        return Err(Error::arg("xi requires a 2x2 unitary"));
    }
    let (c0, c1) = input.amplitudes();
    Ok(xi_kernel(c0, c1, &x.as_2x2()))
}

#[inline]
pub(crate) fn xi_kernel(c0: Complex64, c1: Complex64, x: &[[Complex64; 2]; 2]) -> f64 {
    let t0 = x[0][0] * c0 + x[0][1] * c1;
    let t1 = x[1][0] * c0 + x[1][1] * c1;
    (c0.conj() * t0 + c1.conj() * t1).norm_sqr()
}

/// Fidelity of the teleported output against the pure input:
/// f = (p/4) Σ_α ξ_α + (1 − p)/2.
pub fn state_fidelity(
    input: &BlochVector,
    config: &ProtocolConfig,
    channel: &WernerChannel,
) -> f64 {
    fidelity_kernel(input, &config.composites_2x2(), channel.p)
}

/// Shared evaluation path for `state_fidelity` and the Monte-Carlo
/// estimators, so the oracle averages exactly the same per-sample values.
#[inline]
pub(crate) fn fidelity_kernel(
    input: &BlochVector,
    composites: &[[[Complex64; 2]; 2]; 4],
    p: f64,
) -> f64 {
    let (c0, c1) = input.amplitudes();
    let sum: f64 = composites.iter().map(|x| xi_kernel(c0, c1, x)).sum();
    p / 4.0 * sum + (1.0 - p) / 2.0
}
