//! Single-qubit algebra: Pauli operators, Bloch vectors, the SU(2) -> SO(3)
//! rotation map and Bell-basis construction.
//!
//! Global phases are never normalized away. Every quantity derived downstream
//! (rotation matrices, overlaps squared, density matrices) is invariant under
//! them, and the property tests assert that invariance.

use nalgebra::Matrix3;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, StateVector, STRUCTURAL_TOL};

/// Rotation angles with |sin θ| below this have no well-conditioned axis.
const AXIS_CONDITION_TOL: f64 = 1e-6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pauli operator by index: 0 -> identity, 1 -> σx, 2 -> σy, 3 -> σz.
pub fn pauli(index: usize) -> Result<ComplexMatrix> {
    let rows: [Complex64; 4] = match index {
        0 => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        1 => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        2 => [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        3 => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        _ => return Err(Error::arg(format!("Pauli index {index} not in 0..=3"))),
    };
    ComplexMatrix::from_rows(2, &rows)
}

/// All four Pauli operators `[identity, σx, σy, σz]`.
pub fn paulis() -> [ComplexMatrix; 4] {
    std::array::from_fn(|i| pauli(i).expect("static index"))
}

/// Unit vector on the Bloch sphere; represents a pure qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    x: f64,
    y: f64,
    z: f64,
}

impl BlochVector {
    /// Unit-norm tolerance enforced at construction.
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::arg(format!("Bloch vector norm {norm} is not 1")));
        }
        Ok(Self { x, y, z })
    }

    /// From spherical angles: polar θ from +z, azimuth φ from +x.
    pub fn from_polar(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// The pure state |φ> with this Bloch vector, as a dim-2 ket.
    ///
    /// Amplitudes are (√((1+z)/2), (x+iy)/√(2(1+z))); the global phase is
    /// arbitrary and no consumer depends on it.
    pub fn state_vector(&self) -> StateVector {
        let (c0, c1) = self.amplitudes();
        StateVector::from_components(&[c0, c1]).expect("dim 2")
    }

    /// Ket amplitudes as a stack pair, for hot loops.
    pub(crate) fn amplitudes(&self) -> (Complex64, Complex64) {
        let w = 1.0 + self.z;
        if w < 1e-14 {
            // south pole: |1> up to phase
            return (c(0.0, 0.0), c(1.0, 0.0));
        }
        let c0 = (w / 2.0).sqrt();
        let den = (2.0 * w).sqrt();
        (c(c0, 0.0), c(self.x / den, self.y / den))
    }

    /// Extract the Bloch vector of a pure density matrix via v_j = Tr(ρ σ_j).
    ///
    /// Fails for mixed states (the extracted vector is shorter than 1).
    pub fn from_density(rho: &ComplexMatrix) -> Result<Self> {
        if rho.dim() != 2 {
            return Err(Error::arg("Bloch extraction requires a 2x2 density matrix"));
        }
        rho.validate_density(STRUCTURAL_TOL)?;
        let x = (rho.get(0, 1) + rho.get(1, 0)).re;
        let y = ((rho.get(0, 1) - rho.get(1, 0)) * c(0.0, 1.0)).re;
        let z = (rho.get(0, 0) - rho.get(1, 1)).re;
        Self::new(x, y, z)
    }
}

/// ρ = (1/2)(I + v·σ), a rank-1 projector for unit v.
pub fn bloch_to_density(v: &BlochVector) -> ComplexMatrix {
    let [x, y, z] = v.components();
    ComplexMatrix::from_rows(
        2,
        &[
            c((1.0 + z) / 2.0, 0.0),
            c(x / 2.0, -y / 2.0),
            c(x / 2.0, y / 2.0),
            c((1.0 - z) / 2.0, 0.0),
        ],
    )
    .expect("dim 2")
}

/// 3x3 real rotation matrix, the SO(3) image of a single-qubit unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3 {
    m: Matrix3<f64>,
}

impl Rotation3 {
    /// Wrap a matrix after checking orthogonality and det = +1.
    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self> {
        let gram = m.transpose() * m;
        let defect = (gram - Matrix3::identity()).abs().max();
        if defect > STRUCTURAL_TOL {
            return Err(Error::arg(format!(
                "matrix is not orthogonal (defect {defect:.3e})"
            )));
        }
        if (m.determinant() - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::arg("matrix has determinant != +1"));
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self {
            m: Matrix3::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.m[(row, col)]
    }

    /// Trace; lies in [-1, 3] and equals 2 cos θ + 1.
    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    /// Rotation angle θ in [0, π] from the trace formula, clamped before acos.
    pub fn angle(&self) -> f64 {
        ((self.trace() - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
    }

    /// Rotation axis, or `None` near θ = 0 or θ = π where the extraction from
    /// the antisymmetric part is ill-conditioned.
    pub fn axis(&self) -> Option<[f64; 3]> {
        let theta = self.angle();
        let s = theta.sin();
        if s.abs() < AXIS_CONDITION_TOL {
            return None;
        }
        let f = 1.0 / (2.0 * s);
        Some([
            f * (self.m[(2, 1)] - self.m[(1, 2)]),
            f * (self.m[(0, 2)] - self.m[(2, 0)]),
            f * (self.m[(1, 0)] - self.m[(0, 1)]),
        ])
    }

    /// Composition (matrix product).
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            m: self.m * other.m,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.m - other.m).abs().max()
    }
}

/// Axis-angle record for a single-qubit unitary, the on-disk representation
/// used by scenario files and optimizer output. Unitarity is automatic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisAngle {
    pub axis: [f64; 3],
    pub angle: f64,
}

impl AxisAngle {
    pub fn to_unitary(&self) -> Result<ComplexMatrix> {
        unitary_from_axis_angle(self.axis, self.angle)
    }

    /// Extract the axis-angle form of a 2x2 unitary, discarding its global
    /// phase: X = e^{iχ} (cos(θ/2) I − i sin(θ/2) n·σ) maps to (n, θ).
    ///
    /// The identity (and anything within phase of it) maps to a zero angle
    /// about +z.
    pub fn from_unitary(x: &ComplexMatrix) -> Result<Self> {
        require_unitary_2x2(x, "axis-angle extraction input")?;
        // divide out the phase: det X = e^{2iχ}
        let det = x.get(0, 0) * x.get(1, 1) - x.get(0, 1) * x.get(1, 0);
        let phase = Complex64::from_polar(1.0, det.arg() / 2.0);
        let entry = |i, j| x.get(i, j) / phase;
        let cos_half = 0.5 * (entry(0, 0) + entry(1, 1)).re;
        let sv = [
            -0.5 * (entry(0, 1) + entry(1, 0)).im,
            0.5 * (entry(1, 0) - entry(0, 1)).re,
            -0.5 * (entry(0, 0) - entry(1, 1)).im,
        ];
        let sin_half = (sv[0] * sv[0] + sv[1] * sv[1] + sv[2] * sv[2]).sqrt();
        if sin_half < 1e-12 {
            return Ok(Self {
                axis: [0.0, 0.0, 1.0],
                angle: 0.0,
            });
        }
        Ok(Self {
            axis: sv.map(|v| v / sin_half),
            angle: 2.0 * sin_half.atan2(cos_half),
        })
    }
}

/// SU(2) element cos(θ/2) I − i sin(θ/2) (n·σ) for rotation angle θ about n.
///
/// A non-unit axis is normalized; a zero axis is rejected.
pub fn unitary_from_axis_angle(axis: [f64; 3], angle: f64) -> Result<ComplexMatrix> {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if norm < 1e-12 {
        return Err(Error::arg("rotation axis must be non-zero"));
    }
    let [nx, ny, nz] = [axis[0] / norm, axis[1] / norm, axis[2] / norm];
    let half = angle / 2.0;
    let (s, co) = (half.sin(), half.cos());
    ComplexMatrix::from_rows(
        2,
        &[
            c(co, -s * nz),
            c(-s * ny, -s * nx),
            c(s * ny, -s * nx),
            c(co, s * nz),
        ],
    )
}

fn require_unitary_2x2(x: &ComplexMatrix, what: &str) -> Result<()> {
    if x.dim() != 2 {
        return Err(Error::arg(format!("{what} must be 2x2")));
    }
    if !x.is_unitary(STRUCTURAL_TOL) {
        return Err(Error::arg(format!("{what} is not unitary")));
    }
    Ok(())
}

/// The rotation matrix of a qubit unitary: \[R\]_{jk} = Tr(X σ_k X† σ_j) / 2,
/// i.e. the R with X (a·σ) X† = (Ra)·σ.
///
/// Invariant under a global phase of X. With this index order the map is a
/// homomorphism, R(XY) = R(X) R(Y), and for X = exp(−i(θ/2) n·σ) the image
/// is the right-handed rotation by θ about n. The transposed element order
/// Tr(X σ_j X† σ_k)/2 appears in the literature as well; both conventions
/// give identical traces and quadratic forms, which is all the fidelity
/// formulas consume.
pub fn su2_to_so3(x: &ComplexMatrix) -> Result<Rotation3> {
    require_unitary_2x2(x, "su2_to_so3 input")?;
    let xd = x.dagger();
    let sigma = paulis();
    let mut m = Matrix3::zeros();
    for k in 0..3 {
        let conjugated = &(x * &sigma[k + 1]) * &xd;
        for j in 0..3 {
            m[(j, k)] = 0.5 * (&conjugated * &sigma[j + 1]).trace().re;
        }
    }
    Rotation3::from_matrix(m)
}

/// The maximally entangled two-qubit state (|00> + |11>)/√2.
pub fn phi_plus() -> StateVector {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_components(&[c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)]).expect("dim 4")
}

/// Bell-type measurement basis |Ψ_α> = (U_α ⊗ I)|Φ+>.
pub fn bell_basis(u: &[ComplexMatrix; 4]) -> Result<[StateVector; 4]> {
    for (i, m) in u.iter().enumerate() {
        require_unitary_2x2(m, &format!("measurement unitary U[{i}]"))?;
    }
    let pair = phi_plus();
    let id = ComplexMatrix::identity(2);
    Ok(std::array::from_fn(|alpha| u[alpha].kron(&id).apply(&pair)))
}

/// True iff the four unitaries generate an orthonormal Bell-type basis,
/// i.e. Tr(U_α† U_β)/2 = δ_αβ within the structural tolerance.
pub fn validate_measurement(u: &[ComplexMatrix; 4]) -> Result<bool> {
    for (i, m) in u.iter().enumerate() {
        require_unitary_2x2(m, &format!("measurement unitary U[{i}]"))?;
    }
    for a in 0..4 {
        for b in 0..4 {
            let g = (&u[a].dagger() * &u[b]).trace() * 0.5;
            let target = if a == b { c(1.0, 0.0) } else { c(0.0, 0.0) };
            if (g - target).norm() > STRUCTURAL_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Haar-random 2x2 special unitary, drawn as a uniform point on S³.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        let [w, x, y, z] = q.map(|v| v / norm);
        // w I − i (x σx + y σy + z σz)
        return ComplexMatrix::from_rows(2, &[c(w, -z), c(-y, -x), c(y, -x), c(w, z)])
            .expect("dim 2");
    }
}
