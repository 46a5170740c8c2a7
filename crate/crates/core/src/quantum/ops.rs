//! Projectors, density operators and sequential Lüders probabilities.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Default tolerance for operator identities and probability equalities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Default tolerance for construction invariants (Hermitian, idempotent, trace).
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Relative residual below which a spanning vector counts as dependent.
const RESIDUAL_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `|v><v|`.
pub fn outer(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

fn check_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::InvalidOperator(format!("{}x{} is not a non-empty square matrix", m.nrows(), m.ncols())));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidOperator("non-finite entry".into()));
    }
    Ok(m.nrows())
}

fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn hermitian_defect(m: &ComplexMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

fn hermitize(m: ComplexMatrix) -> ComplexMatrix {
    (&m + m.adjoint()) * c(0.5, 0.0)
}

/// An orthogonal projector with its rank.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: ComplexMatrix,
    rank: usize,
}

impl Projector {
    /// Validates `matrix` as a projector: Hermitian, idempotent, integral trace.
    pub fn from_matrix(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let d = check_square(&matrix)?;
        let scale = tol * d as f64;
        if hermitian_defect(&matrix) > scale {
            return Err(Error::InvalidOperator("projector is not Hermitian".into()));
        }
        if (&matrix * &matrix - &matrix).norm() > scale {
            return Err(Error::InvalidOperator("projector is not idempotent".into()));
        }
        let tr = matrix.trace().re;
        let rank = tr.round();
        if (tr - rank).abs() > scale {
            return Err(Error::InvalidOperator(format!("trace {tr} is not an integer")));
        }
        Ok(Projector {
            matrix,
            rank: rank as usize,
        })
    }

    pub fn identity(d: usize) -> Self {
        Projector {
            matrix: ComplexMatrix::identity(d, d),
            rank: d,
        }
    }

    /// Projector onto the basis vectors `indices`.
    pub fn diagonal(d: usize, indices: &[usize]) -> Self {
        let mut m = ComplexMatrix::zeros(d, d);
        for &i in indices {
            m[(i, i)] = c(1.0, 0.0);
        }
        let rank = (0..d).filter(|&i| m[(i, i)].re == 1.0).count();
        Projector { matrix: m, rank }
    }

    /// `I - P`.
    pub fn complement(&self) -> Self {
        let d = self.dim();
        Projector {
            matrix: ComplexMatrix::identity(d, d) - &self.matrix,
            rank: d - self.rank,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `(||P - P^dag||, ||P^2 - P||)`.
    pub fn invariant_defects(&self) -> (f64, f64) {
        (
            hermitian_defect(&self.matrix),
            (&self.matrix * &self.matrix - &self.matrix).norm(),
        )
    }
}

/// Mutually orthogonal projectors summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorFamily {
    members: Vec<Projector>,
}

impl ProjectorFamily {
    pub fn new(members: Vec<Projector>, tol: f64) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidOperator("empty projector family".into()));
        };
        let d = first.dim();
        for m in &members {
            same_dim(d, m.dim())?;
        }
        let scale = tol * d as f64;
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if (a.matrix() * b.matrix()).norm() > scale {
                    return Err(Error::InvalidOperator("family members are not orthogonal".into()));
                }
            }
        }
        let sum = members
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, p| acc + p.matrix());
        if (sum - ComplexMatrix::identity(d, d)).norm() > scale {
            return Err(Error::InvalidOperator("family does not sum to the identity".into()));
        }
        Ok(ProjectorFamily { members })
    }

    /// `{P, I - P}`.
    pub fn binary(p: &Projector) -> Self {
        ProjectorFamily {
            members: vec![p.clone(), p.complement()],
        }
    }

    pub fn members(&self) -> &[Projector] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }
}

/// A trace-one positive semidefinite Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOp {
    matrix: ComplexMatrix,
}

impl DensityOp {
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let d = check_square(&matrix)?;
        let scale = tol * d as f64;
        if hermitian_defect(&matrix) > scale {
            return Err(Error::InvalidOperator("density operator is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > scale || tr.im.abs() > scale {
            return Err(Error::InvalidOperator(format!("trace {tr} is not 1")));
        }
        let min = SymmetricEigen::new(hermitize(matrix.clone()))
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min < -scale {
            return Err(Error::InvalidOperator(format!("negative eigenvalue {min}")));
        }
        Ok(DensityOp { matrix })
    }

    /// `|v><v| / <v|v>`.
    pub fn pure(v: &ComplexVector) -> Result<Self> {
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidOperator("zero state vector".into()));
        }
        Ok(DensityOp {
            matrix: outer(&(v / c(n, 0.0))),
        })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityOp {
            matrix: ComplexMatrix::identity(d, d) * c(1.0 / d as f64, 0.0),
        }
    }

    /// `|i><i|`.
    pub fn basis(d: usize, i: usize) -> Self {
        DensityOp {
            matrix: Projector::diagonal(d, &[i]).matrix,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `Tr(rho P)`, real part.
    pub fn expectation(&self, p: &Projector) -> Result<f64> {
        same_dim(self.dim(), p.dim())?;
        Ok((&self.matrix * p.matrix()).trace().re)
    }
}

/// Orthonormalizes `vectors` (two passes of modified Gram-Schmidt).
pub fn orthonormalize(vectors: &[ComplexVector]) -> Result<Vec<ComplexVector>> {
    let Some(first) = vectors.first() else {
        return Err(Error::InvalidArgument("no spanning vectors".into()));
    };
    let d = first.len();
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        same_dim(d, v.len())?;
        let norm0 = v.norm();
        if norm0 == 0.0 || !norm0.is_finite() {
            return Err(Error::RankDeficient { index });
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&w);
                w -= b * proj;
            }
        }
        let n = w.norm();
        if n <= RESIDUAL_TOL * norm0 {
            return Err(Error::RankDeficient { index });
        }
        basis.push(w / c(n, 0.0));
    }
    Ok(basis)
}

/// Projector onto the span of `vectors`; errors if they are dependent.
pub fn make_projector(vectors: &[ComplexVector]) -> Result<Projector> {
    let basis = orthonormalize(vectors)?;
    let d = basis[0].len();
    let matrix = basis
        .iter()
        .fold(ComplexMatrix::zeros(d, d), |acc, b| acc + outer(b));
    Ok(Projector {
        matrix: hermitize(matrix),
        rank: basis.len(),
    })
}

/// `P rho P / Tr(rho P)`.
pub fn lueders_condition(rho: &DensityOp, p: &Projector, tol: f64) -> Result<DensityOp> {
    let weight = rho.expectation(p)?;
    if weight <= tol {
        return Err(Error::ZeroCondition);
    }
    let m = p.matrix() * rho.matrix() * p.matrix() / c(weight, 0.0);
    Ok(DensityOp { matrix: hermitize(m) })
}

/// `Tr(P_n ... P_1 rho P_1 ... P_n)`, clamped to `[0, 1]`.
pub fn seq_prob_q(rho: &DensityOp, projs: &[&Projector]) -> Result<f64> {
    if projs.is_empty() {
        return Err(Error::InvalidArgument("empty projector sequence".into()));
    }
    let mut m = rho.matrix().clone();
    for p in projs {
        same_dim(rho.dim(), p.dim())?;
        m = p.matrix() * m * p.matrix();
    }
    Ok(m.trace().re.clamp(0.0, 1.0))
}

/// `||PQ - QP||_F`.
pub fn commutator_defect(p: &Projector, q: &Projector) -> Result<f64> {
    same_dim(p.dim(), q.dim())?;
    Ok((p.matrix() * q.matrix() - q.matrix() * p.matrix()).norm())
}
