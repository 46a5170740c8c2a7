//! Operator identities equivalent to the three criteria holding for every
//! density operator.

use serde::{Deserialize, Serialize};

use super::ops::{ComplexMatrix, Projector, ProjectorFamily};
use crate::compat::CriterionKind;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub enum Operand<'a> {
    Single(&'a Projector),
    Family(&'a ProjectorFamily),
}

impl Operand<'_> {
    fn dim(&self) -> usize {
        match self {
            Operand::Single(p) => p.dim(),
            Operand::Family(f) => f.dim(),
        }
    }

    fn shape(&self) -> &'static str {
        match self {
            Operand::Single(_) => "single projector",
            Operand::Family(_) => "projector family",
        }
    }
}

/// Which identity was checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityForm {
    /// The identity obtained by translating the criterion directly.
    Operator,
    /// Single-pair non-disturbance, `PQPQP = PQP`; an equivalent form
    /// derived here rather than taken from the family statement.
    DerivedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub kind: CriterionKind,
    pub form: IdentityForm,
    /// Largest Frobenius norm over the identity's equations.
    pub defect: f64,
    pub holds: bool,
}

fn triple(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix) -> ComplexMatrix {
    a * b * c
}

/// `||PQP - QPQ||`.
pub fn order_exchange_defect(p: &Projector, q: &Projector) -> f64 {
    let (p, q) = (p.matrix(), q.matrix());
    (triple(p, q, p) - triple(q, p, q)).norm()
}

/// `||sum_s Q_s P Q_s - P||`.
pub fn ignored_defect(p: &Projector, family: &ProjectorFamily) -> f64 {
    let d = p.dim();
    let sum = family
        .members()
        .iter()
        .fold(ComplexMatrix::zeros(d, d), |acc, qs| acc + triple(qs.matrix(), p.matrix(), qs.matrix()));
    (sum - p.matrix()).norm()
}

/// `max_{j,j'} ||P_j Q P_j' Q P_j - delta_jj' P_j Q P_j||`.
pub fn nondisturbance_family_defect(family: &ProjectorFamily, q: &Projector) -> f64 {
    let q = q.matrix();
    let mut worst: f64 = 0.0;
    for (j, pj) in family.members().iter().enumerate() {
        let pj = pj.matrix();
        let pqp = triple(pj, q, pj);
        for (jp, pjp) in family.members().iter().enumerate() {
            let lhs = pj * q * pjp.matrix() * q * pj;
            let diff = if j == jp { lhs - &pqp } else { lhs };
            worst = worst.max(diff.norm());
        }
    }
    worst
}

/// `||PQPQP - PQP||`.
pub fn nondisturbance_pair_defect(p: &Projector, q: &Projector) -> f64 {
    let (p, q) = (p.matrix(), q.matrix());
    let pqp = triple(p, q, p);
    (p * q * &pqp - &pqp).norm()
}

/// Checks the operator identity for `kind`.
///
/// Shapes: order exchange takes two single projectors; ignored measurement
/// a single `p` and a family `q`; non-disturbance a family `p` and a single
/// `q`, or two singles for the derived pair form.
pub fn criterion_identity_check(kind: CriterionKind, p: Operand<'_>, q: Operand<'_>, tol: f64) -> Result<IdentityCheck> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let (form, defect) = match (kind, p, q) {
        (CriterionKind::OrderExchange, Operand::Single(p), Operand::Single(q)) => {
            (IdentityForm::Operator, order_exchange_defect(p, q))
        }
        (CriterionKind::IgnoredMeasurement, Operand::Single(p), Operand::Family(f)) => {
            (IdentityForm::Operator, ignored_defect(p, f))
        }
        (CriterionKind::NonDisturbance, Operand::Family(f), Operand::Single(q)) => {
            (IdentityForm::Operator, nondisturbance_family_defect(f, q))
        }
        (CriterionKind::NonDisturbance, Operand::Single(p), Operand::Single(q)) => {
            (IdentityForm::DerivedForm, nondisturbance_pair_defect(p, q))
        }
        (kind, p, q) => {
            return Err(Error::ShapeMismatch(format!(
                "{kind:?} does not take ({}, {})",
                p.shape(),
                q.shape()
            )))
        }
    };
    Ok(IdentityCheck {
        kind,
        form,
        defect,
        holds: defect <= tol,
    })
}
