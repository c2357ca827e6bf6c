//! State-splitting moves on square nonnegative matrices: outsplits and
//! out-amalgamations (which generate one-sided conjugacy), total
//! amalgamation, insplit verification, and balanced elementary strong shift
//! equivalence.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{Int, IntMatrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("matrix has a zero row; moves are defined for matrices with no zero rows")]
    ZeroRow,
    #[error("matrix is not a division matrix: {0}")]
    NotDivision(String),
    #[error("invalid outsplit spec: {0}")]
    InvalidSpec(String),
}

/// A rectangular {0,1}-matrix in which every row contains at least one 1 and
/// every column contains exactly one 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DivisionMatrix {
    inner: IntMatrix,
}

impl<'de> serde::Deserialize<'de> for DivisionMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let inner = IntMatrix::deserialize(deserializer)?;
        DivisionMatrix::try_new(inner).map_err(serde::de::Error::custom)
    }
}

impl DivisionMatrix {
    pub fn try_new(inner: IntMatrix) -> Result<Self, MoveError> {
        if !is_division_matrix(&inner) {
            return Err(MoveError::NotDivision(format!(
                "{} x {} matrix fails the division clauses",
                inner.rows(),
                inner.cols()
            )));
        }
        Ok(DivisionMatrix { inner })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.inner
    }

    /// Row holding the unique 1 of column `j`.
    pub fn class_of_column(&self, j: usize) -> usize {
        (0..self.inner.rows())
            .find(|&i| self.inner.get(i, j).is_one())
            .expect("division matrix has a 1 in every column")
    }
}

/// `true` iff `d` has {0,1} entries, every row holds at least one 1 and every
/// column holds exactly one 1.
pub fn is_division_matrix(d: &IntMatrix) -> bool {
    if !d.is_zero_one() {
        return false;
    }
    for i in 0..d.rows() {
        if d.row(i).iter().all(Zero::is_zero) {
            return false;
        }
    }
    for j in 0..d.cols() {
        let ones = (0..d.rows()).filter(|&i| d.get(i, j).is_one()).count();
        if ones != 1 {
            return false;
        }
    }
    true
}

/// Partition of each vertex's outgoing edges: for vertex `i`, an ordered list
/// of nonzero nonnegative row vectors summing to row `i` of the matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutsplitSpec {
    pub parts: Vec<Vec<Vec<Int>>>,
}

impl OutsplitSpec {
    /// One part per vertex equal to the whole row: the identity split.
    pub fn identity(a: &IntMatrix) -> OutsplitSpec {
        OutsplitSpec {
            parts: (0..a.rows()).map(|i| vec![a.row(i).to_vec()]).collect(),
        }
    }

    pub fn total_parts(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }
}

/// A certified outsplit `A = D E`, `B = E D`.
#[derive(Debug, Clone)]
pub struct Outsplit {
    pub b: IntMatrix,
    pub d: DivisionMatrix,
    pub e: IntMatrix,
}

/// Apply an outsplit spec to `a`. `D(i,k) = 1` iff split-vertex `k` belongs
/// to vertex `i` (split vertices are numbered vertex by vertex in part
/// order), `E` stacks the parts, and `B = E D`.
pub fn apply_outsplit(a: &IntMatrix, spec: &OutsplitSpec) -> Result<Outsplit, MoveError> {
    if !a.is_square() {
        return Err(MatrixError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    if a.has_zero_row() {
        return Err(MoveError::ZeroRow);
    }
    let n = a.size();
    if spec.parts.len() != n {
        return Err(MoveError::InvalidSpec(format!(
            "spec covers {} vertices, matrix has {n}",
            spec.parts.len()
        )));
    }
    for (i, parts) in spec.parts.iter().enumerate() {
        if parts.is_empty() {
            return Err(MoveError::InvalidSpec(format!("vertex {i} has no parts")));
        }
        let mut sum = vec![Int::zero(); n];
        for part in parts {
            if part.len() != n {
                return Err(MoveError::InvalidSpec(format!(
                    "a part of vertex {i} has length {}, expected {n}",
                    part.len()
                )));
            }
            if part.iter().any(|e| e < &Int::zero()) {
                return Err(MoveError::InvalidSpec(format!(
                    "a part of vertex {i} has a negative entry"
                )));
            }
            if part.iter().all(Zero::is_zero) {
                return Err(MoveError::InvalidSpec(format!("vertex {i} has a zero part")));
            }
            for (s, p) in sum.iter_mut().zip(part) {
                *s += p;
            }
        }
        if sum != a.row(i) {
            return Err(MoveError::InvalidSpec(format!(
                "parts of vertex {i} do not sum to its row"
            )));
        }
    }

    let m = spec.total_parts();
    let mut d = IntMatrix::zero(n, m);
    let mut e = IntMatrix::zero(m, n);
    let mut k = 0usize;
    for (i, parts) in spec.parts.iter().enumerate() {
        for part in parts {
            d.set(i, k, Int::one());
            for (j, v) in part.iter().enumerate() {
                e.set(k, j, v.clone());
            }
            k += 1;
        }
    }
    let d = DivisionMatrix::try_new(d).expect("indicator of a partition");
    let b = e.checked_mul(d.matrix())?;
    debug_assert_eq!(d.matrix().checked_mul(&e).unwrap(), *a);
    debug_assert!(!b.has_zero_row());
    Ok(Outsplit { b, d, e })
}

/// One out-amalgamation step produced by grouping identical columns.
#[derive(Debug, Clone)]
pub struct AmalgamationStep {
    pub smaller: IntMatrix,
    pub d: DivisionMatrix,
    pub e: IntMatrix,
}

/// Group the vertices of `a` by identical columns and merge every class at
/// once. Returns `None` when all classes are singletons. The output satisfies
/// `a = E D` and `smaller = D E`, i.e. `a` is an outsplit of `smaller`.
pub fn out_amalgamation_step(a: &IntMatrix) -> Result<Option<AmalgamationStep>, MoveError> {
    out_amalgamation_step_ordered(a, None)
}

/// As `out_amalgamation_step`, but with an explicit ordering of the column
/// classes (indices into the class list in first-appearance order). Used to
/// certify amalgamation chains that land on a prescribed representative.
pub fn out_amalgamation_step_ordered(
    a: &IntMatrix,
    class_order: Option<&[usize]>,
) -> Result<Option<AmalgamationStep>, MoveError> {
    if !a.is_square() {
        return Err(MatrixError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    let n = a.size();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for j in 0..n {
        let col = a.col_vec(j);
        match classes.iter().position(|cl| a.col_vec(cl[0]) == col) {
            Some(c) => classes[c].push(j),
            None => classes.push(vec![j]),
        }
    }
    if classes.iter().all(|cl| cl.len() == 1) {
        return Ok(None);
    }
    if let Some(order) = class_order {
        debug_assert_eq!(order.len(), classes.len());
        classes = order.iter().map(|&c| classes[c].clone()).collect();
    }
    let m = classes.len();
    let mut d = IntMatrix::zero(m, n);
    let mut e = IntMatrix::zero(n, m);
    for (p, class) in classes.iter().enumerate() {
        for &j in class {
            d.set(p, j, Int::one());
        }
        let rep = class[0];
        for k in 0..n {
            e.set(k, p, a.get(k, rep).clone());
        }
    }
    let d = DivisionMatrix::try_new(d).expect("indicator of a partition");
    let smaller = d.matrix().checked_mul(&e)?;
    debug_assert_eq!(e.checked_mul(d.matrix()).unwrap(), *a);
    Ok(Some(AmalgamationStep { smaller, d, e }))
}

/// A single certified move between two matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    #[serde(flatten)]
    pub kind: MoveKind,
    pub from: IntMatrix,
    pub to: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveKind {
    /// `from = D E`, `to = E D`.
    Outsplit { d: DivisionMatrix, e: IntMatrix },
    /// `from = E D`, `to = D E`.
    Outamalgamation { d: DivisionMatrix, e: IntMatrix },
    /// `from = S R_from`, `to = S R_to`, `R_from S = R_to S`.
    BalancedElementary {
        s: IntMatrix,
        r_from: IntMatrix,
        r_to: IntMatrix,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveViolation {
    #[error("equation {equation} fails")]
    Equation { equation: &'static str },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl Move {
    pub fn outsplit(from: IntMatrix, split: Outsplit) -> Move {
        Move {
            kind: MoveKind::Outsplit {
                d: split.d,
                e: split.e,
            },
            from,
            to: split.b,
        }
    }

    pub fn outamalgamation(from: IntMatrix, step: AmalgamationStep) -> Move {
        Move {
            kind: MoveKind::Outamalgamation {
                d: step.d,
                e: step.e,
            },
            from,
            to: step.smaller,
        }
    }

    /// Check the defining equations of the move kind exactly.
    pub fn verify(&self) -> Result<(), MoveViolation> {
        let eq = |name: &'static str, lhs: Result<IntMatrix, MatrixError>, rhs: &IntMatrix| {
            let lhs = lhs?;
            if &lhs == rhs {
                Ok(())
            } else {
                Err(MoveViolation::Equation { equation: name })
            }
        };
        match &self.kind {
            MoveKind::Outsplit { d, e } => {
                eq("from = D*E", d.matrix().checked_mul(e), &self.from)?;
                eq("to = E*D", e.checked_mul(d.matrix()), &self.to)
            }
            MoveKind::Outamalgamation { d, e } => {
                eq("from = E*D", e.checked_mul(d.matrix()), &self.from)?;
                eq("to = D*E", d.matrix().checked_mul(e), &self.to)
            }
            MoveKind::BalancedElementary { s, r_from, r_to } => {
                eq("from = S*R_from", s.checked_mul(r_from), &self.from)?;
                eq("to = S*R_to", s.checked_mul(r_to), &self.to)?;
                let lhs = r_from.checked_mul(s)?;
                let rhs = r_to.checked_mul(s)?;
                if lhs == rhs {
                    Ok(())
                } else {
                    Err(MoveViolation::Equation {
                        equation: "R_from*S = R_to*S",
                    })
                }
            }
        }
    }

    /// The same move read backwards.
    pub fn inverse(&self) -> Move {
        let kind = match &self.kind {
            MoveKind::Outsplit { d, e } => MoveKind::Outamalgamation {
                d: d.clone(),
                e: e.clone(),
            },
            MoveKind::Outamalgamation { d, e } => MoveKind::Outsplit {
                d: d.clone(),
                e: e.clone(),
            },
            MoveKind::BalancedElementary { s, r_from, r_to } => MoveKind::BalancedElementary {
                s: s.clone(),
                r_from: r_to.clone(),
                r_to: r_from.clone(),
            },
        };
        Move {
            kind,
            from: self.to.clone(),
            to: self.from.clone(),
        }
    }
}

/// An ordered, certified chain of moves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSequence {
    pub start: IntMatrix,
    pub steps: Vec<Move>,
}

impl MoveSequence {
    pub fn empty(start: IntMatrix) -> MoveSequence {
        MoveSequence {
            start,
            steps: Vec::new(),
        }
    }

    pub fn end(&self) -> &IntMatrix {
        self.steps.last().map(|m| &m.to).unwrap_or(&self.start)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: Move) {
        debug_assert_eq!(&step.from, self.end());
        self.steps.push(step);
    }

    /// The reversed chain, every move inverted.
    pub fn reversed(&self) -> MoveSequence {
        MoveSequence {
            start: self.end().clone(),
            steps: self.steps.iter().rev().map(Move::inverse).collect(),
        }
    }

    /// Concatenate two chains; `other.start` must equal `self.end()`.
    pub fn then(mut self, other: &MoveSequence) -> MoveSequence {
        debug_assert_eq!(self.end(), &other.start);
        self.steps.extend(other.steps.iter().cloned());
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveSequenceError {
    #[error("step {index}: matrices do not chain (from != previous to)")]
    BrokenChain { index: usize },
    #[error("step {index}: {violation}")]
    Step {
        index: usize,
        violation: MoveViolation,
    },
}

/// Replay every step of a chain: each move's equations must hold and the
/// matrices must chain up. Reports the first failing step.
pub fn verify_move_sequence(seq: &MoveSequence) -> Result<(), MoveSequenceError> {
    let mut current = &seq.start;
    for (index, step) in seq.steps.iter().enumerate() {
        if &step.from != current {
            return Err(MoveSequenceError::BrokenChain { index });
        }
        step.verify()
            .map_err(|violation| MoveSequenceError::Step { index, violation })?;
        current = &step.to;
    }
    Ok(())
}

/// Result of a total amalgamation: the fixed point of repeated
/// out-amalgamation together with the certified chain reaching it.
#[derive(Debug, Clone)]
pub struct TotalAmalgamation {
    pub total: IntMatrix,
    pub seq: MoveSequence,
}

/// Iterate `out_amalgamation_step` until no two columns agree. Unique up to
/// conjugation by a permutation matrix.
pub fn total_amalgamation(a: &IntMatrix) -> Result<TotalAmalgamation, MoveError> {
    if !a.is_square() {
        return Err(MatrixError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    if a.has_zero_row() {
        return Err(MoveError::ZeroRow);
    }
    let mut seq = MoveSequence::empty(a.clone());
    let mut current = a.clone();
    while let Some(step) = out_amalgamation_step(&current)? {
        let next = step.smaller.clone();
        seq.push(Move::outamalgamation(current, step));
        current = next;
    }
    Ok(TotalAmalgamation {
        total: current,
        seq,
    })
}

/// Check of a balanced elementary strong shift equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalancedCheck {
    pub valid: bool,
    pub s_is_division_transpose: bool,
}

/// `a = s r_a`, `b = s r_b`, `r_a s = r_b s`. The division-matrix case has
/// `s = D^t`; the general left factor is accepted as well and reported via
/// the second flag.
pub fn verify_balanced_elementary(
    a: &IntMatrix,
    b: &IntMatrix,
    s: &IntMatrix,
    r_a: &IntMatrix,
    r_b: &IntMatrix,
) -> Result<BalancedCheck, MoveError> {
    let sa = s.checked_mul(r_a)?;
    let sb = s.checked_mul(r_b)?;
    let ras = r_a.checked_mul(s)?;
    let rbs = r_b.checked_mul(s)?;
    let valid = &sa == a && &sb == b && ras == rbs;
    Ok(BalancedCheck {
        valid,
        s_is_division_transpose: is_division_matrix(&s.transpose()),
    })
}

/// `a = e d^t` and `b = d^t e` exactly: `b` is an insplit of `a`.
pub fn verify_insplit(
    a: &IntMatrix,
    b: &IntMatrix,
    d: &DivisionMatrix,
    e: &IntMatrix,
) -> Result<bool, MoveError> {
    let dt = d.matrix().transpose();
    let edt = e.checked_mul(&dt)?;
    let dte = dt.checked_mul(e)?;
    Ok(&edt == a && &dte == b)
}
