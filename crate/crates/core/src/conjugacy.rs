//! Decisions for one-sided conjugacy and conjugate higher powers, via total
//! amalgamations and permutation equivalence.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{Int, IntMatrix};
use crate::moves::{total_amalgamation, MoveError, MoveSequence};

/// A bijection on `{0..n-1}` certifying `P^t M P = N`: witness `w` maps index
/// `i` of the source to index `w[i]` of the target, so
/// `M(i, j) = N(w[i], w[j])` for all `i, j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermWitness {
    pub mapping: Vec<usize>,
}

impl PermWitness {
    pub fn identity(n: usize) -> PermWitness {
        PermWitness {
            mapping: (0..n).collect(),
        }
    }

    pub fn inverse(&self) -> PermWitness {
        let mut inv = vec![0usize; self.mapping.len()];
        for (i, &w) in self.mapping.iter().enumerate() {
            inv[w] = i;
        }
        PermWitness { mapping: inv }
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &PermWitness) -> PermWitness {
        PermWitness {
            mapping: self.mapping.iter().map(|&i| other.mapping[i]).collect(),
        }
    }

    /// `P^t M P` under this witness.
    pub fn conjugate(&self, m: &IntMatrix) -> IntMatrix {
        m.conjugate_by_perm(&self.mapping)
    }

    /// Whether the witness carries `source` exactly onto `target`.
    pub fn certifies(&self, source: &IntMatrix, target: &IntMatrix) -> bool {
        self.mapping.len() == source.rows() && &self.conjugate(source) == target
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConjugacyError {
    #[error("paired matrices have different sizes: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error("power override {given} is below the default {minimum}")]
    PowerBelowDefault { given: usize, minimum: usize },
}

/// Invariant used to pre-partition vertices before the backtracking search:
/// permutation conjugation preserves it, so candidates only need to be tried
/// within matching classes.
fn vertex_signature(m: &IntMatrix, i: usize) -> (Vec<Int>, Vec<Int>, Int) {
    let mut row = m.row(i).to_vec();
    row.sort();
    let mut col = m.col_vec(i);
    col.sort();
    (row, col, m.get(i, i).clone())
}

fn backtrack_assign(
    pairs: &[(&IntMatrix, &IntMatrix)],
    candidates: &[Vec<usize>],
    mapping: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let i = mapping.len();
    let n = candidates.len();
    if i == n {
        return true;
    }
    'cand: for &target in &candidates[i] {
        if used[target] {
            continue;
        }
        // consistency with every already assigned index, in both directions
        for (j, &tj) in mapping.iter().enumerate() {
            for &(a, b) in pairs {
                if a.get(i, j) != b.get(target, tj) || a.get(j, i) != b.get(tj, target) {
                    continue 'cand;
                }
            }
        }
        for &(a, b) in pairs {
            if a.get(i, i) != b.get(target, target) {
                continue 'cand;
            }
        }
        mapping.push(target);
        used[target] = true;
        if backtrack_assign(pairs, candidates, mapping, used) {
            return true;
        }
        mapping.pop();
        used[target] = false;
    }
    false
}

fn permutation_search(pairs: &[(&IntMatrix, &IntMatrix)]) -> Option<PermWitness> {
    let n = pairs[0].0.rows();
    for &(a, b) in pairs {
        if !a.is_square() || !b.is_square() || a.rows() != n || b.rows() != n {
            return None;
        }
    }
    // candidate targets per source vertex, filtered by the joint signature
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let sig: Vec<_> = pairs.iter().map(|&(a, _)| vertex_signature(a, i)).collect();
        let cands: Vec<usize> = (0..n)
            .filter(|&t| {
                pairs
                    .iter()
                    .enumerate()
                    .all(|(k, &(_, b))| vertex_signature(b, t) == sig[k])
            })
            .collect();
        if cands.is_empty() {
            return None;
        }
        candidates.push(cands);
    }
    let mut mapping = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if backtrack_assign(pairs, &candidates, &mut mapping, &mut used) {
        Some(PermWitness { mapping })
    } else {
        None
    }
}

/// A permutation witness with `P^t a P = b`, or `None`. Complete (it finds a
/// witness whenever one exists); the signature pruning only cuts symmetric
/// branches.
pub fn permutation_equivalent(a: &IntMatrix, b: &IntMatrix) -> Option<PermWitness> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return None;
    }
    permutation_search(&[(a, b)])
}

/// A single witness conjugating `a1` to `b1` and `a2` to `b2` simultaneously.
pub fn joint_permutation_equivalent(
    a1: &IntMatrix,
    a2: &IntMatrix,
    b1: &IntMatrix,
    b2: &IntMatrix,
) -> Result<Option<PermWitness>, ConjugacyError> {
    if a1.rows() != a2.rows() {
        return Err(ConjugacyError::SizeMismatch {
            left: a1.rows(),
            right: a2.rows(),
        });
    }
    if b1.rows() != b2.rows() {
        return Err(ConjugacyError::SizeMismatch {
            left: b1.rows(),
            right: b2.rows(),
        });
    }
    if a1.rows() != b1.rows() {
        return Ok(None);
    }
    Ok(permutation_search(&[(a1, b1), (a2, b2)]))
}

/// Certificate accompanying a one-sided conjugacy decision: the two
/// amalgamation chains and, on success, the permutation matching the totals.
#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyCertificate {
    pub amalgamation_a: MoveSequence,
    pub amalgamation_b: MoveSequence,
    pub witness: Option<PermWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyDecision {
    pub conjugate: bool,
    pub certificate: ConjugacyCertificate,
}

/// One-sided conjugacy: total amalgamations agree up to conjugation by a
/// permutation matrix.
pub fn one_sided_conjugate(
    a: &IntMatrix,
    b: &IntMatrix,
) -> Result<ConjugacyDecision, ConjugacyError> {
    let ta = total_amalgamation(a)?;
    let tb = total_amalgamation(b)?;
    let witness = permutation_equivalent(&ta.total, &tb.total);
    Ok(ConjugacyDecision {
        conjugate: witness.is_some(),
        certificate: ConjugacyCertificate {
            amalgamation_a: ta.seq,
            amalgamation_b: tb.seq,
            witness,
        },
    })
}

/// How the two power levels were matched in a higher-powers decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerInterpretation {
    /// Totals at levels n and n+1 have the same size, and one permutation
    /// conjugates both pairs at once.
    Joint,
    /// The totals change size between levels n and n+1, so "the same
    /// permutation" is ill-formed; separate witnesses are required instead.
    Separate,
}

#[derive(Debug, Clone, Serialize)]
pub struct HigherPowersReport {
    pub n: usize,
    pub conjugate_higher_powers: bool,
    pub interpretation: PowerInterpretation,
    pub total_a_n: IntMatrix,
    pub total_a_n1: IntMatrix,
    pub total_b_n: IntMatrix,
    pub total_b_n1: IntMatrix,
    pub joint_witness: Option<PermWitness>,
    pub witness_n: Option<PermWitness>,
    pub witness_n1: Option<PermWitness>,
    pub failure_reason: Option<String>,
}

/// Conjugate higher powers: the total amalgamations of `a^m` and `b^m` agree
/// up to the same permutation for `m = n, n+1`, with `n >= max(|A|, |B|)`.
/// `n` may be supplied above the default but not below it.
pub fn conjugate_higher_powers(
    a: &IntMatrix,
    b: &IntMatrix,
    n: Option<usize>,
) -> Result<HigherPowersReport, ConjugacyError> {
    let default_n = a.rows().max(b.rows());
    let n = match n {
        None => default_n,
        Some(given) if given < default_n => {
            return Err(ConjugacyError::PowerBelowDefault {
                given,
                minimum: default_n,
            })
        }
        Some(given) => given,
    };
    let tot = |m: &IntMatrix, p: usize| -> Result<IntMatrix, ConjugacyError> {
        let powered = m.checked_pow(p).map_err(MoveError::from)?;
        Ok(total_amalgamation(&powered)?.total)
    };
    let ta_n = tot(a, n)?;
    let ta_n1 = tot(a, n + 1)?;
    let tb_n = tot(b, n)?;
    let tb_n1 = tot(b, n + 1)?;

    let mut report = HigherPowersReport {
        n,
        conjugate_higher_powers: false,
        interpretation: PowerInterpretation::Joint,
        total_a_n: ta_n.clone(),
        total_a_n1: ta_n1.clone(),
        total_b_n: tb_n.clone(),
        total_b_n1: tb_n1.clone(),
        joint_witness: None,
        witness_n: None,
        witness_n1: None,
        failure_reason: None,
    };

    if ta_n.rows() != tb_n.rows() || ta_n1.rows() != tb_n1.rows() {
        report.failure_reason = Some(format!(
            "total sizes disagree: {}x{} vs {}x{} at power {n}, {}x{} vs {}x{} at power {}",
            ta_n.rows(),
            ta_n.rows(),
            tb_n.rows(),
            tb_n.rows(),
            ta_n1.rows(),
            ta_n1.rows(),
            tb_n1.rows(),
            tb_n1.rows(),
            n + 1,
        ));
        return Ok(report);
    }

    if ta_n.rows() == ta_n1.rows() {
        report.interpretation = PowerInterpretation::Joint;
        match joint_permutation_equivalent(&ta_n, &ta_n1, &tb_n, &tb_n1)? {
            Some(w) => {
                report.conjugate_higher_powers = true;
                report.joint_witness = Some(w);
            }
            None => {
                report.failure_reason =
                    Some("no single permutation matches both power levels".to_string());
            }
        }
    } else {
        report.interpretation = PowerInterpretation::Separate;
        let w_n = permutation_equivalent(&ta_n, &tb_n);
        let w_n1 = permutation_equivalent(&ta_n1, &tb_n1);
        report.conjugate_higher_powers = w_n.is_some() && w_n1.is_some();
        if !report.conjugate_higher_powers {
            report.failure_reason = Some(format!(
                "separate matching failed at power {}",
                if w_n.is_none() { n } else { n + 1 }
            ));
        }
        report.witness_n = w_n;
        report.witness_n1 = w_n1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_witness() {
        let a = IntMatrix::from_rows(&[&[1, 2], &[3, 4]]);
        let w = permutation_equivalent(&a, &a).unwrap();
        assert!(w.certifies(&a, &a));
    }

    #[test]
    fn transposition_witness() {
        let a = IntMatrix::from_rows(&[&[0, 1], &[2, 0]]);
        let b = IntMatrix::from_rows(&[&[0, 2], &[1, 0]]);
        let w = permutation_equivalent(&a, &b).unwrap();
        assert_eq!(w.mapping, vec![1, 0]);
        assert!(w.certifies(&a, &b));
    }

    #[test]
    fn distinct_scalars() {
        assert!(permutation_equivalent(&IntMatrix::scalar(2), &IntMatrix::scalar(3)).is_none());
    }

    #[test]
    fn witness_round_trip() {
        let a = IntMatrix::from_rows(&[&[0, 1, 2], &[3, 0, 0], &[1, 1, 0]]);
        let perm = PermWitness { mapping: vec![2, 0, 1] };
        let b = perm.conjugate(&a);
        let w = permutation_equivalent(&a, &b).unwrap();
        assert!(w.certifies(&a, &b));
        let back = permutation_equivalent(&b, &a).unwrap();
        assert!(back.certifies(&b, &a));
        assert!(w.compose(&back).certifies(&a, &a));
    }

    #[test]
    fn joint_needs_both() {
        let a = IntMatrix::from_rows(&[&[0, 1], &[2, 0]]);
        let a2 = a.checked_pow(2).unwrap();
        let b = IntMatrix::from_rows(&[&[0, 2], &[1, 0]]);
        let b2 = b.checked_pow(2).unwrap();
        assert!(joint_permutation_equivalent(&a, &a2, &b, &b2)
            .unwrap()
            .is_some());
        // perturb the second pair so only the first matches
        let mut b2_bad = b2.clone();
        b2_bad.set(0, 0, Int::from(5));
        assert!(joint_permutation_equivalent(&a, &a2, &b, &b2_bad)
            .unwrap()
            .is_none());
    }

    #[test]
    fn joint_size_mismatch_is_an_error() {
        let a = IntMatrix::scalar(1);
        let b = IntMatrix::from_rows(&[&[1, 0], &[0, 1]]);
        assert!(matches!(
            joint_permutation_equivalent(&a, &b, &a, &a),
            Err(ConjugacyError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn outsplit_is_one_sided_conjugate() {
        let a = IntMatrix::from_rows(&[&[1, 1], &[1, 1]]);
        let two = IntMatrix::scalar(2);
        let d = one_sided_conjugate(&a, &two).unwrap();
        assert!(d.conjugate);
        let d = one_sided_conjugate(&a, &a).unwrap();
        assert!(d.conjugate);
    }

    #[test]
    fn distinct_totals_are_not_conjugate() {
        let a1 = IntMatrix::from_rows(&[&[2, 0, 4], &[1, 2, 0], &[1, 2, 0]]);
        let four = IntMatrix::scalar(4);
        let d = one_sided_conjugate(&a1, &four).unwrap();
        assert!(!d.conjugate);
    }

    #[test]
    fn higher_powers_of_rank_one_family() {
        let a1 = IntMatrix::from_rows(&[&[2, 0, 4], &[1, 2, 0], &[1, 2, 0]]);
        let four = IntMatrix::scalar(4);
        let report = conjugate_higher_powers(&a1, &four, None).unwrap();
        assert_eq!(report.n, 3);
        assert!(report.conjugate_higher_powers);
        assert_eq!(report.total_a_n, IntMatrix::scalar(64));
        assert_eq!(report.total_a_n1, IntMatrix::scalar(256));
        // reflexive case
        let report = conjugate_higher_powers(&a1, &a1, None).unwrap();
        assert!(report.conjugate_higher_powers);
    }

    #[test]
    fn power_override_below_default_is_rejected() {
        let a = IntMatrix::from_rows(&[&[1, 1], &[1, 1]]);
        assert!(matches!(
            conjugate_higher_powers(&a, &a, Some(1)),
            Err(ConjugacyError::PowerBelowDefault { given: 1, minimum: 2 })
        ));
    }
}
