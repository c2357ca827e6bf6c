//! Smith normal form over the integers, with unimodular transforms, and
//! cokernel computations built on top of it.

use num_integer::Integer as _;
use num_traits::{Signed, Zero};

use crate::matrix::{Int, IntMatrix};

/// Pivot selection rule for the elimination. `SmallestAbs` limits coefficient
/// growth and is the default; `FirstNonzero` exists as an independent code
/// path so results can be cross-checked between the two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotStrategy {
    #[default]
    SmallestAbs,
    FirstNonzero,
}

/// `left * M * right = diag(invariant factors)`, with `|det left| = |det right| = 1`
/// and each nonzero factor dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub left: IntMatrix,
    pub diag: Vec<Int>,
    pub right: IntMatrix,
}

impl SnfDecomposition {
    /// The diagonal matrix of invariant factors in the shape of the input.
    pub fn diag_matrix(&self, rows: usize, cols: usize) -> IntMatrix {
        IntMatrix::from_fn(rows, cols, |i, j| {
            if i == j && i < self.diag.len() {
                self.diag[i].clone()
            } else {
                Int::zero()
            }
        })
    }

    /// Check `left * m * right == diag` exactly.
    pub fn reconstructs(&self, m: &IntMatrix) -> bool {
        let lhs = self
            .left
            .checked_mul(m)
            .and_then(|lm| lm.checked_mul(&self.right));
        match lhs {
            Ok(p) => p == self.diag_matrix(m.rows(), m.cols()),
            Err(_) => false,
        }
    }

    /// Invariant factors different from 1 (the cyclic decomposition of the
    /// cokernel, with 0 standing for a free summand).
    pub fn nontrivial_factors(&self) -> Vec<Int> {
        self.diag
            .iter()
            .filter(|d| **d != Int::from(1))
            .cloned()
            .collect()
    }
}

/// Smith normal form with the default pivot strategy.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    smith_normal_form_with(m, PivotStrategy::default())
}

/// Smith normal form by row/column elimination. Row operations accumulate in
/// `left`, column operations in `right`; both stay unimodular because only
/// swaps, negations and integer shears are applied.
pub fn smith_normal_form_with(m: &IntMatrix, strategy: PivotStrategy) -> SnfDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut work = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    let mut t = 0usize;
    while t < rows.min(cols) {
        let Some((pi, pj)) = find_pivot(&work, t, strategy) else {
            break;
        };
        if pi != t {
            swap_rows(&mut work, t, pi);
            swap_rows(&mut left, t, pi);
        }
        if pj != t {
            swap_cols(&mut work, t, pj);
            swap_cols(&mut right, t, pj);
        }

        // Clear the pivot row and column with Euclidean steps.
        loop {
            let mut again = false;
            for i in t + 1..rows {
                if work.get(i, t).is_zero() {
                    continue;
                }
                let q = work.get(i, t) / work.get(t, t);
                if !q.is_zero() {
                    row_shear(&mut work, i, t, &q);
                    row_shear(&mut left, i, t, &q);
                }
                if !work.get(i, t).is_zero() {
                    // remainder is strictly smaller than the pivot
                    swap_rows(&mut work, t, i);
                    swap_rows(&mut left, t, i);
                    again = true;
                }
            }
            for j in t + 1..cols {
                if work.get(t, j).is_zero() {
                    continue;
                }
                let q = work.get(t, j) / work.get(t, t);
                if !q.is_zero() {
                    col_shear(&mut work, j, t, &q);
                    col_shear(&mut right, j, t, &q);
                }
                if !work.get(t, j).is_zero() {
                    swap_cols(&mut work, t, j);
                    swap_cols(&mut right, t, j);
                    again = true;
                }
            }
            if !again && (t + 1..rows).all(|i| work.get(i, t).is_zero()) {
                break;
            }
        }

        // The pivot must divide every remaining entry; if not, fold the
        // offending row into the pivot row and redo the clearing pass.
        let offender = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !work.get(i, j).mod_floor(work.get(t, t)).is_zero());
        if let Some((i, _)) = offender {
            add_row(&mut work, t, i);
            add_row(&mut left, t, i);
            continue;
        }

        if work.get(t, t).is_negative() {
            negate_row(&mut work, t);
            negate_row(&mut left, t);
        }
        t += 1;
    }

    let diag: Vec<Int> = (0..rows.min(cols)).map(|i| work.get(i, i).clone()).collect();
    SnfDecomposition { left, diag, right }
}

fn find_pivot(m: &IntMatrix, t: usize, strategy: PivotStrategy) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            if m.get(i, j).is_zero() {
                continue;
            }
            match strategy {
                PivotStrategy::FirstNonzero => return Some((i, j)),
                PivotStrategy::SmallestAbs => {
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => m.get(i, j).abs() < m.get(bi, bj).abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    for j in 0..m.cols() {
        let x = m.get(a, j).clone();
        let y = m.get(b, j).clone();
        m.set(a, j, y);
        m.set(b, j, x);
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for i in 0..m.rows() {
        let x = m.get(i, a).clone();
        let y = m.get(i, b).clone();
        m.set(i, a, y);
        m.set(i, b, x);
    }
}

/// row_i -= q * row_j
fn row_shear(m: &mut IntMatrix, i: usize, j: usize, q: &Int) {
    for c in 0..m.cols() {
        let v = m.get(i, c) - q * m.get(j, c);
        m.set(i, c, v);
    }
}

/// col_j -= q * col_k
fn col_shear(m: &mut IntMatrix, j: usize, k: usize, q: &Int) {
    for r in 0..m.rows() {
        let v = m.get(r, j) - q * m.get(r, k);
        m.set(r, j, v);
    }
}

/// row_i += row_j
fn add_row(m: &mut IntMatrix, i: usize, j: usize) {
    for c in 0..m.cols() {
        let v = m.get(i, c) + m.get(j, c);
        m.set(i, c, v);
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for c in 0..m.cols() {
        let v = -m.get(i, c);
        m.set(i, c, v);
    }
}

/// The cokernel `Z^n / M Z^n` of a square integer matrix, presented in SNF
/// coordinates: the class of a vector `v` is `left * v` reduced modulo the
/// invariant factors (a coordinate over a zero factor stays a free integer).
/// Class equality is then a plain tuple comparison.
#[derive(Debug, Clone)]
pub struct Cokernel {
    n: usize,
    snf: SnfDecomposition,
}

impl Cokernel {
    pub fn new(m: &IntMatrix) -> Cokernel {
        debug_assert!(m.is_square());
        Cokernel {
            n: m.rows(),
            snf: smith_normal_form(m),
        }
    }

    pub fn invariant_factors(&self) -> &[Int] {
        &self.snf.diag
    }

    pub fn is_trivial(&self) -> bool {
        self.snf.diag.iter().all(|d| *d == Int::from(1))
    }

    /// Reduced SNF coordinates of the class of `v` (a column vector).
    pub fn class_of(&self, v: &IntMatrix) -> Vec<Int> {
        debug_assert_eq!(v.rows(), self.n);
        debug_assert_eq!(v.cols(), 1);
        let w = self.snf.left.checked_mul(v).expect("shape checked");
        (0..self.n)
            .map(|i| {
                let d = &self.snf.diag[i];
                if d.is_zero() {
                    w.get(i, 0).clone()
                } else {
                    w.get(i, 0).mod_floor(d)
                }
            })
            .collect()
    }

    pub fn classes_equal(&self, v: &IntMatrix, w: &IntMatrix) -> bool {
        self.class_of(v) == self.class_of(w)
    }

    pub fn class_is_zero(&self, v: &IntMatrix) -> bool {
        self.class_of(v).iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_both_ways(m: &IntMatrix) -> (SnfDecomposition, SnfDecomposition) {
        let a = smith_normal_form_with(m, PivotStrategy::SmallestAbs);
        let b = smith_normal_form_with(m, PivotStrategy::FirstNonzero);
        assert!(a.reconstructs(m));
        assert!(b.reconstructs(m));
        assert_eq!(a.diag, b.diag, "pivot strategies must agree on factors");
        (a, b)
    }

    #[test]
    fn unit_entry() {
        let (snf, _) = snf_both_ways(&IntMatrix::scalar(-1));
        assert_eq!(snf.diag, vec![Int::from(1)]);
    }

    #[test]
    fn swap_and_flip() {
        let m = IntMatrix::from_rows(&[&[0, -1], &[-1, 0]]);
        let (snf, _) = snf_both_ways(&m);
        assert_eq!(snf.diag, vec![Int::from(1), Int::from(1)]);
    }

    #[test]
    fn minor_gcds() {
        // gcds of k x k minors are 1, 1, 4
        let m = IntMatrix::from_rows(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
        let (snf, _) = snf_both_ways(&m);
        assert_eq!(snf.diag, vec![Int::from(1), Int::from(1), Int::from(4)]);
    }

    #[test]
    fn transforms_are_unimodular() {
        let m = IntMatrix::from_rows(&[&[6, 4, 2], &[4, 2, 0], &[2, 0, 8]]);
        let snf = smith_normal_form(&m);
        assert!(snf.reconstructs(&m));
        assert_eq!(snf.left.det().unwrap().abs(), Int::from(1));
        assert_eq!(snf.right.det().unwrap().abs(), Int::from(1));
        // divisibility chain
        for w in snf.diag.windows(2) {
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!(w[1].mod_floor(&w[0]).is_zero());
            }
        }
    }

    #[test]
    fn rectangular_input() {
        let m = IntMatrix::from_rows(&[&[2, 4, 6], &[4, 8, 12]]);
        let snf = smith_normal_form(&m);
        assert!(snf.reconstructs(&m));
        assert_eq!(snf.diag, vec![Int::from(2), Int::from(0)]);
    }

    #[test]
    fn singular_square() {
        let m = IntMatrix::from_rows(&[&[1, 1], &[1, 1]]);
        let snf = smith_normal_form(&m);
        assert!(snf.reconstructs(&m));
        assert_eq!(snf.diag, vec![Int::from(1), Int::from(0)]);
    }

    #[test]
    fn cokernel_classes() {
        // coker(-2) = Z/2, class of 1 is 1
        let c = Cokernel::new(&IntMatrix::scalar(-2));
        assert_eq!(c.class_of(&IntMatrix::ones_column(1)), vec![Int::from(1)]);
        assert!(!c.is_trivial());
        // coker(-1) trivial
        let c = Cokernel::new(&IntMatrix::scalar(-1));
        assert!(c.is_trivial());
        assert!(c.class_is_zero(&IntMatrix::from_rows(&[&[17]])));
    }
}
