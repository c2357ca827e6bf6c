//! Structure of the directed graph underlying a square matrix: strongly
//! connected components, the reachability poset between them, and the
//! canonical/standard form predicates used by the SL machinery.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::matrix::{Int, IntMatrix, MatrixError};
use crate::snf::smith_normal_form;

/// Irreducible components of a matrix, topologically ordered (ties broken by
/// smallest contained vertex index), together with the reachability order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPoset {
    components: Vec<Vec<usize>>,
    /// Pairs `(p, q)` of component indices with `p <= q` in the poset.
    order: BTreeSet<(usize, usize)>,
}

impl ComponentPoset {
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.order.contains(&(p, q))
    }

    pub fn order_pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.order
    }

    pub fn component_of(&self, vertex: usize) -> usize {
        self.components
            .iter()
            .position(|c| c.contains(&vertex))
            .expect("vertex out of range")
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }
}

/// Strongly connected components with the reachability order `p <= q` iff
/// some power `A^k` (k >= 1) connects an index of `p` to an index of `q`,
/// closed reflexively. A singleton without a self-loop is its own trivial
/// component.
pub fn scc_poset(a: &IntMatrix) -> Result<ComponentPoset, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.size();
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if !a.get(i, j).is_zero() {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let sccs: Vec<Vec<usize>> = petgraph::algo::tarjan_scc(&graph)
        .into_iter()
        .map(|comp| {
            let mut v: Vec<usize> = comp.into_iter().map(|ix| ix.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();

    let comp_of = {
        let mut map = vec![0usize; n];
        for (c, comp) in sccs.iter().enumerate() {
            for &v in comp {
                map[v] = c;
            }
        }
        map
    };

    // Edges of the condensation DAG.
    let m = sccs.len();
    let mut dag = vec![vec![false; m]; m];
    for i in 0..n {
        for j in 0..n {
            if !a.get(i, j).is_zero() && comp_of[i] != comp_of[j] {
                dag[comp_of[i]][comp_of[j]] = true;
            }
        }
    }

    // Deterministic topological order: among ready components pick the one
    // containing the smallest original index.
    let mut indegree = vec![0usize; m];
    for p in 0..m {
        for q in 0..m {
            if dag[p][q] {
                indegree[q] += 1;
            }
        }
    }
    let mut order_of = Vec::with_capacity(m);
    let mut ready: BTreeSet<(usize, usize)> = (0..m)
        .filter(|&c| indegree[c] == 0)
        .map(|c| (sccs[c][0], c))
        .collect();
    while let Some(&(key, c)) = ready.iter().next() {
        ready.remove(&(key, c));
        order_of.push(c);
        for q in 0..m {
            if dag[c][q] {
                indegree[q] -= 1;
                if indegree[q] == 0 {
                    ready.insert((sccs[q][0], q));
                }
            }
        }
    }
    debug_assert_eq!(order_of.len(), m);

    let components: Vec<Vec<usize>> = order_of.iter().map(|&c| sccs[c].clone()).collect();
    let renumber = {
        let mut map = vec![0usize; m];
        for (new, &old) in order_of.iter().enumerate() {
            map[old] = new;
        }
        map
    };

    // Reachability between components: transitive closure of the DAG, plus
    // reflexivity.
    let mut reach = vec![vec![false; m]; m];
    for p in 0..m {
        for q in 0..m {
            if dag[p][q] {
                reach[renumber[p]][renumber[q]] = true;
            }
        }
    }
    for k in 0..m {
        for p in 0..m {
            if reach[p][k] {
                for q in 0..m {
                    if reach[k][q] {
                        reach[p][q] = true;
                    }
                }
            }
        }
    }
    let mut order = BTreeSet::new();
    for p in 0..m {
        order.insert((p, p));
        for q in 0..m {
            if reach[p][q] {
                order.insert((p, q));
            }
        }
    }

    Ok(ComponentPoset { components, order })
}

/// A matrix is irreducible when its graph is strongly connected and carries
/// at least one edge; in particular the 1x1 zero matrix is not irreducible.
pub fn is_irreducible(a: &IntMatrix) -> bool {
    if !a.is_square() {
        return false;
    }
    let poset = scc_poset(a).expect("square by check above");
    if poset.len() != 1 {
        return false;
    }
    a.entries().iter().any(|e| !e.is_zero())
}

/// `(has_zero_row, has_zero_col)`: a zero row is a sink, a zero column is a
/// source; a matrix is essential when it has neither.
pub fn row_col_profile(a: &IntMatrix) -> (bool, bool) {
    (a.has_zero_row(), a.has_zero_col())
}

/// Vertex pairs `(i, j)` with a path of length >= 1 from `i` to `j`.
pub(crate) fn reachability(a: &IntMatrix) -> Vec<Vec<bool>> {
    let n = a.rows();
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            reach[i][j] = !a.get(i, j).is_zero();
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum CanonicalViolation {
    /// Clause 1: a diagonal entry is not positive.
    NonPositiveDiagonal { index: usize },
    /// Clause 2: `A^n(i,j) > 0` for some `n` but `A(i,j) = 0`.
    MissingTransitiveEdge { from: usize, to: usize },
    /// Clause 3: a diagonal block is neither the 1x1 matrix (1) nor an
    /// admissible block of dimension >= 3.
    InadmissibleBlock { component: usize, reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct CanonicalFormReport {
    pub canonical: bool,
    pub violations: Vec<CanonicalViolation>,
}

/// Canonical-form predicate. The components are taken in their topological
/// order; the predicate itself is invariant under simultaneous permutation.
///
/// Clause 3 reads "smith normal form with at least two ones" on the diagonal
/// block itself (not on `I - B^t`), following the defining sentence verbatim.
pub fn is_canonical_form(a: &IntMatrix) -> Result<CanonicalFormReport, MatrixError> {
    let poset = scc_poset(a)?;
    let n = a.size();
    let mut violations = Vec::new();

    for i in 0..n {
        if !a.get(i, i).is_positive() {
            violations.push(CanonicalViolation::NonPositiveDiagonal { index: i });
        }
    }

    let reach = reachability(a);
    for i in 0..n {
        for j in 0..n {
            if reach[i][j] && a.get(i, j).is_zero() {
                violations.push(CanonicalViolation::MissingTransitiveEdge { from: i, to: j });
            }
        }
    }

    for (c, comp) in poset.components().iter().enumerate() {
        let block = a.submatrix(comp, comp);
        let d = block.rows();
        if d == 1 {
            if !block.get(0, 0).is_one() {
                violations.push(CanonicalViolation::InadmissibleBlock {
                    component: c,
                    reason: "1x1 block is not the matrix (1)".to_string(),
                });
            }
            continue;
        }
        if d == 2 {
            violations.push(CanonicalViolation::InadmissibleBlock {
                component: c,
                reason: "block dimension 2 is not allowed".to_string(),
            });
            continue;
        }
        let snf = smith_normal_form(&block);
        let ones = snf.diag.iter().filter(|x| x.is_one()).count();
        if ones < 2 {
            violations.push(CanonicalViolation::InadmissibleBlock {
                component: c,
                reason: format!("smith normal form has {ones} ones, need at least two"),
            });
        }
        if let Some(k) = (0..d).find(|&k| block.get(k, k) < &Int::from(2)) {
            violations.push(CanonicalViolation::InadmissibleBlock {
                component: c,
                reason: format!("diagonal entry at block position {k} is below 2"),
            });
        }
    }

    Ok(CanonicalFormReport {
        canonical: violations.is_empty(),
        violations,
    })
}

/// A pair is in standard form when both matrices are canonical, their posets
/// agree under the index-by-index block correspondence, and corresponding
/// blocks have equal sizes.
pub fn is_standard_form_pair(a: &IntMatrix, b: &IntMatrix) -> Result<bool, MatrixError> {
    let ra = is_canonical_form(a)?;
    let rb = is_canonical_form(b)?;
    if !ra.canonical || !rb.canonical {
        return Ok(false);
    }
    let pa = scc_poset(a)?;
    let pb = scc_poset(b)?;
    Ok(pa.len() == pb.len()
        && pa.block_sizes() == pb.block_sizes()
        && pa.order_pairs() == pb.order_pairs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_loop_vertex() {
        let poset = scc_poset(&IntMatrix::scalar(2)).unwrap();
        assert_eq!(poset.components(), &[vec![0]]);
        assert!(poset.leq(0, 0));
        assert!(is_irreducible(&IntMatrix::scalar(2)));
    }

    #[test]
    fn zero_matrix_is_not_irreducible() {
        assert!(!is_irreducible(&IntMatrix::scalar(0)));
        let poset = scc_poset(&IntMatrix::scalar(0)).unwrap();
        assert_eq!(poset.len(), 1);
    }

    #[test]
    fn upper_triangular_two_components() {
        let a = IntMatrix::from_rows(&[&[1, 1], &[0, 1]]);
        let poset = scc_poset(&a).unwrap();
        assert_eq!(poset.components(), &[vec![0], vec![1]]);
        assert!(poset.leq(0, 1));
        assert!(!poset.leq(1, 0));
        assert!(!is_irreducible(&a));
    }

    #[test]
    fn cycle_closes_component() {
        let a1 = IntMatrix::from_rows(&[&[2, 0, 4], &[1, 2, 0], &[1, 2, 0]]);
        let poset = scc_poset(&a1).unwrap();
        assert_eq!(poset.components(), &[vec![0, 1, 2]]);
        assert!(is_irreducible(&a1));
    }

    #[test]
    fn periodic_cycle_is_irreducible() {
        // no single power of this matrix is positive everywhere, yet for
        // every pair some power connects it
        let a = IntMatrix::from_rows(&[&[0, 1], &[1, 0]]);
        assert!(is_irreducible(&a));
    }

    #[test]
    fn profiles() {
        assert_eq!(
            row_col_profile(&IntMatrix::from_rows(&[&[0, 1], &[0, 1]])),
            (false, true)
        );
        assert_eq!(row_col_profile(&IntMatrix::scalar(2)), (false, false));
        assert_eq!(
            row_col_profile(&IntMatrix::from_rows(&[&[0, 0], &[1, 0]])),
            (true, true)
        );
    }

    #[test]
    fn canonical_one() {
        let r = is_canonical_form(&IntMatrix::scalar(1)).unwrap();
        assert!(r.canonical, "{:?}", r.violations);
    }

    #[test]
    fn canonical_rejects_two() {
        let r = is_canonical_form(&IntMatrix::scalar(2)).unwrap();
        assert!(!r.canonical);
        assert!(matches!(
            r.violations.as_slice(),
            [CanonicalViolation::InadmissibleBlock { .. }]
        ));
    }

    #[test]
    fn canonical_positive_block() {
        let m = IntMatrix::from_rows(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
        let r = is_canonical_form(&m).unwrap();
        assert!(r.canonical, "{:?}", r.violations);
    }

    #[test]
    fn transitive_clause_detects_gap() {
        // 1 -> 2 -> 3 but no edge 1 -> 3; diagonal loops keep clause 1 happy
        let m = IntMatrix::from_rows(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let r = is_canonical_form(&m).unwrap();
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, CanonicalViolation::MissingTransitiveEdge { from: 0, to: 2 })));
    }

    #[test]
    fn standard_form_pairs() {
        let one = IntMatrix::scalar(1);
        assert!(is_standard_form_pair(&one, &one).unwrap());
        let m = IntMatrix::from_rows(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
        assert!(!is_standard_form_pair(&one, &m).unwrap());
        // second matrix has SNF diag(1,1,3): still two ones, so canonical
        let m2 = IntMatrix::from_rows(&[&[2, 2, 1], &[1, 2, 1], &[1, 1, 2]]);
        assert!(is_standard_form_pair(&m, &m2).unwrap());
    }
}
