//! Bounded bidirectional breadth-first search over the balanced strong shift
//! equivalence rewrite system: out-amalgamations, outsplits, and balanced
//! elementary moves, with canonical-form deduplication of the frontier.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::conjugacy::permutation_equivalent;
use crate::matrix::{Int, IntMatrix};
use crate::moves::{
    apply_outsplit, out_amalgamation_step, verify_move_sequence, DivisionMatrix, Move, MoveError,
    MoveKind, MoveSequence, OutsplitSpec,
};

/// Bounds for the search. All bounds must be positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_matrix_size: usize,
    pub max_depth: usize,
    #[serde(with = "crate::matrix::int_serde")]
    pub max_entry: Int,
    pub max_nodes: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_matrix_size: 6,
            max_depth: 6,
            max_entry: Int::from(16),
            max_nodes: 20_000,
        }
    }
}

impl SearchLimits {
    pub fn is_valid(&self) -> bool {
        self.max_matrix_size > 0
            && self.max_depth > 0
            && self.max_entry.is_positive()
            && self.max_nodes > 0
    }
}

/// Canonical representative of a matrix up to simultaneous permutation: the
/// row-major lexicographically least conjugate `P^t M P`. Keys are equal
/// exactly when the matrices are permutation equivalent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalKey {
    matrix: IntMatrix,
}

impl CanonicalKey {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }
}

type Signature = (Vec<Int>, Vec<Int>, Int);

fn vertex_signature(m: &IntMatrix, i: usize) -> Signature {
    let mut row = m.row(i).to_vec();
    row.sort();
    let mut col = m.col_vec(i);
    col.sort();
    (row, col, m.get(i, i).clone())
}

/// Minimise `P^t M P` over permutations. Any conjugating permutation maps
/// signature classes onto signature classes, so the minimisation only needs
/// to range over arrangements inside each class, taking the classes in
/// signature order.
pub fn canonical_key(m: &IntMatrix) -> CanonicalKey {
    debug_assert!(m.is_square());
    let n = m.rows();
    let mut classes: BTreeMap<Signature, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        classes.entry(vertex_signature(m, i)).or_default().push(i);
    }
    let blocks: Vec<Vec<usize>> = classes.into_values().collect();

    // sel[p] = original vertex placed at position p
    let mut sel: Vec<usize> = Vec::with_capacity(n);
    let mut best: Option<Vec<Int>> = None;
    let mut used = vec![false; n];
    minimise(m, &blocks, &mut sel, &mut used, &mut best);
    let best = best.expect("at least one arrangement exists");
    let matrix = IntMatrix::new(n, n, best).expect("square shape");
    CanonicalKey { matrix }
}

fn minimise(
    m: &IntMatrix,
    blocks: &[Vec<usize>],
    sel: &mut Vec<usize>,
    used: &mut Vec<bool>,
    best: &mut Option<Vec<Int>>,
) {
    let n = m.rows();
    if sel.len() == n {
        // candidate row-major entries of P^t M P for this arrangement
        let mut candidate: Vec<Int> = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                candidate.push(m.get(sel[p], sel[q]).clone());
            }
        }
        let better = match best {
            None => true,
            Some(b) => candidate < *b,
        };
        if better {
            *best = Some(candidate);
        }
        return;
    }
    let block = blocks
        .iter()
        .scan(0usize, |acc, b| {
            let start = *acc;
            *acc += b.len();
            Some((start, b))
        })
        .find(|(start, b)| sel.len() < start + b.len())
        .map(|(_, b)| b)
        .expect("position belongs to a block");
    for &v in block {
        if used[v] {
            continue;
        }
        used[v] = true;
        sel.push(v);
        minimise(m, blocks, sel, used, best);
        sel.pop();
        used[v] = false;
    }
}

/// All compositions of `total` into `parts` nonnegative summands, each at
/// most `cap`.
fn compositions(total: u64, parts: usize, cap: u64) -> Vec<Vec<u64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let hi = cap.min(total);
    for first in 0..=hi {
        // remaining parts must be able to absorb the rest
        if total - first > cap.saturating_mul((parts - 1) as u64) {
            continue;
        }
        for mut rest in compositions(total - first, parts - 1, cap) {
            let mut v = Vec::with_capacity(parts);
            v.push(first);
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Unordered partitions of a row vector into nonzero nonnegative parts, each
/// list in non-increasing lexicographic order so every multiset appears once.
fn row_partitions(row: &[u64], max_extra_parts: usize) -> Vec<Vec<Vec<u64>>> {
    fn vectors_below(bound: &[u64], ceiling: &[u64]) -> Vec<Vec<u64>> {
        // all nonzero vectors v <= ceiling componentwise with v <=_lex bound
        let mut out = Vec::new();
        let mut v = vec![0u64; ceiling.len()];
        loop {
            // advance odometer
            let mut i = ceiling.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if v[i] < ceiling[i] {
                    v[i] += 1;
                    for w in v.iter_mut().skip(i + 1) {
                        *w = 0;
                    }
                    break;
                }
            }
            if v.as_slice() <= bound && v.iter().any(|&x| x > 0) {
                out.push(v.clone());
            }
        }
    }
    fn recurse(
        remaining: &[u64],
        bound: &[u64],
        parts_left: usize,
        acc: &mut Vec<Vec<u64>>,
        out: &mut Vec<Vec<Vec<u64>>>,
    ) {
        if remaining.iter().all(|&x| x == 0) {
            if !acc.is_empty() {
                out.push(acc.clone());
            }
            return;
        }
        if parts_left == 0 {
            return;
        }
        for part in vectors_below(bound, remaining) {
            let rest: Vec<u64> = remaining.iter().zip(&part).map(|(r, p)| r - p).collect();
            acc.push(part.clone());
            recurse(&rest, &part, parts_left - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    let mut acc = Vec::new();
    recurse(row, row, max_extra_parts + 1, &mut acc, &mut out);
    out
}

fn to_u64_matrix(m: &IntMatrix, cap: &Int) -> Option<Vec<Vec<u64>>> {
    if m.entries().iter().any(|e| e > cap) {
        return None;
    }
    Some(
        (0..m.rows())
            .map(|i| m.row(i).iter().map(|e| e.to_u64().unwrap_or(u64::MAX)).collect())
            .collect(),
    )
}

/// Set partitions of `items`, each part listed with ascending members and
/// parts ordered by smallest member.
fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let first = items[0];
    let rest = &items[1..];
    let mut out = Vec::new();
    for mut partition in set_partitions(rest) {
        // first joins an existing part or starts its own
        for i in 0..partition.len() {
            let mut clone = partition.clone();
            clone[i].insert(0, first);
            out.push(clone);
        }
        partition.insert(0, vec![first]);
        out.push(partition);
    }
    out
}

/// Enumerate all single-move neighbours of `a` within the limits:
/// the out-amalgamation step, outsplits whose result respects the size cap,
/// and balanced elementary moves over all division-matrix groupings of
/// identical rows with redistributed `R_B` within the entry cap.
pub fn neighbors(a: &IntMatrix, limits: &SearchLimits) -> Result<Vec<Move>, MoveError> {
    if a.has_zero_row() {
        return Err(MoveError::ZeroRow);
    }
    let n = a.size();
    let mut moves = Vec::new();

    if let Some(step) = out_amalgamation_step(a)? {
        moves.push(Move::outamalgamation(a.clone(), step));
    }

    // outsplits: rows must be small enough to enumerate
    if n < limits.max_matrix_size {
        if let Some(rows) = to_u64_matrix(a, &limits.max_entry) {
            let budget = limits.max_matrix_size - n;
            let per_vertex: Vec<Vec<Vec<Vec<u64>>>> = rows
                .iter()
                .map(|row| row_partitions(row, budget))
                .collect();
            let mut choice = vec![0usize; n];
            'specs: loop {
                let extras: usize = choice
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| per_vertex[i][c].len() - 1)
                    .sum();
                if extras > 0 && extras <= budget {
                    let spec = OutsplitSpec {
                        parts: choice
                            .iter()
                            .enumerate()
                            .map(|(i, &c)| {
                                per_vertex[i][c]
                                    .iter()
                                    .map(|part| part.iter().map(|&x| Int::from(x)).collect())
                                    .collect()
                            })
                            .collect(),
                    };
                    let split = apply_outsplit(a, &spec)?;
                    moves.push(Move::outsplit(a.clone(), split));
                }
                // advance the per-vertex choice odometer
                let mut i = n;
                loop {
                    if i == 0 {
                        break 'specs;
                    }
                    i -= 1;
                    if choice[i] + 1 < per_vertex[i].len() {
                        choice[i] += 1;
                        for c in choice.iter_mut().skip(i + 1) {
                            *c = 0;
                        }
                        break;
                    }
                }
            }
        }
    }

    moves.extend(balanced_neighbors(a, limits)?);
    Ok(moves)
}

/// Balanced elementary moves out of `a`: pick a grouping of identical rows
/// (the division matrix), read off `R_A`, and enumerate every `R_B` that
/// preserves the row-block sums within the entry cap.
fn balanced_neighbors(a: &IntMatrix, limits: &SearchLimits) -> Result<Vec<Move>, MoveError> {
    let n = a.size();
    let mut moves = Vec::new();
    let cap = match limits.max_entry.to_u64() {
        Some(c) => c,
        None => u64::MAX,
    };

    // maximal classes of identical rows
    let mut row_classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match row_classes
            .iter()
            .position(|cl| a.row(cl[0]) == a.row(i))
        {
            Some(c) => row_classes[c].push(i),
            None => row_classes.push(vec![i]),
        }
    }

    // all groupings refining the maximal classes, assembled per class
    let mut groupings: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for class in &row_classes {
        let parts = set_partitions(class);
        let mut next = Vec::new();
        for g in &groupings {
            for p in &parts {
                let mut combined = g.clone();
                combined.extend(p.iter().cloned());
                next.push(combined);
            }
        }
        groupings = next;
    }

    for mut grouping in groupings {
        grouping.sort_by_key(|part| part[0]);
        let m = grouping.len();
        if m == n {
            continue; // singleton grouping only reproduces a itself
        }
        let mut class_of = vec![0usize; n];
        for (k, part) in grouping.iter().enumerate() {
            for &i in part {
                class_of[i] = k;
            }
        }
        // s = D^t is n x m
        let s = IntMatrix::from_fn(n, m, |i, k| {
            if class_of[i] == k {
                Int::one()
            } else {
                Int::zero()
            }
        });
        let r_a = IntMatrix::from_fn(m, n, |k, j| a.get(grouping[k][0], j).clone());

        // block sums per (row of R_A, column class)
        let mut block_sums = vec![vec![0u64; m]; m];
        let mut representable = true;
        'sums: for k in 0..m {
            for (l, part) in grouping.iter().enumerate() {
                let sum: Int = part.iter().map(|&j| r_a.get(k, j).clone()).sum();
                match sum.to_u64() {
                    Some(v) => block_sums[k][l] = v,
                    None => {
                        representable = false;
                        break 'sums;
                    }
                }
            }
        }
        if !representable {
            continue;
        }

        // choices per (k, l): compositions of the block sum over the class
        let mut cells: Vec<(usize, usize, Vec<Vec<u64>>)> = Vec::new();
        let mut feasible = true;
        for k in 0..m {
            for (l, part) in grouping.iter().enumerate() {
                let comps = compositions(block_sums[k][l], part.len(), cap);
                if comps.is_empty() {
                    feasible = false;
                }
                cells.push((k, l, comps));
            }
        }
        if !feasible {
            continue;
        }

        let mut choice = vec![0usize; cells.len()];
        'rb: loop {
            let mut r_b = IntMatrix::zero(m, n);
            for (cell, &c) in cells.iter().zip(&choice) {
                let (k, l, ref comps) = *cell;
                for (slot, &j) in grouping[l].iter().enumerate() {
                    r_b.set(k, j, Int::from(comps[c][slot]));
                }
            }
            if r_b != r_a {
                let b = s.checked_mul(&r_b)?;
                debug_assert_eq!(s.checked_mul(&r_a).unwrap(), *a);
                if b != *a {
                    moves.push(Move {
                        kind: MoveKind::BalancedElementary {
                            s: s.clone(),
                            r_from: r_a.clone(),
                            r_to: r_b.clone(),
                        },
                        from: a.clone(),
                        to: b,
                    });
                }
            }
            let mut i = cells.len();
            loop {
                if i == 0 {
                    break 'rb;
                }
                i -= 1;
                if choice[i] + 1 < cells[i].2.len() {
                    choice[i] += 1;
                    for c in choice.iter_mut().skip(i + 1) {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }
    Ok(moves)
}

struct PathEntry {
    matrix: IntMatrix,
    path: MoveSequence,
}

struct Side {
    visited: HashMap<IntMatrix, PathEntry>,
    frontier: Vec<IntMatrix>,
    depth: usize,
}

impl Side {
    fn new(root: &IntMatrix) -> Side {
        let key = canonical_key(root);
        let mut visited = HashMap::new();
        visited.insert(
            key.matrix().clone(),
            PathEntry {
                matrix: root.clone(),
                path: MoveSequence::empty(root.clone()),
            },
        );
        Side {
            visited,
            frontier: vec![key.matrix().clone()],
            depth: 0,
        }
    }
}

/// Bidirectional breadth-first search for a balanced strong shift equivalence
/// path from `a` to `b`. Deterministic for fixed limits: frontiers are
/// ordered, levels are expanded as barriers, and the visited set is keyed by
/// canonical form. Returns a verified `MoveSequence` on success and `None`
/// on exhaustion of depth, node, or size limits.
pub fn search_balanced_path(
    a: &IntMatrix,
    b: &IntMatrix,
    limits: &SearchLimits,
) -> Result<Option<MoveSequence>, MoveError> {
    if a.has_zero_row() || b.has_zero_row() {
        return Err(MoveError::ZeroRow);
    }
    let mut forward = Side::new(a);
    let mut backward = Side::new(b);

    if let Some(seq) = try_meet(&forward, &backward) {
        return Ok(Some(seq));
    }

    let mut nodes = forward.visited.len() + backward.visited.len();
    while !forward.frontier.is_empty() || !backward.frontier.is_empty() {
        if forward.depth + backward.depth >= limits.max_depth || nodes >= limits.max_nodes {
            return Ok(None);
        }
        let expand_forward = match (forward.frontier.is_empty(), backward.frontier.is_empty()) {
            (true, true) => return Ok(None),
            (false, true) => true,
            (true, false) => false,
            (false, false) => forward.frontier.len() <= backward.frontier.len(),
        };
        let (side, other) = if expand_forward {
            (&mut forward, &backward)
        } else {
            (&mut backward, &forward)
        };

        let mut next_frontier = Vec::new();
        let mut meet: Option<MoveSequence> = None;
        'level: for key in std::mem::take(&mut side.frontier) {
            let entry_matrix = side.visited[&key].matrix.clone();
            let entry_path = side.visited[&key].path.clone();
            for mv in neighbors(&entry_matrix, limits)? {
                if mv.to.rows() > limits.max_matrix_size {
                    continue;
                }
                let nk = canonical_key(&mv.to);
                if side.visited.contains_key(nk.matrix()) {
                    continue;
                }
                let mut path = entry_path.clone();
                path.push(mv.clone());
                side.visited.insert(
                    nk.matrix().clone(),
                    PathEntry {
                        matrix: mv.to.clone(),
                        path,
                    },
                );
                nodes += 1;
                next_frontier.push(nk.matrix().clone());
                if other.visited.contains_key(nk.matrix()) {
                    let (f, bwd) = if expand_forward {
                        (&*side, other)
                    } else {
                        (other, &*side)
                    };
                    meet = try_meet_at(f, bwd, nk.matrix());
                    if meet.is_some() {
                        break 'level;
                    }
                }
                if nodes >= limits.max_nodes {
                    break 'level;
                }
            }
        }
        side.depth += 1;
        side.frontier = next_frontier;
        if let Some(seq) = meet {
            return Ok(Some(seq));
        }
    }
    Ok(None)
}

fn try_meet(forward: &Side, backward: &Side) -> Option<MoveSequence> {
    for key in forward.visited.keys() {
        if backward.visited.contains_key(key) {
            if let Some(seq) = try_meet_at(forward, backward, key) {
                return Some(seq);
            }
        }
    }
    None
}

/// Assemble the path through a common canonical key. The two exact
/// representatives may differ by a permutation; conjugation is itself an
/// outsplit (`F = P (P^t F)`, `(P^t F) P = P^t F P`), inserted as a glue
/// move when needed.
fn try_meet_at(forward: &Side, backward: &Side, key: &IntMatrix) -> Option<MoveSequence> {
    let f = &forward.visited[key];
    let g = &backward.visited[key];
    let mut seq = f.path.clone();
    if f.matrix != g.matrix {
        let witness = permutation_equivalent(&f.matrix, &g.matrix)?;
        let n = f.matrix.rows();
        let p = IntMatrix::from_fn(n, n, |i, j| {
            if witness.mapping[i] == j {
                Int::one()
            } else {
                Int::zero()
            }
        });
        let e = p.transpose().checked_mul(&f.matrix).ok()?;
        let d = DivisionMatrix::try_new(p).expect("permutation matrices divide");
        seq.push(Move {
            kind: MoveKind::Outsplit { d, e },
            from: f.matrix.clone(),
            to: g.matrix.clone(),
        });
    }
    let seq = seq.then(&g.path.reversed());
    verify_move_sequence(&seq).expect("search emits only certified moves");
    Some(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_key_identifies_conjugates() {
        let a = IntMatrix::from_rows(&[&[0, 1, 2], &[3, 0, 0], &[1, 1, 0]]);
        let perm = [2usize, 0, 1];
        let b = a.conjugate_by_perm(&perm);
        assert_eq!(canonical_key(&a), canonical_key(&b));
        let mut c = a.clone();
        c.set(0, 0, Int::from(9));
        assert_ne!(canonical_key(&a), canonical_key(&c));
    }

    #[test]
    fn neighbors_of_the_full_shift() {
        let two = IntMatrix::scalar(2);
        let limits = SearchLimits {
            max_matrix_size: 2,
            ..Default::default()
        };
        let moves = neighbors(&two, &limits).unwrap();
        let b = IntMatrix::from_rows(&[&[1, 1], &[1, 1]]);
        assert!(moves
            .iter()
            .any(|m| matches!(m.kind, MoveKind::Outsplit { .. }) && m.to == b));
        for m in &moves {
            m.verify().unwrap();
        }
    }

    #[test]
    fn neighbors_include_amalgamation() {
        let b = IntMatrix::from_rows(&[&[1, 1], &[1, 1]]);
        let moves = neighbors(&b, &SearchLimits::default()).unwrap();
        assert!(moves
            .iter()
            .any(|m| matches!(m.kind, MoveKind::Outamalgamation { .. })
                && m.to == IntMatrix::scalar(2)));
    }

    #[test]
    fn no_moves_beyond_caps() {
        // distinct columns and size at the cap: no amalgamation, no splits
        let a = IntMatrix::from_rows(&[&[1, 2], &[1, 1]]);
        let limits = SearchLimits {
            max_matrix_size: 2,
            max_entry: Int::from(2),
            ..Default::default()
        };
        let moves = neighbors(&a, &limits).unwrap();
        assert!(moves
            .iter()
            .all(|m| !matches!(m.kind, MoveKind::Outsplit { .. })));
        assert!(moves
            .iter()
            .all(|m| !matches!(m.kind, MoveKind::Outamalgamation { .. })));
    }

    #[test]
    fn balanced_moves_verify() {
        // two identical rows allow nontrivial regroupings
        let a = IntMatrix::from_rows(&[&[1, 1, 1], &[1, 1, 1], &[2, 0, 1]]);
        let moves = neighbors(&a, &SearchLimits::default()).unwrap();
        let balanced: Vec<_> = moves
            .iter()
            .filter(|m| matches!(m.kind, MoveKind::BalancedElementary { .. }))
            .collect();
        assert!(!balanced.is_empty());
        for m in balanced {
            m.verify().unwrap();
        }
    }

    #[test]
    fn trivial_search_is_empty() {
        let a = IntMatrix::from_rows(&[&[1, 2], &[1, 1]]);
        let seq = search_balanced_path(&a, &a, &SearchLimits::default())
            .unwrap()
            .unwrap();
        assert!(seq.is_empty());
    }

    #[test]
    fn single_step_amalgamation_path() {
        let b = IntMatrix::from_rows(&[&[1, 1], &[1, 1]]);
        let two = IntMatrix::scalar(2);
        let seq = search_balanced_path(&b, &two, &SearchLimits::default())
            .unwrap()
            .unwrap();
        verify_move_sequence(&seq).unwrap();
        assert_eq!(&seq.start, &b);
        assert_eq!(seq.end(), &two);
        // and symmetrically
        let seq = search_balanced_path(&two, &b, &SearchLimits::default())
            .unwrap()
            .unwrap();
        verify_move_sequence(&seq).unwrap();
        assert_eq!(seq.end(), &b);
    }

    #[test]
    fn zero_row_inputs_are_rejected() {
        let z = IntMatrix::from_rows(&[&[0, 0], &[1, 1]]);
        assert!(matches!(
            search_balanced_path(&z, &z, &SearchLimits::default()),
            Err(MoveError::ZeroRow)
        ));
    }

    #[test]
    fn compositions_respect_caps() {
        assert_eq!(compositions(2, 2, 2).len(), 3); // 0+2, 1+1, 2+0
        assert_eq!(compositions(4, 2, 2).len(), 1); // 2+2 only
        assert!(compositions(5, 2, 2).is_empty());
    }

    #[test]
    fn set_partitions_count() {
        // Bell numbers: 1, 1, 2, 5
        assert_eq!(set_partitions(&[]).len(), 1);
        assert_eq!(set_partitions(&[0]).len(), 1);
        assert_eq!(set_partitions(&[0, 1]).len(), 2);
        assert_eq!(set_partitions(&[0, 1, 2]).len(), 5);
    }
}
