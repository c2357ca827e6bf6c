//! Property suites for the exact-arithmetic core: normal forms against
//! brute-force oracles, the dimension-group equality bound, move invariants,
//! and certificate algebra.

use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sft_core::conjugacy::{
    conjugate_higher_powers, one_sided_conjugate, permutation_equivalent,
};
use sft_core::dimension::{
    bowen_franks, check_commuting_square, dim_elem_equal, theta_apply, DimElement,
};
use sft_core::graph::{is_canonical_form, is_irreducible, scc_poset, CanonicalViolation};
use sft_core::matrix::{parse_matrix, Int, IntMatrix, Sign};
use sft_core::moves::{
    apply_outsplit, out_amalgamation_step, total_amalgamation, verify_move_sequence,
    OutsplitSpec,
};
use sft_core::poly::char_poly;
use sft_core::se::{unital_condition, verify_se, SeCertificate, UnitalVerdict};
use sft_core::search::{canonical_key, neighbors, SearchLimits};
use sft_core::snf::{smith_normal_form, smith_normal_form_with, PivotStrategy};

fn matrix_strategy(
    max_n: usize,
    lo: i64,
    hi: i64,
) -> impl Strategy<Value = IntMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(lo..=hi, n * n).prop_map(move |entries| {
            IntMatrix::new(n, n, entries.into_iter().map(Int::from).collect()).unwrap()
        })
    })
}

/// Nonnegative matrix with every row nonzero.
fn essential_rows_strategy(max_n: usize, hi: i64) -> impl Strategy<Value = IntMatrix> {
    matrix_strategy(max_n, 0, hi).prop_map(|mut m| {
        for i in 0..m.rows() {
            if m.row(i).iter().all(Zero::is_zero) {
                m.set(i, i, Int::one());
            }
        }
        m
    })
}

fn permutation_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Cofactor-expansion determinant, the brute-force oracle for `det`.
fn cofactor_det(m: &IntMatrix) -> Int {
    let n = m.rows();
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let rows: Vec<usize> = (1..n).collect();
    let mut acc = Int::zero();
    for j in 0..n {
        if m.get(0, j).is_zero() {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let minor = cofactor_det(&m.submatrix(&rows, &cols));
        let term = m.get(0, j) * minor;
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Random outsplit spec: distribute every unit of each row over a few parts.
fn random_outsplit_spec(a: &IntMatrix, rng: &mut StdRng) -> OutsplitSpec {
    let n = a.rows();
    let mut parts = Vec::with_capacity(n);
    for i in 0..n {
        let row = a.row(i);
        let sum: Int = row.iter().sum();
        let sum = sum.to_string().parse::<u64>().unwrap_or(1).max(1);
        let p = rng.gen_range(1..=sum.min(3)) as usize;
        let mut vecs = vec![vec![Int::zero(); n]; p];
        for (j, entry) in row.iter().enumerate() {
            let mut left = entry.clone();
            while left > Int::zero() {
                let which = rng.gen_range(0..p);
                vecs[which][j] += 1;
                left -= 1;
            }
        }
        vecs.retain(|v| v.iter().any(|x| !x.is_zero()));
        if vecs.is_empty() {
            vecs.push(row.to_vec());
        }
        parts.push(vecs);
    }
    OutsplitSpec { parts }
}

proptest! {
    #[test]
    fn snf_reconstructs_with_unimodular_transforms(
        m in matrix_strategy(5, -4, 4),
    ) {
        let snf = smith_normal_form(&m);
        prop_assert!(snf.reconstructs(&m));
        let det_l = snf.left.det().unwrap();
        let det_r = snf.right.det().unwrap();
        prop_assert!(det_l == Int::from(1) || det_l == Int::from(-1));
        prop_assert!(det_r == Int::from(1) || det_r == Int::from(-1));
        // divisibility chain
        for w in snf.diag.windows(2) {
            if !w[0].is_zero() {
                prop_assert!(num_integer::Integer::mod_floor(&w[1], &w[0]).is_zero());
            } else {
                prop_assert!(w[1].is_zero());
            }
        }
        // det sign consistency: det m = (prod diag) / (det L det R)
        let prod: Int = snf.diag.iter().product();
        prop_assert_eq!(m.det().unwrap() * det_l * det_r, prod);
        // an independent pivot order must give the same invariant factors
        let alt = smith_normal_form_with(&m, PivotStrategy::FirstNonzero);
        prop_assert!(alt.reconstructs(&m));
        prop_assert_eq!(alt.diag, snf.diag);
    }

    #[test]
    fn power_is_additive(
        a in matrix_strategy(4, 0, 3),
        i in 0usize..=6,
        j in 0usize..=6,
    ) {
        let lhs = a.checked_pow(i + j).unwrap();
        let rhs = a.checked_pow(i).unwrap().checked_mul(&a.checked_pow(j).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cayley_hamilton(m in matrix_strategy(5, -4, 4)) {
        let p = char_poly(&m).unwrap();
        prop_assert!(p.is_monic());
        prop_assert_eq!(p.degree(), m.rows());
        prop_assert_eq!(p.eval_matrix(&m).unwrap(), IntMatrix::zero(m.rows(), m.rows()));
    }

    #[test]
    fn det_sign_matches_cofactor_oracle(m in matrix_strategy(4, -4, 4)) {
        let oracle = cofactor_det(&m);
        prop_assert_eq!(m.det().unwrap(), oracle.clone());
        prop_assert_eq!(m.det_sign().unwrap(), Sign::of(&oracle));
    }

    #[test]
    fn text_format_round_trip(m in matrix_strategy(5, -9, 9)) {
        let text = m.to_string();
        prop_assert_eq!(parse_matrix(&text).unwrap(), m);
    }

    #[test]
    fn json_certificate_round_trip(a in essential_rows_strategy(3, 3)) {
        let cert = SeCertificate::identity(&a);
        let json = serde_json::to_string(&cert).unwrap();
        let back: SeCertificate = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(cert, back);
    }

    #[test]
    fn scc_poset_is_permutation_invariant(
        a in matrix_strategy(6, 0, 2),
        seed in any::<u64>(),
    ) {
        let n = a.rows();
        let mut rng = StdRng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let b = a.conjugate_by_perm(&perm);
        let pa = scc_poset(&a).unwrap();
        let pb = scc_poset(&b).unwrap();
        prop_assert_eq!(pa.len(), pb.len());
        for i in 0..n {
            for j in 0..n {
                let lhs = pa.leq(pa.component_of(i), pa.component_of(j));
                let rhs = pb.leq(pb.component_of(perm[i]), pb.component_of(perm[j]));
                prop_assert_eq!(lhs, rhs, "order must be stable under relabeling");
            }
        }
    }

    #[test]
    fn irreducibility_matches_brute_force(a in matrix_strategy(5, 0, 2)) {
        let n = a.rows();
        // for any pair some power up to n has a positive entry
        let mut powers = Vec::with_capacity(n);
        let mut p = a.clone();
        for _ in 0..n {
            powers.push(p.clone());
            p = p.checked_mul(&a).unwrap();
        }
        let brute = (0..n).all(|i| {
            (0..n).all(|j| powers.iter().any(|q| q.get(i, j) > &Int::zero()))
        });
        prop_assert_eq!(is_irreducible(&a), brute);
        if is_irreducible(&a) {
            prop_assert_eq!(scc_poset(&a).unwrap().len(), 1);
        }
    }

    #[test]
    fn canonical_clause_two_matches_brute_force(a in matrix_strategy(4, 0, 2)) {
        let n = a.rows();
        let mut reach = vec![vec![false; n]; n];
        let mut p = a.clone();
        for _ in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if p.get(i, j) > &Int::zero() {
                        reach[i][j] = true;
                    }
                }
            }
            p = p.checked_mul(&a).unwrap();
        }
        let report = is_canonical_form(&a).unwrap();
        for i in 0..n {
            for j in 0..n {
                let expected = reach[i][j] && a.get(i, j).is_zero();
                let reported = report.violations.iter().any(|v| {
                    matches!(v, CanonicalViolation::MissingTransitiveEdge { from, to }
                             if *from == i && *to == j)
                });
                prop_assert_eq!(expected, reported);
            }
        }
    }

    #[test]
    fn dim_equality_matches_oracle_and_is_an_equivalence(
        a in matrix_strategy(4, 0, 3),
        vx in prop::collection::vec(-3i64..=3, 4),
        vy in prop::collection::vec(-3i64..=3, 4),
        vz in prop::collection::vec(-3i64..=3, 4),
        kx in 0usize..=4,
        ky in 0usize..=4,
        kz in 0usize..=4,
    ) {
        let n = a.rows();
        let at = a.transpose();
        let elem = |v: &[i64], k: usize| {
            DimElement::new(
                a.clone(),
                IntMatrix::from_fn(n, 1, |i, _| Int::from(v[i])),
                k,
            ).unwrap()
        };
        // unbounded-search oracle, truncated at stage + 2|A|
        let oracle = |x: &DimElement, y: &DimElement| -> bool {
            let top = x.stage().max(y.stage()) + 2 * n;
            (x.stage().max(y.stage())..=top).any(|l| {
                let lhs = at.checked_pow(l - x.stage()).unwrap()
                    .checked_mul(x.vec()).unwrap();
                let rhs = at.checked_pow(l - y.stage()).unwrap()
                    .checked_mul(y.vec()).unwrap();
                lhs == rhs
            })
        };
        let x = elem(&vx, kx);
        let y = elem(&vy, ky);
        let z = elem(&vz, kz);
        prop_assert_eq!(dim_elem_equal(&x, &y).unwrap(), oracle(&x, &y));
        // reflexive, symmetric, transitive
        prop_assert!(dim_elem_equal(&x, &x).unwrap());
        prop_assert_eq!(dim_elem_equal(&x, &y).unwrap(), dim_elem_equal(&y, &x).unwrap());
        if dim_elem_equal(&x, &y).unwrap() && dim_elem_equal(&y, &z).unwrap() {
            prop_assert!(dim_elem_equal(&x, &z).unwrap());
        }
        // theta is a bijection on classes
        prop_assert_eq!(
            dim_elem_equal(&x, &y).unwrap(),
            dim_elem_equal(&theta_apply(&x), &theta_apply(&y)).unwrap()
        );
    }

    #[test]
    fn kernel_chain_stabilises_by_the_size(
        a in matrix_strategy(5, 0, 3),
        w in prop::collection::vec(-3i64..=3, 5),
    ) {
        let n = a.rows();
        let at = a.transpose();
        let wv = IntMatrix::from_fn(n, 1, |i, _| Int::from(w[i]));
        let killed_somewhere = (0..=3 * n).any(|l| {
            at.checked_pow(l).unwrap().checked_mul(&wv).unwrap()
                == IntMatrix::zero(n, 1)
        });
        if killed_somewhere {
            prop_assert_eq!(
                at.checked_pow(n).unwrap().checked_mul(&wv).unwrap(),
                IntMatrix::zero(n, 1)
            );
        }
    }

    #[test]
    fn outsplits_carry_unital_lag1_certificates(
        a in essential_rows_strategy(4, 3),
        seed in any::<u64>(),
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let spec = random_outsplit_spec(&a, &mut rng);
        let out = apply_outsplit(&a, &spec).unwrap();
        // defining equations
        prop_assert_eq!(out.d.matrix().checked_mul(&out.e).unwrap(), a.clone());
        prop_assert_eq!(out.e.checked_mul(out.d.matrix()).unwrap(), out.b.clone());
        // D^t 1 = 1
        let dt1 = out.d.matrix().transpose()
            .checked_mul(&IntMatrix::ones_column(a.rows())).unwrap();
        prop_assert_eq!(dt1, IntMatrix::ones_column(out.b.rows()));
        // lag-1 unital certificate with verdict Yes(0,0)
        let cert = SeCertificate::from_outsplit(&a, out.d.matrix(), &out.e).unwrap();
        prop_assert!(verify_se(&cert).is_ok());
        prop_assert_eq!(
            unital_condition(&cert, None).unwrap(),
            UnitalVerdict::Yes { m: 0, k: 0 }
        );
        // outsplit pairs are one-sided conjugate
        prop_assert!(one_sided_conjugate(&a, &out.b).unwrap().conjugate);
    }

    #[test]
    fn total_amalgamation_is_idempotent(a in essential_rows_strategy(5, 3)) {
        let t = total_amalgamation(&a).unwrap();
        prop_assert!(verify_move_sequence(&t.seq).is_ok());
        prop_assert!(!t.total.has_zero_row());
        // the fixed point does not move again
        let again = total_amalgamation(&t.total).unwrap();
        prop_assert_eq!(again.total, t.total);
        prop_assert!(again.seq.is_empty());
    }

    #[test]
    fn amalgamation_step_replays(a in essential_rows_strategy(5, 3)) {
        if let Some(step) = out_amalgamation_step(&a).unwrap() {
            prop_assert_eq!(step.e.checked_mul(step.d.matrix()).unwrap(), a);
            prop_assert_eq!(
                step.d.matrix().checked_mul(&step.e).unwrap(),
                step.smaller
            );
        }
    }

    #[test]
    fn permutation_witnesses_invert(
        a in matrix_strategy(6, 0, 3),
        seed in any::<u64>(),
    ) {
        let n = a.rows();
        let mut rng = StdRng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let b = a.conjugate_by_perm(&perm);
        let w = permutation_equivalent(&a, &b).expect("conjugates are equivalent");
        prop_assert!(w.certifies(&a, &b));
        let back = permutation_equivalent(&b, &a).expect("symmetric");
        prop_assert!(back.certifies(&b, &a));
        prop_assert!(w.compose(&back).certifies(&a, &a));
        // canonical keys coincide exactly on conjugates
        prop_assert_eq!(canonical_key(&a), canonical_key(&b));
    }

    #[test]
    fn certificate_composition_closes(
        a in essential_rows_strategy(3, 2),
        seed in any::<u64>(),
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let first = apply_outsplit(&a, &random_outsplit_spec(&a, &mut rng)).unwrap();
        let b = first.b.clone();
        let second = apply_outsplit(&b, &random_outsplit_spec(&b, &mut rng)).unwrap();
        let c1 = SeCertificate::from_outsplit(&a, first.d.matrix(), &first.e).unwrap();
        let c2 = SeCertificate::from_outsplit(&b, second.d.matrix(), &second.e).unwrap();
        let composed = c1.compose(&c2).unwrap();
        prop_assert!(verify_se(&composed).is_ok());
        prop_assert_eq!(composed.lag, 2);
        // reversal also verifies (outsplit certificates are two-way)
        prop_assert!(verify_se(&composed.reversed()).is_ok());
        // the Bowen-Franks square commutes for every verified certificate
        let square = check_commuting_square(&composed.r, &composed.a, &composed.b).unwrap();
        prop_assert!(square.holds);
        // invariance of the unital signed invariant under unital equivalence
        let bf_a = bowen_franks(&composed.a).unwrap();
        let bf_b = bowen_franks(&composed.b).unwrap();
        prop_assert_eq!(bf_a.group_invariants(), bf_b.group_invariants());
        prop_assert_eq!(bf_a.sign, bf_b.sign);
    }

    #[test]
    fn higher_powers_preserve_spectra_away_from_zero(
        a in essential_rows_strategy(3, 2),
        seed in any::<u64>(),
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let out = apply_outsplit(&a, &random_outsplit_spec(&a, &mut rng)).unwrap();
        let b = out.b.clone();
        let report = conjugate_higher_powers(&a, &b, None).unwrap();
        prop_assert!(report.conjugate_higher_powers);
        for m in [report.n, report.n + 1] {
            let pa = char_poly(&a.checked_pow(m).unwrap()).unwrap();
            let pb = char_poly(&b.checked_pow(m).unwrap()).unwrap();
            prop_assert!(pa.agrees_up_to_x_power(&pb));
        }
    }

    #[test]
    fn neighbor_moves_all_verify(a in essential_rows_strategy(3, 2)) {
        let limits = SearchLimits {
            max_matrix_size: 4,
            max_entry: Int::from(6),
            ..Default::default()
        };
        for mv in neighbors(&a, &limits).unwrap() {
            prop_assert!(mv.verify().is_ok());
            prop_assert_eq!(&mv.from, &a);
        }
    }
}
