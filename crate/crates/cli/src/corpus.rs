//! Worked examples from the literature, stored with their certificates and
//! expected verdicts. `verify_corpus` replays every stored claim against the
//! library and reports one result per check; the test suites require all of
//! them to pass.

use sft_core::conjugacy::{conjugate_higher_powers, one_sided_conjugate, permutation_equivalent};
use sft_core::dimension::bowen_franks;
use sft_core::matrix::{Int, IntMatrix, Sign};
use sft_core::moves::{
    out_amalgamation_step_ordered, verify_balanced_elementary, verify_move_sequence,
    DivisionMatrix, Move, MoveKind, MoveSequence,
};
use sft_core::poly::char_poly;
use sft_core::se::{
    balanced_to_unital_se, boyle_pse_identity, unital_condition, verify_se, SeCertificate,
    UnitalNoReason, UnitalVerdict,
};
use sft_core::{IntPolynomial, PivotStrategy};

/// A named family of matrices, certificates and move sequences, with a list
/// of the verdicts the library is expected to reproduce.
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub matrices: Vec<(&'static str, IntMatrix)>,
    pub certificates: Vec<(&'static str, SeCertificate)>,
    pub move_sequences: Vec<(&'static str, MoveSequence)>,
    pub expected: Vec<&'static str>,
}

impl CorpusEntry {
    pub fn matrix(&self, name: &str) -> &IntMatrix {
        &self
            .matrices
            .iter()
            .find(|(n, _)| *n == name)
            .unwrap_or_else(|| panic!("{}: no matrix named {name}", self.name))
            .1
    }

    pub fn certificate(&self, name: &str) -> &SeCertificate {
        &self
            .certificates
            .iter()
            .find(|(n, _)| *n == name)
            .unwrap_or_else(|| panic!("{}: no certificate named {name}", self.name))
            .1
    }

    pub fn move_sequence(&self, name: &str) -> &MoveSequence {
        &self
            .move_sequences
            .iter()
            .find(|(n, _)| *n == name)
            .unwrap_or_else(|| panic!("{}: no move sequence named {name}", self.name))
            .1
    }
}

// ---------------------------------------------------------------------------
// full 2-shift chain: (2), its outsplit, and an insplit of the outsplit
// ---------------------------------------------------------------------------

pub fn full_shift_two() -> IntMatrix {
    IntMatrix::scalar(2)
}

pub fn outsplit_of_two() -> IntMatrix {
    IntMatrix::from_rows(&[&[1, 1], &[1, 1]])
}

pub fn insplit_c() -> IntMatrix {
    IntMatrix::from_rows(&[&[1, 0, 1], &[1, 0, 1], &[0, 1, 1]])
}

fn dyadic_entry() -> CorpusEntry {
    let two = full_shift_two();
    let b = outsplit_of_two();
    let c = insplit_c();
    // (2) -> B is an outsplit: lag-1 unital certificate (D, E)
    let cert_two_b = SeCertificate::new(
        two.clone(),
        b.clone(),
        IntMatrix::from_rows(&[&[1, 1]]),
        IntMatrix::from_rows(&[&[1], &[1]]),
        1,
    );
    // B -> C is an insplit: lag-1 certificate, not unit-preserving
    let cert_b_c = SeCertificate::new(
        b.clone(),
        c.clone(),
        IntMatrix::from_rows(&[&[1, 0, 1], &[0, 1, 1]]),
        IntMatrix::from_rows(&[&[1, 0], &[1, 0], &[0, 1]]),
        1,
    );
    let composed = cert_two_b
        .compose(&cert_b_c)
        .expect("certificates chain at B");
    CorpusEntry {
        name: "dyadic_chain",
        description: "The full 2-shift, its outsplit, and an insplit of the outsplit; the \
                      composed lag-2 equivalence from (2) to C is not unital.",
        matrices: vec![("two", two), ("b", b), ("c", c)],
        certificates: vec![
            ("outsplit_two_to_b", cert_two_b),
            ("insplit_b_to_c", cert_b_c),
            ("composed_two_to_c", composed),
        ],
        move_sequences: vec![],
        expected: vec![
            "outsplit_two_to_b verifies and is unital with Yes(0,0)",
            "insplit_b_to_c verifies with unital verdict No",
            "composed_two_to_c verifies with unital verdict No (sum growth at k=1)",
            "one_sided_conjugate(two, b) = true",
        ],
    }
}

// ---------------------------------------------------------------------------
// the A_k / B_k similarity family
// ---------------------------------------------------------------------------

pub fn family_a(k: i64) -> IntMatrix {
    IntMatrix::from_rows(&[&[1, k], &[k - 1, 1]])
}

pub fn family_b(k: i64) -> IntMatrix {
    IntMatrix::from_rows(&[&[1, (k - 1) * k], &[1, 1]])
}

pub fn family_p(k: i64) -> IntMatrix {
    IntMatrix::from_rows(&[&[k - 1, k], &[1, 1]])
}

/// `R = P_k^{-1} B_k^j`, `S = B_k P_k A_k^j` for the least `j > 1` making `R`
/// nonnegative; the certificate then has lag `2j + 1`. Returns `(cert, j)`.
///
/// The least such `j` grows with `k` (it is 3 for k = 3, 5 for k = 4, and
/// 7 for k = 5): `P_k^{-1}` has mixed signs, and only powers high enough for
/// the dominant eigenvector to take over give nonnegative products.
pub fn family_certificate(k: i64) -> (SeCertificate, usize) {
    let a = family_a(k);
    let b = family_b(k);
    let p = family_p(k);
    // det P_k = -1, so the inverse is the negated adjugate
    let p_inv = IntMatrix::from_rows(&[&[-1, k], &[1, -(k - 1)]]);
    assert_eq!(
        p_inv.checked_mul(&p).unwrap(),
        IntMatrix::identity(2),
        "P_k inverse"
    );
    for j in 2..64usize {
        let r = p_inv.checked_mul(&b.checked_pow(j).unwrap()).unwrap();
        if !r.is_nonnegative() {
            continue;
        }
        let s = b
            .checked_mul(&p)
            .unwrap()
            .checked_mul(&a.checked_pow(j).unwrap())
            .unwrap();
        let cert = SeCertificate::new(a, b, r, s, 2 * j + 1);
        return (cert, j);
    }
    panic!("no nonnegative power found for k = {k}");
}

fn family_entry(k: i64) -> CorpusEntry {
    let (cert, _j) = family_certificate(k);
    let name: &'static str = match k {
        3 => "similarity_family_k3",
        4 => "similarity_family_k4",
        5 => "similarity_family_k5",
        _ => "similarity_family",
    };
    let expected_verdicts: Vec<&'static str> = vec![
        "se verifies as a nonnegative certificate",
        "unital verdict is Yes(0, j-1)",
    ];
    CorpusEntry {
        name,
        description: "Shift equivalent 2x2 pair related by an integral similarity; strong shift \
                      equivalence is known only for small k.",
        matrices: vec![("a", family_a(k)), ("b", family_b(k)), ("p", family_p(k))],
        certificates: vec![("se", cert)],
        move_sequences: vec![],
        expected: expected_verdicts,
    }
}

// ---------------------------------------------------------------------------
// rank-one family member with conjugate higher powers but no conjugacy
// ---------------------------------------------------------------------------

pub fn rank_one_a1() -> IntMatrix {
    IntMatrix::from_rows(&[&[2, 0, 4], &[1, 2, 0], &[1, 2, 0]])
}

fn rank_one_entry() -> CorpusEntry {
    CorpusEntry {
        name: "rank_one_pair",
        description: "A 3x3 matrix with conjugate higher powers to the full 4-shift, yet not \
                      one-sided conjugate to it (the total amalgamations differ).",
        matrices: vec![("a1", rank_one_a1()), ("four", IntMatrix::scalar(4))],
        certificates: vec![],
        move_sequences: vec![],
        expected: vec![
            "conjugate_higher_powers(a1, four) = true with totals (64) and (256)",
            "one_sided_conjugate(a1, four) = false",
        ],
    }
}

// ---------------------------------------------------------------------------
// pair without conjugate higher powers (Brix-Carlsen)
// ---------------------------------------------------------------------------

pub fn brix_carlsen_a() -> IntMatrix {
    IntMatrix::from_rows(&[&[0, 2, 2], &[1, 0, 0], &[1, 0, 0]])
}

pub fn brix_carlsen_b() -> IntMatrix {
    IntMatrix::from_rows(&[&[0, 3, 1], &[1, 0, 0], &[1, 0, 0]])
}

fn brix_carlsen_entry() -> CorpusEntry {
    CorpusEntry {
        name: "brix_carlsen_pair",
        description: "Matsumoto eventually conjugate pair whose powers have distinct total \
                      amalgamations, so the shifts do not have conjugate higher powers.",
        matrices: vec![("a", brix_carlsen_a()), ("b", brix_carlsen_b())],
        certificates: vec![],
        move_sequences: vec![],
        expected: vec!["conjugate_higher_powers(a, b) = false"],
    }
}

// ---------------------------------------------------------------------------
// Ashley's graph
// ---------------------------------------------------------------------------

/// Adjacency matrix of Ashley's eight-vertex graph. The transcription is
/// gated: row and column sums all equal 2, the characteristic polynomial is
/// x^7 (x - 2), and A^7 = 16 * J. Any transcription failing a gate panics
/// here rather than entering the corpus.
pub fn ashley_matrix() -> IntMatrix {
    let a = IntMatrix::from_rows(&[
        &[1, 0, 1, 0, 0, 0, 0, 0],
        &[1, 1, 0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 1, 1, 0, 0],
        &[0, 1, 0, 0, 0, 0, 0, 1],
        &[0, 0, 0, 1, 0, 0, 1, 0],
        &[0, 0, 0, 1, 1, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0, 0, 1],
        &[0, 0, 0, 0, 0, 1, 1, 0],
    ]);
    for (gate, ok) in ashley_gates(&a) {
        assert!(ok, "ashley transcription fails gate: {gate}");
    }
    a
}

/// The three acceptance gates for the Ashley transcription.
pub fn ashley_gates(a: &IntMatrix) -> Vec<(&'static str, bool)> {
    let n = a.rows();
    let ones = IntMatrix::ones_column(n);
    let row_sums = a.checked_mul(&ones).unwrap();
    let col_sums = a.transpose().checked_mul(&ones).unwrap();
    let two = Int::from(2);
    let sums_ok = (0..n).all(|i| row_sums.get(i, 0) == &two && col_sums.get(i, 0) == &two)
        && a.is_zero_one();
    let poly_ok = char_poly(a).unwrap()
        == IntPolynomial::from_i64(&[0, 0, 0, 0, 0, 0, 0, -2, 1]);
    let pow_ok = a.checked_pow(7).unwrap() == IntMatrix::from_fn(n, n, |_, _| Int::from(16));
    vec![
        ("zero-one with row and column sums 2", sums_ok),
        ("characteristic polynomial x^7 (x - 2)", poly_ok),
        ("A^7 = 16 * J", pow_ok),
    ]
}

pub fn ashley_certificate() -> SeCertificate {
    let a = ashley_matrix();
    let r = IntMatrix::from_fn(8, 1, |_, _| Int::from(16));
    let s = IntMatrix::from_fn(1, 8, |_, _| Int::from(1));
    SeCertificate::new(a, IntMatrix::scalar(2), r, s, 7)
}

fn ashley_entry() -> CorpusEntry {
    CorpusEntry {
        name: "ashley",
        description: "Ashley's eight-vertex graph: shift equivalent to the full 2-shift with \
                      the rank-one lag-7 certificate (16*1, 1^t); two-sided conjugacy to (2) \
                      is a famous open problem.",
        matrices: vec![("a", ashley_matrix()), ("two", IntMatrix::scalar(2))],
        certificates: vec![("se_to_full_2_shift", ashley_certificate())],
        move_sequences: vec![],
        expected: vec![
            "all three transcription gates pass",
            "se_to_full_2_shift verifies with unital verdict Yes(0,7)",
            "boyle_pse_identity holds for the certificate",
        ],
    }
}

// ---------------------------------------------------------------------------
// Rourke's pair and the balanced move chain
// ---------------------------------------------------------------------------

pub fn rourke_a() -> IntMatrix {
    IntMatrix::from_rows(&[&[1, 2, 1], &[1, 1, 0], &[1, 0, 1]])
}

pub fn rourke_b() -> IntMatrix {
    IntMatrix::from_rows(&[
        &[1, 0, 1, 0, 1],
        &[0, 1, 1, 1, 0],
        &[1, 1, 1, 0, 0],
        &[1, 0, 0, 0, 1],
        &[0, 1, 0, 1, 0],
    ])
}

pub fn rourke_r0() -> IntMatrix {
    IntMatrix::from_rows(&[
        &[1, 0, 1, 0, 1],
        &[0, 1, 0, 1, 0],
        &[1, 1, 1, 0, 0],
        &[1, 0, 0, 0, 1],
        &[0, 1, 0, 1, 0],
        &[0, 0, 1, 0, 0],
    ])
}

pub fn rourke_s0() -> IntMatrix {
    IntMatrix::from_rows(&[
        &[1, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 1],
        &[0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 1, 0],
    ])
}

pub fn rourke_b_prime() -> IntMatrix {
    IntMatrix::from_rows(&[
        &[1, 0, 1, 0, 1, 0],
        &[0, 1, 0, 1, 0, 1],
        &[1, 1, 1, 0, 0, 1],
        &[1, 0, 0, 0, 1, 0],
        &[0, 1, 0, 1, 0, 1],
        &[0, 0, 1, 0, 0, 0],
    ])
}

pub fn rourke_r1_prime() -> IntMatrix {
    IntMatrix::from_rows(&[
        &[1, 0, 1, 0, 1, 0],
        &[0, 1, 0, 1, 0, 1],
        &[1, 1, 1, 0, 0, 1],
        &[1, 0, 0, 0, 1, 0],
        &[0, 0, 1, 0, 0, 0],
    ])
}

pub fn rourke_r1_double_prime() -> IntMatrix {
    IntMatrix::from_rows(&[
        &[1, 0, 1, 0, 1, 0],
        &[0, 1, 0, 1, 0, 1],
        &[1, 0, 1, 0, 1, 1],
        &[1, 0, 0, 0, 1, 0],
        &[0, 0, 1, 0, 0, 0],
    ])
}

pub fn rourke_s1_prime() -> IntMatrix {
    IntMatrix::from_rows(&[
        &[1, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0],
        &[0, 0, 1, 0, 0],
        &[0, 0, 0, 1, 0],
        &[0, 1, 0, 0, 0],
        &[0, 0, 0, 0, 1],
    ])
}

pub fn rourke_b_double_prime() -> IntMatrix {
    IntMatrix::from_rows(&[
        &[1, 0, 1, 0, 1, 0],
        &[0, 1, 0, 1, 0, 1],
        &[1, 0, 1, 0, 1, 1],
        &[1, 0, 0, 0, 1, 0],
        &[0, 1, 0, 1, 0, 1],
        &[0, 0, 1, 0, 0, 0],
    ])
}

/// The certified chain B -> B' -> B'' -> A.
///
/// The first step is the outsplit B = S0 R0, B' = R0 S0 (the source defines
/// S0 once and later writes "R0 S1"; replay confirms S1 = S0 was meant). The
/// second step is the balanced insplit between B' and B''. The amalgamation
/// from B'' runs in two steps, the second with its column classes ordered so
/// the chain lands exactly on A rather than a permuted copy.
pub fn rourke_chain() -> MoveSequence {
    let b = rourke_b();
    let b_prime = rourke_b_prime();
    let b_dprime = rourke_b_double_prime();
    let a = rourke_a();

    let mut seq = MoveSequence::empty(b.clone());
    seq.push(Move {
        kind: MoveKind::Outsplit {
            d: DivisionMatrix::try_new(rourke_s0()).expect("S0 divides"),
            e: rourke_r0(),
        },
        from: b,
        to: b_prime.clone(),
    });
    seq.push(Move {
        kind: MoveKind::BalancedElementary {
            s: rourke_s1_prime(),
            r_from: rourke_r1_prime(),
            r_to: rourke_r1_double_prime(),
        },
        from: b_prime,
        to: b_dprime.clone(),
    });
    let step1 = out_amalgamation_step_ordered(&b_dprime, None)
        .expect("square")
        .expect("B'' has identical columns");
    let m1 = step1.smaller.clone();
    seq.push(Move::outamalgamation(b_dprime, step1));
    // class order [ {0,3}, {2}, {1} ] lands exactly on A
    let step2 = out_amalgamation_step_ordered(&m1, Some(&[0, 2, 1]))
        .expect("square")
        .expect("M1 has identical columns");
    debug_assert_eq!(step2.smaller, a);
    seq.push(Move::outamalgamation(m1, step2));
    seq
}

/// Lag-2 unital certificate carried by the balanced insplit between B' and
/// B''.
pub fn rourke_balanced_certificate() -> SeCertificate {
    SeCertificate::new(
        rourke_b_prime(),
        rourke_b_double_prime(),
        rourke_b_double_prime(),
        rourke_b_prime(),
        2,
    )
}

fn rourke_entry() -> CorpusEntry {
    CorpusEntry {
        name: "rourke",
        description: "Rourke's shift equivalent primitive pair: the total amalgamation of B^n \
                      is A^n for n >= 2, and a computer-found chain of balanced moves connects \
                      B to A.",
        matrices: vec![
            ("a", rourke_a()),
            ("b", rourke_b()),
            ("b_prime", rourke_b_prime()),
            ("b_double_prime", rourke_b_double_prime()),
            ("r0", rourke_r0()),
            ("s0", rourke_s0()),
            ("r1_prime", rourke_r1_prime()),
            ("r1_double_prime", rourke_r1_double_prime()),
            ("s1_prime", rourke_s1_prime()),
        ],
        certificates: vec![("balanced_lag2", rourke_balanced_certificate())],
        move_sequences: vec![("chain", rourke_chain())],
        expected: vec![
            "chain replays: B -> B' -> B'' -> A",
            "total_amalgamation(B^n) is permutation equivalent to A^n for n = 2..7",
            "conjugate_higher_powers(a, b) = true",
            "balanced_lag2 verifies with unital verdict Yes(0,1)",
        ],
    }
}

// ---------------------------------------------------------------------------
// the 7x7 pair that is shift equivalent but not strong shift equivalent
// ---------------------------------------------------------------------------

pub fn kim_roush_a() -> IntMatrix {
    IntMatrix::from_rows(&[
        &[0, 0, 1, 1, 3, 0, 0],
        &[1, 0, 0, 0, 3, 0, 0],
        &[0, 1, 0, 0, 3, 0, 0],
        &[0, 0, 1, 0, 3, 0, 0],
        &[0, 0, 0, 0, 0, 0, 1],
        &[1, 1, 1, 1, 10, 0, 0],
        &[1, 1, 1, 1, 0, 1, 0],
    ])
}

/// Companion of `kim_roush_a` in the Kim-Roush (1999) counterexample to the
/// Williams conjecture. Reproductions of this matrix sometimes garble rows
/// 2-4 into copies of row 1, which is impossible for a shift equivalent
/// partner (identical rows force a zero eigenvalue that A does not have);
/// the shifted-identity form below is the unique small completion with the
/// same characteristic polynomial as A, and both invariant-factor lists and
/// determinant signs of `I - M^t` then agree.
pub fn kim_roush_b() -> IntMatrix {
    IntMatrix::from_rows(&[
        &[0, 0, 1, 1, 3, 0, 0],
        &[1, 0, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, 1],
        &[4, 5, 6, 3, 10, 0, 0],
        &[4, 5, 6, 3, 0, 1, 0],
    ])
}

fn kim_roush_entry() -> CorpusEntry {
    CorpusEntry {
        name: "kim_roush",
        description: "Kim and Roush's shift equivalent pair (lag 13) that is not strong shift \
                      equivalent; the witnessing matrices are not stored, so the expected \
                      verdicts are invariant-level only.",
        matrices: vec![("a", kim_roush_a()), ("b", kim_roush_b())],
        certificates: vec![],
        move_sequences: vec![],
        expected: vec![
            "bowen_franks invariant factors and signs agree",
            "characteristic polynomials agree up to factors of x",
        ],
    }
}

pub fn corpus() -> Vec<CorpusEntry> {
    vec![
        dyadic_entry(),
        family_entry(3),
        family_entry(4),
        family_entry(5),
        rank_one_entry(),
        brix_carlsen_entry(),
        ashley_entry(),
        rourke_entry(),
        kim_roush_entry(),
    ]
}

/// One replayed claim.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckResult {
    pub entry: String,
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

fn check(results: &mut Vec<CheckResult>, entry: &str, name: &str, pass: bool, detail: String) {
    results.push(CheckResult {
        entry: entry.to_string(),
        check: name.to_string(),
        pass,
        detail,
    });
}

/// Replay every stored certificate, move sequence and expected verdict.
pub fn verify_corpus() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let entries = corpus();

    // every stored certificate satisfies verify_se
    for entry in &entries {
        for (name, cert) in &entry.certificates {
            let r = verify_se(cert);
            check(
                &mut out,
                entry.name,
                &format!("certificate {name} verifies"),
                r.is_ok(),
                format!("{r:?}"),
            );
        }
        for (name, seq) in &entry.move_sequences {
            let r = verify_move_sequence(seq);
            check(
                &mut out,
                entry.name,
                &format!("move sequence {name} replays"),
                r.is_ok(),
                format!("{r:?}"),
            );
        }
    }

    let by_name = |name: &str| -> &CorpusEntry {
        entries
            .iter()
            .find(|e| e.name == name)
            .expect("corpus entry")
    };

    // dyadic chain verdicts
    {
        let e = by_name("dyadic_chain");
        let v = unital_condition(e.certificate("outsplit_two_to_b"), None).unwrap();
        check(
            &mut out,
            e.name,
            "outsplit certificate is unital Yes(0,0)",
            v == UnitalVerdict::Yes { m: 0, k: 0 },
            format!("{v:?}"),
        );
        let v = unital_condition(e.certificate("insplit_b_to_c"), None).unwrap();
        check(
            &mut out,
            e.name,
            "insplit certificate fails the unital condition",
            matches!(v, UnitalVerdict::No { .. }),
            format!("{v:?}"),
        );
        let v = unital_condition(e.certificate("composed_two_to_c"), None).unwrap();
        check(
            &mut out,
            e.name,
            "composed certificate: No by sum growth at k=1",
            v == UnitalVerdict::No {
                reason: UnitalNoReason::SumGrowth { k: 1 },
            },
            format!("{v:?}"),
        );
        let d = one_sided_conjugate(e.matrix("two"), e.matrix("b")).unwrap();
        check(
            &mut out,
            e.name,
            "outsplit pair is one-sided conjugate",
            d.conjugate,
            String::new(),
        );
    }

    // similarity family verdicts
    for (k, expect_j) in [(3i64, 3usize), (4, 5), (5, 7)] {
        let name = match k {
            3 => "similarity_family_k3",
            4 => "similarity_family_k4",
            _ => "similarity_family_k5",
        };
        let e = by_name(name);
        let cert = e.certificate("se");
        let j = (cert.lag - 1) / 2;
        check(
            &mut out,
            e.name,
            "least nonnegative power",
            j == expect_j && cert.lag == 2 * expect_j + 1,
            format!("j = {j}, lag = {}", cert.lag),
        );
        let v = unital_condition(cert, None).unwrap();
        check(
            &mut out,
            e.name,
            "unital verdict Yes(0, j-1)",
            v == UnitalVerdict::Yes { m: 0, k: j - 1 },
            format!("{v:?}"),
        );
        if k == 3 {
            let r_ok = cert.r == IntMatrix::from_rows(&[&[8, 3], &[1, 16]]);
            let s_ok = cert.s == IntMatrix::from_rows(&[&[314, 387], &[129, 157]]);
            check(
                &mut out,
                e.name,
                "hand-computed R and S for k = 3",
                r_ok && s_ok,
                String::new(),
            );
            let pse = boyle_pse_identity(&cert.a, &cert.b, cert).unwrap();
            check(
                &mut out,
                e.name,
                "polynomial shift-equivalence identity holds",
                pse.holds,
                String::new(),
            );
        }
    }

    // rank-one pair
    {
        let e = by_name("rank_one_pair");
        let report = conjugate_higher_powers(e.matrix("a1"), e.matrix("four"), None).unwrap();
        let totals_ok = report.total_a_n == IntMatrix::scalar(64)
            && report.total_a_n1 == IntMatrix::scalar(256);
        check(
            &mut out,
            e.name,
            "conjugate higher powers with totals 64 and 256",
            report.conjugate_higher_powers && totals_ok,
            format!(
                "verdict {}, totals {:?} {:?}",
                report.conjugate_higher_powers, report.total_a_n, report.total_a_n1
            ),
        );
        let d = one_sided_conjugate(e.matrix("a1"), e.matrix("four")).unwrap();
        check(
            &mut out,
            e.name,
            "not one-sided conjugate",
            !d.conjugate,
            String::new(),
        );
    }

    // no conjugate higher powers
    {
        let e = by_name("brix_carlsen_pair");
        let report = conjugate_higher_powers(e.matrix("a"), e.matrix("b"), None).unwrap();
        check(
            &mut out,
            e.name,
            "higher powers are not conjugate",
            !report.conjugate_higher_powers,
            format!("{:?}", report.failure_reason),
        );
    }

    // ashley
    {
        let e = by_name("ashley");
        for (gate, ok) in ashley_gates(e.matrix("a")) {
            check(&mut out, e.name, gate, ok, String::new());
        }
        let v = unital_condition(e.certificate("se_to_full_2_shift"), None).unwrap();
        check(
            &mut out,
            e.name,
            "unital verdict Yes(0,7)",
            v == UnitalVerdict::Yes { m: 0, k: 7 },
            format!("{v:?}"),
        );
        let cert = e.certificate("se_to_full_2_shift");
        let pse = boyle_pse_identity(&cert.a, &cert.b, cert).unwrap();
        check(
            &mut out,
            e.name,
            "polynomial shift-equivalence identity holds",
            pse.holds,
            String::new(),
        );
    }

    // rourke
    {
        let e = by_name("rourke");
        let a = e.matrix("a");
        let b = e.matrix("b");
        let chain = e.move_sequence("chain");
        check(
            &mut out,
            e.name,
            "chain starts at B and ends at A",
            &chain.start == b && chain.end() == a,
            String::new(),
        );
        for n in 2..=7usize {
            let total =
                sft_core::moves::total_amalgamation(&b.checked_pow(n).unwrap()).unwrap();
            let an = a.checked_pow(n).unwrap();
            let ok = permutation_equivalent(&total.total, &an).is_some();
            check(
                &mut out,
                e.name,
                &format!("total amalgamation of B^{n} matches A^{n}"),
                ok,
                String::new(),
            );
        }
        let report = conjugate_higher_powers(a, b, None).unwrap();
        check(
            &mut out,
            e.name,
            "conjugate higher powers",
            report.conjugate_higher_powers,
            String::new(),
        );
        let balanced = verify_balanced_elementary(
            e.matrix("b_prime"),
            e.matrix("b_double_prime"),
            e.matrix("s1_prime"),
            e.matrix("r1_prime"),
            e.matrix("r1_double_prime"),
        )
        .unwrap();
        check(
            &mut out,
            e.name,
            "balanced insplit equations hold (division transpose)",
            balanced.valid && balanced.s_is_division_transpose,
            format!("{balanced:?}"),
        );
        let (cert, verdict) = balanced_to_unital_se(
            e.matrix("b_prime"),
            e.matrix("b_double_prime"),
            e.matrix("s1_prime"),
            e.matrix("r1_prime"),
            e.matrix("r1_double_prime"),
        )
        .unwrap();
        check(
            &mut out,
            e.name,
            "balanced lag-2 certificate is unital Yes(0,1)",
            cert.lag == 2 && verdict == UnitalVerdict::Yes { m: 0, k: 1 },
            format!("{verdict:?}"),
        );
    }

    // kim-roush invariants, SNF cross-checked between pivot strategies
    {
        let e = by_name("kim_roush");
        let a = e.matrix("a");
        let b = e.matrix("b");
        let bf_a = bowen_franks(a).unwrap();
        let bf_b = bowen_franks(b).unwrap();
        check(
            &mut out,
            e.name,
            "invariant factors agree",
            bf_a.factors == bf_b.factors,
            format!("{:?} vs {:?}", bf_a.factors, bf_b.factors),
        );
        check(
            &mut out,
            e.name,
            "determinant signs agree and are negative",
            bf_a.sign == Sign::Negative && bf_b.sign == Sign::Negative,
            format!("{:?} vs {:?}", bf_a.sign, bf_b.sign),
        );
        for m in [a, b] {
            let pres = IntMatrix::identity(7).checked_sub(&m.transpose()).unwrap();
            let s1 = sft_core::smith_normal_form_with(&pres, PivotStrategy::SmallestAbs);
            let s2 = sft_core::smith_normal_form_with(&pres, PivotStrategy::FirstNonzero);
            check(
                &mut out,
                e.name,
                "pivot strategies agree and reconstruct",
                s1.diag == s2.diag && s1.reconstructs(&pres) && s2.reconstructs(&pres),
                String::new(),
            );
        }
        let pa = char_poly(a).unwrap();
        let pb = char_poly(b).unwrap();
        check(
            &mut out,
            e.name,
            "characteristic polynomials agree up to powers of x",
            pa.agrees_up_to_x_power(&pb),
            format!("{pa} vs {pb}"),
        );
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_corpus_check_passes() {
        let results = verify_corpus();
        let failures: Vec<_> = results.iter().filter(|r| !r.pass).collect();
        assert!(failures.is_empty(), "failing checks: {failures:#?}");
        assert!(results.len() > 30);
    }

    #[test]
    fn corpus_names_are_unique() {
        let entries = corpus();
        let mut names: Vec<_> = entries.iter().map(|e| e.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), entries.len());
    }
}
