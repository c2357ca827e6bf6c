//! The dimension module of a square nonnegative matrix as computable data,
//! and the unital signed Bowen-Franks invariant with its induced maps.
//!
//! An element of the dimension group is a class `[v, k]` of a vector at a
//! stage index. Equality of classes is decided at a fixed exponent offset:
//! over the rationals the kernel chain of `A^t` stabilises by step `|A|`, and
//! the integer kernel is the rational kernel intersected with the lattice, so
//! testing `(A^t)^(M - k_x + n) v_x = (A^t)^(M - k_y + n) v_y` with
//! `n = |A|` is sound and complete. This replaces the unbounded existential
//! over `l` in the defining relation.

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::matrix::{Int, IntMatrix, MatrixError, Sign};
use crate::snf::Cokernel;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimensionError {
    #[error("elements live over different base matrices")]
    BaseMismatch,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A class `[v, k]` in the dimension group of `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimElement {
    base: IntMatrix,
    vec: IntMatrix,
    stage: usize,
}

impl DimElement {
    pub fn new(base: IntMatrix, vec: IntMatrix, stage: usize) -> Result<Self, DimensionError> {
        if !base.is_square() {
            return Err(MatrixError::NotSquare {
                rows: base.rows(),
                cols: base.cols(),
            }
            .into());
        }
        if vec.rows() != base.rows() || vec.cols() != 1 {
            return Err(MatrixError::DimensionMismatch {
                left_rows: base.rows(),
                left_cols: 1,
                right_rows: vec.rows(),
                right_cols: vec.cols(),
            }
            .into());
        }
        Ok(DimElement { base, vec, stage })
    }

    /// The order unit `u_A = [1, 0]`.
    pub fn unit(base: IntMatrix) -> DimElement {
        let vec = IntMatrix::ones_column(base.rows());
        DimElement { base, vec, stage: 0 }
    }

    pub fn base(&self) -> &IntMatrix {
        &self.base
    }

    pub fn vec(&self) -> &IntMatrix {
        &self.vec
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    /// The same class presented one stage later: `[v, k] = [A^t v, k + 1]`
    /// never changes the class, and `[v, k+1]` is the preimage of `[v, k]`
    /// under multiplication by `A^t`.
    pub fn shift_stage(&self) -> DimElement {
        DimElement {
            base: self.base.clone(),
            vec: self.vec.clone(),
            stage: self.stage + 1,
        }
    }
}

/// Equality of classes, decided at the stabilised exponent offset `|A|`.
pub fn dim_elem_equal(x: &DimElement, y: &DimElement) -> Result<bool, DimensionError> {
    if x.base != y.base {
        return Err(DimensionError::BaseMismatch);
    }
    let n = x.base.size();
    let at = x.base.transpose();
    let m = x.stage.max(y.stage);
    let lhs = at.checked_pow(m - x.stage + n)?.checked_mul(&x.vec)?;
    let rhs = at.checked_pow(m - y.stage + n)?.checked_mul(&y.vec)?;
    Ok(lhs == rhs)
}

/// The canonical automorphism: multiplication by `A^t` on representatives.
pub fn theta_apply(x: &DimElement) -> DimElement {
    let vec = x
        .base
        .transpose()
        .checked_mul(&x.vec)
        .expect("element invariant guarantees the shape");
    DimElement {
        base: x.base.clone(),
        vec,
        stage: x.stage,
    }
}

/// Bounded search for a positivity witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Positivity {
    /// `(A^t)^l v` is entrywise nonnegative.
    Yes { l: usize },
    /// No witness up to the bound; positivity is only semi-decided.
    Inconclusive,
}

pub fn positivity_witness(x: &DimElement, l_max: usize) -> Positivity {
    let at = x.base.transpose();
    let mut v = x.vec.clone();
    for l in 0..=l_max {
        if v.is_nonnegative() {
            return Positivity::Yes { l };
        }
        if l < l_max {
            v = at.checked_mul(&v).expect("shapes fixed");
        }
    }
    Positivity::Inconclusive
}

/// The map induced on dimension groups by a rectangular matrix `R` from the
/// system of `A` to the system of `B`: `[v, k] -> [R^t v, k]`.
pub fn induced_dim_map(
    r: &IntMatrix,
    x: &DimElement,
    target: &IntMatrix,
) -> Result<DimElement, DimensionError> {
    if r.rows() != x.base.rows() || r.cols() != target.rows() {
        return Err(MatrixError::DimensionMismatch {
            left_rows: x.base.rows(),
            left_cols: target.rows(),
            right_rows: r.rows(),
            right_cols: r.cols(),
        }
        .into());
    }
    let vec = r.transpose().checked_mul(&x.vec)?;
    DimElement::new(target.clone(), vec, x.stage)
}

/// The unital signed Bowen-Franks invariant: invariant factors of `I - A^t`,
/// the class of the all-ones vector in SNF coordinates, and the sign of
/// `det(I - A^t)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BowenFranksData {
    #[serde(with = "crate::matrix::int_vec_serde")]
    pub factors: Vec<Int>,
    #[serde(with = "crate::matrix::int_vec_serde")]
    pub unit_class: Vec<Int>,
    pub sign: Sign,
}

impl BowenFranksData {
    /// The group is trivial when every invariant factor is 1.
    pub fn is_trivial_group(&self) -> bool {
        self.factors.iter().all(|d| *d == Int::from(1))
    }

    /// Invariant factors with the unit entries dropped: equal lists here mean
    /// isomorphic groups even across matrices of different sizes.
    pub fn group_invariants(&self) -> Vec<Int> {
        self.factors
            .iter()
            .filter(|d| **d != Int::from(1))
            .cloned()
            .collect()
    }
}

fn bf_presentation(a: &IntMatrix) -> Result<IntMatrix, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    IntMatrix::identity(a.size()).checked_sub(&a.transpose())
}

/// The cokernel presentation `Z^n / (I - A^t) Z^n` of the Bowen-Franks group.
pub fn bf_cokernel(a: &IntMatrix) -> Result<Cokernel, MatrixError> {
    Ok(Cokernel::new(&bf_presentation(a)?))
}

pub fn bowen_franks(a: &IntMatrix) -> Result<BowenFranksData, MatrixError> {
    let m = bf_presentation(a)?;
    let coker = Cokernel::new(&m);
    let unit_class = coker.class_of(&IntMatrix::ones_column(a.size()));
    Ok(BowenFranksData {
        factors: coker.invariant_factors().to_vec(),
        unit_class,
        sign: m.det_sign()?,
    })
}

/// The homomorphism `BF(A) -> BF(B)` induced by `R`, presented on the SNF
/// generator basis of the source.
#[derive(Debug, Clone, Serialize)]
pub struct BfMap {
    /// Image of the i-th SNF generator of `BF(A)`, as reduced coordinates in
    /// the SNF presentation of `BF(B)`.
    #[serde(serialize_with = "crate::matrix::int_vec_vec_serde::serialize")]
    pub generator_images: Vec<Vec<Int>>,
    /// `R^t (I - A^t) Z^n` lands in `(I - B^t) Z^m`; holds automatically when
    /// `R` intertwines (`A R = R B`) and is checked column by column.
    pub well_defined: bool,
    /// Whether the induced map is a group isomorphism.
    pub isomorphism: bool,
}

/// Compute the induced Bowen-Franks map of `r` from `source` to `target`.
/// When `r` comes from a shift equivalence the map must be an isomorphism;
/// the `isomorphism` flag reports the check.
pub fn bf_induced_map(
    r: &IntMatrix,
    source: &IntMatrix,
    target: &IntMatrix,
) -> Result<BfMap, MatrixError> {
    if r.rows() != source.rows() || r.cols() != target.rows() {
        return Err(MatrixError::DimensionMismatch {
            left_rows: source.rows(),
            left_cols: target.rows(),
            right_rows: r.rows(),
            right_cols: r.cols(),
        });
    }
    let ma = bf_presentation(source)?;
    let coker_b = bf_cokernel(target)?;
    let rt = r.transpose();

    // well-definedness: every column of (I - A^t) must map to the zero class
    let mut well_defined = true;
    for j in 0..ma.cols() {
        let col = ma.submatrix(&(0..ma.rows()).collect::<Vec<_>>(), &[j]);
        let image = rt.checked_mul(&col)?;
        if !coker_b.class_is_zero(&image) {
            well_defined = false;
            break;
        }
    }

    // images of the source SNF generators: generator i corresponds to the
    // vector left_A^{-1} e_i, equivalently solving left_A * g = e_i.
    let coker_a = bf_cokernel(source)?;
    let left_a = crate::snf::smith_normal_form(&ma).left;
    let left_a_inv = invert_unimodular(&left_a);
    let n = source.size();
    let mut generator_images = Vec::with_capacity(n);
    for i in 0..n {
        let gen_vec = left_a_inv.submatrix(&(0..n).collect::<Vec<_>>(), &[i]);
        let image = rt.checked_mul(&gen_vec)?;
        generator_images.push(coker_b.class_of(&image));
    }

    let isomorphism = well_defined
        && groups_isomorphic(coker_a.invariant_factors(), coker_b.invariant_factors())
        && map_is_surjective(&generator_images, &coker_b, target.size());

    Ok(BfMap {
        generator_images,
        well_defined,
        isomorphism,
    })
}

/// Exact inverse of a unimodular matrix via the adjugate: `U^{-1} = adj(U)/det(U)`
/// with `det(U) = ±1`.
fn invert_unimodular(u: &IntMatrix) -> IntMatrix {
    let n = u.size();
    let det = u.det().expect("square");
    debug_assert_eq!(det.abs(), Int::from(1));
    let mut adj = IntMatrix::zero(n, n);
    let all: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = all.iter().copied().filter(|&r| r != i).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&c| c != j).collect();
            let minor = if n == 1 {
                Int::from(1)
            } else {
                u.submatrix(&rows, &cols).det().expect("square minor")
            };
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj.set(j, i, minor * Int::from(sign));
        }
    }
    if det.is_negative() {
        adj.neg()
    } else {
        adj
    }
}

/// Finitely generated abelian groups with identical nonunit invariant-factor
/// multisets are isomorphic.
fn groups_isomorphic(da: &[Int], db: &[Int]) -> bool {
    let strip = |d: &[Int]| -> Vec<Int> {
        let mut v: Vec<Int> = d.iter().filter(|x| **x != Int::from(1)).cloned().collect();
        v.sort();
        v
    };
    strip(da) == strip(db)
}

/// Surjectivity of a map into `coker_b`: the generator images together with
/// the relation lattice must span the whole group. Combined with abstract
/// isomorphy of the two groups this forces bijectivity (finitely generated
/// abelian groups are Hopfian).
fn map_is_surjective(generator_images: &[Vec<Int>], coker_b: &Cokernel, m: usize) -> bool {
    // Present the image subgroup in SNF coordinates of BF(B): columns are the
    // generator images plus diag(d_i) relations; the map is surjective iff
    // the stacked matrix has all invariant factors 1.
    let k = generator_images.len();
    let stacked = IntMatrix::from_fn(m, k + m, |i, j| {
        if j < k {
            generator_images[j][i].clone()
        } else if j - k == i {
            coker_b.invariant_factors()[i].clone()
        } else {
            Int::zero()
        }
    });
    let snf = crate::snf::smith_normal_form(&stacked);
    snf.diag.iter().all(|d| *d == Int::from(1))
}

/// Outcome of checking `q_B (R^t e_i) = (BF map)(q_A e_i)` on all standard
/// basis vectors; the two sides go through different code paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutingSquareReport {
    pub holds: bool,
    pub offending_index: Option<usize>,
}

pub fn check_commuting_square(
    r: &IntMatrix,
    a: &IntMatrix,
    b: &IntMatrix,
) -> Result<CommutingSquareReport, MatrixError> {
    let bf_map = bf_induced_map(r, a, b)?;
    let coker_a = bf_cokernel(a)?;
    let coker_b = bf_cokernel(b)?;
    let rt = r.transpose();
    let n = a.size();
    for i in 0..n {
        let e_i = IntMatrix::from_fn(n, 1, |row, _| {
            if row == i {
                Int::from(1)
            } else {
                Int::zero()
            }
        });
        // route one: push the vector through R^t, then take its class
        let direct = coker_b.class_of(&rt.checked_mul(&e_i)?);
        // route two: decompose the class of e_i on the source generators and
        // apply the coordinate representation of the map
        let coords = coker_a.class_of(&e_i);
        let via_map = combine_images(&coords, &bf_map.generator_images, &coker_b);
        if direct != via_map {
            return Ok(CommutingSquareReport {
                holds: false,
                offending_index: Some(i),
            });
        }
    }
    Ok(CommutingSquareReport {
        holds: true,
        offending_index: None,
    })
}

fn combine_images(coords: &[Int], images: &[Vec<Int>], coker_b: &Cokernel) -> Vec<Int> {
    let m = coker_b.invariant_factors().len();
    let mut acc = vec![Int::zero(); m];
    for (c, img) in coords.iter().zip(images) {
        for (slot, coordinate) in acc.iter_mut().zip(img) {
            *slot += c * coordinate;
        }
    }
    // reduce back to canonical coordinates
    for (slot, d) in acc.iter_mut().zip(coker_b.invariant_factors()) {
        if !d.is_zero() {
            *slot = num_integer::Integer::mod_floor(&*slot, d);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elem(base: &IntMatrix, v: &[i64], stage: usize) -> DimElement {
        let vec = IntMatrix::from_fn(v.len(), 1, |i, _| Int::from(v[i]));
        DimElement::new(base.clone(), vec, stage).unwrap()
    }

    #[test]
    fn doubling_identifies_stages() {
        let two = IntMatrix::scalar(2);
        let x = elem(&two, &[1], 0);
        let y = elem(&two, &[2], 1);
        assert!(dim_elem_equal(&x, &y).unwrap());
        assert!(dim_elem_equal(&x, &x).unwrap());
    }

    #[test]
    fn distinct_classes_over_insplit_matrix() {
        let c = IntMatrix::from_rows(&[&[1, 0, 1], &[1, 0, 1], &[0, 1, 1]]);
        let x = elem(&c, &[1, 1, 2], 0);
        let y = elem(&c, &[1, 1, 1], 0);
        assert!(!dim_elem_equal(&x, &y).unwrap());
    }

    #[test]
    fn base_mismatch_is_an_error() {
        let x = elem(&IntMatrix::scalar(2), &[1], 0);
        let y = elem(&IntMatrix::scalar(3), &[1], 0);
        assert!(matches!(
            dim_elem_equal(&x, &y),
            Err(DimensionError::BaseMismatch)
        ));
    }

    #[test]
    fn theta_on_unit_vectors() {
        let two = IntMatrix::scalar(2);
        let x = theta_apply(&elem(&two, &[1], 0));
        assert_eq!(x.vec(), &IntMatrix::scalar(2));

        let a1 = IntMatrix::from_rows(&[&[2, 0, 4], &[1, 2, 0], &[1, 2, 0]]);
        let x = theta_apply(&elem(&a1, &[1, 0, 0], 0));
        assert_eq!(x.vec(), &IntMatrix::from_rows(&[&[2], &[0], &[4]]));
    }

    #[test]
    fn theta_inverts_stage_shift() {
        let a1 = IntMatrix::from_rows(&[&[2, 0, 4], &[1, 2, 0], &[1, 2, 0]]);
        let x = elem(&a1, &[3, -1, 2], 1);
        assert!(dim_elem_equal(&theta_apply(&x.shift_stage()), &x).unwrap());
    }

    #[test]
    fn positivity_witnesses() {
        let two = IntMatrix::scalar(2);
        assert_eq!(
            positivity_witness(&elem(&two, &[1], 0), 5),
            Positivity::Yes { l: 0 }
        );
        let b = IntMatrix::from_rows(&[&[1, 1], &[1, 1]]);
        assert_eq!(
            positivity_witness(&elem(&b, &[-1, 3], 0), 5),
            Positivity::Yes { l: 1 }
        );
        let id = IntMatrix::identity(2);
        assert_eq!(
            positivity_witness(&elem(&id, &[-1, 0], 0), 30),
            Positivity::Inconclusive
        );
    }

    #[test]
    fn induced_map_on_units() {
        let two = IntMatrix::scalar(2);
        let x = elem(&two, &[5], 0);
        let y = induced_dim_map(&IntMatrix::identity(1), &x, &two).unwrap();
        assert!(dim_elem_equal(&x, &y).unwrap());

        let a3 = IntMatrix::from_rows(&[&[1, 3], &[2, 1]]);
        let b3 = IntMatrix::from_rows(&[&[1, 6], &[1, 1]]);
        let r = IntMatrix::from_rows(&[&[8, 3], &[1, 16]]);
        let u = DimElement::unit(a3);
        let image = induced_dim_map(&r, &u, &b3).unwrap();
        assert_eq!(image.vec(), &IntMatrix::from_rows(&[&[9], &[19]]));
        assert_eq!(image.stage(), 0);
    }

    #[test]
    fn bowen_franks_small_cases() {
        let data = bowen_franks(&IntMatrix::scalar(2)).unwrap();
        assert_eq!(data.factors, vec![Int::from(1)]);
        assert!(data.is_trivial_group());
        assert_eq!(data.sign, Sign::Negative);

        let data = bowen_franks(&IntMatrix::scalar(3)).unwrap();
        assert_eq!(data.factors, vec![Int::from(2)]);
        assert_eq!(data.unit_class, vec![Int::from(1)]);
        assert_eq!(data.sign, Sign::Negative);

        let data = bowen_franks(&IntMatrix::from_rows(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(data.factors, vec![Int::from(1), Int::from(1)]);
        assert_eq!(data.sign, Sign::Negative);
    }

    #[test]
    fn bf_map_identity_is_identity() {
        let a = IntMatrix::from_rows(&[&[1, 3], &[2, 1]]);
        let map = bf_induced_map(&IntMatrix::identity(2), &a, &a).unwrap();
        assert!(map.well_defined);
        assert!(map.isomorphism);
        // generator i maps to itself: coordinates e_i reduced mod d_i
        let coker = bf_cokernel(&a).unwrap();
        for (i, img) in map.generator_images.iter().enumerate() {
            let mut expected = vec![Int::zero(); 2];
            let d = &coker.invariant_factors()[i];
            expected[i] = if d.is_zero() {
                Int::from(1)
            } else {
                num_integer::Integer::mod_floor(&Int::from(1), d)
            };
            assert_eq!(img, &expected);
        }
    }

    #[test]
    fn bf_map_between_family_members() {
        let a3 = IntMatrix::from_rows(&[&[1, 3], &[2, 1]]);
        let b3 = IntMatrix::from_rows(&[&[1, 6], &[1, 1]]);
        let r = IntMatrix::from_rows(&[&[8, 3], &[1, 16]]);
        let map = bf_induced_map(&r, &a3, &b3).unwrap();
        assert!(map.well_defined);
        assert!(map.isomorphism);
        let square = check_commuting_square(&r, &a3, &b3).unwrap();
        assert!(square.holds);
    }

    #[test]
    fn bf_map_trivial_groups() {
        // both cokernels trivial: the zero map is an isomorphism
        let ash_like = IntMatrix::scalar(2);
        let r = IntMatrix::from_rows(&[&[16]]);
        let map = bf_induced_map(&r, &ash_like, &ash_like).unwrap();
        assert!(map.isomorphism);
    }

    #[test]
    fn commuting_square_identity() {
        let a = IntMatrix::from_rows(&[&[1, 1], &[1, 1]]);
        let sq = check_commuting_square(&IntMatrix::identity(2), &a, &a).unwrap();
        assert!(sq.holds);
    }
}
