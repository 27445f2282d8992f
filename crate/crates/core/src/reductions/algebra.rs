//! Matrix space isometry to algebra isomorphism and to trilinear form
//! equivalence, plus the unit-adjoining step.
//!
//! For a basis `A_1..A_m` of `n×n` matrices the algebra has basis
//! `x_1..x_n, z_1..z_m` with `x_a ∘ x_b = Σ_k A_k[a][b] z_k` and every other
//! product zero. The same `(n+m)³` array serves as a trilinear form.

use super::{checked, expect_tag, expect_tensor3, Reduction, ReductionDescriptor};
use crate::algebra::AlgebraSC;
use crate::error::{Error, Result};
use crate::matspace::{Mat, MatrixTuple};
use crate::tensor::Tensor3;
use crate::witness::{Instance, Tag, Witness};

fn embed(t: &MatrixTuple) -> Result<Tensor3> {
    if !t.span().generators_independent() {
        return Err(Error::InvalidInput(
            "slices must be linearly independent".into(),
        ));
    }
    if t.rows() != t.cols() {
        return Err(Error::InvalidInput("slices must be square".into()));
    }
    let (n, m) = (t.rows(), t.len());
    let mut out = Tensor3::zeros(t.field(), n + m, n + m, n + m);
    for (k, a) in t.slices().iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, n + k, a.get(i, j));
            }
        }
    }
    Ok(out)
}

pub fn isometry_to_algebra(t: &MatrixTuple) -> Result<AlgebraSC> {
    AlgebraSC::new(embed(t)?)
}

pub fn isometry_to_trilinear(t: &MatrixTuple) -> Result<Tensor3> {
    embed(t)
}

/// `A ⊕ F·e` with `e` the new last basis element acting as identity.
pub fn adjoin_unit(a: &AlgebraSC) -> AlgebraSC {
    let n = a.dim();
    let sc = a.structure_constants();
    let mut out = Tensor3::zeros(a.field(), n + 1, n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out.set(i, j, k, sc.get(i, j, k));
            }
        }
        out.set(n, i, i, 1);
        out.set(i, n, i, 1);
    }
    out.set(n, n, n, 1);
    AlgebraSC::new(out).expect("cubic shape")
}

/// The specialised algebra families reachable from matrix space isometry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PseudoVariant {
    /// From symmetric slices: commutative, all triple products zero.
    CommutativeNilpotent,
    /// From symmetric slices, then a unit adjoined.
    CommutativeUnital,
    /// From alternating slices: a 2-step nilpotent Lie algebra.
    LieNilpotent,
}

pub fn specialize_pseudo(t: &MatrixTuple, variant: PseudoVariant) -> Result<AlgebraSC> {
    let ok = match variant {
        PseudoVariant::CommutativeNilpotent | PseudoVariant::CommutativeUnital => t.is_symmetric(),
        PseudoVariant::LieNilpotent => t.is_alternating(),
    };
    if !ok {
        return Err(Error::InvalidInput(format!(
            "{variant:?} needs {} slices",
            if variant == PseudoVariant::LieNilpotent {
                "alternating"
            } else {
                "symmetric"
            }
        )));
    }
    let alg = isometry_to_algebra(t)?;
    Ok(match variant {
        PseudoVariant::CommutativeUnital => adjoin_unit(&alg),
        _ => alg,
    })
}

fn frontal_of(a: &Instance) -> Result<MatrixTuple> {
    Ok(expect_tensor3(a, "isometry reduction")?.frontal())
}

fn expect_algebra(a: &Instance) -> Result<&AlgebraSC> {
    match a {
        Instance::Algebra(x) => Ok(x),
        other => Err(Error::InvalidInput(format!(
            "expected an algebra, got a {}",
            other.kind()
        ))),
    }
}

pub struct IsometryToAlgebra;

impl Reduction for IsometryToAlgebra {
    fn descriptor(&self) -> ReductionDescriptor {
        ReductionDescriptor {
            name: "isometry-to-algebra",
            source: Tag::PseudoIsometry,
            target: Tag::AlgebraIso,
            dims: "n×n×m ↦ algebra of dimension n+m",
        }
    }

    fn target_dims(&self, a: &Instance) -> Result<Vec<usize>> {
        let [n, _, m] = expect_tensor3(a, "isometry-to-algebra")?.dims();
        Ok(vec![n + m])
    }

    fn construct(&self, a: &Instance) -> Result<Instance> {
        Ok(Instance::Algebra(isometry_to_algebra(&frontal_of(a)?)?))
    }

    /// `(P, R) ↦ diag(P, R⁻ᵗ)`.
    fn witness_forward(&self, a: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::PseudoIsometry)?;
        let f = expect_tensor3(a, "isometry-to-algebra")?.field();
        let p = Mat::block_diag(f, &[&w.mats[0], &w.mats[1].inverse()?.transpose()]);
        Witness::new(Tag::AlgebraIso, vec![p])
    }

    /// The square of the algebra is `⟨z_k⟩`, so the isomorphism is block
    /// lower triangular; returns `(P̃[x,x], (P̃⁻ᵗ)[z,z])`.
    fn witness_recover(&self, a: &Instance, b: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::AlgebraIso)?;
        let [n, _, m] = expect_tensor3(a, "isometry-to-algebra")?.dims();
        let p = &w.mats[0];
        if !p.submatrix(0, n, n, n + m).is_zero() {
            return Err(Error::WitnessInvalid(
                "isomorphism does not preserve the square of the algebra".into(),
            ));
        }
        let x = p.submatrix(0, n, 0, n);
        let r = p.inverse()?.transpose().submatrix(n, n + m, n, n + m);
        let rec = Witness::new(Tag::PseudoIsometry, vec![x, r])?;
        checked(Tag::PseudoIsometry, a, b, rec)
    }
}

pub struct IsometryToTrilinear;

impl Reduction for IsometryToTrilinear {
    fn descriptor(&self) -> ReductionDescriptor {
        ReductionDescriptor {
            name: "isometry-to-trilinear",
            source: Tag::PseudoIsometry,
            target: Tag::TrilinearEq,
            dims: "n×n×m ↦ (n+m)×(n+m)×(n+m)",
        }
    }

    fn target_dims(&self, a: &Instance) -> Result<Vec<usize>> {
        let [n, _, m] = expect_tensor3(a, "isometry-to-trilinear")?.dims();
        Ok(vec![n + m; 3])
    }

    fn construct(&self, a: &Instance) -> Result<Instance> {
        Ok(Instance::Tensor3(isometry_to_trilinear(&frontal_of(a)?)?))
    }

    /// `(P, R) ↦ diag(P, R)`.
    fn witness_forward(&self, a: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::PseudoIsometry)?;
        let f = expect_tensor3(a, "isometry-to-trilinear")?.field();
        Witness::new(
            Tag::TrilinearEq,
            vec![Mat::block_diag(f, &[&w.mats[0], &w.mats[1]])],
        )
    }

    /// Linear independence of the slices forces the lower-left block to
    /// vanish; returns the two diagonal blocks.
    fn witness_recover(&self, a: &Instance, b: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::TrilinearEq)?;
        let [n, _, m] = expect_tensor3(a, "isometry-to-trilinear")?.dims();
        let p = &w.mats[0];
        if !p.submatrix(n, n + m, 0, n).is_zero() {
            return Err(Error::WitnessInvalid(
                "trilinear equivalence mixes z into x".into(),
            ));
        }
        let rec = Witness::new(
            Tag::PseudoIsometry,
            vec![p.submatrix(0, n, 0, n), p.submatrix(n, n + m, n, n + m)],
        )?;
        checked(Tag::PseudoIsometry, a, b, rec)
    }
}

pub struct AdjoinUnit;

impl Reduction for AdjoinUnit {
    fn descriptor(&self) -> ReductionDescriptor {
        ReductionDescriptor {
            name: "adjoin-unit",
            source: Tag::AlgebraIso,
            target: Tag::AlgebraIso,
            dims: "algebra of dimension N ↦ N+1",
        }
    }

    fn target_dims(&self, a: &Instance) -> Result<Vec<usize>> {
        Ok(vec![expect_algebra(a)?.dim() + 1])
    }

    fn construct(&self, a: &Instance) -> Result<Instance> {
        Ok(Instance::Algebra(adjoin_unit(expect_algebra(a)?)))
    }

    /// `P ↦ diag(P, 1)`.
    fn witness_forward(&self, a: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::AlgebraIso)?;
        let f = expect_algebra(a)?.field();
        Witness::new(
            Tag::AlgebraIso,
            vec![Mat::block_diag(f, &[&w.mats[0], &Mat::identity(f, 1)])],
        )
    }

    /// An isomorphism of unital algebras fixes the unit. When it also keeps
    /// the original part free of the unit (always the case for nilpotent
    /// inputs) the top-left block is the answer; other cases are refused.
    fn witness_recover(&self, a: &Instance, b: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::AlgebraIso)?;
        let n = expect_algebra(a)?.dim();
        let p = &w.mats[0];
        let mut unit = vec![0; n + 1];
        unit[n] = 1;
        if p.col(n) != unit {
            return Err(Error::WitnessInvalid("isomorphism does not fix the unit".into()));
        }
        if !p.submatrix(n, n + 1, 0, n).is_zero() {
            return Err(Error::RecoveryUnsupported(
                "isomorphism moves the original algebra along the unit".into(),
            ));
        }
        let rec = Witness::new(Tag::AlgebraIso, vec![p.submatrix(0, n, 0, n)])?;
        checked(Tag::AlgebraIso, a, b, rec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GF;
    use crate::matspace::random_mat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_slice_example() {
        let f = GF::new(2).unwrap();
        let t = MatrixTuple::new(f, 1, 1, vec![Mat::identity(f, 1)]).unwrap();
        let alg = isometry_to_algebra(&t).unwrap();
        assert_eq!(alg.dim(), 2);
        assert_eq!(alg.basis_product(0, 0), vec![0, 1]);
        for (i, j) in [(0, 1), (1, 0), (1, 1)] {
            assert_eq!(alg.basis_product(i, j), vec![0, 0]);
        }
    }

    #[test]
    fn adjoin_unit_to_zero_algebra() {
        let f = GF::new(3).unwrap();
        let u = adjoin_unit(&AlgebraSC::zero(f, 1));
        assert_eq!(u.dim(), 2);
        assert_eq!(u.unit_basis_element(), Some(1));
        assert_eq!(u.basis_product(0, 0), vec![0, 0]);
        assert!(u.is_associative() && u.is_commutative());
    }

    fn sym_tuple(f: GF, n: usize, m: usize, seed: u64) -> MatrixTuple {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let sl: Vec<Mat> = (0..m)
                .map(|_| {
                    let a = random_mat(&mut rng, f, n, n);
                    a.add(&a.transpose())
                })
                .collect();
            let t = MatrixTuple::new(f, n, n, sl).unwrap();
            if t.span().generators_independent() {
                return t;
            }
        }
    }

    #[test]
    fn commutative_variant_is_3_nilpotent() {
        let f = GF::new(3).unwrap();
        let alg = specialize_pseudo(&sym_tuple(f, 2, 2, 1), PseudoVariant::CommutativeNilpotent)
            .unwrap();
        assert!(alg.is_commutative() && alg.is_3_nilpotent() && alg.is_associative());
        let u = specialize_pseudo(&sym_tuple(f, 2, 2, 1), PseudoVariant::CommutativeUnital).unwrap();
        assert!(u.is_commutative() && u.is_associative());
        assert_eq!(u.unit_basis_element(), Some(4));
    }

    #[test]
    fn lie_variant_satisfies_jacobi() {
        let f = GF::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = loop {
            let sl: Vec<Mat> = (0..2)
                .map(|_| {
                    let a = random_mat(&mut rng, f, 3, 3);
                    a.sub(&a.transpose())
                })
                .collect();
            let t = MatrixTuple::new(f, 3, 3, sl).unwrap();
            if t.span().generators_independent() {
                break t;
            }
        };
        let alg = specialize_pseudo(&t, PseudoVariant::LieNilpotent).unwrap();
        assert!(alg.is_alternating() && alg.satisfies_jacobi());
        assert!(specialize_pseudo(&t, PseudoVariant::CommutativeNilpotent).is_err());
    }
}
