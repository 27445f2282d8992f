//! Monomial code equivalence to 3-tensor isomorphism.
//!
//! A `d×n` generator matrix `C` becomes a `(d+2n)×n×(1+2n)` array. Frontal
//! slice 0 is `C` stacked over `2n` zero rows; slice `1+2i+j` (`j ∈ {0,1}`)
//! is the elementary matrix `E_{d+2i+j, i}`. Lateral slice `i` then consists
//! of column `i` of the code next to an `I₂` block, so its rank is 2 or 3,
//! and any combination of two or more lateral slices has rank at least 4.

use super::{checked, expect_tag, ReductionDescriptor, Reduction};
use crate::error::{Error, Result};
use crate::matspace::{solve, Mat, MonomialMatrix, Solution};
use crate::tensor::Tensor3;
use crate::witness::{Instance, Tag, Witness};

pub fn moncode_to_3ti(code: &Mat) -> Result<Tensor3> {
    let (d, n) = (code.rows(), code.cols());
    if d < 2 {
        return Err(Error::InvalidInput("code dimension must exceed 1".into()));
    }
    if code.rank() != d {
        return Err(Error::InvalidInput(format!(
            "generator matrix has rank {} < {d}",
            code.rank()
        )));
    }
    let mut t = Tensor3::zeros(code.field(), d + 2 * n, n, 1 + 2 * n);
    for r in 0..d {
        for c in 0..n {
            t.set(r, c, 0, code.get(r, c));
        }
    }
    for i in 0..n {
        for j in 0..2 {
            t.set(d + 2 * i + j, i, 1 + 2 * i + j, 1);
        }
    }
    Ok(t)
}

pub struct MonCodeTo3ti;

fn expect_code(a: &Instance) -> Result<&Mat> {
    match a {
        Instance::Code(c) => Ok(c),
        other => Err(Error::InvalidInput(format!(
            "moncode-to-3ti expects a code, got a {}",
            other.kind()
        ))),
    }
}

impl Reduction for MonCodeTo3ti {
    fn descriptor(&self) -> ReductionDescriptor {
        ReductionDescriptor {
            name: "moncode-to-3ti",
            source: Tag::MonCodeEq,
            target: Tag::Ti3,
            dims: "d×n code ↦ (d+2n)×n×(1+2n)",
        }
    }

    fn target_dims(&self, a: &Instance) -> Result<Vec<usize>> {
        let c = expect_code(a)?;
        let (d, n) = (c.rows(), c.cols());
        Ok(vec![d + 2 * n, n, 1 + 2 * n])
    }

    fn construct(&self, a: &Instance) -> Result<Instance> {
        Ok(Instance::Tensor3(moncode_to_3ti(expect_code(a)?)?))
    }

    /// `(Q, D, P) ↦ (diag(Qᵗ, M⁻ᵗ⊗I₂), M, diag(1, Π⊗I₂))` with `M = DP`
    /// and `Π` the permutation pattern of `M`.
    fn witness_forward(&self, a: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::MonCodeEq)?;
        let c = expect_code(a)?;
        let f = c.field();
        let m = w.mats[1].mul(&w.mats[2]);
        let i2 = Mat::identity(f, 2);
        let x = Mat::block_diag(f, &[&w.mats[0].transpose(), &m.inverse()?.transpose().kron(&i2)]);
        let one = Mat::identity(f, 1);
        let z = Mat::block_diag(f, &[&one, &w.mats[2].kron(&i2)]);
        Witness::new(Tag::Ti3, vec![x, m, z])
    }

    /// The middle matrix must be monomial; `Q` is then the unique solution
    /// of `Q·(C·M) = C'`.
    fn witness_recover(&self, a: &Instance, b: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::Ti3)?;
        let (ca, cb) = (expect_code(a)?, expect_code(b)?);
        let y = &w.mats[1];
        let mono = MonomialMatrix::from_mat(y).ok_or_else(|| {
            Error::WitnessInvalid("middle matrix of the 3TI witness is not monomial".into())
        })?;
        let cm = ca.mul(y);
        // Q·CM = C'  ⟺  (CM)ᵗ Qᵗ = C'ᵗ
        let q = match solve(&cm.transpose(), &cb.transpose())? {
            Solution::Solved { particular, .. } => particular.transpose(),
            Solution::NoSolution => {
                return Err(Error::WitnessInvalid(
                    "row spaces of C·M and C' differ".into(),
                ))
            }
        };
        let rec = Witness::moncode(q, &mono)?;
        checked(Tag::MonCodeEq, a, b, rec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GF;
    use crate::reductions::lateral_ranks;
    use crate::tensor::Direction;

    #[test]
    fn identity_code_shape_and_ranks() {
        let f = GF::new(2).unwrap();
        let t = moncode_to_3ti(&Mat::identity(f, 2)).unwrap();
        assert_eq!(t.dims(), [6, 2, 5]);
        assert_eq!(lateral_ranks(&t), vec![3, 3]);
        // lateral slice j carries I₂ in block j
        let l = t.slices(Direction::Lateral);
        assert_eq!(l.slice(1).submatrix(4, 6, 3, 5), Mat::identity(f, 2));
    }

    #[test]
    fn rejects_small_or_deficient_codes() {
        let f = GF::new(3).unwrap();
        assert!(moncode_to_3ti(&Mat::from_rows(f, &[&[1, 1]])).is_err());
        assert!(moncode_to_3ti(&Mat::from_rows(f, &[&[1, 1], &[2, 2]])).is_err());
    }

    #[test]
    fn identity_equivalence_maps_to_identity() {
        let f = GF::new(3).unwrap();
        let c = Mat::from_rows(f, &[&[1, 0, 2], &[0, 1, 1]]);
        let id = Witness::identity(Tag::MonCodeEq, f, &[2, 3, 3]).unwrap();
        let w = MonCodeTo3ti.witness_forward(&Instance::Code(c), &id).unwrap();
        assert!(w.mats.iter().all(Mat::is_identity));
    }
}
