//! 3-tensor isomorphism to matrix space conjugacy.
//!
//! Slice `k` of a non-degenerate `ℓ×n×m` array becomes the `(ℓ+n)×(ℓ+n)`
//! matrix `[[0, A_k], [0, 0]]`. The unital variant appends
//! `M₀ = diag(I_ℓ, 0)`, which every conjugating map must fix up to the span.

use super::{checked, expect_tag, expect_tensor3, Reduction, ReductionDescriptor};
use crate::error::{Error, Result};
use crate::matspace::{Mat, MatrixTuple};
use crate::tensor::Tensor3;
use crate::witness::{Instance, Tag, Witness};

pub fn ti3_to_conjugacy(t: &Tensor3, unital: bool) -> Result<MatrixTuple> {
    if !t.is_nondegenerate() {
        return Err(Error::InvalidInput(
            "input is degenerate; apply nondegenerate_core first".into(),
        ));
    }
    let f = t.field();
    let [l, n, m] = t.dims();
    let mut slices = Vec::with_capacity(m + 1);
    for a in t.frontal().into_slices() {
        let mut s = Mat::zeros(f, l + n, l + n);
        s.set_block(0, l, &a);
        slices.push(s);
    }
    if unital {
        let mut m0 = Mat::zeros(f, l + n, l + n);
        for i in 0..l {
            m0.set(i, i, 1);
        }
        slices.push(m0);
    }
    MatrixTuple::new(f, l + n, l + n, slices)
}

pub struct Ti3ToConjugacy {
    pub unital: bool,
}

impl Reduction for Ti3ToConjugacy {
    fn descriptor(&self) -> ReductionDescriptor {
        ReductionDescriptor {
            name: if self.unital {
                "3ti-to-conjugacy-unital"
            } else {
                "3ti-to-conjugacy"
            },
            source: Tag::Ti3,
            target: Tag::Conjugacy,
            dims: if self.unital {
                "ℓ×n×m ↦ (ℓ+n)×(ℓ+n)×(m+1)"
            } else {
                "ℓ×n×m ↦ (ℓ+n)×(ℓ+n)×m"
            },
        }
    }

    fn target_dims(&self, a: &Instance) -> Result<Vec<usize>> {
        let [l, n, m] = expect_tensor3(a, "3ti-to-conjugacy")?.dims();
        Ok(vec![l + n, l + n, m + usize::from(self.unital)])
    }

    fn construct(&self, a: &Instance) -> Result<Instance> {
        let t = expect_tensor3(a, "3ti-to-conjugacy")?;
        Ok(Instance::Tensor3(Tensor3::from_frontal(&ti3_to_conjugacy(
            t,
            self.unital,
        )?)))
    }

    /// `(X, Y, Z) ↦ (diag(X⁻ᵗ, Y), Z)`, with a trailing 1 in the mixing
    /// matrix for the unital variant.
    fn witness_forward(&self, a: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::Ti3)?;
        let f = expect_tensor3(a, "3ti-to-conjugacy")?.field();
        let p = Mat::block_diag(f, &[&w.mats[0].inverse()?.transpose(), &w.mats[1]]);
        let r = if self.unital {
            Mat::block_diag(f, &[&w.mats[2], &Mat::identity(f, 1)])
        } else {
            w.mats[2].clone()
        };
        Witness::new(Tag::Conjugacy, vec![p, r])
    }

    /// Requires the lower-left block of `P̃` to vanish and returns
    /// `(P₁₁⁻ᵗ, P₂₂, (R̃⁻¹[..m, ..m])⁻¹)`.
    fn witness_recover(&self, a: &Instance, b: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::Conjugacy)?;
        let [l, n, m] = expect_tensor3(a, "3ti-to-conjugacy")?.dims();
        let p = &w.mats[0];
        if !p.submatrix(l, l + n, 0, l).is_zero() {
            return Err(Error::WitnessInvalid(
                "conjugating matrix is not block upper triangular".into(),
            ));
        }
        let bad = |_| Error::WitnessInvalid("singular diagonal block".into());
        let x = p.submatrix(0, l, 0, l).inverse().map_err(bad)?.transpose();
        let y = p.submatrix(l, l + n, l, l + n);
        let z = w.mats[1]
            .inverse()?
            .submatrix(0, m, 0, m)
            .inverse()
            .map_err(bad)?;
        let rec = Witness::new(Tag::Ti3, vec![x, y, z])?;
        checked(Tag::Ti3, a, b, rec)
    }
}
