//! Cubic form equivalence to degree-`d` form equivalence: `f ↦ z^{d−3}·f`
//! with `z` a new last variable.

use super::{checked, expect_tag, Reduction, ReductionDescriptor};
use crate::error::{Error, Result};
use crate::form::FormD;
use crate::gf::GF;
use crate::matspace::Mat;
use crate::witness::{Instance, Tag, Witness};

/// `z^{d−3}·f` in `n+1` variables; `f` itself when `d = 3`.
pub fn cubic_to_degree_d(form: &FormD, d: u32) -> Result<FormD> {
    if form.degree() != 3 {
        return Err(Error::InvalidInput("input must be a cubic form".into()));
    }
    if d < 3 {
        return Err(Error::InvalidInput(format!("target degree {d} is below 3")));
    }
    if d == 3 {
        return Ok(form.clone());
    }
    let n = form.nvars();
    form.add_variables(1).mul_var_power(n, d - 3)
}

fn expect_form(a: &Instance) -> Result<&FormD> {
    match a {
        Instance::Form(f) => Ok(f),
        other => Err(Error::InvalidInput(format!(
            "cubic-to-degree-d expects a form, got a {}",
            other.kind()
        ))),
    }
}

fn cube_root(f: GF, c: u32) -> Option<u32> {
    (1..f.p()).find(|&x| f.pow(x, 3) == c)
}

pub struct CubicToDegreeD {
    pub d: u32,
}

impl Reduction for CubicToDegreeD {
    fn descriptor(&self) -> ReductionDescriptor {
        ReductionDescriptor {
            name: "cubic-to-degree-d",
            source: Tag::FormEq,
            target: Tag::FormEq,
            dims: "cubic in n variables ↦ degree d in n+1 variables (n when d = 3)",
        }
    }

    fn target_dims(&self, a: &Instance) -> Result<Vec<usize>> {
        let n = expect_form(a)?.nvars();
        Ok(if self.d == 3 {
            vec![n, 3]
        } else {
            vec![n + 1, self.d as usize]
        })
    }

    fn construct(&self, a: &Instance) -> Result<Instance> {
        Ok(Instance::Form(cubic_to_degree_d(expect_form(a)?, self.d)?))
    }

    /// `A ↦ diag(A, 1)`.
    fn witness_forward(&self, a: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::FormEq)?;
        if self.d == 3 {
            return Ok(w.clone());
        }
        let f = expect_form(a)?.field();
        Witness::new(
            Tag::FormEq,
            vec![Mat::block_diag(f, &[&w.mats[0], &Mat::identity(f, 1)])],
        )
    }

    /// Write the target witness as `[[B₁₁, b₁₂], [b₂₁, b₂₂]]`, the last row
    /// giving the image of `z`. When `b₂₁ ≠ 0` the map first gets composed
    /// with `[[I − k·b₂₁, k], [b₂₁, 0]]` for some `k ∈ ker B₁₁` with
    /// `b₂₁·k = 1`, which clears the last row and column. The answer is then
    /// `λ·B₁₁` with `λ³ = b₂₂^{d−3}`.
    fn witness_recover(&self, a: &Instance, b: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::FormEq)?;
        if self.d == 3 {
            return checked(Tag::FormEq, a, b, w.clone());
        }
        let src = expect_form(a)?;
        let f = src.field();
        let n = src.nvars();
        let mut bt = w.mats[0].clone();
        if bt.rows() != n + 1 {
            return Err(Error::WitnessInvalid(format!(
                "expected a {0}×{0} matrix",
                n + 1
            )));
        }
        let b21 = bt.submatrix(n, n + 1, 0, n);
        if !b21.is_zero() {
            if bt.get(n, n) != 0 {
                return Err(Error::RecoveryUnsupported(
                    "z maps to a form mixing z with the original variables".into(),
                ));
            }
            let b11 = bt.submatrix(0, n, 0, n);
            let ker = b11.right_kernel();
            let k = (0..ker.rows())
                .map(|r| ker.row(r).to_vec())
                .find(|v| b21.mul_vec(v)[0] != 0)
                .ok_or_else(|| {
                    Error::RecoveryUnsupported("no kernel vector of B₁₁ meets b₂₁".into())
                })?;
            let s = f.inv(b21.mul_vec(&k)[0])?;
            let k: Vec<u32> = k.iter().map(|&x| f.mul(x, s)).collect();
            let kcol = Mat::from_vec(f, n, 1, k)?;
            let mut tau = Mat::zeros(f, n + 1, n + 1);
            tau.set_block(0, 0, &Mat::identity(f, n).sub(&kcol.mul(&b21)));
            tau.set_block(0, n, &kcol);
            tau.set_block(n, 0, &b21);
            bt = bt.mul(&tau);
        }
        let c = f.pow(bt.get(n, n), (self.d - 3) as u64);
        let lambda = cube_root(f, c).ok_or_else(|| {
            Error::RecoveryUnsupported(format!("{c} has no cube root in GF({})", f.p()))
        })?;
        let rec = Witness::new(Tag::FormEq, vec![bt.submatrix(0, n, 0, n).scale(lambda)])?;
        checked(Tag::FormEq, a, b, rec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::random_gl;
    use crate::witness::act;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn x_cubed_to_degree_4() {
        let f = GF::new(5).unwrap();
        let x3 = FormD::from_terms(f, 1, 3, &[(vec![3], 1)]).unwrap();
        let g = cubic_to_degree_d(&x3, 4).unwrap();
        assert_eq!((g.nvars(), g.degree()), (2, 4));
        assert_eq!(g.coeff(&[3, 1]), 1);
        assert_eq!(g.terms().len(), 1);
        assert_eq!(cubic_to_degree_d(&x3, 3).unwrap(), x3);
    }

    #[test]
    fn scaled_z_is_absorbed() {
        let f = GF::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let red = CubicToDegreeD { d: 4 };
        for _ in 0..20 {
            let a = Instance::Form(FormD::random(&mut rng, f, 2, 3));
            let w = Witness::new(Tag::FormEq, vec![random_gl(&mut rng, f, 2)]).unwrap();
            let b = act(&a, &w).unwrap();
            // z ↦ 2z, original variables rescaled by 2⁻¹ᐟ³: 3³ = 2 in GF(5)
            let mut fw = red.witness_forward(&a, &w).unwrap();
            let inv3 = f.inv(3).unwrap();
            let mut m = fw.mats[0].submatrix(0, 2, 0, 2).scale(inv3);
            m = Mat::block_diag(f, &[&m, &Mat::from_rows(f, &[&[2]])]);
            fw.mats[0] = m;
            let (ta, tb) = (red.construct(&a).unwrap(), red.construct(&b).unwrap());
            assert!(crate::witness::verify_witness(Tag::FormEq, &ta, &tb, &fw).unwrap());
            assert!(red.witness_recover(&a, &b, &fw).is_ok());
        }
    }
}
