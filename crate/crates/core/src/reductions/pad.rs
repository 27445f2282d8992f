//! d-way array isomorphism to d'-way array isomorphism for `d' ≥ d`, by
//! appending directions of length 1.

use super::{checked, expect_tag, Reduction, ReductionDescriptor};
use crate::error::{Error, Result};
use crate::matspace::Mat;
use crate::tensor::{pad_to_d, TensorD};
use crate::witness::{Instance, Tag, Witness};

pub struct PadD {
    pub d_prime: usize,
}

fn expect_tensord(a: &Instance) -> Result<&TensorD> {
    match a {
        Instance::TensorD(t) => Ok(t),
        other => Err(Error::InvalidInput(format!(
            "pad-d expects a d-way array, got a {}",
            other.kind()
        ))),
    }
}

impl Reduction for PadD {
    fn descriptor(&self) -> ReductionDescriptor {
        ReductionDescriptor {
            name: "pad-d",
            source: Tag::TiD,
            target: Tag::TiD,
            dims: "n₁×…×n_d ↦ n₁×…×n_d×1×…×1 (d' directions)",
        }
    }

    fn target_dims(&self, a: &Instance) -> Result<Vec<usize>> {
        let t = expect_tensord(a)?;
        let mut dims = t.dims().to_vec();
        if self.d_prime < dims.len() {
            return Err(Error::InvalidInput(format!(
                "cannot pad a {}-way array to {} directions",
                dims.len(),
                self.d_prime
            )));
        }
        dims.resize(self.d_prime, 1);
        Ok(dims)
    }

    fn construct(&self, a: &Instance) -> Result<Instance> {
        Ok(Instance::TensorD(pad_to_d(expect_tensord(a)?, self.d_prime)?))
    }

    fn witness_forward(&self, a: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::TiD)?;
        let t = expect_tensord(a)?;
        let mut mats = w.mats.clone();
        mats.resize(self.d_prime.max(mats.len()), Mat::identity(t.field(), 1));
        Witness::new(Tag::TiD, mats)
    }

    /// The trailing `1×1` factors are scalars; their product is folded into
    /// the first matrix.
    fn witness_recover(&self, a: &Instance, b: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::TiD)?;
        let t = expect_tensord(a)?;
        let f = t.field();
        let d = t.order();
        if w.mats.len() != self.d_prime || d == 0 {
            return Err(Error::WitnessInvalid(format!(
                "expected {} matrices, got {}",
                self.d_prime,
                w.mats.len()
            )));
        }
        let mut alpha = 1;
        for m in &w.mats[d..] {
            if m.rows() != 1 || m.cols() != 1 {
                return Err(Error::WitnessInvalid("padded factor is not 1×1".into()));
            }
            alpha = f.mul(alpha, m.get(0, 0));
        }
        let mut mats = w.mats[..d].to_vec();
        mats[0] = mats[0].scale(alpha);
        checked(Tag::TiD, a, b, Witness::new(Tag::TiD, mats)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GF;
    use crate::matspace::random_gl;
    use crate::witness::act;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matrix_becomes_2x2x1() {
        let f = GF::new(3).unwrap();
        let t = TensorD::from_vec(f, &[2, 2], vec![1, 2, 0, 1]).unwrap();
        let out = PadD { d_prime: 3 }.construct(&Instance::TensorD(t.clone())).unwrap();
        let Instance::TensorD(p) = out else { panic!() };
        assert_eq!(p.dims(), &[2, 2, 1]);
        assert_eq!(p.get(&[0, 1, 0]), 2);
        let same = PadD { d_prime: 2 }.construct(&Instance::TensorD(t.clone())).unwrap();
        assert_eq!(same, Instance::TensorD(t));
    }

    #[test]
    fn scalars_are_absorbed() {
        let f = GF::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let red = PadD { d_prime: 3 };
        for _ in 0..100 {
            let data = (0..4).map(|_| rng.gen_range(0..5)).collect();
            let a = Instance::TensorD(TensorD::from_vec(f, &[2, 2], data).unwrap());
            let w = Witness::new(Tag::TiD, vec![random_gl(&mut rng, f, 2), random_gl(&mut rng, f, 2)])
                .unwrap();
            let b = act(&a, &w).unwrap();
            let mut wide = red.witness_forward(&a, &w).unwrap();
            wide.mats[2] = Mat::from_rows(f, &[&[rng.gen_range(1..5)]]);
            let (pa, pb) = (red.construct(&a).unwrap(), red.construct(&b).unwrap());
            // rescale the first factor so the padded witness still holds
            let inv = f.inv(wide.mats[2].get(0, 0)).unwrap();
            wide.mats[0] = wide.mats[0].scale(inv);
            assert!(crate::witness::verify_witness(Tag::TiD, &pa, &pb, &wide).unwrap());
            assert!(red.witness_recover(&a, &b, &wide).is_ok());
        }
    }
}
