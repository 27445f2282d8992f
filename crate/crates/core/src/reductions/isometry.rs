//! 3-tensor isomorphism to (alternating or symmetric) matrix space isometry.
//!
//! For a non-degenerate `ℓ×n×m` array with `ℓ ≤ n` the output lives on a
//! space of dimension `N = ℓ+7n+3`, split into blocks
//! `U = [0,ℓ)`, `V = [ℓ,ℓ+n)`, `E = [ℓ+n, ℓ+3n+1)` and `F = [ℓ+3n+1, N)`.
//! The slices are, in order:
//! * `m` main slices with `A_k` on `U×V` and `∓A_kᵗ` on `V×U`;
//! * `ℓ(2n+1)` slices `E_{p, e_q} ∓ E_{e_q, p}`, `p ∈ U`, `q < 2n+1`;
//! * `n(4n+2)` slices `E_{ℓ+p, f_q} ∓ E_{f_q, ℓ+p}`, `p < n`, `q < 4n+2`.
//!
//! When `ℓ > n` the first two directions are swapped first.

use super::{checked, elementary_pair, expect_tag, expect_tensor3, Reduction, ReductionDescriptor};
use crate::error::{Error, Result};
use crate::gf::GF;
use crate::matspace::{Mat, MatrixTuple};
use crate::tensor::Tensor3;
use crate::witness::{Instance, Tag, Witness};

/// Side and tuple length for an `ℓ×n×m` input with `ℓ ≤ n`.
pub(crate) fn isometry_dims(l: usize, n: usize, m: usize) -> (usize, usize) {
    (l + 7 * n + 3, m + l * (2 * n + 1) + n * (4 * n + 2))
}

/// Index bookkeeping shared by the construction and both witness maps.
#[derive(Clone, Copy)]
struct Layout {
    l: usize,
    n: usize,
    m: usize,
}

impl Layout {
    fn side(self) -> usize {
        isometry_dims(self.l, self.n, self.m).0
    }
    fn len(self) -> usize {
        isometry_dims(self.l, self.n, self.m).1
    }
    fn e_col(self, q: usize) -> usize {
        self.l + self.n + q
    }
    fn f_col(self, q: usize) -> usize {
        self.l + 3 * self.n + 1 + q
    }
}

fn oriented(t: &Tensor3) -> (Tensor3, bool) {
    let [l, n, _] = t.dims();
    if l > n {
        (t.permute_dirs([1, 0, 2]), true)
    } else {
        (t.clone(), false)
    }
}

fn build(t: &Tensor3, symmetric: bool) -> Result<MatrixTuple> {
    if !t.is_nondegenerate() {
        return Err(Error::InvalidInput(
            "input is degenerate; apply nondegenerate_core first".into(),
        ));
    }
    let (t, _) = oriented(t);
    let f = t.field();
    let [l, n, m] = t.dims();
    let lay = Layout { l, n, m };
    let side = lay.side();
    let mut slices = Vec::with_capacity(lay.len());
    for k in 0..m {
        let mut s = Mat::zeros(f, side, side);
        for i in 0..l {
            for j in 0..n {
                let v = t.get(i, j, k);
                s.set(i, l + j, v);
                s.set(l + j, i, if symmetric { v } else { f.neg(v) });
            }
        }
        slices.push(s);
    }
    for p in 0..l {
        for q in 0..2 * n + 1 {
            slices.push(elementary_pair(f, side, p, lay.e_col(q), symmetric));
        }
    }
    for p in 0..n {
        for q in 0..4 * n + 2 {
            slices.push(elementary_pair(f, side, l + p, lay.f_col(q), symmetric));
        }
    }
    MatrixTuple::new(f, side, side, slices)
}

pub fn ti3_to_alt_isometry(t: &Tensor3) -> Result<MatrixTuple> {
    build(t, false)
}

pub fn ti3_to_sym_isometry(t: &Tensor3) -> Result<MatrixTuple> {
    build(t, true)
}

pub struct Ti3ToIsometry {
    pub symmetric: bool,
}

fn forward(f: GF, lay: Layout, x: &Mat, y: &Mat, z: &Mat) -> Result<Witness> {
    let n = lay.n;
    let p = Mat::block_diag(
        f,
        &[x, y, &Mat::identity(f, 2 * n + 1), &Mat::identity(f, 4 * n + 2)],
    );
    let r = Mat::block_diag(
        f,
        &[
            z,
            &x.inverse()?.transpose().kron(&Mat::identity(f, 2 * n + 1)),
            &y.inverse()?.transpose().kron(&Mat::identity(f, 4 * n + 2)),
        ],
    );
    debug_assert_eq!(p.rows(), lay.side());
    debug_assert_eq!(r.rows(), lay.len());
    Witness::new(Tag::PseudoIsometry, vec![p, r])
}

impl Reduction for Ti3ToIsometry {
    fn descriptor(&self) -> ReductionDescriptor {
        ReductionDescriptor {
            name: if self.symmetric {
                "3ti-to-sym-isometry"
            } else {
                "3ti-to-alt-isometry"
            },
            source: Tag::Ti3,
            target: Tag::PseudoIsometry,
            dims: "ℓ×n×m (ℓ ≤ n) ↦ N×N×(m+ℓ(2n+1)+n(4n+2)), N = ℓ+7n+3",
        }
    }

    fn target_dims(&self, a: &Instance) -> Result<Vec<usize>> {
        let [l, n, m] = expect_tensor3(a, "3ti-to-isometry")?.dims();
        let (l, n) = (l.min(n), l.max(n));
        let (side, len) = isometry_dims(l, n, m);
        Ok(vec![side, side, len])
    }

    fn construct(&self, a: &Instance) -> Result<Instance> {
        let t = expect_tensor3(a, "3ti-to-isometry")?;
        Ok(Instance::Tensor3(Tensor3::from_frontal(&build(t, self.symmetric)?)))
    }

    /// `(X, Y, Z) ↦ (diag(X, Y, I, I), diag(Z, X⁻ᵗ⊗I_{2n+1}, Y⁻ᵗ⊗I_{4n+2}))`.
    fn witness_forward(&self, a: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::Ti3)?;
        let t = expect_tensor3(a, "3ti-to-isometry")?;
        let (t, swapped) = oriented(t);
        let [l, n, m] = t.dims();
        let (x, y) = if swapped {
            (&w.mats[1], &w.mats[0])
        } else {
            (&w.mats[0], &w.mats[1])
        };
        forward(t.field(), Layout { l, n, m }, x, y, &w.mats[2])
    }

    /// Reads `X = P̃[U,U]`, `Y = P̃[V,V]` and `Z = (R̃⁻¹[main,main])⁻¹`;
    /// the lateral-rank argument forces `P̃[V,U] = 0`.
    fn witness_recover(&self, a: &Instance, b: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::PseudoIsometry)?;
        let t = expect_tensor3(a, "3ti-to-isometry")?;
        let (ot, swapped) = oriented(t);
        let [l, n, m] = ot.dims();
        let p = &w.mats[0];
        if !p.submatrix(l, l + n, 0, l).is_zero() {
            return Err(Error::WitnessInvalid(
                "isometry mixes the V block into the U block".into(),
            ));
        }
        let x = p.submatrix(0, l, 0, l);
        let y = p.submatrix(l, l + n, l, l + n);
        let winv = w.mats[1].inverse()?;
        let z = winv.submatrix(0, m, 0, m).inverse().map_err(|_| {
            Error::WitnessInvalid("main block of the slice mixing is singular".into())
        })?;
        let mats = if swapped { vec![y, x, z] } else { vec![x, y, z] };
        let rec = Witness::new(Tag::Ti3, mats)
            .map_err(|e| Error::WitnessInvalid(format!("recovered blocks: {e}")))?;
        checked(Tag::Ti3, a, b, rec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::lateral_ranks;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn nondegenerate(rng: &mut ChaCha8Rng, f: GF, d: [usize; 3]) -> Tensor3 {
        loop {
            let data = (0..d[0] * d[1] * d[2]).map(|_| rng.gen_range(0..f.p())).collect();
            let t = Tensor3::from_vec(f, d[0], d[1], d[2], data).unwrap();
            if t.is_nondegenerate() {
                return t;
            }
        }
    }

    #[test]
    fn dimensions_at_222() {
        let f = GF::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = nondegenerate(&mut rng, f, [2, 2, 2]);
        let s = ti3_to_alt_isometry(&t).unwrap();
        assert_eq!((s.rows(), s.len()), (19, 32));
        assert!(s.is_alternating());
        assert!(ti3_to_sym_isometry(&t).unwrap().is_symmetric());
    }

    #[test]
    fn lateral_rank_bands() {
        let f = GF::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = nondegenerate(&mut rng, f, [2, 3, 2]);
        let out = Tensor3::from_frontal(&ti3_to_alt_isometry(&t).unwrap());
        let r = lateral_ranks(&out);
        let (l, n) = (2, 3);
        assert!(r[..l].iter().all(|&x| (2 * n + 1..=3 * n + 1).contains(&x)));
        assert!(r[l..l + n].iter().all(|&x| (4 * n + 2..=5 * n + 2).contains(&x)));
        assert!(r[l + n..].iter().all(|&x| x <= n));
    }

    #[test]
    fn degenerate_input_rejected() {
        let f = GF::new(2).unwrap();
        assert!(ti3_to_alt_isometry(&Tensor3::zeros(f, 2, 2, 2)).is_err());
    }
}
