//! Finite-dimensional algebras given by structure constants
//! `x_i ∘ x_j = Σ_k A(i,j,k) x_k`, with no associativity assumed.

use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Result};
use crate::gf::GF;
use crate::matspace::Mat;
use crate::tensor::Tensor3;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSC {
    sc: Tensor3,
}

impl AlgebraSC {
    pub fn new(sc: Tensor3) -> Result<AlgebraSC> {
        let [a, b, c] = sc.dims();
        if a != b || b != c {
            return dim_err(format!("structure constants must be n×n×n, got {a}×{b}×{c}"));
        }
        Ok(AlgebraSC { sc })
    }

    pub fn zero(f: GF, n: usize) -> AlgebraSC {
        AlgebraSC {
            sc: Tensor3::zeros(f, n, n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.sc.dims()[0]
    }
    pub fn field(&self) -> GF {
        self.sc.field()
    }
    pub fn structure_constants(&self) -> &Tensor3 {
        &self.sc
    }
    pub fn into_tensor(self) -> Tensor3 {
        self.sc
    }

    /// Product of basis elements as a coefficient vector.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec<u32> {
        (0..self.dim()).map(|k| self.sc.get(i, j, k)).collect()
    }

    pub fn mul(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let n = self.dim();
        let f = self.field();
        let p = f.p() as u64;
        let mut acc = vec![0u64; n];
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = f.mul(a, b) as u64;
                for (k, slot) in acc.iter_mut().enumerate() {
                    let c = self.sc.get(i, j, k);
                    if c != 0 {
                        *slot += ab * c as u64;
                    }
                }
            }
        }
        acc.into_iter().map(|x| (x % p) as u32).collect()
    }

    /// Matrix of `x ↦ u ∘ x` acting on coordinate columns.
    pub fn left_mult(&self, u: &[u32]) -> Mat {
        let n = self.dim();
        let mut m = Mat::zeros(self.field(), n, n);
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            let col = self.mul(u, &e);
            for (k, v) in col.into_iter().enumerate() {
                m.set(k, j, v);
            }
        }
        m
    }

    fn unit_vec(&self, i: usize) -> Vec<u32> {
        let mut e = vec![0; self.dim()];
        e[i] = 1;
        e
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let ij = self.basis_product(i, j);
                (0..n).all(|k| {
                    let jk = self.basis_product(j, k);
                    self.mul(&ij, &self.unit_vec(k)) == self.mul(&self.unit_vec(i), &jk)
                })
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// `x ∘ x = 0` for every `x`, i.e. the bracket is alternating.
    pub fn is_alternating(&self) -> bool {
        let n = self.dim();
        let f = self.field();
        (0..n).all(|i| {
            self.basis_product(i, i).iter().all(|&v| v == 0)
                && (0..n).all(|j| {
                    let a = self.basis_product(i, j);
                    let b = self.basis_product(j, i);
                    a.iter().zip(&b).all(|(&x, &y)| f.add(x, y) == 0)
                })
        })
    }

    /// Jacobi identity on all basis triples.
    pub fn satisfies_jacobi(&self) -> bool {
        let n = self.dim();
        let f = self.field();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (ei, ej, ek) = (self.unit_vec(i), self.unit_vec(j), self.unit_vec(k));
                    let a = self.mul(&ei, &self.mul(&ej, &ek));
                    let b = self.mul(&ej, &self.mul(&ek, &ei));
                    let c = self.mul(&ek, &self.mul(&ei, &ej));
                    if a.iter().zip(&b).zip(&c).any(|((&x, &y), &z)| f.add(f.add(x, y), z) != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every product of three elements vanishes, in both bracketings.
    pub fn is_3_nilpotent(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for k in 0..n {
                    let ek = self.unit_vec(k);
                    if self.mul(&ij, &ek).iter().any(|&v| v != 0) {
                        return false;
                    }
                    if self.mul(&ek, &ij).iter().any(|&v| v != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Basis index of a two-sided identity, if some basis element is one.
    pub fn unit_basis_element(&self) -> Option<usize> {
        let n = self.dim();
        (0..n).find(|&e| {
            (0..n).all(|x| {
                let ex = self.unit_vec(x);
                self.basis_product(e, x) == ex && self.basis_product(x, e) == ex
            })
        })
    }

    /// Structure constants in the basis `x'_a = Σ_i P[i][a] x_i`.
    pub fn change_basis(&self, p: &Mat) -> Result<AlgebraSC> {
        let pit = p.inverse()?.transpose();
        Ok(AlgebraSC {
            sc: self.sc.act3(p, p, &pit)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::random_gl;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn polynomial_ring_mod_x3(f: GF) -> AlgebraSC {
        // basis 1, x, x²
        let mut t = Tensor3::zeros(f, 3, 3, 3);
        for i in 0..3 {
            for j in 0..3 {
                if i + j < 3 {
                    t.set(i, j, i + j, 1);
                }
            }
        }
        AlgebraSC::new(t).unwrap()
    }

    #[test]
    fn truncated_polynomial_ring() {
        let f = GF::new(5).unwrap();
        let a = polynomial_ring_mod_x3(f);
        assert!(a.is_associative());
        assert!(a.is_commutative());
        assert_eq!(a.unit_basis_element(), Some(0));
        assert!(!a.is_3_nilpotent());
    }

    #[test]
    fn change_of_basis_is_isomorphism() {
        let f = GF::new(3).unwrap();
        let a = polynomial_ring_mod_x3(f);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = random_gl(&mut rng, f, 3);
            let b = a.change_basis(&p).unwrap();
            // φ(y) = P y maps products of b to products of a
            let u: Vec<u32> = (0..3).map(|_| rng.gen_range(0..3)).collect();
            let v: Vec<u32> = (0..3).map(|_| rng.gen_range(0..3)).collect();
            assert_eq!(p.mul_vec(&b.mul(&u, &v)), a.mul(&p.mul_vec(&u), &p.mul_vec(&v)));
            assert!(b.is_associative());
        }
    }

    #[test]
    fn cross_product_is_lie() {
        let f = GF::new(7).unwrap();
        let mut t = Tensor3::zeros(f, 3, 3, 3);
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            t.set(i, j, k, 1);
            t.set(j, i, k, 6);
        }
        let a = AlgebraSC::new(t).unwrap();
        assert!(a.is_alternating());
        assert!(a.satisfies_jacobi());
        assert!(!a.is_associative());
    }
}
