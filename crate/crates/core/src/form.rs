//! Homogeneous forms of degree d over GF(p), stored sparsely as
//! exponent vector → coefficient (zero coefficients are never stored).

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Error, Result};
use crate::gf::GF;
use crate::matspace::Mat;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormD {
    f: GF,
    n: usize,
    d: u32,
    terms: BTreeMap<Vec<u32>, u32>,
}

/// All exponent vectors of `n` variables summing to `d`, in lex order.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

impl FormD {
    pub fn zero(f: GF, n: usize, d: u32) -> FormD {
        FormD {
            f,
            n,
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(f: GF, n: usize, d: u32, terms: &[(Vec<u32>, u32)]) -> Result<FormD> {
        let mut form = FormD::zero(f, n, d);
        for (e, c) in terms {
            form.add_term(e, *c)?;
        }
        Ok(form)
    }

    pub fn field(&self) -> GF {
        self.f
    }
    pub fn nvars(&self) -> usize {
        self.n
    }
    pub fn degree(&self) -> u32 {
        self.d
    }
    pub fn terms(&self) -> &BTreeMap<Vec<u32>, u32> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, e: &[u32]) -> u32 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    /// Adds `c · x^e` to the form.
    pub fn add_term(&mut self, e: &[u32], c: u32) -> Result<()> {
        if e.len() != self.n {
            return dim_err(format!("exponent vector of length {} for {} variables", e.len(), self.n));
        }
        if e.iter().sum::<u32>() != self.d {
            return Err(Error::InvalidInput(format!(
                "monomial {e:?} does not have degree {}",
                self.d
            )));
        }
        let c = c % self.f.p();
        let entry = self.terms.entry(e.to_vec()).or_insert(0);
        *entry = self.f.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(e);
        }
        Ok(())
    }

    pub fn random<R: Rng>(rng: &mut R, f: GF, n: usize, d: u32) -> FormD {
        let mut form = FormD::zero(f, n, d);
        for e in monomials(n, d) {
            let c = rng.gen_range(0..f.p());
            form.add_term(&e, c).expect("valid monomial");
        }
        form
    }

    /// Value at a point.
    pub fn evaluate(&self, x: &[u32]) -> u32 {
        let f = self.f;
        self.terms.iter().fold(0, |acc, (e, &c)| {
            let v = e
                .iter()
                .zip(x)
                .fold(c, |t, (&k, &xi)| f.mul(t, f.pow(xi, k as u64)));
            f.add(acc, v)
        })
    }

    /// `(f·A)(x) = f(Ax)`: every `x_i` is replaced by `Σ_j A[i][j] x_j`.
    pub fn substitute(&self, a: &Mat) -> Result<FormD> {
        if a.rows() != self.n || a.cols() != self.n || a.field() != self.f {
            return dim_err(format!("substitution matrix must be {0}x{0}", self.n));
        }
        let dense = DenseForm::new(self.f, self.n, self.d);
        Ok(dense.substitute(self, a))
    }

    /// The same form viewed in `extra` more variables (appended last).
    pub fn add_variables(&self, extra: usize) -> FormD {
        let mut out = FormD::zero(self.f, self.n + extra, self.d);
        for (e, &c) in &self.terms {
            let mut e2 = e.clone();
            e2.resize(self.n + extra, 0);
            out.terms.insert(e2, c);
        }
        out
    }

    /// `x_var^k · f`.
    pub fn mul_var_power(&self, var: usize, k: u32) -> Result<FormD> {
        if var >= self.n {
            return dim_err(format!("variable {var} out of range"));
        }
        let mut out = FormD::zero(self.f, self.n, self.d + k);
        for (e, &c) in &self.terms {
            let mut e2 = e.clone();
            e2[var] += k;
            out.terms.insert(e2, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> FormD {
        let mut out = FormD::zero(self.f, self.n, self.d);
        for (e, &v) in &self.terms {
            let w = self.f.mul(v, c);
            if w != 0 {
                out.terms.insert(e.clone(), w);
            }
        }
        out
    }
}

/// Dense scratch representation used by substitution: the coefficient of
/// the monomial with exponents `e` lives at `Σ e_i (d+1)^i`.
struct DenseForm {
    f: GF,
    n: usize,
    d: u32,
    size: usize,
}

impl DenseForm {
    fn new(f: GF, n: usize, d: u32) -> DenseForm {
        let size = (d as usize + 1).pow(n as u32);
        DenseForm { f, n, d, size }
    }

    fn stride(&self, var: usize) -> usize {
        (self.d as usize + 1).pow(var as u32)
    }

    fn decode(&self, mut code: usize) -> Vec<u32> {
        let b = self.d as usize + 1;
        (0..self.n)
            .map(|_| {
                let e = (code % b) as u32;
                code /= b;
                e
            })
            .collect()
    }

    fn substitute(&self, form: &FormD, a: &Mat) -> FormD {
        let f = self.f;
        let p = f.p() as u64;
        let strides: Vec<usize> = (0..self.n).map(|v| self.stride(v)).collect();
        let mut total = vec![0u64; self.size];
        // sparse polynomial buffers (code, coeff)
        for (e, &c) in &form.terms {
            let mut poly: Vec<(usize, u32)> = vec![(0, c)];
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
                    for &(code, v) in &poly {
                        for (j, &s) in strides.iter().enumerate() {
                            let w = a.get(i, j);
                            if w != 0 {
                                *acc.entry(code + s).or_insert(0) += v as u64 * w as u64;
                            }
                        }
                    }
                    poly = acc
                        .into_iter()
                        .map(|(code, v)| (code, (v % p) as u32))
                        .filter(|&(_, v)| v != 0)
                        .collect();
                }
            }
            for (code, v) in poly {
                total[code] += v as u64;
            }
        }
        let mut out = FormD::zero(f, self.n, self.d);
        for (code, v) in total.into_iter().enumerate() {
            let v = (v % p) as u32;
            if v != 0 {
                out.terms.insert(self.decode(code), v);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::random_gl;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 3).len(), 4);
        assert_eq!(monomials(3, 4).len(), 15);
        assert_eq!(monomials(1, 5), vec![vec![5]]);
    }

    #[test]
    fn zero_coefficients_cancel() {
        let f = GF::new(3).unwrap();
        let mut g = FormD::from_terms(f, 2, 3, &[(vec![2, 1], 1)]).unwrap();
        g.add_term(&[2, 1], 2).unwrap();
        assert!(g.is_zero());
        assert!(g.add_term(&[1, 1], 1).is_err());
    }

    #[test]
    fn substitution_matches_evaluation() {
        let f = GF::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let g = FormD::random(&mut rng, f, 3, 3);
            let a = random_gl(&mut rng, f, 3);
            let h = g.substitute(&a).unwrap();
            let x: Vec<u32> = (0..3).map(|_| rng.gen_range(0..5)).collect();
            assert_eq!(h.evaluate(&x), g.evaluate(&a.mul_vec(&x)));
        }
    }

    #[test]
    fn substitution_is_an_action() {
        let f = GF::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let g = FormD::random(&mut rng, f, 3, 4);
            let (a, b) = (random_gl(&mut rng, f, 3), random_gl(&mut rng, f, 3));
            let lhs = g.substitute(&a).unwrap().substitute(&b).unwrap();
            assert_eq!(lhs, g.substitute(&a.mul(&b)).unwrap());
        }
    }

    #[test]
    fn multiply_by_new_variable() {
        let f = GF::new(5).unwrap();
        let x3 = FormD::from_terms(f, 1, 3, &[(vec![3], 1)]).unwrap();
        let zx3 = x3.add_variables(1).mul_var_power(1, 1).unwrap();
        assert_eq!(zx3.terms().len(), 1);
        assert_eq!(zx3.coeff(&[3, 1]), 1);
        assert_eq!(zx3.degree(), 4);
    }
}
