//! Search to decision for alternating matrix space isometry: an
//! individualization gadget, two decision oracles, the step-by-step basis
//! search, and its transfer to p-groups of class 2 and exponent p.

use rayon::prelude::*;

use crate::error::{dim_err, Error, Result};
use crate::gf::GF;
use crate::groupcorr::{baer_alt, lie_closure, matrix_exp, matrix_log, MatrixGroupGens};
use crate::matspace::{
    check_budget, enumerate_gl, enumerate_monomial, gl_order, monomial_order, Mat, MatrixTuple,
    VecSpace,
};
use crate::oracle::decide_isometry;
use crate::reductions::solve_mixing;
use crate::tensor::Tensor3;
use crate::witness::{verify_witness, Instance, Tag, Witness};

/// `(side, length)` of the gadget built from an `n×n×m` array at step `i`:
/// `n` original rows, `2n` e-columns for each of the first `i` rows, `n`
/// shared f-columns; one tube coordinate per gadget entry.
pub fn gadget_dims(n: usize, m: usize, i: usize) -> (usize, usize) {
    (n + 2 * n * i + n, m + 2 * n * i + n * (n - i))
}

/// The largest gadget side over all steps, `2n²`, against the `2n² + 2n`
/// ceiling asserted on every query.
pub fn query_side_bound(n: usize) -> usize {
    2 * n * n + 2 * n
}

fn expect_alternating(a: &Tensor3) -> Result<(usize, usize)> {
    let [l, n, m] = a.dims();
    if l != n {
        return dim_err(format!("expected n×n×m, got {l}×{n}×{m}"));
    }
    if !a.frontal().is_alternating() {
        return Err(Error::InvalidInput("frontal slices must be alternating".into()));
    }
    Ok((n, m))
}

/// Row `j < i` gets its own `2n` gadget columns, rows `i..n` share `n`
/// gadget columns; each gadget entry `(r, c)` carries a fresh tube
/// coordinate with `−1` at `(r, c)` and `+1` at `(c, r)`.
pub fn individualization_gadget(a: &Tensor3, i: usize) -> Result<Tensor3> {
    let (n, m) = expect_alternating(a)?;
    if i == 0 || i >= n {
        return Err(Error::InvalidInput(format!(
            "individualization step {i} outside 1..{}",
            n.saturating_sub(1)
        )));
    }
    let f = a.field();
    let (side, len) = gadget_dims(n, m, i);
    let mut t = Tensor3::zeros(f, side, side, len);
    for r in 0..n {
        for c in 0..n {
            for k in 0..m {
                t.set(r, c, k, a.get(r, c, k));
            }
        }
    }
    let minus = f.neg(1);
    let mut put = |r: usize, c: usize, tube: usize| {
        t.set(r, c, tube, minus);
        t.set(c, r, tube, 1);
    };
    for j in 0..i {
        for k in 0..2 * n {
            put(j, n + 2 * n * j + k, m + 2 * n * j + k);
        }
    }
    let f_col = n + 2 * n * i;
    let f_tube = m + 2 * n * i;
    for j in 0..n - i {
        for k in 0..n {
            put(i + j, f_col + k, f_tube + n * j + k);
        }
    }
    Ok(t)
}

/// Isometry of the gadgets induced by an isometry `(P, R)` of the originals
/// with `P = diag(monomial i×i, GL(n−i))`: `P` extended by the matching
/// permutation of e-column groups and the identity on the f-columns. The
/// gadget mixing is solved exactly.
pub fn gadget_forward(a: &Tensor3, b: &Tensor3, i: usize, w: &Witness) -> Result<Witness> {
    let (n, _) = expect_alternating(a)?;
    let f = a.field();
    let p = &w.mats[0];
    let (side, _) = gadget_dims(n, a.dims()[2], i);
    let mut big = Mat::zeros(f, side, side);
    big.set_block(0, 0, p);
    for j in 0..i {
        let target = (0..i)
            .find(|&c| p.get(j, c) != 0)
            .ok_or_else(|| Error::WitnessInvalid(format!("row {j} of the monomial block is zero")))?;
        for k in 0..2 * n {
            big.set(n + 2 * n * j + k, n + 2 * n * target + k, 1);
        }
    }
    for k in 0..n {
        let c = n + 2 * n * i + k;
        big.set(c, c, 1);
    }
    let (ga, gb) = (individualization_gadget(a, i)?, individualization_gadget(b, i)?);
    let moved = ga.frontal().transform(&big, &big)?;
    let r = solve_mixing(&moved, &gb.frontal())
        .ok_or_else(|| Error::WitnessInvalid("gadget spans differ".into()))?;
    Witness::new(Tag::Isometry, vec![big, r])
}

/// One oracle question: is `a` isometric to `b` by a matrix of the form
/// `diag(monomial i×i, GL(n−i))`, equivalently are the step-`i` gadgets
/// isometric.
pub struct Query<'a> {
    pub a: &'a Tensor3,
    pub b: &'a Tensor3,
    pub i: usize,
}

impl Query<'_> {
    pub fn gadgets(&self) -> Result<(Tensor3, Tensor3)> {
        Ok((
            individualization_gadget(self.a, self.i)?,
            individualization_gadget(self.b, self.i)?,
        ))
    }

    pub fn dims(&self) -> (usize, usize) {
        let [_, n, m] = self.a.dims();
        gadget_dims(n, m, self.i)
    }
}

pub trait DecisionOracle: Sync {
    fn name(&self) -> &'static str;
    fn query(&self, q: &Query<'_>) -> Result<bool>;
}

/// Decides the block-form predicate on the original pair.
pub struct StructuralOracle {
    pub budget: u128,
}

/// Full isometry search on the gadget instances; only feasible for the very
/// smallest inputs.
pub struct BruteOracle {
    pub budget: u128,
}

impl DecisionOracle for StructuralOracle {
    fn name(&self) -> &'static str {
        "structural"
    }
    fn query(&self, q: &Query<'_>) -> Result<bool> {
        structural_oracle(q.a, q.b, q.i, self.budget)
    }
}

impl DecisionOracle for BruteOracle {
    fn name(&self) -> &'static str {
        "brute"
    }
    fn query(&self, q: &Query<'_>) -> Result<bool> {
        let (ga, gb) = q.gadgets()?;
        Ok(decide_isometry(&ga, &gb, self.budget)?.is_some())
    }
}

pub fn oracle_by_name(name: &str, budget: u128) -> Result<Box<dyn DecisionOracle>> {
    match name {
        "structural" => Ok(Box::new(StructuralOracle { budget })),
        "brute" => Ok(Box::new(BruteOracle { budget })),
        other => Err(Error::InvalidInput(format!(
            "unknown oracle `{other}` (expected structural or brute)"
        ))),
    }
}

pub fn structural_oracle(a: &Tensor3, b: &Tensor3, i: usize, budget: u128) -> Result<bool> {
    Ok(structural_isometry(a, b, i, budget)?.is_some())
}

/// An isometry `(P, R)` from `a` to `b` with `P = diag(M, Q)`, `M` monomial
/// of size `i`, if one exists.
///
/// For every `T ∈ GL(m)` and every `M` (scaled so its first nonzero entry
/// is 1, since `P ↦ cP` is absorbed by the mixing) the conditions
/// `X·A_k = B'_k·S` with `X = diag(Mᵗ, X₂)`, `S = diag(M⁻¹, S₂)` and
/// `B' = mix(b, T)` are linear in `(X₂, S₂)`. Every solution with
/// `S·Xᵗ = I` gives `P = Xᵗ` with `PᵗA_kP = B'_k`.
pub fn structural_isometry(a: &Tensor3, b: &Tensor3, i: usize, budget: u128) -> Result<Option<Witness>> {
    let (n, m) = expect_alternating(a)?;
    if expect_alternating(b)? != (n, m) {
        return Ok(None);
    }
    if i > n {
        return Err(Error::InvalidInput(format!("block size {i} exceeds n = {n}")));
    }
    let f = a.field();
    let p = f.p();
    let q = n - i;
    check_budget(
        "structural oracle",
        gl_order(m, p).saturating_mul(monomial_order(i, p) / if i == 0 { 1 } else { p as u128 - 1 }),
        budget,
    )?;
    let mons: Vec<Mat> = enumerate_monomial(i, f, budget)?
        .into_iter()
        .map(|mm| mm.to_mat())
        .filter(|mm| i == 0 || mm.row(0).iter().find(|&&x| x != 0) == Some(&1))
        .collect();
    let (sa, sb) = (a.frontal(), b.frontal());
    // unknowns: x[a][c] for a, c ≥ i, then s[c][b] for c, b ≥ i
    let xv = |r: usize, c: usize| (r - i) * q + (c - i);
    let sv = |r: usize, c: usize| q * q + (r - i) * q + (c - i);
    let rows = m * n * n;
    let mut base = Mat::zeros(f, rows, 2 * q * q);
    for k in 0..m {
        for r in i..n {
            for col in 0..n {
                for c in i..n {
                    base.set((k * n + r) * n + col, xv(r, c), sa.slice(k).get(c, col));
                }
            }
        }
    }
    let minv: Vec<Mat> = mons.iter().map(|mm| mm.inverse().expect("monomial")).collect();
    for t in enumerate_gl(m, f, budget)? {
        let bt = sb.mix(&t)?;
        let mut coef = base.clone();
        for k in 0..m {
            for r in 0..n {
                for col in i..n {
                    for c in i..n {
                        coef.set((k * n + r) * n + col, sv(c, col), f.neg(bt.slice(k).get(r, c)));
                    }
                }
            }
        }
        let mut rhs = Mat::zeros(f, rows, mons.len());
        for (mi, (mm, mmi)) in mons.iter().zip(&minv).enumerate() {
            for k in 0..m {
                for r in 0..n {
                    for col in 0..n {
                        // constant part: Σ_{c<i} Mᵗ[r][c]·A_k[c][col] − Σ_{c<i} B'_k[r][c]·M⁻¹[c][col]
                        let mut v = 0;
                        if r < i {
                            for c in 0..i {
                                v = f.add(v, f.mul(mm.get(c, r), sa.slice(k).get(c, col)));
                            }
                        }
                        if col < i {
                            for c in 0..i {
                                v = f.sub(v, f.mul(bt.slice(k).get(r, c), mmi.get(c, col)));
                            }
                        }
                        rhs.set((k * n + r) * n + col, mi, f.neg(v));
                    }
                }
            }
        }
        let (particular, kernel) = match solve_columns(&coef, &rhs)? {
            None => continue,
            Some(s) => s,
        };
        check_budget(
            "structural oracle kernel",
            (p as u128).saturating_pow(kernel.len() as u32),
            budget,
        )?;
        for (mi, part) in particular.iter().enumerate() {
            let Some(part) = part else { continue };
            let found = affine_points(f, part, &kernel).find_map(|sol| {
                let mut x = Mat::zeros(f, n, n);
                let mut s = Mat::zeros(f, n, n);
                x.set_block(0, 0, &mons[mi].transpose());
                s.set_block(0, 0, &minv[mi]);
                for r in i..n {
                    for c in i..n {
                        x.set(r, c, sol[xv(r, c)]);
                        s.set(r, c, sol[sv(r, c)]);
                    }
                }
                let pm = x.transpose();
                if !s.mul(&pm).is_identity() {
                    return None;
                }
                let moved = sa.transform(&pm, &pm).ok()?;
                let r = solve_mixing(&moved, &sb)?;
                Some(Witness::new(Tag::Isometry, vec![pm, r]))
            });
            if let Some(w) = found {
                return w.map(Some);
            }
        }
    }
    Ok(None)
}

/// Solves `coef·x = rhs_j` for every column `j` at once: the particular
/// solution per column (or `None` when inconsistent) and a kernel basis.
#[allow(clippy::type_complexity)]
fn solve_columns(coef: &Mat, rhs: &Mat) -> Result<Option<(Vec<Option<Vec<u32>>>, Vec<Vec<u32>>)>> {
    let nvars = coef.cols();
    let r = coef.hstack(rhs).rref();
    let pivots = r.pivots.clone();
    let rank_coef = pivots.iter().take_while(|&&c| c < nvars).count();
    let mut parts = Vec::with_capacity(rhs.cols());
    let mut any = false;
    for j in 0..rhs.cols() {
        let inconsistent = (rank_coef..r.mat.rows()).any(|row| r.mat.get(row, nvars + j) != 0);
        if inconsistent {
            parts.push(None);
            continue;
        }
        any = true;
        let mut x = vec![0u32; nvars];
        for (row, &c) in pivots.iter().take(rank_coef).enumerate() {
            x[c] = r.mat.get(row, nvars + j);
        }
        parts.push(Some(x));
    }
    if !any {
        return Ok(None);
    }
    let ker = coef.right_kernel();
    let kernel = (0..ker.rows()).map(|i| ker.row(i).to_vec()).collect();
    Ok(Some((parts, kernel)))
}

/// `part + Σ c_t·kernel_t` over all coefficient vectors, in counter order.
fn affine_points<'a>(f: GF, part: &'a [u32], kernel: &'a [Vec<u32>]) -> impl Iterator<Item = Vec<u32>> + 'a {
    let p = f.p() as u128;
    let total = p.pow(kernel.len() as u32);
    (0..total).map(move |mut code| {
        let mut x = part.to_vec();
        for k in kernel {
            let c = (code % p) as u32;
            code /= p;
            if c != 0 {
                for (xi, &ki) in x.iter_mut().zip(k) {
                    *xi = f.add(*xi, f.mul(c, ki));
                }
            }
        }
        x
    })
}

/// Counters gathered while searching.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct S2dStats {
    pub queries: usize,
    pub max_side: usize,
    /// Guesses tried at each step before one was accepted.
    pub guesses: Vec<usize>,
}

/// Nonzero vectors of `F^r` with leading entry 1, in counter order with the
/// first coordinate least significant, so `e_1` comes first.
fn projective_points(f: GF, r: usize) -> Vec<Vec<u32>> {
    let p = f.p() as u64;
    (1..p.pow(r as u32))
        .map(|mut code| {
            let mut v = vec![0u32; r];
            for x in v.iter_mut() {
                *x = (code % p) as u32;
                code /= p;
            }
            v
        })
        .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect()
}

/// The step transformation `[v | w_1 … w_{r−1}]`, where the `w` are
/// `u_j + φ_j·v` for the standard vectors `u_j` off the pivot of `v`. These
/// are the row-echelon representatives of all complements of `⟨v⟩`.
fn guess_matrix(f: GF, v: &[u32], mut phi: u64) -> Mat {
    let r = v.len();
    let pivot = v.iter().position(|&x| x != 0).expect("nonzero");
    let p = f.p() as u64;
    let mut t = Mat::zeros(f, r, r);
    for (row, &x) in v.iter().enumerate() {
        t.set(row, 0, x);
    }
    for (col, j) in (1..).zip((0..r).filter(|&j| j != pivot)) {
        let c = (phi % p) as u32;
        phi /= p;
        for (row, &x) in v.iter().enumerate() {
            t.set(row, col, f.mul(c, x));
        }
        t.set(j, col, f.add(t.get(j, col), 1));
    }
    t
}

pub fn find_isometry(
    a: &Tensor3,
    b: &Tensor3,
    oracle: &dyn DecisionOracle,
    budget: u128,
) -> Result<Option<Witness>> {
    Ok(find_isometry_with_stats(a, b, oracle, budget)?.0)
}

/// Fixes basis images one at a time: at step `i` tries every `v` in the
/// residual coordinates `i..n` with every complement of `⟨v⟩` there, and
/// keeps the first guess the oracle accepts at block size `i`. The final
/// monomial part is found by enumeration and the answer is verified.
pub fn find_isometry_with_stats(
    a: &Tensor3,
    b: &Tensor3,
    oracle: &dyn DecisionOracle,
    budget: u128,
) -> Result<(Option<Witness>, S2dStats)> {
    let (n, m) = expect_alternating(a)?;
    let mut stats = S2dStats::default();
    if expect_alternating(b)? != (n, m) || a.field() != b.field() {
        return Ok((None, stats));
    }
    let f = a.field();
    let p = f.p() as u128;
    let mut current = a.clone();
    let mut total = Mat::identity(f, n);
    for i in 1..n {
        let r = n - i + 1;
        let points = projective_points(f, r);
        let comps = (p as u64).pow(r as u32 - 1);
        let count = points.len() as u64 * comps;
        assert!(count as u128 <= p.pow(2 * n as u32), "guess count exceeds p^(2n)");
        let (side, _) = gadget_dims(n, m, i);
        assert!(side <= query_side_bound(n), "query side {side} exceeds 2n²+2n");
        let hit = (0..count).into_par_iter().find_map_first(|g| {
            let t = guess_matrix(f, &points[(g / comps) as usize], g % comps);
            let step = Mat::block_diag(f, &[&Mat::identity(f, i - 1), &t]);
            let moved = match current.frontal().transform(&step, &step) {
                Ok(s) => Tensor3::from_frontal(&s),
                Err(e) => return Some(Err(e)),
            };
            match oracle.query(&Query { a: &moved, b, i }) {
                Ok(true) => Some(Ok((g, step, moved))),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            }
        });
        stats.max_side = stats.max_side.max(side);
        match hit {
            Some(Ok((g, step, moved))) => {
                stats.queries += g as usize + 1;
                stats.guesses.push(g as usize + 1);
                total = total.mul(&step);
                current = moved;
            }
            Some(Err(e)) => return Err(e),
            None => {
                stats.queries += count as usize;
                stats.guesses.push(count as usize);
                if i == 1 {
                    return Ok((None, stats));
                }
                return Err(Error::OracleInconsistent {
                    step: i,
                    detail: format!("all {count} guesses rejected after step {} was accepted", i - 1),
                });
            }
        }
    }
    let mons = enumerate_monomial(n, f, budget)?;
    let (sc, sb) = (current.frontal(), b.frontal());
    let finish = mons.par_iter().find_map_first(|mm| {
        let pm = mm.to_mat();
        let r = solve_mixing(&sc.transform(&pm, &pm).ok()?, &sb)?;
        Some((pm, r))
    });
    let Some((pm, r)) = finish else {
        if n == 1 {
            return Ok((None, stats));
        }
        return Err(Error::OracleInconsistent {
            step: n,
            detail: "no monomial isometry after all steps were accepted".into(),
        });
    };
    let w = Witness::new(Tag::Isometry, vec![total.mul(&pm), r])?;
    let (ia, ib) = (Instance::Tensor3(a.clone()), Instance::Tensor3(b.clone()));
    if !verify_witness(Tag::Isometry, &ia, &ib, &w)? {
        return Err(Error::OracleInconsistent {
            step: n,
            detail: "assembled isometry fails verification".into(),
        });
    }
    Ok((Some(w), stats))
}

/// An isomorphism `G → H` as images of the generators of `G`, via the
/// commutator maps: an isometry of the maps lifts to an isomorphism of the
/// Lie algebras of logarithms, which `exp` carries back to the groups.
pub fn find_group_isomorphism(
    g: &MatrixGroupGens,
    h: &MatrixGroupGens,
    oracle: &dyn DecisionOracle,
    budget: u128,
) -> Result<Option<Vec<Mat>>> {
    if g.field() != h.field() {
        return Ok(None);
    }
    let f = g.field();
    let (ag, ah) = (baer_alt(g)?, baer_alt(h)?);
    if ag.quotient.len() != ah.quotient.len() || ag.derived.len() != ah.derived.len() {
        return Ok(None);
    }
    let (tg, th) = (Tensor3::from_frontal(&ag.map), Tensor3::from_frontal(&ah.map));
    let iso = if ag.quotient.is_empty() || ag.derived.is_empty() {
        // abelian: any basis matching works
        let m = ag.derived.len().max(1);
        Some(Witness::new(
            Tag::Isometry,
            vec![Mat::identity(f, ag.quotient.len()), Mat::identity(f, m)],
        )?)
    } else {
        find_isometry(&th, &tg, oracle, budget)?
    };
    let Some(w) = iso else { return Ok(None) };
    let (pm, rinv) = (&w.mats[0], w.mats[1].inverse()?);
    let size = h.size();
    let combo = |coeffs: &dyn Fn(usize) -> u32, mats: &[Mat]| {
        mats.iter().enumerate().fold(Mat::zeros(f, size, size), |acc, (k, x)| {
            acc.add(&x.scale(coeffs(k)))
        })
    };
    let xs: Vec<Mat> = (0..ag.quotient.len())
        .map(|a| combo(&|i| pm.get(i, a), &ah.quotient))
        .collect();
    let zs: Vec<Mat> = if ag.quotient.is_empty() || ag.derived.is_empty() {
        ah.derived.clone()
    } else {
        (0..ag.derived.len())
            .map(|c| combo(&|k| rinv.get(c, k), &ah.derived))
            .collect()
    };
    let mut src = ag.quotient.clone();
    src.extend(ag.derived.iter().cloned());
    let mut dst = xs;
    dst.extend(zs);
    let flat: Vec<Vec<u32>> = src.iter().map(Mat::flatten).collect();
    let space = VecSpace::new(f, g.size() * g.size(), &flat);
    let phi = |x: &Mat| -> Result<Mat> {
        let c = space
            .coords(&matrix_log(x)?.flatten())
            .ok_or_else(|| Error::Relation("logarithm outside the Lie algebra".into()))?;
        let y = dst
            .iter()
            .zip(&c)
            .fold(Mat::zeros(f, size, size), |acc, (d, &ci)| acc.add(&d.scale(ci)));
        matrix_exp(&y)
    };
    let images = g.gens().iter().map(&phi).collect::<Result<Vec<_>>>()?;
    for (s, x) in g.gens().iter().enumerate() {
        for (t, y) in g.gens().iter().enumerate() {
            if phi(&x.mul(y))? != images[s].mul(&images[t]) {
                return Err(Error::Relation(format!(
                    "map does not respect the product of generators {s} and {t}"
                )));
            }
        }
    }
    let logs = images.iter().map(matrix_log).collect::<Result<Vec<_>>>()?;
    if lie_closure(f, size, &logs)?.dim() != ah.lie.dim() {
        return Err(Error::Relation("images do not generate the target group".into()));
    }
    Ok(Some(images))
}

/// Alternating tuple from frontal slices, for tests and the CLI.
pub fn tensor_from_slices(f: GF, n: usize, slices: Vec<Mat>) -> Result<Tensor3> {
    Ok(Tensor3::from_frontal(&MatrixTuple::new(f, n, n, slices)?))
}
