//! The acceptance suite: one check per criterion, each producing a single
//! pass/fail line. Shared by the `selftest` command and the acceptance test
//! target. Every check is a pure function of its seed.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::AlgebraSC;
use crate::error::Result;
use crate::form::{monomials, FormD};
use crate::gf::GF;
use crate::graph::{Digraph, Graph};
use crate::io::{emit, Object};
use crate::matspace::{
    enumerate_gl, enumerate_monomial, permutations, random_gl, random_mat, random_monomial, Mat,
    MatrixTuple,
};
use crate::oracle::{
    decide_3ti_smart, decide_code_monomial, decide_graph_iso, decide_isometry,
    decide_pseudo_isometry, random_alternating,
};
use crate::groupcorr::{baer_alt, baer_group, matrix_exp, matrix_log, nilpotency_class};
use crate::reductions::{
    by_name, cubic_to_degree_d, dti_algebra_dim, dti_dimension_formula,
    dti_to_algebra, graph_to_altspace, grigoriev_graph_algebra, grigoriev_reconstruct,
    instance_dims, lateral_ranks, moncode_to_3ti, ti3_to_alt_isometry, ti3_to_conjugacy,
    ti3_to_sym_isometry, CubicToDegreeD, GraphToAltspace, MonomialGadget, Reduction, NAMES,
};
use crate::s2d::{find_isometry_with_stats, individualization_gadget, query_side_bound, StructuralOracle};
use crate::tensor::{Direction, Tensor3, TensorD};
use crate::witness::{act, verify_witness, Instance, Tag, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// Reduced trial counts, for smoke runs.
    Quick,
    /// The trial counts and sizes the criteria name.
    Full,
}

impl Level {
    fn trials(self, full: usize) -> usize {
        match self {
            Level::Quick => full.div_ceil(10).max(1),
            Level::Full => full,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {}: {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail
        )
    }
}

const PRIMES: [u32; 3] = [2, 3, 5];

fn nondegenerate_tensor(rng: &mut ChaCha8Rng, f: GF, max: usize) -> Tensor3 {
    loop {
        let d = [
            rng.gen_range(1..=max),
            rng.gen_range(1..=max),
            rng.gen_range(1..=max),
        ];
        let data = (0..d[0] * d[1] * d[2]).map(|_| rng.gen_range(0..f.p())).collect();
        let t = Tensor3::from_vec(f, d[0], d[1], d[2], data).expect("sized");
        if t.is_nondegenerate() {
            return t;
        }
    }
}

fn independent_alternating(rng: &mut ChaCha8Rng, f: GF, n: usize, m: usize) -> Tensor3 {
    loop {
        let t = random_alternating(rng, f, n, m);
        if t.frontal().span().generators_independent() {
            return t;
        }
    }
}

fn random_tensord(rng: &mut ChaCha8Rng, f: GF, dims: &[usize]) -> TensorD {
    let len = dims.iter().product();
    let data = (0..len).map(|_| rng.gen_range(0..f.p())).collect();
    TensorD::from_vec(f, dims, data).expect("sized")
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    Graph::new(n, &edges).expect("simple graph")
}

fn shuffled(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (0..n).collect();
    s.shuffle(rng);
    s
}

/// A reduction (with its parameter chosen for this trial), a source
/// instance and a source witness, at the sizes of criterion 1.
pub fn roundtrip_case(
    name: &str,
    rng: &mut ChaCha8Rng,
    f: GF,
) -> Result<(Box<dyn Reduction>, Instance, Witness)> {
    let gl = |rng: &mut ChaCha8Rng, n: usize| random_gl(rng, f, n);
    Ok(match name {
        "moncode-to-3ti" => {
            let d = rng.gen_range(2..=3);
            let n = rng.gen_range(d..=3);
            let code = loop {
                let c = random_mat(rng, f, d, n);
                if c.rank() == d {
                    break c;
                }
            };
            let w = Witness::moncode(gl(rng, d), &random_monomial(rng, f, n))?;
            (by_name(name, None)?, Instance::Code(code), w)
        }
        "3ti-to-alt-isometry"
        | "3ti-to-sym-isometry"
        | "3ti-to-conjugacy"
        | "3ti-to-conjugacy-unital" => {
            let t = nondegenerate_tensor(rng, f, 3);
            let [l, n, m] = t.dims();
            let w = Witness::new(Tag::Ti3, vec![gl(rng, l), gl(rng, n), gl(rng, m)])?;
            (by_name(name, None)?, Instance::Tensor3(t), w)
        }
        "isometry-to-algebra" | "isometry-to-trilinear" => {
            let n = rng.gen_range(2..=3);
            let m = rng.gen_range(1..=n * (n - 1) / 2);
            let t = independent_alternating(rng, f, n, m);
            let w = Witness::new(Tag::PseudoIsometry, vec![gl(rng, n), gl(rng, m)])?;
            (by_name(name, None)?, Instance::Tensor3(t), w)
        }
        "adjoin-unit" => {
            let n = rng.gen_range(1..=3);
            let sc = random_tensord(rng, f, &[n, n, n]).to_tensor3()?;
            let w = Witness::new(Tag::AlgebraIso, vec![gl(rng, n)])?;
            (by_name(name, None)?, Instance::Algebra(AlgebraSC::new(sc)?), w)
        }
        "dti-to-algebra" => {
            let d = rng.gen_range(3..=4);
            let dims: Vec<usize> = (0..d).map(|_| rng.gen_range(1..=3)).collect();
            let t = random_tensord(rng, f, &dims);
            let w = Witness::new(Tag::TiD, dims.iter().map(|&n| gl(rng, n)).collect())?;
            (by_name(name, None)?, Instance::TensorD(t), w)
        }
        "graph-to-altspace" => {
            let n = rng.gen_range(2..=4);
            let g = random_graph(rng, n);
            let w = Witness::graph(f, &shuffled(rng, n))?;
            (by_name(name, Some(f.p() as usize))?, Instance::Graph(g), w)
        }
        "monomial-gadget" => {
            let n = rng.gen_range(2..=3);
            let m = rng.gen_range(1..=3);
            let t = random_alternating(rng, f, n, m);
            let w = Witness::new(
                Tag::Isometry,
                vec![random_monomial(rng, f, n).to_mat(), gl(rng, m)],
            )?;
            (by_name(name, None)?, Instance::Tensor3(t), w)
        }
        "grigoriev" => {
            let n = rng.gen_range(1..=3);
            let weights = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(0..=2)).collect())
                .collect();
            let g = Digraph::from_weights(weights)?;
            let w = Witness::graph(f, &shuffled(rng, n))?;
            (by_name(name, Some(f.p() as usize))?, Instance::Digraph(g), w)
        }
        "cubic-to-degree-d" => {
            let n = rng.gen_range(1..=3);
            let d = rng.gen_range(3..=6);
            let form = FormD::random(rng, f, n, 3);
            let w = Witness::new(Tag::FormEq, vec![gl(rng, n)])?;
            (by_name(name, Some(d))?, Instance::Form(form), w)
        }
        "pad-d" => {
            let d = rng.gen_range(1..=3);
            let dims: Vec<usize> = (0..d).map(|_| rng.gen_range(1..=3)).collect();
            let t = random_tensord(rng, f, &dims);
            let w = Witness::new(Tag::TiD, dims.iter().map(|&n| gl(rng, n)).collect())?;
            let d_prime = d + rng.gen_range(0..=2);
            (by_name(name, Some(d_prime))?, Instance::TensorD(t), w)
        }
        other => {
            return Err(crate::error::Error::InvalidInput(format!(
                "no round-trip generator for `{other}`"
            )))
        }
    })
}

/// One round trip; `Err` carries a description of the first failure.
pub fn roundtrip_once(red: &dyn Reduction, a: &Instance, w: &Witness) -> std::result::Result<(), String> {
    let desc = red.descriptor();
    let run = || -> Result<std::result::Result<(), String>> {
        let b = act(a, w)?;
        let (ta, tb) = (red.construct(a)?, red.construct(&b)?);
        if red.target_dims(a)? != instance_dims(&ta) {
            return Ok(Err("target dimensions differ from the descriptor".into()));
        }
        let fw = red.witness_forward(a, w)?;
        if !verify_witness(desc.target, &ta, &tb, &fw)? {
            return Ok(Err("forward witness does not verify".into()));
        }
        let rec = red.witness_recover(a, &b, &fw)?;
        if !verify_witness(desc.source, a, &b, &rec)? {
            return Ok(Err("recovered witness does not verify".into()));
        }
        Ok(Ok(()))
    };
    match run() {
        Ok(r) => r,
        Err(e) => Err(e.to_string()),
    }
}

/// Criterion 1: forward and recovered witnesses verify for every reduction.
pub fn criterion_1(level: Level, seed: u64) -> Report {
    let trials = level.trials(200);
    let mut failures = Vec::new();
    for (ri, name) in NAMES.iter().enumerate() {
        let mut bad = 0;
        let mut first = None;
        for t in 0..trials {
            let p = PRIMES[t % PRIMES.len()];
            let f = GF::new(p).expect("prime");
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((ri as u64) << 32) ^ t as u64);
            let outcome = roundtrip_case(name, &mut rng, f)
                .map_err(|e| e.to_string())
                .and_then(|(red, a, w)| roundtrip_once(red.as_ref(), &a, &w));
            if let Err(e) = outcome {
                bad += 1;
                first.get_or_insert(format!("trial {t}, p={p}: {e}"));
            }
        }
        if bad > 0 {
            failures.push(format!("{name}: {bad}/{trials} failed ({})", first.unwrap()));
        }
    }
    Report {
        id: "1",
        title: "witness round-trips",
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{} reductions × {trials} trials, all verified", NAMES.len())
        } else {
            failures.join("; ")
        },
    }
}

fn report(id: &'static str, title: &'static str, failures: Vec<String>, ok: String) -> Report {
    Report {
        id,
        title,
        passed: failures.is_empty(),
        detail: if failures.is_empty() { ok } else { format!("{}; otherwise {ok}", failures.join("; ")) },
    }
}

/// Whether two labelings induce the same partition of the index set:
/// `a[i] == a[j] ⟺ b[i] == b[j]` for every pair. Returns the number of
/// disagreeing pairs.
fn partition_mismatches<A: PartialEq, B: PartialEq>(a: &[A], b: &[B]) -> usize {
    let mut bad = 0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            if (a[i] == a[j]) != (b[i] == b[j]) {
                bad += 1;
            }
        }
    }
    bad
}

/// Lexicographically least image of `t` under GL³.
fn canonical_tensor3(t: &Tensor3, gls: [&[Mat]; 3]) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for x in gls[0] {
        for y in gls[1] {
            for z in gls[2] {
                let d = t.act3(x, y, z).expect("sizes match").data().to_vec();
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
        }
    }
    best.unwrap_or_default()
}

fn span_key(t: &MatrixTuple) -> Vec<Vec<u32>> {
    t.span().echelon().to_vec()
}

/// Least echelon form of `span(XᵗS_kY)` over the given `(X, Y)` pairs.
fn canonical_span(t: &MatrixTuple, moves: &[(Mat, Mat)]) -> Vec<Vec<u32>> {
    moves
        .par_iter()
        .map(|(x, y)| span_key(&t.transform(x, y).expect("sizes match")))
        .min()
        .unwrap_or_default()
}

fn form_key(form: &FormD) -> Vec<u32> {
    monomials(form.nvars(), form.degree())
        .iter()
        .map(|e| form.coeff(e))
        .collect()
}

/// Least coefficient vector over all substitutions, with the matrix that
/// reaches it.
fn canonical_form(form: &FormD, gl: &[Mat]) -> (Vec<u32>, Mat) {
    gl.par_iter()
        .map(|a| (form_key(&form.substitute(a).expect("square")), a.clone()))
        .min_by(|x, y| x.0.cmp(&y.0))
        .expect("nonempty group")
}

fn criterion_2a(failures: &mut Vec<String>) -> String {
    let f = GF::new(2).expect("prime");
    let gl2: Vec<Mat> = enumerate_gl(2, f, u128::MAX).expect("small").collect();
    let gl4: Vec<(Mat, Mat)> = enumerate_gl(4, f, u128::MAX)
        .expect("small")
        .map(|p| (p.inverse().expect("invertible").transpose(), p))
        .collect();
    let tensors: Vec<Tensor3> = (0u32..256)
        .map(|code| {
            let data = (0..8).map(|b| code >> b & 1).collect();
            Tensor3::from_vec(f, 2, 2, 2, data).expect("sized")
        })
        .filter(Tensor3::is_nondegenerate)
        .collect();
    let src: Vec<Vec<u32>> = tensors
        .iter()
        .map(|t| canonical_tensor3(t, [&gl2, &gl2, &gl2]))
        .collect();
    let mut pairs = 0;
    for unital in [false, true] {
        let tgt: Vec<Vec<Vec<u32>>> = tensors
            .iter()
            .map(|t| canonical_span(&ti3_to_conjugacy(t, unital).expect("nondegenerate"), &gl4))
            .collect();
        let bad = partition_mismatches(&src, &tgt);
        pairs += tensors.len() * tensors.len();
        if bad > 0 {
            failures.push(format!("(a) unital={unital}: {bad} pairs disagree"));
        }
    }
    format!("(a) {} nondegenerate arrays, {pairs} pairs", tensors.len())
}

fn criterion_2b(failures: &mut Vec<String>, budget: u128) -> String {
    let f = GF::new(2).expect("prime");
    let codes: Vec<Mat> = enumerate_gl(2, f, u128::MAX).expect("small").collect();
    let mut pairs = 0;
    for a in &codes {
        for b in &codes {
            let src = decide_code_monomial(a, b, budget).map(|w| w.is_some());
            let tgt = decide_3ti_smart(
                &moncode_to_3ti(a).expect("full rank"),
                &moncode_to_3ti(b).expect("full rank"),
                budget,
            )
            .map(|w| w.is_some());
            pairs += 1;
            match (src, tgt) {
                (Ok(x), Ok(y)) if x == y => {}
                (x, y) => failures.push(format!("(b) codes {:?} {:?}: {x:?} vs {y:?}", a.data(), b.data())),
            }
        }
    }
    format!("(b) {pairs} code pairs")
}

/// Source classes by brute force over GL(2,3); target classes of one
/// representative per source class by brute force over GL(3,3); every other
/// target is tied to its representative by a verified forward witness.
fn criterion_2c(failures: &mut Vec<String>) -> String {
    let f = GF::new(3).expect("prime");
    let red = CubicToDegreeD { d: 4 };
    let gl2: Vec<Mat> = enumerate_gl(2, f, u128::MAX).expect("small").collect();
    let gl3: Vec<Mat> = enumerate_gl(3, f, u128::MAX).expect("small").collect();
    let mons = monomials(2, 3);
    let forms: Vec<FormD> = (0..81u32)
        .map(|mut code| {
            let mut form = FormD::zero(f, 2, 3);
            for e in &mons {
                form.add_term(e, code % 3).expect("valid");
                code /= 3;
            }
            form
        })
        .collect();
    let canon: Vec<(Vec<u32>, Mat)> = forms.iter().map(|g| canonical_form(g, &gl2)).collect();
    let mut reps: Vec<(Vec<u32>, usize)> = Vec::new();
    for (i, (key, _)) in canon.iter().enumerate() {
        if !reps.iter().any(|(k, _)| k == key) {
            reps.push((key.clone(), i));
        }
    }
    let rep_target: Vec<Vec<u32>> = reps
        .iter()
        .map(|&(_, i)| canonical_form(&cubic_to_degree_d(&forms[i], 4).expect("cubic"), &gl3).0)
        .collect();
    let mut distinct = rep_target.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != reps.len() {
        failures.push(format!(
            "(c) {} source classes map to {} target classes",
            reps.len(),
            distinct.len()
        ));
    }
    // each form reaches its class key; the representative reaches it too, so
    // compose the two substitutions into a witness form → representative
    for (i, g) in forms.iter().enumerate() {
        let (key, a) = &canon[i];
        let r = reps.iter().find(|(k, _)| k == key).expect("listed").1;
        let ar = &canon[r].1;
        let w = Witness::new(Tag::FormEq, vec![a.mul(&ar.inverse().expect("invertible"))])
            .expect("square");
        let (src, dst) = (Instance::Form(g.clone()), Instance::Form(forms[r].clone()));
        let ok = verify_witness(Tag::FormEq, &src, &dst, &w).unwrap_or(false)
            && red.witness_forward(&src, &w).and_then(|fw| {
                let (ta, tb) = (red.construct(&src)?, red.construct(&dst)?);
                verify_witness(Tag::FormEq, &ta, &tb, &fw)
            }) == Ok(true);
        if !ok {
            failures.push(format!("(c) form {i}: witness to its representative fails"));
        }
    }
    format!("(c) 81 cubics, {} classes", reps.len())
}

fn graph_key(g: &Graph) -> Vec<(usize, usize)> {
    permutations(g.n())
        .iter()
        .map(|s| {
            let mut e: Vec<_> = g.relabel(s).edges().collect();
            e.sort();
            e
        })
        .min()
        .unwrap_or_default()
}

fn criterion_2d(failures: &mut Vec<String>, budget: u128) -> String {
    let mut pairs = 0;
    let mut round_trips = 0;
    for p in [2u32, 3] {
        let f = GF::new(p).expect("prime");
        let to_alt = GraphToAltspace { field: f };
        let gadget = MonomialGadget;
        for n in 2..=4 {
            let graphs = Graph::all(n);
            let mons: Vec<(Mat, Mat)> = enumerate_monomial(n, f, u128::MAX)
                .expect("small")
                .into_iter()
                .map(|m| (m.to_mat(), m.to_mat()))
                .collect();
            let src: Vec<_> = graphs.iter().map(graph_key).collect();
            let tgt: Vec<_> = graphs
                .iter()
                .map(|g| canonical_span(&graph_to_altspace(f, g), &mons))
                .collect();
            let bad = partition_mismatches(&src, &tgt);
            pairs += graphs.len() * graphs.len();
            if bad > 0 {
                failures.push(format!("(d) p={p} n={n}: {bad} pairs disagree"));
            }
            for (i, g) in graphs.iter().enumerate() {
                for (j, h) in graphs.iter().enumerate() {
                    if src[i] != src[j] {
                        continue;
                    }
                    let run = || -> Result<bool> {
                        let sigma = decide_graph_iso(g, h, budget)?
                            .ok_or_else(|| crate::Error::InvalidInput("no isomorphism".into()))?;
                        let w = Witness::graph(f, &sigma)?;
                        let (gi, hi) = (Instance::Graph(g.clone()), Instance::Graph(h.clone()));
                        let (ag, ah) = (to_alt.construct(&gi)?, to_alt.construct(&hi)?);
                        let w1 = to_alt.witness_forward(&gi, &w)?;
                        let w2 = gadget.witness_forward(&ag, &w1)?;
                        let (tg, th) = (gadget.construct(&ag)?, gadget.construct(&ah)?);
                        if !verify_witness(Tag::Isometry, &tg, &th, &w2)? {
                            return Ok(false);
                        }
                        let r1 = gadget.witness_recover(&ag, &ah, &w2)?;
                        let r0 = to_alt.witness_recover(&gi, &hi, &r1)?;
                        verify_witness(Tag::GraphIso, &gi, &hi, &r0)
                    };
                    round_trips += 1;
                    if run() != Ok(true) {
                        failures.push(format!("(d) p={p} n={n}: graphs {i},{j} round trip fails"));
                    }
                }
            }
        }
    }
    format!("(d) {pairs} graph pairs, {round_trips} gadget round trips")
}

/// Criterion 2: reduction decisions equal brute-force decisions on every
/// pair of the small exhaustive families.
pub fn criterion_2(budget: u128) -> Report {
    let mut failures = Vec::new();
    let parts = [
        criterion_2a(&mut failures),
        criterion_2b(&mut failures, budget),
        criterion_2c(&mut failures),
        criterion_2d(&mut failures, budget),
    ];
    report("2", "exhaustive iff-soundness", failures, parts.join(", "))
}

fn lateral_combo(t: &Tensor3, v: &[u32]) -> Mat {
    t.slices(Direction::Lateral).combination(v)
}

/// Random vector that is nonzero somewhere in `must` and zero outside
/// `allowed`.
fn vector_in(rng: &mut ChaCha8Rng, f: GF, len: usize, allowed: &[usize], must: &[usize]) -> Vec<u32> {
    loop {
        let mut v = vec![0u32; len];
        for &i in allowed {
            v[i] = rng.gen_range(0..f.p());
        }
        if must.iter().any(|&i| v[i] != 0) {
            return v;
        }
    }
}

fn in_band(r: usize, lo: usize, hi: usize) -> bool {
    (lo..=hi).contains(&r)
}

fn check_isometry_gadget(
    rng: &mut ChaCha8Rng,
    symmetric: bool,
    combos: usize,
    bad: &mut Vec<String>,
) {
    let f = GF::new(PRIMES[rng.gen_range(0..PRIMES.len())]).expect("prime");
    let t = loop {
        let t = nondegenerate_tensor(rng, f, 3);
        if t.dims()[0] <= t.dims()[1] {
            break t;
        }
    };
    let [l, n, _] = t.dims();
    let out = if symmetric { ti3_to_sym_isometry(&t) } else { ti3_to_alt_isometry(&t) }
        .expect("nondegenerate");
    let big = Tensor3::from_frontal(&out);
    let side = big.dims()[0];
    let name = if symmetric { "sym" } else { "alt" };
    for (j, r) in lateral_ranks(&big).into_iter().enumerate() {
        let ok = if j < l {
            in_band(r, 2 * n + 1, 3 * n + 1)
        } else if j < l + n {
            in_band(r, 4 * n + 2, 5 * n + 2)
        } else {
            r <= n
        };
        if !ok {
            bad.push(format!("{name} {l}×{n}: lateral slice {j} has rank {r}"));
        }
    }
    let u: Vec<usize> = (0..l).collect();
    let v: Vec<usize> = (l..l + n).collect();
    let gadget: Vec<usize> = (l + n..side).collect();
    let all: Vec<usize> = (0..side).collect();
    let v_and_gadget: Vec<usize> = (l..side).collect();
    for c in 0..combos {
        let (vec, lo, hi) = match c % 3 {
            0 => (vector_in(rng, f, side, &all, &u), 2 * n + 1, usize::MAX),
            1 => (vector_in(rng, f, side, &v_and_gadget, &v), 4 * n + 2, usize::MAX),
            _ => (vector_in(rng, f, side, &gadget, &gadget), 0, l + n),
        };
        let r = lateral_combo(&big, &vec).rank();
        if !in_band(r, lo, hi) {
            bad.push(format!("{name} {l}×{n}: combination of kind {} has rank {r}", c % 3));
        }
    }
}

fn check_moncode_gadget(rng: &mut ChaCha8Rng, combos: usize, bad: &mut Vec<String>) {
    let f = GF::new(PRIMES[rng.gen_range(0..PRIMES.len())]).expect("prime");
    let d = rng.gen_range(2..=3);
    let n = rng.gen_range(d..=4);
    let code = loop {
        let c = random_mat(rng, f, d, n);
        if c.rank() == d {
            break c;
        }
    };
    let t = moncode_to_3ti(&code).expect("full rank");
    for (j, r) in lateral_ranks(&t).into_iter().enumerate() {
        if !(2..=3).contains(&r) {
            bad.push(format!("moncode {d}×{n}: lateral slice {j} has rank {r}"));
        }
    }
    for _ in 0..combos {
        let v = loop {
            let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..f.p())).collect();
            if v.iter().filter(|&&x| x != 0).count() >= 2 {
                break v;
            }
        };
        let r = lateral_combo(&t, &v).rank();
        if r < 4 {
            bad.push(format!("moncode {d}×{n}: combination {v:?} has rank {r}"));
        }
    }
}

fn check_s2d_gadget(rng: &mut ChaCha8Rng, combos: usize, bad: &mut Vec<String>) {
    let f = GF::new(PRIMES[rng.gen_range(0..PRIMES.len())]).expect("prime");
    let n = rng.gen_range(2..=4);
    let m = rng.gen_range(1..=3);
    let i = rng.gen_range(1..n);
    let a = random_alternating(rng, f, n, m);
    let g = individualization_gadget(&a, i).expect("step in range");
    let side = g.dims()[0];
    for (j, r) in lateral_ranks(&g).into_iter().enumerate() {
        let ok = if j < i {
            (2 * n..3 * n).contains(&r)
        } else if j < n {
            (n..2 * n).contains(&r)
        } else {
            (1..n).contains(&r)
        };
        if !ok {
            bad.push(format!("s2d n={n} i={i}: lateral slice {j} has rank {r}"));
        }
    }
    let first: Vec<usize> = (0..i).collect();
    let rest: Vec<usize> = (i..n).collect();
    let gadget: Vec<usize> = (n..side).collect();
    let all: Vec<usize> = (0..side).collect();
    let tail: Vec<usize> = (i..side).collect();
    for c in 0..combos {
        let (vec, lo, hi) = match c % 3 {
            0 => (vector_in(rng, f, side, &all, &first), 2 * n, usize::MAX),
            1 => (vector_in(rng, f, side, &tail, &rest), n, usize::MAX),
            _ => (vector_in(rng, f, side, &gadget, &gadget), 1, n),
        };
        let r = lateral_combo(&g, &vec).rank();
        if !in_band(r, lo, hi) {
            bad.push(format!("s2d n={n} i={i}: combination of kind {} has rank {r}", c % 3));
        }
    }
}

/// Criterion 3: lateral-slice rank bands of every gadget, on single slices
/// and on random combinations.
pub fn criterion_3(level: Level, seed: u64) -> Report {
    let instances = level.trials(100);
    let combos = level.trials(100);
    let mut bad = Vec::new();
    for t in 0..instances as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3000 ^ t);
        check_isometry_gadget(&mut rng, false, combos, &mut bad);
        check_isometry_gadget(&mut rng, true, combos, &mut bad);
        check_moncode_gadget(&mut rng, combos, &mut bad);
        check_s2d_gadget(&mut rng, combos, &mut bad);
    }
    let total = bad.len();
    bad.truncate(5);
    if total > 5 {
        bad.push(format!("{total} violations in all"));
    }
    report(
        "3",
        "gadget rank profiles",
        bad,
        format!("4 constructions × {instances} instances × {combos} combinations, zero violations"),
    )
}

/// Criterion 4: dimension formula, associativity of the d-tensor algebras,
/// and reconstruction of digraphs from their radical-square-zero algebras.
pub fn criterion_4(level: Level, seed: u64) -> Report {
    let mut failures = Vec::new();
    let mut dims_list: Vec<Vec<usize>> = Vec::new();
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 1..=3 {
                dims_list.push(vec![a, b, c]);
            }
        }
    }
    dims_list.push(vec![2, 2, 2, 2]);
    let mut formula_off = Vec::new();
    let mut offset_is_chain_count = true;
    for (k, dims) in dims_list.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4000 ^ k as u64);
        let p = PRIMES[k % PRIMES.len()];
        let f = GF::new(p).expect("prime");
        let t = random_tensord(&mut rng, f, dims);
        let alg = match dti_to_algebra(&t) {
            Ok(a) => a,
            Err(e) => {
                failures.push(format!("{dims:?}: {e}"));
                continue;
            }
        };
        if alg.dim() != dti_algebra_dim(dims) {
            failures.push(format!("{dims:?}: built {} ≠ counted {}", alg.dim(), dti_algebra_dim(dims)));
        }
        let formula = dti_dimension_formula(dims);
        if alg.dim() != formula {
            formula_off.push(format!("{dims:?} {}≠{formula}", alg.dim()));
            offset_is_chain_count &= formula - alg.dim() == dims[..dims.len() - 1].iter().product::<usize>();
        }
        if !alg.is_associative() {
            failures.push(format!("{dims:?}: structure constants not associative"));
        }
    }
    if !formula_off.is_empty() {
        failures.push(format!(
            "closed formula disagrees on {}/{} shapes (e.g. {}); the difference {} the number of full-length chains, which the defining relation rewrites as combinations of the x_d arrows",
            formula_off.len(),
            dims_list.len(),
            formula_off[0],
            if offset_is_chain_count { "is exactly" } else { "is not" }
        ));
    }
    let f = GF::new(2).expect("prime");
    let mut digraphs = 0;
    let graphs = (1..=3).flat_map(|n| Digraph::all(n, if level == Level::Quick && n == 3 { 1 } else { 2 }));
    for g in graphs {
        digraphs += 1;
        let alg = grigoriev_graph_algebra(f, &g);
        let dim = alg.dim();
        let unit = |i: usize| (0..dim).map(|j| u32::from(i == j)).collect::<Vec<u32>>();
        let idem: Vec<_> = (0..g.n()).map(unit).collect();
        let rad: Vec<_> = (g.n()..dim).map(unit).collect();
        if grigoriev_reconstruct(&alg, &idem, &rad) != g {
            failures.push(format!("digraph {:?} not reconstructed", g.weights()));
        }
    }
    report(
        "4",
        "path-algebra checks",
        failures,
        format!(
            "{} shapes: built dimension = path count, associative; {digraphs} digraphs reconstructed",
            dims_list.len()
        ),
    )
}

/// Criterion 5: Baer groups by enumeration, the commutator map round trip,
/// and `exp∘log` on unitriangular matrices.
pub fn criterion_5(level: Level, seed: u64, budget: u128) -> Report {
    let mut failures = Vec::new();
    let reps = level.trials(3);
    let mut groups = 0;
    for p in [3u32, 5] {
        let f = GF::new(p).expect("prime");
        for n in 2..=4usize {
            for m in 1..=(n * (n - 1) / 2).min(5 - n) {
                for r in 0..reps as u64 {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5000 ^ (p as u64) << 8 ^ (n as u64) << 4 ^ (m as u64) << 12 ^ r << 16);
                    let a = independent_alternating(&mut rng, f, n, m);
                    let run = || -> Result<Option<String>> {
                        let g = baer_group(&a.frontal())?;
                        let elems = g.elements(budget)?;
                        let order = (p as usize).pow((n + m) as u32);
                        if elems.len() != order {
                            return Ok(Some(format!("order {} ≠ {order}", elems.len())));
                        }
                        if !elems.iter().all(|x| x.pow(p as u64).is_identity()) {
                            return Ok(Some("exponent exceeds p".into()));
                        }
                        let class = nilpotency_class(&elems, g.gens());
                        if class != 2 {
                            return Ok(Some(format!("class {class}")));
                        }
                        if n <= 3 {
                            let alt = Tensor3::from_frontal(&baer_alt(&g)?.map);
                            if decide_pseudo_isometry(&a, &alt, budget)?.is_none() {
                                return Ok(Some("commutator map not pseudo-isometric to the input".into()));
                            }
                        }
                        Ok(None)
                    };
                    groups += 1;
                    match run() {
                        Ok(None) => {}
                        Ok(Some(msg)) => failures.push(format!("p={p} n={n} m={m}: {msg}")),
                        Err(e) => failures.push(format!("p={p} n={n} m={m}: {e}")),
                    }
                }
            }
        }
    }
    let mats = level.trials(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5555);
    for t in 0..mats {
        let f = GF::new(if t % 2 == 0 { 5 } else { 7 }).expect("prime");
        let size = rng.gen_range(1..=4);
        let mut g = Mat::identity(f, size);
        for i in 0..size {
            for j in i + 1..size {
                g.set(i, j, rng.gen_range(0..f.p()));
            }
        }
        let back = matrix_log(&g).and_then(|x| matrix_exp(&x));
        if back.as_ref() != Ok(&g) {
            failures.push(format!("exp∘log differs on {:?} over GF({})", g.data(), f.p()));
        }
    }
    report(
        "5",
        "Baer and Lazard correspondences",
        failures,
        format!("{groups} Baer groups enumerated, {mats} exp∘log round trips"),
    )
}

/// Criterion 6: search to decision with the structural oracle.
pub fn criterion_6(level: Level, seed: u64, budget: u128) -> Report {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    let oracle = StructuralOracle { budget };
    let positives = level.trials(50);
    let f3 = GF::new(3).expect("prime");
    let mut max_side = 0;
    for t in 0..positives as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6000 ^ t);
        let a = random_alternating(&mut rng, f3, 4, 2);
        let w = Witness::new(Tag::Isometry, vec![random_gl(&mut rng, f3, 4), random_gl(&mut rng, f3, 2)])
            .expect("square");
        let b = crate::witness::act_tensor3(&a, &w).expect("sizes match");
        match find_isometry_with_stats(&a, &b, &oracle, budget) {
            Ok((Some(found), stats)) => {
                max_side = max_side.max(stats.max_side);
                let ok = verify_witness(
                    Tag::Isometry,
                    &Instance::Tensor3(a.clone()),
                    &Instance::Tensor3(b.clone()),
                    &found,
                );
                if ok != Ok(true) {
                    failures.push(format!("pair {t}: returned witness does not verify"));
                }
            }
            Ok((None, _)) => failures.push(format!("pair {t}: no isometry found")),
            Err(e) => failures.push(format!("pair {t}: {e}")),
        }
    }
    let negatives = level.trials(20);
    let f2 = GF::new(2).expect("prime");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6666);
    let mut certified = 0;
    while certified < negatives {
        let a = random_alternating(&mut rng, f2, 3, 2);
        let b = random_alternating(&mut rng, f2, 3, 2);
        if !matches!(decide_isometry(&a, &b, budget), Ok(None)) {
            continue;
        }
        certified += 1;
        match find_isometry_with_stats(&a, &b, &oracle, budget) {
            Ok((None, stats)) => max_side = max_side.max(stats.max_side),
            Ok((Some(_), _)) => failures.push(format!("negative pair {certified}: isometry claimed")),
            Err(e) => failures.push(format!("negative pair {certified}: {e}")),
        }
    }
    if max_side > query_side_bound(4) {
        failures.push(format!("query side {max_side} exceeds 2n²+2n"));
    }
    if start.elapsed() > std::time::Duration::from_secs(300) {
        failures.push("wall clock above 5 minutes".into());
    }
    report(
        "6",
        "search to decision",
        failures,
        format!(
            "{positives}/{positives} isometries found and verified, {negatives}/{negatives} certified negatives rejected, largest query side {max_side} ≤ {}",
            query_side_bound(4)
        ),
    )
}

/// Files written by one pass of the suite: for every reduction a source
/// instance, its image, the forward witness and the recovered witness, plus
/// one search-to-decision witness. Named `<reduction>.<role>`.
pub fn artifacts(seed: u64, budget: u128) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut push = |name: String, body: Result<String>| {
        out.push((name, body.unwrap_or_else(|e| format!("# error: {e}\n"))));
    };
    for (ri, name) in NAMES.iter().enumerate() {
        let f = GF::new(PRIMES[ri % PRIMES.len()]).expect("prime");
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7000 ^ ri as u64);
        let case = roundtrip_case(name, &mut rng, f);
        let Ok((red, a, w)) = case else {
            push(format!("{name}.source"), case.map(|_| String::new()));
            continue;
        };
        let desc = red.descriptor();
        push(format!("{name}.source"), Ok(emit(&Object::from_instance(desc.source, &a))));
        push(
            format!("{name}.target"),
            red.construct(&a).map(|t| emit(&Object::from_instance(desc.target, &t))),
        );
        let fw = red.witness_forward(&a, &w);
        push(format!("{name}.forward"), fw.clone().map(|w| emit(&Object::Witness(w))));
        let rec = fw.and_then(|fw| red.witness_recover(&a, &act(&a, &w)?, &fw));
        push(format!("{name}.recovered"), rec.map(|w| emit(&Object::Witness(w))));
    }
    let f3 = GF::new(3).expect("prime");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7777);
    let a = random_alternating(&mut rng, f3, 3, 2);
    let found = Witness::new(Tag::Isometry, vec![random_gl(&mut rng, f3, 3), random_gl(&mut rng, f3, 2)])
        .and_then(|w| crate::witness::act_tensor3(&a, &w))
        .and_then(|b| find_isometry_with_stats(&a, &b, &StructuralOracle { budget }, budget));
    push(
        "s2d.witness".into(),
        found.map(|(w, stats)| {
            let body = w.map_or("# none\n".into(), |w| emit(&Object::Witness(w)));
            format!("# queries {} max side {}\n{body}", stats.queries, stats.max_side)
        }),
    );
    out
}

/// Criteria 1 to 6 in order.
pub fn run_criteria(level: Level, seed: u64, budget: u128) -> Vec<Report> {
    vec![
        criterion_1(level, seed),
        criterion_2(budget),
        criterion_3(level, seed),
        criterion_4(level, seed),
        criterion_5(level, seed, budget),
        criterion_6(level, seed, budget),
    ]
}

/// The whole suite. Criteria 1 to 6 and the artifacts are produced twice,
/// the second time on a three-thread pool, and criterion 7 compares the
/// two passes byte for byte. Returns the first pass's reports with
/// criterion 7 appended, and the first pass's artifacts.
pub fn run_all(level: Level, seed: u64, budget: u128) -> (Vec<Report>, Vec<(String, String)>) {
    let pass = || {
        let reports = run_criteria(level, seed, budget);
        let log: String = reports.iter().map(|r| format!("{r}\n")).collect();
        (reports, log, artifacts(seed, budget))
    };
    let (mut reports, log1, art1) = pass();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build();
    let (_, log2, art2) = match pool {
        Ok(pool) => pool.install(pass),
        Err(_) => pass(),
    };
    reports.push(determinism_report(&log1, &log2, &art1, &art2));
    (reports, art1)
}

/// Criterion 7 from two passes of the suite.
pub fn determinism_report(
    log1: &str,
    log2: &str,
    art1: &[(String, String)],
    art2: &[(String, String)],
) -> Report {
    let mut failures = Vec::new();
    if log1 != log2 {
        let line = log1.lines().zip(log2.lines()).position(|(a, b)| a != b);
        failures.push(format!("logs differ at line {}", line.map_or(0, |l| l + 1)));
    }
    if art1.len() != art2.len() {
        failures.push(format!("{} vs {} artifacts", art1.len(), art2.len()));
    }
    for ((n1, b1), (n2, b2)) in art1.iter().zip(art2) {
        if n1 != n2 || b1 != b2 {
            failures.push(format!("artifact {n1} differs"));
        }
    }
    let bytes: usize = art1.iter().map(|(_, b)| b.len()).sum::<usize>() + log1.len();
    report(
        "7",
        "determinism",
        failures,
        format!("two passes, {} log lines and {} artifacts ({bytes} bytes) identical", log1.lines().count(), art1.len()),
    )
}
