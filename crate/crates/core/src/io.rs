//! Plain-text object files: a header line naming the kind and its sizes,
//! then whitespace-separated integers. `#` starts a comment. Vertex indices
//! are 1-based in files and 0-based in memory.
//!
//! ```text
//! tensor3 l n m p          l·n·m entries, i slowest, k fastest
//! tensord d n1 .. nd p     ∏nᵢ entries, first index slowest
//! matspace n m p           m frontal n×n slices (also altspace, symspace)
//! code d n p               d×n generator matrix
//! graph n e                e lines `i j`
//! digraph n e              e lines `i j`, parallel arcs repeated
//! algebra n p              n³ constants A(i,j,k) of xᵢxⱼ = Σ A(i,j,k) x_k
//! formd n d p              lines `e1 .. en c`
//! group n m p              m generators, n×n each
//! witness tag p k n1 .. nk k square matrices of the given sizes
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use crate::algebra::AlgebraSC;
use crate::error::{Error, Result};
use crate::form::FormD;
use crate::gf::GF;
use crate::graph::{Digraph, Graph};
use crate::groupcorr::MatrixGroupGens;
use crate::matspace::Mat;
use crate::tensor::{Tensor3, TensorD};
use crate::witness::{Instance, Tag, Witness};

/// Which header a square matrix tuple is written under. `Alt` and `Sym`
/// are checked on parsing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Mat,
    Alt,
    Sym,
}

impl SpaceKind {
    fn header(self) -> &'static str {
        match self {
            SpaceKind::Mat => "matspace",
            SpaceKind::Alt => "altspace",
            SpaceKind::Sym => "symspace",
        }
    }
}

/// Every object a file can hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Tensor3(Tensor3),
    TensorD(TensorD),
    /// An `n×n×m` array read as `m` square slices.
    Space(SpaceKind, Tensor3),
    Code(Mat),
    Graph(Graph),
    Digraph(Digraph),
    Algebra(AlgebraSC),
    Form(FormD),
    Group(MatrixGroupGens),
    Witness(Witness),
}

impl Object {
    /// The header keyword.
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Tensor3(_) => "tensor3",
            Object::TensorD(_) => "tensord",
            Object::Space(k, _) => k.header(),
            Object::Code(_) => "code",
            Object::Graph(_) => "graph",
            Object::Digraph(_) => "digraph",
            Object::Algebra(_) => "algebra",
            Object::Form(_) => "formd",
            Object::Group(_) => "group",
            Object::Witness(_) => "witness",
        }
    }

    /// Wraps an instance under the header natural for problem `tag`:
    /// square tuples of the matrix-space problems become spaces, flagged
    /// alternating or symmetric when every slice is.
    pub fn from_instance(tag: Tag, a: &Instance) -> Object {
        match a {
            Instance::Tensor3(t) => {
                let [l, n, _] = t.dims();
                let spacey = matches!(tag, Tag::Isometry | Tag::PseudoIsometry | Tag::Conjugacy);
                if !spacey || l != n {
                    return Object::Tensor3(t.clone());
                }
                let fr = t.frontal();
                let kind = if tag == Tag::Conjugacy {
                    SpaceKind::Mat
                } else if fr.is_alternating() {
                    SpaceKind::Alt
                } else if fr.is_symmetric() {
                    SpaceKind::Sym
                } else {
                    SpaceKind::Mat
                };
                Object::Space(kind, t.clone())
            }
            Instance::TensorD(t) => Object::TensorD(t.clone()),
            Instance::Algebra(x) => Object::Algebra(x.clone()),
            Instance::Form(x) => Object::Form(x.clone()),
            Instance::Code(x) => Object::Code(x.clone()),
            Instance::Graph(x) => Object::Graph(x.clone()),
            Instance::Digraph(x) => Object::Digraph(x.clone()),
        }
    }

    pub fn into_instance(self) -> Result<Instance> {
        Ok(match self {
            Object::Tensor3(t) | Object::Space(_, t) => Instance::Tensor3(t),
            Object::TensorD(t) => Instance::TensorD(t),
            Object::Code(c) => Instance::Code(c),
            Object::Graph(g) => Instance::Graph(g),
            Object::Digraph(g) => Instance::Digraph(g),
            Object::Algebra(a) => Instance::Algebra(a),
            Object::Form(f) => Instance::Form(f),
            other => {
                return Err(Error::InvalidInput(format!(
                    "a {} file is not a problem instance",
                    other.kind()
                )))
            }
        })
    }
}

struct Token<'a> {
    line: usize,
    text: &'a str,
}

struct Reader<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    last_line: usize,
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Reader<'a> {
        let mut tokens = Vec::new();
        let mut last_line = 1;
        for (i, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("");
            for t in body.split_whitespace() {
                tokens.push(Token { line: i + 1, text: t });
            }
            last_line = i + 1;
        }
        Reader { tokens, pos: 0, last_line }
    }

    fn line(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.last_line, |t| t.line)
    }

    fn word(&mut self, what: &str) -> Result<&'a str> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.text)
            }
            None => perr(self.last_line, format!("missing {what}")),
        }
    }

    fn num<T: FromStr>(&mut self, what: &str) -> Result<T> {
        let line = self.line();
        let w = self.word(what)?;
        w.parse()
            .or_else(|_| perr(line, format!("{what}: `{w}` is not a non-negative integer")))
    }

    fn size(&mut self, what: &str) -> Result<usize> {
        self.num(what)
    }

    fn field(&mut self) -> Result<GF> {
        let line = self.line();
        let p: u32 = self.num("modulus")?;
        GF::new(p).or_else(|e| perr(line, e.to_string()))
    }

    fn entry(&mut self, f: GF) -> Result<u32> {
        let line = self.line();
        let v: u32 = self.num("entry")?;
        if v >= f.p() {
            return perr(line, format!("entry {v} is not below the modulus {}", f.p()));
        }
        Ok(v)
    }

    fn entries(&mut self, f: GF, count: usize) -> Result<Vec<u32>> {
        (0..count).map(|_| self.entry(f)).collect()
    }

    fn vertex(&mut self, n: usize) -> Result<usize> {
        let line = self.line();
        let v: usize = self.num("vertex")?;
        if v == 0 || v > n {
            return perr(line, format!("vertex {v} outside 1..={n}"));
        }
        Ok(v - 1)
    }

    fn matrix(&mut self, f: GF, rows: usize, cols: usize) -> Result<Mat> {
        let data = self.entries(f, rows * cols)?;
        Mat::from_vec(f, rows, cols, data).or_else(|e| perr(self.line(), e.to_string()))
    }

    fn done(&self) -> Result<()> {
        match self.tokens.get(self.pos) {
            None => Ok(()),
            Some(t) => perr(t.line, format!("unexpected extra token `{}`", t.text)),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }
}

/// Parses one object file.
pub fn parse(text: &str) -> Result<Object> {
    let mut r = Reader::new(text);
    let header_line = r.line();
    let at_header = |e: Error| Error::Parse { line: header_line, msg: e.to_string() };
    let kind = r.word("header")?;
    let obj = match kind {
        "tensor3" => {
            let (l, n, m) = (r.size("l")?, r.size("n")?, r.size("m")?);
            let f = r.field()?;
            let data = r.entries(f, l * n * m)?;
            Object::Tensor3(Tensor3::from_vec(f, l, n, m, data).map_err(at_header)?)
        }
        "tensord" => {
            let d = r.size("d")?;
            let dims = (0..d).map(|_| r.size("dimension")).collect::<Result<Vec<_>>>()?;
            let f = r.field()?;
            let data = r.entries(f, dims.iter().product())?;
            Object::TensorD(TensorD::from_vec(f, &dims, data).map_err(at_header)?)
        }
        "matspace" | "altspace" | "symspace" => {
            let kind = match kind {
                "matspace" => SpaceKind::Mat,
                "altspace" => SpaceKind::Alt,
                _ => SpaceKind::Sym,
            };
            let (n, m) = (r.size("n")?, r.size("m")?);
            let f = r.field()?;
            let mut t = Tensor3::zeros(f, n, n, m);
            for k in 0..m {
                let start = r.line();
                let a = r.matrix(f, n, n)?;
                let bad = match kind {
                    SpaceKind::Mat => None,
                    SpaceKind::Alt => (!a.is_alternating()).then_some("alternating"),
                    SpaceKind::Sym => (!a.is_symmetric()).then_some("symmetric"),
                };
                if let Some(prop) = bad {
                    return perr(start, format!("slice {} is not {prop}", k + 1));
                }
                for i in 0..n {
                    for j in 0..n {
                        t.set(i, j, k, a.get(i, j));
                    }
                }
            }
            Object::Space(kind, t)
        }
        "code" => {
            let (d, n) = (r.size("d")?, r.size("n")?);
            let f = r.field()?;
            Object::Code(r.matrix(f, d, n)?)
        }
        "graph" | "digraph" => {
            let (n, e) = (r.size("n")?, r.size("e")?);
            let mut edges = Vec::with_capacity(e);
            for _ in 0..e {
                let line = r.line();
                let (i, j) = (r.vertex(n)?, r.vertex(n)?);
                if kind == "graph" && (i == j || edges.contains(&(i.min(j), i.max(j)))) {
                    return perr(line, format!("edge {} {} is a loop or repeated", i + 1, j + 1));
                }
                edges.push(if kind == "graph" { (i.min(j), i.max(j)) } else { (i, j) });
            }
            if kind == "graph" {
                Object::Graph(Graph::new(n, &edges).map_err(at_header)?)
            } else {
                Object::Digraph(Digraph::new(n, &edges).map_err(at_header)?)
            }
        }
        "algebra" => {
            let n = r.size("n")?;
            let f = r.field()?;
            let data = r.entries(f, n * n * n)?;
            let sc = Tensor3::from_vec(f, n, n, n, data).map_err(at_header)?;
            Object::Algebra(AlgebraSC::new(sc).map_err(at_header)?)
        }
        "formd" => {
            let n = r.size("n")?;
            let d: u32 = r.num("degree")?;
            let f = r.field()?;
            let mut form = FormD::zero(f, n, d);
            while !r.at_end() {
                let line = r.line();
                let e = (0..n).map(|_| r.num("exponent")).collect::<Result<Vec<u32>>>()?;
                let c = r.entry(f)?;
                if e.iter().sum::<u32>() != d {
                    return perr(line, format!("exponents {e:?} do not sum to {d}"));
                }
                form.add_term(&e, c).or_else(|err| perr(line, err.to_string()))?;
            }
            Object::Form(form)
        }
        "group" => {
            let (n, m) = (r.size("n")?, r.size("m")?);
            let f = r.field()?;
            let gens = (0..m).map(|_| r.matrix(f, n, n)).collect::<Result<Vec<_>>>()?;
            Object::Group(MatrixGroupGens::new(f, n, gens).map_err(at_header)?)
        }
        "witness" => {
            let line = r.line();
            let tag: Tag = r.word("tag")?.parse().or_else(|e: Error| perr(line, e.to_string()))?;
            let f = r.field()?;
            let k = r.size("matrix count")?;
            let sizes = (0..k).map(|_| r.size("matrix size")).collect::<Result<Vec<_>>>()?;
            let mats = sizes.iter().map(|&s| r.matrix(f, s, s)).collect::<Result<Vec<_>>>()?;
            Object::Witness(Witness::new(tag, mats).map_err(at_header)?)
        }
        other => return perr(header_line, format!("unknown header `{other}`")),
    };
    r.done()?;
    Ok(obj)
}

fn push_row(out: &mut String, row: impl IntoIterator<Item = u32>) {
    let row: Vec<String> = row.into_iter().map(|v| v.to_string()).collect();
    out.push_str(&row.join(" "));
    out.push('\n');
}

fn push_matrix(out: &mut String, a: &Mat) {
    for i in 0..a.rows() {
        push_row(out, a.row(i).iter().copied());
    }
}

/// Writes an object in the format [`parse`] reads; `parse(&emit(x)) == x`.
pub fn emit(obj: &Object) -> String {
    let mut out = String::new();
    match obj {
        Object::Tensor3(t) => {
            let [l, n, m] = t.dims();
            let _ = writeln!(out, "tensor3 {l} {n} {m} {}", t.field().p());
            for row in t.data().chunks(m.max(1)) {
                push_row(&mut out, row.iter().copied());
            }
        }
        Object::TensorD(t) => {
            let dims: Vec<String> = t.dims().iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "tensord {} {} {}", t.order(), dims.join(" "), t.field().p());
            let last = t.dims().last().copied().unwrap_or(1).max(1);
            for row in t.data().chunks(last) {
                push_row(&mut out, row.iter().copied());
            }
        }
        Object::Space(kind, t) => {
            let [n, _, m] = t.dims();
            let _ = writeln!(out, "{} {n} {m} {}", kind.header(), t.field().p());
            for (k, a) in t.frontal().slices().iter().enumerate() {
                let _ = writeln!(out, "# slice {}", k + 1);
                push_matrix(&mut out, a);
            }
        }
        Object::Code(c) => {
            let _ = writeln!(out, "code {} {} {}", c.rows(), c.cols(), c.field().p());
            push_matrix(&mut out, c);
        }
        Object::Graph(g) => {
            let _ = writeln!(out, "graph {} {}", g.n(), g.edge_count());
            for (i, j) in g.edges() {
                let _ = writeln!(out, "{} {}", i + 1, j + 1);
            }
        }
        Object::Digraph(g) => {
            let _ = writeln!(out, "digraph {} {}", g.n(), g.arc_count());
            for (i, j) in g.arcs() {
                let _ = writeln!(out, "{} {}", i + 1, j + 1);
            }
        }
        Object::Algebra(a) => {
            let sc = a.structure_constants();
            let n = a.dim();
            let _ = writeln!(out, "algebra {n} {}", a.field().p());
            for row in sc.data().chunks(n.max(1)) {
                push_row(&mut out, row.iter().copied());
            }
        }
        Object::Form(f) => {
            let _ = writeln!(out, "formd {} {} {}", f.nvars(), f.degree(), f.field().p());
            for (e, &c) in f.terms() {
                push_row(&mut out, e.iter().copied().chain([c]));
            }
        }
        Object::Group(g) => {
            let _ = writeln!(out, "group {} {} {}", g.size(), g.gens().len(), g.field().p());
            for (k, a) in g.gens().iter().enumerate() {
                let _ = writeln!(out, "# generator {}", k + 1);
                push_matrix(&mut out, a);
            }
        }
        Object::Witness(w) => {
            let p = w.mats.first().map_or(2, |m| m.field().p());
            let sizes: Vec<String> = w.mats.iter().map(|m| m.rows().to_string()).collect();
            let _ = writeln!(out, "witness {} {p} {} {}", w.tag, w.mats.len(), sizes.join(" "));
            for a in &w.mats {
                let _ = writeln!(out, "#");
                push_matrix(&mut out, a);
            }
        }
    }
    out
}

pub fn read_file(path: &std::path::Path) -> Result<Object> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn write_file(path: &std::path::Path, obj: &Object) -> Result<()> {
    std::fs::write(path, emit(obj))
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::gen_instance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn roundtrip(obj: Object) {
        let text = emit(&obj);
        assert_eq!(parse(&text).unwrap(), obj, "{text}");
    }

    #[test]
    fn unit_tensor_parses() {
        let obj = parse("tensor3 1 1 1 2\n1\n").unwrap();
        let t = Tensor3::from_vec(GF::new(2).unwrap(), 1, 1, 1, vec![1]).unwrap();
        assert_eq!(obj, Object::Tensor3(t));
    }

    #[test]
    fn alternating_header_rejects_nonzero_diagonal() {
        let err = parse("altspace 2 1 3\n# slice\n1 1\n2 0\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, msg: "slice 1 is not alternating".into() });
        assert!(parse("altspace 2 1 3\n0 1\n2 0\n").is_ok());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("tensor3 1 1 2 3\n1\n", 2),
            ("tensor3 1 1 1 3\n\n 5\n", 3),
            ("tensor3 1 1 1 4\n1\n", 1),
            ("code 1 2 2\n1 1\n1\n", 3),
            ("graph 3 1\n1 4\n", 2),
            ("formd 2 2 3\n1 0 1\n", 2),
            ("blob 1\n", 1),
            ("# comment\n\ntensor3 1 x 1 2\n", 3),
        ];
        for (text, line) in cases {
            match parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn random_objects_roundtrip() {
        let shapes: [(Tag, Vec<usize>); 9] = [
            (Tag::Ti3, vec![2, 3, 2]),
            (Tag::Isometry, vec![3, 2]),
            (Tag::Conjugacy, vec![2, 2]),
            (Tag::TiD, vec![2, 1, 3, 2]),
            (Tag::MonCodeEq, vec![2, 4]),
            (Tag::GraphIso, vec![4]),
            (Tag::AlgebraIso, vec![2]),
            (Tag::FormEq, vec![2, 3]),
            (Tag::TrilinearEq, vec![2]),
        ];
        for seed in 0..100u64 {
            let (tag, dims) = &shapes[seed as usize % shapes.len()];
            let p = [2, 3, 5][seed as usize % 3];
            let a = gen_instance(*tag, dims, p, seed).unwrap();
            roundtrip(Object::from_instance(*tag, &a));
            let f = GF::new(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = crate::oracle::random_witness(&mut rng, *tag, &a, f).unwrap();
            roundtrip(Object::Witness(w));
        }
    }

    #[test]
    fn groups_and_digraphs_roundtrip() {
        let f = GF::new(3).unwrap();
        let mut t = Tensor3::zeros(f, 3, 3, 1);
        t.set(0, 1, 0, 1);
        t.set(1, 0, 0, 2);
        let g = crate::groupcorr::baer_group(&t.frontal()).unwrap();
        roundtrip(Object::Group(g));
        roundtrip(Object::Digraph(Digraph::new(3, &[(0, 1), (0, 1), (2, 2)]).unwrap()));
        roundtrip(Object::Space(SpaceKind::Sym, Tensor3::zeros(f, 2, 2, 2)));
    }
}
