//! Classical side: Chevalley bases, the r-matrix `pi = sum lambda_a e_a ^ f_a`,
//! the bivector `[e_beta, pi]` and the coisotropic subalgebra spanned by its legs.
//!
//! Every algebra is stored as structure constants over the ordered basis
//! `e_a (a > 0), h_1..h_n, f_a (a > 0)`. Types A-D come from explicit matrix
//! realizations, G2 from the triality folding of the so(8) matrices and E6 from
//! the bimultiplicative sign cocycle on its root lattice. For G2 and E6 the
//! non-simple root vectors are fixed greedily: `e_{a+a_i} = [e_a, e_{a_i}]` for
//! the first `i` giving a nonzero bracket, `f` mirrored with a sign and then
//! rescaled so that `[e_a, f_a]` is the coroot of `a`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::linalg;
use crate::rootsys::{Root, RootSystem, Series};

pub type Q = BigRational;

fn qi(a: i64) -> Q {
    Q::from_integer(BigInt::from(a))
}

/// Square matrix with rational entries.
pub type Mat = Vec<Vec<Q>>;

fn mat_zero(n: usize) -> Mat {
    vec![vec![Q::zero(); n]; n]
}

fn elem(n: usize, i: usize, j: usize, c: i64) -> Mat {
    let mut m = mat_zero(n);
    m[i][j] = qi(c);
    m
}

fn mat_add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

fn mat_scale(a: &Mat, c: &Q) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = mat_zero(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

pub fn mat_bracket(a: &Mat, b: &Mat) -> Mat {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

fn mat_is_zero(a: &Mat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

pub fn transpose(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

/// Coordinates over the algebra's basis.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct LieElement {
    pub coords: Vec<Q>,
}

impl LieElement {
    pub fn zero(dim: usize) -> Self {
        LieElement { coords: vec![Q::zero(); dim] }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[i] = Q::one();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        LieElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        LieElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        LieElement { coords: self.coords.iter().map(|a| a * c).collect() }
    }
}

/// Antisymmetric 2-tensor, stored as coefficients of `b_i ^ b_j` with `i < j`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Bivector {
    pub terms: BTreeMap<(usize, usize), Q>,
}

impl Bivector {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, i: usize, j: usize, c: Q) {
        if i == j || c.is_zero() {
            return;
        }
        let (k, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
        let e = self.terms.entry(k).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Add `c * a ^ b`.
    pub fn add_wedge(&mut self, a: &LieElement, b: &LieElement, c: &Q) {
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    self.add_term(i, j, c * x * y);
                }
            }
        }
    }

    pub fn wedge(a: &LieElement, b: &LieElement) -> Bivector {
        let mut w = Bivector::default();
        w.add_wedge(a, b, &Q::one());
        w
    }

    pub fn sub(&self, o: &Bivector) -> Bivector {
        let mut r = self.clone();
        for (&(i, j), c) in &o.terms {
            r.add_term(i, j, -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Bivector {
        Bivector { terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect() }
    }
}

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    pub rs: RootSystem,
    pub dim: usize,
    /// Basis indices of `e_a`, `h_i`, `f_a`; `e[k]` belongs to `rs.positive_roots[k]`.
    pub e: Vec<usize>,
    pub h: Vec<usize>,
    pub f: Vec<usize>,
    pub names: Vec<String>,
    /// `table[i][j]` = sparse coordinates of `[b_i, b_j]`.
    table: Vec<Vec<Vec<(usize, Q)>>>,
    /// Matrices of the basis elements when a realization exists.
    pub matrices: Option<Vec<Mat>>,
    /// Size of the matrices shown to users (so(8) for G2 is internal only).
    pub matrix_size: Option<usize>,
}

/// The standard Chevalley-type basis together with the algebra it lives in.
pub type ChevalleyBasis = LieAlgebra;

impl LieAlgebra {
    pub fn build(rs: &RootSystem) -> Result<LieAlgebra, String> {
        match rs.ty.series {
            Series::A | Series::B | Series::C | Series::D => Ok(build_classical(rs)),
            Series::G => Ok(build_g2(rs)),
            Series::E if rs.rank() == 6 => Ok(build_e6(rs)),
            _ => Err(format!("no classical realization for {}", rs.ty)),
        }
    }

    pub fn rank(&self) -> usize {
        self.h.len()
    }

    pub fn basis(&self, i: usize) -> LieElement {
        LieElement::basis(self.dim, i)
    }

    pub fn e_root(&self, r: &Root) -> LieElement {
        self.basis(self.e[self.rs.positive_index(&r.simple_decomp).expect("positive root")])
    }

    pub fn f_root(&self, r: &Root) -> LieElement {
        self.basis(self.f[self.rs.positive_index(&r.simple_decomp).expect("positive root")])
    }

    pub fn h_i(&self, i: usize) -> LieElement {
        self.basis(self.h[i])
    }

    /// Cartan element `sum c_i h_i`.
    pub fn cartan(&self, c: &[i64]) -> LieElement {
        let mut v = LieElement::zero(self.dim);
        for (i, ci) in c.iter().enumerate() {
            v.coords[self.h[i]] = qi(*ci);
        }
        v
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let mut out = vec![Q::zero(); self.dim];
        for (i, a) in x.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        LieElement { coords: out }
    }

    /// Killing form `tr(ad x ad y)`.
    pub fn killing(&self, x: &LieElement, y: &LieElement) -> Q {
        let mut t = Q::zero();
        for j in 0..self.dim {
            let v = self.bracket(x, &self.bracket(y, &self.basis(j)));
            t += &v.coords[j];
        }
        t
    }

    pub fn killing_lambda(&self, alpha: &Root) -> Result<Q, String> {
        let k = self.killing(&self.e_root(alpha), &self.f_root(alpha));
        if k.is_zero() {
            return Err(format!("degenerate Killing pairing on {}", self.rs.format_root(alpha)));
        }
        Ok(Q::one() / k)
    }

    pub fn r_matrix(&self) -> Bivector {
        let mut pi = Bivector::default();
        for r in &self.rs.positive_roots {
            let l = self.killing_lambda(r).expect("nondegenerate Killing form");
            pi.add_wedge(&self.e_root(r), &self.f_root(r), &l);
        }
        pi
    }

    pub fn ad_bivector(&self, x: &LieElement, b: &Bivector) -> Bivector {
        let mut out = Bivector::default();
        for (&(i, j), c) in &b.terms {
            let bi = self.basis(i);
            let bj = self.basis(j);
            out.add_wedge(&self.bracket(x, &bi), &bj, c);
            out.add_wedge(&bi, &self.bracket(x, &bj), c);
        }
        out
    }

    /// Reduced echelon basis of the span of the legs of `b`.
    pub fn coisotropic_generators(&self, b: &Bivector) -> Vec<LieElement> {
        let mut rows: Vec<Vec<Q>> = vec![vec![Q::zero(); self.dim]; self.dim];
        for (&(i, j), c) in &b.terms {
            rows[i][j] = c.clone();
            rows[j][i] = -c.clone();
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        linalg::rref(&mut rows);
        rows.into_iter().map(|coords| LieElement { coords }).collect()
    }

    pub fn check_coisotropic(&self, pi: &Bivector, gens: &[LieElement]) -> CoisoReport {
        let span = Span::new(gens, self.dim);
        let mut report = CoisoReport { closure: true, coideal: true, witness: None };
        'outer: for (a, x) in gens.iter().enumerate() {
            for (b, y) in gens.iter().enumerate().skip(a + 1) {
                if !span.contains(&self.bracket(x, y)) {
                    report.closure = false;
                    report.witness = Some(format!("[g{a}, g{b}] leaves the span"));
                    break 'outer;
                }
            }
        }
        for (a, x) in gens.iter().enumerate() {
            let d = self.ad_bivector(x, pi);
            if !span.wedge_contains(&d) {
                report.coideal = false;
                if report.witness.is_none() {
                    report.witness = Some(format!("delta(g{a}) not in h ^ g"));
                }
                break;
            }
        }
        report
    }

    pub fn check_master_equation(&self, x: &LieElement, pi: &Bivector) -> bool {
        self.ad_bivector(x, &self.ad_bivector(x, pi)).is_zero()
    }

    /// Coordinates of a Cartan element over `h_1..h_n`, if it is one.
    pub fn cartan_coords(&self, x: &LieElement) -> Option<Vec<Q>> {
        let outside = (0..self.dim).any(|i| !self.h.contains(&i) && !x.coords[i].is_zero());
        if outside {
            None
        } else {
            Some(self.h.iter().map(|&i| x.coords[i].clone()).collect())
        }
    }

    pub fn to_matrix(&self, x: &LieElement) -> Option<Mat> {
        let mats = self.matrices.as_ref()?;
        let n = self.matrix_size?;
        let mut m = mat_zero(n);
        for (c, b) in x.coords.iter().zip(mats) {
            if !c.is_zero() {
                m = mat_add(&m, &mat_scale(b, c));
            }
        }
        Some(m)
    }

    pub fn format_element(&self, x: &LieElement) -> String {
        let mut out = String::new();
        for (i, c) in x.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let a = c.abs();
            if !a.is_one() {
                out.push_str(&format!("{a}*"));
            }
            out.push_str(&self.names[i]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Largest `|d|` among nonzero structure constants; exposed for tests.
    pub fn table_entries(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.table[i][j]
    }

    /// Coroot of a positive root over `h_1..h_n`.
    pub fn coroot_coords(&self, decomp: &[i64]) -> Vec<Q> {
        let norm = self.rs.form(decomp, decomp);
        decomp.iter().enumerate().map(|(i, &c)| Q::new((c * 2 * self.rs.symmetrizers[i]).into(), norm.into())).collect()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CoisoReport {
    pub closure: bool,
    pub coideal: bool,
    pub witness: Option<String>,
}

impl CoisoReport {
    pub fn pass(&self) -> bool {
        self.closure && self.coideal
    }
}

/// Subspace with an adapted complement, for span and `h ^ g` membership tests.
pub struct Span {
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl Span {
    pub fn new(gens: &[LieElement], dim: usize) -> Span {
        let mut rows: Vec<Vec<Q>> = gens.iter().map(|g| g.coords.clone()).collect();
        let pivots = if rows.is_empty() { Vec::new() } else { linalg::rref(&mut rows) };
        let free = (0..dim).filter(|c| !pivots.contains(c)).collect();
        Span { rows, pivots, free }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Image of `v` in `g / span`, in coordinates indexed by the non-pivot columns.
    pub fn quotient(&self, v: &[Q]) -> Vec<Q> {
        self.free
            .iter()
            .map(|&c| {
                let mut x = v[c].clone();
                for (r, &p) in self.rows.iter().zip(&self.pivots) {
                    if !v[p].is_zero() && !r[c].is_zero() {
                        x -= &v[p] * &r[c];
                    }
                }
                x
            })
            .collect()
    }

    pub fn contains(&self, v: &LieElement) -> bool {
        self.quotient(&v.coords).iter().all(|x| x.is_zero())
    }

    /// Whether `b` lies in `span ^ g`, i.e. vanishes in the exterior square of the quotient.
    pub fn wedge_contains(&self, b: &Bivector) -> bool {
        let dim = self.pivots.len() + self.free.len();
        let mut acc: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        let mut cache: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
        let mut img = |i: usize| -> Vec<Q> {
            cache
                .entry(i)
                .or_insert_with(|| {
                    let mut v = vec![Q::zero(); dim];
                    v[i] = Q::one();
                    self.quotient(&v)
                })
                .clone()
        };
        for (&(i, j), c) in &b.terms {
            let (x, y) = (img(i), img(j));
            for (a, xa) in x.iter().enumerate() {
                if xa.is_zero() {
                    continue;
                }
                for (bb, yb) in y.iter().enumerate() {
                    if yb.is_zero() || a == bb {
                        continue;
                    }
                    let (k, s) = if a < bb { ((a, bb), c * xa * yb) } else { ((bb, a), -(c * xa * yb)) };
                    *acc.entry(k).or_insert_with(Q::zero) += s;
                }
            }
        }
        acc.values().all(|v| v.is_zero())
    }
}

fn from_matrices(rs: &RootSystem, e: Vec<Mat>, h: Vec<Mat>, f: Vec<Mat>, names: Vec<String>, shown: Option<usize>) -> LieAlgebra {
    let p = e.len();
    let n = h.len();
    let mut mats = e;
    mats.extend(h);
    mats.extend(f);
    let dim = mats.len();
    let flat: Vec<Vec<Q>> = mats.iter().map(|m| m.iter().flatten().cloned().collect()).collect();
    // pick `dim` independent matrix positions and invert the restricted basis matrix
    let mut rows = flat.clone();
    let pivots = linalg::rref(&mut rows);
    assert_eq!(pivots.len(), dim, "realization basis is linearly dependent");
    let sub: Vec<Vec<Q>> = pivots.iter().map(|&pos| flat.iter().map(|v| v[pos].clone()).collect()).collect();
    let inv = invert(&sub);
    let coords_of = |m: &Mat| -> Vec<(usize, Q)> {
        let v: Vec<Q> = m.iter().flatten().cloned().collect();
        let rhs: Vec<Q> = pivots.iter().map(|&pos| v[pos].clone()).collect();
        let x: Vec<Q> = inv.iter().map(|row| row.iter().zip(&rhs).map(|(a, b)| a * b).sum()).collect();
        debug_assert!({
            let mut back = vec![Q::zero(); v.len()];
            for (c, fl) in x.iter().zip(&flat) {
                for (b, y) in back.iter_mut().zip(fl) {
                    *b += c * y;
                }
            }
            back == v
        });
        x.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
    };
    let table = (0..dim).map(|i| (0..dim).map(|j| coords_of(&mat_bracket(&mats[i], &mats[j]))).collect()).collect();
    LieAlgebra {
        rs: rs.clone(),
        dim,
        e: (0..p).collect(),
        h: (p..p + n).collect(),
        f: (p + n..dim).collect(),
        names,
        table,
        matrices: Some(mats),
        matrix_size: shown,
    }
}

fn invert(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = m.len();
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    let piv = linalg::rref(&mut aug);
    assert_eq!(piv.len(), n);
    aug.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Paper matrices for one positive root of A-D: `(e, f, name of e, name of f)`.
fn classical_root_vectors(rs: &RootSystem, r: &Root) -> (Mat, Mat, String, String) {
    let n = rs.rank();
    let s = rs.ty.series;
    let size = match s {
        Series::A => n + 1,
        Series::B => 2 * n + 1,
        _ => 2 * n,
    };
    let nz: Vec<(usize, i64)> = r
        .coords
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.a.to_integer()))
        .collect();
    let e = |i, j, c| elem(size, i, j, c);
    match (s, nz.as_slice()) {
        (Series::A, [(i, 1), (j, -1)]) => (e(*i, *j, 1), e(*j, *i, 1), format!("e{}{}", i + 1, j + 1), format!("e{}{}", j + 1, i + 1)),
        (_, [(i, 1), (j, -1)]) => {
            let x = |a: usize, b: usize| mat_add(&e(a, b, 1), &e(n + b, n + a, -1));
            (x(*i, *j), x(*j, *i), format!("x{}{}", i + 1, j + 1), format!("x{}{}", j + 1, i + 1))
        }
        (Series::C, [(i, 1), (j, 1)]) => (
            mat_add(&e(*i, n + j, 1), &e(*j, n + i, 1)),
            mat_add(&e(n + i, *j, 1), &e(n + j, *i, 1)),
            format!("y{}{}", i + 1, j + 1),
            format!("z{}{}", i + 1, j + 1),
        ),
        (_, [(i, 1), (j, 1)]) => (
            mat_add(&e(*i, n + j, 1), &e(*j, n + i, -1)),
            mat_add(&e(n + j, *i, 1), &e(n + i, *j, -1)),
            format!("y{}{}", i + 1, j + 1),
            format!("z{}{}", i + 1, j + 1),
        ),
        (Series::C, [(i, 2)]) => (e(*i, n + i, 1), e(n + i, *i, 1), format!("u{}", i + 1), format!("v{}", i + 1)),
        (Series::B, [(i, 1)]) => {
            let u = mat_add(&e(*i, 2 * n, 1), &e(2 * n, n + i, -1));
            let v = transpose(&u);
            (u, v, format!("u{}", i + 1), format!("v{}", i + 1))
        }
        _ => unreachable!("unexpected root shape {:?}", nz),
    }
}

/// Rescale `[e_i, f_i]` so that it acts by 2 on `e_i`.
fn coroot_matrix(e: &Mat, f: &Mat) -> Mat {
    let h = mat_bracket(e, f);
    let he = mat_bracket(&h, e);
    let (r, c) = (0..e.len())
        .flat_map(|r| (0..e.len()).map(move |c| (r, c)))
        .find(|&(r, c)| !e[r][c].is_zero())
        .unwrap();
    let eig = &he[r][c] / &e[r][c];
    mat_scale(&h, &(qi(2) / eig))
}

fn build_classical(rs: &RootSystem) -> LieAlgebra {
    let n = rs.rank();
    let size = match rs.ty.series {
        Series::A => n + 1,
        Series::B => 2 * n + 1,
        _ => 2 * n,
    };
    let mut es = Vec::new();
    let mut fs = Vec::new();
    let mut en = Vec::new();
    let mut fnm = Vec::new();
    for r in &rs.positive_roots {
        let (e, f, a, b) = classical_root_vectors(rs, r);
        es.push(e);
        fs.push(f);
        en.push(a);
        fnm.push(b);
    }
    let hs: Vec<Mat> = rs
        .simple_roots
        .iter()
        .map(|r| {
            let k = rs.positive_index(&r.simple_decomp).unwrap();
            coroot_matrix(&es[k], &fs[k])
        })
        .collect();
    let mut names = en;
    names.extend((1..=n).map(|i| format!("h{i}")));
    names.extend(fnm);
    from_matrices(rs, es, hs, fs, names, Some(size))
}

/// Greedy root vectors from the simple ones; returns `(e, f)` with `f` not yet normalized.
fn greedy<T: Clone>(rs: &RootSystem, e_simple: &[T], f_simple: &[T], br: impl Fn(&T, &T) -> T, zero: impl Fn(&T) -> bool, neg: impl Fn(&T) -> T) -> (Vec<T>, Vec<T>) {
    let mut order: Vec<usize> = (0..rs.positive_roots.len()).collect();
    order.sort_by_key(|&k| rs.positive_roots[k].height());
    let mut e: Vec<Option<T>> = vec![None; order.len()];
    let mut f: Vec<Option<T>> = vec![None; order.len()];
    for &k in &order {
        let d = &rs.positive_roots[k].simple_decomp;
        if let Some(i) = d.iter().position(|&c| c == 1).filter(|_| d.iter().sum::<i64>() == 1) {
            e[k] = Some(e_simple[i].clone());
            f[k] = Some(f_simple[i].clone());
            continue;
        }
        for i in 0..rs.rank() {
            let mut sub = d.clone();
            sub[i] -= 1;
            let Some(p) = rs.positive_index(&sub) else { continue };
            let cand = br(e[p].as_ref().unwrap(), &e_simple[i]);
            if !zero(&cand) {
                e[k] = Some(cand);
                f[k] = Some(neg(&br(f[p].as_ref().unwrap(), &f_simple[i])));
                break;
            }
        }
        assert!(e[k].is_some(), "greedy construction stalled");
    }
    (e.into_iter().map(Option::unwrap).collect(), f.into_iter().map(Option::unwrap).collect())
}

fn g2_label(d: &[i64]) -> &'static str {
    match d {
        [1, 0] => "x1",
        [0, 1] => "x2",
        [1, 1] => "x3",
        [2, 1] => "x4",
        [3, 1] => "x5",
        [3, 2] => "x6",
        _ => unreachable!(),
    }
}

fn build_g2(rs: &RootSystem) -> LieAlgebra {
    // fold D4 along triality: short simple vector = sum over the outer nodes
    let d4 = RootSystem::build(crate::rootsys::CartanType::new(Series::D, 4).unwrap()).unwrap();
    let simple = |k: usize| classical_root_vectors(&d4, &d4.simple_roots[k]);
    let (e1, f1, e2, f2) = {
        let s: Vec<_> = (0..4).map(simple).collect();
        let e1 = mat_add(&mat_add(&s[0].0, &s[2].0), &s[3].0);
        let f1 = mat_add(&mat_add(&s[0].1, &s[2].1), &s[3].1);
        (e1, f1, s[1].0.clone(), s[1].1.clone())
    };
    let h = vec![coroot_matrix(&e1, &f1), coroot_matrix(&e2, &f2)];
    let (es, fs) = greedy(rs, &[e1, e2], &[f1, f2], mat_bracket, mat_is_zero, |m| mat_scale(m, &qi(-1)));
    // rescale f so that [e_a, f_a] is the coroot
    let fs: Vec<Mat> = rs
        .positive_roots
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let norm = rs.form(&r.simple_decomp, &r.simple_decomp);
            let mut cor = mat_zero(8);
            for (i, c) in r.simple_decomp.iter().enumerate() {
                let w = Q::new((c * 2 * rs.symmetrizers[i]).into(), norm.into());
                cor = mat_add(&cor, &mat_scale(&h[i], &w));
            }
            let ef = mat_bracket(&es[k], &fs[k]);
            let (a, b) = (0..8).flat_map(|a| (0..8).map(move |b| (a, b))).find(|&(a, b)| !cor[a][b].is_zero()).unwrap();
            let s = &cor[a][b] / &ef[a][b];
            let out = mat_scale(&fs[k], &s);
            debug_assert_eq!(mat_bracket(&es[k], &out), cor);
            out
        })
        .collect();
    let mut names: Vec<String> = rs.positive_roots.iter().map(|r| g2_label(&r.simple_decomp).to_string()).collect();
    names.extend(["h1".to_string(), "h2".to_string()]);
    names.extend(rs.positive_roots.iter().map(|r| g2_label(&r.simple_decomp).replace('x', "y")));
    from_matrices(rs, es, h, fs, names, None)
}

/// Sign cocycle of a simply-laced root lattice.
fn cocycle(cartan: &[Vec<i64>], a: &[i64], b: &[i64]) -> i64 {
    let mut e = 0;
    for i in 0..a.len() {
        for j in 0..b.len() {
            if i == j || (i < j && cartan[i][j] == -1) {
                e += a[i] * b[j];
            }
        }
    }
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn build_e6(rs: &RootSystem) -> LieAlgebra {
    let n = rs.rank();
    let p = rs.positive_roots.len();
    let dim = 2 * p + n;
    let cm = &rs.cartan_matrix;
    // raw basis: E_a (a > 0), h_i, -E_{-a}
    let root_of = |i: usize| -> Option<Vec<i64>> {
        if i < p {
            Some(rs.positive_roots[i].simple_decomp.clone())
        } else if i >= p + n {
            Some(rs.positive_roots[i - p - n].simple_decomp.iter().map(|c| -c).collect())
        } else {
            None
        }
    };
    let index_of = |d: &[i64]| -> Option<(usize, i64)> {
        if let Some(k) = rs.positive_index(d) {
            return Some((k, 1));
        }
        let neg: Vec<i64> = d.iter().map(|c| -c).collect();
        rs.positive_index(&neg).map(|k| (p + n + k, -1))
    };
    let mut table = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let (ri, rj) = (root_of(i), root_of(j));
            let si = if i >= p + n { -1 } else { 1 };
            let sj = if j >= p + n { -1 } else { 1 };
            let entry: Vec<(usize, Q)> = match (ri, rj) {
                (None, None) => Vec::new(),
                (None, Some(b)) => {
                    let hi = i - p;
                    let v: i64 = (0..n).map(|k| cm[hi][k] * b[k]).sum();
                    if v == 0 {
                        Vec::new()
                    } else {
                        vec![(j, qi(v))]
                    }
                }
                (Some(a), None) => {
                    let hj = j - p;
                    let v: i64 = (0..n).map(|k| cm[hj][k] * a[k]).sum();
                    if v == 0 {
                        Vec::new()
                    } else {
                        vec![(i, qi(-v))]
                    }
                }
                (Some(a), Some(b)) => {
                    let s: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                    if s.iter().all(|&c| c == 0) {
                        // [E_a, E_-a] = -a (coroot), scaled by the basis signs
                        a.iter()
                            .enumerate()
                            .filter(|(_, c)| **c != 0)
                            .map(|(k, c)| (p + k, qi(-c * si * sj)))
                            .collect()
                    } else if let Some((k, sk)) = index_of(&s) {
                        let c = cocycle(cm, &a, &b) * si * sj * sk;
                        vec![(k, qi(c))]
                    } else {
                        Vec::new()
                    }
                }
            };
            table[i][j] = entry;
        }
    }
    let mut names: Vec<String> = rs.positive_roots.iter().map(|r| format!("e[{}]", rs.format_simple(r))).collect();
    names.extend((1..=n).map(|i| format!("h{i}")));
    names.extend(rs.positive_roots.iter().map(|r| format!("f[{}]", rs.format_simple(r))));
    let raw = LieAlgebra {
        rs: rs.clone(),
        dim,
        e: (0..p).collect(),
        h: (p..p + n).collect(),
        f: (p + n..dim).collect(),
        names,
        table,
        matrices: None,
        matrix_size: None,
    };
    rebase_greedy(raw)
}

/// Replace the root vectors of `raw` by the greedy ones (each a multiple of a raw one).
fn rebase_greedy(raw: LieAlgebra) -> LieAlgebra {
    let rs = raw.rs.clone();
    let n = rs.rank();
    let simple_k: Vec<usize> = rs.simple_roots.iter().map(|r| rs.positive_index(&r.simple_decomp).unwrap()).collect();
    let es: Vec<LieElement> = simple_k.iter().map(|&k| raw.basis(raw.e[k])).collect();
    let fs: Vec<LieElement> = simple_k.iter().map(|&k| raw.basis(raw.f[k])).collect();
    let (ge, gf) = greedy(&rs, &es, &fs, |a, b| raw.bracket(a, b), |a| a.is_zero(), |a| a.scale(&qi(-1)));
    let gf: Vec<LieElement> = gf
        .into_iter()
        .enumerate()
        .map(|(k, f)| {
            let cor = raw.coroot_coords(&rs.positive_roots[k].simple_decomp);
            let ef = raw.bracket(&ge[k], &f);
            let i = (0..n).find(|&i| !cor[i].is_zero()).unwrap();
            f.scale(&(&cor[i] / &ef.coords[raw.h[i]]))
        })
        .collect();
    // scale of each new basis vector against the raw one
    let mut scale = vec![Q::one(); raw.dim];
    for (k, v) in ge.iter().enumerate() {
        scale[raw.e[k]] = v.coords[raw.e[k]].clone();
    }
    for (k, v) in gf.iter().enumerate() {
        scale[raw.f[k]] = v.coords[raw.f[k]].clone();
    }
    let table = (0..raw.dim)
        .map(|i| {
            (0..raw.dim)
                .map(|j| {
                    raw.table[i][j]
                        .iter()
                        .map(|(k, c)| (*k, c * &scale[i] * &scale[j] / &scale[*k]))
                        .collect()
                })
                .collect()
        })
        .collect();
    LieAlgebra { table, ..raw }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorOut {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalChecks {
    pub closure: bool,
    pub coideal: bool,
    pub master_equation: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalReport {
    #[serde(rename = "type")]
    pub ty: String,
    pub rank: usize,
    pub beta: String,
    pub admissible: bool,
    pub generators: Vec<GeneratorOut>,
    pub checks: ClassicalChecks,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Full classical pipeline for one root: `[e_beta, pi]`, its legs, and the checks.
pub fn classical_report(alg: &LieAlgebra, beta: &Root) -> ClassicalReport {
    let pi = alg.r_matrix();
    let eb = alg.e_root(beta);
    let b = alg.ad_bivector(&eb, &pi);
    let gens = alg.coisotropic_generators(&b);
    let rep = alg.check_coisotropic(&pi, &gens);
    let generators = gens
        .iter()
        .map(|g| GeneratorOut {
            label: alg.format_element(g),
            matrix: alg.to_matrix(g).map(|m| m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()),
            coords: g.coords.iter().map(|c| c.to_string()).collect(),
        })
        .collect();
    ClassicalReport {
        ty: alg.rs.ty.series.letter().to_string(),
        rank: alg.rs.rank(),
        beta: alg.rs.format_root(beta),
        admissible: alg.rs.is_admissible(beta),
        generators,
        checks: ClassicalChecks { closure: rep.closure, coideal: rep.coideal, master_equation: alg.check_master_equation(&eb, &pi) },
        witness: rep.witness,
    }
}

impl fmt::Display for ClassicalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}{} beta = {} (admissible: {})", self.ty, self.rank, self.beta, self.admissible)?;
        for g in &self.generators {
            writeln!(f, "  {}", g.label)?;
        }
        write!(
            f,
            "closure: {}  coideal: {}  master equation: {}",
            self.checks.closure, self.checks.coideal, self.checks.master_equation
        )
    }
}
