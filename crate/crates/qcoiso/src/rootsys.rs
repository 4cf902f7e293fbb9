//! Root systems of types A, B, C, D, E6, F4 and G2, root strings and the
//! admissibility test (no root string along `beta` contains three consecutive
//! integers).
//!
//! Roots are generated from the simple roots by closure under the simple
//! reflections, working on integer coordinates over the simple roots. Ambient
//! coordinates are attached afterwards: `L_i` coordinates for the classical
//! series and F4, `a + b*sqrt(3)` pairs for G2 and the simple-root basis itself
//! for E6.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("invalid Cartan type {0}{1}")]
    InvalidType(char, usize),
    #[error("unsupported Cartan type {0}")]
    Unsupported(String),
    #[error("not a root of {ty}: {what}")]
    NotARoot { ty: String, what: String },
    #[error("cannot parse root literal '{0}'")]
    BadLiteral(String),
    #[error("root string along {0} is not saturated within |k| <= 4")]
    Unsaturated(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Series> {
        Some(match c.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub series: Series,
    pub rank: usize,
}

impl CartanType {
    pub fn new(series: Series, rank: usize) -> Result<Self, RootError> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(CartanType { series, rank })
        } else {
            Err(RootError::InvalidType(series.letter(), rank))
        }
    }

    pub fn parse(letter: &str, rank: usize) -> Result<Self, RootError> {
        let c = letter.chars().next().ok_or_else(|| RootError::BadLiteral(letter.to_string()))?;
        let s = Series::from_letter(c).ok_or(RootError::InvalidType(c, rank))?;
        CartanType::new(s, rank)
    }

    pub fn is_classical(self) -> bool {
        matches!(self.series, Series::A | Series::B | Series::C | Series::D)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

/// `a + b*sqrt(3)` with rational `a`, `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    pub a: Rational64,
    pub b: Rational64,
}

impl Surd {
    pub fn rat(a: Rational64) -> Self {
        Surd { a, b: Rational64::zero() }
    }

    pub fn int(a: i64) -> Self {
        Surd::rat(Rational64::from_integer(a))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn add(self, o: Surd) -> Surd {
        Surd { a: self.a + o.a, b: self.b + o.b }
    }

    fn scale(self, k: i64) -> Surd {
        Surd { a: self.a * k, b: self.b * k }
    }

    fn mul(self, o: Surd) -> Surd {
        Surd { a: self.a * o.a + self.b * o.b * 3, b: self.a * o.b + self.b * o.a }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt3", self.b),
            (false, false) => write!(f, "{}{}{}*sqrt3", self.a, if self.b.is_negative() { "-" } else { "+" }, self.b.abs()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    /// Ambient coordinates (see module docs for the ambient space per type).
    pub coords: Vec<Surd>,
    /// Coefficients over the simple roots.
    pub simple_decomp: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.simple_decomp.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.simple_decomp.iter().all(|&c| c >= 0)
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub ty: CartanType,
    pub simple_roots: Vec<Root>,
    /// Sorted lexicographically on `simple_decomp`.
    pub positive_roots: Vec<Root>,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub symmetrizers: Vec<i64>,
    pub coxeter_number: usize,
    index: HashMap<Vec<i64>, usize>,
    ambient_simple: Vec<Vec<Surd>>,
}

fn e6_cartan() -> Vec<Vec<i64>> {
    // Bourbaki labels: chain 1-3-4-5-6, node 2 attached to 4.
    let edges = [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)];
    let mut a = vec![vec![0i64; 6]; 6];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (i, j) in edges {
        a[i - 1][j - 1] = -1;
        a[j - 1][i - 1] = -1;
    }
    a
}

fn unit(n: usize, i: usize, c: i64) -> Vec<Surd> {
    let mut v = vec![Surd::default(); n];
    v[i] = Surd::int(c);
    v
}

fn diff(n: usize, i: usize, j: usize) -> Vec<Surd> {
    let mut v = unit(n, i, 1);
    v[j] = Surd::int(-1);
    v
}

fn ambient_simple_roots(ty: CartanType) -> Result<Vec<Vec<Surd>>, RootError> {
    let n = ty.rank;
    let half = Rational64::new(1, 2);
    Ok(match ty.series {
        Series::A => (0..n).map(|i| diff(n + 1, i, i + 1)).collect(),
        Series::B | Series::C | Series::D => {
            let mut v: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            v.push(match ty.series {
                Series::B => unit(n, n - 1, 1),
                Series::C => unit(n, n - 1, 2),
                _ => {
                    let mut w = unit(n, n - 2, 1);
                    w[n - 1] = Surd::int(1);
                    w
                }
            });
            v
        }
        Series::F => vec![
            diff(4, 1, 2),
            diff(4, 2, 3),
            unit(4, 3, 1),
            vec![Surd::rat(half), Surd::rat(-half), Surd::rat(-half), Surd::rat(-half)],
        ],
        Series::G => vec![
            vec![Surd::int(1), Surd::int(0)],
            vec![Surd::rat(Rational64::new(-3, 2)), Surd { a: Rational64::zero(), b: half }],
        ],
        Series::E => {
            if ty.rank != 6 {
                return Err(RootError::Unsupported(ty.to_string()));
            }
            (0..6).map(|i| unit(6, i, 1)).collect()
        }
    })
}

fn dot(x: &[Surd], y: &[Surd]) -> Surd {
    x.iter().zip(y).fold(Surd::default(), |acc, (a, b)| acc.add(a.mul(*b)))
}

impl RootSystem {
    pub fn build(ty: CartanType) -> Result<RootSystem, RootError> {
        let amb = ambient_simple_roots(ty)?;
        let n = ty.rank;
        let (cartan, sym) = if ty.series == Series::E {
            (e6_cartan(), vec![1; n])
        } else {
            let norms: Vec<Rational64> = amb
                .iter()
                .map(|a| {
                    let s = dot(a, a);
                    assert!(s.b.is_zero());
                    s.a
                })
                .collect();
            let mut c = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let v = dot(&amb[i], &amb[j]);
                    assert!(v.b.is_zero(), "irrational inner product");
                    let r = v.a * 2 / norms[i];
                    assert!(r.is_integer());
                    c[i][j] = r.to_integer();
                }
            }
            let min = norms.iter().copied().min().unwrap();
            let sym = norms
                .iter()
                .map(|&x| {
                    let r = x / min;
                    assert!(r.is_integer());
                    r.to_integer()
                })
                .collect();
            (c, sym)
        };
        let pos = closure_positive(&cartan);
        let mut rs = RootSystem {
            ty,
            simple_roots: Vec::new(),
            positive_roots: Vec::new(),
            cartan_matrix: cartan,
            symmetrizers: sym,
            coxeter_number: 0,
            index: HashMap::new(),
            ambient_simple: amb,
        };
        rs.positive_roots = pos.into_iter().map(|d| rs.make_root(d)).collect();
        rs.simple_roots = (0..n)
            .map(|i| {
                let mut d = vec![0; n];
                d[i] = 1;
                rs.make_root(d)
            })
            .collect();
        for (k, r) in rs.positive_roots.iter().enumerate() {
            rs.index.insert(r.simple_decomp.clone(), k);
        }
        rs.coxeter_number = 2 * rs.positive_roots.len() / n;
        Ok(rs)
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn make_root(&self, decomp: Vec<i64>) -> Root {
        let dim = self.ambient_simple[0].len();
        let mut coords = vec![Surd::default(); dim];
        for (c, a) in decomp.iter().zip(&self.ambient_simple) {
            for (x, y) in coords.iter_mut().zip(a) {
                *x = x.add(y.scale(*c));
            }
        }
        Root { coords, simple_decomp: decomp }
    }

    /// All roots, positive ones first.
    pub fn all_roots(&self) -> Vec<Root> {
        let mut v = self.positive_roots.clone();
        v.extend(self.positive_roots.iter().map(|r| self.make_root(r.simple_decomp.iter().map(|c| -c).collect())));
        v
    }

    pub fn is_root(&self, decomp: &[i64]) -> bool {
        if decomp.iter().all(|&c| c >= 0) {
            self.index.contains_key(decomp)
        } else if decomp.iter().all(|&c| c <= 0) {
            let neg: Vec<i64> = decomp.iter().map(|c| -c).collect();
            self.index.contains_key(&neg)
        } else {
            false
        }
    }

    /// Position of a positive root in `positive_roots`.
    pub fn positive_index(&self, decomp: &[i64]) -> Option<usize> {
        self.index.get(decomp).copied()
    }

    /// Symmetric form `(a_i, a_j) = d_i a_ij` extended bilinearly.
    pub fn form(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                s += xi * yj * self.symmetrizers[i] * self.cartan_matrix[i][j];
            }
        }
        s
    }

    pub fn root_string(&self, alpha: &Root, beta: &Root) -> Result<BTreeSet<i64>, RootError> {
        for r in [alpha, beta] {
            if !self.is_root(&r.simple_decomp) {
                return Err(RootError::NotARoot { ty: self.ty.to_string(), what: self.format_root(r) });
            }
        }
        let at = |k: i64| -> Vec<i64> {
            alpha.simple_decomp.iter().zip(&beta.simple_decomp).map(|(a, b)| a + k * b).collect()
        };
        let set: BTreeSet<i64> = (-4..=4).filter(|&k| self.is_root(&at(k))).collect();
        if self.is_root(&at(5)) || self.is_root(&at(-5)) {
            return Err(RootError::Unsaturated(self.format_root(beta)));
        }
        Ok(set)
    }

    pub fn is_admissible(&self, beta: &Root) -> bool {
        self.all_roots().iter().all(|a| {
            let s = self.root_string(a, beta).expect("roots of the system");
            !s.iter().any(|k| s.contains(&(k + 1)) && s.contains(&(k + 2)))
        })
    }

    pub fn admissible_positive_roots(&self) -> Vec<Root> {
        self.positive_roots.iter().filter(|b| self.is_admissible(b)).cloned().collect()
    }

    /// Highest root.
    pub fn highest_root(&self) -> &Root {
        self.positive_roots.iter().max_by_key(|r| r.height()).unwrap()
    }

    /// `L`-coordinate rendering for A-D (e.g. `L1-L4`, `2L1`), simple-root
    /// rendering otherwise (e.g. `3a1+2a2`).
    pub fn format_root(&self, r: &Root) -> String {
        if self.ty.is_classical() {
            format_linear(r.coords.iter().map(|c| c.a), "L")
        } else {
            format_linear(r.simple_decomp.iter().map(|&c| Rational64::from_integer(c)), "a")
        }
    }

    pub fn format_simple(&self, r: &Root) -> String {
        format_linear(r.simple_decomp.iter().map(|&c| Rational64::from_integer(c)), "a")
    }

    pub fn format_ambient(&self, r: &Root) -> String {
        let parts: Vec<String> = r.coords.iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(", "))
    }

    /// Parse `L1-L4`, `2L1`, `L1+L2`, `a2`, `3a1+2a2`.
    pub fn parse_root(&self, s: &str) -> Result<Root, RootError> {
        let bad = || RootError::BadLiteral(s.to_string());
        let lin = parse_linear(s).ok_or_else(bad)?;
        let kind = lin.first().map(|t| t.1).ok_or_else(bad)?;
        if lin.iter().any(|t| t.1 != kind) {
            return Err(bad());
        }
        let decomp = if kind == 'a' {
            let mut d = vec![0i64; self.rank()];
            for (c, _, i) in lin {
                if i == 0 || i > self.rank() {
                    return Err(bad());
                }
                d[i - 1] += c;
            }
            d
        } else {
            if !self.ty.is_classical() {
                return Err(bad());
            }
            let dim = self.ambient_simple[0].len();
            let mut v = vec![Surd::default(); dim];
            for (c, _, i) in lin {
                if i == 0 || i > dim {
                    return Err(bad());
                }
                v[i - 1] = v[i - 1].add(Surd::int(c));
            }
            self.all_roots()
                .into_iter()
                .find(|r| r.coords == v)
                .map(|r| r.simple_decomp)
                .ok_or_else(|| RootError::NotARoot { ty: self.ty.to_string(), what: s.to_string() })?
        };
        if !self.is_root(&decomp) {
            return Err(RootError::NotARoot { ty: self.ty.to_string(), what: s.to_string() });
        }
        Ok(self.make_root(decomp))
    }
}

/// Positive roots by closure under simple reflections, sorted lexicographically.
fn closure_positive(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut stack: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut d = vec![0; n];
            d[i] = 1;
            d
        })
        .collect();
    while let Some(r) = stack.pop() {
        if !seen.insert(r.clone()) {
            continue;
        }
        for (i, row) in cartan.iter().enumerate() {
            let pairing: i64 = row.iter().zip(&r).map(|(a, c)| a * c).sum();
            let mut s = r.clone();
            s[i] -= pairing;
            if s.iter().all(|&c| c >= 0) && s.iter().any(|&c| c > 0) && !seen.contains(&s) {
                stack.push(s);
            }
        }
    }
    seen.into_iter().collect()
}

fn format_linear(coeffs: impl Iterator<Item = Rational64>, sym: &str) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.enumerate() {
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
            out.push_str(&a.to_string());
        }
        out.push_str(&format!("{sym}{}", i + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `(coefficient, symbol, index)` triples of a literal like `3a1+2a2` or `L1-L4`.
fn parse_linear(s: &str) -> Option<Vec<(i64, char, usize)>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let mut sign = 1;
        if b[i] == b'+' || b[i] == b'-' {
            if b[i] == b'-' {
                sign = -1;
            }
            i += 1;
        } else if !out.is_empty() {
            return None;
        }
        let st = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        let coef: i64 = if st == i { 1 } else { s[st..i].parse().ok()? };
        if b.get(i) == Some(&b'*') {
            i += 1;
        }
        let sym = match b.get(i)? {
            b'L' | b'l' => 'L',
            b'a' | b'A' => 'a',
            _ => return None,
        };
        i += 1;
        let st = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if st == i {
            return None;
        }
        out.push((sign * coef, sym, s[st..i].parse().ok()?));
    }
    Some(out)
}

impl FromStr for CartanType {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, RootError> {
        let bad = || RootError::BadLiteral(s.to_string());
        let mut ch = s.chars();
        let c = ch.next().ok_or_else(bad)?;
        let rank: usize = ch.as_str().parse().map_err(|_| bad())?;
        CartanType::parse(&c.to_string(), rank)
    }
}
