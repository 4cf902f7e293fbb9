//! The non-negative Borel part of `U_q(g)`: words in the `E_i` with a
//! left-normalized `K` prefix, coefficients in `Q(q)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{self, Solution};
use crate::qfield::{q_binomial, RatFunc};
use crate::rootsys::RootSystem;

pub type Word = Vec<u8>;

/// `K^kexp E_{w_1} ... E_{w_d}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono {
    pub kexp: Vec<i64>,
    pub word: Word,
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.word.len(), &self.word, &self.kexp).cmp(&(o.word.len(), &o.word, &o.kexp))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Mono {
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (i, &k) in self.kexp.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(format!("K{}", i + 1)),
                _ => parts.push(format!("K{}^{}", i + 1, k)),
            }
        }
        for &l in &self.word {
            parts.push(format!("E{}", l + 1));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NCPoly {
    pub terms: BTreeMap<Mono, RatFunc>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn mono(kexp: Vec<i64>, word: Word, c: RatFunc) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(Mono { kexp, word }, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &NCPoly) -> NCPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &NCPoly) -> NCPoly {
        self.add(&o.scale(&RatFunc::from_int(-1)))
    }

    pub fn scale(&self, c: &RatFunc) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.word.len()).max().unwrap_or(0)
    }

    /// Split into `(kexp, content)` homogeneous components.
    pub fn components(&self, rank: usize) -> BTreeMap<(Vec<i64>, Vec<i64>), NCPoly> {
        let mut out: BTreeMap<(Vec<i64>, Vec<i64>), NCPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = (m.kexp.clone(), content(&m.word, rank));
            out.entry(key).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    /// The `E`-word part when every term has trivial `K` prefix.
    pub fn is_pure_e(&self) -> bool {
        self.terms.keys().all(|m| m.kexp.iter().all(|&k| k == 0))
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in &self.terms {
            let neg = c.num().lead().is_some_and(|l| l.sign() == num_bigint::Sign::Minus);
            let body = if neg { (-c).to_string() } else { c.to_string() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render();
            let wrapped = if top_level_sum(&body) { format!("({body})") } else { body };
            if wrapped == "1" {
                out.push_str(&mono);
            } else if mono == "1" {
                out.push_str(&wrapped);
            } else {
                out.push_str(&format!("{wrapped} * {mono}"));
            }
        }
        out
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl NCPoly {
    /// Inverse of `render`: terms `coeff * K1^a E2 E1` joined by ` + ` / ` - `,
    /// with the coefficient optional and parenthesized when it is a sum.
    pub fn parse(s: &str, rank: usize) -> Result<NCPoly, String> {
        let s = s.trim();
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let (mut depth, mut start, mut neg) = (0i32, 0usize, false);
        let b = s.as_bytes();
        if s.starts_with('-') {
            neg = true;
            start = 1;
        }
        let mut i = start;
        while i < b.len() {
            match b[i] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > 0 && b[i - 1] == b' ' && b.get(i + 1) == Some(&b' ') => {
                    terms.push((neg, s[start..i].trim()));
                    neg = b[i] == b'-';
                    start = i + 1;
                }
                _ => {}
            }
            i += 1;
        }
        terms.push((neg, s[start..].trim()));
        let mut out = NCPoly::zero();
        for (neg, t) in terms {
            if t.is_empty() {
                return Err(format!("empty term in {s:?}"));
            }
            let (coef, mono) = match split_top(t, " * ") {
                Some((c, m)) => (RatFunc::parse(c).map_err(|e| format!("{c:?}: {e}"))?, m),
                None if t.starts_with('E') || t.starts_with('K') => (RatFunc::one(), t),
                None => (RatFunc::parse(t).map_err(|e| format!("{t:?}: {e}"))?, "1"),
            };
            let m = parse_mono(mono, rank)?;
            out.add_term(m, if neg { -coef } else { coef });
        }
        Ok(out)
    }
}

fn split_top<'a>(s: &'a str, sep: &str) -> Option<(&'a str, &'a str)> {
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ if depth == 0 && s[i..].starts_with(sep) => return Some((&s[..i], &s[i + sep.len()..])),
            _ => {}
        }
    }
    None
}

fn parse_mono(s: &str, rank: usize) -> Result<Mono, String> {
    let mut m = Mono { kexp: vec![0; rank], word: Vec::new() };
    if s.trim() == "1" {
        return Ok(m);
    }
    for tok in s.split_whitespace() {
        let bad = || format!("bad factor {tok:?}");
        let (head, pow) = match tok.split_once('^') {
            Some((h, p)) => (h, p.parse::<i64>().map_err(|_| bad())?),
            None => (tok, 1),
        };
        let idx: usize = head.get(1..).and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        if idx == 0 || idx > rank {
            return Err(format!("index out of range in {tok:?}"));
        }
        match &head[..1] {
            // K factors come first, as in `render`
            "K" if m.word.is_empty() => m.kexp[idx - 1] += pow,
            "E" if pow >= 0 => m.word.extend(std::iter::repeat_n((idx - 1) as u8, pow as usize)),
            _ => return Err(bad()),
        }
    }
    Ok(m)
}

fn top_level_sum(s: &str) -> bool {
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 && !s[..i].ends_with('^') => return true,
            _ => {}
        }
    }
    false
}

pub fn content(word: &[u8], rank: usize) -> Vec<i64> {
    let mut c = vec![0; rank];
    for &l in word {
        c[l as usize] += 1;
    }
    c
}

/// Words of a given content in increasing lexicographic order.
pub fn words_of_content(c: &[i64]) -> Vec<Word> {
    fn go(c: &mut Vec<i64>, left: i64, cur: &mut Word, out: &mut Vec<Word>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in 0..c.len() {
            if c[i] > 0 {
                c[i] -= 1;
                cur.push(i as u8);
                go(c, left - 1, cur, out);
                cur.pop();
                c[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    let mut cc = c.to_vec();
    go(&mut cc, c.iter().sum(), &mut Vec::new(), &mut out);
    out
}

/// Simple tensor leg pair.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct TensorMono {
    pub left: Mono,
    pub right: Mono,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TensorElem {
    pub terms: BTreeMap<TensorMono, RatFunc>,
}

impl TensorElem {
    pub fn add_term(&mut self, m: TensorMono, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(RatFunc::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, o: &TensorElem) -> TensorElem {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c}) * {} (x) {}", m.left.render(), m.right.render()))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Three-leg element, used for coassociativity checks.
pub type Tensor3 = BTreeMap<(Mono, Mono, Mono), RatFunc>;

/// Multiplication data of `U_q(b+)` for one root system.
#[derive(Clone, Debug)]
pub struct Uq {
    pub rs: RootSystem,
    pub rank: usize,
    /// `(alpha_i, alpha_j) = d_i a_ij`.
    pub form: Vec<Vec<i64>>,
}

impl Uq {
    pub fn new(rs: &RootSystem) -> Uq {
        let n = rs.rank();
        let form = (0..n).map(|i| (0..n).map(|j| rs.symmetrizers[i] * rs.cartan_matrix[i][j]).collect()).collect();
        Uq { rs: rs.clone(), rank: n, form }
    }

    pub fn one(&self) -> NCPoly {
        NCPoly::mono(vec![0; self.rank], Vec::new(), RatFunc::one())
    }

    pub fn e(&self, i: usize) -> NCPoly {
        NCPoly::mono(vec![0; self.rank], vec![i as u8], RatFunc::one())
    }

    pub fn k(&self, kexp: &[i64]) -> NCPoly {
        NCPoly::mono(kexp.to_vec(), Vec::new(), RatFunc::one())
    }

    pub fn word(&self, w: &[u8]) -> NCPoly {
        NCPoly::mono(vec![0; self.rank], w.to_vec(), RatFunc::one())
    }

    /// Exponent of `q` picked up by `K^kexp` crossing `E_word` leftwards.
    pub fn crossing(&self, kexp: &[i64], word: &[u8]) -> i64 {
        let mut s = 0;
        for (i, &k) in kexp.iter().enumerate() {
            if k != 0 {
                for &l in word {
                    s += k * self.form[i][l as usize];
                }
            }
        }
        s
    }

    /// Pairing `(wt a, wt b)` of two contents.
    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += a[i] * b[j] * self.form[i][j];
            }
        }
        s
    }

    pub fn mul_mono(&self, a: &Mono, b: &Mono) -> (Mono, i64) {
        let e = -self.crossing(&b.kexp, &a.word);
        let kexp = a.kexp.iter().zip(&b.kexp).map(|(x, y)| x + y).collect();
        let mut word = a.word.clone();
        word.extend_from_slice(&b.word);
        (Mono { kexp, word }, e)
    }

    pub fn mul(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let (m, e) = self.mul_mono(ma, mb);
                out.add_term(m, &(ca * cb) * &RatFunc::q_pow(e));
            }
        }
        out
    }

    pub fn mul_all(&self, xs: &[&NCPoly]) -> NCPoly {
        xs.iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// `[a, b]_{q^k} = ab - q^k ba`.
    pub fn q_bracket(&self, a: &NCPoly, b: &NCPoly, k: i64) -> NCPoly {
        self.mul(a, b).sub(&self.mul(b, a).scale(&RatFunc::q_pow(k)))
    }

    /// `sum_r (-1)^r [1-a_ij, r]_{d_i} E_i^{1-a_ij-r} E_j E_i^r`.
    pub fn serre_relation(&self, i: usize, j: usize) -> NCPoly {
        let a = self.rs.cartan_matrix[i][j];
        let m = 1 - a;
        let d = self.rs.symmetrizers[i];
        let mut p = NCPoly::zero();
        for r in 0..=m {
            let c = q_binomial(m, r, d).expect("valid binomial").scale_int(if r % 2 == 0 { 1 } else { -1 });
            let mut w = vec![i as u8; (m - r) as usize];
            w.push(j as u8);
            w.extend(std::iter::repeat_n(i as u8, r as usize));
            p.add_term(Mono { kexp: vec![0; self.rank], word: w }, c);
        }
        p
    }

    pub fn serre_relations(&self) -> SerreIdeal {
        let mut relations = Vec::new();
        for i in 0..self.rank {
            for j in 0..self.rank {
                if i != j {
                    relations.push(SerreRelation { i, j, poly: self.serre_relation(i, j) });
                }
            }
        }
        SerreIdeal { relations, rank: self.rank }
    }

    pub fn mul_tensor(&self, a: &TensorElem, b: &TensorElem) -> TensorElem {
        let mut out = TensorElem::default();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let (l, e1) = self.mul_mono(&ma.left, &mb.left);
                let (r, e2) = self.mul_mono(&ma.right, &mb.right);
                out.add_term(TensorMono { left: l, right: r }, &(ca * cb) * &RatFunc::q_pow(e1 + e2));
            }
        }
        out
    }

    fn delta_letter(&self, i: u8) -> TensorElem {
        let z = vec![0; self.rank];
        let mut ki = z.clone();
        ki[i as usize] = 1;
        let mut t = TensorElem::default();
        t.add_term(TensorMono { left: Mono { kexp: z.clone(), word: vec![i] }, right: Mono { kexp: ki, word: vec![] } }, RatFunc::one());
        t.add_term(TensorMono { left: Mono { kexp: z.clone(), word: vec![] }, right: Mono { kexp: z, word: vec![i] } }, RatFunc::one());
        t
    }

    /// `Delta(K_i) = K_i (x) K_i`, `Delta(E_i) = E_i (x) K_i + 1 (x) E_i`, extended multiplicatively.
    pub fn coproduct(&self, x: &NCPoly) -> TensorElem {
        let mut out = TensorElem::default();
        for (m, c) in &x.terms {
            let mut t = TensorElem::default();
            t.add_term(
                TensorMono { left: Mono { kexp: m.kexp.clone(), word: vec![] }, right: Mono { kexp: m.kexp.clone(), word: vec![] } },
                c.clone(),
            );
            for &l in &m.word {
                t = self.mul_tensor(&t, &self.delta_letter(l));
            }
            for (tm, tc) in t.terms {
                out.add_term(tm, tc);
            }
        }
        out
    }

    /// `(Delta (x) id) Delta(x)` when `left` is true, `(id (x) Delta) Delta(x)` otherwise.
    pub fn double_coproduct(&self, x: &NCPoly, left: bool) -> Tensor3 {
        let mut out: Tensor3 = BTreeMap::new();
        for (m, c) in &self.coproduct(x).terms {
            let leg = if left { &m.left } else { &m.right };
            let d = self.coproduct(&NCPoly::mono(leg.kexp.clone(), leg.word.clone(), RatFunc::one()));
            for (dm, dc) in &d.terms {
                let key = if left {
                    (dm.left.clone(), dm.right.clone(), m.right.clone())
                } else {
                    (m.left.clone(), dm.left.clone(), dm.right.clone())
                };
                let e = out.entry(key.clone()).or_insert_with(RatFunc::zero);
                *e = &*e + &(c * dc);
                if e.is_zero() {
                    out.remove(&key);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SerreRelation {
    pub i: usize,
    pub j: usize,
    pub poly: NCPoly,
}

/// Two-sided ideal generated by the q-Serre relations.
#[derive(Clone, Debug)]
pub struct SerreIdeal {
    pub relations: Vec<SerreRelation>,
    pub rank: usize,
}

/// `u * R * v` with a coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealTerm {
    pub left: Word,
    pub relation: (usize, usize),
    pub right: Word,
    pub coeff: RatFunc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealCertificate {
    pub terms: Vec<IdealTerm>,
}

impl SerreIdeal {
    /// All `u R v` of a given content, in a fixed order, with their labels.
    pub fn spanning_set(&self, uq: &Uq, c: &[i64]) -> Vec<((Word, usize, Word), NCPoly)> {
        let deg: i64 = c.iter().sum();
        let mut out = Vec::new();
        for (ri, r) in self.relations.iter().enumerate() {
            let rc = content(&r.poly.terms.keys().next().unwrap().word, self.rank);
            let rest: Vec<i64> = c.iter().zip(&rc).map(|(a, b)| a - b).collect();
            if rest.iter().any(|&x| x < 0) {
                continue;
            }
            let rdeg: i64 = rc.iter().sum();
            for w in words_of_content(&rest) {
                for split in 0..=(deg - rdeg) as usize {
                    let (u, v) = w.split_at(split);
                    let p = uq.mul_all(&[&uq.word(u), &r.poly, &uq.word(v)]);
                    out.push(((u.to_vec(), ri, v.to_vec()), p));
                }
            }
        }
        out
    }

    fn matrix(&self, uq: &Uq, c: &[i64]) -> (Vec<Word>, Vec<((Word, usize, Word), Vec<RatFunc>)>) {
        let words = words_of_content(c);
        let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let cols = self
            .spanning_set(uq, c)
            .into_iter()
            .map(|(label, p)| {
                let mut v = vec![RatFunc::zero(); words.len()];
                for (m, x) in &p.terms {
                    v[index[&m.word]] = x.clone();
                }
                (label, v)
            })
            .collect();
        (words, cols)
    }

    /// Words whose images form a basis of the quotient in content `c`: the
    /// complement of the pivot words of the ideal's span, scanning words from the
    /// largest down so that small words are kept.
    pub fn quotient_basis(&self, uq: &Uq, c: &[i64]) -> Vec<Word> {
        if let Some(hit) = cache::load(uq, c) {
            return hit;
        }
        let (words, cols) = self.matrix(uq, c);
        let n = words.len();
        // reversed word order so pivots land on the largest words
        let mut rows: Vec<Vec<RatFunc>> = cols.into_iter().map(|(_, v)| v.into_iter().rev().collect()).collect();
        let pivots = if rows.is_empty() { Vec::new() } else { linalg::rref(&mut rows) };
        let taken: Vec<usize> = pivots.iter().map(|p| n - 1 - p).collect();
        let basis: Vec<Word> = (0..n).filter(|i| !taken.contains(i)).map(|i| words[i].clone()).collect();
        cache::store(uq, c, &basis);
        basis
    }

    /// Certificate that `x` lies in the ideal, per homogeneous component.
    pub fn membership(&self, uq: &Uq, x: &NCPoly) -> Option<IdealCertificate> {
        let mut terms = Vec::new();
        for ((kexp, c), comp) in x.components(self.rank) {
            if kexp.iter().any(|&k| k != 0) {
                // K-prefixed components: strip the prefix, membership is unchanged
                let stripped = NCPoly {
                    terms: comp.terms.iter().map(|(m, v)| (Mono { kexp: vec![0; self.rank], word: m.word.clone() }, v.clone())).collect(),
                };
                let cert = self.membership(uq, &stripped)?;
                terms.extend(cert.terms);
                continue;
            }
            let (words, cols) = self.matrix(uq, &c);
            let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
            let mut target = vec![RatFunc::zero(); words.len()];
            for (m, v) in &comp.terms {
                target[index[&m.word]] = v.clone();
            }
            let vecs: Vec<Vec<RatFunc>> = cols.iter().map(|(_, v)| v.clone()).collect();
            let sol = linalg::solve(&vecs, &target)?;
            for ((u, ri, v), coeff) in cols.iter().map(|(l, _)| l).zip(sol.particular) {
                if !coeff.is_zero() {
                    let r = &self.relations[*ri];
                    terms.push(IdealTerm { left: u.clone(), relation: (r.i, r.j), right: v.clone(), coeff });
                }
            }
        }
        Some(IdealCertificate { terms })
    }

    pub fn expand(&self, uq: &Uq, cert: &IdealCertificate) -> NCPoly {
        let mut out = NCPoly::zero();
        for t in &cert.terms {
            let r = &self.relations.iter().find(|r| (r.i, r.j) == t.relation).unwrap().poly;
            out = out.add(&uq.mul_all(&[&uq.word(&t.left), r, &uq.word(&t.right)]).scale(&t.coeff));
        }
        out
    }
}

/// Solve `target = sum c_i templates_i` over `Q(q)` on the words the inputs touch.
pub fn solve_identity(target: &NCPoly, templates: &[NCPoly]) -> Option<Solution<RatFunc>> {
    let mut monos: Vec<&Mono> = target.terms.keys().collect();
    for t in templates {
        monos.extend(t.terms.keys());
    }
    monos.sort();
    monos.dedup();
    let index: BTreeMap<&Mono, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let vec_of = |p: &NCPoly| {
        let mut v = vec![RatFunc::zero(); monos.len()];
        for (m, c) in &p.terms {
            v[index[m]] = c.clone();
        }
        v
    };
    let cols: Vec<Vec<RatFunc>> = templates.iter().map(vec_of).collect();
    linalg::solve(&cols, &vec_of(target))
}

/// On-disk cache of quotient bases, keyed by type and content.
pub mod cache {
    use super::*;
    use std::path::PathBuf;

    pub const ENV: &str = "QCOISO_CACHE_DIR";

    fn path(uq: &Uq, c: &[i64]) -> Option<PathBuf> {
        let dir = std::env::var_os(ENV)?;
        let key: Vec<String> = c.iter().map(|x| x.to_string()).collect();
        Some(PathBuf::from(dir).join(format!("{}-{}.json", uq.rs.ty, key.join("_"))))
    }

    pub fn load(uq: &Uq, c: &[i64]) -> Option<Vec<Word>> {
        let text = std::fs::read_to_string(path(uq, c)?).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn store(uq: &Uq, c: &[i64], basis: &[Word]) {
        if let Some(p) = path(uq, c) {
            if let Some(dir) = p.parent() {
                let _ = std::fs::create_dir_all(dir);
            }
            if let Ok(s) = serde_json::to_string(basis) {
                let _ = std::fs::write(p, s);
            }
        }
    }
}
