//! Quantum shuffle realization of `U_q(n+)`.
//!
//! `Phi(E_{i_1} ... E_{i_d}) = (i_1) * (i_2) * ... * (i_d)` where `*` is the
//! shuffle product twisted by `q^{-(alpha_a, alpha_b)}` each time a letter `b`
//! of the right factor jumps over a letter `a` of the left one. `Phi` is an
//! algebra map out of the free algebra whose kernel is the q-Serre ideal, so
//! membership modulo the ideal becomes plain linear algebra on `Phi`-images.
//! Pivots are chosen modulo a prime at a random point and every claim is then
//! re-derived over `Q(q)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg::{self, Field, Fp, PRIME};
use crate::qfield::{powmod, IntPoly, RatFunc};
use crate::uqalg::{NCPoly, Uq, Word};

/// Integer Laurent polynomial `sum c_k q^{low + k}`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Laurent {
    low: i64,
    c: Vec<i128>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn monomial(c: i128, k: i64) -> Self {
        if c == 0 {
            Laurent::zero()
        } else {
            Laurent { low: k, c: vec![c] }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|x| **x == 0).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.low += lead as i64;
        }
        if self.c.is_empty() {
            self.low = 0;
        }
    }

    /// `self += a * b * q^shift`.
    pub fn add_mul(&mut self, a: &Laurent, b: &Laurent, shift: i64) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let low = a.low + b.low + shift;
        let len = a.c.len() + b.c.len() - 1;
        self.reserve(low, len);
        let off = (low - self.low) as usize;
        for (i, x) in a.c.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                let p = x.checked_mul(*y).expect("Laurent coefficient overflow");
                let slot = &mut self.c[off + i + j];
                *slot = slot.checked_add(p).expect("Laurent coefficient overflow");
            }
        }
        self.trim();
    }

    pub fn add_scaled(&mut self, a: &Laurent, k: i128) {
        self.add_mul(a, &Laurent::monomial(k, 0), 0);
    }

    fn reserve(&mut self, low: i64, len: usize) {
        if self.c.is_empty() {
            self.low = low;
            self.c = vec![0; len];
            return;
        }
        if low < self.low {
            let pad = (self.low - low) as usize;
            let mut v = vec![0; pad];
            v.append(&mut self.c);
            self.c = v;
            self.low = low;
        }
        let need = (low - self.low) as usize + len;
        if self.c.len() < need {
            self.c.resize(need, 0);
        }
    }

    pub fn from_ratfunc(r: &RatFunc) -> Option<Laurent> {
        if r.is_zero() {
            return Some(Laurent::zero());
        }
        let den = r.den();
        if !den.is_monomial() || !den.lead().unwrap().is_one() {
            return None;
        }
        let k = den.low_order().unwrap() as i64;
        let mut c = Vec::new();
        for x in r.num().coeffs() {
            c.push(i128::try_from(x.clone()).ok()?);
        }
        let mut l = Laurent { low: -k, c };
        l.trim();
        Some(l)
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        let (p, low) = self.to_poly();
        &RatFunc::from_poly(p) * &RatFunc::q_pow(low)
    }

    /// `(p, low)` with `self = p * q^low`.
    pub fn to_poly(&self) -> (IntPoly, i64) {
        (IntPoly::from_coeffs(self.c.iter().map(|x| BigInt::from(*x)).collect()), self.low)
    }

    pub fn eval_mod(&self, x: u64) -> Fp {
        let mut acc = Fp(0);
        for c in self.c.iter().rev() {
            acc = acc.mul(&Fp(x)).add(&Fp::new(*c));
        }
        let xp = if self.low >= 0 {
            Fp(powmod(x, self.low as u64, PRIME))
        } else {
            Fp(1).div(&Fp(powmod(x, (-self.low) as u64, PRIME)))
        };
        acc.mul(&xp)
    }
}

/// Vector in the shuffle algebra.
pub type ShVec = HashMap<Word, Laurent>;

fn add_into(v: &mut ShVec, w: Word, a: &Laurent, b: &Laurent, shift: i64) {
    let e = v.entry(w.clone()).or_default();
    e.add_mul(a, b, shift);
    if e.is_zero() {
        v.remove(&w);
    }
}

/// Interleavings of `u` and `v` with their twist exponents.
pub fn shuffle_words(uq: &Uq, u: &[u8], v: &[u8]) -> Vec<(Word, i64)> {
    let (m, n) = (u.len(), v.len());
    // suf[i][j] = sum_{s >= i} (u_s, v_j)
    let mut suf = vec![vec![0i64; n]; m + 1];
    for i in (0..m).rev() {
        for j in 0..n {
            suf[i][j] = suf[i + 1][j] + uq.form[u[i] as usize][v[j] as usize];
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m + n);
    fn go(i: usize, j: usize, e: i64, u: &[u8], v: &[u8], suf: &[Vec<i64>], cur: &mut Word, out: &mut Vec<(Word, i64)>) {
        if i == u.len() && j == v.len() {
            out.push((cur.clone(), e));
            return;
        }
        if i < u.len() {
            cur.push(u[i]);
            go(i + 1, j, e, u, v, suf, cur, out);
            cur.pop();
        }
        if j < v.len() {
            cur.push(v[j]);
            go(i, j + 1, e - suf[i][j], u, v, suf, cur, out);
            cur.pop();
        }
    }
    go(0, 0, 0, u, v, &suf, &mut cur, &mut out);
    out
}

pub fn shuffle(uq: &Uq, a: &ShVec, b: &ShVec) -> ShVec {
    let mut out = ShVec::new();
    let mut cache: HashMap<(&Word, &Word), Vec<(Word, i64)>> = HashMap::new();
    for (u, ca) in a {
        for (v, cb) in b {
            let ws = cache.entry((u, v)).or_insert_with(|| shuffle_words(uq, u, v));
            for (w, e) in ws.iter() {
                add_into(&mut out, w.clone(), ca, cb, *e);
            }
        }
    }
    out
}

pub fn phi_word(uq: &Uq, w: &[u8]) -> ShVec {
    let mut acc = ShVec::new();
    acc.insert(Vec::new(), Laurent::monomial(1, 0));
    for &l in w {
        let mut letter = ShVec::new();
        letter.insert(vec![l], Laurent::monomial(1, 0));
        acc = shuffle(uq, &acc, &letter);
    }
    acc
}

/// `Phi(x)` for a `K`-free element with integer Laurent coefficients.
pub fn phi(uq: &Uq, x: &NCPoly) -> ShVec {
    let mut out = ShVec::new();
    let mut memo: HashMap<Word, ShVec> = HashMap::new();
    for (m, c) in &x.terms {
        assert!(m.kexp.iter().all(|&k| k == 0), "phi is defined on the E-subalgebra");
        let l = Laurent::from_ratfunc(c).expect("phi needs integer Laurent coefficients");
        let pw = memo.entry(m.word.clone()).or_insert_with(|| phi_word(uq, &m.word));
        for (w, v) in pw.iter() {
            add_into(&mut out, w.clone(), &l, v, 0);
        }
    }
    out
}

/// Rescale `x` by a polynomial in `q` so that its coefficients become integer
/// Laurent polynomials; returns the factor used.
pub fn integralize(x: &NCPoly) -> (NCPoly, RatFunc) {
    let mut den = IntPoly::one();
    for c in x.terms.values() {
        let d = c.den();
        let g = den.gcd(d);
        den = &den * &d.div_exact(&g);
    }
    let f = RatFunc::from_poly(den);
    let mut y = x.scale(&f);
    // a leftover rational content (from the primitive gcd) is cleared by an integer
    let mut k = BigInt::one();
    for c in y.terms.values() {
        if Laurent::from_ratfunc(c).is_none() {
            k = &k * c.den().lead().unwrap().abs();
        }
    }
    let f = if k.is_one() {
        f
    } else {
        y = y.scale(&RatFunc::from_bigint(k.clone()));
        &f * &RatFunc::from_bigint(k)
    };
    (y, f)
}

/// Outcome of expressing targets over a family of shuffle vectors.
#[derive(Clone, Debug)]
pub struct SpanOutcome {
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// For each non-pivot column: its coefficients over the pivot columns.
    pub relations: Vec<(usize, Vec<RatFunc>)>,
    /// For each target: coefficients over the pivot columns, or `None` if outside the span.
    pub solutions: Vec<Option<Vec<RatFunc>>>,
}

const POINTS: [u64; 4] = [1_234_567_891_011, 987_654_321_987, 555_555_555_557, 31_415_926_535_897];

/// Express every target over `cols`, deciding membership exactly over `Q(q)`.
pub fn span_solve(cols: &[ShVec], targets: &[ShVec]) -> SpanOutcome {
    for &x in &POINTS {
        if let Some(out) = span_solve_at(cols, targets, x) {
            return out;
        }
    }
    panic!("no good evaluation point found for the span solve");
}

fn span_solve_at(cols: &[ShVec], targets: &[ShVec], x: u64) -> Option<SpanOutcome> {
    let mut words: Vec<&Word> = cols.iter().chain(targets).flat_map(|v| v.keys()).collect();
    words.sort();
    words.dedup();
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let nw = words.len();
    let modvec = |v: &ShVec| {
        let mut out = vec![Fp(0); nw];
        for (w, c) in v {
            out[index[w]] = c.eval_mod(x);
        }
        out
    };
    let mcols: Vec<Vec<Fp>> = cols.iter().map(modvec).collect();
    let pivots = linalg::independent_subset(&mcols);
    let r = pivots.len();
    // rows making the pivot minor invertible
    let mut rows_sel = Vec::new();
    {
        let mut basis: Vec<(usize, Vec<Fp>)> = Vec::new();
        for w in 0..nw {
            if basis.len() == r {
                break;
            }
            let mut row: Vec<Fp> = pivots.iter().map(|&p| mcols[p][w]).collect();
            for (pc, b) in &basis {
                if !row[*pc].is_zero() {
                    let f = row[*pc];
                    for (a, bb) in row.iter_mut().zip(b) {
                        *a = a.sub(&f.mul(bb));
                    }
                }
            }
            if let Some(pc) = (0..r).find(|&c| !row[c].is_zero()) {
                let inv = Fp(1).div(&row[pc]);
                for a in row.iter_mut() {
                    *a = a.mul(&inv);
                }
                basis.push((pc, row));
                rows_sel.push(w);
            }
        }
    }
    let free: Vec<usize> = (0..cols.len()).filter(|c| !pivots.contains(c)).collect();
    let rhs: Vec<&ShVec> = free.iter().map(|&f| &cols[f]).chain(targets.iter()).collect();
    let zero = Laurent::zero();
    let get = |v: &ShVec, w: usize| v.get(words[w]).unwrap_or(&zero).to_ratfunc();
    let mut sys: Vec<Vec<RatFunc>> = rows_sel
        .iter()
        .map(|&w| {
            let mut row: Vec<RatFunc> = pivots.iter().map(|&p| get(&cols[p], w)).collect();
            row.extend(rhs.iter().map(|v| get(v, w)));
            row
        })
        .collect();
    let piv = if sys.is_empty() { Vec::new() } else { linalg::rref(&mut sys) };
    if piv.len() != r || piv.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    let coeffs: Vec<Vec<RatFunc>> = (0..rhs.len()).map(|k| (0..r).map(|i| sys[i][r + k].clone()).collect()).collect();
    let mut relations = Vec::new();
    for (k, &f) in free.iter().enumerate() {
        if !residual_zero(&pivots, cols, &cols[f], &coeffs[k], x) {
            return None;
        }
        relations.push((f, coeffs[k].clone()));
    }
    let solutions = targets
        .iter()
        .enumerate()
        .map(|(t, v)| {
            let c = &coeffs[free.len() + t];
            residual_zero(&pivots, cols, v, c, x).then(|| c.clone())
        })
        .collect();
    Some(SpanOutcome { rank: r, pivots, relations, solutions })
}

/// Exact test of `sum_k c_k cols[idx[k]] == v`.
pub fn combination_equals(cols: &[ShVec], idx: &[usize], c: &[RatFunc], v: &ShVec) -> bool {
    residual_zero(idx, cols, v, c, POINTS[0])
}

/// Exact test of `sum_p c_p cols[pivots[p]] == v`, with a cheap modular rejection first.
fn residual_zero(pivots: &[usize], cols: &[ShVec], v: &ShVec, c: &[RatFunc], x: u64) -> bool {
    let cm: Option<Vec<u64>> = c.iter().map(|r| r.eval_mod(x, PRIME)).collect();
    if let Some(cm) = &cm {
        let mut acc: HashMap<&Word, Fp> = HashMap::new();
        for (w, l) in v {
            *acc.entry(w).or_insert(Fp(0)) = l.eval_mod(x);
        }
        for (k, &p) in pivots.iter().enumerate() {
            if cm[k] == 0 {
                continue;
            }
            for (w, l) in &cols[p] {
                let e = acc.entry(w).or_insert(Fp(0));
                *e = e.sub(&Fp(cm[k]).mul(&l.eval_mod(x)));
            }
        }
        if acc.values().any(|f| f.0 != 0) {
            return false;
        }
    }
    // exact: clear denominators and compare integer Laurent polynomials
    let mut den = IntPoly::one();
    for r in c {
        let g = den.gcd(r.den());
        den = &den * &r.den().div_exact(&g);
    }
    let nums: Vec<IntPoly> = c.iter().map(|r| r.num() * &den.div_exact(r.den())).collect();
    let mut words: Vec<&Word> = v.keys().collect();
    for (k, &p) in pivots.iter().enumerate() {
        if !nums[k].is_zero() {
            words.extend(cols[p].keys());
        }
    }
    words.sort();
    words.dedup();
    for w in words {
        let mut acc = BigLaurent::default();
        if let Some(l) = v.get(w) {
            acc.add_poly_times(&den, l, -1);
        }
        for (k, &p) in pivots.iter().enumerate() {
            if let Some(l) = cols[p].get(w) {
                acc.add_poly_times(&nums[k], l, 1);
            }
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

#[derive(Default)]
struct BigLaurent {
    terms: HashMap<i64, BigInt>,
}

impl BigLaurent {
    fn add_poly_times(&mut self, p: &IntPoly, l: &Laurent, sign: i64) {
        for (i, a) in p.terms() {
            for (j, b) in l.c.iter().enumerate() {
                if *b == 0 {
                    continue;
                }
                let e = self.terms.entry(i as i64 + j as i64 + l.low).or_insert_with(BigInt::zero);
                *e += a * BigInt::from(*b) * sign;
            }
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.values().all(|x| x.is_zero())
    }
}

/// Evaluate a shuffle vector back into the free algebra (for reporting).
pub fn as_ncpoly(uq: &Uq, v: &ShVec) -> NCPoly {
    let mut p = NCPoly::zero();
    for (w, c) in v {
        p.add_term(crate::uqalg::Mono { kexp: vec![0; uq.rank], word: w.clone() }, c.to_ratfunc());
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{CartanType, RootSystem};

    fn uq(s: &str) -> Uq {
        Uq::new(&RootSystem::build(s.parse::<CartanType>().unwrap()).unwrap())
    }

    #[test]
    fn serre_in_kernel() {
        for s in ["A2", "B2", "C3", "G2", "D4"] {
            let u = uq(s);
            for r in u.serre_relations().relations {
                assert!(phi(&u, &r.poly).is_empty(), "{s} {} {}", r.i, r.j);
            }
        }
    }

    #[test]
    fn phi_is_multiplicative() {
        let u = uq("B2");
        let a = u.q_bracket(&u.e(0), &u.e(1), 2);
        let b = u.q_bracket(&u.e(1), &u.e(0), -1);
        let lhs = phi(&u, &u.mul(&a, &b));
        let rhs = shuffle(&u, &phi(&u, &a), &phi(&u, &b));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn laurent_round_trip() {
        let r = RatFunc::parse("q^-2 - 3 + 4q^5").unwrap();
        let l = Laurent::from_ratfunc(&r).unwrap();
        assert_eq!(l.to_ratfunc(), r);
        assert!(Laurent::from_ratfunc(&RatFunc::parse("1/(q+1)").unwrap()).is_none());
    }

    #[test]
    fn span_solve_decides() {
        let u = uq("A2");
        let e1 = phi(&u, &u.e(0));
        let e2 = phi(&u, &u.e(1));
        let cols = vec![shuffle(&u, &e1, &e2), shuffle(&u, &e2, &e1)];
        let t = phi(&u, &u.q_bracket(&u.e(0), &u.e(1), 1));
        let out = span_solve(&cols, &[t, phi(&u, &u.word(&[0, 0, 1]))]);
        assert_eq!(out.rank, 2);
        assert_eq!(out.solutions[0].as_ref().unwrap(), &vec![RatFunc::one(), RatFunc::q_pow(1).scale_int(-1)]);
        assert!(out.solutions[1].is_none());
    }
}
