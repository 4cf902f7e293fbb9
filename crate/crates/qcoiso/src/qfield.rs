//! Exact arithmetic in Q(q).
//!
//! [`IntPoly`] is a dense polynomial in `q` with big integer coefficients and
//! [`RatFunc`] a reduced quotient of two of them. Negative powers of `q` live in
//! the denominator, so `q + q^-1` is stored as `(q^2+1)/q`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("division by zero in Q(q)")]
    DivisionByZero,
    #[error("not regular at q=1")]
    NotRegular,
    #[error("q-binomial out of range: m={m}, r={r}, d={d}")]
    BinomialRange { m: i64, r: i64, d: i64 },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Polynomial in `q`; `coeffs[i]` is the coefficient of `q^i`, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * q^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Iterator over `(exponent, coefficient)` for nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn is_monomial(&self) -> bool {
        self.num_terms() == 1
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
        }
        g
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    fn div_scalar_exact(&self, c: &BigInt) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|x| x / c).collect() }
    }

    /// Multiply by `q^k`.
    pub fn shift_up(&self, k: usize) -> IntPoly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: v }
    }

    /// Divide by `q^k`; caller guarantees divisibility.
    fn shift_down(&self, k: usize) -> IntPoly {
        if k == 0 {
            return self.clone();
        }
        IntPoly { coeffs: self.coeffs[k..].to_vec() }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc + c)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.lead().unwrap().is_negative() {
            c = -c;
        }
        if c.is_one() {
            self.clone()
        } else {
            self.div_scalar_exact(&c)
        }
    }

    /// Pseudo-remainder of `self` by `d`.
    fn prem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("prem by zero");
        let lc = d.lead().unwrap().clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let t = r.last().unwrap().clone();
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[i + k] -= &t * dc;
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        IntPoly::from_coeffs(r)
    }

    /// Exact quotient `self / d`, assuming `d` divides `self` in Z[q].
    pub fn div_exact(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("division by zero polynomial");
        if d.coeffs.len() == 1 {
            return self.div_scalar_exact(&d.coeffs[0]);
        }
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut r = self.coeffs.clone();
        let n = r.len();
        assert!(n > dd, "inexact polynomial division");
        let mut q = vec![BigInt::zero(); n - dd];
        let lc = d.lead().unwrap();
        for k in (0..n - dd).rev() {
            let t = &r[k + dd];
            if t.is_zero() {
                continue;
            }
            let (qt, rem) = t.div_rem(lc);
            assert!(rem.is_zero(), "inexact polynomial division");
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[i + k] -= &qt * dc;
            }
            q[k] = qt;
        }
        debug_assert!(r.iter().all(|c| c.is_zero()), "inexact polynomial division");
        IntPoly::from_coeffs(q)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let low = self.low_order().unwrap().min(other.low_order().unwrap());
        let a = self.shift_down(self.low_order().unwrap());
        let b = other.shift_down(other.low_order().unwrap());
        let g = if a.degree() == Some(0) || b.degree() == Some(0) {
            IntPoly::one()
        } else {
            let (mut a, mut b) = if a.degree() >= b.degree() {
                (a.primitive_part(), b.primitive_part())
            } else {
                (b.primitive_part(), a.primitive_part())
            };
            loop {
                let r = a.prem(&b);
                if r.is_zero() {
                    break b;
                }
                if r.degree() == Some(0) {
                    break IntPoly::one();
                }
                a = b;
                b = r.primitive_part();
            }
        };
        g.shift_up(low)
    }

    fn cmp_lead_sign(&self) -> Ordering {
        match self.lead() {
            None => Ordering::Equal,
            Some(c) => c.sign().cmp(&num_bigint::Sign::NoSign),
        }
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, o: &IntPoly) -> IntPoly {
        let (long, short) = if self.coeffs.len() >= o.coeffs.len() { (self, o) } else { (o, self) };
        let mut v = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            v[i] += c;
        }
        IntPoly::from_coeffs(v)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, o: &IntPoly) -> IntPoly {
        let mut v = self.coeffs.clone();
        if v.len() < o.coeffs.len() {
            v.resize(o.coeffs.len(), BigInt::zero());
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            v[i] -= c;
        }
        IntPoly::from_coeffs(v)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        IntPoly::from_coeffs(v)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{a}*q^{e}")?,
            }
        }
        Ok(())
    }
}

/// Element of Q(q) in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: IntPoly::zero(), den: IntPoly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: IntPoly::one(), den: IntPoly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        RatFunc { num: IntPoly::constant(BigInt::from(c)), den: IntPoly::one() }
    }

    pub fn from_bigint(c: BigInt) -> Self {
        RatFunc { num: IntPoly::constant(c), den: IntPoly::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        RatFunc::canonicalize(IntPoly::constant(r.numer().clone()), IntPoly::constant(r.denom().clone()))
            .expect("rational with zero denominator")
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RatFunc { num: p, den: IntPoly::one() }
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        if k >= 0 {
            RatFunc { num: IntPoly::monomial(BigInt::one(), k as usize), den: IntPoly::one() }
        } else {
            RatFunc { num: IntPoly::one(), den: IntPoly::monomial(BigInt::one(), (-k) as usize) }
        }
    }

    /// `c * q^k`
    pub fn monomial(c: i64, k: i64) -> Self {
        RatFunc::q_pow(k).scale_int(c)
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    /// Reduce `num/den` to the unique canonical representative.
    pub fn canonicalize(num: IntPoly, den: IntPoly) -> Result<Self, QError> {
        if den.is_zero() {
            return Err(QError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let (mut num, mut den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g), den.div_exact(&g))
            }
        };
        let mut c = num.content().gcd(&den.content());
        if den.cmp_lead_sign() == Ordering::Less {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar_exact(&c);
            den = den.div_scalar_exact(&c);
        }
        Ok(RatFunc { num, den })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is a power of `q` times a constant.
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    pub fn scale_int(&self, c: i64) -> Self {
        if c == 0 {
            return RatFunc::zero();
        }
        RatFunc::canonicalize(self.num.scale(&BigInt::from(c)), self.den.clone()).unwrap()
    }

    pub fn inv(&self) -> Result<Self, QError> {
        RatFunc::canonicalize(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, o: &RatFunc) -> Result<Self, QError> {
        if o.is_zero() {
            return Err(QError::DivisionByZero);
        }
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self, QError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> Result<BigRational, QError> {
        let d = self.den.eval_at_one();
        if d.is_zero() {
            return Err(QError::NotRegular);
        }
        Ok(BigRational::new(self.num.eval_at_one(), d))
    }

    pub fn is_regular_at_one(&self) -> bool {
        !self.den.eval_at_one().is_zero()
    }

    pub fn vanishes_at_one(&self) -> bool {
        self.num.eval_at_one().is_zero()
    }

    /// Expansion in `t = q - 1`: returns `low` and the coefficients of
    /// `t^low, ..., t^upto` (empty when `low > upto`).
    pub fn expand_at_one(&self, upto: i64) -> (i64, Vec<BigRational>) {
        if self.is_zero() {
            return (upto + 1, Vec::new());
        }
        let (vn, n) = taylor_at_one(&self.num);
        let (vd, d) = taylor_at_one(&self.den);
        let low = vn - vd;
        if low > upto {
            return (low, Vec::new());
        }
        let len = (upto - low + 1) as usize;
        let get = |p: &[BigRational], i: usize| p.get(i).cloned().unwrap_or_else(BigRational::zero);
        let mut out: Vec<BigRational> = Vec::with_capacity(len);
        for k in 0..len {
            let mut s = get(&n, k);
            for i in 1..=k {
                s -= get(&d, i) * &out[k - i];
            }
            out.push(s / &d[0]);
        }
        (low, out)
    }

    /// Value at an integer point, `None` at a pole.
    pub fn eval_int(&self, x: &BigInt) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(BigRational::new(self.num.eval(x), d))
        }
    }

    /// Value modulo a prime `p` at `q = x`; `None` when the denominator vanishes.
    pub fn eval_mod(&self, x: u64, p: u64) -> Option<u64> {
        let d = poly_eval_mod(&self.den, x, p);
        if d == 0 {
            return None;
        }
        Some(mulmod(poly_eval_mod(&self.num, x, p), invmod(d, p), p))
    }

    pub fn parse(s: &str) -> Result<Self, QError> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }

    fn add_impl(&self, o: &RatFunc, negate: bool) -> RatFunc {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -o } else { o.clone() };
        }
        let on = if negate { -&o.num } else { o.num.clone() };
        if self.den == o.den {
            return RatFunc::canonicalize(&self.num + &on, self.den.clone()).unwrap();
        }
        let num = &(&self.num * &o.den) + &(&on * &self.den);
        RatFunc::canonicalize(num, &self.den * &o.den).unwrap()
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn poly_eval_mod(poly: &IntPoly, x: u64, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let mut acc = 0u64;
    for c in poly.coeffs.iter().rev() {
        let cm = c.mod_floor(&pb);
        let cm: u64 = cm.try_into().unwrap();
        acc = (mulmod(acc, x, p) + cm) % p;
    }
    acc
}

impl PartialOrd for RatFunc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatFunc {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num.coeffs.len(), &self.num.coeffs, self.den.coeffs.len(), &self.den.coeffs).cmp(&(
            other.num.coeffs.len(),
            &other.num.coeffs,
            other.den.coeffs.len(),
            &other.den.coeffs,
        ))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        self.add_impl(o, false)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self.add_impl(o, true)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: &self.num * &o.num, den: IntPoly::one() };
        }
        RatFunc::canonicalize(&self.num * &o.num, &self.den * &o.den).unwrap()
    }
}

/// Panics on division by zero; use [`RatFunc::checked_div`] to get an error.
impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        self.checked_div(o).expect("division by zero in Q(q)")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                (&self).$m(&o)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: &RatFunc) -> RatFunc {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() == 1 {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        let dt = self.den.num_terms();
        let plain = dt == 1 && (self.den.degree() == Some(0) || self.den.lead().unwrap().is_one());
        if plain {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl serde::Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for RatFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        RatFunc::parse(&s).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> QError {
        QError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc, QError> {
        let mut v = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            v = if c == b'+' { &v + &t } else { &v - &t };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<RatFunc, QError> {
        let mut v = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let t = self.unary()?;
            v = if c == b'*' { &v * &t } else { v.checked_div(&t)? };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<RatFunc, QError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc, QError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = match self.peek() {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ => false,
            };
            let e = self.integer()?;
            let e: i64 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return base.pow(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, QError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }

    fn atom(&mut self) -> Result<RatFunc, QError> {
        match self.peek() {
            Some(b'q') => {
                self.pos += 1;
                Ok(RatFunc::q_pow(1))
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let v = RatFunc::from_bigint(n);
                // allow `2q` as shorthand for `2*q`
                if self.s.get(self.pos) == Some(&b'q') {
                    let t = self.power()?;
                    return Ok(&v * &t);
                }
                Ok(v)
            }
            _ => Err(self.err("expected integer, q or '('")),
        }
    }
}

/// Balanced q-number `[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})`.
pub fn q_number(n: i64, d: i64) -> RatFunc {
    if n == 0 {
        return RatFunc::zero();
    }
    let sign = if n < 0 { -1 } else { 1 };
    let n = n.abs();
    let mut acc = RatFunc::zero();
    for k in 0..n {
        acc = &acc + &RatFunc::q_pow(d * (n - 1 - 2 * k));
    }
    acc.scale_int(sign)
}

/// Balanced q-binomial coefficient in `q^d`.
pub fn q_binomial(m: i64, r: i64, d: i64) -> Result<RatFunc, QError> {
    if m < 0 || r < 0 || r > m || d < 1 {
        return Err(QError::BinomialRange { m, r, d });
    }
    // Pascal rule: [m r] = q^{-dr}[m-1 r] + q^{d(m-r)}[m-1 r-1]
    let mut row = vec![RatFunc::one()];
    for mm in 1..=m {
        let mut next = Vec::with_capacity(row.len() + 1);
        for rr in 0..=mm {
            let a = if rr < mm { &row[rr as usize] * &RatFunc::q_pow(-d * rr) } else { RatFunc::zero() };
            let b = if rr > 0 { &row[rr as usize - 1] * &RatFunc::q_pow(d * (mm - rr)) } else { RatFunc::zero() };
            next.push(&a + &b);
        }
        row = next;
    }
    Ok(row[r as usize].clone())
}

/// `p(1 + t) = t^v * (c_0 + c_1 t + ...)` with `c_0 != 0`; returns `(v, c)`.
fn taylor_at_one(p: &IntPoly) -> (i64, Vec<BigRational>) {
    let a = p.coeffs();
    let n = a.len();
    let mut c = vec![BigInt::zero(); n];
    // c_j = sum_k a_k binom(k, j)
    for (k, ak) in a.iter().enumerate() {
        if ak.is_zero() {
            continue;
        }
        let mut b = BigInt::one();
        for (j, cj) in c.iter_mut().enumerate().take(k + 1) {
            *cj += ak * &b;
            b = b * BigInt::from(k - j) / BigInt::from(j + 1);
        }
    }
    let v = c.iter().position(|x| !x.is_zero()).expect("nonzero polynomial");
    (v as i64, c[v..].iter().map(|x| BigRational::from_integer(x.clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let r = RatFunc::canonicalize(IntPoly::from_i64s(&[-1, 0, 1]), IntPoly::from_i64s(&[-1, 1])).unwrap();
        assert_eq!(r.num(), &IntPoly::from_i64s(&[1, 1]));
        assert!(r.den().is_one());
        let r = RatFunc::canonicalize(IntPoly::from_i64s(&[0, 2]), IntPoly::from_i64s(&[4])).unwrap();
        assert_eq!((r.num(), r.den()), (&IntPoly::from_i64s(&[0, 1]), &IntPoly::from_i64s(&[2])));
        let r = RatFunc::canonicalize(IntPoly::from_i64s(&[-1]), IntPoly::from_i64s(&[-1, -1])).unwrap();
        assert_eq!((r.num(), r.den()), (&IntPoly::from_i64s(&[1]), &IntPoly::from_i64s(&[1, 1])));
        assert_eq!(RatFunc::canonicalize(IntPoly::one(), IntPoly::zero()), Err(QError::DivisionByZero));
        assert_eq!(QError::DivisionByZero.to_string(), "division by zero in Q(q)");
    }

    #[test]
    fn arith_examples() {
        let s = rf("1/(q+q^-1)") + rf("q^2/(q+q^-1)");
        assert_eq!(s, rf("q"));
        assert!((rf("q") * rf("q^-1")).is_one());
        assert_eq!(rf("q+q^-1").to_string(), "(q^2+1)/q");
    }

    #[test]
    fn eval_examples() {
        assert!(rf("1-q").eval_at_one().unwrap().is_zero());
        assert_eq!(rf("1/(q+q^-1)").eval_at_one().unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(rf("1/(q-1)").eval_at_one(), Err(QError::NotRegular));
    }

    #[test]
    fn render_and_parse() {
        assert_eq!(rf("-(q^2)/(q^2+1)*q").to_string(), "-q^3/(q^2+1)");
        assert_eq!(rf("2q^2 - 3").to_string(), "2*q^2-3");
        assert_eq!(rf("3/(2*q)").to_string(), "3/(2*q)");
        for s in ["-q^3/(q^2+1)", "(q^4+q^2+1)/q^2", "1/2", "-7", "3/(2*q)", "(2*q+1)/(3*q^2-1)"] {
            assert_eq!(rf(s).to_string(), s);
        }
        assert!(RatFunc::parse("q^").is_err());
        assert!(RatFunc::parse("1/(q-q)").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(q_binomial(2, 1, 1).unwrap(), rf("q+q^-1"));
        assert!(q_binomial(5, 0, 3).unwrap().is_one());
        assert!(q_binomial(2, 3, 1).is_err());
        for m in 0..7 {
            for r in 0..=m {
                assert_eq!(q_binomial(m, r, 2).unwrap(), q_binomial(m, m - r, 2).unwrap());
            }
        }
    }

    #[test]
    fn gcd_basic() {
        let a = IntPoly::from_i64s(&[-1, 0, 1]);
        let b = IntPoly::from_i64s(&[1, 2, 1]);
        assert_eq!(a.gcd(&b), IntPoly::from_i64s(&[1, 1]));
        let a = IntPoly::from_i64s(&[0, 0, 6, 6]);
        let b = IntPoly::from_i64s(&[0, 4]);
        assert_eq!(a.gcd(&b), IntPoly::from_i64s(&[0, 1]));
    }
}
