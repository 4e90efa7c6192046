//! Sparse multivariate polynomials over an exact field.
//!
//! Terms are kept in graded-lexicographic order with `x1 > x2 > ...`. A
//! polynomial does not carry its variable count: exponent vectors have
//! trailing zeros trimmed, so constants are shared by every chart and the
//! arity is only checked when a point or a substitution is supplied.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::field::{Conjugate, Field};

/// Exponent vector with trailing zeros removed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of variable slots actually used (index of last nonzero exponent + 1).
    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        let e = (0..len).map(|i| self.exponent(i) + other.exponent(i)).collect();
        Monomial(e)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut e = Vec::with_capacity(self.0.len());
        for i in 0..self.0.len() {
            let (a, b) = (self.exponent(i), other.exponent(i));
            if b > a {
                return None;
            }
            e.push(a - b);
        }
        Some(Monomial::new(e))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().min(other.0.len());
        Monomial::new((0..len).map(|i| self.0[i].min(other.0[i])).collect())
    }

    fn with_exponent(&self, i: usize, k: u32) -> Monomial {
        let mut e = self.0.clone();
        if e.len() <= i {
            e.resize(i + 1, 0);
        }
        e[i] = k;
        Monomial::new(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // graded lex; on equal total degree the trimmed vectors compare like
        // zero-padded ones, larger exponent of an earlier variable wins
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Field> MultiPoly<C> {
    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MultiPoly { terms }
    }

    pub fn var(i: usize) -> Self {
        MultiPoly::term(C::one(), Monomial::var(i))
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<C> {
        if self.is_zero() {
            Some(C::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// Smallest number of variables the polynomial can live in.
    pub fn support_len(&self) -> usize {
        self.terms.keys().map(|m| m.support_len()).max().unwrap_or(0)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coefficient(&self) -> C {
        self.terms.values().next_back().cloned().unwrap_or_else(C::zero)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect() }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        let lc = self.leading_coefficient();
        if lc.is_zero() || lc.is_one() {
            return self.clone();
        }
        self.scale(&(C::one() / lc))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Self {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let k = m.exponent(var);
            if k == 0 {
                continue;
            }
            out.add_term(m.with_exponent(var, k - 1), c.clone() * C::from_int(k as i64));
        }
        out
    }

    pub fn eval(&self, point: &[C]) -> Result<C> {
        let need = self.support_len();
        if need > point.len() {
            return Err(AlgebraError::ArityMismatch { expected: need, got: point.len() });
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = t * point[i].clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Replaces variable `i` by `values[i]` in any commutative algebra over `C`.
    pub fn substitute_with<T, F>(&self, values: &[T], embed: F) -> Result<T>
    where
        T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
        F: Fn(&C) -> T,
    {
        let need = self.support_len();
        if need > values.len() {
            return Err(AlgebraError::ArityMismatch { expected: need, got: values.len() });
        }
        let mut powers: Vec<Vec<T>> = values.iter().map(|v| vec![T::one(), v.clone()]).collect();
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = embed(c);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().clone() * values[i].clone();
                    powers[i].push(next);
                }
                t = t * powers[i][e as usize].clone();
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn substitute(&self, values: &[MultiPoly<C>]) -> Result<MultiPoly<C>> {
        self.substitute_with(values, |c| MultiPoly::constant(c.clone()))
    }

    /// Coefficients with respect to `var`, indexed by power; each coefficient is free of `var`.
    pub fn coefficients_in(&self, var: usize) -> BTreeMap<u32, MultiPoly<C>> {
        let mut out: BTreeMap<u32, MultiPoly<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.exponent(var);
            out.entry(k).or_insert_with(MultiPoly::zero).add_term(m.with_exponent(var, 0), c.clone());
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &MultiPoly<C>) -> Option<MultiPoly<C>> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&(C::one() / c)));
        }
        let lm = divisor.leading_monomial().unwrap().clone();
        let lc = divisor.leading_coefficient();
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some(m) = rem.leading_monomial().cloned() {
            let qm = m.checked_div(&lm)?;
            let qc = rem.leading_coefficient() / lc.clone();
            let t = MultiPoly::term(qc, qm);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    pub fn map_coefficients(&self, f: impl Fn(&C) -> C) -> Self {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Renders with the given variable names (`x1, x2, ...` past the end of `names`).
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a, C> {
        PolyDisplay { poly: self, names }
    }
}

impl<C: Field + Conjugate> MultiPoly<C> {
    pub fn conj(&self) -> Self {
        self.map_coefficients(|c| c.conj())
    }
}

impl<C: Field> Zero for MultiPoly<C> {
    fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Field> One for MultiPoly<C> {
    fn one() -> Self {
        MultiPoly::constant(C::one())
    }
}

impl<'a, C: Field> Add<&'a MultiPoly<C>> for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: &'a MultiPoly<C>) -> MultiPoly<C> {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a, C: Field> Sub<&'a MultiPoly<C>> for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: &'a MultiPoly<C>) -> MultiPoly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, C: Field> Mul<&'a MultiPoly<C>> for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: &'a MultiPoly<C>) -> MultiPoly<C> {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Field> Add for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: MultiPoly<C>) -> MultiPoly<C> {
        &self + &rhs
    }
}

impl<C: Field> Sub for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: MultiPoly<C>) -> MultiPoly<C> {
        &self - &rhs
    }
}

impl<C: Field> Mul for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: MultiPoly<C>) -> MultiPoly<C> {
        &self * &rhs
    }
}

impl<C: Field> Neg for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        MultiPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

// ---------------------------------------------------------------------------
// gcd

/// Content of `p` viewed as a polynomial in `var`: the monic gcd of its coefficients.
fn content_in<C: Field>(p: &MultiPoly<C>, var: usize) -> MultiPoly<C> {
    let mut g = MultiPoly::zero();
    for c in p.coefficients_in(var).into_values() {
        g = gcd(&g, &c);
        if g.is_constant() && !g.is_zero() {
            return MultiPoly::one();
        }
    }
    g
}

fn primitive_part_in<C: Field>(p: &MultiPoly<C>, var: usize) -> MultiPoly<C> {
    let c = content_in(p, var);
    p.div_exact(&c).expect("content divides its polynomial")
}

/// Largest monomial dividing every term.
fn monomial_content<C: Field>(p: &MultiPoly<C>) -> Monomial {
    let mut it = p.terms().map(|(m, _)| m);
    let first = it.next().cloned().unwrap_or_else(Monomial::one);
    it.fold(first, |acc, m| acc.gcd(m))
}

fn div_monomial<C: Field>(p: &MultiPoly<C>, m: &Monomial) -> MultiPoly<C> {
    MultiPoly::from_terms(p.terms().map(|(t, c)| (t.checked_div(m).unwrap(), c.clone())))
}

/// Pseudo-remainder of `a` by `b` in `var`, up to a nonzero factor free of `var`.
fn pseudo_rem<C: Field>(a: &MultiPoly<C>, b: &MultiPoly<C>, var: usize) -> MultiPoly<C> {
    let db = b.degree_in(var);
    let lb = b.coefficients_in(var).remove(&db).unwrap();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = r.coefficients_in(var).remove(&dr).unwrap();
        let shift = Monomial::var(var).with_exponent(var, dr - db);
        let shifted = b.mul_monomial(&shift);
        r = &(&r * &lb) - &(&lr * &shifted);
        if !r.is_zero() {
            r = r.monic();
        }
    }
    r
}

/// Monic greatest common divisor, computed by recursive primitive remainder
/// sequences. `gcd(0, 0) = 0`.
pub fn gcd<C: Field>(a: &MultiPoly<C>, b: &MultiPoly<C>) -> MultiPoly<C> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if a == b {
        return a.monic();
    }
    let (ma, mb) = (monomial_content(a), monomial_content(b));
    if !ma.is_one() || !mb.is_one() {
        let m = ma.gcd(&mb);
        let g = gcd(&div_monomial(a, &ma), &div_monomial(b, &mb));
        return g.mul_monomial(&m);
    }
    if a.num_terms() == 1 || b.num_terms() == 1 {
        return MultiPoly::one();
    }
    if a.num_terms() <= b.num_terms() {
        if b.div_exact(a).is_some() {
            return a.monic();
        }
    } else if a.div_exact(b).is_some() {
        return b.monic();
    }
    let len = a.support_len().max(b.support_len());
    let var = (0..len).rev().find(|&i| a.degree_in(i) > 0 || b.degree_in(i) > 0).expect("nonconstant polynomial has a variable");
    let (da, db) = (a.degree_in(var), b.degree_in(var));
    if da == 0 {
        return gcd(a, &content_in(b, var));
    }
    if db == 0 {
        return gcd(&content_in(a, var), b);
    }
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).unwrap();
    let mut q = b.div_exact(&cb).unwrap();
    if p.degree_in(var) < q.degree_in(var) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = pseudo_rem(&p, &q, var);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(var) == 0 {
            break MultiPoly::one();
        }
        p = q;
        q = primitive_part_in(&r, var);
    };
    (&c * &primitive_part_in(&g, var)).monic()
}

// ---------------------------------------------------------------------------
// printing

pub struct PolyDisplay<'a, C> {
    poly: &'a MultiPoly<C>,
    names: &'a [String],
}

pub(crate) fn var_name(names: &[String], i: usize) -> String {
    names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1))
}

pub(crate) fn fmt_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(var_name(names, i)),
            _ => parts.push(format!("{}^{}", var_name(names, i), e)),
        }
    }
    parts.join("*")
}

impl<C: Field> fmt::Display for PolyDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let negative = c.prints_negative();
            let abs = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", fmt_monomial(m, self.names))?;
            } else {
                write!(f, "{}*{}", abs, fmt_monomial(m, self.names))?;
            }
        }
        Ok(())
    }
}

impl<C: Field> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}
