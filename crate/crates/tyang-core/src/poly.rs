//! Sparse multivariate polynomials over Q(i, √2).
//!
//! Every polynomial in the crate lives in one fixed variable space
//! u, v, a1, a2, a3, a4: the two spectral parameters plus up to four
//! symbolic evaluation points. Exponent vectors are fixed-size arrays,
//! terms are kept sorted in descending lex order with no zero coefficients.

use crate::scalars::{FieldElem, Rat};
use num::Zero;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

pub const NVARS: usize = 6;
pub const VAR_NAMES: [&str; NVARS] = ["u", "v", "a1", "a2", "a3", "a4"];

pub const VAR_U: usize = 0;
pub const VAR_V: usize = 1;

/// Index of the n-th symbolic evaluation point (0-based).
pub fn var_point(k: usize) -> usize {
    assert!(k < 4, "at most four symbolic points");
    2 + k
}

pub type Expo = [u16; NVARS];

const E0: Expo = [0; NVARS];

fn expo_add(a: &Expo, b: &Expo) -> Expo {
    let mut r = E0;
    for k in 0..NVARS {
        r[k] = a[k] + b[k];
    }
    r
}

fn expo_sub_checked(a: &Expo, b: &Expo) -> Option<Expo> {
    let mut r = E0;
    for k in 0..NVARS {
        r[k] = a[k].checked_sub(b[k])?;
    }
    Some(r)
}

#[derive(Clone, PartialEq)]
pub struct MultiPoly {
    /// (exponent, coefficient), sorted by exponent in descending lex order.
    pub terms: Vec<(Expo, FieldElem)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn constant(c: FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: vec![(E0, c)],
        }
    }

    pub fn one() -> Self {
        Self::constant(FieldElem::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(FieldElem::from_int(n))
    }

    pub fn var(ix: usize) -> Self {
        assert!(ix < NVARS);
        let mut e = E0;
        e[ix] = 1;
        MultiPoly {
            terms: vec![(e, FieldElem::one())],
        }
    }

    /// c * x_ix^k
    pub fn monomial(ix: usize, k: u16, c: FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut e = E0;
        e[ix] = k;
        MultiPoly { terms: vec![(e, c)] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == E0)
    }

    pub fn as_constant(&self) -> Option<FieldElem> {
        if self.terms.is_empty() {
            return Some(FieldElem::zero());
        }
        if self.terms.len() == 1 && self.terms[0].0 == E0 {
            return Some(self.terms[0].1.clone());
        }
        None
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<&(Expo, FieldElem)> {
        self.terms.first()
    }

    pub fn degree_in(&self, ix: usize) -> u16 {
        self.terms.iter().map(|(e, _)| e[ix]).max().unwrap_or(0)
    }

    pub fn involves(&self, ix: usize) -> bool {
        self.terms.iter().any(|(e, _)| e[ix] > 0)
    }

    pub fn map_coeffs(&self, f: impl Fn(&FieldElem) -> FieldElem) -> Self {
        let mut terms: Vec<(Expo, FieldElem)> = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let c2 = f(c);
            if !c2.is_zero() {
                terms.push((*e, c2));
            }
        }
        MultiPoly { terms }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        self.map_coeffs(|x| x * c)
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        self.map_coeffs(|x| x.scale(r))
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|x| -x)
    }

    pub fn add(&self, o: &Self) -> Self {
        // merge of two descending-sorted term lists
        let mut terms = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match o.terms[j].0.cmp(&self.terms[i].0) {
                Ordering::Less => {
                    terms.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &o.terms[j].1;
                    if !c.is_zero() {
                        terms.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&o.terms[j..]);
        MultiPoly { terms }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        let mut acc: BTreeMap<Expo, FieldElem> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = expo_add(ea, eb);
                let c = ca * cb;
                if c.is_zero() {
                    continue;
                }
                match acc.get_mut(&e) {
                    Some(slot) => {
                        *slot += &c;
                    }
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        let mut terms: Vec<(Expo, FieldElem)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.reverse(); // BTreeMap iterates ascending; we store descending
        MultiPoly { terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact division. Returns None when `self` is not a multiple of `d`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = d.as_constant() {
            let ic = c.inv().ok()?;
            return Some(self.scale(&ic));
        }
        let (dlt_e, dlt_c) = d.leading().unwrap();
        let dlt_ci = dlt_c.inv().ok()?;
        let mut rem = self.clone();
        let mut quo: Vec<(Expo, FieldElem)> = Vec::new();
        while let Some((rlt_e, rlt_c)) = rem.leading() {
            let qe = expo_sub_checked(rlt_e, dlt_e)?;
            let qc = rlt_c * &dlt_ci;
            // rem -= (qc * x^qe) * d
            let mono = MultiPoly {
                terms: vec![(qe, qc.clone())],
            };
            rem = rem.sub(&mono.mul(d));
            quo.push((qe, qc));
        }
        // terms were produced in strictly descending order of leading exponents
        Some(MultiPoly { terms: quo })
    }

    /// Substitute variable `ix` by alpha*x_ix + beta (beta a polynomial not
    /// involving x_ix). Implemented by Horner evaluation in x_ix.
    pub fn subst_linear(&self, ix: usize, alpha: &FieldElem, beta: &MultiPoly) -> Self {
        assert!(!beta.involves(ix), "beta must not involve the substituted variable");
        if !self.involves(ix) {
            return self.clone();
        }
        let deg = self.degree_in(ix) as usize;
        // collect coefficients of x_ix^k
        let mut coeffs: Vec<MultiPoly> = vec![MultiPoly::zero(); deg + 1];
        for (e, c) in &self.terms {
            let k = e[ix] as usize;
            let mut e2 = *e;
            e2[ix] = 0;
            coeffs[k] = coeffs[k].add(&MultiPoly { terms: vec![(e2, c.clone())] });
        }
        // target = alpha*x + beta
        let target = MultiPoly::monomial(ix, 1, alpha.clone()).add(beta);
        let mut acc = MultiPoly::zero();
        for k in (0..=deg).rev() {
            acc = acc.mul(&target).add(&coeffs[k]);
        }
        acc
    }

    /// Coefficients in variable `ix`, lowest power first.
    pub fn coeffs_in(&self, ix: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(ix) as usize;
        let mut coeffs: Vec<MultiPoly> = vec![MultiPoly::zero(); deg + 1];
        for (e, c) in &self.terms {
            let k = e[ix] as usize;
            let mut e2 = *e;
            e2[ix] = 0;
            coeffs[k] = coeffs[k].add(&MultiPoly { terms: vec![(e2, c.clone())] });
        }
        coeffs
    }

    /// Normalizes to leading coefficient 1; returns the removed coefficient.
    pub fn monic(&self) -> (FieldElem, MultiPoly) {
        match self.leading() {
            None => (FieldElem::one(), MultiPoly::zero()),
            Some((_, c)) => {
                let c = c.clone();
                let ci = c.inv().expect("nonzero leading coefficient");
                (c, self.scale(&ci))
            }
        }
    }
}

fn mono_string(e: &Expo) -> String {
    let mut parts = Vec::new();
    for k in 0..NVARS {
        if e[k] == 1 {
            parts.push(VAR_NAMES[k].to_string());
        } else if e[k] > 1 {
            parts.push(format!("{}^{}", VAR_NAMES[k], e[k]));
        }
    }
    parts.join("*")
}

/// Renders one term as (is_negative, body-without-sign).
fn term_string(e: &Expo, c: &FieldElem) -> (bool, String) {
    let mut cs = format!("{}", c);
    let mut neg = false;
    if !cs.contains(' ') && cs.starts_with('-') {
        neg = true;
        cs = cs[1..].to_string();
    } else if cs.contains(' ') {
        cs = format!("({})", cs);
    }
    let mono = mono_string(e);
    let body = if mono.is_empty() {
        cs
    } else if cs == "1" {
        mono
    } else {
        format!("{}*{}", cs, mono)
    };
    (neg, body)
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let (neg, body) = term_string(e, c);
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{}", body)?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// u + c for rational c, a convenience for spectral-parameter arguments.
pub fn u_plus(c: Rat) -> MultiPoly {
    MultiPoly::var(VAR_U).add(&MultiPoly::constant(FieldElem::from_rat(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn u() -> MultiPoly {
        MultiPoly::var(VAR_U)
    }
    fn v() -> MultiPoly {
        MultiPoly::var(VAR_V)
    }

    #[test]
    fn arithmetic_and_ordering() {
        let p = u().add(&v()).mul(&u().sub(&v())); // u^2 - v^2
        let expect = u().mul(&u()).sub(&v().mul(&v()));
        assert_eq!(p, expect);
        assert_eq!(p.n_terms(), 2);
        assert_eq!(p.degree_in(VAR_U), 2);
    }

    #[test]
    fn exact_division() {
        let p = u().add(&v()); // u+v
        let q = u().sub(&MultiPoly::one()); // u-1
        let prod = p.mul(&q);
        assert_eq!(prod.div_exact(&p).unwrap(), q);
        assert_eq!(prod.div_exact(&q).unwrap(), p);
        assert!(prod.div_exact(&u().add(&MultiPoly::one())).is_none());
        // division by a constant
        assert_eq!(
            p.div_exact(&MultiPoly::from_int(2)).unwrap(),
            p.scale(&FieldElem::from_frac(1, 2))
        );
    }

    #[test]
    fn substitution_composes() {
        // u -> 2u+1 then u -> 3u-1 equals u -> 6u-1  (alpha*gamma, alpha*delta+beta)
        let p = u().pow(3).add(&u().mul(&v())).sub(&MultiPoly::from_int(7));
        let s1 = p.subst_linear(VAR_U, &FieldElem::from_int(2), &MultiPoly::one());
        let s12 = s1.subst_linear(
            VAR_U,
            &FieldElem::from_int(3),
            &MultiPoly::from_int(-1),
        );
        let direct = p.subst_linear(VAR_U, &FieldElem::from_int(6), &MultiPoly::from_int(-1));
        assert_eq!(s12, direct);
    }

    #[test]
    fn subst_by_other_variable() {
        let p = u().pow(2).sub(&v().pow(2));
        let s = p.subst_linear(VAR_U, &FieldElem::zero(), &v());
        assert!(s.is_zero());
    }

    #[test]
    fn display_round() {
        let p = u()
            .pow(2)
            .scale(&FieldElem::from_frac(3, 2))
            .sub(&v())
            .add(&MultiPoly::one());
        assert_eq!(format!("{}", p), "3/2*u^2 - v + 1");
        let q = MultiPoly::constant(&FieldElem::one() + &FieldElem::i()).mul(&u());
        assert_eq!(format!("{}", q), "(1 + i)*u");
    }

    #[test]
    fn monic_normalization() {
        let p = u().scale(&FieldElem::from_int(4)).add(&MultiPoly::from_int(2));
        let (lc, m) = p.monic();
        assert_eq!(lc, FieldElem::from_int(4));
        assert_eq!(m, u().add(&MultiPoly::constant(FieldElem::from_rat(rat(1, 2)))));
    }
}
