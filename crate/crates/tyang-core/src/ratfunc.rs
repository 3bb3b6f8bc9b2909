//! Rational functions over Q(i, √2) in the fixed variable space.
//!
//! The denominator is kept as a product of monic factors with multiplicities
//! instead of one expanded polynomial. The factors the constructions generate
//! are mostly linear (u-v, 2u-1, u-a1, ...), so multiplication can cancel
//! them syntactically and additions rarely need a polynomial gcd. Equality is
//! decided by cross-multiplication, never by sampling, so correctness does
//! not depend on how much cancellation happened along the way.

use crate::poly::{MultiPoly, VAR_U};
use crate::scalars::{DivisionByZero, FieldElem, Rat};
use std::fmt;

#[derive(Clone)]
pub struct RatFunc {
    pub num: MultiPoly,
    /// Monic factors with multiplicities, sorted by the factor's term list.
    pub den: Vec<(MultiPoly, u32)>,
}

/// Factors with more terms than this are never candidates for syntactic
/// cancellation; cross-multiplied equality stays exact regardless.
const CANCEL_TERM_LIMIT: usize = 16;

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: MultiPoly::zero(),
            den: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(MultiPoly::from_int(n))
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::from_poly(MultiPoly::constant(FieldElem::from_rat(r)))
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn var(ix: usize) -> Self {
        Self::from_poly(MultiPoly::var(ix))
    }

    /// num / den with arbitrary polynomials; den is normalized to monic form.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, DivisionByZero> {
        if den.is_zero() {
            return Err(DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (lc, dmonic) = den.monic();
        let num = num.scale(&lc.inv()?);
        let mut r = RatFunc {
            num,
            den: if dmonic.as_constant().is_some() {
                Vec::new()
            } else {
                vec![(dmonic, 1)]
            },
        };
        r.cancel();
        Ok(r)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.as_constant().map_or(false, |c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<FieldElem> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else if self.num.is_zero() {
            Some(FieldElem::zero())
        } else {
            None
        }
    }

    fn push_factor(den: &mut Vec<(MultiPoly, u32)>, f: MultiPoly, mult: u32) {
        if mult == 0 {
            return;
        }
        for (g, m) in den.iter_mut() {
            if *g == f {
                *m += mult;
                return;
            }
        }
        den.push((f, mult));
    }

    fn sort_den(&mut self) {
        self.den.sort_by(|a, b| {
            let ka: Vec<_> = a.0.terms.iter().map(|(e, _)| *e).collect();
            let kb: Vec<_> = b.0.terms.iter().map(|(e, _)| *e).collect();
            ka.cmp(&kb).then(a.1.cmp(&b.1))
        });
    }

    /// Cancels denominator factors that divide the numerator exactly.
    pub(crate) fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut den = Vec::with_capacity(self.den.len());
        for (f, mut m) in std::mem::take(&mut self.den) {
            if f.n_terms() <= CANCEL_TERM_LIMIT {
                while m > 0 {
                    match self.num.div_exact(&f) {
                        Some(q) => {
                            self.num = q;
                            m -= 1;
                        }
                        None => break,
                    }
                }
            }
            if m > 0 {
                den.push((f, m));
            }
        }
        self.den = den;
        self.sort_den();
    }

    /// The denominator as one expanded polynomial.
    pub fn den_expanded(&self) -> MultiPoly {
        let mut d = MultiPoly::one();
        for (f, m) in &self.den {
            for _ in 0..*m {
                d = d.mul(f);
            }
        }
        d
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        for (f, m) in &o.den {
            Self::push_factor(&mut den, f.clone(), *m);
        }
        let mut r = RatFunc {
            num: self.num.mul(&o.num),
            den,
        };
        r.cancel();
        r
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        // lcm of the two factored denominators
        let mut lcm: Vec<(MultiPoly, u32)> = self.den.clone();
        for (f, m) in &o.den {
            match lcm.iter_mut().find(|(g, _)| g == f) {
                Some((_, lm)) => *lm = (*lm).max(*m),
                None => lcm.push((f.clone(), *m)),
            }
        }
        let cofactor = |own: &[(MultiPoly, u32)]| -> MultiPoly {
            let mut c = MultiPoly::one();
            for (f, lm) in &lcm {
                let have = own
                    .iter()
                    .find(|(g, _)| g == f)
                    .map(|(_, m)| *m)
                    .unwrap_or(0);
                for _ in have..*lm {
                    c = c.mul(f);
                }
            }
            c
        };
        let num = self
            .num
            .mul(&cofactor(&self.den))
            .add(&o.num.mul(&cofactor(&o.den)));
        let mut r = RatFunc { num, den: lcm };
        r.cancel();
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        let mut r = RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        };
        if r.num.is_zero() {
            r.den.clear();
        }
        r
    }

    pub fn inv(&self) -> Result<Self, DivisionByZero> {
        if self.is_zero() {
            return Err(DivisionByZero);
        }
        let (lc, nmonic) = self.num.monic();
        let mut num = MultiPoly::constant(lc.inv()?);
        let mut den = Vec::new();
        for (f, m) in &self.den {
            for _ in 0..*m {
                num = num.mul(f);
            }
        }
        if nmonic.as_constant().is_none() {
            Self::push_factor(&mut den, nmonic, 1);
        }
        let mut r = RatFunc { num, den };
        r.cancel();
        Ok(r)
    }

    pub fn div(&self, o: &Self) -> Result<Self, DivisionByZero> {
        Ok(self.mul(&o.inv()?))
    }

    /// Exact equality in the fraction field, by cross-multiplication.
    pub fn eq(&self, o: &Self) -> bool {
        if self.is_zero() {
            return o.is_zero();
        }
        if o.is_zero() {
            return false;
        }
        // strip common denominator factors first
        let mut d1: Vec<(MultiPoly, u32)> = self.den.clone();
        let mut d2: Vec<(MultiPoly, u32)> = o.den.clone();
        for (f, m1) in d1.iter_mut() {
            if let Some((_, m2)) = d2.iter_mut().find(|(g, _)| g == &*f) {
                let c = (*m1).min(*m2);
                *m1 -= c;
                *m2 -= c;
            }
        }
        let expand = |fs: &[(MultiPoly, u32)]| {
            let mut d = MultiPoly::one();
            for (f, m) in fs {
                for _ in 0..*m {
                    d = d.mul(f);
                }
            }
            d
        };
        self.num.mul(&expand(&d2)) == o.num.mul(&expand(&d1))
    }

    /// var -> alpha*var + beta, with beta a polynomial free of var.
    pub fn subst_linear(&self, ix: usize, alpha: &FieldElem, beta: &MultiPoly) -> Self {
        let num = self.num.subst_linear(ix, alpha, beta);
        let mut den = Vec::new();
        let mut extra = MultiPoly::one();
        for (f, m) in &self.den {
            let g = f.subst_linear(ix, alpha, beta);
            assert!(!g.is_zero(), "substitution lands on a pole");
            let (lc, gm) = g.monic();
            if !lc.is_one() {
                for _ in 0..*m {
                    extra = extra.scale(&lc);
                }
            }
            if gm.as_constant().is_none() {
                Self::push_factor(&mut den, gm, *m);
            }
        }
        let mut r = RatFunc {
            num: num.scale(&extra.as_constant().unwrap().inv().expect("nonzero")),
            den,
        };
        r.cancel();
        r
    }

    /// Convenience: u -> alpha*u + beta with rational alpha, beta.
    pub fn subst_u_affine(&self, alpha: Rat, beta: Rat) -> Self {
        self.subst_linear(
            VAR_U,
            &FieldElem::from_rat(alpha),
            &MultiPoly::constant(FieldElem::from_rat(beta)),
        )
    }

    pub fn involves(&self, ix: usize) -> bool {
        self.num.involves(ix) || self.den.iter().any(|(f, _)| f.involves(ix))
    }

    /// Truncated expansion at var = infinity: coefficients of var^0 .. var^-D.
    ///
    /// Fails when the function has a pole at infinity (numerator degree
    /// exceeds denominator degree in `var`). Coefficients are rational
    /// functions in the remaining variables.
    pub fn expand_at_infinity(&self, ix: usize, order: usize) -> Result<Vec<RatFunc>, PoleAtInfinity> {
        if self.is_zero() {
            return Ok(vec![RatFunc::zero(); order + 1]);
        }
        let den = self.den_expanded();
        let ncoef = self.num.coeffs_in(ix);
        let dcoef = den.coeffs_in(ix);
        let nd = ncoef.len() - 1;
        let dd = dcoef.len() - 1;
        if nd > dd {
            return Err(PoleAtInfinity);
        }
        // num/den = (sum_k n_{dd-k} x^{-k}) / (sum_k d_{dd-k} x^{-k}), k >= 0,
        // with n_j := 0 for j > nd. Divide the truncated series.
        let top = RatFunc::from_poly(dcoef[dd].clone());
        let top_inv = top.inv().map_err(|_| PoleAtInfinity)?;
        let nser: Vec<RatFunc> = (0..=order)
            .map(|k| {
                if dd >= k && dd - k <= nd {
                    RatFunc::from_poly(ncoef[dd - k].clone())
                } else {
                    RatFunc::zero()
                }
            })
            .collect();
        let dser: Vec<RatFunc> = (0..=order)
            .map(|k| {
                if dd >= k {
                    RatFunc::from_poly(dcoef[dd - k].clone())
                } else {
                    RatFunc::zero()
                }
            })
            .collect();
        // series division: q = n/d where d0 = top is invertible
        let mut q: Vec<RatFunc> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = nser[k].clone();
            for j in 0..k {
                acc = acc.sub(&q[j].mul(&dser[k - j]));
            }
            q.push(acc.mul(&top_inv));
        }
        Ok(q)
    }

    /// Expansion with constant coefficients; errors if any coefficient still
    /// involves another variable.
    pub fn expand_at_infinity_const(
        &self,
        ix: usize,
        order: usize,
    ) -> Result<Vec<FieldElem>, PoleAtInfinity> {
        let cs = self.expand_at_infinity(ix, order)?;
        cs.into_iter()
            .map(|c| c.as_constant().ok_or(PoleAtInfinity))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleAtInfinity;

impl fmt::Display for PoleAtInfinity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pole at infinity (or non-constant expansion coefficient)")
    }
}

impl std::error::Error for PoleAtInfinity {}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        RatFunc::eq(self, other)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let paren_num = self.num.n_terms() > 1;
        if paren_num {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, " / ")?;
        let mut first = true;
        for (g, m) in &self.den {
            for _ in 0..*m {
                if !first {
                    write!(f, " / ")?;
                }
                first = false;
                write!(f, "({})", g)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// (u + c) as a rational function.
pub fn ru_plus(n: i64, d: i64) -> RatFunc {
    RatFunc::from_poly(crate::poly::u_plus(crate::scalars::rat(n, d)))
}

/// (a*u + b) as a rational function, rational a, b.
pub fn ru_lin(a: Rat, b: Rat) -> RatFunc {
    RatFunc::from_poly(
        MultiPoly::monomial(VAR_U, 1, FieldElem::from_rat(a))
            .add(&MultiPoly::constant(FieldElem::from_rat(b))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{VAR_V, var_point};
    use crate::scalars::{rat, rat_int};

    fn u() -> RatFunc {
        RatFunc::var(VAR_U)
    }
    fn v() -> RatFunc {
        RatFunc::var(VAR_V)
    }

    #[test]
    fn field_laws() {
        // (u/(u-1)) * ((u-1)/u) = 1
        let um1 = u().sub(&RatFunc::one());
        let a = u().div(&um1).unwrap();
        let b = um1.div(&u()).unwrap();
        assert!(a.mul(&b).is_one());
        // 1/(u-v) + 1/(v-u) = 0
        let x = u().sub(&v()).inv().unwrap();
        let y = v().sub(&u()).inv().unwrap();
        assert!(x.add(&y).is_zero());
        // (2u+1)/(2u-1) * (2u-1)/(2u+1) = 1
        let p = ru_lin(rat_int(2), rat_int(1)).div(&ru_lin(rat_int(2), rat_int(-1))).unwrap();
        let q = ru_lin(rat_int(2), rat_int(-1)).div(&ru_lin(rat_int(2), rat_int(1))).unwrap();
        assert!(p.mul(&q).is_one());
    }

    #[test]
    fn equality_by_cross_multiplication() {
        // (u^2-1)/(u-1) == u+1
        let n = u().mul(&u()).sub(&RatFunc::one());
        let d = u().sub(&RatFunc::one());
        let lhs = n.div(&d).unwrap();
        assert!(lhs.eq(&ru_plus(1, 1)));
        // (2u+1)/(2u-1) != 1
        let g = ru_lin(rat_int(2), rat_int(1)).div(&ru_lin(rat_int(2), rat_int(-1))).unwrap();
        assert!(!g.eq(&RatFunc::one()));
    }

    #[test]
    fn substitution() {
        // 1/u with u -> 2u+1
        let f = u().inv().unwrap();
        let g = f.subst_u_affine(rat_int(2), rat_int(1));
        assert!(g.eq(&ru_lin(rat_int(2), rat_int(1)).inv().unwrap()));
        // gamma_2(u) = (2u+1)/(2u-1) under u -> -u gives (-2u+1)/(-2u-1)
        let gamma = ru_lin(rat_int(2), rat_int(1)).div(&ru_lin(rat_int(2), rat_int(-1))).unwrap();
        let flipped = gamma.subst_u_affine(rat_int(-1), rat_int(0));
        let expect = ru_lin(rat_int(-2), rat_int(1)).div(&ru_lin(rat_int(-2), rat_int(-1))).unwrap();
        assert!(flipped.eq(&expect));
        // 1/(u-kappa) with u -> kappa-u gives -1/u, kappa = 2
        let f = ru_plus(-2, 1).inv().unwrap();
        let g = f.subst_u_affine(rat_int(-1), rat_int(2));
        assert!(g.eq(&u().inv().unwrap().neg()));
    }

    #[test]
    fn expansion_at_infinity() {
        // 1/(u-2) = u^-1 + 2u^-2 + 4u^-3 + ...
        let f = ru_plus(-2, 1).inv().unwrap();
        let cs = f.expand_at_infinity_const(VAR_U, 4).unwrap();
        let expect: Vec<FieldElem> = [0i64, 1, 2, 4, 8]
            .iter()
            .map(|&n| FieldElem::from_int(n))
            .collect();
        assert_eq!(cs, expect);
        // (2u+1)/(2u-1) = 1 + u^-1 + 1/2 u^-2 + 1/4 u^-3 + ...
        let g = ru_lin(rat_int(2), rat_int(1)).div(&ru_lin(rat_int(2), rat_int(-1))).unwrap();
        let cs = g.expand_at_infinity_const(VAR_U, 3).unwrap();
        assert_eq!(cs[0], FieldElem::one());
        assert_eq!(cs[1], FieldElem::one());
        assert_eq!(cs[2], FieldElem::from_frac(1, 2));
        assert_eq!(cs[3], FieldElem::from_frac(1, 4));
        // constants
        let cs = RatFunc::one().expand_at_infinity_const(VAR_U, 2).unwrap();
        assert_eq!(cs, vec![FieldElem::one(), FieldElem::zero(), FieldElem::zero()]);
        // pole at infinity is an error
        assert!(u().expand_at_infinity(VAR_U, 2).is_err());
    }

    #[test]
    fn expansion_with_symbolic_point() {
        // 1/(u - a1): coefficients 0, 1, a1, a1^2, ...
        let a1 = RatFunc::var(var_point(0));
        let f = u().sub(&a1).inv().unwrap();
        let cs = f.expand_at_infinity(VAR_U, 3).unwrap();
        assert!(cs[0].is_zero());
        assert!(cs[1].is_one());
        assert!(cs[2].eq(&a1));
        assert!(cs[3].eq(&a1.mul(&a1)));
    }

    #[test]
    fn p_identity_symbolic_kappa() {
        // p(u)p(k-u) = 1 - (2u-k)^-2 with symbolic kappa (borrow a point var)
        // p(u) = 1 - 1/(2u-k) + N-free-trace-term omitted: use the AI form
        // p(u) = 1 - 1/(2u - k) + tr/(2u-2k) is exercised in rkmat; here we
        // check the kappa = 0 variant: (1 - 1/2u)(1 + 1/2u) = 1 - (2u)^-2.
        let two_u = ru_lin(rat_int(2), rat_int(0));
        let p = RatFunc::one().sub(&two_u.inv().unwrap());
        let pm = RatFunc::one().add(&two_u.inv().unwrap());
        let rhs = RatFunc::one().sub(&two_u.mul(&two_u).inv().unwrap());
        assert!(p.mul(&pm).eq(&rhs));
    }
}
