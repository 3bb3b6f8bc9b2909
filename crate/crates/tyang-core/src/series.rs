//! Truncated series in u^-1 with coefficients in an exact ring.
//!
//! This is the only place non-rational objects live: central-series
//! normalizers, even square roots, and operator-valued expansions for the
//! Gaussian decomposition. A series of order D carries coefficients of
//! u^0 .. u^-D and no claim of validity past that.

use crate::ratfunc::RatFunc;
use crate::scalars::{rat_int, Rat};
use num::{One, Zero};
use std::fmt;

/// Ring interface used by the series engine. Matrix rings carry their shape
/// at runtime, so identities are derived from an existing element.
pub trait SeriesRing: Clone {
    fn s_add(&self, o: &Self) -> Self;
    fn s_sub(&self, o: &Self) -> Self;
    fn s_mul(&self, o: &Self) -> Self;
    fn s_neg(&self) -> Self;
    fn s_zero_like(&self) -> Self;
    fn s_one_like(&self) -> Self;
    fn s_is_zero(&self) -> bool;
    fn s_scale_rat(&self, r: &Rat) -> Self;
    fn s_invert(&self) -> Option<Self>;
}

impl SeriesRing for RatFunc {
    fn s_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn s_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn s_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn s_neg(&self) -> Self {
        self.neg()
    }
    fn s_zero_like(&self) -> Self {
        RatFunc::zero()
    }
    fn s_one_like(&self) -> Self {
        RatFunc::one()
    }
    fn s_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn s_scale_rat(&self, r: &Rat) -> Self {
        self.scale(&crate::scalars::FieldElem::from_rat(r.clone()))
    }
    fn s_invert(&self) -> Option<Self> {
        self.inv().ok()
    }
}

#[derive(Clone)]
pub struct TruncSeries<T: SeriesRing> {
    /// coeffs[r] multiplies u^-r; len = order + 1 >= 1.
    pub coeffs: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    NonInvertibleConstantTerm,
    OddCoefficient(usize),
    NonUnitConstantTerm,
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::NonInvertibleConstantTerm => write!(f, "constant term is not invertible"),
            SeriesError::OddCoefficient(r) => write!(f, "series is not even: u^-{} term is nonzero", r),
            SeriesError::NonUnitConstantTerm => write!(f, "constant term is not one"),
        }
    }
}

impl std::error::Error for SeriesError {}

impl<T: SeriesRing> TruncSeries<T> {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty());
        TruncSeries { coeffs }
    }

    pub fn constant(c: T, order: usize) -> Self {
        let z = c.s_zero_like();
        let mut coeffs = vec![z; order + 1];
        coeffs[0] = c;
        TruncSeries { coeffs }
    }

    pub fn one_like(c: &T, order: usize) -> Self {
        Self::constant(c.s_one_like(), order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.s_is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if order + 1 <= coeffs.len() {
            coeffs.truncate(order + 1);
        } else {
            let z = self.coeffs[0].s_zero_like();
            coeffs.resize(order + 1, z);
        }
        TruncSeries { coeffs }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        TruncSeries {
            coeffs: (0..n).map(|r| self.coeffs[r].s_add(&o.coeffs[r])).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        TruncSeries {
            coeffs: (0..n).map(|r| self.coeffs[r].s_sub(&o.coeffs[r])).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| c.s_neg()).collect(),
        }
    }

    /// Truncated convolution.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for r in 0..n {
            let mut acc = self.coeffs[0].s_zero_like();
            for j in 0..=r {
                if self.coeffs[j].s_is_zero() || o.coeffs[r - j].s_is_zero() {
                    continue;
                }
                acc = acc.s_add(&self.coeffs[j].s_mul(&o.coeffs[r - j]));
            }
            coeffs.push(acc);
        }
        TruncSeries { coeffs }
    }

    pub fn scale(&self, c: &T) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|x| c.s_mul(x)).collect(),
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|x| x.s_scale_rat(r)).collect(),
        }
    }

    /// Multiplicative inverse: a * inv(a) = 1 + O(u^{-D-1}).
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let c0i = self.coeffs[0]
            .s_invert()
            .ok_or(SeriesError::NonInvertibleConstantTerm)?;
        let n = self.coeffs.len();
        let mut inv: Vec<T> = Vec::with_capacity(n);
        inv.push(c0i.clone());
        for r in 1..n {
            // sum_{j=0..r} a_j b_{r-j} = 0  =>  b_r = -c0i * sum_{j>=1} a_j b_{r-j}
            let mut acc = self.coeffs[0].s_zero_like();
            for j in 1..=r {
                if self.coeffs[j].s_is_zero() {
                    continue;
                }
                acc = acc.s_add(&self.coeffs[j].s_mul(&inv[r - j]));
            }
            inv.push(c0i.s_mul(&acc).s_neg());
        }
        Ok(TruncSeries { coeffs: inv })
    }

    /// u -> u + s by exact binomial expansion of (u+s)^{-r}.
    pub fn shift(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut coeffs = vec![self.coeffs[0].s_zero_like(); n];
        for r in 0..n {
            if self.coeffs[r].s_is_zero() {
                continue;
            }
            // (u+s)^{-r} = sum_{j>=0} binom(-r, j) s^j u^{-r-j}
            //            = sum_{j>=0} (-1)^j binom(r+j-1, j) s^j u^{-r-j}
            let mut factor = Rat::one(); // binom coefficient * s^j, j = 0
            let mut j = 0usize;
            while r + j < n {
                if !factor.is_zero() {
                    coeffs[r + j] = coeffs[r + j].s_add(&self.coeffs[r].s_scale_rat(&factor));
                }
                // next: (-1)^{j+1} binom(r+j, j+1) s^{j+1}
                let jj = j as i64;
                let rr = r as i64;
                factor = factor * rat_int(-(rr + jj)) / rat_int(jj + 1) * s.clone();
                if r == 0 {
                    break; // constant term does not spread
                }
                j += 1;
            }
        }
        TruncSeries { coeffs }
    }

    /// u -> alpha*u for nonzero rational alpha: u^-r picks up alpha^-r.
    pub fn scale_arg(&self, alpha: &Rat) -> Self {
        assert!(!alpha.is_zero());
        let inv = Rat::one() / alpha.clone();
        let mut pow = Rat::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.s_scale_rat(&pow));
            pow = pow * inv.clone();
        }
        TruncSeries { coeffs }
    }

    /// u -> alpha*u + beta.
    pub fn subst_affine(&self, alpha: &Rat, beta: &Rat) -> Self {
        let scaled = self.scale_arg(alpha);
        scaled.shift(&(beta.clone() / alpha.clone()))
    }

    /// u -> -u.
    pub fn negate_arg(&self) -> Self {
        self.scale_arg(&rat_int(-1))
    }

    pub fn coeff(&self, r: usize) -> &T {
        &self.coeffs[r]
    }

    pub fn map<U: SeriesRing>(&self, f: impl Fn(&T) -> U) -> TruncSeries<U> {
        TruncSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl TruncSeries<RatFunc> {
    /// Unique even square root with constant term 1 of an even series with
    /// commuting coefficients.
    pub fn even_sqrt(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::NonUnitConstantTerm);
        }
        for (r, c) in self.coeffs.iter().enumerate() {
            if r % 2 == 1 && !c.s_is_zero() {
                return Err(SeriesError::OddCoefficient(r));
            }
        }
        let n = self.coeffs.len();
        let half = crate::scalars::rat(1, 2);
        let mut h = vec![RatFunc::zero(); n];
        h[0] = RatFunc::one();
        for r in (2..n).step_by(2) {
            // (h^2)_r = 2 h_r + sum_{0<j<r} h_j h_{r-j} = w_r
            let mut acc = RatFunc::zero();
            for j in (2..r).step_by(2) {
                acc = acc.add(&h[j].mul(&h[r - j]));
            }
            h[r] = self.coeffs[r].sub(&acc).s_scale_rat(&half);
        }
        Ok(TruncSeries { coeffs: h })
    }

    /// Solves g(u) g(u+kappa) zeta(u) = 1 + O(u^{-D-1}) with g(0-term) = 1.
    ///
    /// This is the normalizer realizing the quotient by a central series on
    /// a representation: the defining equation is solved coefficient by
    /// coefficient, each step being linear with leading factor 2.
    pub fn solve_twisted_normalizer(&self, kappa: &Rat) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::NonUnitConstantTerm);
        }
        let n = self.coeffs.len();
        let half = crate::scalars::rat(1, 2);
        let mut g = TruncSeries::constant(RatFunc::one(), n - 1);
        for r in 1..n {
            let residual = g.mul(&g.shift(kappa)).mul(self);
            // residual = 1 + 0*u^-1 + ... + res_r u^-r + ...; adding dg u^-r to g
            // changes the u^-r coefficient by 2*dg.
            let res = residual.coeffs[r].clone();
            if res.is_zero() {
                continue;
            }
            g.coeffs[r] = g.coeffs[r].sub(&res.s_scale_rat(&half));
        }
        Ok(g)
    }
}

impl fmt::Display for TruncSeries<RatFunc> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (r, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if r == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "({})*u^-{}", c, r)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(u^-{})", self.coeffs.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn ser(vals: &[(i64, i64)]) -> TruncSeries<RatFunc> {
        TruncSeries::from_coeffs(
            vals.iter()
                .map(|&(n, d)| RatFunc::from_rat(rat(n, d)))
                .collect(),
        )
    }

    #[test]
    fn mul_and_inverse() {
        // (1 + u^-1)(1 - u^-1) = 1 - u^-2
        let a = ser(&[(1, 1), (1, 1), (0, 1), (0, 1)]);
        let b = ser(&[(1, 1), (-1, 1), (0, 1), (0, 1)]);
        let p = a.mul(&b);
        assert_eq!(p.coeffs, ser(&[(1, 1), (0, 1), (-1, 1), (0, 1)]).coeffs);
        // inv(1 + u^-1) = 1 - u^-1 + u^-2 - u^-3
        let i = a.inv().unwrap();
        assert_eq!(i.coeffs, ser(&[(1, 1), (-1, 1), (1, 1), (-1, 1)]).coeffs);
        assert!(a.mul(&i).sub(&TruncSeries::one_like(&RatFunc::one(), 3)).is_zero());
    }

    #[test]
    fn shift_binomial() {
        // u^-1 shifted by 2: u^-1 - 2u^-2 + 4u^-3 - 8u^-4
        let a = ser(&[(0, 1), (1, 1), (0, 1), (0, 1), (0, 1)]);
        let s = a.shift(&rat(2, 1));
        assert_eq!(
            s.coeffs,
            ser(&[(0, 1), (1, 1), (-2, 1), (4, 1), (-8, 1)]).coeffs
        );
        // constant series unchanged
        let c = ser(&[(5, 1), (0, 1), (0, 1)]);
        assert_eq!(c.shift(&rat(7, 2)).coeffs, c.coeffs);
        // round trip
        let a = ser(&[(1, 1), (3, 1), (-2, 1), (1, 2), (0, 1), (7, 1)]);
        let rt = a.shift(&rat(3, 1)).shift(&rat(-3, 1));
        assert!(rt.sub(&a).is_zero());
    }

    #[test]
    fn shift_agrees_with_rational_substitution() {
        // expand 1/(u-2), shift by 5, compare against expanding 1/(u+3)
        let f = crate::ratfunc::ru_plus(-2, 1).inv().unwrap();
        let d = 6;
        let ser_f = TruncSeries::from_coeffs(
            f.expand_at_infinity(crate::poly::VAR_U, d).unwrap(),
        );
        let shifted = ser_f.shift(&rat(5, 1));
        let g = crate::ratfunc::ru_plus(3, 1).inv().unwrap();
        let ser_g = TruncSeries::from_coeffs(
            g.expand_at_infinity(crate::poly::VAR_U, d).unwrap(),
        );
        assert!(shifted.sub(&ser_g).is_zero());
    }

    #[test]
    fn even_sqrt_squares_back() {
        // 1 + 2u^-2: sqrt = 1 + u^-2 - 1/2 u^-4 + ...
        let w = ser(&[(1, 1), (0, 1), (2, 1), (0, 1), (0, 1), (0, 1), (0, 1)]);
        let h = w.even_sqrt().unwrap();
        assert_eq!(h.coeffs[2], RatFunc::from_int(1));
        assert_eq!(h.coeffs[4], RatFunc::from_rat(rat(-1, 2)));
        assert!(h.mul(&h).sub(&w).is_zero());
        assert!(ser(&[(1, 1), (1, 1)]).even_sqrt().is_err());
        // sqrt(1) = 1
        let one = TruncSeries::one_like(&RatFunc::one(), 4);
        assert!(one.even_sqrt().unwrap().sub(&one).is_zero());
    }

    #[test]
    fn normalizer_defining_equation() {
        // zeta = expansion of (u-1)/(u+1) at infinity; kappa = 2
        let zeta_rf = crate::ratfunc::ru_plus(-1, 1)
            .div(&crate::ratfunc::ru_plus(1, 1))
            .unwrap();
        let d = 8;
        let zeta = TruncSeries::from_coeffs(
            zeta_rf.expand_at_infinity(crate::poly::VAR_U, d).unwrap(),
        );
        let g = zeta.solve_twisted_normalizer(&rat(2, 1)).unwrap();
        let back = g.mul(&g.shift(&rat(2, 1))).mul(&zeta);
        assert!(back.sub(&TruncSeries::one_like(&RatFunc::one(), d)).is_zero());
        // kappa = 0 consistency with the even square root: g = sqrt(1/zeta)
        let zeta2 = ser(&[(1, 1), (0, 1), (3, 1), (0, 1), (-1, 2), (0, 1), (0, 1), (0, 1), (0, 1)]);
        let g0 = zeta2.solve_twisted_normalizer(&rat(0, 1)).unwrap();
        let sq = zeta2.inv().unwrap().even_sqrt().unwrap();
        assert!(g0.sub(&sq).is_zero());
        // trivial input
        let one = TruncSeries::one_like(&RatFunc::one(), 5);
        assert!(one.solve_twisted_normalizer(&rat(2, 1)).unwrap().sub(&one).is_zero());
    }

    #[test]
    fn associativity_at_truncation() {
        let a = ser(&[(1, 1), (2, 1), (3, 1), (4, 1)]);
        let b = ser(&[(1, 2), (0, 1), (-1, 1), (5, 1)]);
        let c = ser(&[(2, 1), (1, 1), (1, 3), (0, 1)]);
        let l = a.mul(&b).mul(&c);
        let r = a.mul(&b.mul(&c));
        assert!(l.sub(&r).is_zero());
    }
}
