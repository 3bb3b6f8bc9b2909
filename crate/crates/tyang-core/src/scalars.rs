//! Exact arithmetic in the field Q(i, √2).
//!
//! Elements are stored on the Q-basis {1, i, √2, i√2}. This is the smallest
//! field containing every entry of the small-rank basis-change matrices
//! (which mix i with 1/√2), so all restrictions and conjugations stay exact.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from(BigInt::from(n))
}

/// An element a + b·i + c·√2 + d·i√2 with exact rational coordinates.
///
/// `num::BigRational` keeps every coordinate in lowest terms with a positive
/// denominator, so equality of coordinates is equality of field elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    pub c1: Rat,
    pub ci: Rat,
    pub cs: Rat,
    pub cis: Rat,
}

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem {
            c1: Rat::zero(),
            ci: Rat::zero(),
            cs: Rat::zero(),
            cis: Rat::zero(),
        }
    }

    pub fn one() -> Self {
        FieldElem::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        FieldElem {
            c1: r,
            ci: Rat::zero(),
            cs: Rat::zero(),
            cis: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        FieldElem::from_rat(rat_int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        FieldElem::from_rat(rat(n, d))
    }

    /// The imaginary unit i.
    pub fn i() -> Self {
        FieldElem {
            c1: Rat::zero(),
            ci: Rat::one(),
            cs: Rat::zero(),
            cis: Rat::zero(),
        }
    }

    /// √2.
    pub fn sqrt2() -> Self {
        FieldElem {
            c1: Rat::zero(),
            ci: Rat::zero(),
            cs: Rat::one(),
            cis: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c1.is_zero() && self.ci.is_zero() && self.cs.is_zero() && self.cis.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.c1.is_one() && self.ci.is_zero() && self.cs.is_zero() && self.cis.is_zero()
    }

    /// True when the element lies in Q. Fast path for multiplication.
    pub fn is_rational(&self) -> bool {
        self.ci.is_zero() && self.cs.is_zero() && self.cis.is_zero()
    }

    /// The rational part, when `is_rational`.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.is_rational() {
            Some(&self.c1)
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        FieldElem {
            c1: &self.c1 * r,
            ci: &self.ci * r,
            cs: &self.cs * r,
            cis: &self.cis * r,
        }
    }

    /// Multiplicative inverse, computed down the tower Q(i,√2)/Q(i)/Q by
    /// multiplying with Galois conjugates; the only divisions happen in Q.
    pub fn inv(&self) -> Result<Self, DivisionByZero> {
        if self.is_zero() {
            return Err(DivisionByZero);
        }
        if self.is_rational() {
            return Ok(FieldElem::from_rat(Rat::one() / &self.c1));
        }
        // x = alpha + beta*sqrt2 with alpha, beta in Q(i).
        // conj(x) = alpha - beta*sqrt2, and n = x*conj(x) = alpha^2 - 2 beta^2 in Q(i).
        let (a, b) = (&self.c1, &self.ci); // alpha = a + b i
        let (c, d) = (&self.cs, &self.cis); // beta  = c + d i
        // n = (a^2 - b^2 - 2c^2 + 2d^2) + (2ab - 4cd) i
        let np = a * a - b * b - rat_int(2) * (c * c) + rat_int(2) * (d * d);
        let nq = rat_int(2) * (a * b) - rat_int(4) * (c * d);
        // 1/n = conj(n)/|n|^2 in Q(i)
        let nn = &np * &np + &nq * &nq;
        debug_assert!(!nn.is_zero());
        let ip = &np / &nn;
        let iq = -&nq / &nn;
        // 1/x = conj(x) * (ip + iq i)
        let conj = FieldElem {
            c1: a.clone(),
            ci: b.clone(),
            cs: -c.clone(),
            cis: -d.clone(),
        };
        let inv_n = FieldElem {
            c1: ip,
            ci: iq,
            cs: Rat::zero(),
            cis: Rat::zero(),
        };
        Ok(&conj * &inv_n)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElem::one();
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
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionByZero;

impl fmt::Display for DivisionByZero {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "division by zero")
    }
}

impl std::error::Error for DivisionByZero {}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        FieldElem {
            c1: &self.c1 + &o.c1,
            ci: &self.ci + &o.ci,
            cs: &self.cs + &o.cs,
            cis: &self.cis + &o.cis,
        }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        FieldElem {
            c1: &self.c1 - &o.c1,
            ci: &self.ci - &o.ci,
            cs: &self.cs - &o.cs,
            cis: &self.cis - &o.cis,
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            c1: -self.c1.clone(),
            ci: -self.ci.clone(),
            cs: -self.cs.clone(),
            cis: -self.cis.clone(),
        }
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        // Almost every coefficient in the artifact is plain rational; i and
        // sqrt2 only enter through the basis-change matrices.
        if self.is_rational() {
            if self.c1.is_zero() {
                return FieldElem::zero();
            }
            return o.scale(&self.c1);
        }
        if o.is_rational() {
            if o.c1.is_zero() {
                return FieldElem::zero();
            }
            return self.scale(&o.c1);
        }
        let (a, b, c, d) = (&self.c1, &self.ci, &self.cs, &self.cis);
        let (e, g, h, k) = (&o.c1, &o.ci, &o.cs, &o.cis);
        let two = rat_int(2);
        FieldElem {
            c1: a * e - b * g + &two * (c * h) - &two * (d * k),
            ci: a * g + b * e + &two * (c * k) + &two * (d * h),
            cs: a * h + c * e - b * k - d * g,
            cis: a * k + d * e + b * h + c * g,
        }
    }
}

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, o: &FieldElem) {
        self.c1 += &o.c1;
        self.ci += &o.ci;
        self.cs += &o.cs;
        self.cis += &o.cis;
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for FieldElem {
    /// Renders as "a + b*i + c*r2 + d*i*r2", omitting zero parts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut put = |f: &mut fmt::Formatter<'_>, r: &Rat, unit: &str| -> fmt::Result {
            if r.is_zero() {
                return Ok(());
            }
            let mag = r.abs();
            if first {
                if r.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if r.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if unit.is_empty() {
                write!(f, "{}", fmt_rat(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", unit)?;
            } else {
                write!(f, "{}*{}", fmt_rat(&mag), unit)?;
            }
            Ok(())
        };
        put(f, &self.c1, "")?;
        put(f, &self.ci, "i")?;
        put(f, &self.cs, "r2")?;
        put(f, &self.cis, "i*r2")?;
        Ok(())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64, d: i64) -> FieldElem {
        FieldElem::from_frac(n, d)
    }

    #[test]
    fn defining_relations() {
        let i = FieldElem::i();
        let s = FieldElem::sqrt2();
        assert_eq!(&i * &i, fe(-1, 1));
        assert_eq!(&s * &s, fe(2, 1));
        assert_eq!(&i * &s, &s * &i);
    }

    #[test]
    fn conjugate_product() {
        let one_plus_i = &FieldElem::one() + &FieldElem::i();
        let one_minus_i = &FieldElem::one() - &FieldElem::i();
        assert_eq!(&one_plus_i * &one_minus_i, fe(2, 1));
    }

    #[test]
    fn inverses() {
        assert_eq!(fe(2, 1).inv().unwrap(), fe(1, 2));
        assert_eq!(FieldElem::i().inv().unwrap(), -&FieldElem::i());
        // (1+i)^-1 = (1-i)/2, checked by multiplying back
        let x = &FieldElem::one() + &FieldElem::i();
        let xi = x.inv().unwrap();
        let expect = (&FieldElem::one() - &FieldElem::i()).scale(&rat(1, 2));
        assert_eq!(xi, expect);
        assert!((&x * &xi).is_one());
        // a messy element
        let y = &(&fe(3, 7) + &FieldElem::i().scale(&rat(-2, 5))) + &FieldElem::sqrt2().scale(&rat(1, 3));
        let y = &y + &(&FieldElem::i() * &FieldElem::sqrt2()).scale(&rat(9, 4));
        assert!((&y * &y.inv().unwrap()).is_one());
        assert!(FieldElem::zero().inv().is_err());
    }

    #[test]
    fn display_forms() {
        let x = &(&fe(1, 2) - &FieldElem::i()) + &FieldElem::sqrt2().scale(&rat(3, 4));
        assert_eq!(format!("{}", x), "1/2 - i + 3/4*r2");
        assert_eq!(format!("{}", FieldElem::zero()), "0");
        let y = &FieldElem::i() * &FieldElem::sqrt2();
        assert_eq!(format!("{}", y), "i*r2");
    }
}
